#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rabi_ccd/experiments.hpp"
#include "rabi_ccd/fock.hpp"
#include "rabi_ccd/noise.hpp"
#include "rabi_ccd/output.hpp"
#include "rabi_ccd/propagate.hpp"
#include "rabi_ccd/version.hpp"

using namespace rabi_ccd;

namespace {

struct Overrides {
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<int> trajectories;
  std::optional<int> workers;
  std::optional<int> fock;
  std::optional<int> n_out;
  std::optional<int> layer;
  std::optional<double> dt;
  std::optional<double> t_final;
  std::optional<double> tau;
  std::optional<double> t2;
  std::optional<double> tau_q;
  std::optional<double> big_r;
  std::vector<std::string> drives;
  std::string omega_tilde;
  std::string method;
  bool noiseless = false;
  bool uncorrelated = false;
};

void attach_options(CLI::App* sub, Overrides& o) {
  sub->add_option("--out", o.out, "output CSV path (default <preset>.csv)");
  sub->add_option("--seed", o.seed, "master seed for all trajectory streams");
  sub->add_option("--trajectories", o.trajectories, "ensemble size")
      ->check(CLI::PositiveNumber);
  sub->add_option("--workers", o.workers,
                  "worker threads (default: RABI_CCD_WORKERS or all cores); "
                  "results are identical for any value")
      ->check(CLI::NonNegativeNumber);
  sub->add_option("--dt", o.dt, "time step [s] (default: preset-specific)")
      ->check(CLI::PositiveNumber);
  sub->add_option("--t-final", o.t_final, "evolution time [s]")
      ->check(CLI::PositiveNumber);
  sub->add_option("--fock", o.fock, "initial mode truncation dimension")
      ->check(CLI::PositiveNumber);
  sub->add_option("--n-out", o.n_out, "target number of output rows")
      ->check(CLI::PositiveNumber);
  sub->add_option("--layer", o.layer, "protection layer 0, 1 or 2")
      ->check(CLI::Range(0, 2));
  sub->add_option("--tau", o.tau, "dephasing correlation time [s]")
      ->check(CLI::PositiveNumber);
  sub->add_option("--t2", o.t2, "bare coherence time fixing the dephasing strength [s]")
      ->check(CLI::PositiveNumber);
  sub->add_option("--tau-q", o.tau_q,
                  "single quench duration in units of the dressing period")
      ->check(CLI::PositiveNumber);
  sub->add_option("--big-r", o.big_r, "target coupling ratio R")
      ->check(CLI::PositiveNumber);
  sub->add_option("--drive", o.drives,
                  "dressing drive, e.g. 2pi*5 (kHz) or 31416 (rad/s); repeatable");
  sub->add_option("--omega-tilde", o.omega_tilde,
                  "effective mode frequency, e.g. 2pi*5 (kHz) or rad/s");
  sub->add_option("--method", o.method, "integrator core")
      ->check(CLI::IsMember({"series", "eigen"}));
  sub->add_flag("--noiseless", o.noiseless, "zero every stochastic channel");
  sub->add_flag("--uncorrelated", o.uncorrelated,
                "give each laser line its own amplitude channel");
  sub->set_config("--config", "", "INI file; keys are the long option names");
}

void apply_overrides(const Overrides& o, ExperimentSpec& s) {
  if (o.seed) s.master_seed = *o.seed;
  if (o.trajectories) s.n_traj = *o.trajectories;
  if (o.workers) {
    s.workers = *o.workers;
  } else if (const char* env = std::getenv("RABI_CCD_WORKERS")) {
    s.workers = std::max(0, std::atoi(env));
  }
  if (o.dt) s.dt = *o.dt;
  if (o.t_final) s.t_final = *o.t_final;
  if (o.fock) s.n_fock = *o.fock;
  if (o.n_out) s.n_out = *o.n_out;
  if (o.layer) s.layer = *o.layer;
  if (o.tau) s.noise.tau_m = *o.tau;
  if (o.t2) s.noise.T2 = *o.t2;
  if (o.tau_q) {
    s.tau_q_grid.clear();
    s.tau_q_units = *o.tau_q;
  }
  if (o.big_r) s.rabi_targets.R = *o.big_r;
  if (!o.drives.empty()) {
    s.qubit_drives.clear();
    for (const std::string& d : o.drives) s.qubit_drives.push_back(parse_frequency(d));
  }
  if (!o.omega_tilde.empty()) s.rabi_targets.omega_tilde = parse_frequency(o.omega_tilde);
  if (!o.method.empty()) {
    s.method = o.method == "eigen" ? StepMethod::eigendecomposition : StepMethod::series;
  }
  if (o.noiseless) s.noise.noiseless = true;
  if (o.uncorrelated) s.noise.correlated_sidebands = false;
}

std::string spectrum_path(const std::string& out) {
  const std::string suffix = ".csv";
  if (out.size() > suffix.size() &&
      out.compare(out.size() - suffix.size(), suffix.size(), suffix) == 0) {
    return out.substr(0, out.size() - suffix.size()) + ".spectrum.csv";
  }
  return out + ".spectrum.csv";
}

void report(const ResultTable& t, const std::string& path) {
  std::cout << "wrote " << path << " (" << t.axis.size() << " rows, "
            << t.columns.size() << " columns";
  if (t.n_fock_used > 0) std::cout << ", n_fock " << t.n_fock_used;
  std::cout << ")\n";
}

struct check_failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void check(bool ok, const std::string& name, const std::string& detail = "") {
  if (!ok) throw check_failure(name + (detail.empty() ? "" : ": " + detail));
  std::cout << "[ok] " << name << "\n";
}

/// Quick physical self-checks at operating scale; seconds of runtime.
void run_validate() {
  {
    auto ops = build_operator_set(24);
    const int n = 24;
    Eigen::MatrixXcd comm = ops.mode_a * ops.mode_adag - ops.mode_adag * ops.mode_a;
    double err = (comm.topLeftCorner(n - 1, n - 1) -
                  Eigen::MatrixXcd::Identity(n - 1, n - 1))
                     .cwiseAbs()
                     .maxCoeff();
    check(err < 1e-12, "ladder commutator");
    Eigen::MatrixXcd xp = ops.mode_x * ops.mode_p - ops.mode_p * ops.mode_x;
    err = (xp.topLeftCorner(n - 1, n - 1) * std::complex<double>(0.0, -1.0) -
           Eigen::MatrixXcd::Identity(n - 1, n - 1))
              .cwiseAbs()
              .maxCoeff();
    check(err < 1e-12, "position-momentum commutator");
  }
  {
    Eigen::MatrixXcd d = displacement_matrix(std::complex<double>(0.3, 0.2), 40);
    double err = (d.adjoint() * d - Eigen::MatrixXcd::Identity(40, 40))
                     .cwiseAbs()
                     .maxCoeff();
    check(err < 1e-12, "displacement unitarity");
  }
  {
    const double tau = 50e-6, T2 = 3e-3;
    const double c = diffusion_from_T2(T2, tau);
    const double dev = std::abs(analytic_coherence({tau, c, 0.0}, T2) - std::exp(-1.0));
    check(dev < 1e-12, "dephasing closed form");
  }
  {
    const double tau = 50e-6, c = 1.5e11;
    const double dt = tau / 2.0;
    const int n_chains = 2000, n_steps = 3;
    double sum = 0.0, sumsq = 0.0;
    for (int k = 0; k < n_chains; ++k) {
      std::mt19937_64 gen(derive_seed(42, 2, static_cast<std::uint64_t>(k)));
      std::normal_distribution<double> normal(0.0, 1.0);
      double x = 0.0;
      for (int s = 0; s < n_steps; ++s) x = ou_step(x, dt, {tau, c, 0.0}, normal(gen));
      sum += x;
      sumsq += x * x;
    }
    const double mean = sum / n_chains;
    const double var = sumsq / n_chains - mean * mean;
    auto ref = analytic_moments({tau, c, 0.0}, n_steps * dt);
    const double se = std::sqrt(ref.variance / n_chains);
    check(std::abs(mean - ref.mean) < 4.0 * se, "noise sampler mean");
    check(std::abs(var / ref.variance - 1.0) < 0.1, "noise sampler variance");
  }
  {
    auto spec = build_experiment("rabi");
    spec.n_traj = 1;
    spec.t_final = 1e-4;
    spec.n_fock = 8;
    spec.n_out = 4;
    spec.noise.noiseless = true;
    auto e = run_ensemble(spec);
    double fmin = 1.0;
    for (const auto& col : e.columns) {
      if (col.name == "fidelity") fmin = col.mean.minCoeff();
    }
    check(fmin > 0.999, "noiseless layer tracks ideal model");
    check(e.max_norm_error < 1e-10, "norm conservation");
    check(e.max_tail < 1e-6, "truncation tail bound");
  }
  {
    auto spec = build_experiment("rabi");
    spec.n_traj = 4;
    spec.t_final = 5e-5;
    spec.n_fock = 8;
    spec.n_out = 5;
    spec.workers = 1;
    auto a = run_ensemble(spec);
    spec.workers = 4;
    auto b = run_ensemble(spec);
    auto c = run_ensemble(spec);
    bool same = a.columns.size() == b.columns.size();
    for (std::size_t j = 0; same && j < a.columns.size(); ++j) {
      same = (a.columns[j].mean - b.columns[j].mean).cwiseAbs().maxCoeff() == 0.0 &&
             (b.columns[j].mean - c.columns[j].mean).cwiseAbs().maxCoeff() == 0.0 &&
             (a.columns[j].se - b.columns[j].se).cwiseAbs().maxCoeff() == 0.0;
    }
    check(same, "worker-count and rerun invariance");
  }
  std::cout << "validate: all checks passed\n";
}

int fail_json(const std::string& kind, const std::string& message,
              const nlohmann::json& extra = {}) {
  nlohmann::json j;
  j["error"] = {{"kind", kind}, {"message", message}};
  for (auto it = extra.begin(); it != extra.end(); ++it) j["error"][it.key()] = it.value();
  std::cerr << j.dump() << "\n";
  return 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{std::string(kVersion) +
               " - stochastic simulator for layered dressed-qubit dynamics"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  const std::vector<std::pair<std::string, std::string>> presets = {
      {"ou-demo", "sample noise path plus averaged spectrum companion"},
      {"coherence", "free dephasing decay against the closed form"},
      {"ccd-demo", "dressed-qubit coherence for three drive strengths"},
      {"rabi", "layered coupling realization, bright start"},
      {"rabi-dark", "layered coupling realization, dark start"},
      {"qpt", "quench scaling sweep (one R per run; see --big-r, --tau-q)"},
      {"dirac", "wavepacket drift and trembling motion"},
  };

  Overrides o;
  std::vector<CLI::App*> subs;
  for (const auto& [name, desc] : presets) {
    CLI::App* sub = app.add_subcommand(name, desc);
    attach_options(sub, o);
    subs.push_back(sub);
  }
  CLI::App* validate =
      app.add_subcommand("validate", "quick physical self-checks; exit 0 when sound");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (validate->parsed()) {
      run_validate();
      return 0;
    }
    std::string name;
    for (std::size_t i = 0; i < subs.size(); ++i) {
      if (subs[i]->parsed()) name = presets[i].first;
    }
    ExperimentSpec spec = build_experiment(name);
    apply_overrides(o, spec);

    ResultTable table = run_experiment(spec);
    const std::string out = o.out.empty() ? name + ".csv" : o.out;
    write_csv(table, out);
    report(table, out);

    if (spec.model == PresetModel::ou_demo) {
      ResultTable spectrum = run_ou_spectrum(spec);
      const std::string spath = spectrum_path(out);
      write_csv(spectrum, spath);
      report(spectrum, spath);
    }
    return 0;
  } catch (const truncation_error& e) {
    return fail_json("truncation", e.what(), {{"tail", e.tail}, {"time", e.t}});
  } catch (const check_failure& e) {
    (void)fail_json("validate", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    return fail_json("invalid_argument", e.what());
  } catch (const std::exception& e) {
    return fail_json("runtime", e.what());
  }
}
