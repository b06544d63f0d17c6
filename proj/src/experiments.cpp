#include "rabi_ccd/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "rabi_ccd/observables.hpp"

namespace rabi_ccd {

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index) {
  std::uint64_t z = base + 0x9E3779B97F4A7C15ULL * (tag * 0x100000001ULL + index + 1);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

constexpr double kTwoPi = 2.0 * M_PI;

OUParams dephasing_params(const NoiseSpec& n) {
  return {n.tau_m, diffusion_from_T2(n.T2, n.tau_m), 0.0};
}

OUParams amplitude_params(const NoiseSpec& n) {
  return {n.tau_omega, 2.0 * n.p * n.p / n.tau_omega, 0.0};
}

IntegrationPlan make_plan(double dt, double t_final, int n_out, StepMethod method) {
  if (dt <= 0.0 || t_final <= 0.0) {
    throw std::invalid_argument("plan: dt and t_final must be > 0");
  }
  IntegrationPlan plan;
  plan.n_steps = std::llround(t_final / dt);
  if (plan.n_steps < 1) plan.n_steps = 1;
  plan.dt = t_final / static_cast<double>(plan.n_steps);
  plan.output_stride = std::max<long>(1, plan.n_steps / std::max(1, n_out));
  plan.method = method;
  return plan;
}

double default_ion_dt(const HardwareParams& hw) { return kTwoPi / (64.0 * hw.nu); }

double omega_tilde_for(const ExperimentSpec& spec) {
  double wt = spec.rabi_targets.omega_tilde;
  if (wt == 0.0 && spec.quench) {
    // qpt preset default: slower effective mode at the second layer
    wt = spec.layer < 2 ? kTwoPi * 1e3 : kTwoPi * 400.0;
  }
  return wt;
}

/// One named per-trajectory observable.
struct Observable {
  std::string name;
  ObservableFn fn;
};

/// Everything needed to run one uniform ensemble at a fixed truncation.
struct RunSetup {
  std::unique_ptr<TimeDependentHamiltonian> proto;
  QuantumState initial;
  IntegrationPlan plan;
  OUParams dephasing;
  std::vector<OUParams> amplitude;
  bool noiseless = false;
  std::vector<Observable> observables;
  std::function<std::vector<ResultColumn>(const std::vector<double>&)> make_references;
  int n_fock = 0;
};

int axis_sign(InitialStateLabel label) {
  return label == InitialStateLabel::tls_down ? -1 : 1;
}

char axis_of(const LayerRealization& r, InitialStateLabel label) {
  return label == InitialStateLabel::perp_up ? r.perp_axis : r.tls_axis;
}

void attach_noise_channels(LayerConfig& config, const HardwareParams& hw,
                           const NoiseSpec& noise) {
  config.dephasing = dephasing_params(noise);
  config.amplitude_noise.clear();
  const OUParams amp = amplitude_params(noise);
  int shared_channel = -1;
  for (LaserConfig& l : config.lasers) {
    if (noise.correlated_sidebands && l.eta == hw.eta12) {
      if (shared_channel < 0) {
        shared_channel = static_cast<int>(config.amplitude_noise.size());
        config.amplitude_noise.push_back(amp);
      }
      l.amplitude_channel = shared_channel;
    } else {
      l.amplitude_channel = static_cast<int>(config.amplitude_noise.size());
      config.amplitude_noise.push_back(amp);
    }
  }
}

}  // namespace

ResolvedIon resolve_ion(const ExperimentSpec& spec) {
  if (spec.model != PresetModel::rabi && spec.model != PresetModel::dirac) {
    throw std::invalid_argument("resolve_ion: not an ion-model spec");
  }
  if (spec.n_fock < 2) throw std::invalid_argument("resolve_ion: n_fock must be >= 2");

  ExperimentSpec s = spec;
  s.rabi_targets.omega_tilde = omega_tilde_for(spec);

  ResolvedIon out;
  out.realization = params_from_targets(
      s.model == PresetModel::rabi ? Model::rabi : Model::dirac, s.layer,
      s.rabi_targets, s.dirac_targets, s.hardware);
  out.n_fock = s.n_fock;

  double t_final = s.t_final;
  if (s.quench) {
    if (s.tau_q_units <= 0.0) throw std::invalid_argument("quench: tau_q_units not set");
    if (s.model != PresetModel::rabi) throw std::invalid_argument("quench: rabi only");
    if (s.hardware.eta12 == s.hardware.eta_ab) {
      throw std::invalid_argument("quench: eta12 must differ from eta_ab");
    }
    t_final = s.tau_q_units * kTwoPi / s.rabi_targets.omega_tilde;
  }
  if (t_final <= 0.0) throw std::invalid_argument("t_final must be > 0");

  out.config.nu = s.hardware.nu;
  out.config.lasers = out.realization.lasers;
  if (s.quench) {
    // ramp the coupling (sideband) lines linearly from 0 to full strength
    for (LaserConfig& l : out.config.lasers) {
      if (l.eta == s.hardware.eta12) {
        l.envelope = Envelope{Envelope::Kind::linear_ramp, 0.0, t_final};
      }
    }
  }
  attach_noise_channels(out.config, s.hardware, s.noise);

  const double dt = s.dt > 0.0 ? s.dt : default_ion_dt(s.hardware);
  if (dt * s.hardware.nu > kTwoPi / 32.0 * (1.0 + 1e-12)) {
    throw std::invalid_argument("dt too coarse: dt * nu must be <= 2*pi/32");
  }
  out.plan = make_plan(dt, t_final, s.n_out, s.method);

  out.initial = ground_mode_state(axis_of(out.realization, s.initial),
                                  axis_sign(s.initial), s.n_fock);
  return out;
}

namespace {

RunSetup resolve_qubit_run(const ExperimentSpec& spec, double drive) {
  RunSetup setup;
  setup.n_fock = 1;
  setup.dephasing = dephasing_params(spec.noise);
  setup.noiseless = spec.noise.noiseless;
  int channel = -1;
  if (drive > 0.0) {
    channel = 0;
    setup.amplitude.push_back(amplitude_params(spec.noise));
  }
  setup.proto = std::make_unique<QubitHamiltonian>(drive, channel);
  setup.initial.n_fock = 1;
  setup.initial.amplitudes.resize(2);
  const double r = 1.0 / std::sqrt(2.0);
  setup.initial.amplitudes << r, r;

  const double dt = spec.dt > 0.0 ? spec.dt : 1e-6;
  setup.plan = make_plan(dt, spec.t_final, spec.n_out, spec.method);
  setup.plan.tail_levels = 0;  // no mode truncation in the two-level path

  setup.observables.push_back(
      {"sx", [](double, const QuantumState& s) {
         return 2.0 * std::real(std::conj(s.amplitudes(0)) * s.amplitudes(1));
       }});
  if (drive == 0.0) {
    const OUParams deph = setup.dephasing;
    setup.make_references = [deph](const std::vector<double>& times) {
      ResultColumn col;
      col.name = "coherence_analytic";
      col.mean.resize(static_cast<long>(times.size()));
      for (std::size_t i = 0; i < times.size(); ++i) {
        col.mean(static_cast<long>(i)) = analytic_coherence(deph, times[i]);
      }
      col.se = Eigen::VectorXd::Zero(col.mean.size());
      return std::vector<ResultColumn>{col};
    };
  }
  return setup;
}

RunSetup resolve_ion_run(const ExperimentSpec& spec, int n_fock) {
  ExperimentSpec s = spec;
  s.n_fock = n_fock;
  ResolvedIon ion = resolve_ion(s);

  RunSetup setup;
  setup.n_fock = n_fock;
  setup.proto = std::make_unique<LayerHamiltonian>(ion.config, n_fock);
  setup.initial = ion.initial;
  setup.plan = ion.plan;
  setup.dephasing = ion.config.dephasing;
  setup.amplitude = ion.config.amplitude_noise;
  setup.noiseless = spec.noise.noiseless;

  auto ops = std::make_shared<OperatorSet>(build_operator_set(n_fock));
  const FrameMap frame = ion.realization.frame;
  const char tls = ion.realization.tls_axis;
  const char perp = ion.realization.perp_axis;
  const double wt = omega_tilde_for(spec);

  if (spec.quench) {
    // end-of-quench order parameter, measured in the ideal frame
    setup.observables.push_back(
        {"sigma_tls", [ops, frame, tls](double t, const QuantumState& st) {
           return expectation(frame.apply(st, t, -1), ops->sigma(tls));
         }});
    return setup;
  }

  if (spec.model == PresetModel::rabi) {
    RabiTargets targets = spec.rabi_targets;
    targets.omega_tilde = wt;
    auto ideal = std::make_shared<IdealReference>(
        ideal_rabi_hamiltonian(targets, tls, perp, *ops), ion.initial);
    setup.observables.push_back(
        {"fidelity", [ideal, frame](double t, const QuantumState& st) {
           return fidelity(ideal->state_at(t), frame.apply(st, t, -1));
         }});
    setup.observables.push_back(
        {"pop_tls", [ops, frame, tls](double t, const QuantumState& st) {
           return 0.5 * (1.0 + expectation(frame.apply(st, t, -1), ops->sigma(tls)));
         }});
    setup.make_references = [ideal, ops, tls](const std::vector<double>& times) {
      ResultColumn col;
      col.name = "pop_ideal";
      col.mean.resize(static_cast<long>(times.size()));
      for (std::size_t i = 0; i < times.size(); ++i) {
        col.mean(static_cast<long>(i)) =
            0.5 * (1.0 + expectation(ideal->state_at(times[i]), ops->sigma(tls)));
      }
      col.se = Eigen::VectorXd::Zero(col.mean.size());
      return std::vector<ResultColumn>{col};
    };
  } else {
    auto ideal = std::make_shared<IdealReference>(
        ideal_dirac_hamiltonian(spec.dirac_targets, tls, perp, *ops), ion.initial);
    setup.observables.push_back(
        {"x", [ops](double, const QuantumState& st) { return expectation(st, ops->x); }});
    setup.observables.push_back(
        {"fidelity", [ideal, frame](double t, const QuantumState& st) {
           return fidelity(ideal->state_at(t), frame.apply(st, t, -1));
         }});
    setup.make_references = [ideal, ops](const std::vector<double>& times) {
      ResultColumn col;
      col.name = "x_ideal";
      col.mean.resize(static_cast<long>(times.size()));
      for (std::size_t i = 0; i < times.size(); ++i) {
        col.mean(static_cast<long>(i)) = expectation(ideal->state_at(times[i]), ops->x);
      }
      col.se = Eigen::VectorXd::Zero(col.mean.size());
      return std::vector<ResultColumn>{col};
    };
  }
  return setup;
}

RunSetup resolve_run(const ExperimentSpec& spec, int n_fock) {
  switch (spec.model) {
    case PresetModel::qubit:
      if (spec.qubit_drives.size() != 1) {
        throw std::invalid_argument("run_ensemble: qubit spec needs exactly one drive");
      }
      return resolve_qubit_run(spec, spec.qubit_drives[0]);
    case PresetModel::rabi:
    case PresetModel::dirac:
      return resolve_ion_run(spec, n_fock);
    case PresetModel::ou_demo:
      throw std::invalid_argument("run_ensemble: ou-demo has no ensemble; use run_experiment");
  }
  throw std::logic_error("unknown model");
}

struct TrajectoryOutput {
  Eigen::MatrixXd rows;
  double max_tail = 0.0;
  double max_norm_error = 0.0;
};

EnsembleResult run_ensemble_at(const ExperimentSpec& spec, const RunSetup& setup) {
  const int n = spec.n_traj;
  if (n < 1) throw std::invalid_argument("run_ensemble: n_traj must be >= 1");

  std::vector<std::uint64_t> seeds(n);
  for (int k = 0; k < n; ++k) seeds[k] = derive_seed(spec.master_seed, 0, k);

  std::vector<ObservableFn> fns;
  for (const Observable& ob : setup.observables) fns.push_back(ob.fn);

  std::vector<TrajectoryOutput> outputs(n);
  std::vector<double> times;
  std::atomic<int> next{0};
  std::atomic<bool> abort{false};
  std::exception_ptr error;
  std::mutex error_mutex;

  auto worker = [&]() {
    std::unique_ptr<TimeDependentHamiltonian> h = setup.proto->clone();
    while (!abort.load()) {
      const int idx = next.fetch_add(1);
      if (idx >= n) break;
      try {
        std::unique_ptr<NoiseDriver> driver;
        if (setup.noiseless) {
          driver = std::make_unique<ZeroNoiseDriver>(
              static_cast<int>(setup.amplitude.size()));
        } else {
          driver = std::make_unique<OUNoiseDriver>(setup.dephasing, setup.amplitude,
                                                   seeds[idx]);
        }
        TrajectoryResult r = evolve(setup.initial, *h, setup.plan, *driver, fns);
        outputs[idx].rows = std::move(r.observables);
        outputs[idx].max_tail = r.max_tail;
        outputs[idx].max_norm_error = r.max_norm_error;
        if (idx == 0) times = std::move(r.times);
      } catch (const truncation_error& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          error = std::make_exception_ptr(truncation_error(
              "trajectory " + std::to_string(idx) + " (seed " +
                  std::to_string(seeds[idx]) + "): " + e.what(),
              e.tail, e.t));
        }
        abort.store(true);
      } catch (const std::exception& e) {
        std::lock_guard<std::mutex> lock(error_mutex);
        if (!error) {
          error = std::make_exception_ptr(std::runtime_error(
              "trajectory " + std::to_string(idx) + " (seed " +
              std::to_string(seeds[idx]) + "): " + e.what()));
        }
        abort.store(true);
      }
    }
  };

  int n_workers = spec.workers > 0
                      ? spec.workers
                      : std::max(1u, std::thread::hardware_concurrency());
  n_workers = std::min(n_workers, n);
  if (n_workers <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(n_workers);
    for (int w = 0; w < n_workers; ++w) pool.emplace_back(worker);
    for (std::thread& th : pool) th.join();
  }
  if (error) std::rethrow_exception(error);

  // fixed-order reduction: identical bytes for any worker count
  const long n_out = outputs[0].rows.rows();
  const long n_obs = outputs[0].rows.cols();
  EnsembleResult result;
  result.times = times;
  result.n_traj = n;
  result.master_seed = spec.master_seed;
  result.child_seeds = seeds;
  result.n_fock_used = setup.n_fock;

  Eigen::MatrixXd mean = Eigen::MatrixXd::Zero(n_out, n_obs);
  for (int k = 0; k < n; ++k) mean += outputs[k].rows;
  mean /= static_cast<double>(n);
  Eigen::MatrixXd var = Eigen::MatrixXd::Zero(n_out, n_obs);
  if (n > 1) {
    for (int k = 0; k < n; ++k) {
      var += (outputs[k].rows - mean).array().square().matrix();
    }
    var /= static_cast<double>(n - 1);
  }
  for (int k = 0; k < n; ++k) {
    result.max_tail = std::max(result.max_tail, outputs[k].max_tail);
    result.max_norm_error = std::max(result.max_norm_error, outputs[k].max_norm_error);
  }

  for (long j = 0; j < n_obs; ++j) {
    ResultColumn col;
    col.name = setup.observables[static_cast<std::size_t>(j)].name;
    col.mean = mean.col(j);
    col.se = (var.col(j) / static_cast<double>(n)).cwiseSqrt();
    result.columns.push_back(std::move(col));
  }
  if (setup.make_references) {
    for (ResultColumn& col : setup.make_references(result.times)) {
      result.columns.push_back(std::move(col));
    }
  }
  return result;
}

}  // namespace

EnsembleResult run_ensemble(const ExperimentSpec& spec) {
  int n_fock = spec.model == PresetModel::qubit ? 1 : spec.n_fock;
  for (;;) {
    RunSetup setup = resolve_run(spec, n_fock);
    try {
      return run_ensemble_at(spec, setup);
    } catch (const truncation_error&) {
      const bool can_grow = spec.adaptive_fock && spec.model != PresetModel::qubit &&
                            2 * n_fock <= spec.max_fock;
      if (!can_grow) throw;
      n_fock *= 2;
    }
  }
}

namespace {

std::string drive_label(double omega) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", omega / (kTwoPi * 1e3));
  return std::string(buf) + "kHz";
}

ResultTable table_from_ensemble(const ExperimentSpec& spec, EnsembleResult&& e) {
  ResultTable t;
  t.axis_name = "time_s";
  t.axis = std::move(e.times);
  t.columns = std::move(e.columns);
  t.spec = spec;
  t.child_seeds = std::move(e.child_seeds);
  t.n_fock_used = e.n_fock_used;
  t.max_tail = e.max_tail;
  t.max_norm_error = e.max_norm_error;
  return t;
}

ResultTable run_ou_path(const ExperimentSpec& spec) {
  const double dt = spec.dt > 0.0 ? spec.dt : 1e-6;
  const std::size_t n = static_cast<std::size_t>(std::llround(spec.t_final / dt)) + 1;
  NoiseRealization path =
      ou_realization(spec.ou, dt, n, derive_seed(spec.master_seed, 2, 0));
  ResultTable t;
  t.spec = spec;
  t.axis_name = "time_s";
  ResultColumn x{"x", Eigen::VectorXd(static_cast<long>(n)),
                 Eigen::VectorXd::Zero(static_cast<long>(n))};
  ResultColumn sd{"std_analytic", Eigen::VectorXd(static_cast<long>(n)),
                  Eigen::VectorXd::Zero(static_cast<long>(n))};
  for (std::size_t k = 0; k < n; ++k) {
    const double time = static_cast<double>(k) * dt;
    t.axis.push_back(time);
    x.mean(static_cast<long>(k)) = path.samples[k];
    sd.mean(static_cast<long>(k)) = std::sqrt(analytic_moments(spec.ou, time).variance);
  }
  t.columns = {std::move(x), std::move(sd)};
  return t;
}

ResultTable run_ccd_demo(const ExperimentSpec& spec) {
  ResultTable t;
  t.spec = spec;
  t.axis_name = "time_s";
  for (std::size_t m = 0; m < spec.qubit_drives.size(); ++m) {
    ExperimentSpec sub = spec;
    sub.qubit_drives = {spec.qubit_drives[m]};
    sub.master_seed = derive_seed(spec.master_seed, 1, m);
    EnsembleResult e = run_ensemble(sub);
    if (t.axis.empty()) {
      t.axis = e.times;
    } else if (t.axis != e.times) {
      throw std::logic_error("ccd-demo: sub-ensemble time grids differ");
    }
    for (ResultColumn& col : e.columns) {
      col.name += "_" + drive_label(spec.qubit_drives[m]);
      t.columns.push_back(std::move(col));
    }
    t.child_seeds.insert(t.child_seeds.end(), e.child_seeds.begin(),
                         e.child_seeds.end());
    t.max_tail = std::max(t.max_tail, e.max_tail);
    t.max_norm_error = std::max(t.max_norm_error, e.max_norm_error);
    t.n_fock_used = e.n_fock_used;
  }
  return t;
}

ResultTable run_qpt(const ExperimentSpec& spec) {
  ExperimentSpec base = spec;
  if (base.tau_q_grid.empty()) {
    if (base.tau_q_units <= 0.0) {
      throw std::invalid_argument("qpt: no tau_q grid or value set");
    }
    base.tau_q_grid = {base.tau_q_units};
  }
  base.rabi_targets.omega_tilde = omega_tilde_for(spec);
  base.quench = true;

  // ground-state order parameter of the final Hamiltonian, at a truncation
  // well beyond the adaptive cap's half
  const int gs_fock = 120;
  OperatorSet gs_ops = build_operator_set(gs_fock);
  const LayerRealization real = params_from_targets(
      Model::rabi, base.layer, base.rabi_targets, base.dirac_targets, base.hardware);
  const GroundState gs =
      rabi_ground_state(base.rabi_targets, real.tls_axis, real.perp_axis, gs_ops);
  const double sigma_gs = expectation(gs.state, gs_ops.sigma(real.tls_axis));

  const std::size_t m = base.tau_q_grid.size();
  ResultTable t;
  t.spec = base;
  t.axis_name = "time_s";  // quench duration tau_q in seconds
  ResultColumn units{"tau_q_units", Eigen::VectorXd(m), Eigen::VectorXd::Zero(m)};
  ResultColumn bigt{"T", Eigen::VectorXd(m), Eigen::VectorXd::Zero(m)};
  ResultColumn sig{"sigma_tls", Eigen::VectorXd(m), Eigen::VectorXd(m)};
  ResultColumn scal{"S", Eigen::VectorXd(m), Eigen::VectorXd(m)};
  for (std::size_t i = 0; i < m; ++i) {
    ExperimentSpec sub = base;
    sub.tau_q_units = base.tau_q_grid[i];
    sub.tau_q_grid.clear();
    sub.master_seed = derive_seed(spec.master_seed, 1, i);
    EnsembleResult e = run_ensemble(sub);
    const long last = static_cast<long>(e.times.size()) - 1;
    const double sigma_mean = e.columns[0].mean(last);
    const double sigma_se = e.columns[0].se(last);
    const ScalingPoint point = scaling_point(base.rabi_targets.R, sub.tau_q_units,
                                             sigma_mean, sigma_se, sigma_gs);
    t.axis.push_back(e.times[static_cast<std::size_t>(last)]);
    units.mean(static_cast<long>(i)) = point.tau_q_units;
    bigt.mean(static_cast<long>(i)) = point.T;
    sig.mean(static_cast<long>(i)) = sigma_mean;
    sig.se(static_cast<long>(i)) = sigma_se;
    scal.mean(static_cast<long>(i)) = point.S;
    scal.se(static_cast<long>(i)) = point.stderr_S;
    t.child_seeds.insert(t.child_seeds.end(), e.child_seeds.begin(),
                         e.child_seeds.end());
    t.max_tail = std::max(t.max_tail, e.max_tail);
    t.max_norm_error = std::max(t.max_norm_error, e.max_norm_error);
    t.n_fock_used = std::max(t.n_fock_used, e.n_fock_used);
  }
  t.columns = {std::move(units), std::move(bigt), std::move(sig), std::move(scal)};
  return t;
}

}  // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
  switch (spec.model) {
    case PresetModel::ou_demo:
      return run_ou_path(spec);
    case PresetModel::qubit:
      if (spec.qubit_drives.size() > 1) return run_ccd_demo(spec);
      return table_from_ensemble(spec, run_ensemble(spec));
    case PresetModel::rabi:
      if (!spec.tau_q_grid.empty() || spec.quench) return run_qpt(spec);
      return table_from_ensemble(spec, run_ensemble(spec));
    case PresetModel::dirac:
      return table_from_ensemble(spec, run_ensemble(spec));
  }
  throw std::logic_error("unknown model");
}

ResultTable run_ou_spectrum(const ExperimentSpec& spec) {
  if (spec.model != PresetModel::ou_demo) {
    throw std::invalid_argument("run_ou_spectrum: ou-demo spec required");
  }
  const double record_length = 0.1;
  const std::size_t m_samples = 1u << 18;
  const double dt = record_length / static_cast<double>(m_samples);
  std::vector<SpectralEstimate> spectra;
  spectra.reserve(spec.n_traj);
  for (int k = 0; k < spec.n_traj; ++k) {
    NoiseRealization r =
        ou_realization(spec.ou, dt, m_samples, derive_seed(spec.master_seed, 2, 1 + k));
    spectra.push_back(periodogram(r));
  }
  SpectralEstimate avg = average_spectra(spectra);

  ResultTable t;
  t.spec = spec;
  t.axis_name = "frequency_hz";
  const long n_bins = static_cast<long>(avg.frequencies.size());
  ResultColumn power{"power", Eigen::VectorXd(n_bins), Eigen::VectorXd::Zero(n_bins)};
  ResultColumn analytic{"power_analytic", Eigen::VectorXd(n_bins),
                        Eigen::VectorXd::Zero(n_bins)};
  for (long k = 0; k < n_bins; ++k) {
    t.axis.push_back(avg.frequencies[static_cast<std::size_t>(k)]);
    power.mean(k) = avg.power[static_cast<std::size_t>(k)];
    analytic.mean(k) = spectral_density_analytic(spec.ou, avg.frequencies[static_cast<std::size_t>(k)]);
  }
  t.columns = {std::move(power), std::move(analytic)};
  return t;
}

double ideal_quench_sigma(const RabiTargets& final_targets, char tls_axis,
                          char perp_axis, double tau_q_seconds, int n_fock, double dt) {
  OperatorSet ops = build_operator_set(n_fock);
  const Eigen::MatrixXcd h_free =
      ideal_rabi_hamiltonian(final_targets, tls_axis, perp_axis, ops, 0.0);
  const Eigen::MatrixXcd h_coupling =
      ideal_rabi_hamiltonian(final_targets, tls_axis, perp_axis, ops, 1.0) - h_free;
  RampedDenseHamiltonian h(h_free, h_coupling,
                           Envelope{Envelope::Kind::linear_ramp, 0.0, tau_q_seconds});
  IntegrationPlan plan = make_plan(dt, tau_q_seconds, 1, StepMethod::series);
  ZeroNoiseDriver noise;
  const QuantumState initial = ground_mode_state(tls_axis, -1, n_fock);
  TrajectoryResult r = evolve(initial, h, plan, noise, {});
  return expectation(r.final_state, ops.sigma(tls_axis));
}

ExperimentSpec build_experiment(const std::string& name) {
  ExperimentSpec s;
  s.name = name;
  if (name == "ou-demo") {
    s.model = PresetModel::ou_demo;
    s.ou = {50e-6, 1.5e11, 0.0};
    s.t_final = 5e-3;
    s.dt = 1e-6;
    s.n_traj = 100;  // spectrum averages
    return s;
  }
  if (name == "coherence") {
    s.model = PresetModel::qubit;
    s.qubit_drives = {0.0};
    s.n_traj = 1000;
    s.t_final = 6e-3;
    s.dt = 1e-6;
    s.n_out = 60;
    return s;
  }
  if (name == "ccd-demo") {
    s.model = PresetModel::qubit;
    s.qubit_drives = {kTwoPi * 0.5e3, kTwoPi * 5e3, kTwoPi * 50e3};
    s.n_traj = 500;
    s.t_final = 3e-3;
    s.dt = 1e-6;
    s.n_out = 60;
    return s;
  }
  if (name == "rabi" || name == "rabi-dark") {
    s.model = PresetModel::rabi;
    s.layer = 1;
    s.rabi_targets = {1.0, 0.25, kTwoPi * 5e3};
    s.t_final = 8e-3;
    s.n_traj = 200;
    s.n_fock = 30;
    s.n_out = 80;
    s.initial =
        name == "rabi" ? InitialStateLabel::tls_up : InitialStateLabel::tls_down;
    return s;
  }
  if (name == "qpt") {
    s.model = PresetModel::rabi;
    s.layer = 1;
    s.rabi_targets = {50.0, 1.0, 0.0};  // omega_tilde 0 = per-layer default
    s.quench = true;
    s.n_traj = 50;
    s.n_fock = 60;
    s.n_out = 1;
    s.initial = InitialStateLabel::tls_down;
    const double lo = 0.02, hi = 8.6;
    for (int i = 0; i < 6; ++i) {
      s.tau_q_grid.push_back(lo * std::pow(hi / lo, static_cast<double>(i) / 5.0));
    }
    return s;
  }
  if (name == "dirac") {
    s.model = PresetModel::dirac;
    s.layer = 1;
    s.dirac_targets = {2.0, kTwoPi * 1.25e3};
    s.t_final = 2.4e-3;
    s.n_traj = 200;
    s.n_fock = 60;
    s.n_out = 80;
    s.initial = InitialStateLabel::perp_up;
    return s;
  }
  throw std::invalid_argument("unknown preset '" + name + "'");
}

}  // namespace rabi_ccd
