#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rabi_ccd/hamiltonian.hpp"
#include "rabi_ccd/noise.hpp"
#include "rabi_ccd/propagate.hpp"

namespace rabi_ccd {

enum class PresetModel { rabi, dirac, qubit, ou_demo };
enum class InitialStateLabel { tls_up, tls_down, perp_up };

/// Stochastic-channel configuration shared by all presets.
struct NoiseSpec {
  double tau_m = 50e-6;     ///< dephasing correlation time [s]
  double T2 = 3e-3;         ///< bare coherence time fixing the dephasing diffusion [s]
  double tau_omega = 1e-3;  ///< amplitude-noise correlation time [s]
  double p = 1e-3;          ///< relative amplitude error; c_omega = 2 p^2 / tau_omega
  bool correlated_sidebands = true;  ///< sideband pair shares one amplitude channel
  bool noiseless = false;            ///< zero every channel (RWA-validity baseline)
};

/// Fully resolved description of one experiment run.
struct ExperimentSpec {
  std::string name;
  PresetModel model = PresetModel::rabi;
  int layer = 1;

  RabiTargets rabi_targets;
  DiracTargets dirac_targets;
  HardwareParams hardware;
  NoiseSpec noise;
  InitialStateLabel initial = InitialStateLabel::tls_up;

  std::vector<double> qubit_drives;  ///< dressing drives [rad/s]; qubit model

  bool quench = false;               ///< ramp the coupling lasers 0 -> full
  double tau_q_units = 0.0;          ///< quench time in units of 2 pi / omega_tilde
  std::vector<double> tau_q_grid;    ///< grid of tau_q_units (qpt preset)

  double dt = 0.0;       ///< 0 = preset default
  double t_final = 0.0;  ///< [s]; quench runs derive it from tau_q
  int n_out = 60;        ///< target number of output intervals
  int n_fock = 0;
  bool adaptive_fock = true;  ///< double n_fock (same seeds) on truncation failure
  int max_fock = 240;
  StepMethod method = StepMethod::series;

  int n_traj = 1;
  std::uint64_t master_seed = 12345;
  int workers = 0;  ///< 0 = hardware concurrency

  OUParams ou;  ///< ou-demo process parameters
};

struct ResultColumn {
  std::string name;
  Eigen::VectorXd mean;
  Eigen::VectorXd se;
};

/// Ensemble average of one uniform trajectory ensemble.
struct EnsembleResult {
  std::vector<double> times;
  std::vector<ResultColumn> columns;
  int n_traj = 0;
  std::uint64_t master_seed = 0;
  std::vector<std::uint64_t> child_seeds;
  int n_fock_used = 0;
  double max_tail = 0.0;
  double max_norm_error = 0.0;
};

/// Generic output table: one axis plus mean/se columns, ready for CSV.
struct ResultTable {
  std::string axis_name = "time_s";
  std::vector<double> axis;
  std::vector<ResultColumn> columns;
  ExperimentSpec spec;
  std::vector<std::uint64_t> child_seeds;
  int n_fock_used = 0;
  double max_tail = 0.0;
  double max_norm_error = 0.0;
};

/// Deterministic child-seed derivation (splitmix-style mixing); tag
/// separates independent stream families (0 = trajectories, 1 =
/// sub-ensembles, 2 = standalone noise realizations).
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t tag, std::uint64_t index);

/// Named presets with desk-scale ensemble defaults:
///   ou-demo    sample OU path + averaged periodogram
///   coherence  free dephasing decay vs closed form (1000 trajectories)
///   ccd-demo   dressed-qubit coherence for drives 2pi x {0.5, 5, 50} kHz
///   rabi       layered quantum Rabi realization, R=1, g=1/4, 8 ms
///   rabi-dark  same starting from the dark state |0>|down_TLS>
///   qpt        quench scaling runs (R=50 default, layer 1, 6-point grid)
///   dirac      Zitterbewegung, r=2, 2.4 ms
ExperimentSpec build_experiment(const std::string& name);

/// Ion-model specs resolved to concrete simulation inputs.
struct ResolvedIon {
  LayerRealization realization;
  LayerConfig config;       ///< lasers with noise channels attached
  IntegrationPlan plan;
  QuantumState initial;
  int n_fock = 0;
};
ResolvedIon resolve_ion(const ExperimentSpec& spec);

/// Run one uniform ensemble (qubit model: spec.qubit_drives must hold
/// exactly one entry; quench runs: spec.tau_q_units set).  Trajectory k
/// uses derive_seed(master_seed, 0, k); reduction is sequential in k, so
/// output is identical for any worker count.  A truncation failure either
/// doubles n_fock (adaptive) or aborts with the trajectory index and seed.
EnsembleResult run_ensemble(const ExperimentSpec& spec);

/// Dispatch a preset to its output table (loops drive lists / quench grids).
ResultTable run_experiment(const ExperimentSpec& spec);

/// Companion table for ou-demo: ensemble-averaged periodogram with the
/// analytic density alongside.
ResultTable run_ou_spectrum(const ExperimentSpec& spec);

/// Final <sigma_TLS> of the noiseless ideal-model quench (coupling ramped
/// linearly over tau_q seconds), integrated with the series stepper.
double ideal_quench_sigma(const RabiTargets& final_targets, char tls_axis,
                          char perp_axis, double tau_q_seconds, int n_fock, double dt);

}  // namespace rabi_ccd
