#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <memory>
#include <vector>

#include "rabi_ccd/fock.hpp"
#include "rabi_ccd/noise.hpp"

namespace rabi_ccd {

/// Deterministic amplitude modulation of a drive line.
struct Envelope {
  enum class Kind {
    constant,     ///< 1
    cosine,       ///< 2 cos(mod_freq t): a tone resolving into two sidebands
    linear_ramp,  ///< t / ramp_time, clamped to 1 after ramp_time (quench)
  };
  Kind kind = Kind::constant;
  double mod_freq = 0.0;   ///< [rad/s], cosine only
  double ramp_time = 0.0;  ///< [s], linear_ramp only

  double value(double t) const;
};

/// Amplitude ramp used by the quench presets: Omega(t) = omega_f * t / tau_q.
double quench_envelope(double t, double tau_q, double omega_f);

/// One laser line of the post-optical-RWA ion Hamiltonian
///   H(t) = delta_m(t)/2 sigma_z
///        + sum_j Omega_j(t)(1+delta_j(t))/2 [sigma^+ D_j(t) e^{i(Delta_j t - phi_j)} + h.c.],
/// with D_j(t) = exp(i eta_j (a e^{-i nu t} + a^dag e^{i nu t})).
struct LaserConfig {
  double omega = 0.0;          ///< peak Rabi frequency Omega_j [rad/s]
  double delta = 0.0;          ///< detuning Delta_j from the carrier [rad/s]
  double phi = 0.0;            ///< optical phase phi_j [rad]
  double eta = 0.0;            ///< Lamb-Dicke parameter eta_j
  Envelope envelope;           ///< deterministic amplitude profile
  int amplitude_channel = -1;  ///< OU channel index for (1+delta_j), -1 = clean
};

/// Full stochastic configuration of one concatenation layer on the ion.
struct LayerConfig {
  double nu = 0.0;                        ///< trap frequency [rad/s]
  std::vector<LaserConfig> lasers;
  OUParams dephasing;                     ///< delta_m(t) [rad/s]
  std::vector<OUParams> amplitude_noise;  ///< one entry per channel index
};

/// Noise values held fixed across one integrator step.
struct NoiseSnapshot {
  double dephasing = 0.0;        ///< delta_m [rad/s]
  Eigen::ArrayXd amplitude;      ///< relative amplitude error per channel

  double amp(int channel) const {
    return channel < 0 ? 0.0 : amplitude(channel);
  }
};

/// Time-dependent Hermitian generator with a prepared fast-apply path.
/// prepare() caches the Hamiltonian at one (t, noise) point; apply() then
/// computes y = H x repeatedly (the inner loop of the series propagator).
/// Instances hold mutable workspace: share across threads only via clone().
class TimeDependentHamiltonian {
 public:
  virtual ~TimeDependentHamiltonian() = default;
  virtual int dim() const = 0;
  virtual void prepare(double t, const NoiseSnapshot& noise) = 0;
  virtual void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const = 0;
  virtual Eigen::MatrixXcd matrix(double t, const NoiseSnapshot& noise) const = 0;
  virtual std::unique_ptr<TimeDependentHamiltonian> clone() const = 0;

  /// Optional prepared factorization H = W C W^dag with W unitary diagonal,
  /// so exp(-i H dt) psi = W exp(-i C dt) W^dag psi.  The series integrator
  /// rotates the state into the W frame once per step and iterates the
  /// cheaper apply_core(), hoisting the diagonal phases out of the inner
  /// loop.  Default: no factorization; apply_core() falls back to apply().
  virtual bool has_core() const { return false; }
  virtual void to_core_frame(Eigen::VectorXcd& psi) const { (void)psi; }
  virtual void from_core_frame(Eigen::VectorXcd& psi) const { (void)psi; }
  virtual void apply_core(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
    apply(x, y);
  }
};

/// The ion Hamiltonian above. apply() exploits the block structure
///   H = [[ delta_m/2, B(t) ], [ B(t)^dag, -delta_m/2 ]],
///   B(t) = diag(e^{i nu t k}) [sum_j c_j(t) D_j(0)] diag(e^{-i nu t k}),
/// where D_j(0) = exp(i eta_j (a + a^dag)) is precomputed once, so each step
/// costs one N x N assembly plus matrix-vector products.
class LayerHamiltonian : public TimeDependentHamiltonian {
 public:
  LayerHamiltonian(const LayerConfig& config, int n_fock);

  int dim() const override { return 2 * n_fock_; }
  void prepare(double t, const NoiseSnapshot& noise) override;
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override;
  Eigen::MatrixXcd matrix(double t, const NoiseSnapshot& noise) const override;
  std::unique_ptr<TimeDependentHamiltonian> clone() const override;

  // factored frame: W = diag(u) ⊕ diag(u) commutes with the delta_m/2 block
  // diagonal, so C = [[delta_m/2, M], [M^dag, -delta_m/2]] with the bare
  // laser sum M; the inner loop then needs only two gemv per term.
  bool has_core() const override { return true; }
  void to_core_frame(Eigen::VectorXcd& psi) const override;
  void from_core_frame(Eigen::VectorXcd& psi) const override;
  void apply_core(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override;

  const LayerConfig& config() const { return config_; }
  int n_fock() const { return n_fock_; }

 private:
  LayerConfig config_;
  int n_fock_ = 0;
  std::vector<Eigen::MatrixXcd> d0_;  // D_j(0), shared across clones
  // prepared state
  double dm_half_ = 0.0;
  Eigen::VectorXcd u_;       // e^{+i nu t k}
  Eigen::MatrixXcd m_sum_;   // sum_j c_j(t) D_j(0)
  std::vector<cdouble> coeff_;        // per-prepare laser coefficients
  mutable Eigen::VectorXcd w1_, w2_;  // workspace
};

/// Two-level system under dephasing and an optional dressing drive:
///   H = delta_m(t)/2 sigma_z + Omega (1+delta(t))/2 sigma_x.
class QubitHamiltonian : public TimeDependentHamiltonian {
 public:
  QubitHamiltonian(double drive_omega, int amplitude_channel);

  int dim() const override { return 2; }
  void prepare(double t, const NoiseSnapshot& noise) override;
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override;
  Eigen::MatrixXcd matrix(double t, const NoiseSnapshot& noise) const override;
  std::unique_ptr<TimeDependentHamiltonian> clone() const override;

 private:
  double drive_omega_ = 0.0;
  int channel_ = -1;
  double dm_half_ = 0.0, drive_half_ = 0.0;
};

/// Dense H(t) = A + f(t) B (noise-free); used for ideal quench references.
class RampedDenseHamiltonian : public TimeDependentHamiltonian {
 public:
  RampedDenseHamiltonian(Eigen::MatrixXcd a, Eigen::MatrixXcd b, Envelope ramp);

  int dim() const override { return static_cast<int>(a_.rows()); }
  void prepare(double t, const NoiseSnapshot& noise) override;
  void apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const override;
  Eigen::MatrixXcd matrix(double t, const NoiseSnapshot& noise) const override;
  std::unique_ptr<TimeDependentHamiltonian> clone() const override;

 private:
  Eigen::MatrixXcd a_, b_, h_;
  Envelope ramp_;
};

/// Dense Hamiltonian of the full layer at one instant (reference path).
Eigen::MatrixXcd build_layer_hamiltonian(double t, const LayerConfig& config,
                                         const NoiseSnapshot& noise,
                                         const OperatorSet& ops);

/// ---- target models and layer parameter maps ----

enum class Model { rabi, dirac };

/// Quantum Rabi model H = (R w/2) sigma_TLS + w n - lambda sigma_perp (a+a^dag)
/// with lambda = g w sqrt(R)/2.
struct RabiTargets {
  double R = 1.0;            ///< Omega_tilde / omega_tilde
  double g = 0.25;           ///< 2 lambda / (omega_tilde sqrt(R))
  double omega_tilde = 0.0;  ///< effective mode frequency [rad/s]

  double omega_drive() const { return R * omega_tilde; }
  double lambda() const;
};

/// 1+1D Dirac model H = c_d sigma_perp p + (r c_d) sigma_TLS with
/// p = i(a^dag - a)/2; mass term m c^2 = r * c_d.
struct DiracTargets {
  double r = 2.0;      ///< m c^2 / c_d
  double c_d = 0.0;    ///< kinetic coefficient [rad/s]

  double mc2() const { return r * c_d; }
};

/// Fixed hardware context for the parameter maps.
struct HardwareParams {
  double nu = 2.0 * M_PI * 1.36e6;            ///< trap frequency [rad/s]
  double eta12 = 0.06;                        ///< sideband-pair Lamb-Dicke
  double eta_ab = 0.01;                       ///< carrier-drive Lamb-Dicke
  double omega_strong = 2.0 * M_PI * 200e3;   ///< layer-2 first drive [rad/s]
};

/// Passive frame G(t) connecting the engineered evolution to the ideal model:
///   psi_sim(t) ~ G(t) psi_ideal(t),
///   G(t) = e^{-i sx_rate t sigma_x/2} e^{+i sz_rate t sigma_z/2} e^{+i mode_rate t n}.
/// Observables are measured by pulling the simulated state back, G^dag psi_sim.
struct FrameMap {
  double sz_rate = 0.0;
  double mode_rate = 0.0;
  double sx_rate = 0.0;

  /// Apply G(t) (direction +1) or G(t)^dag (direction -1).
  QuantumState apply(const QuantumState& state, double t, int direction) const;
};

/// Everything the layer map produces: the laser table realizing the target
/// model at the given concatenation layer, the ideal-model axes, and the
/// frame connecting them.
struct LayerRealization {
  Model model = Model::rabi;
  int layer = 0;
  std::vector<LaserConfig> lasers;  ///< noise channels not yet assigned
  double nu = 0.0;
  FrameMap frame;
  char tls_axis = 'z';   ///< ideal sigma_TLS axis
  char perp_axis = 'x';  ///< ideal coupling axis
  RabiTargets rabi;
  DiracTargets dirac;
};

/// Laser table, axes and frame for one (model, layer) pair; layer in {0,1,2}.
/// The sideband pair uses eta12; carrier drives use eta_ab.  Layer 2 keeps a
/// single sideband line plus a strong first drive and a modulated second one.
LayerRealization params_from_targets(Model model, int layer, const RabiTargets& rabi,
                                     const DiracTargets& dirac,
                                     const HardwareParams& hardware);

/// Dense ideal-model Hamiltonians on the 2 n_fock space.
Eigen::MatrixXcd ideal_rabi_hamiltonian(const RabiTargets& t, char tls_axis,
                                        char perp_axis, const OperatorSet& ops,
                                        double coupling_scale = 1.0);
Eigen::MatrixXcd ideal_dirac_hamiltonian(const DiracTargets& t, char tls_axis,
                                         char perp_axis, const OperatorSet& ops);

}  // namespace rabi_ccd
