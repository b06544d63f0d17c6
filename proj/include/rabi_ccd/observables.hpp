#pragma once

#include <vector>

#include "rabi_ccd/fock.hpp"
#include "rabi_ccd/hamiltonian.hpp"

namespace rabi_ccd {

/// <state|op|state>, real part; op must be Hermitian for this to be the
/// physical expectation value.
double expectation(const QuantumState& state, const Eigen::MatrixXcd& op);

/// |<a|b>| — phase-insensitive state overlap.
double fidelity(const QuantumState& a, const QuantumState& b);

/// Closed evolution psi(t) = e^{-iHt} psi(0) of a static Hamiltonian,
/// eigendecomposed once; state_at is const and safe to call concurrently.
class IdealReference {
 public:
  IdealReference(const Eigen::MatrixXcd& h, const QuantumState& initial);
  QuantumState state_at(double t) const;

 private:
  Eigen::MatrixXcd v_;
  Eigen::VectorXd w_;
  Eigen::VectorXcd c0_;
  int n_fock_ = 0;
};

struct GroundState {
  QuantumState state;
  double energy = 0.0;
};

/// Lowest eigenpair of the ideal Rabi Hamiltonian for the given axes.
/// The eigenvector phase is fixed by making its largest-magnitude component
/// real positive, so results are reproducible across runs.
GroundState rabi_ground_state(const RabiTargets& targets, char tls_axis,
                              char perp_axis, const OperatorSet& ops);

/// One point of the quench scaling analysis.  With tau_q expressed in units
/// of the mode period 2*pi/omega_tilde:
///   T = tau_q_units / R,   S = R^{2/3} |sigma_mean - sigma_gs|,
/// and the standard error scales the same way.
struct ScalingPoint {
  double R = 0.0;
  double tau_q_units = 0.0;
  double T = 0.0;
  double S = 0.0;
  double stderr_S = 0.0;
};

ScalingPoint scaling_point(double R, double tau_q_units, double sigma_mean,
                           double sigma_stderr, double sigma_gs);

/// Interferometric position readout: couple an ancilla prepared in |up_z>
/// to the mode through U(t) = exp(-i probe_omega t sigma_x^A x), measure
/// <sigma_y^A(t)> = -<sin(2 probe_omega t x)> at the probe times, and infer
/// <x> from the small-angle slope:  estimate = -slope / (2 probe_omega),
/// slope fitted by least squares through the origin.
struct AncillaReadout {
  double estimate = 0.0;            ///< inferred <x>
  std::vector<double> probe_times;  ///< [s]
  std::vector<double> sigma_y;      ///< ancilla <sigma_y> at each probe time
};

AncillaReadout ancilla_position_readout(const QuantumState& state,
                                        const OperatorSet& ops, double probe_omega,
                                        const std::vector<double>& probe_times);

}  // namespace rabi_ccd
