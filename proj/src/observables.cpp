#include "rabi_ccd/observables.hpp"

#include <cmath>
#include <stdexcept>

namespace rabi_ccd {

double expectation(const QuantumState& state, const Eigen::MatrixXcd& op) {
  if (op.rows() != op.cols() || op.rows() != state.amplitudes.size()) {
    throw std::invalid_argument("expectation: dimension mismatch");
  }
  const cdouble v = state.amplitudes.dot(op * state.amplitudes);
  return v.real();
}

double fidelity(const QuantumState& a, const QuantumState& b) {
  if (a.amplitudes.size() != b.amplitudes.size()) {
    throw std::invalid_argument("fidelity: dimension mismatch");
  }
  return std::abs(a.amplitudes.dot(b.amplitudes));
}

IdealReference::IdealReference(const Eigen::MatrixXcd& h, const QuantumState& initial) {
  if (h.rows() != h.cols() || h.rows() != initial.amplitudes.size()) {
    throw std::invalid_argument("IdealReference: dimension mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("IdealReference: eigendecomposition failed");
  }
  v_ = es.eigenvectors();
  w_ = es.eigenvalues();
  c0_ = v_.adjoint() * initial.amplitudes;
  n_fock_ = initial.n_fock;
}

QuantumState IdealReference::state_at(double t) const {
  Eigen::VectorXcd c(c0_.size());
  for (int k = 0; k < c.size(); ++k) {
    c(k) = c0_(k) * std::polar(1.0, -w_(k) * t);
  }
  QuantumState s;
  s.n_fock = n_fock_;
  s.amplitudes.noalias() = v_ * c;
  return s;
}

GroundState rabi_ground_state(const RabiTargets& targets, char tls_axis,
                              char perp_axis, const OperatorSet& ops) {
  const Eigen::MatrixXcd h = ideal_rabi_hamiltonian(targets, tls_axis, perp_axis, ops);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("rabi_ground_state: eigendecomposition failed");
  }
  GroundState gs;
  gs.energy = es.eigenvalues()(0);
  gs.state.n_fock = ops.n_fock;
  gs.state.amplitudes = es.eigenvectors().col(0);
  // deterministic global phase: largest component real positive
  int imax = 0;
  double amax = 0.0;
  for (int k = 0; k < gs.state.amplitudes.size(); ++k) {
    const double m = std::abs(gs.state.amplitudes(k));
    if (m > amax) {
      amax = m;
      imax = k;
    }
  }
  const cdouble ph = gs.state.amplitudes(imax) / amax;
  gs.state.amplitudes /= ph;
  return gs;
}

ScalingPoint scaling_point(double R, double tau_q_units, double sigma_mean,
                           double sigma_stderr, double sigma_gs) {
  if (R <= 0.0 || tau_q_units <= 0.0) {
    throw std::invalid_argument("scaling_point: R and tau_q must be > 0");
  }
  ScalingPoint p;
  p.R = R;
  p.tau_q_units = tau_q_units;
  p.T = tau_q_units / R;
  const double scale = std::pow(R, 2.0 / 3.0);
  p.S = scale * std::abs(sigma_mean - sigma_gs);
  p.stderr_S = scale * sigma_stderr;
  return p;
}

AncillaReadout ancilla_position_readout(const QuantumState& state,
                                        const OperatorSet& ops, double probe_omega,
                                        const std::vector<double>& probe_times) {
  if (probe_omega <= 0.0) throw std::invalid_argument("probe_omega must be > 0");
  if (probe_times.empty()) throw std::invalid_argument("no probe times");
  if (state.n_fock != ops.n_fock) {
    throw std::invalid_argument("ancilla readout: operator set size mismatch");
  }
  // The ancilla coupling commutes with every system operator, so the exact
  // joint evolution reduces, for an ancilla prepared in |up_z>, to
  //   <sigma_y^A(t)> = -Im <psi| e^{2 i probe_omega t x} |psi>.
  // Evaluate the phase operator in the eigenbasis of the mode x.
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(ops.mode_x);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("ancilla readout: x eigendecomposition failed");
  }
  const int n = ops.n_fock;
  const Eigen::MatrixXcd& v = es.eigenvectors();
  Eigen::VectorXcd up = v.adjoint() * state.amplitudes.head(n);
  Eigen::VectorXcd dn = v.adjoint() * state.amplitudes.tail(n);

  AncillaReadout out;
  out.probe_times = probe_times;
  out.sigma_y.reserve(probe_times.size());
  double st_y = 0.0, st_t = 0.0;
  for (double t : probe_times) {
    if (t <= 0.0) throw std::invalid_argument("probe times must be > 0");
    cdouble z = 0.0;
    for (int k = 0; k < n; ++k) {
      const cdouble ph = std::polar(1.0, 2.0 * probe_omega * t * es.eigenvalues()(k));
      z += std::conj(up(k)) * ph * up(k) + std::conj(dn(k)) * ph * dn(k);
    }
    const double sy = -z.imag();
    out.sigma_y.push_back(sy);
    st_y += t * sy;
    st_t += t * t;
  }
  const double slope = st_y / st_t;
  out.estimate = -slope / (2.0 * probe_omega);
  return out;
}

}  // namespace rabi_ccd
