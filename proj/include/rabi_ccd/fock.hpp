#pragma once

#include <Eigen/Dense>
#include <complex>

namespace rabi_ccd {

using cdouble = std::complex<double>;

/// State of the qubit x motional-mode system in a truncated Fock basis of
/// n_fock levels.  Basis ordering is qubit-major:
///   amplitudes[q * n_fock + n] = <q, n | psi>,
/// with q = 0 the spin-up state (sigma_z eigenvalue +1) and q = 1 spin-down.
struct QuantumState {
  Eigen::VectorXcd amplitudes;
  int n_fock = 0;

  int dim() const { return 2 * n_fock; }
  double norm() const { return amplitudes.norm(); }

  Eigen::Map<const Eigen::VectorXcd> up_block() const {
    return Eigen::Map<const Eigen::VectorXcd>(amplitudes.data(), n_fock);
  }
  Eigen::Map<const Eigen::VectorXcd> down_block() const {
    return Eigen::Map<const Eigen::VectorXcd>(amplitudes.data() + n_fock, n_fock);
  }
};

/// Tensor product (qubit spinor) x (mode vector) in the ordering above.
QuantumState kron_state(const Eigen::Vector2cd& spin, const Eigen::VectorXcd& mode);

/// |spin> x |n=0> for spin the +1 eigenvector of sigma_axis, axis in {x,y,z};
/// sign = -1 selects the -1 eigenvector.
QuantumState ground_mode_state(char axis, int sign, int n_fock);

/// Dense mode and qubit operators on the 2*n_fock space (qubit-major
/// ordering), plus the bare n_fock x n_fock mode factors.
struct OperatorSet {
  int n_fock = 0;

  // mode-space factors (n_fock x n_fock)
  Eigen::MatrixXcd mode_a;     ///< annihilation
  Eigen::MatrixXcd mode_adag;  ///< creation
  Eigen::MatrixXcd mode_n;     ///< number
  Eigen::MatrixXcd mode_x;     ///< a + a^dag
  Eigen::MatrixXcd mode_p;     ///< i (a^dag - a)/2

  // embedded on the full 2*n_fock space
  Eigen::MatrixXcd a, adag, n, x, p;          ///< I_2 (x) mode operator
  Eigen::MatrixXcd sx, sy, sz, sp, sm;        ///< sigma (x) I_n_fock

  int dim() const { return 2 * n_fock; }

  /// Embedded sigma along axis 'x', 'y' or 'z'.
  const Eigen::MatrixXcd& sigma(char axis) const;
};

/// Build all operators for a truncation of n_fock levels (n_fock >= 2).
OperatorSet build_operator_set(int n_fock);

/// Displacement operator exp(alpha a^dag - alpha^* a) on the truncated
/// mode space.  route "generator" (default) exponentiates the truncated
/// anti-Hermitian generator and is exactly unitary on the truncated space;
/// route "laguerre" evaluates the closed-form matrix elements
///   <m|D|n> = sqrt(n!/m!) alpha^{m-n} e^{-|alpha|^2/2} L_n^{(m-n)}(|alpha|^2)
/// of the untruncated operator.  The two agree to ~1e-10 on the lower half
/// of the basis for the small |alpha| used here.
enum class DisplacementRoute { generator, laguerre };
Eigen::MatrixXcd displacement_matrix(cdouble alpha, int n_fock,
                                     DisplacementRoute route = DisplacementRoute::generator);

/// Total population in the top `levels` Fock levels (both qubit branches),
/// used to certify that the truncation is not being reached.
double truncation_tail(const QuantumState& state, int levels);

}  // namespace rabi_ccd
