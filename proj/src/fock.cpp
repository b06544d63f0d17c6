#include "rabi_ccd/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabi_ccd {

QuantumState kron_state(const Eigen::Vector2cd& spin, const Eigen::VectorXcd& mode) {
  QuantumState s;
  s.n_fock = static_cast<int>(mode.size());
  s.amplitudes.resize(2 * s.n_fock);
  s.amplitudes.head(s.n_fock) = spin(0) * mode;
  s.amplitudes.tail(s.n_fock) = spin(1) * mode;
  return s;
}

QuantumState ground_mode_state(char axis, int sign, int n_fock) {
  if (n_fock < 2) throw std::invalid_argument("n_fock must be >= 2");
  if (sign != 1 && sign != -1) throw std::invalid_argument("sign must be +1 or -1");
  const double r = 1.0 / std::sqrt(2.0);
  Eigen::Vector2cd spin;
  switch (axis) {
    case 'x': spin << r, sign * r; break;
    case 'y': spin << r, cdouble(0.0, sign * r); break;
    case 'z': spin = (sign == 1) ? Eigen::Vector2cd(1.0, 0.0) : Eigen::Vector2cd(0.0, 1.0); break;
    default: throw std::invalid_argument(std::string("unknown axis '") + axis + "'");
  }
  Eigen::VectorXcd mode = Eigen::VectorXcd::Zero(n_fock);
  mode(0) = 1.0;
  return kron_state(spin, mode);
}

const Eigen::MatrixXcd& OperatorSet::sigma(char axis) const {
  switch (axis) {
    case 'x': return sx;
    case 'y': return sy;
    case 'z': return sz;
    default: throw std::invalid_argument(std::string("unknown axis '") + axis + "'");
  }
}

OperatorSet build_operator_set(int n_fock) {
  if (n_fock < 2) throw std::invalid_argument("n_fock must be >= 2");
  OperatorSet ops;
  ops.n_fock = n_fock;
  const int n = n_fock;
  const int d = 2 * n;

  ops.mode_a = Eigen::MatrixXcd::Zero(n, n);
  for (int k = 1; k < n; ++k) ops.mode_a(k - 1, k) = std::sqrt(static_cast<double>(k));
  ops.mode_adag = ops.mode_a.adjoint();
  ops.mode_n = ops.mode_adag * ops.mode_a;
  ops.mode_x = ops.mode_a + ops.mode_adag;
  ops.mode_p = cdouble(0.0, 0.5) * (ops.mode_adag - ops.mode_a);

  auto embed_mode = [&](const Eigen::MatrixXcd& m) {
    Eigen::MatrixXcd full = Eigen::MatrixXcd::Zero(d, d);
    full.topLeftCorner(n, n) = m;
    full.bottomRightCorner(n, n) = m;
    return full;
  };
  ops.a = embed_mode(ops.mode_a);
  ops.adag = embed_mode(ops.mode_adag);
  ops.n = embed_mode(ops.mode_n);
  ops.x = embed_mode(ops.mode_x);
  ops.p = embed_mode(ops.mode_p);

  const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
  ops.sx = Eigen::MatrixXcd::Zero(d, d);
  ops.sx.topRightCorner(n, n) = id;
  ops.sx.bottomLeftCorner(n, n) = id;
  ops.sy = Eigen::MatrixXcd::Zero(d, d);
  ops.sy.topRightCorner(n, n) = cdouble(0.0, -1.0) * id;
  ops.sy.bottomLeftCorner(n, n) = cdouble(0.0, 1.0) * id;
  ops.sz = Eigen::MatrixXcd::Zero(d, d);
  ops.sz.topLeftCorner(n, n) = id;
  ops.sz.bottomRightCorner(n, n) = -id;
  ops.sp = Eigen::MatrixXcd::Zero(d, d);
  ops.sp.topRightCorner(n, n) = id;
  ops.sm = Eigen::MatrixXcd::Zero(d, d);
  ops.sm.bottomLeftCorner(n, n) = id;
  return ops;
}

namespace {

Eigen::MatrixXcd displacement_generator_route(cdouble alpha, int n_fock) {
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Zero(n_fock, n_fock);
  for (int k = 1; k < n_fock; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
  // D = exp(G) with G = alpha a^dag - alpha^* a; H = -iG is Hermitian.
  Eigen::MatrixXcd herm =
      cdouble(0.0, -1.0) * (alpha * a.adjoint() - std::conj(alpha) * a);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(herm);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("displacement_matrix: eigendecomposition failed");
  }
  Eigen::VectorXcd phases(n_fock);
  for (int k = 0; k < n_fock; ++k) {
    phases(k) = std::exp(cdouble(0.0, es.eigenvalues()(k)));
  }
  return es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
}

/// <m|D(alpha)|n> for m >= n, via associated Laguerre polynomials.
cdouble displacement_element_upper(cdouble alpha, int m, int n) {
  const double x = std::norm(alpha);  // |alpha|^2
  const int k = m - n;
  // L_n^{(k)}(x) by upward recurrence in the lower index.
  double lag_prev = 1.0;  // L_0
  double lag = 1.0 + k - x;  // L_1
  if (n == 0) lag = lag_prev;
  for (int j = 1; j < n; ++j) {
    const double next =
        ((2.0 * j + 1.0 + k - x) * lag - (j + k) * lag_prev) / (j + 1.0);
    lag_prev = lag;
    lag = next;
  }
  const double log_ratio = 0.5 * (std::lgamma(n + 1.0) - std::lgamma(m + 1.0));
  const double scale = std::exp(log_ratio - 0.5 * x);
  const cdouble amp = std::pow(alpha, k);
  const cdouble value = scale * amp * lag;
  if (!std::isfinite(value.real()) || !std::isfinite(value.imag())) {
    throw std::overflow_error("displacement_matrix: element (" + std::to_string(m) +
                              "," + std::to_string(n) + ") overflowed");
  }
  return value;
}

Eigen::MatrixXcd displacement_laguerre_route(cdouble alpha, int n_fock) {
  Eigen::MatrixXcd d(n_fock, n_fock);
  for (int m = 0; m < n_fock; ++m) {
    for (int n = 0; n <= m; ++n) {
      d(m, n) = displacement_element_upper(alpha, m, n);
      // D(alpha)^dag = D(-alpha) fills the upper triangle.
      if (m != n) d(n, m) = std::conj(displacement_element_upper(-alpha, m, n));
    }
  }
  return d;
}

}  // namespace

Eigen::MatrixXcd displacement_matrix(cdouble alpha, int n_fock, DisplacementRoute route) {
  if (n_fock < 2) throw std::invalid_argument("n_fock must be >= 2");
  if (!std::isfinite(alpha.real()) || !std::isfinite(alpha.imag())) {
    throw std::invalid_argument("non-finite alpha");
  }
  switch (route) {
    case DisplacementRoute::generator: return displacement_generator_route(alpha, n_fock);
    case DisplacementRoute::laguerre: return displacement_laguerre_route(alpha, n_fock);
  }
  throw std::invalid_argument("unknown displacement route");
}

double truncation_tail(const QuantumState& state, int levels) {
  if (levels < 1 || levels > state.n_fock) {
    throw std::invalid_argument("truncation_tail: bad level count");
  }
  const int n = state.n_fock;
  double tail = 0.0;
  for (int k = n - levels; k < n; ++k) {
    tail += std::norm(state.amplitudes(k)) + std::norm(state.amplitudes(n + k));
  }
  return tail;
}

}  // namespace rabi_ccd
