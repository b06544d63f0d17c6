#include "rabi_ccd/propagate.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabi_ccd {

ZeroNoiseDriver::ZeroNoiseDriver(int n_amplitude_channels) {
  snapshot_.dephasing = 0.0;
  snapshot_.amplitude = Eigen::ArrayXd::Zero(n_amplitude_channels);
}

OUNoiseDriver::OUNoiseDriver(const OUParams& dephasing,
                             const std::vector<OUParams>& amplitude,
                             std::uint64_t seed, bool record)
    : dephasing_(dephasing), amplitude_(amplitude), engine_(seed), record_(record) {
  snapshot_.dephasing = dephasing_.x0;
  snapshot_.amplitude.resize(static_cast<int>(amplitude_.size()));
  for (std::size_t i = 0; i < amplitude_.size(); ++i) {
    snapshot_.amplitude(static_cast<int>(i)) = amplitude_[i].x0;
  }
}

void OUNoiseDriver::advance(double dt) {
  if (record_) history_.push_back(snapshot_);
  snapshot_.dephasing = ou_step(snapshot_.dephasing, dt, dephasing_, normal_(engine_));
  for (std::size_t i = 0; i < amplitude_.size(); ++i) {
    const int k = static_cast<int>(i);
    snapshot_.amplitude(k) = ou_step(snapshot_.amplitude(k), dt, amplitude_[i], normal_(engine_));
  }
}

FrozenNoiseDriver::FrozenNoiseDriver(std::vector<NoiseSnapshot> rows)
    : rows_(std::move(rows)) {
  if (rows_.empty()) throw std::invalid_argument("FrozenNoiseDriver: no rows");
}

const NoiseSnapshot& FrozenNoiseDriver::values() const {
  if (index_ >= rows_.size()) {
    throw std::out_of_range("FrozenNoiseDriver: replay exhausted");
  }
  return rows_[index_];
}

void FrozenNoiseDriver::advance(double dt) {
  (void)dt;
  if (index_ < rows_.size()) ++index_;
}

namespace {

constexpr double kSeriesEps = 1e-11;
constexpr int kSeriesMaxTerms = 32;

/// psi <- exp(-i dt H) psi via the truncated exponential series, with H
/// given as a matrix-vector product.  The powers H^k psi are kept unscaled
/// and the scalar (-i dt)^k / k! is folded into one coefficient, so each
/// term costs one apply plus a single fused axpy pass.  The sum stops once
/// the added term is below kSeriesEps * |psi|; the first neglected term --
/// and with it the per-step defect -- is smaller by a further factor
/// |H| dt, far below the norm budget enforced at output times.
template <typename ApplyFn>
void series_exp_apply(const ApplyFn& apply_h, double dt, Eigen::VectorXcd& psi,
                      Eigen::VectorXcd& term, Eigen::VectorXcd& tmp) {
  const double threshold2 = kSeriesEps * kSeriesEps * psi.squaredNorm();
  term = psi;
  cdouble coef(1.0, 0.0);
  for (int k = 1; k <= kSeriesMaxTerms; ++k) {
    apply_h(term, tmp);
    term.swap(tmp);
    coef *= cdouble(0.0, -dt / static_cast<double>(k));
    psi += coef * term;
    if (std::norm(coef) * term.squaredNorm() <= threshold2) return;
  }
  throw std::runtime_error("series propagator did not converge; reduce dt");
}

void check_hermitian(const Eigen::MatrixXcd& h) {
  const double scale = h.cwiseAbs().maxCoeff();
  const double dev = (h - h.adjoint()).cwiseAbs().maxCoeff();
  if (dev > 1e-10 * std::max(scale, 1.0)) {
    throw std::invalid_argument("unitary_step: Hamiltonian is not Hermitian");
  }
}

void eigen_exp_apply(const Eigen::MatrixXcd& h, double dt, Eigen::VectorXcd& psi) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
  if (es.info() != Eigen::Success) {
    throw std::runtime_error("unitary_step: eigendecomposition failed");
  }
  Eigen::VectorXcd coeffs = es.eigenvectors().adjoint() * psi;
  for (int k = 0; k < coeffs.size(); ++k) {
    coeffs(k) *= std::polar(1.0, -es.eigenvalues()(k) * dt);
  }
  psi.noalias() = es.eigenvectors() * coeffs;
}

}  // namespace

void unitary_step(QuantumState& state, const Eigen::MatrixXcd& h, double dt,
                  StepMethod method) {
  if (h.rows() != h.cols() || h.rows() != state.amplitudes.size()) {
    throw std::invalid_argument("unitary_step: dimension mismatch");
  }
  if (!std::isfinite(dt)) throw std::invalid_argument("unitary_step: non-finite dt");
  check_hermitian(h);
  if (method == StepMethod::eigendecomposition) {
    eigen_exp_apply(h, dt, state.amplitudes);
    return;
  }
  Eigen::VectorXcd term(h.rows()), tmp(h.rows());
  series_exp_apply(
      [&h](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { y.noalias() = h * x; },
      dt, state.amplitudes, term, tmp);
}

TrajectoryResult evolve(const QuantumState& initial, TimeDependentHamiltonian& h,
                        const IntegrationPlan& plan, NoiseDriver& noise,
                        const std::vector<ObservableFn>& observables) {
  if (plan.dt == 0.0 || !std::isfinite(plan.dt)) {
    throw std::invalid_argument("evolve: dt must be nonzero and finite");
  }
  if (plan.n_steps < 1) throw std::invalid_argument("evolve: n_steps must be >= 1");
  if (plan.output_stride < 1) throw std::invalid_argument("evolve: stride must be >= 1");
  if (h.dim() != initial.amplitudes.size()) {
    throw std::invalid_argument("evolve: state/Hamiltonian dimension mismatch");
  }
  if (std::abs(initial.norm() - 1.0) > 1e-10) {
    throw std::invalid_argument("evolve: initial state is not normalized");
  }

  // output schedule: step 0, every stride, and the final step
  std::vector<long> out_steps;
  for (long k = 0; k <= plan.n_steps; k += plan.output_stride) out_steps.push_back(k);
  if (out_steps.back() != plan.n_steps) out_steps.push_back(plan.n_steps);

  TrajectoryResult result;
  result.times.reserve(out_steps.size());
  result.observables.resize(static_cast<long>(out_steps.size()),
                            static_cast<long>(observables.size()));

  QuantumState state = initial;
  Eigen::VectorXcd term(h.dim()), tmp(h.dim());

  std::size_t out_index = 0;
  auto record = [&](long step) {
    const double t = plan.t0 + static_cast<double>(step) * plan.dt;
    const double norm_err = std::abs(state.norm() - 1.0);
    const double allowed =
        plan.norm_tolerance * std::max(1.0, static_cast<double>(step) / 1e5);
    if (norm_err > allowed) {
      throw std::runtime_error("evolve: norm drift " + std::to_string(norm_err) +
                               " at t=" + std::to_string(t));
    }
    result.max_norm_error = std::max(result.max_norm_error, norm_err);
    if (plan.tail_levels > 0) {
      const double tail = truncation_tail(state, plan.tail_levels);
      if (tail > plan.tail_tolerance) {
        throw truncation_error("evolve: truncation tail " + std::to_string(tail) +
                                   " at t=" + std::to_string(t),
                               tail, t);
      }
      result.max_tail = std::max(result.max_tail, tail);
    }
    result.times.push_back(t);
    for (std::size_t j = 0; j < observables.size(); ++j) {
      result.observables(static_cast<long>(out_index), static_cast<long>(j)) =
          observables[j](t, state);
    }
    ++out_index;
  };

  record(0);
  const bool use_core = h.has_core();
  for (long k = 0; k < plan.n_steps; ++k) {
    const double t_mid = plan.t0 + (static_cast<double>(k) + 0.5) * plan.dt;
    if (plan.method == StepMethod::series) {
      h.prepare(t_mid, noise.values());
      if (use_core) {
        h.to_core_frame(state.amplitudes);
        series_exp_apply(
            [&h](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) {
              h.apply_core(x, y);
            },
            plan.dt, state.amplitudes, term, tmp);
        h.from_core_frame(state.amplitudes);
      } else {
        series_exp_apply(
            [&h](const Eigen::VectorXcd& x, Eigen::VectorXcd& y) { h.apply(x, y); },
            plan.dt, state.amplitudes, term, tmp);
      }
    } else {
      eigen_exp_apply(h.matrix(t_mid, noise.values()), plan.dt, state.amplitudes);
    }
    noise.advance(plan.dt);
    const long next = k + 1;
    if (next == plan.n_steps || next % plan.output_stride == 0) {
      if (out_index < out_steps.size() && out_steps[out_index] == next) record(next);
    }
  }

  result.final_state = state;
  return result;
}

}  // namespace rabi_ccd
