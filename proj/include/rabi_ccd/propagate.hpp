#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <stdexcept>
#include <vector>

#include "rabi_ccd/fock.hpp"
#include "rabi_ccd/hamiltonian.hpp"

namespace rabi_ccd {

enum class StepMethod {
  eigendecomposition,  ///< exact exp(-iH dt) via Hermitian eigensolve
  series,              ///< adaptive truncated exponential series on the state
};

/// Stepping plan for one trajectory.  dt may be negative (reversed
/// integration from t0); outputs are recorded at step 0, every
/// output_stride steps, and at the final step.
struct IntegrationPlan {
  double dt = 0.0;
  long n_steps = 0;
  long output_stride = 1;
  double t0 = 0.0;
  StepMethod method = StepMethod::series;
  double tail_tolerance = 1e-6;   ///< max top-level population at output times
  int tail_levels = 3;
  double norm_tolerance = 1e-8;   ///< allowed |norm-1| drift per 1e5 steps
};

struct truncation_error : std::runtime_error {
  truncation_error(const std::string& msg, double tail_, double t_)
      : std::runtime_error(msg), tail(tail_), t(t_) {}
  double tail = 0.0;
  double t = 0.0;
};

/// Per-step noise source. values() are held fixed during a step; advance()
/// moves every channel forward by dt in a fixed order (dephasing first,
/// then amplitude channels by ascending index).
class NoiseDriver {
 public:
  virtual ~NoiseDriver() = default;
  virtual const NoiseSnapshot& values() const = 0;
  virtual void advance(double dt) = 0;
};

/// All channels identically zero (noiseless twin runs).
class ZeroNoiseDriver : public NoiseDriver {
 public:
  explicit ZeroNoiseDriver(int n_amplitude_channels = 0);
  const NoiseSnapshot& values() const override { return snapshot_; }
  void advance(double dt) override { (void)dt; }

 private:
  NoiseSnapshot snapshot_;
};

/// OU channels driven by one mt19937_64 engine; one normal draw per channel
/// per advance.  Optionally records the held values for replay.
class OUNoiseDriver : public NoiseDriver {
 public:
  OUNoiseDriver(const OUParams& dephasing, const std::vector<OUParams>& amplitude,
                std::uint64_t seed, bool record = false);
  const NoiseSnapshot& values() const override { return snapshot_; }
  void advance(double dt) override;

  /// Recorded snapshots, one per step taken (index k = values held during
  /// step k), available when record=true.
  const std::vector<NoiseSnapshot>& history() const { return history_; }

 private:
  OUParams dephasing_;
  std::vector<OUParams> amplitude_;
  NoiseSnapshot snapshot_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  bool record_ = false;
  std::vector<NoiseSnapshot> history_;
};

/// Replays a fixed sequence of snapshots (row k held during step k).
class FrozenNoiseDriver : public NoiseDriver {
 public:
  explicit FrozenNoiseDriver(std::vector<NoiseSnapshot> rows);
  const NoiseSnapshot& values() const override;
  void advance(double dt) override;

 private:
  std::vector<NoiseSnapshot> rows_;
  std::size_t index_ = 0;
};

/// One step of exp(-i h dt) applied to state, for a dense Hamiltonian.
void unitary_step(QuantumState& state, const Eigen::MatrixXcd& h, double dt,
                  StepMethod method = StepMethod::eigendecomposition);

using ObservableFn = std::function<double(double t, const QuantumState&)>;

struct TrajectoryResult {
  std::vector<double> times;
  Eigen::MatrixXd observables;  ///< n_outputs x n_observables
  QuantumState final_state;
  double max_norm_error = 0.0;  ///< max ||psi|-1| at output times
  double max_tail = 0.0;        ///< max truncation tail at output times
};

/// Integrate the time-dependent Schrödinger equation over plan.n_steps
/// steps.  Each step holds the current noise values fixed, evaluates the
/// Hamiltonian at the step midpoint, applies exp(-iH dt), then advances the
/// noise.  Norm and truncation-tail bounds are enforced at every output
/// time; violations throw truncation_error / runtime_error with the time.
TrajectoryResult evolve(const QuantumState& initial, TimeDependentHamiltonian& h,
                        const IntegrationPlan& plan, NoiseDriver& noise,
                        const std::vector<ObservableFn>& observables);

}  // namespace rabi_ccd
