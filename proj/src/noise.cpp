#include "rabi_ccd/noise.hpp"

#include <fftw3.h>

#include <cmath>
#include <mutex>
#include <stdexcept>

namespace rabi_ccd {

namespace {

void require_finite(double v, const char* name) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string("non-finite ") + name);
  }
}

void require_params(const OUParams& p) {
  require_finite(p.tau, "tau");
  require_finite(p.c, "c");
  require_finite(p.x0, "x0");
  if (p.tau <= 0.0) throw std::invalid_argument("OU tau must be > 0");
  if (p.c < 0.0) throw std::invalid_argument("OU diffusion c must be >= 0");
}

/// h(x) = x - 3/2 + 2 e^{-x} - e^{-2x}/2, evaluated without cancellation
/// via u = expm1(-x):  h = x + u - u^2/2.  h(x) ~ x^3/3 for small x and
/// h(x) -> x - 3/2 for large x; h > 0 for all x > 0.
double coherence_kernel(double x) {
  const double u = std::expm1(-x);
  return x + u - 0.5 * u * u;
}

}  // namespace

double OUParams::stationary_sigma() const { return std::sqrt(0.5 * c * tau); }

double OUParams::crossover_frequency() const { return 1.0 / (2.0 * M_PI * tau); }

double ou_step(double x, double dt, const OUParams& params, double normal_draw) {
  require_params(params);
  require_finite(x, "x");
  require_finite(dt, "dt");
  require_finite(normal_draw, "normal_draw");
  if (dt < 0.0) throw std::invalid_argument("ou_step dt must be >= 0");
  const double decay = std::exp(-dt / params.tau);
  // 1 - e^{-2dt/tau} via expm1 keeps the step variance accurate for dt << tau.
  const double var = 0.5 * params.c * params.tau * (-std::expm1(-2.0 * dt / params.tau));
  return x * decay + std::sqrt(var) * normal_draw;
}

NoiseRealization ou_realization(const OUParams& params, double dt,
                                std::size_t n_samples, std::uint64_t seed) {
  require_params(params);
  if (n_samples == 0) throw std::invalid_argument("n_samples must be > 0");
  if (dt <= 0.0) throw std::invalid_argument("realization dt must be > 0");
  NoiseRealization r;
  r.dt = dt;
  r.params = params;
  r.seed = seed;
  r.samples.resize(n_samples);
  r.samples[0] = params.x0;
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const double decay = std::exp(-dt / params.tau);
  const double sigma_dt =
      std::sqrt(0.5 * params.c * params.tau * (-std::expm1(-2.0 * dt / params.tau)));
  for (std::size_t k = 1; k < n_samples; ++k) {
    r.samples[k] = r.samples[k - 1] * decay + sigma_dt * normal(engine);
  }
  return r;
}

OUMoments analytic_moments(const OUParams& params, double t) {
  require_params(params);
  require_finite(t, "t");
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  OUMoments m;
  m.mean = params.x0 * std::exp(-t / params.tau);
  m.variance = 0.5 * params.c * params.tau * (-std::expm1(-2.0 * t / params.tau));
  return m;
}

double analytic_coherence(const OUParams& params, double t) {
  require_params(params);
  require_finite(t, "t");
  if (t < 0.0) throw std::invalid_argument("t must be >= 0");
  const double tau = params.tau;
  const double arg = 0.5 * params.c * tau * tau * tau * coherence_kernel(t / tau);
  return std::exp(-arg);
}

double diffusion_from_T2(double T2, double tau) {
  require_finite(T2, "T2");
  require_finite(tau, "tau");
  if (T2 <= 0.0 || tau <= 0.0) {
    throw std::invalid_argument("diffusion_from_T2 requires T2 > 0 and tau > 0");
  }
  const double kernel = coherence_kernel(T2 / tau);
  const double denom = tau * tau * tau * kernel;
  const double c = 2.0 / denom;
  if (!std::isfinite(c) || c <= 0.0) {
    throw std::domain_error("diffusion_from_T2: tau^3 * kernel(T2/tau) = " +
                            std::to_string(denom) + " not usable");
  }
  return c;
}

double spectral_density_analytic(const OUParams& params, double f) {
  require_params(params);
  require_finite(f, "f");
  const double w = 2.0 * M_PI * f * params.tau;
  return params.c * params.tau * params.tau / (1.0 + w * w);
}

namespace {
// FFTW plan creation is not thread-safe; execution is.
std::mutex fftw_plan_mutex;
}  // namespace

SpectralEstimate periodogram(const NoiseRealization& realization) {
  const std::size_t m = realization.samples.size();
  if (m < 2) throw std::invalid_argument("periodogram needs at least 2 samples");
  if (realization.dt <= 0.0) throw std::invalid_argument("periodogram dt must be > 0");
  const double dt = realization.dt;
  const double T = static_cast<double>(m) * dt;

  double* in = fftw_alloc_real(m);
  fftw_complex* out = fftw_alloc_complex(m / 2 + 1);
  fftw_plan plan;
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    plan = fftw_plan_dft_r2c_1d(static_cast<int>(m), in, out, FFTW_ESTIMATE);
  }
  for (std::size_t k = 0; k < m; ++k) in[k] = realization.samples[k];
  fftw_execute(plan);

  SpectralEstimate est;
  est.record_length = T;
  const std::size_t n_bins = m / 2 + 1;
  est.frequencies.resize(n_bins);
  est.power.resize(n_bins);
  for (std::size_t n = 0; n < n_bins; ++n) {
    est.frequencies[n] = static_cast<double>(n) / T;
    const double re = dt * out[n][0];
    const double im = dt * out[n][1];
    est.power[n] = (re * re + im * im) / T;
  }
  {
    std::lock_guard<std::mutex> lock(fftw_plan_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
  return est;
}

SpectralEstimate average_spectra(const std::vector<SpectralEstimate>& spectra) {
  if (spectra.empty()) throw std::invalid_argument("average_spectra: empty input");
  SpectralEstimate avg = spectra.front();
  for (std::size_t i = 1; i < spectra.size(); ++i) {
    const SpectralEstimate& s = spectra[i];
    if (s.power.size() != avg.power.size() || s.record_length != avg.record_length) {
      throw std::invalid_argument("average_spectra: mismatched grids");
    }
    for (std::size_t n = 0; n < avg.power.size(); ++n) avg.power[n] += s.power[n];
  }
  const double inv = 1.0 / static_cast<double>(spectra.size());
  for (double& p : avg.power) p *= inv;
  return avg;
}

}  // namespace rabi_ccd
