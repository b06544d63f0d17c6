#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rabi_ccd {

/// Parameters of a stationary Ornstein-Uhlenbeck (OU) process
///   dX = -X/tau dt + sqrt(c) dW,
/// used to model both magnetic dephasing (rad/s) and relative laser
/// amplitude fluctuations (dimensionless).
struct OUParams {
  double tau = 0.0;  ///< correlation time [s], > 0
  double c = 0.0;    ///< diffusion constant [units^2/s], >= 0
  double x0 = 0.0;   ///< initial value at t = 0

  /// Stationary standard deviation sqrt(c*tau/2).
  double stationary_sigma() const;

  /// Lorentzian crossover frequency f_cr = 1/(2*pi*tau) [Hz].
  double crossover_frequency() const;
};

/// One sampled OU path on a uniform time grid.
struct NoiseRealization {
  double dt = 0.0;              ///< grid spacing [s]
  std::vector<double> samples;  ///< samples[k] = X(k*dt), samples[0] = params.x0
  OUParams params;
  std::uint64_t seed = 0;
};

/// Two-sided periodogram of a real time series.
struct SpectralEstimate {
  std::vector<double> frequencies;  ///< n/T for n = 0..M/2 [Hz]
  std::vector<double> power;        ///< |dt * DFT_n|^2 / T  [units^2/Hz]
  double record_length = 0.0;       ///< T = M*dt [s]
};

/// Exact one-step OU update over time dt:
///   X' = X e^{-dt/tau} + sigma_dt * normal_draw,
/// with sigma_dt = sqrt(c*tau/2 * (1 - e^{-2*dt/tau})).  Exact for any dt,
/// i.e. repeated application reproduces the transition density of the SDE.
double ou_step(double x, double dt, const OUParams& params, double normal_draw);

/// Sample a full OU path of n_samples points (samples[0] = x0) using a
/// mt19937_64 engine seeded with `seed`; one normal draw per step.
NoiseRealization ou_realization(const OUParams& params, double dt,
                                std::size_t n_samples, std::uint64_t seed);

/// Mean and variance of X(t) started from x0:
///   mean = x0 e^{-t/tau},  var = c*tau/2 * (1 - e^{-2t/tau}).
struct OUMoments {
  double mean = 0.0;
  double variance = 0.0;
};
OUMoments analytic_moments(const OUParams& params, double t);

/// Ensemble coherence |<e^{i phi(t)}>| of a qubit dephased by a
/// zero-started OU frequency shift (phi = integral of X):
///   C(t) = exp(-c*tau^2/2 * [t - tau*(3/2 - 2e^{-t/tau} + e^{-2t/tau}/2)]).
/// Short times are Gaussian, C ~ exp(-c t^3/6); long times exponential with
/// rate c*tau^2/2.
double analytic_coherence(const OUParams& params, double t);

/// Diffusion constant that makes the coherence above reach 1/e at t = T2:
///   c = 2 / (tau^2 * [T2 - tau*(3/2 - 2e^{-T2/tau} + e^{-2T2/tau}/2)]).
/// Evaluated in a cancellation-safe form; valid for any tau, T2 > 0.
double diffusion_from_T2(double T2, double tau);

/// Two-sided OU spectral density S(f) = c*tau^2 / (1 + (2*pi*f*tau)^2),
/// normalized so that the integral over all f equals the stationary
/// variance c*tau/2.
double spectral_density_analytic(const OUParams& params, double f);

/// Rectangular-window periodogram with the convention
///   P(f_n) = |dt * DFT_n|^2 / T,   f_n = n/T,  n = 0..M/2,
/// which for an OU input converges (ensemble-averaged) to the two-sided
/// analytic density above.  Uses an FFT; M need not be a power of two.
SpectralEstimate periodogram(const NoiseRealization& realization);

/// Average the power of several estimates on a common grid.
SpectralEstimate average_spectra(const std::vector<SpectralEstimate>& spectra);

}  // namespace rabi_ccd
