#include "rabi_ccd/hamiltonian.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace rabi_ccd {

double Envelope::value(double t) const {
  switch (kind) {
    case Kind::constant: return 1.0;
    case Kind::cosine: return 2.0 * std::cos(mod_freq * t);
    case Kind::linear_ramp:
      if (t <= 0.0) return 0.0;
      return t >= ramp_time ? 1.0 : t / ramp_time;
  }
  throw std::logic_error("unknown envelope kind");
}

double quench_envelope(double t, double tau_q, double omega_f) {
  if (tau_q <= 0.0) throw std::invalid_argument("tau_q must be > 0");
  if (t < 0.0 || t > tau_q) {
    throw std::invalid_argument("quench_envelope: t outside [0, tau_q]");
  }
  return omega_f * t / tau_q;
}

namespace {

void validate_layer_config(const LayerConfig& config) {
  if (config.nu <= 0.0) throw std::invalid_argument("layer config: nu must be > 0");
  if (config.lasers.empty()) throw std::invalid_argument("layer config: no lasers");
  for (const LaserConfig& l : config.lasers) {
    if (l.omega < 0.0 || l.eta < 0.0) {
      throw std::invalid_argument("layer config: omega and eta must be >= 0");
    }
    if (l.amplitude_channel >= static_cast<int>(config.amplitude_noise.size())) {
      throw std::invalid_argument("layer config: amplitude channel out of range");
    }
  }
}

void check_snapshot(const NoiseSnapshot& noise, const LayerConfig& config) {
  for (const LaserConfig& l : config.lasers) {
    if (l.amplitude_channel >= 0 &&
        l.amplitude_channel >= static_cast<int>(noise.amplitude.size())) {
      throw std::invalid_argument("noise snapshot missing amplitude channel");
    }
  }
}

}  // namespace

LayerHamiltonian::LayerHamiltonian(const LayerConfig& config, int n_fock)
    : config_(config), n_fock_(n_fock) {
  if (n_fock < 2) throw std::invalid_argument("n_fock must be >= 2");
  validate_layer_config(config);
  d0_.reserve(config_.lasers.size());
  for (const LaserConfig& l : config_.lasers) {
    d0_.push_back(displacement_matrix(cdouble(0.0, l.eta), n_fock));
  }
  u_.resize(n_fock);
  m_sum_.resize(n_fock, n_fock);
  w1_.resize(n_fock);
  w2_.resize(n_fock);
  coeff_.resize(config_.lasers.size());
}

void LayerHamiltonian::prepare(double t, const NoiseSnapshot& noise) {
  check_snapshot(noise, config_);
  dm_half_ = 0.5 * noise.dephasing;
  const cdouble w = std::polar(1.0, config_.nu * t);
  u_(0) = 1.0;
  for (int k = 1; k < n_fock_; ++k) u_(k) = u_(k - 1) * w;
  const std::size_t nl = config_.lasers.size();
  std::vector<cdouble>& c = coeff_;
  for (std::size_t j = 0; j < nl; ++j) {
    const LaserConfig& l = config_.lasers[j];
    const double amp =
        0.5 * l.omega * l.envelope.value(t) * (1.0 + noise.amp(l.amplitude_channel));
    c[j] = amp * std::polar(1.0, l.delta * t - l.phi);
  }
  // fuse the common laser counts into one coefficient-wise pass
  switch (nl >= 3 ? 3 : nl) {
    case 1: m_sum_.noalias() = c[0] * d0_[0]; break;
    case 2: m_sum_ = c[0] * d0_[0] + c[1] * d0_[1]; break;
    case 3: m_sum_ = c[0] * d0_[0] + c[1] * d0_[1] + c[2] * d0_[2]; break;
  }
  for (std::size_t j = 3; j < nl; ++j) m_sum_.noalias() += c[j] * d0_[j];
}

void LayerHamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  const int n = n_fock_;
  y.resize(2 * n);
  const auto xu = x.head(n);
  const auto xd = x.tail(n);
  w1_ = u_.conjugate().cwiseProduct(xd);
  w2_.noalias() = m_sum_ * w1_;
  y.head(n) = dm_half_ * xu + u_.cwiseProduct(w2_);
  w1_ = u_.conjugate().cwiseProduct(xu);
  w2_.noalias() = m_sum_.adjoint() * w1_;
  y.tail(n) = (-dm_half_) * xd + u_.cwiseProduct(w2_);
}

void LayerHamiltonian::to_core_frame(Eigen::VectorXcd& psi) const {
  const int n = n_fock_;
  psi.head(n).array() *= u_.array().conjugate();
  psi.tail(n).array() *= u_.array().conjugate();
}

void LayerHamiltonian::from_core_frame(Eigen::VectorXcd& psi) const {
  const int n = n_fock_;
  psi.head(n).array() *= u_.array();
  psi.tail(n).array() *= u_.array();
}

void LayerHamiltonian::apply_core(const Eigen::VectorXcd& x,
                                  Eigen::VectorXcd& y) const {
  const int n = n_fock_;
  y.resize(2 * n);
  y.head(n).noalias() = m_sum_ * x.tail(n);
  y.tail(n).noalias() = m_sum_.adjoint() * x.head(n);
  if (dm_half_ != 0.0) {
    y.head(n) += dm_half_ * x.head(n);
    y.tail(n) -= dm_half_ * x.tail(n);
  }
}

Eigen::MatrixXcd LayerHamiltonian::matrix(double t, const NoiseSnapshot& noise) const {
  LayerHamiltonian tmp(*this);
  tmp.prepare(t, noise);
  const int n = n_fock_;
  Eigen::MatrixXcd b = tmp.u_.asDiagonal() * tmp.m_sum_ * tmp.u_.conjugate().asDiagonal();
  Eigen::MatrixXcd h = Eigen::MatrixXcd::Zero(2 * n, 2 * n);
  h.topLeftCorner(n, n) = tmp.dm_half_ * Eigen::MatrixXcd::Identity(n, n);
  h.bottomRightCorner(n, n) = -tmp.dm_half_ * Eigen::MatrixXcd::Identity(n, n);
  h.topRightCorner(n, n) = b;
  h.bottomLeftCorner(n, n) = b.adjoint();
  return h;
}

std::unique_ptr<TimeDependentHamiltonian> LayerHamiltonian::clone() const {
  return std::make_unique<LayerHamiltonian>(*this);
}

QubitHamiltonian::QubitHamiltonian(double drive_omega, int amplitude_channel)
    : drive_omega_(drive_omega), channel_(amplitude_channel) {
  if (drive_omega < 0.0) throw std::invalid_argument("drive omega must be >= 0");
}

void QubitHamiltonian::prepare(double t, const NoiseSnapshot& noise) {
  (void)t;
  dm_half_ = 0.5 * noise.dephasing;
  drive_half_ = 0.5 * drive_omega_ * (1.0 + noise.amp(channel_));
}

void QubitHamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  y.resize(2);
  y(0) = dm_half_ * x(0) + drive_half_ * x(1);
  y(1) = drive_half_ * x(0) - dm_half_ * x(1);
}

Eigen::MatrixXcd QubitHamiltonian::matrix(double t, const NoiseSnapshot& noise) const {
  QubitHamiltonian tmp(*this);
  tmp.prepare(t, noise);
  Eigen::MatrixXcd h(2, 2);
  h << tmp.dm_half_, tmp.drive_half_, tmp.drive_half_, -tmp.dm_half_;
  return h;
}

std::unique_ptr<TimeDependentHamiltonian> QubitHamiltonian::clone() const {
  return std::make_unique<QubitHamiltonian>(*this);
}

RampedDenseHamiltonian::RampedDenseHamiltonian(Eigen::MatrixXcd a, Eigen::MatrixXcd b,
                                               Envelope ramp)
    : a_(std::move(a)), b_(std::move(b)), ramp_(ramp) {
  if (a_.rows() != a_.cols() || b_.rows() != b_.cols() || a_.rows() != b_.rows()) {
    throw std::invalid_argument("RampedDenseHamiltonian: size mismatch");
  }
  h_.resize(a_.rows(), a_.cols());
}

void RampedDenseHamiltonian::prepare(double t, const NoiseSnapshot& noise) {
  (void)noise;
  h_.noalias() = a_ + ramp_.value(t) * b_;
}

void RampedDenseHamiltonian::apply(const Eigen::VectorXcd& x, Eigen::VectorXcd& y) const {
  y.resize(h_.rows());
  y.noalias() = h_ * x;
}

Eigen::MatrixXcd RampedDenseHamiltonian::matrix(double t, const NoiseSnapshot& noise) const {
  (void)noise;
  return a_ + ramp_.value(t) * b_;
}

std::unique_ptr<TimeDependentHamiltonian> RampedDenseHamiltonian::clone() const {
  return std::make_unique<RampedDenseHamiltonian>(*this);
}

Eigen::MatrixXcd build_layer_hamiltonian(double t, const LayerConfig& config,
                                         const NoiseSnapshot& noise,
                                         const OperatorSet& ops) {
  LayerHamiltonian h(config, ops.n_fock);
  return h.matrix(t, noise);
}

double RabiTargets::lambda() const { return 0.5 * g * omega_tilde * std::sqrt(R); }

namespace {

QuantumState apply_mode_phase(const QuantumState& s, double theta) {
  QuantumState out = s;
  const int n = s.n_fock;
  for (int k = 0; k < n; ++k) {
    const cdouble ph = std::polar(1.0, theta * k);
    out.amplitudes(k) *= ph;
    out.amplitudes(n + k) *= ph;
  }
  return out;
}

QuantumState apply_sz_phase(const QuantumState& s, double phi) {
  QuantumState out = s;
  const int n = s.n_fock;
  out.amplitudes.head(n) *= std::polar(1.0, 0.5 * phi);
  out.amplitudes.tail(n) *= std::polar(1.0, -0.5 * phi);
  return out;
}

QuantumState apply_sx_rot(const QuantumState& s, double alpha) {
  QuantumState out = s;
  const int n = s.n_fock;
  const double c = std::cos(0.5 * alpha);
  const cdouble ms(0.0, -std::sin(0.5 * alpha));
  const Eigen::VectorXcd up = s.amplitudes.head(n);
  const Eigen::VectorXcd dn = s.amplitudes.tail(n);
  out.amplitudes.head(n) = c * up + ms * dn;
  out.amplitudes.tail(n) = ms * up + c * dn;
  return out;
}

}  // namespace

QuantumState FrameMap::apply(const QuantumState& state, double t, int direction) const {
  if (direction != 1 && direction != -1) {
    throw std::invalid_argument("frame direction must be +1 or -1");
  }
  QuantumState s = state;
  if (direction == 1) {
    if (mode_rate != 0.0) s = apply_mode_phase(s, mode_rate * t);
    if (sz_rate != 0.0) s = apply_sz_phase(s, sz_rate * t);
    if (sx_rate != 0.0) s = apply_sx_rot(s, sx_rate * t);
  } else {
    if (sx_rate != 0.0) s = apply_sx_rot(s, -sx_rate * t);
    if (sz_rate != 0.0) s = apply_sz_phase(s, -sz_rate * t);
    if (mode_rate != 0.0) s = apply_mode_phase(s, -mode_rate * t);
  }
  return s;
}

LayerRealization params_from_targets(Model model, int layer, const RabiTargets& rabi,
                                     const DiracTargets& dirac,
                                     const HardwareParams& hw) {
  if (layer < 0 || layer > 2) throw std::invalid_argument("layer must be 0, 1 or 2");
  if (hw.nu <= 0.0 || hw.eta12 <= 0.0 || hw.eta_ab <= 0.0) {
    throw std::invalid_argument("hardware parameters must be positive");
  }
  LayerRealization r;
  r.model = model;
  r.layer = layer;
  r.nu = hw.nu;
  r.rabi = rabi;
  r.dirac = dirac;
  const double pi = M_PI;

  if (model == Model::rabi) {
    if (rabi.omega_tilde <= 0.0 || rabi.R <= 0.0 || rabi.g < 0.0) {
      throw std::invalid_argument("rabi targets must be positive");
    }
    const double wt = rabi.omega_tilde;
    const double om_drive = rabi.omega_drive();
    const double lam = rabi.lambda();
    switch (layer) {
      case 0: {
        // sideband pair at Delta = +-nu shifted by the two detunings
        // delta_{1,2} = Omega_drive -+ omega_tilde; both phases 3*pi/2.
        const double om12 = 2.0 * lam / hw.eta12;
        const double d1 = om_drive - wt;
        const double d2 = om_drive + wt;
        r.lasers = {{om12, hw.nu + d1, 1.5 * pi, hw.eta12, {}, -1},
                    {om12, -hw.nu + d2, 1.5 * pi, hw.eta12, {}, -1}};
        r.frame = {om_drive, wt, 0.0};
        r.tls_axis = 'z';
        r.perp_axis = 'x';
        break;
      }
      case 1: {
        // symmetric sidebands detuned by the effective mode frequency plus a
        // resonant carrier drive; sideband phases 0 put the coupling on the
        // axis orthogonal to the drive.
        const double om12 = 2.0 * lam / hw.eta12;
        r.lasers = {{om12, hw.nu - wt, 0.0, hw.eta12, {}, -1},
                    {om12, -hw.nu + wt, 0.0, hw.eta12, {}, -1},
                    {om_drive, 0.0, 0.0, hw.eta_ab, {}, -1}};
        r.frame = {0.0, wt, 0.0};
        r.tls_axis = 'x';
        r.perp_axis = 'y';
        break;
      }
      case 2: {
        // single sideband at doubled amplitude, a strong resonant first
        // drive, and a second drive modulated at the first drive's rate.
        const double om1 = 4.0 * lam / hw.eta12;
        Envelope mod{Envelope::Kind::cosine, hw.omega_strong, 0.0};
        r.lasers = {{om1, hw.nu - wt, 1.5 * pi, hw.eta12, {}, -1},
                    {hw.omega_strong, 0.0, 0.0, hw.eta_ab, {}, -1},
                    {om_drive, 0.0, 0.5 * pi, hw.eta_ab, mod, -1}};
        r.frame = {0.0, wt, hw.omega_strong};
        r.tls_axis = 'y';
        r.perp_axis = 'x';
        break;
      }
    }
    return r;
  }

  // Dirac
  if (dirac.c_d <= 0.0 || dirac.r < 0.0) {
    throw std::invalid_argument("dirac targets must be positive");
  }
  const double cd = dirac.c_d;
  const double mc2 = dirac.mc2();
  switch (layer) {
    case 0: {
      // sideband pair shifted by delta = 2 m c^2, phases pi and 0.
      const double om12 = cd / hw.eta12;
      const double delta = 2.0 * mc2;
      r.lasers = {{om12, hw.nu + delta, pi, hw.eta12, {}, -1},
                  {om12, -hw.nu + delta, 0.0, hw.eta12, {}, -1}};
      r.frame = {delta, 0.0, 0.0};
      r.tls_axis = 'z';
      r.perp_axis = 'x';
      break;
    }
    case 1: {
      // resonant sidebands with quadrature phases plus a carrier drive
      // supplying the mass term.
      const double om12 = cd / hw.eta12;
      r.lasers = {{om12, hw.nu, 1.5 * pi, hw.eta12, {}, -1},
                  {om12, -hw.nu, 0.5 * pi, hw.eta12, {}, -1},
                  {2.0 * mc2, 0.0, 0.0, hw.eta_ab, {}, -1}};
      r.frame = {0.0, 0.0, 0.0};
      r.tls_axis = 'x';
      r.perp_axis = 'y';
      break;
    }
    case 2: {
      const double om1 = 2.0 * cd / hw.eta12;
      Envelope mod{Envelope::Kind::cosine, hw.omega_strong, 0.0};
      r.lasers = {{om1, hw.nu, pi, hw.eta12, {}, -1},
                  {hw.omega_strong, 0.0, 0.0, hw.eta_ab, {}, -1},
                  {2.0 * mc2, 0.0, 0.5 * pi, hw.eta_ab, mod, -1}};
      r.frame = {0.0, 0.0, hw.omega_strong};
      r.tls_axis = 'y';
      r.perp_axis = 'x';
      break;
    }
  }
  return r;
}

Eigen::MatrixXcd ideal_rabi_hamiltonian(const RabiTargets& t, char tls_axis,
                                        char perp_axis, const OperatorSet& ops,
                                        double coupling_scale) {
  if (t.omega_tilde <= 0.0) throw std::invalid_argument("omega_tilde must be > 0");
  return 0.5 * t.omega_drive() * ops.sigma(tls_axis) + t.omega_tilde * ops.n -
         (t.lambda() * coupling_scale) * (ops.sigma(perp_axis) * (ops.a + ops.adag));
}

Eigen::MatrixXcd ideal_dirac_hamiltonian(const DiracTargets& t, char tls_axis,
                                         char perp_axis, const OperatorSet& ops) {
  if (t.c_d <= 0.0) throw std::invalid_argument("c_d must be > 0");
  return t.c_d * (ops.sigma(perp_axis) * ops.p) + t.mc2() * ops.sigma(tls_axis);
}

}  // namespace rabi_ccd
