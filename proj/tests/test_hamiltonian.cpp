#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>

#include "rabi_ccd/fock.hpp"
#include "rabi_ccd/hamiltonian.hpp"

using namespace rabi_ccd;

namespace {

const cdouble kI{0.0, 1.0};

double max_abs(const Eigen::MatrixXcd& m) { return m.cwiseAbs().maxCoeff(); }

Eigen::VectorXcd random_vector(int n, unsigned seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::VectorXcd v(n);
  for (int k = 0; k < n; ++k) v(k) = cdouble(normal(engine), normal(engine));
  return v / v.norm();
}

// Independent dense reconstruction of the driven-ion Hamiltonian:
//   H(t) = dm/2 sigma_z
//        + sum_j Omega_j env_j(t) (1+amp_j)/2 [sigma^+ D_j(t) e^{i(Delta_j t - phi_j)} + h.c.]
// with D_j(t) the displacement of i eta_j e^{i nu t}, built directly instead
// of through the phase-scaled D_j(0) used by the production path.
Eigen::MatrixXcd dense_reference(double t, const LayerConfig& cfg,
                                 const NoiseSnapshot& noise, int n_fock) {
  auto ops = build_operator_set(n_fock);
  Eigen::MatrixXcd h = 0.5 * noise.dephasing * ops.sz;
  for (const auto& laser : cfg.lasers) {
    const cdouble alpha = kI * laser.eta * std::polar(1.0, cfg.nu * t);
    const Eigen::MatrixXcd d = displacement_matrix(alpha, n_fock);
    const double amp = 1.0 + noise.amp(laser.amplitude_channel);
    const cdouble coeff = 0.5 * laser.omega * laser.envelope.value(t) * amp *
                          std::polar(1.0, laser.delta * t - laser.phi);
    Eigen::MatrixXcd term = Eigen::MatrixXcd::Zero(2 * n_fock, 2 * n_fock);
    term.topRightCorner(n_fock, n_fock) = coeff * d;
    h += term + term.adjoint();
  }
  return h;
}

LayerConfig demo_config(int n_channels) {
  RabiTargets targets{1.0, 0.25, 2.0 * M_PI * 5e3};
  auto real = params_from_targets(Model::rabi, 2, targets, {}, HardwareParams{});
  LayerConfig cfg;
  cfg.nu = real.nu;
  cfg.lasers = real.lasers;
  for (std::size_t j = 0; j < cfg.lasers.size(); ++j) {
    cfg.lasers[j].amplitude_channel =
        n_channels > 0 ? int(j) % n_channels : -1;
  }
  for (int c = 0; c < n_channels; ++c) cfg.amplitude_noise.push_back({1e-3, 2e-3, 0.0});
  cfg.dephasing = {50e-6, 2.7e11, 0.0};
  return cfg;
}

NoiseSnapshot demo_noise(int n_channels) {
  NoiseSnapshot noise;
  noise.dephasing = 2.0 * M_PI * 317.0;
  noise.amplitude = Eigen::ArrayXd::Zero(n_channels);
  for (int c = 0; c < n_channels; ++c) noise.amplitude(c) = 1e-3 * (c + 1) * (c % 2 ? -1 : 1);
  return noise;
}

}  // namespace

TEST_CASE("envelope values") {
  Envelope constant;
  CHECK(constant.value(0.0) == 1.0);
  CHECK(constant.value(123.0) == 1.0);

  Envelope cosine{Envelope::Kind::cosine, 2.0 * M_PI * 200e3, 0.0};
  CHECK(cosine.value(0.0) == 2.0);
  const double t = 1.7e-6;
  CHECK(cosine.value(t) == doctest::Approx(2.0 * std::cos(cosine.mod_freq * t)).epsilon(1e-14));

  Envelope ramp{Envelope::Kind::linear_ramp, 0.0, 2.0e-3};
  CHECK(ramp.value(0.0) == 0.0);
  CHECK(ramp.value(0.5e-3) == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(ramp.value(2.0e-3) == 1.0);
  CHECK(ramp.value(5.0e-3) == 1.0);  // clamps after the ramp
}

TEST_CASE("quench envelope is a linear ramp to the final value") {
  const double tau_q = 1.5e-3, omega_f = 2.0 * M_PI * 1e4;
  CHECK(quench_envelope(0.0, tau_q, omega_f) == 0.0);
  CHECK(quench_envelope(tau_q, tau_q, omega_f) == doctest::Approx(omega_f).epsilon(1e-14));
  CHECK(quench_envelope(tau_q / 2, tau_q, omega_f) ==
        doctest::Approx(omega_f / 2).epsilon(1e-14));
  CHECK_THROWS_AS(quench_envelope(-1e-9, tau_q, omega_f), std::invalid_argument);
  CHECK_THROWS_AS(quench_envelope(tau_q * 1.001, tau_q, omega_f), std::invalid_argument);
  CHECK_THROWS_AS(quench_envelope(0.0, 0.0, omega_f), std::invalid_argument);
}

TEST_CASE("layer Hamiltonian equals the direct dense reconstruction") {
  const int n_fock = 14;
  auto cfg = demo_config(2);
  auto noise = demo_noise(2);
  auto ops = build_operator_set(n_fock);

  for (double t : {0.0, 3.7e-5, 8.1e-4}) {
    Eigen::MatrixXcd ref = dense_reference(t, cfg, noise, n_fock);
    Eigen::MatrixXcd got = build_layer_hamiltonian(t, cfg, noise, ops);
    CHECK(max_abs(got - ref) < 1e-9 * max_abs(ref));
  }
}

TEST_CASE("layer Hamiltonian is Hermitian for every model and layer") {
  RabiTargets rt{1.0, 0.25, 2.0 * M_PI * 5e3};
  DiracTargets dt{2.0, 2.0 * M_PI * 1.25e3};
  const int n_fock = 10;
  auto ops = build_operator_set(n_fock);

  for (Model model : {Model::rabi, Model::dirac}) {
    for (int layer = 0; layer < 3; ++layer) {
      auto real = params_from_targets(model, layer, rt, dt, HardwareParams{});
      LayerConfig cfg;
      cfg.nu = real.nu;
      cfg.lasers = real.lasers;
      for (auto& l : cfg.lasers) l.amplitude_channel = 0;
      cfg.amplitude_noise.push_back({1e-3, 2e-3, 0.0});
      auto noise = demo_noise(1);
      for (double t : {0.0, 2.9e-5, 6.4e-4}) {
        Eigen::MatrixXcd h = build_layer_hamiltonian(t, cfg, noise, ops);
        CHECK(max_abs(h - h.adjoint()) < 1e-10 * max_abs(h));
      }
    }
  }
}

TEST_CASE("prepared fast-apply path matches the dense matrix") {
  const int n_fock = 12;
  auto cfg = demo_config(3);
  auto noise = demo_noise(3);
  LayerHamiltonian h(cfg, n_fock);
  REQUIRE(h.dim() == 2 * n_fock);

  for (double t : {0.0, 1.3e-5, 4.2e-4}) {
    Eigen::MatrixXcd dense = h.matrix(t, noise);
    h.prepare(t, noise);
    for (unsigned seed : {11u, 12u}) {
      Eigen::VectorXcd x = random_vector(2 * n_fock, seed);
      Eigen::VectorXcd y(2 * n_fock);
      h.apply(x, y);
      CHECK((y - dense * x).norm() < 1e-11 * dense.norm());
    }
  }
}

TEST_CASE("core-frame factorization reproduces the full apply") {
  // H = W C W^dag with W the prepared diagonal phases: rotating a vector in,
  // applying the core and rotating back must equal the direct product.
  const int n_fock = 12;
  auto cfg = demo_config(3);
  auto noise = demo_noise(3);
  LayerHamiltonian h(cfg, n_fock);
  REQUIRE(h.has_core());

  for (double t : {0.0, 1.3e-5, 4.2e-4}) {
    h.prepare(t, noise);
    for (unsigned seed : {21u, 22u}) {
      Eigen::VectorXcd x = random_vector(2 * n_fock, seed);
      Eigen::VectorXcd direct(2 * n_fock), framed(2 * n_fock);
      h.apply(x, direct);
      Eigen::VectorXcd xc = x;
      h.to_core_frame(xc);
      h.apply_core(xc, framed);
      h.from_core_frame(framed);
      CHECK((framed - direct).norm() < 1e-12 * direct.norm());
    }
  }
}

TEST_CASE("core-frame rotations are inverse to each other") {
  const int n_fock = 10;
  LayerHamiltonian h(demo_config(2), n_fock);
  h.prepare(7.7e-5, demo_noise(2));
  Eigen::VectorXcd x = random_vector(2 * n_fock, 31u);
  Eigen::VectorXcd y = x;
  h.to_core_frame(y);
  h.from_core_frame(y);
  CHECK((y - x).norm() < 1e-14 * x.norm());
}

TEST_CASE("clone is independent of the original's prepared state") {
  const int n_fock = 8;
  auto cfg = demo_config(1);
  auto n1 = demo_noise(1);
  auto n2 = demo_noise(1);
  n2.dephasing *= -3.0;

  LayerHamiltonian h(cfg, n_fock);
  h.prepare(2e-5, n1);
  auto copy = h.clone();
  copy->prepare(7e-4, n2);

  Eigen::VectorXcd x = random_vector(2 * n_fock, 21);
  Eigen::VectorXcd y1(2 * n_fock), y2(2 * n_fock);
  h.apply(x, y1);
  copy->apply(x, y2);
  CHECK((y1 - h.matrix(2e-5, n1) * x).norm() < 1e-11 * y1.norm());
  CHECK((y2 - h.matrix(7e-4, n2) * x).norm() < 1e-11 * y2.norm());
  CHECK((y1 - y2).norm() > 1e-6 * y1.norm());
}

TEST_CASE("amplitude noise enters each line linearly") {
  const int n_fock = 10;
  auto cfg = demo_config(0);
  cfg.lasers[0].amplitude_channel = 0;
  cfg.amplitude_noise.push_back({1e-3, 2e-3, 0.0});
  auto ops = build_operator_set(n_fock);

  NoiseSnapshot clean;
  clean.amplitude = Eigen::ArrayXd::Zero(1);
  NoiseSnapshot bumped = clean;
  bumped.amplitude(0) = 0.25;

  const double t = 5.5e-5;
  Eigen::MatrixXcd h0 = build_layer_hamiltonian(t, cfg, clean, ops);
  Eigen::MatrixXcd h1 = build_layer_hamiltonian(t, cfg, bumped, ops);

  // the difference is 0.25 x the clean contribution of laser 0 alone
  LayerConfig only0 = cfg;
  only0.lasers = {cfg.lasers[0]};
  Eigen::MatrixXcd l0 = build_layer_hamiltonian(t, only0, clean, ops);
  CHECK(max_abs((h1 - h0) - 0.25 * l0) < 1e-10 * max_abs(l0));
}

TEST_CASE("noise snapshot channel lookup") {
  NoiseSnapshot noise;
  noise.amplitude = Eigen::ArrayXd::Constant(2, 0.7);
  CHECK(noise.amp(-1) == 0.0);
  CHECK(noise.amp(0) == 0.7);
  CHECK(noise.amp(1) == 0.7);
}

TEST_CASE("qubit Hamiltonian matrix and apply") {
  QubitHamiltonian h(2.0 * M_PI * 5e3, 0);
  NoiseSnapshot noise;
  noise.dephasing = 700.0;
  noise.amplitude = Eigen::ArrayXd::Constant(1, 0.01);

  Eigen::MatrixXcd m = h.matrix(0.0, noise);
  const double drive_half = 0.5 * 2.0 * M_PI * 5e3 * 1.01;
  CHECK(m(0, 0).real() == doctest::Approx(350.0).epsilon(1e-14));
  CHECK(m(1, 1).real() == doctest::Approx(-350.0).epsilon(1e-14));
  CHECK(m(0, 1).real() == doctest::Approx(drive_half).epsilon(1e-14));
  CHECK(max_abs(m - m.adjoint()) == 0.0);

  h.prepare(0.0, noise);
  Eigen::VectorXcd x = random_vector(2, 31), y(2);
  h.apply(x, y);
  CHECK((y - m * x).norm() < 1e-13 * m.norm());

  // channel -1 leaves the drive clean
  QubitHamiltonian clean(2.0 * M_PI * 5e3, -1);
  NoiseSnapshot none;
  none.dephasing = 700.0;
  Eigen::MatrixXcd mc = clean.matrix(0.0, none);
  CHECK(mc(0, 1).real() == doctest::Approx(0.5 * 2.0 * M_PI * 5e3).epsilon(1e-14));
}

TEST_CASE("ramped dense Hamiltonian interpolates A + f(t) B") {
  const int d = 6;
  Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(d, d);
  a = (a + a.adjoint()).eval();
  Eigen::MatrixXcd b = Eigen::MatrixXcd::Random(d, d);
  b = (b + b.adjoint()).eval();

  Envelope ramp{Envelope::Kind::linear_ramp, 0.0, 2.0};
  RampedDenseHamiltonian h(a, b, ramp);
  NoiseSnapshot none;
  CHECK(max_abs(h.matrix(0.0, none) - a) < 1e-14);
  CHECK(max_abs(h.matrix(0.5, none) - (a + 0.25 * b)) < 1e-14);
  CHECK(max_abs(h.matrix(5.0, none) - (a + b)) < 1e-14);

  h.prepare(0.5, none);
  Eigen::VectorXcd x = random_vector(d, 41), y(d);
  h.apply(x, y);
  CHECK((y - (a + 0.25 * b) * x).norm() < 1e-12 * x.norm() * max_abs(a));
}

TEST_CASE("laser tables: quantum Rabi layers") {
  const double wt = 2.0 * M_PI * 5e3;
  RabiTargets t{1.0, 0.25, wt};
  HardwareParams hw;
  const double lam = t.lambda();
  CHECK(lam == doctest::Approx(wt / 8.0).epsilon(1e-14));

  SUBCASE("layer 0: shifted sideband pair, frame rotating at drive and mode rates") {
    auto r = params_from_targets(Model::rabi, 0, t, {}, hw);
    REQUIRE(r.lasers.size() == 2);
    CHECK(r.lasers[0].omega == doctest::Approx(2.0 * lam / hw.eta12).epsilon(1e-14));
    CHECK(r.lasers[1].omega == doctest::Approx(2.0 * lam / hw.eta12).epsilon(1e-14));
    CHECK(r.lasers[0].delta == doctest::Approx(hw.nu + (t.omega_drive() - wt)).epsilon(1e-14));
    CHECK(r.lasers[1].delta == doctest::Approx(-hw.nu + (t.omega_drive() + wt)).epsilon(1e-14));
    CHECK(r.lasers[0].phi == doctest::Approx(1.5 * M_PI).epsilon(1e-14));
    CHECK(r.lasers[1].phi == doctest::Approx(1.5 * M_PI).epsilon(1e-14));
    CHECK(r.lasers[0].eta == hw.eta12);
    CHECK(r.frame.sz_rate == doctest::Approx(t.omega_drive()).epsilon(1e-14));
    CHECK(r.frame.mode_rate == doctest::Approx(wt).epsilon(1e-14));
    CHECK(r.frame.sx_rate == 0.0);
    CHECK(r.tls_axis == 'z');
    CHECK(r.perp_axis == 'x');
  }

  SUBCASE("layer 1: symmetric sidebands plus resonant carrier drive") {
    auto r = params_from_targets(Model::rabi, 1, t, {}, hw);
    REQUIRE(r.lasers.size() == 3);
    CHECK(r.lasers[0].delta == doctest::Approx(hw.nu - wt).epsilon(1e-14));
    CHECK(r.lasers[1].delta == doctest::Approx(-hw.nu + wt).epsilon(1e-14));
    CHECK(r.lasers[0].phi == 0.0);
    CHECK(r.lasers[1].phi == 0.0);
    CHECK(r.lasers[2].omega == doctest::Approx(t.omega_drive()).epsilon(1e-14));
    CHECK(r.lasers[2].delta == 0.0);
    CHECK(r.lasers[2].eta == hw.eta_ab);
    CHECK(r.frame.sz_rate == 0.0);
    CHECK(r.frame.mode_rate == doctest::Approx(wt).epsilon(1e-14));
    CHECK(r.tls_axis == 'x');
    CHECK(r.perp_axis == 'y');
  }

  SUBCASE("layer 2: doubled single sideband, strong drive, modulated second drive") {
    auto r = params_from_targets(Model::rabi, 2, t, {}, hw);
    REQUIRE(r.lasers.size() == 3);
    CHECK(r.lasers[0].omega == doctest::Approx(4.0 * lam / hw.eta12).epsilon(1e-14));
    CHECK(r.lasers[0].delta == doctest::Approx(hw.nu - wt).epsilon(1e-14));
    CHECK(r.lasers[0].phi == doctest::Approx(1.5 * M_PI).epsilon(1e-14));
    CHECK(r.lasers[1].omega == doctest::Approx(hw.omega_strong).epsilon(1e-14));
    CHECK(r.lasers[1].envelope.kind == Envelope::Kind::constant);
    CHECK(r.lasers[2].omega == doctest::Approx(t.omega_drive()).epsilon(1e-14));
    CHECK(r.lasers[2].phi == doctest::Approx(0.5 * M_PI).epsilon(1e-14));
    CHECK(r.lasers[2].envelope.kind == Envelope::Kind::cosine);
    CHECK(r.lasers[2].envelope.mod_freq == doctest::Approx(hw.omega_strong).epsilon(1e-14));
    CHECK(r.frame.sx_rate == doctest::Approx(hw.omega_strong).epsilon(1e-14));
    CHECK(r.frame.mode_rate == doctest::Approx(wt).epsilon(1e-14));
    CHECK(r.tls_axis == 'y');
    CHECK(r.perp_axis == 'x');
  }
}

TEST_CASE("laser tables: Dirac layers") {
  DiracTargets t{2.0, 2.0 * M_PI * 1.25e3};
  HardwareParams hw;
  const double mc2 = t.mc2();
  CHECK(mc2 == doctest::Approx(2.0 * t.c_d).epsilon(1e-14));

  SUBCASE("layer 0: pair shifted by twice the mass term") {
    auto r = params_from_targets(Model::dirac, 0, {}, t, hw);
    REQUIRE(r.lasers.size() == 2);
    CHECK(r.lasers[0].omega == doctest::Approx(t.c_d / hw.eta12).epsilon(1e-14));
    CHECK(r.lasers[0].delta == doctest::Approx(hw.nu + 2.0 * mc2).epsilon(1e-14));
    CHECK(r.lasers[1].delta == doctest::Approx(-hw.nu + 2.0 * mc2).epsilon(1e-14));
    CHECK(r.lasers[0].phi == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(r.lasers[1].phi == 0.0);
    CHECK(r.frame.sz_rate == doctest::Approx(2.0 * mc2).epsilon(1e-14));
    CHECK(r.frame.mode_rate == 0.0);
    CHECK(r.tls_axis == 'z');
    CHECK(r.perp_axis == 'x');
  }

  SUBCASE("layer 1: resonant quadrature pair plus mass drive, identity frame") {
    auto r = params_from_targets(Model::dirac, 1, {}, t, hw);
    REQUIRE(r.lasers.size() == 3);
    CHECK(r.lasers[0].delta == doctest::Approx(hw.nu).epsilon(1e-14));
    CHECK(r.lasers[1].delta == doctest::Approx(-hw.nu).epsilon(1e-14));
    CHECK(r.lasers[0].phi == doctest::Approx(1.5 * M_PI).epsilon(1e-14));
    CHECK(r.lasers[1].phi == doctest::Approx(0.5 * M_PI).epsilon(1e-14));
    CHECK(r.lasers[2].omega == doctest::Approx(2.0 * mc2).epsilon(1e-14));
    CHECK(r.lasers[2].eta == hw.eta_ab);
    CHECK(r.frame.sz_rate == 0.0);
    CHECK(r.frame.mode_rate == 0.0);
    CHECK(r.frame.sx_rate == 0.0);
    CHECK(r.tls_axis == 'x');
    CHECK(r.perp_axis == 'y');
  }

  SUBCASE("layer 2: doubled sideband, strong drive, modulated mass drive") {
    auto r = params_from_targets(Model::dirac, 2, {}, t, hw);
    REQUIRE(r.lasers.size() == 3);
    CHECK(r.lasers[0].omega == doctest::Approx(2.0 * t.c_d / hw.eta12).epsilon(1e-14));
    CHECK(r.lasers[0].phi == doctest::Approx(M_PI).epsilon(1e-14));
    CHECK(r.lasers[1].omega == doctest::Approx(hw.omega_strong).epsilon(1e-14));
    CHECK(r.lasers[2].envelope.kind == Envelope::Kind::cosine);
    CHECK(r.frame.sx_rate == doctest::Approx(hw.omega_strong).epsilon(1e-14));
    CHECK(r.tls_axis == 'y');
    CHECK(r.perp_axis == 'x');
  }
}

TEST_CASE("frame map matches its dense unitary and inverts cleanly") {
  const int n_fock = 7;
  FrameMap frame{1000.0, 7000.0, 500.0};
  const double t = 2.3e-4;

  QuantumState s;
  s.n_fock = n_fock;
  s.amplitudes = random_vector(2 * n_fock, 51);

  // dense G(t) = SX(t) SZ(t) MODE(t)
  auto ops = build_operator_set(n_fock);
  Eigen::MatrixXcd mode = Eigen::MatrixXcd::Zero(2 * n_fock, 2 * n_fock);
  for (int q = 0; q < 2; ++q)
    for (int k = 0; k < n_fock; ++k)
      mode(q * n_fock + k, q * n_fock + k) = std::polar(1.0, frame.mode_rate * t * k);
  Eigen::MatrixXcd szp = Eigen::MatrixXcd::Zero(2 * n_fock, 2 * n_fock);
  szp.topLeftCorner(n_fock, n_fock) =
      std::polar(1.0, 0.5 * frame.sz_rate * t) * Eigen::MatrixXcd::Identity(n_fock, n_fock);
  szp.bottomRightCorner(n_fock, n_fock) =
      std::polar(1.0, -0.5 * frame.sz_rate * t) * Eigen::MatrixXcd::Identity(n_fock, n_fock);
  const double half = 0.5 * frame.sx_rate * t;
  Eigen::MatrixXcd sxr =
      std::cos(half) * Eigen::MatrixXcd::Identity(2 * n_fock, 2 * n_fock) -
      kI * std::sin(half) * ops.sx;
  Eigen::MatrixXcd g = sxr * szp * mode;

  auto forward = frame.apply(s, t, 1);
  CHECK((forward.amplitudes - g * s.amplitudes).norm() < 1e-12);
  CHECK(forward.norm() == doctest::Approx(1.0).epsilon(1e-13));

  auto back = frame.apply(forward, t, -1);
  CHECK((back.amplitudes - s.amplitudes).norm() < 1e-12);

  auto adjoint = frame.apply(s, t, -1);
  CHECK((adjoint.amplitudes - g.adjoint() * s.amplitudes).norm() < 1e-12);

  // G(0) = 1
  auto at_zero = frame.apply(s, 0.0, 1);
  CHECK((at_zero.amplitudes - s.amplitudes).norm() == 0.0);

  CHECK_THROWS_AS(frame.apply(s, t, 0), std::invalid_argument);
}

TEST_CASE("ideal Rabi Hamiltonian against a hand-built matrix") {
  const int n_fock = 9;
  auto ops = build_operator_set(n_fock);
  RabiTargets t{50.0, 1.0, 2.0 * M_PI * 400.0};

  // z/x axes: blocks [[ W/2 + w n, -lam x ], [ -lam x, -W/2 + w n ]]
  Eigen::MatrixXcd h = ideal_rabi_hamiltonian(t, 'z', 'x', ops);
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(2 * n_fock, 2 * n_fock);
  ref.topLeftCorner(n_fock, n_fock) =
      0.5 * t.omega_drive() * Eigen::MatrixXcd::Identity(n_fock, n_fock) +
      t.omega_tilde * ops.mode_n;
  ref.bottomRightCorner(n_fock, n_fock) =
      -0.5 * t.omega_drive() * Eigen::MatrixXcd::Identity(n_fock, n_fock) +
      t.omega_tilde * ops.mode_n;
  ref.topRightCorner(n_fock, n_fock) = -t.lambda() * (ops.mode_a + ops.mode_adag);
  ref.bottomLeftCorner(n_fock, n_fock) = -t.lambda() * (ops.mode_a + ops.mode_adag);
  CHECK(max_abs(h - ref) < 1e-10);
  CHECK(max_abs(h - h.adjoint()) < 1e-10);

  // coupling_scale enters linearly through the coupling term only
  Eigen::MatrixXcd h0 = ideal_rabi_hamiltonian(t, 'z', 'x', ops, 0.0);
  Eigen::MatrixXcd hs = ideal_rabi_hamiltonian(t, 'z', 'x', ops, 0.37);
  CHECK(max_abs((hs - h0) - 0.37 * (h - h0)) < 1e-10);

  // lambda scale: g = 1, R = 50 gives lambda = w sqrt(50)/2
  CHECK(t.lambda() == doctest::Approx(0.5 * t.omega_tilde * std::sqrt(50.0)).epsilon(1e-14));
}

TEST_CASE("ideal Dirac Hamiltonian against a hand-built matrix") {
  const int n_fock = 9;
  auto ops = build_operator_set(n_fock);
  DiracTargets t{2.0, 2.0 * M_PI * 1.25e3};

  // x/y axes as produced by the layer-1 table
  Eigen::MatrixXcd h = ideal_dirac_hamiltonian(t, 'x', 'y', ops);
  Eigen::MatrixXcd p = Eigen::MatrixXcd::Zero(n_fock, n_fock);
  for (int k = 0; k + 1 < n_fock; ++k) {
    p(k + 1, k) = kI * 0.5 * std::sqrt(double(k + 1));   // i a^dag / 2
    p(k, k + 1) = -kI * 0.5 * std::sqrt(double(k + 1));  // -i a / 2
  }
  Eigen::MatrixXcd ref = Eigen::MatrixXcd::Zero(2 * n_fock, 2 * n_fock);
  //   sigma_y (x) p:  [[0, -i p],[i p, 0]];  sigma_x (x) 1: [[0, 1],[1, 0]]
  ref.topRightCorner(n_fock, n_fock) =
      -kI * t.c_d * p + t.mc2() * Eigen::MatrixXcd::Identity(n_fock, n_fock);
  ref.bottomLeftCorner(n_fock, n_fock) =
      kI * t.c_d * p + t.mc2() * Eigen::MatrixXcd::Identity(n_fock, n_fock);
  CHECK(max_abs(h - ref) < 1e-10);
  CHECK(max_abs(h - h.adjoint()) < 1e-10);
}

TEST_CASE("configuration validation") {
  RabiTargets rt{1.0, 0.25, 2.0 * M_PI * 5e3};
  CHECK_THROWS_AS(params_from_targets(Model::rabi, 3, rt, {}, HardwareParams{}),
                  std::invalid_argument);
  HardwareParams bad;
  bad.eta12 = 0.0;
  CHECK_THROWS_AS(params_from_targets(Model::rabi, 0, rt, {}, bad), std::invalid_argument);
  RabiTargets rt_bad{1.0, 0.25, 0.0};
  CHECK_THROWS_AS(params_from_targets(Model::rabi, 0, rt_bad, {}, HardwareParams{}),
                  std::invalid_argument);
  DiracTargets dt_bad{2.0, 0.0};
  CHECK_THROWS_AS(params_from_targets(Model::dirac, 0, {}, dt_bad, HardwareParams{}),
                  std::invalid_argument);

  LayerConfig cfg = demo_config(0);
  cfg.lasers[0].amplitude_channel = 2;  // no channel 2 declared
  CHECK_THROWS_AS(LayerHamiltonian(cfg, 8), std::invalid_argument);

  LayerConfig no_lasers;
  no_lasers.nu = 1.0;
  CHECK_THROWS_AS(LayerHamiltonian(no_lasers, 8), std::invalid_argument);

  CHECK_THROWS_AS(QubitHamiltonian(-1.0, -1), std::invalid_argument);
}
