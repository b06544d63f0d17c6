#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>
#include <stdexcept>
#include <vector>

#include "rabi_ccd/fock.hpp"
#include "rabi_ccd/hamiltonian.hpp"
#include "rabi_ccd/observables.hpp"
#include "rabi_ccd/propagate.hpp"

using namespace rabi_ccd;

namespace {

const cdouble kI{0.0, 1.0};

QuantumState random_state(int n_fock, unsigned seed) {
  std::mt19937_64 engine(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  QuantumState s;
  s.n_fock = n_fock;
  s.amplitudes.resize(2 * n_fock);
  for (int k = 0; k < 2 * n_fock; ++k) s.amplitudes(k) = cdouble(normal(engine), normal(engine));
  s.amplitudes /= s.amplitudes.norm();
  return s;
}

QuantumState displaced_two_branch(int n_fock) {
  // (|up> D(0.5)|0> + |down> D(-0.3)|0>)/sqrt(2):  <x> = (1.0 - 0.6)/2 = 0.2
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n_fock);
  vac(0) = 1.0;
  QuantumState s;
  s.n_fock = n_fock;
  s.amplitudes.resize(2 * n_fock);
  s.amplitudes.head(n_fock) = displacement_matrix(cdouble(0.5, 0.0), n_fock) * vac;
  s.amplitudes.tail(n_fock) = displacement_matrix(cdouble(-0.3, 0.0), n_fock) * vac;
  s.amplitudes /= std::sqrt(2.0);
  return s;
}

}  // namespace

TEST_CASE("expectation values of embedded operators") {
  const int n_fock = 16;
  auto ops = build_operator_set(n_fock);

  auto up = ground_mode_state('z', 1, n_fock);
  CHECK(expectation(up, ops.sz) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(expectation(up, ops.sx) == doctest::Approx(0.0).epsilon(1e-14));
  CHECK(expectation(up, ops.n) == doctest::Approx(0.0).epsilon(1e-14));

  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n_fock);
  vac(0) = 1.0;
  auto coh = kron_state(Eigen::Vector2cd(1.0, 0.0),
                        displacement_matrix(cdouble(0.5, 0.0), n_fock) * vac);
  CHECK(expectation(coh, ops.x) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(expectation(coh, ops.n) == doctest::Approx(0.25).epsilon(1e-12));

  auto bad = random_state(4, 3);
  CHECK_THROWS_AS(expectation(bad, ops.sz), std::invalid_argument);
}

TEST_CASE("fidelity is symmetric and phase-blind") {
  auto a = random_state(8, 5);
  auto b = random_state(8, 6);
  CHECK(fidelity(a, b) == doctest::Approx(fidelity(b, a)).epsilon(1e-14));
  CHECK(fidelity(a, a) == doctest::Approx(1.0).epsilon(1e-14));

  QuantumState rotated = a;
  rotated.amplitudes *= std::polar(1.0, 1.234);
  CHECK(fidelity(a, rotated) == doctest::Approx(1.0).epsilon(1e-14));

  auto c = random_state(4, 7);
  CHECK_THROWS_AS(fidelity(a, c), std::invalid_argument);
}

TEST_CASE("ideal reference propagates a static Hamiltonian exactly") {
  const int n_fock = 10;
  auto ops = build_operator_set(n_fock);
  RabiTargets targets{1.0, 0.25, 2.0 * M_PI * 5e3};
  Eigen::MatrixXcd h = ideal_rabi_hamiltonian(targets, 'z', 'x', ops);
  auto s0 = ground_mode_state('x', 1, n_fock);

  IdealReference reference(h, s0);
  auto at_zero = reference.state_at(0.0);
  CHECK((at_zero.amplitudes - s0.amplitudes).norm() < 1e-12);
  CHECK(at_zero.n_fock == n_fock);

  const double t = 3.7e-4;
  QuantumState direct = s0;
  unitary_step(direct, h, t);
  auto via_reference = reference.state_at(t);
  CHECK((via_reference.amplitudes - direct.amplitudes).norm() < 1e-11);
  CHECK(via_reference.norm() == doctest::Approx(1.0).epsilon(1e-13));

  // energy is conserved along the reference evolution
  const double e0 = expectation(s0, h);
  const double et = expectation(reference.state_at(2e-3), h);
  CHECK(std::abs(et - e0) < 1e-8 * targets.omega_tilde);
}

TEST_CASE("ground state frozen constants at the critical coupling") {
  auto ops = build_operator_set(60);

  SUBCASE("R = 50") {
    RabiTargets t{50.0, 1.0, 2.0 * M_PI * 400.0};
    auto gs = rabi_ground_state(t, 'z', 'x', ops);
    CHECK(gs.energy / t.omega_tilde == doctest::Approx(-25.386144967727).epsilon(1e-10));
    CHECK(expectation(gs.state, ops.sz) == doctest::Approx(-0.968836912364).epsilon(1e-9));
    CHECK(expectation(gs.state, ops.n) == doctest::Approx(0.468251).epsilon(1e-5));
  }

  SUBCASE("R = 100") {
    RabiTargets t{100.0, 1.0, 2.0 * M_PI * 400.0};
    auto gs = rabi_ground_state(t, 'z', 'x', ops);
    CHECK(gs.energy / t.omega_tilde == doctest::Approx(-50.409512258230).epsilon(1e-10));
    CHECK(expectation(gs.state, ops.sz) == doctest::Approx(-0.979797401163).epsilon(1e-9));
  }

  SUBCASE("R = 1 at the time-evolution preset coupling") {
    RabiTargets t{1.0, 0.25, 2.0 * M_PI * 5e3};
    auto gs = rabi_ground_state(t, 'z', 'x', ops);
    CHECK(gs.energy / t.omega_tilde == doctest::Approx(-0.507843136782).epsilon(1e-10));
    CHECK(expectation(gs.state, ops.sz) == doctest::Approx(-0.992157044845).epsilon(1e-9));
    CHECK(expectation(gs.state, ops.n) == doctest::Approx(0.003983).epsilon(1e-3));
  }
}

TEST_CASE("ground state is converged in the truncation") {
  RabiTargets t{50.0, 1.0, 2.0 * M_PI * 400.0};
  auto ops60 = build_operator_set(60);
  auto ops120 = build_operator_set(120);
  auto gs60 = rabi_ground_state(t, 'z', 'x', ops60);
  auto gs120 = rabi_ground_state(t, 'z', 'x', ops120);
  CHECK(std::abs(gs60.energy - gs120.energy) / t.omega_tilde < 1e-8);
  CHECK(std::abs(expectation(gs60.state, ops60.sz) -
                 expectation(gs120.state, ops120.sz)) < 1e-8);
}

TEST_CASE("ground state expectation does not depend on the axis labels") {
  RabiTargets t{50.0, 1.0, 2.0 * M_PI * 400.0};
  auto ops = build_operator_set(60);
  auto zx = rabi_ground_state(t, 'z', 'x', ops);
  auto xy = rabi_ground_state(t, 'x', 'y', ops);
  auto yx = rabi_ground_state(t, 'y', 'x', ops);
  CHECK(expectation(xy.state, ops.sx) ==
        doctest::Approx(expectation(zx.state, ops.sz)).epsilon(1e-9));
  CHECK(expectation(yx.state, ops.sy) ==
        doctest::Approx(expectation(zx.state, ops.sz)).epsilon(1e-9));
  CHECK(xy.energy == doctest::Approx(zx.energy).epsilon(1e-12));
}

TEST_CASE("ground state phase convention is deterministic and variational") {
  RabiTargets t{50.0, 1.0, 2.0 * M_PI * 400.0};
  auto ops = build_operator_set(40);
  auto a = rabi_ground_state(t, 'z', 'x', ops);
  auto b = rabi_ground_state(t, 'z', 'x', ops);
  CHECK((a.state.amplitudes - b.state.amplitudes).norm() == 0.0);

  int imax = 0;
  double amax = 0.0;
  for (int k = 0; k < a.state.amplitudes.size(); ++k) {
    if (std::abs(a.state.amplitudes(k)) > amax) {
      amax = std::abs(a.state.amplitudes(k));
      imax = k;
    }
  }
  CHECK(a.state.amplitudes(imax).real() > 0.0);
  CHECK(std::abs(a.state.amplitudes(imax).imag()) < 1e-12);

  Eigen::MatrixXcd h = ideal_rabi_hamiltonian(t, 'z', 'x', ops);
  for (unsigned seed : {31u, 32u, 33u}) {
    CHECK(expectation(random_state(40, seed), h) > a.energy);
  }
}

TEST_CASE("scaling point combines ramp time and order parameter") {
  auto p = scaling_point(50.0, 2.0, -0.9, 0.01, -0.968836912364);
  CHECK(p.T == doctest::Approx(2.0 / 50.0).epsilon(1e-14));
  const double scale = std::pow(50.0, 2.0 / 3.0);
  CHECK(p.S == doctest::Approx(scale * std::abs(-0.9 + 0.968836912364)).epsilon(1e-12));
  CHECK(p.stderr_S == doctest::Approx(scale * 0.01).epsilon(1e-12));
  CHECK(p.R == 50.0);
  CHECK(p.tau_q_units == 2.0);
  CHECK_THROWS_AS(scaling_point(0.0, 1.0, 0.0, 0.0, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(scaling_point(50.0, 0.0, 0.0, 0.0, 0.0), std::invalid_argument);
}

TEST_CASE("ancilla readout: vacuum reads zero") {
  const int n_fock = 20;
  auto ops = build_operator_set(n_fock);
  auto vac = ground_mode_state('z', 1, n_fock);
  auto out = ancilla_position_readout(vac, ops, 2.0 * M_PI * 250.0,
                                      {1e-6, 2e-6, 3e-6, 4e-6, 5e-6});
  CHECK(std::abs(out.estimate) < 1e-10);
  REQUIRE(out.sigma_y.size() == 5);
  for (double y : out.sigma_y) CHECK(std::abs(y) < 1e-12);
}

TEST_CASE("ancilla readout recovers the position of a displaced state") {
  const int n_fock = 30;
  auto ops = build_operator_set(n_fock);
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n_fock);
  vac(0) = 1.0;
  auto coh = kron_state(Eigen::Vector2cd(1.0, 0.0),
                        displacement_matrix(cdouble(0.5, 0.0), n_fock) * vac);
  const double x_direct = expectation(coh, ops.x);
  CHECK(x_direct == doctest::Approx(1.0).epsilon(1e-12));

  std::vector<double> probes = {1e-6, 2e-6, 3e-6, 4e-6, 5e-6};
  auto out = ancilla_position_readout(coh, ops, 2.0 * M_PI * 250.0, probes);
  CHECK(out.estimate == doctest::Approx(x_direct).epsilon(1e-3));

  // the estimate does not depend on the probe rate (second-order residual)
  auto out4 = ancilla_position_readout(coh, ops, 4.0 * 2.0 * M_PI * 250.0, probes);
  CHECK(std::abs(out4.estimate - out.estimate) < 0.01);
}

TEST_CASE("ancilla readout error shrinks quadratically with the probe window") {
  const int n_fock = 30;
  auto ops = build_operator_set(n_fock);
  Eigen::VectorXcd vac = Eigen::VectorXcd::Zero(n_fock);
  vac(0) = 1.0;
  auto coh = kron_state(Eigen::Vector2cd(1.0, 0.0),
                        displacement_matrix(cdouble(0.5, 0.0), n_fock) * vac);

  const double probe_omega = 2.0 * M_PI * 2000.0;
  std::vector<double> full = {1e-6, 2e-6, 3e-6, 4e-6, 5e-6};
  std::vector<double> half;
  for (double t : full) half.push_back(t / 2.0);

  const double err_full =
      std::abs(ancilla_position_readout(coh, ops, probe_omega, full).estimate - 1.0);
  const double err_half =
      std::abs(ancilla_position_readout(coh, ops, probe_omega, half).estimate - 1.0);
  REQUIRE(err_full > 1e-5);  // resolvable above roundoff
  CHECK(err_full / err_half == doctest::Approx(4.0).epsilon(0.1));
}

TEST_CASE("ancilla readout agrees with the literal joint-system simulation") {
  const int n_fock = 20;
  auto ops = build_operator_set(n_fock);
  auto sys = displaced_two_branch(n_fock);
  CHECK(expectation(sys, ops.x) == doctest::Approx(0.2).epsilon(1e-10));

  const double probe_omega = 2.0 * M_PI * 250.0;
  std::vector<double> probes = {1e-6, 2e-6, 3e-6, 4e-6};
  auto reduced = ancilla_position_readout(sys, ops, probe_omega, probes);

  // ancilla (x) system state on the doubled space, ancilla index major
  const int d = 2 * n_fock;
  QuantumState joint;
  joint.n_fock = d;  // treat the whole system register as the "mode"
  joint.amplitudes.resize(2 * d);
  joint.amplitudes.head(d) = sys.amplitudes;
  joint.amplitudes.tail(d).setZero();

  Eigen::MatrixXcd coupling = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  coupling.topRightCorner(d, d) = probe_omega * ops.x;   // sigma_x^A (x) x
  coupling.bottomLeftCorner(d, d) = probe_omega * ops.x;
  Eigen::MatrixXcd sy_joint = Eigen::MatrixXcd::Zero(2 * d, 2 * d);
  sy_joint.topRightCorner(d, d) = -kI * Eigen::MatrixXcd::Identity(d, d);
  sy_joint.bottomLeftCorner(d, d) = kI * Eigen::MatrixXcd::Identity(d, d);

  for (std::size_t k = 0; k < probes.size(); ++k) {
    QuantumState evolved = joint;
    unitary_step(evolved, coupling, probes[k]);
    const double sy = expectation(evolved, sy_joint);
    CHECK(sy == doctest::Approx(reduced.sigma_y[k]).epsilon(1e-10));
  }

  CHECK(reduced.estimate == doctest::Approx(0.2).epsilon(1e-3));
}

TEST_CASE("ancilla readout validation") {
  const int n_fock = 8;
  auto ops = build_operator_set(n_fock);
  auto s = ground_mode_state('z', 1, n_fock);
  CHECK_THROWS_AS(ancilla_position_readout(s, ops, 0.0, {1e-6}), std::invalid_argument);
  CHECK_THROWS_AS(ancilla_position_readout(s, ops, 1.0, {}), std::invalid_argument);
  CHECK_THROWS_AS(ancilla_position_readout(s, ops, 1.0, {0.0}), std::invalid_argument);
  auto mismatched = ground_mode_state('z', 1, 10);
  CHECK_THROWS_AS(ancilla_position_readout(mismatched, ops, 1.0, {1e-6}),
                  std::invalid_argument);
}
