#include <doctest.h>

#include "floqgate/gauge_analysis.hpp"
#include "floqgate/hamiltonians.hpp"
#include "floqgate/propagation.hpp"
#include "oracles.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace floqgate;

namespace {
constexpr double kPi = std::numbers::pi;
const cplx I(0, 1);
const std::vector<double> kSpins{0.5, 1.0, 1.5, 2.0};

// tr(G3 [G2, G1]) from the closed-form great-circle holonomies
cplx brute_trace_commutator(Spin spin, double g) {
  const Matrix g1 = holonomy_closed_form(LoopLabel::P1, g, spin).matrix();
  const Matrix g2 = holonomy_closed_form(LoopLabel::P2, g, spin).matrix();
  const Matrix g3 = holonomy_closed_form(LoopLabel::P3, g, spin).matrix();
  return (g3 * (g2 * g1 - g1 * g2)).trace();
}
}  // namespace

TEST_CASE("fidelity") {
  std::mt19937_64 rng(4);
  const UnitaryD u(oracle::haar_unitary(3, rng));
  const UnitaryD v(oracle::haar_unitary(3, rng));
  CHECK(fidelity(u, u) == doctest::Approx(1.0));
  CHECK(fidelity(UnitaryD(std::exp(I * 0.73) * u.matrix()), u) == doctest::Approx(1.0));
  CHECK(fidelity(u, v) == doctest::Approx(fidelity(v, u)));
  CHECK(fidelity(u, v) >= 0.0);
  CHECK(fidelity(u, v) <= 1.0);
  CHECK_THROWS_AS(fidelity(u, UnitaryD::identity(2)), std::invalid_argument);

  const double g = 0.234802;
  const auto half = Spin::from_value(0.5);
  const auto rot = expm_generator<double>(spin_ops(half).fy, 2 * kPi * g);
  CHECK(fidelity(UnitaryD::identity(2), rot) == doctest::Approx(std::abs(std::cos(kPi * g))).epsilon(1e-12));
  CHECK(fidelity(UnitaryD::identity(2), rot) == doctest::Approx(0.74005).epsilon(1e-5));
}

TEST_CASE("Wilson loops") {
  CHECK(std::abs(wilson_loop(UnitaryD::identity(3)) - 3.0) < 1e-15);
  const double g = 0.234802;
  const auto one = Spin::from_value(1.0);
  const auto gz = expm_generator<double>(spin_ops(one).fz, 2 * kPi * g);
  CHECK(std::abs(wilson_loop(gz) - (1 + 2 * std::cos(2 * kPi * g))) < 1e-12);

  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix v = oracle::haar_unitary(3, rng);
    const UnitaryD gamma(oracle::haar_unitary(3, rng));
    CHECK(std::abs(wilson_loop(UnitaryD(v * gamma.matrix() * v.adjoint())) - wilson_loop(gamma)) < 1e-12);
  }
}

TEST_CASE("Wilson loop is invariant under a static rotation of the connection") {
  // Rotating the whole loop by R conjugates the holonomy by the spin-F image of R.
  const double g = g_factor(1, 1);
  const Spin spin = Spin::from_value(1.0);
  const auto loop = catalog_loop(LoopLabel::L5, 1.0);
  Eigen::Matrix3d rot = Eigen::AngleAxisd(0.7, Vec3(1, -2, 0.5).normalized()).toRotationMatrix();
  ParameterLoop rotated = loop;
  rotated.theta = [loop, rot](double t) { return std::acos(std::clamp((rot * q_of_t(loop, t))[2], -1.0, 1.0)); };
  rotated.phi = [loop, rot](double t) {
    const Vec3 q = rot * q_of_t(loop, t);
    return std::atan2(q[1], q[0]);
  };
  // derivatives only enter through dq_dt, unused by the path-ordered product
  const auto a = holonomy_path_ordered(loop, g, spin, 4000);
  const auto b = holonomy_path_ordered(rotated, g, spin, 4000);
  CHECK(std::abs(wilson_loop(a) - wilson_loop(b)) < 1e-10);
}

TEST_CASE("Wigner d-matrix") {
  for (double f : kSpins) {
    const Spin spin = Spin::from_value(f);
    const auto& ops = spin_ops(spin);
    CHECK((wigner_d_matrix(spin, 0.0) - Eigen::MatrixXd::Identity(spin.dim(), spin.dim())).cwiseAbs().maxCoeff() <
          1e-14);
    for (double beta = 0.0; beta < 2 * kPi; beta += 0.137) {
      const Eigen::MatrixXd d = wigner_d_matrix(spin, beta);
      // rows orthonormal
      CHECK((d * d.transpose() - Eigen::MatrixXd::Identity(spin.dim(), spin.dim())).cwiseAbs().maxCoeff() < 1e-10);
      // agrees with the exponential of Fy
      const Matrix rot = oracle::expm_taylor(Matrix(-I * beta * ops.fy));
      CHECK((d.cast<cplx>() - rot).cwiseAbs().maxCoeff() < 1e-10);
      for (int i = 0; i < spin.dim(); ++i)
        for (int j = 0; j < spin.dim(); ++j) {
          const double m = spin.m_of_index(i), mp = spin.m_of_index(j);
          const double sign = std::lround(m - mp) % 2 == 0 ? 1.0 : -1.0;
          CHECK(std::abs(d(i, j) - sign * wigner_d(spin, mp, m, beta)) < 1e-12);
          CHECK(std::abs(d(i, j) - wigner_d(spin, -mp, -m, beta)) < 1e-12);
        }
    }
  }
  const double b = 0.81;
  const auto half = wigner_d_matrix(Spin::from_value(0.5), b);
  CHECK(half(0, 0) == doctest::Approx(std::cos(b / 2)));
  CHECK(half(0, 1) == doctest::Approx(-std::sin(b / 2)));
  CHECK(half(1, 0) == doctest::Approx(std::sin(b / 2)));
  CHECK_THROWS_AS(wigner_d(Spin::from_value(1.0), 2.0, 0.0, 0.3), std::invalid_argument);
  CHECK_THROWS_AS(wigner_d(Spin::from_value(1.0), 0.5, 0.0, 0.3), std::invalid_argument);
}

TEST_CASE("Euler rotations") {
  for (double f : kSpins) {
    const Spin spin = Spin::from_value(f);
    const auto& ops = spin_ops(spin);
    const int n = spin.dim();
    CHECK(oracle::max_abs(rotation_euler(spin, 0, 0, 0).matrix() - Matrix::Identity(n, n)) < 1e-14);
    CHECK(oracle::max_abs(rotation_euler(spin, 0, 1.1, 0).matrix() -
                          expm_generator<double>(ops.fy, 1.1).matrix()) < 1e-10);
    const auto r = rotation_euler(spin, 0.4, 2.2, -1.3);
    CHECK(unitarity_defect(r.matrix()) < 1e-12);
    const Matrix zyz = (expm_generator<double>(ops.fz, 0.4) * expm_generator<double>(ops.fy, 2.2) *
                        expm_generator<double>(ops.fz, -1.3))
                           .matrix();
    CHECK(oracle::max_abs(r.matrix() - zyz) < 1e-10);
  }
}

TEST_CASE("analytic trace commutator against the brute-force matrix product") {
  const double g = 0.234802;
  for (double f : kSpins) {
    const Spin spin = Spin::from_value(f);
    const cplx brute = brute_trace_commutator(spin, g);
    CAPTURE(f);
    CHECK(std::abs(brute.imag()) < 1e-12);
    CHECK(std::abs(trace_commutator_analytic(spin, g) - brute.real()) < 1e-10);
    CHECK(trace_commutator_analytic(spin, 0.0) == 0.0);
  }
  // F = 1/2 by hand: the three rotations are by 2 pi g about -x, y and z
  CHECK(trace_commutator_analytic(Spin::from_value(0.5), g) == doctest::Approx(1.21686).epsilon(1e-4));
}

TEST_CASE("reversing every loop flips the sign of the trace commutator") {
  const double g = 0.234802;
  for (double f : kSpins) {
    const Spin spin = Spin::from_value(f);
    std::array<Matrix, 3> rev;
    int k = 0;
    for (auto label : {LoopLabel::P1, LoopLabel::P2, LoopLabel::P3})
      rev[static_cast<std::size_t>(k++)] =
          holonomy_path_ordered(catalog_loop(label, 1.0).reversed(), g, spin, 20000).matrix();
    const cplx reversed = (rev[2] * (rev[1] * rev[0] - rev[0] * rev[1])).trace();
    CHECK(std::abs(reversed.real() + trace_commutator_analytic(spin, g)) < 1e-7);
  }
}

TEST_CASE("numeric trace commutator at zero detuning") {
  for (double f : {0.5, 1.0, 2.0}) {
    const auto cfg = DrivingConfig::operating_point(Spin::from_value(f));
    const auto rep = trace_commutator_numeric(cfg);
    const double g = g_factor(cfg.omega0, cfg.omega);
    CHECK(std::abs(rep.difference - cplx(trace_commutator_analytic(cfg.spin, g), 0.0)) < 1e-8);
    CHECK(std::abs(rep.difference.imag()) < 1e-8);
  }
  auto cfg = DrivingConfig::operating_point(Spin::from_value(1.0));
  CHECK_THROWS_AS(trace_commutator_numeric(cfg, {LoopLabel::P1, LoopLabel::P1, LoopLabel::P3}),
                  std::invalid_argument);
  // the literally reversed triple gives -I
  const auto swapped = trace_commutator_numeric(cfg, {LoopLabel::P3, LoopLabel::P2, LoopLabel::P1});
  CHECK(std::abs(swapped.difference.real() + trace_commutator_analytic(cfg.spin, g_factor(1, 1))) < 1e-8);
}

TEST_CASE("numeric trace commutator under detuning") {
  const auto one = DrivingConfig::operating_point(Spin::from_value(1.0));
  const auto two = DrivingConfig::operating_point(Spin::from_value(2.0));
  // sign change along Delta_z for F = 1
  double prev = trace_commutator_numeric(one).difference.real();
  bool crossed = false;
  for (int k = 1; k <= 40 && !crossed; ++k) {
    const double cur = trace_commutator_numeric(one.with_delta_z(0.01 * k * one.omega0)).difference.real();
    crossed = (cur > 0) != (prev > 0);
    prev = cur;
  }
  CHECK(crossed);
  const double dz = 0.05 * one.omega0;
  CHECK(std::abs(trace_commutator_numeric(one.with_delta_z(dz)).difference -
                 trace_commutator_numeric(two.with_delta_z(dz)).difference) > 1e-3);
}

TEST_CASE("fidelity versus detuning") {
  const auto cfg = DrivingConfig::operating_point(Spin::from_value(1.0));
  const double g = g_factor(cfg.omega0, cfg.omega);
  const auto l3 = catalog_loop(LoopLabel::L3, cfg.loop_rate);
  const double revival = revival_detuning(g, l3.duration);
  CHECK(revival == doctest::Approx(cfg.loop_rate / (1 - g)));
  const auto curve = fidelity_vs_detuning(l3, cfg, {0.0, 0.5 * revival, revival, 2 * revival});
  REQUIRE(curve.size() == 4);
  CHECK(curve[0].fidelity == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(curve[1].fidelity < 0.5);
  CHECK(curve[2].fidelity >= 0.999);
  CHECK(curve[3].fidelity >= 0.999);
  CHECK(curve[2].delta_z == revival);
  CHECK_THROWS_AS(fidelity_vs_detuning(l3, cfg, {std::nan("")}), std::invalid_argument);
}

TEST_CASE("SU(2) membership of zero-detuning holonomies") {
  for (double f : {0.5, 1.0, 1.5, 2.0}) {
    const auto cfg = DrivingConfig::operating_point(Spin::from_value(f));
    const double g = g_factor(cfg.omega0, cfg.omega);
    for (auto label : experimental_loops()) {
      const auto u = holonomy_nonadiabatic(catalog_loop(label, cfg.loop_rate), cfg);
      CHECK(su2_projection(u).residual <= 1e-8);
    }
    const auto fit = su2_projection(holonomy_closed_form(LoopLabel::L1, g, cfg.spin));
    CHECK(fit.angle == doctest::Approx(2 * kPi * g));
    CHECK((fit.axis - Vec3::UnitY()).norm() < 1e-10);
  }
  // a generic SU(3) element is not the image of a rotation
  std::mt19937_64 rng(12);
  CHECK(su2_projection(UnitaryD(oracle::haar_unitary(3, rng))).residual > 1e-2);
}
