#include "floqgate/hamiltonians.hpp"

#include <cmath>
#include <limits>
#include <numbers>

namespace floqgate {

namespace {

constexpr double kPi = std::numbers::pi;

// 87Rb constants for the quadratic Zeeman shift.
constexpr double kElectronG = 2.00231930436;
constexpr double kBohrMagnetonHzPerGauss = 1.39962449361e6;
constexpr double kNuclearGInBohrUnits = -0.0009951414;
constexpr double kHyperfineSplittingHz = 6.834682610904e9;
constexpr double kNuclearSpin = 1.5;
constexpr double kLinearZeemanHzPerGauss = 0.7e6;

double j0_series(double x) {
  const double y = -0.25 * x * x;
  double term = 1.0;
  double sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= y / (double(k) * double(k));
    sum += term;
    if (std::abs(term) < 1e-17 * std::max(1.0, std::abs(sum)) && k > 2) break;
  }
  return sum;
}

// J0(x) ~ sqrt(2/(pi x)) [P cos(x - pi/4) - Q sin(x - pi/4)], truncated at
// the smallest term of the divergent series.
double j0_asymptotic(double x) {
  double p = 0.0, q = 0.0;
  double a = 1.0;  // |a_k| / x^k
  double prev = std::numeric_limits<double>::infinity();
  for (int k = 0; k < 200; ++k) {
    if (k > 0) a *= double((2 * k - 1) * (2 * k - 1)) / (8.0 * k * x);
    if (a > prev) break;
    prev = a;
    if (k % 2 == 0)
      p += ((k / 2) % 2 == 0 ? a : -a);
    else
      q -= (((k - 1) / 2) % 2 == 0 ? a : -a);
    if (a < 1e-18) break;
  }
  const double chi = x - kPi / 4;
  return std::sqrt(2.0 / (kPi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

}  // namespace

const SpinOperators<double>& spin_ops(Spin spin) {
  static const std::vector<SpinOperators<double>> table = [] {
    std::vector<SpinOperators<double>> t;
    for (int two_f = 0; two_f < kMaxDim; ++two_f)
      t.push_back(spin_matrices<double>(Spin::from_twice(two_f)));
    return t;
  }();
  return table[static_cast<std::size_t>(spin.twice())];
}

double bessel_j0(double x) {
  const double ax = std::abs(x);
  return ax <= 12.0 ? j0_series(ax) : j0_asymptotic(ax);
}

double g_factor(double omega0, double omega) {
  if (!(omega > 0)) throw std::invalid_argument("g_factor: omega must be positive");
  return 1.0 - bessel_j0(omega0 / omega);
}

std::array<Matrix, 3> GaugeConnection::operator()(const Vec3& q) const {
  const auto& ops = spin_ops(spin);
  // (F x q)_i = eps_ijk F_j q_k
  return {Matrix(g * (q[2] * ops.fy - q[1] * ops.fz)), Matrix(g * (q[0] * ops.fz - q[2] * ops.fx)),
          Matrix(g * (q[1] * ops.fx - q[0] * ops.fy))};
}

Matrix GaugeConnection::contract(const Vec3& q, const Vec3& dq) const {
  return g * spin_ops(spin).dot(q.cross(dq));
}

Matrix h_rotating(double t, const ParameterLoop& loop, const DrivingConfig& config,
                  RotatingTerms terms) {
  const auto& ops = spin_ops(config.spin);
  Matrix h = (config.omega0 * std::cos(config.omega * t)) * ops.dot(q_of_t(loop, t));
  if (terms.detuning) h += ops.dot(config.delta);
  if (terms.quadratic_zeeman) h += quadratic_zeeman(config);
  return h;
}

Matrix h_lab(double t, const ParameterLoop& loop, const DrivingConfig& config) {
  const auto& ops = spin_ops(config.spin);
  const double amp = rf_amplitude(loop, t, config.omega0, config.omega);
  const double phase = rf_phase(loop, t, config.omega0, config.omega);
  return amp * std::sin(config.omega_rf * t + phase) * ops.fx + config.omega_z * ops.fz;
}

UnitaryD micromotion(double t, const ParameterLoop& loop, const DrivingConfig& config) {
  const Matrix v = config.omega0 * spin_ops(config.spin).dot(q_of_t(loop, t));
  return expm_generator<double>(v, std::sin(config.omega * t) / config.omega);
}

Matrix h_floquet(double t, const ParameterLoop& loop, const DrivingConfig& config) {
  const GaugeConnection conn{g_factor(config.omega0, config.omega), config.spin};
  return conn.contract(q_of_t(loop, t), dq_dt(loop, t));
}

Matrix h_detuning_floquet(double t, const ParameterLoop& loop, const DrivingConfig& config) {
  const auto& ops = spin_ops(config.spin);
  const double g = g_factor(config.omega0, config.omega);
  const Vec3 q = q_of_t(loop, t);
  return (1.0 - g) * ops.dot(config.delta) + (g * q.dot(config.delta)) * ops.dot(q);
}

Matrix quadratic_zeeman(const DrivingConfig& config) {
  const auto& ops = spin_ops(config.spin);
  const int n = ops.dim();
  return config.epsilon * (Matrix::Identity(n, n) - ops.fz * ops.fz);
}

double epsilon_from_zeeman(double omega_z, int sign) {
  if (omega_z < 0) throw std::invalid_argument("epsilon_from_zeeman: omega_z must be >= 0");
  const double moment_hz = (kElectronG - kNuclearGInBohrUnits) * kBohrMagnetonHzPerGauss;
  const double ratio = moment_hz / (kLinearZeemanHzPerGauss * (1.0 + 2.0 * kNuclearSpin));
  const double hyperfine = hz_to_rad(kHyperfineSplittingHz);
  return (sign < 0 ? -1.0 : 1.0) * ratio * ratio * omega_z * omega_z / hyperfine;
}

Matrix floquet_average(const Matrix& static_term, const Vec3& q, double drive_ratio, Spin spin) {
  const auto& ops = spin_ops(spin);
  const double theta = std::atan2(std::hypot(q[0], q[1]), q[2]);
  const double phi = std::atan2(q[1], q[0]);
  // W Fz W^dag = q.F
  const Matrix w = (expm_generator<double>(ops.fz, phi) * expm_generator<double>(ops.fy, theta))
                       .matrix();
  Matrix in_q_basis = w.adjoint() * static_term * w;
  const int n = ops.dim();
  for (int j = 0; j < n; ++j)
    for (int k = 0; k < n; ++k)
      if (j != k) in_q_basis(j, k) *= bessel_j0(drive_ratio * (spin.m_of_index(j) - spin.m_of_index(k)));
  return w * in_q_basis * w.adjoint();
}

Matrix h_floquet_total(double t, const ParameterLoop& loop, const DrivingConfig& config) {
  Matrix h = h_floquet(t, loop, config);
  if (config.delta.squaredNorm() > 0) h += h_detuning_floquet(t, loop, config);
  if (config.epsilon != 0.0)
    h += floquet_average(quadratic_zeeman(config), q_of_t(loop, t), config.drive_ratio(),
                         config.spin);
  return h;
}

}  // namespace floqgate
