#include "floqgate/gauge_analysis.hpp"

#include "floqgate/hamiltonians.hpp"
#include "floqgate/parallel.hpp"
#include "floqgate/propagation.hpp"

#include <Eigen/Geometry>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace floqgate {

namespace {

constexpr double kPi = std::numbers::pi;

int as_int(double x) { return static_cast<int>(std::lround(x)); }

double log_factorial(int n) { return std::lgamma(double(n) + 1.0); }

}  // namespace

double fidelity(const UnitaryD& measured, const UnitaryD& target) {
  if (measured.dim() != target.dim())
    throw std::invalid_argument("fidelity: dimension mismatch (" + std::to_string(measured.dim()) +
                                " vs " + std::to_string(target.dim()) + ")");
  const double f = std::abs((target.matrix().adjoint() * measured.matrix()).trace()) / measured.dim();
  return std::clamp(f, 0.0, 1.0);
}

double wigner_d(Spin spin, double m, double m_prime, double beta) {
  spin.index_of_m(m);
  spin.index_of_m(m_prime);
  const double f = spin.value();
  // row a = m, column b = m'
  const int fpa = as_int(f + m), fma = as_int(f - m);
  const int fpb = as_int(f + m_prime), fmb = as_int(f - m_prime);
  const int b_minus_a = as_int(m_prime - m);
  const double c = std::cos(beta / 2), s = std::sin(beta / 2);
  const double log_norm =
      0.5 * (log_factorial(fpa) + log_factorial(fma) + log_factorial(fpb) + log_factorial(fmb));
  const int k_lo = std::max(0, b_minus_a);
  const int k_hi = std::min(fpb, fma);
  double sum = 0.0;
  for (int k = k_lo; k <= k_hi; ++k) {
    const double log_den = log_factorial(fpb - k) + log_factorial(k) + log_factorial(fma - k) +
                           log_factorial(k - b_minus_a);
    const int pc = spin.twice() - 2 * k + b_minus_a;
    const int ps = 2 * k - b_minus_a;
    const double sign = ((k - b_minus_a) % 2 == 0) ? 1.0 : -1.0;
    sum += sign * std::exp(log_norm - log_den) * std::pow(c, pc) * std::pow(s, ps);
  }
  return sum;
}

Eigen::MatrixXd wigner_d_matrix(Spin spin, double beta) {
  const int n = spin.dim();
  Eigen::MatrixXd d(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) d(i, j) = wigner_d(spin, spin.m_of_index(i), spin.m_of_index(j), beta);
  return d;
}

UnitaryD rotation_euler(Spin spin, double alpha, double beta, double gamma) {
  const int n = spin.dim();
  const Eigen::MatrixXd d = wigner_d_matrix(spin, beta);
  Matrix r(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      r(i, j) = std::polar(d(i, j), -alpha * spin.m_of_index(i) - gamma * spin.m_of_index(j));
  return UnitaryD(r);
}

double trace_commutator_analytic(Spin spin, double g) {
  const Eigen::MatrixXd d = wigner_d_matrix(spin, 2 * kPi * g);
  double sum = 0.0;
  for (int i = 0; i < spin.dim(); ++i) {
    const double m = spin.m_of_index(i);
    if (m <= 0) continue;
    for (int j = 0; j < spin.dim(); ++j) {
      const double mp = spin.m_of_index(j);
      const double sign = (as_int(m - mp) % 2 == 0) ? 1.0 : -1.0;
      sum += sign * std::sin(kPi * (mp - m) / 2) * std::sin(2 * kPi * m * g) * d(i, j) * d(i, j);
    }
  }
  return 4.0 * sum;
}

WilsonReport trace_commutator_numeric(const DrivingConfig& config,
                                      const std::array<LoopLabel, 3>& triple, double tol) {
  if (triple[0] == triple[1] || triple[1] == triple[2] || triple[0] == triple[2])
    throw std::invalid_argument("trace_commutator_numeric: loops must be distinct");
  std::array<Matrix, 3> gamma;
  for (std::size_t i = 0; i < 3; ++i)
    gamma[i] = holonomy_nonadiabatic(catalog_loop(triple[i], config.loop_rate), config, tol).matrix();
  WilsonReport rep;
  rep.ordering = triple;
  rep.w_ijk = (gamma[2] * gamma[1] * gamma[0]).trace();
  rep.w_jik = (gamma[2] * gamma[0] * gamma[1]).trace();
  rep.difference = rep.w_ijk - rep.w_jik;
  rep.delta = config.delta;
  rep.spin = config.spin;
  return rep;
}

std::vector<FidelityPoint> fidelity_vs_detuning(const ParameterLoop& loop,
                                                const DrivingConfig& config,
                                                const std::vector<double>& delta_z_grid,
                                                double tol) {
  for (double dz : delta_z_grid)
    if (!std::isfinite(dz)) throw std::invalid_argument("fidelity_vs_detuning: non-finite grid point");
  const UnitaryD target = holonomy_nonadiabatic(loop, config.with_delta(Vec3::Zero()), tol);
  return parallel_map(delta_z_grid.size(), [&](std::size_t i) {
    const double dz = delta_z_grid[i];
    const UnitaryD u = holonomy_nonadiabatic(loop, config.with_delta_z(dz), tol);
    return FidelityPoint{dz, fidelity(u, target)};
  });
}

double revival_detuning(double g, double loop_duration, int n) {
  return 2 * kPi * n / ((1.0 - g) * loop_duration);
}

Su2Fit su2_projection(const UnitaryD& u) {
  const Spin spin = Spin::from_twice(u.dim() - 1);
  Su2Fit fit;
  if (spin.twice() == 0) {
    fit.phase = u.matrix()(0, 0);
    return fit;
  }
  const auto& ops = spin_ops(spin);
  const Matrix& m = u.matrix();
  Eigen::Matrix3d r;
  for (int i = 0; i < 3; ++i) {
    const Matrix image = m * ops.component(i) * m.adjoint();
    for (int j = 0; j < 3; ++j)
      r(j, i) = (image * ops.component(j)).trace().real() /
                (ops.component(j) * ops.component(j)).trace().real();
  }
  // nearest proper rotation
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Eigen::Matrix3d rot = svd.matrixU() * svd.matrixV().transpose();
  if (rot.determinant() < 0) {
    Eigen::Matrix3d flip = Eigen::Matrix3d::Identity();
    flip(2, 2) = -1;
    rot = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  const Eigen::AngleAxisd aa(rot);
  fit.axis = aa.axis();
  fit.angle = aa.angle();
  const Matrix v = expm_generator<double>(ops.dot(fit.axis), fit.angle).matrix();
  const cplx overlap = (v.adjoint() * m).trace();
  fit.phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : cplx(1.0, 0.0);
  fit.residual = (m - fit.phase * v).cwiseAbs().maxCoeff();
  return fit;
}

}  // namespace floqgate
