// Hamiltonians of the driven spin in the lab, rotating and Floquet frames.
//
// Sign convention: the micromotion operator is exp[-i V(t) sin(wt)/w] with
// V = Omega0 q.F. Under it the zeroth-band generator is g (q x dq/dt).F and
// loop l1 yields exp(-i 2 pi g Fy).
#ifndef FLOQGATE_HAMILTONIANS_HPP
#define FLOQGATE_HAMILTONIANS_HPP

#include "floqgate/control_paths.hpp"
#include "floqgate/driving_config.hpp"
#include "floqgate/spin_algebra.hpp"

#include <array>

namespace floqgate {

/// Cached spin matrices for every supported F.
const SpinOperators<double>& spin_ops(Spin spin);

/// Bessel function of the first kind, order zero. Power series for |x| <= 12,
/// Hankel asymptotic expansion beyond; absolute error below 1e-12 on [0, 50].
double bessel_j0(double x);

/// g = 1 - J0(omega0 / omega)
double g_factor(double omega0, double omega);

/// A(q) = g F x q
struct GaugeConnection {
  double g = 0.0;
  Spin spin = Spin::from_twice(1);

  std::array<Matrix, 3> operator()(const Vec3& q) const;
  /// dq . A(q) = g (q x dq) . F
  Matrix contract(const Vec3& q, const Vec3& dq) const;
};

/// Optional static terms added to the rotating-frame Hamiltonian.
struct RotatingTerms {
  bool detuning = false;
  bool quadratic_zeeman = false;
};

/// Omega0 (q.F) cos(omega t) [+ Delta.F] [+ eps (I - Fz^2)]
Matrix h_rotating(double t, const ParameterLoop& loop, const DrivingConfig& config,
                  RotatingTerms terms = {});

/// Omega~(t) sin(omega_rf t + phi~(t)) Fx + omega_z Fz
Matrix h_lab(double t, const ParameterLoop& loop, const DrivingConfig& config);

UnitaryD micromotion(double t, const ParameterLoop& loop, const DrivingConfig& config);

/// g (q x dq/dt) . F
Matrix h_floquet(double t, const ParameterLoop& loop, const DrivingConfig& config);

/// (1 - g) Delta.F + g (q.Delta)(q.F)
Matrix h_detuning_floquet(double t, const ParameterLoop& loop, const DrivingConfig& config);

/// eps (I - Fz^2)
Matrix quadratic_zeeman(const DrivingConfig& config);

/// |eps| = ((g_s muB - g_I muN) / (omega_B (1 + 2I)))^2 omega_z^2 / E_HF for
/// 87Rb, returned in rad/s with the requested sign.
double epsilon_from_zeeman(double omega_z, int sign = +1);

/// Zeroth-band average over one drive period of U^dag H U, with U the
/// micromotion at fixed q. Evaluated in the eigenbasis of q.F, where the
/// average of each matrix element reduces to J0(ratio (m_j - m_k)).
Matrix floquet_average(const Matrix& static_term, const Vec3& q, double drive_ratio, Spin spin);

/// Generator of the non-adiabatic holonomy: h_floquet + h_detuning_floquet +
/// zeroth-band average of the quadratic Zeeman term.
Matrix h_floquet_total(double t, const ParameterLoop& loop, const DrivingConfig& config);

}  // namespace floqgate

#endif  // FLOQGATE_HAMILTONIANS_HPP
