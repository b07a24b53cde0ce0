// Physical rates of the Floquet-driven spin. Every frequency is angular (rad/s).
#ifndef FLOQGATE_DRIVING_CONFIG_HPP
#define FLOQGATE_DRIVING_CONFIG_HPP

#include "floqgate/spin_algebra.hpp"

#include <numbers>

namespace floqgate {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

inline double hz_to_rad(double hz) { return kTwoPi * hz; }
inline double rad_to_hz(double rad_per_s) { return rad_per_s / kTwoPi; }

struct DrivingConfig {
  Spin spin = Spin::from_twice(2);
  double omega0 = hz_to_rad(14.27e3);    // Rabi amplitude of the fictitious field
  double omega = hz_to_rad(14.27e3);     // Floquet drive
  double loop_rate = hz_to_rad(1.427e3); // traversal rate, T = 2 pi / loop_rate
  double omega_rf = hz_to_rad(1.25e6);   // RF carrier
  double omega_z = hz_to_rad(1.25e6);    // linear Zeeman splitting
  Vec3 delta = Vec3::Zero();             // static detuning vector
  double epsilon = 0.0;                  // quadratic Zeeman coefficient

  /// Omega0/omega = 1, loop rate Omega0/10 and a resonant carrier.
  static DrivingConfig operating_point(Spin spin, double omega0 = hz_to_rad(14.27e3)) {
    DrivingConfig c;
    c.spin = spin;
    c.omega0 = omega0;
    c.omega = omega0;
    c.loop_rate = omega0 / 10.0;
    return c;
  }

  double period() const { return kTwoPi / loop_rate; }
  double drive_ratio() const { return omega0 / omega; }

  /// Loop rate over Floquet drive; the adiabatic regime needs this small.
  double adiabaticity() const { return loop_rate / omega; }
  bool adiabaticity_warning() const { return adiabaticity() > 0.2; }

  void validate() const {
    if (!(omega0 > 0)) throw std::invalid_argument("DrivingConfig: omega0 must be positive");
    if (!(omega > 0)) throw std::invalid_argument("DrivingConfig: omega must be positive");
    if (!(loop_rate > 0)) throw std::invalid_argument("DrivingConfig: loop_rate must be positive");
    if (!delta.allFinite() || !std::isfinite(epsilon))
      throw std::invalid_argument("DrivingConfig: detuning and epsilon must be finite");
  }

  DrivingConfig with_delta(const Vec3& d) const {
    DrivingConfig c = *this;
    c.delta = d;
    return c;
  }
  DrivingConfig with_delta_z(double dz) const { return with_delta(Vec3(0.0, 0.0, dz)); }
};

}  // namespace floqgate

#endif  // FLOQGATE_DRIVING_CONFIG_HPP
