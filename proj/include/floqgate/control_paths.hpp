// Closed paths (Theta(t), Phi(t)) on the control sphere and the RF waveforms
// that realize them.
#ifndef FLOQGATE_CONTROL_PATHS_HPP
#define FLOQGATE_CONTROL_PATHS_HPP

#include "floqgate/driving_config.hpp"

#include <functional>
#include <string>
#include <string_view>
#include <vector>

namespace floqgate {

/// l1..l6 are the experimental loops; p1..p3 the great circles used for the
/// trace commutator.
enum class LoopLabel { L1, L2, L3, L4, L5, L6, P1, P2, P3, Custom };

std::string to_string(LoopLabel label);
LoopLabel parse_loop_label(std::string_view text);
const std::vector<LoopLabel>& experimental_loops();

using AngleFn = std::function<double(double)>;

struct ParameterLoop {
  AngleFn theta, phi;    // radians
  AngleFn dtheta, dphi;  // rad/s, analytic
  double duration = 0.0;
  LoopLabel label = LoopLabel::Custom;
  std::string name;

  /// Theta = theta0 + n_theta * rate * t, Phi = phi0 + n_phi * rate * t over
  /// one period 2 pi / rate. Integer windings keep the path closed.
  static ParameterLoop linear(double theta0, double theta_winding, double phi0, double phi_winding,
                              double loop_rate, std::string name = "custom");

  /// Same path traversed backwards.
  ParameterLoop reversed() const;

  /// |q(0) - q(T)|
  double closure_gap() const;
};

ParameterLoop catalog_loop(LoopLabel label, double loop_rate);

Vec3 q_of_t(const ParameterLoop& loop, double t);
Vec3 dq_dt(const ParameterLoop& loop, double t);

/// 2 Omega0 sin(Theta) cos(omega t)
double rf_amplitude(const ParameterLoop& loop, double t, double omega0, double omega);

/// Phi + pi/2 - Omega0 * integral_0^t cos(Theta) cos(omega t') dt'
double rf_phase(const ParameterLoop& loop, double t, double omega0, double omega);

/// Prefix-sum evaluation of rf_phase on an increasing time grid.
std::vector<double> rf_phase_on_grid(const ParameterLoop& loop, const std::vector<double>& times,
                                     double omega0, double omega);

struct Waveform {
  double sample_rate = 0.0;  // Hz
  std::vector<double> t;
  std::vector<double> amplitude;  // rad/s (Rabi units)
};

/// Samples of Omega~(t) sin(omega_rf t + phi~(t)) over [0, T].
Waveform synthesize_waveform(const ParameterLoop& loop, const DrivingConfig& config,
                             double sample_rate);

}  // namespace floqgate

#endif  // FLOQGATE_CONTROL_PATHS_HPP
