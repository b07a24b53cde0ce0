// Experiment configuration: an INI file with frequencies in Hz, converted to
// angular units when a DrivingConfig is built.
#ifndef FLOQGATE_CONFIG_HPP
#define FLOQGATE_CONFIG_HPP

#include "floqgate/control_paths.hpp"
#include "floqgate/driving_config.hpp"
#include "floqgate/tomography.hpp"

#include <array>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace floqgate {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class EpsilonMode { Explicit, FromZeeman };

/// Theta = theta0 + theta_winding * Omega t, Phi = phi0 + phi_winding * Omega t.
struct CustomLoopSpec {
  double theta0 = std::numbers::pi / 2;
  double theta_winding = 0.0;
  double phi0 = 0.0;
  double phi_winding = 1.0;
};

struct SweepSpec {
  double span = 0.2;  // grid covers [-span, span] * Omega0
  int points = 201;
};

struct TomographySpec {
  int scans = 9;  // per loop
  std::vector<std::string> loops{"l1", "l2", "l3", "l4", "l5", "l6"};
  std::int64_t atom_count = 100000;
  double delta_mean_hz = 0.0;
  double scan_sigma_hz = 200.0;
  double record_sigma_hz = 200.0;
  double imaging_sigma = 0.0;
  int restarts = 8;
};

struct ExperimentConfig {
  double spin = 1.0;  // F
  std::string loop = "l1";
  CustomLoopSpec custom;

  double omega0_hz = 14.27e3;
  double drive_ratio = 1.0;  // Omega0 / omega
  double loop_ratio = 0.1;   // Omega / Omega0
  double omega_rf_hz = 1.25e6;
  double omega_z_hz = 1.25e6;
  std::array<double, 3> delta_hz{0.0, 0.0, 0.0};
  EpsilonMode epsilon_mode = EpsilonMode::Explicit;
  double epsilon_hz = 0.0;

  double tol = 1e-10;
  std::uint64_t seed = 1;
  std::string out_dir = "out";

  SweepSpec sweep;
  TomographySpec tomography;

  void validate() const;
  Spin spin_value() const { return Spin::from_value(spin); }
  DrivingConfig driving() const;
  LoopLabel loop_label() const;
  ParameterLoop parameter_loop() const;
  /// 2 span Omega0 / (points - 1) spaced Delta_z values, rad/s.
  std::vector<double> delta_grid() const;
  NoiseModel noise_model() const;
};

/// Missing keys keep their defaults; unknown keys are rejected.
ExperimentConfig parse_config(const std::string& ini_text);
ExperimentConfig load_config(const std::string& path);

/// Fully resolved configuration in the same INI format.
std::string render_config(const ExperimentConfig& config);

}  // namespace floqgate

#endif  // FLOQGATE_CONFIG_HPP
