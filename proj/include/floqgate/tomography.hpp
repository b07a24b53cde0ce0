// Synthetic gate tomography: preparation, holonomy, readout pulse and a
// projective Fz measurement, plus the fits that invert that chain.
//
// Pulse convention: a pulse of area A and phase phi is exp[-i A (cos(phi) Fx +
// sin(phi) Fy)]. The same operator is used for preparation and readout pulses.
#ifndef FLOQGATE_TOMOGRAPHY_HPP
#define FLOQGATE_TOMOGRAPHY_HPP

#include "floqgate/control_paths.hpp"
#include "floqgate/driving_config.hpp"
#include "floqgate/spin_algebra.hpp"

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace floqgate {

inline constexpr int kDatasetSchemaVersion = 1;

struct ReadoutSetting {
  double pulse_area = 0.0;   // rad
  double pulse_phase = 0.0;  // rad
  bool enabled = false;      // false: direct Fz measurement

  static ReadoutSetting none() { return {}; }
  static ReadoutSetting pulse(double area, double phase) { return {area, phase, true}; }
};

/// Basis state |m> followed by an optional preparation pulse.
struct Preparation {
  double m = 0.0;
  ReadoutSetting pulse;
};

struct MeasurementRecord {
  double prep_m = 0.0;
  ReadoutSetting prep_pulse;
  ReadoutSetting setting;
  std::vector<double> populations;  // index 0 is m = +F
  std::int64_t atom_count = 0;      // 0: exact probabilities
  int scan_id = 0;
};

struct SettingsPlan {
  std::vector<Preparation> preparations;
  std::vector<ReadoutSetting> readouts;

  std::size_t size() const { return preparations.size() * readouts.size(); }
};

/// N preparations: |m> for m = F .. -F+1 and a pi/2 pulse on |+F>; each read
/// out with no pulse, a pi/2 pulse at 8 phases and a pi pulse at phases 0 and
/// pi/2. Gives 33 records for F = 1.
SettingsPlan default_plan(Spin spin);

/// Same readouts with basis-state preparations only. Column phases of the gate
/// are invisible to this plan, so it is never informationally complete.
SettingsPlan basis_only_plan(Spin spin);

struct NoiseModel {
  double delta_mean = 0.0;                   // rad/s, per-scan Delta_z mean
  double scan_sigma = hz_to_rad(200.0);      // rad/s, one draw per scan
  double record_sigma = 0.0;                 // rad/s, extra draw per record
  std::int64_t atom_count = 100000;          // multinomial shots; 0 = noiseless
  double imaging_sigma = 0.0;                // additive Gaussian on populations

  static NoiseModel noiseless() { return {0.0, 0.0, 0.0, 0, 0.0}; }
};

struct TomographyDataset {
  Spin spin = Spin::from_twice(2);
  std::string loop_label = "custom";
  DrivingConfig config;
  std::vector<MeasurementRecord> records;
  std::optional<Vec3> hidden_true_delta;
  std::uint64_t rng_seed = 0;
  int design_rank = 0;
  bool informationally_complete = false;
};

struct HolonomyEstimate {
  Eigen::VectorXd coefficients;  // over su_generators(N)
  UnitaryD reconstructed = UnitaryD::identity(1);
  double residual = 0.0;
  bool converged = false;
  std::size_t evaluations = 0;
  std::optional<double> fitted_delta_z;
};

struct FitOptions {
  int restarts = 8;             // random starts in addition to c = 0
  std::uint64_t seed = 12345;
  int polish_passes = 6;        // simplex rebuilds around the incumbent
  double propagation_tol = 1e-10;
};

UnitaryD readout_unitary(const ReadoutSetting& setting, Spin spin);

/// Prepared input state for a record.
Vector prepared_state(const Preparation& prep, Spin spin);

/// |<m| R G P |m0>|^2, optionally resampled as a multinomial over atom_count.
MeasurementRecord simulate_measurement(const UnitaryD& gate, const Preparation& prep,
                                       const ReadoutSetting& setting, std::int64_t atom_count,
                                       std::mt19937_64& rng);

/// Rank of the linear map from generator coefficients to predicted
/// populations, measured at a fixed generic point.
int design_rank(const SettingsPlan& plan, Spin spin);
int design_rank(const std::vector<MeasurementRecord>& records, Spin spin);

/// One synthetic scan of a catalog loop. Delta_z is drawn once per scan (plus
/// optional per-record jitter) and applied through the non-adiabatic
/// holonomy; record order is shuffled.
TomographyDataset generate_dataset(LoopLabel loop, const DrivingConfig& config,
                                   const SettingsPlan& plan, const NoiseModel& noise,
                                   std::uint64_t seed, double tol = 1e-10);

/// Scan of a fixed gate; only the measurement noise of `noise` applies.
TomographyDataset generate_dataset(const UnitaryD& gate, const SettingsPlan& plan,
                                   const NoiseModel& noise, std::uint64_t seed);

/// Predicted populations of every record for gate G.
std::vector<std::vector<double>> predict_populations(const std::vector<MeasurementRecord>& records,
                                                     const UnitaryD& gate);

/// Sum over records of |p_predicted - p_recorded|^2.
double population_residual(const std::vector<MeasurementRecord>& records, const UnitaryD& gate);

/// Gell-Mann coefficients c of G = exp(-i sum c_n lambda_n) minimizing the
/// population residual; multi-start Nelder-Mead.
HolonomyEstimate fit_holonomy(const TomographyDataset& data, const FitOptions& options = {});

struct DetuningFit {
  double delta_z = 0.0;
  double residual = 0.0;
  bool converged = false;
};

/// Delta_z in [-0.2 Omega0, 0.2 Omega0] minimizing the population residual of
/// the full non-adiabatic model; grid scan then 1-D Nelder-Mead.
DetuningFit fit_detuning(const TomographyDataset& data, const FitOptions& options = {});

struct FidelityReport {
  double fidelity_ideal = 0.0;     // against the Delta = 0 holonomy
  double fidelity_detuned = 0.0;   // against the holonomy at the fitted Delta_z
  double fitted_delta_z = 0.0;
  HolonomyEstimate estimate;
};

/// Delta = 0 target of a catalog loop: closed form where known and epsilon is
/// zero, otherwise the non-adiabatic holonomy at zero detuning.
UnitaryD ideal_target(LoopLabel loop, const DrivingConfig& config, double tol = 1e-10);

FidelityReport fidelity_report(const TomographyDataset& data, const FitOptions& options = {});

std::string dataset_to_json(const TomographyDataset& data, int indent = 2);
TomographyDataset dataset_from_json(const std::string& text);
void save_dataset(const TomographyDataset& data, const std::string& path);
TomographyDataset load_dataset(const std::string& path);

std::string estimate_to_json(const HolonomyEstimate& estimate, int indent = 2);

}  // namespace floqgate

#endif  // FLOQGATE_TOMOGRAPHY_HPP
