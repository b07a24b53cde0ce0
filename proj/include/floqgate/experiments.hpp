// Experiment runners behind the command-line tool. Each writes CSV or JSON
// files into config.out_dir and returns their paths plus scalar summaries.
//
// CSV headers:
//   trajectory_{rotating,floquet,stroboscopic}.csv  t_seconds,bloch_x,bloch_y,bloch_z
//   waveform.csv                                   t_seconds,amplitude_rad_per_s
//   fidelity_<loop>.csv                            delta_z_rad_per_s,delta_z_hz,fidelity
//   wilson_F<F>.csv                                delta_z_rad_per_s,delta_z_hz,re_diff,im_diff
//   tomography_scans.csv                           loop,scan,fidelity_ideal,fidelity_detuned,
//                                                  fitted_delta_z_hz,true_delta_z_hz,residual,converged
//   tomography_summary.csv                         loop,scans,mean_fidelity_ideal,std_fidelity_ideal,
//                                                  mean_fidelity_detuned,std_fidelity_detuned
#ifndef FLOQGATE_EXPERIMENTS_HPP
#define FLOQGATE_EXPERIMENTS_HPP

#include "floqgate/config.hpp"
#include "floqgate/control_paths.hpp"
#include "floqgate/tomography.hpp"

#include <array>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace floqgate {

struct RunOutput {
  std::vector<std::string> files;
  std::vector<std::pair<std::string, double>> summary;

  double value(const std::string& key) const;
};

/// Delta = 0 adiabatic holonomy: closed form where known, otherwise the
/// path-ordered product with 10^4 segments.
UnitaryD adiabatic_target(const ExperimentConfig& config);

/// Bloch trajectories of |+F> over one loop in the rotating and Floquet
/// frames on a grid of pi / (8 omega), the stroboscopic subset at multiples of
/// pi / omega, and the RF waveform.
RunOutput run_trajectory(const ExperimentConfig& config);

/// Closed-form, path-ordered and non-adiabatic holonomies of the configured
/// loop, written to holonomy.json.
RunOutput run_holonomy(const ExperimentConfig& config);

RunOutput run_fidelity_sweep(const ExperimentConfig& config,
                             const std::vector<LoopLabel>& loops = experimental_loops());

RunOutput run_wilson(const ExperimentConfig& config,
                     const std::array<LoopLabel, 3>& triple = {LoopLabel::P1, LoopLabel::P2, LoopLabel::P3},
                     const std::vector<double>& spins = {0.5, 1.0, 1.5, 2.0});

/// config.tomography.scans synthetic scans of every configured loop, each
/// fitted for the holonomy and Delta_z. Datasets go to out_dir/datasets.
RunOutput run_tomography(const ExperimentConfig& config, const std::optional<SettingsPlan>& plan = {});

/// Fits a saved dataset and writes estimate.json.
RunOutput run_fit(const ExperimentConfig& config, const std::string& dataset_path);

}  // namespace floqgate

#endif  // FLOQGATE_EXPERIMENTS_HPP
