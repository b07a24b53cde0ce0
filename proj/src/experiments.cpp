#include "floqgate/experiments.hpp"

#include "floqgate/gauge_analysis.hpp"
#include "floqgate/hamiltonians.hpp"
#include "floqgate/parallel.hpp"
#include "floqgate/propagation.hpp"

#include <json.hpp>

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <numbers>
#include <stdexcept>

namespace floqgate {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

class CsvWriter {
 public:
  CsvWriter(const fs::path& path, const std::string& header) : path_(path), out_(path) {
    if (!out_) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    out_ << header << '\n';
  }

  template <typename... Cells>
  void row(const Cells&... cells) {
    bool first = true;
    ((out_ << (first ? "" : ",") << cell(cells), first = false), ...);
    out_ << '\n';
  }

  std::string close() {
    out_.close();
    if (!out_) throw std::runtime_error("failed writing '" + path_.string() + "'");
    return path_.string();
  }

 private:
  static std::string cell(double x) { return fmt(x); }
  static std::string cell(int x) { return std::to_string(x); }
  static std::string cell(std::size_t x) { return std::to_string(x); }
  static std::string cell(bool x) { return x ? "1" : "0"; }
  static std::string cell(const std::string& s) { return s; }

  fs::path path_;
  std::ofstream out_;
};

fs::path output_dir(const ExperimentConfig& config) {
  const fs::path dir(config.out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw std::runtime_error("cannot create output directory '" + dir.string() + "': " + ec.message());
  return dir;
}

std::string write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text << '\n';
  out.close();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
  return path.string();
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

std::string spin_tag(double f) {
  std::string s = fmt(f);
  return "F" + s;
}

double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return v.empty() ? 0.0 : s / double(v.size());
}

double stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / double(v.size() - 1));
}

}  // namespace

double RunOutput::value(const std::string& key) const {
  for (const auto& [k, v] : summary)
    if (k == key) return v;
  throw std::out_of_range("no summary value '" + key + "'");
}

UnitaryD adiabatic_target(const ExperimentConfig& config) {
  const DrivingConfig cfg = config.driving();
  const double g = g_factor(cfg.omega0, cfg.omega);
  const LoopLabel label = config.loop_label();
  if (label != LoopLabel::Custom) {
    try {
      return holonomy_closed_form(label, g, cfg.spin);
    } catch (const UnsupportedLoop&) {
    }
  }
  return holonomy_path_ordered(config.parameter_loop(), g, cfg.spin, 10000);
}

RunOutput run_trajectory(const ExperimentConfig& config) {
  const DrivingConfig cfg = config.driving();
  const ParameterLoop loop = config.parameter_loop();
  const fs::path dir = output_dir(config);
  const int sub = 8;
  const double dt = std::numbers::pi / (sub * cfg.omega);
  const auto steps = static_cast<std::size_t>(std::floor(loop.duration / dt * (1 + 1e-12)));

  PropagateOptions opts;
  opts.tol = config.tol;
  opts.max_step = drive_step_limit(cfg);
  for (std::size_t k = 0; k <= steps; ++k) opts.sample_times.push_back(std::min(loop.duration, double(k) * dt));
  if (loop.duration - opts.sample_times.back() > 1e-12 * loop.duration) opts.sample_times.push_back(loop.duration);

  const std::array<Frame, 2> frames{Frame::Rotating, Frame::Floquet};
  const auto results = parallel_map(frames.size(), [&](std::size_t i) {
    return propagate(frame_hamiltonian(loop, cfg, frames[i]), 0.0, loop.duration, opts);
  });
  Vector psi0 = Vector::Zero(cfg.spin.dim());
  psi0[0] = 1.0;
  const auto rotating = bloch_trajectory(results[0], psi0);
  const auto floquet = bloch_trajectory(results[1], psi0);

  RunOutput out;
  const std::string header = "t_seconds,bloch_x,bloch_y,bloch_z";
  CsvWriter rot(dir / "trajectory_rotating.csv", header);
  CsvWriter flo(dir / "trajectory_floquet.csv", header);
  CsvWriter strobe(dir / "trajectory_stroboscopic.csv", header);
  for (std::size_t k = 0; k < rotating.size(); ++k) {
    const auto& r = rotating[k];
    const auto& f = floquet[k];
    rot.row(r.t, r.bloch[0], r.bloch[1], r.bloch[2]);
    flo.row(f.t, f.bloch[0], f.bloch[1], f.bloch[2]);
    if (k % sub == 0) strobe.row(r.t, r.bloch[0], r.bloch[1], r.bloch[2]);
  }
  out.files = {rot.close(), strobe.close(), flo.close()};

  const Waveform wave = synthesize_waveform(loop, cfg, 8.0 * config.omega_rf_hz);
  CsvWriter w(dir / "waveform.csv", "t_seconds,amplitude_rad_per_s");
  for (std::size_t k = 0; k < wave.t.size(); ++k) w.row(wave.t[k], wave.amplitude[k]);
  out.files.push_back(w.close());

  const UnitaryD target = adiabatic_target(config);
  double drift = 0.0;
  for (const auto& r : results) drift = std::max(drift, r.diagnostics.max_unitarity_drift);
  out.summary = {{"endpoint_fidelity_rotating", fidelity(results[0].final_unitary, target)},
                 {"endpoint_fidelity_floquet", fidelity(results[1].final_unitary, target)},
                 {"rotating_vs_floquet", fidelity(results[0].final_unitary, results[1].final_unitary)},
                 {"max_unitarity_drift", drift},
                 {"samples", double(rotating.size())}};
  return out;
}

RunOutput run_holonomy(const ExperimentConfig& config) {
  const DrivingConfig cfg = config.driving();
  const ParameterLoop loop = config.parameter_loop();
  const double g = g_factor(cfg.omega0, cfg.omega);
  const fs::path dir = output_dir(config);

  json j;
  j["loop"] = config.loop;
  j["spin"] = config.spin;
  j["g"] = g;
  RunOutput out;
  std::optional<UnitaryD> closed;
  if (config.loop_label() != LoopLabel::Custom) {
    try {
      closed = holonomy_closed_form(config.loop_label(), g, cfg.spin);
      j["closed_form"] = matrix_json(closed->matrix());
    } catch (const UnsupportedLoop&) {
      j["closed_form"] = nullptr;
    }
  }
  const UnitaryD ordered = holonomy_path_ordered(loop, g, cfg.spin, 10000);
  const PropagationResult nonadiabatic = propagate_nonadiabatic(loop, cfg, config.tol);
  const UnitaryD& na = nonadiabatic.final_unitary;
  j["path_ordered"] = matrix_json(ordered.matrix());
  j["nonadiabatic"] = matrix_json(na.matrix());
  j["delta_rad_per_s"] = {cfg.delta[0], cfg.delta[1], cfg.delta[2]};
  j["epsilon_rad_per_s"] = cfg.epsilon;
  j["wilson_loop"] = {wilson_loop(na).real(), wilson_loop(na).imag()};
  const Su2Fit fit = su2_projection(na);
  j["su2_fit"] = {{"axis", {fit.axis[0], fit.axis[1], fit.axis[2]}},
                  {"angle", fit.angle},
                  {"residual", fit.residual}};
  out.summary.push_back({"fidelity_nonadiabatic_vs_path_ordered", fidelity(na, ordered)});
  if (closed) {
    out.summary.push_back({"fidelity_path_ordered_vs_closed_form", fidelity(ordered, *closed)});
    out.summary.push_back({"fidelity_nonadiabatic_vs_closed_form", fidelity(na, *closed)});
  }
  out.summary.push_back({"su2_residual", fit.residual});
  out.summary.push_back({"max_unitarity_drift", nonadiabatic.diagnostics.max_unitarity_drift});
  for (const auto& [k, v] : out.summary) j["summary"][k] = v;
  out.files.push_back(write_text(dir / "holonomy.json", j.dump(2)));
  return out;
}

RunOutput run_fidelity_sweep(const ExperimentConfig& config, const std::vector<LoopLabel>& loops) {
  const DrivingConfig cfg = config.driving();
  const fs::path dir = output_dir(config);
  const auto grid = config.delta_grid();
  const double g = g_factor(cfg.omega0, cfg.omega);
  RunOutput out;
  for (LoopLabel label : loops) {
    const ParameterLoop loop = catalog_loop(label, cfg.loop_rate);
    const auto curve = fidelity_vs_detuning(loop, cfg, grid, config.tol);
    CsvWriter csv(dir / ("fidelity_" + to_string(label) + ".csv"), "delta_z_rad_per_s,delta_z_hz,fidelity");
    double lowest = 1.0;
    for (const auto& p : curve) {
      csv.row(p.delta_z, rad_to_hz(p.delta_z), p.fidelity);
      lowest = std::min(lowest, p.fidelity);
    }
    out.files.push_back(csv.close());
    out.summary.push_back({"min_fidelity_" + to_string(label), lowest});
    if (label == LoopLabel::L3) {
      const double revival = revival_detuning(g, loop.duration);
      out.summary.push_back({"revival_delta_z_rad_per_s", revival});
      out.summary.push_back(
          {"fidelity_l3_at_revival", fidelity_vs_detuning(loop, cfg, {revival}, config.tol).front().fidelity});
    }
  }
  return out;
}

RunOutput run_wilson(const ExperimentConfig& config, const std::array<LoopLabel, 3>& triple,
                     const std::vector<double>& spins) {
  const DrivingConfig base = config.driving();
  const fs::path dir = output_dir(config);
  const auto grid = config.delta_grid();
  const double g = g_factor(base.omega0, base.omega);
  RunOutput out;
  for (double f : spins) {
    DrivingConfig cfg = base;
    cfg.spin = Spin::from_value(f);
    const auto reports = parallel_map(grid.size(), [&](std::size_t k) {
      return trace_commutator_numeric(cfg.with_delta(Vec3(base.delta[0], base.delta[1], grid[k])), triple,
                                      config.tol);
    });
    CsvWriter csv(dir / ("wilson_" + spin_tag(f) + ".csv"), "delta_z_rad_per_s,delta_z_hz,re_diff,im_diff");
    for (std::size_t k = 0; k < grid.size(); ++k)
      csv.row(grid[k], rad_to_hz(grid[k]), reports[k].difference.real(), reports[k].difference.imag());
    out.files.push_back(csv.close());
    out.summary.push_back({"analytic_" + spin_tag(f), trace_commutator_analytic(cfg.spin, g)});
    const auto zero = trace_commutator_numeric(cfg.with_delta(Vec3(base.delta[0], base.delta[1], 0.0)), triple,
                                               config.tol);
    out.summary.push_back({"numeric_re_at_zero_" + spin_tag(f), zero.difference.real()});
    out.summary.push_back({"numeric_im_at_zero_" + spin_tag(f), zero.difference.imag()});
  }
  return out;
}

RunOutput run_tomography(const ExperimentConfig& config, const std::optional<SettingsPlan>& plan) {
  const DrivingConfig cfg = config.driving();
  const fs::path dir = output_dir(config);
  const fs::path data_dir = dir / "datasets";
  fs::create_directories(data_dir);
  const SettingsPlan settings = plan ? *plan : default_plan(cfg.spin);
  const NoiseModel noise = config.noise_model();
  FitOptions fit;
  fit.restarts = config.tomography.restarts;
  fit.seed = config.seed;
  fit.propagation_tol = config.tol;

  struct Row {
    std::string loop;
    int scan;
    FidelityReport report;
    double true_dz;
  };
  std::vector<std::pair<LoopLabel, int>> jobs;
  for (const auto& name : config.tomography.loops)
    for (int s = 0; s < config.tomography.scans; ++s) jobs.emplace_back(parse_loop_label(name), s);

  RunOutput out;
  std::vector<Row> rows;
  std::size_t job = 0;
  for (const auto& [label, scan] : jobs) {
    const std::uint64_t seed = config.seed * 1000003ULL + job++;
    const auto data = generate_dataset(label, cfg, settings, noise, seed, config.tol);
    save_dataset(data, (data_dir / (to_string(label) + "_scan" + std::to_string(scan) + ".json")).string());
    rows.push_back({to_string(label), scan, fidelity_report(data, fit), (*data.hidden_true_delta)[2]});
  }

  CsvWriter scans(dir / "tomography_scans.csv",
                  "loop,scan,fidelity_ideal,fidelity_detuned,fitted_delta_z_hz,true_delta_z_hz,residual,converged");
  std::map<std::string, std::pair<std::vector<double>, std::vector<double>>> by_loop;
  std::vector<double> all_ideal, all_detuned;
  for (const auto& r : rows) {
    scans.row(r.loop, r.scan, r.report.fidelity_ideal, r.report.fidelity_detuned, rad_to_hz(r.report.fitted_delta_z),
              rad_to_hz(r.true_dz), r.report.estimate.residual, r.report.estimate.converged);
    by_loop[r.loop].first.push_back(r.report.fidelity_ideal);
    by_loop[r.loop].second.push_back(r.report.fidelity_detuned);
    all_ideal.push_back(r.report.fidelity_ideal);
    all_detuned.push_back(r.report.fidelity_detuned);
  }
  out.files.push_back(scans.close());

  CsvWriter summary(dir / "tomography_summary.csv",
                    "loop,scans,mean_fidelity_ideal,std_fidelity_ideal,mean_fidelity_detuned,std_fidelity_detuned");
  for (const auto& name : config.tomography.loops) {
    const auto& [ideal, detuned] = by_loop[to_string(parse_loop_label(name))];
    summary.row(name, ideal.size(), mean(ideal), stddev(ideal), mean(detuned), stddev(detuned));
  }
  summary.row(std::string("all"), all_ideal.size(), mean(all_ideal), stddev(all_ideal), mean(all_detuned),
              stddev(all_detuned));
  out.files.push_back(summary.close());
  out.summary = {{"scans", double(rows.size())},
                 {"mean_fidelity_ideal", mean(all_ideal)},
                 {"std_fidelity_ideal", stddev(all_ideal)},
                 {"mean_fidelity_detuned", mean(all_detuned)},
                 {"std_fidelity_detuned", stddev(all_detuned)}};
  return out;
}

RunOutput run_fit(const ExperimentConfig& config, const std::string& dataset_path) {
  const TomographyDataset data = load_dataset(dataset_path);
  const fs::path dir = output_dir(config);
  FitOptions fit;
  fit.restarts = config.tomography.restarts;
  fit.seed = config.seed;
  fit.propagation_tol = config.tol;
  RunOutput out;
  HolonomyEstimate est;
  if (parse_loop_label(data.loop_label) != LoopLabel::Custom) {
    const FidelityReport rep = fidelity_report(data, fit);
    est = rep.estimate;
    out.summary = {{"fidelity_ideal", rep.fidelity_ideal},
                   {"fidelity_detuned", rep.fidelity_detuned},
                   {"fitted_delta_z_hz", rad_to_hz(rep.fitted_delta_z)}};
  } else {
    est = fit_holonomy(data, fit);
  }
  out.summary.push_back({"residual", est.residual});
  out.summary.push_back({"converged", est.converged ? 1.0 : 0.0});
  out.files.push_back(write_text(dir / "estimate.json", estimate_to_json(est)));
  return out;
}

}  // namespace floqgate
