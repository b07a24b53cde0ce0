#include "floqgate/tomography.hpp"

#include "floqgate/hamiltonians.hpp"
#include "floqgate/optim.hpp"
#include "floqgate/parallel.hpp"
#include "floqgate/propagation.hpp"
#include "floqgate/gauge_analysis.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace floqgate {

namespace {

constexpr double kPi = std::numbers::pi;

// Stream ids for seed_seq{seed, stream}; record r uses kRecordStream + r.
constexpr std::uint64_t kScanStream = 0;
constexpr std::uint64_t kShuffleStream = 1;
constexpr std::uint64_t kRecordStream = 16;

std::mt19937_64 stream_rng(std::uint64_t seed, std::uint64_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32)};
  return std::mt19937_64(seq);
}

std::vector<ReadoutSetting> default_readouts() {
  std::vector<ReadoutSetting> r{ReadoutSetting::none()};
  for (int k = 0; k < 8; ++k) r.push_back(ReadoutSetting::pulse(kPi / 2, k * kPi / 4));
  r.push_back(ReadoutSetting::pulse(kPi, 0.0));
  r.push_back(ReadoutSetting::pulse(kPi, kPi / 2));
  return r;
}

std::vector<double> probabilities(const Vector& amp) {
  std::vector<double> p(static_cast<std::size_t>(amp.size()));
  double total = 0.0;
  for (Eigen::Index i = 0; i < amp.size(); ++i) total += p[static_cast<std::size_t>(i)] = std::norm(amp[i]);
  for (double& x : p) x /= total;
  return p;
}

void sample_counts(std::vector<double>& p, std::int64_t atoms, std::mt19937_64& rng) {
  std::int64_t remaining = atoms;
  double mass = 1.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::int64_t k = remaining;
    if (i + 1 < p.size() && remaining > 0) {
      const double q = mass > 0 ? std::clamp(p[i] / mass, 0.0, 1.0) : 0.0;
      k = std::binomial_distribution<std::int64_t>(remaining, q)(rng);
    }
    mass -= p[i];
    remaining -= k;
    p[i] = double(k) / double(atoms);
  }
}

void add_imaging_noise(std::vector<double>& p, double sigma, std::mt19937_64& rng) {
  std::normal_distribution<double> nd(0.0, sigma);
  double total = 0.0;
  for (double& x : p) total += x = std::max(0.0, x + nd(rng));
  if (total <= 0) {
    std::fill(p.begin(), p.end(), 1.0 / double(p.size()));
    return;
  }
  for (double& x : p) x /= total;
}

// Records flattened into input states and readout matrices.
struct Design {
  std::vector<Vector> inputs;
  std::vector<Matrix> readouts;
  std::vector<std::vector<double>> measured;

  Design(const std::vector<MeasurementRecord>& records, Spin spin) {
    for (const auto& r : records) {
      inputs.push_back(prepared_state({r.prep_m, r.prep_pulse}, spin));
      readouts.push_back(readout_unitary(r.setting, spin).matrix());
      measured.push_back(r.populations);
    }
  }

  double residual(const Matrix& gate) const {
    double sum = 0.0;
    for (std::size_t r = 0; r < inputs.size(); ++r) {
      const Vector amp = readouts[r] * (gate * inputs[r]);
      for (Eigen::Index i = 0; i < amp.size(); ++i) {
        const double d = std::norm(amp[i]) - measured[r][static_cast<std::size_t>(i)];
        sum += d * d;
      }
    }
    return sum;
  }

  Eigen::VectorXd predicted(const Matrix& gate) const {
    const Eigen::Index n = gate.rows();
    Eigen::VectorXd out(static_cast<Eigen::Index>(inputs.size()) * n);
    for (std::size_t r = 0; r < inputs.size(); ++r) {
      const Vector amp = readouts[r] * (gate * inputs[r]);
      for (Eigen::Index i = 0; i < n; ++i) out[static_cast<Eigen::Index>(r) * n + i] = std::norm(amp[i]);
    }
    return out;
  }
};

Matrix gate_from_coefficients(const GeneratorBasis<double>& basis, const Eigen::VectorXd& c) {
  return expm_generator<double>(basis.combine(c), 1.0).matrix();
}

int rank_of_design(const Design& design, Spin spin) {
  const int n = spin.dim();
  if (n < 2) return 0;
  const auto basis = su_generators(n);
  const auto dims = static_cast<Eigen::Index>(basis.size());
  // fixed generic point, away from the identity
  Eigen::VectorXd c0(dims);
  for (Eigen::Index a = 0; a < dims; ++a) c0[a] = 0.3 * std::sin(1.7 * double(a) + 0.4);
  const double h = 1e-6;
  Eigen::MatrixXd jac(static_cast<Eigen::Index>(design.inputs.size()) * n, dims);
  for (Eigen::Index a = 0; a < dims; ++a) {
    Eigen::VectorXd up = c0, dn = c0;
    up[a] += h;
    dn[a] -= h;
    jac.col(a) = (design.predicted(gate_from_coefficients(basis, up)) -
                  design.predicted(gate_from_coefficients(basis, dn))) /
                 (2 * h);
  }
  const Eigen::JacobiSVD<Eigen::MatrixXd> svd(jac);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s[0] == 0.0) return 0;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s[i] > 1e-6 * s[0]) ++rank;
  return rank;
}

std::vector<MeasurementRecord> plan_records(const SettingsPlan& plan) {
  std::vector<MeasurementRecord> out;
  for (const auto& prep : plan.preparations)
    for (const auto& setting : plan.readouts) {
      MeasurementRecord r;
      r.prep_m = prep.m;
      r.prep_pulse = prep.pulse;
      r.setting = setting;
      out.push_back(r);
    }
  return out;
}

void validate_plan(const SettingsPlan& plan, Spin spin) {
  if (plan.preparations.empty() || plan.readouts.empty())
    throw std::invalid_argument("tomography: settings plan is empty");
  for (const auto& p : plan.preparations) {
    spin.index_of_m(p.m);
    if (p.pulse.pulse_area < 0) throw std::invalid_argument("tomography: negative pulse area");
  }
  for (const auto& r : plan.readouts)
    if (r.pulse_area < 0) throw std::invalid_argument("tomography: negative pulse area");
}

// Finishes a dataset: measurement noise, rank flag and shuffled order.
TomographyDataset assemble(std::vector<MeasurementRecord> records, Spin spin,
                           const std::vector<Matrix>& gates, const NoiseModel& noise,
                           std::uint64_t seed) {
  const auto measured = parallel_map(records.size(), [&](std::size_t r) {
    auto rng = stream_rng(seed, kRecordStream + r);
    // the per-record detuning draw, if any, consumed this stream first
    if (noise.record_sigma > 0) std::normal_distribution<double>(0.0, 1.0)(rng);
    const Matrix& gate = gates.size() == 1 ? gates.front() : gates[r];
    MeasurementRecord rec = simulate_measurement(UnitaryD(gate), {records[r].prep_m, records[r].prep_pulse},
                                                 records[r].setting, noise.atom_count, rng);
    if (noise.imaging_sigma > 0) add_imaging_noise(rec.populations, noise.imaging_sigma, rng);
    return rec;
  });
  TomographyDataset data;
  data.spin = spin;
  data.rng_seed = seed;
  data.records = measured;
  data.design_rank = design_rank(data.records, spin);
  data.informationally_complete = data.design_rank == spin.dim() * spin.dim() - 1;
  auto shuffle_rng = stream_rng(seed, kShuffleStream);
  std::shuffle(data.records.begin(), data.records.end(), shuffle_rng);
  return data;
}

}  // namespace

SettingsPlan default_plan(Spin spin) {
  SettingsPlan plan;
  for (int i = 0; i + 1 < spin.dim(); ++i) plan.preparations.push_back({spin.m_of_index(i), {}});
  plan.preparations.push_back({spin.value(), ReadoutSetting::pulse(kPi / 2, 0.0)});
  plan.readouts = default_readouts();
  return plan;
}

SettingsPlan basis_only_plan(Spin spin) {
  SettingsPlan plan;
  for (int i = 0; i < spin.dim(); ++i) plan.preparations.push_back({spin.m_of_index(i), {}});
  plan.readouts = default_readouts();
  return plan;
}

UnitaryD readout_unitary(const ReadoutSetting& setting, Spin spin) {
  if (setting.pulse_area < 0) throw std::invalid_argument("readout_unitary: negative pulse area");
  if (!setting.enabled) return UnitaryD::identity(spin.dim());
  const auto& ops = spin_ops(spin);
  const Matrix axis = std::cos(setting.pulse_phase) * ops.fx + std::sin(setting.pulse_phase) * ops.fy;
  return expm_generator<double>(axis, setting.pulse_area);
}

Vector prepared_state(const Preparation& prep, Spin spin) {
  Vector psi = Vector::Zero(spin.dim());
  psi[spin.index_of_m(prep.m)] = 1.0;
  if (prep.pulse.enabled) psi = readout_unitary(prep.pulse, spin).matrix() * psi;
  return psi;
}

MeasurementRecord simulate_measurement(const UnitaryD& gate, const Preparation& prep,
                                       const ReadoutSetting& setting, std::int64_t atom_count,
                                       std::mt19937_64& rng) {
  if (atom_count < 0) throw std::invalid_argument("simulate_measurement: atom_count must be >= 0");
  const Spin spin = Spin::from_twice(gate.dim() - 1);
  MeasurementRecord rec;
  rec.prep_m = prep.m;
  rec.prep_pulse = prep.pulse;
  rec.setting = setting;
  rec.atom_count = atom_count;
  rec.populations =
      probabilities(readout_unitary(setting, spin).matrix() * (gate.matrix() * prepared_state(prep, spin)));
  if (atom_count > 0) sample_counts(rec.populations, atom_count, rng);
  return rec;
}

int design_rank(const SettingsPlan& plan, Spin spin) {
  validate_plan(plan, spin);
  auto records = plan_records(plan);
  for (auto& r : records) r.populations.assign(static_cast<std::size_t>(spin.dim()), 0.0);
  return rank_of_design(Design(records, spin), spin);
}

int design_rank(const std::vector<MeasurementRecord>& records, Spin spin) {
  return rank_of_design(Design(records, spin), spin);
}

TomographyDataset generate_dataset(LoopLabel label, const DrivingConfig& config,
                                   const SettingsPlan& plan, const NoiseModel& noise,
                                   std::uint64_t seed, double tol) {
  config.validate();
  validate_plan(plan, config.spin);
  if (noise.scan_sigma < 0 || noise.record_sigma < 0 || noise.imaging_sigma < 0)
    throw std::invalid_argument("generate_dataset: noise widths must be non-negative");
  const auto loop = catalog_loop(label, config.loop_rate);
  auto scan_rng = stream_rng(seed, kScanStream);
  const double scan_dz =
      noise.delta_mean + (noise.scan_sigma > 0 ? std::normal_distribution<double>(0.0, noise.scan_sigma)(scan_rng) : 0.0);
  const Vec3 scan_delta = config.delta + Vec3(0, 0, scan_dz);

  auto records = plan_records(plan);
  std::vector<Matrix> gates;
  if (noise.record_sigma > 0) {
    gates = parallel_map(records.size(), [&](std::size_t r) {
      auto rng = stream_rng(seed, kRecordStream + r);
      const double jitter = noise.record_sigma * std::normal_distribution<double>(0.0, 1.0)(rng);
      return holonomy_nonadiabatic(loop, config.with_delta(scan_delta + Vec3(0, 0, jitter)), tol).matrix();
    });
  } else {
    gates.push_back(holonomy_nonadiabatic(loop, config.with_delta(scan_delta), tol).matrix());
  }
  TomographyDataset data = assemble(std::move(records), config.spin, gates, noise, seed);
  data.loop_label = to_string(label);
  data.config = config;
  data.hidden_true_delta = scan_delta;
  return data;
}

TomographyDataset generate_dataset(const UnitaryD& gate, const SettingsPlan& plan,
                                   const NoiseModel& noise, std::uint64_t seed) {
  const Spin spin = Spin::from_twice(gate.dim() - 1);
  validate_plan(plan, spin);
  NoiseModel measurement_only = noise;
  measurement_only.record_sigma = 0.0;
  TomographyDataset data = assemble(plan_records(plan), spin, {gate.matrix()}, measurement_only, seed);
  data.config.spin = spin;
  return data;
}

std::vector<std::vector<double>> predict_populations(const std::vector<MeasurementRecord>& records,
                                                     const UnitaryD& gate) {
  const Spin spin = Spin::from_twice(gate.dim() - 1);
  const Design design(records, spin);
  const Eigen::VectorXd flat = design.predicted(gate.matrix());
  std::vector<std::vector<double>> out;
  const int n = gate.dim();
  for (std::size_t r = 0; r < records.size(); ++r)
    out.emplace_back(flat.data() + static_cast<std::ptrdiff_t>(r) * n,
                     flat.data() + static_cast<std::ptrdiff_t>(r + 1) * n);
  return out;
}

double population_residual(const std::vector<MeasurementRecord>& records, const UnitaryD& gate) {
  return Design(records, Spin::from_twice(gate.dim() - 1)).residual(gate.matrix());
}

HolonomyEstimate fit_holonomy(const TomographyDataset& data, const FitOptions& options) {
  if (data.records.empty()) throw std::invalid_argument("fit_holonomy: dataset has no records");
  if (options.restarts < 0) throw std::invalid_argument("fit_holonomy: restarts must be >= 0");
  const Spin spin = data.spin;
  const Design design(data.records, spin);
  const auto basis = su_generators(spin.dim());
  const auto dims = static_cast<Eigen::Index>(basis.size());
  auto objective = [&](const Eigen::VectorXd& c) { return design.residual(gate_from_coefficients(basis, c)); };

  SimplexOptions simplex;
  simplex.max_evals = 1500 * static_cast<std::size_t>(dims);
  simplex.x_tol = 1e-8;
  simplex.f_tol = 1e-15;

  struct Run {
    SimplexResult<double> result;
    std::size_t evals;
  };
  const auto runs = parallel_map(static_cast<std::size_t>(options.restarts) + 1, [&](std::size_t k) {
    Eigen::VectorXd x0 = Eigen::VectorXd::Zero(dims);
    if (k > 0) {
      auto rng = stream_rng(options.seed, k);
      std::normal_distribution<double> nd(0.0, 1.0);
      for (Eigen::Index a = 0; a < dims; ++a) x0[a] = nd(rng);
    }
    auto best = nelder_mead<double>(objective, x0, simplex);
    std::size_t evals = best.evals;
    for (int pass = 0; pass < options.polish_passes; ++pass) {
      auto next = nelder_mead<double>(objective, Eigen::VectorXd(best.x), simplex);
      evals += next.evals;
      const bool stalled = !(next.f < best.f - 1e-14 * (1.0 + best.f));
      if (next.f <= best.f) best = std::move(next);
      if (stalled) break;
    }
    return Run{std::move(best), evals};
  });

  std::size_t best = 0, total = 0;
  for (std::size_t k = 0; k < runs.size(); ++k) {
    total += runs[k].evals;
    if (runs[k].result.f < runs[best].result.f) best = k;
  }
  HolonomyEstimate est;
  est.coefficients = runs[best].result.x;
  est.reconstructed = UnitaryD(gate_from_coefficients(basis, est.coefficients));
  est.residual = runs[best].result.f;
  est.converged = runs[best].result.converged;
  est.evaluations = total;
  return est;
}

DetuningFit fit_detuning(const TomographyDataset& data, const FitOptions& options) {
  if (data.records.empty()) throw std::invalid_argument("fit_detuning: dataset has no records");
  const LoopLabel label = parse_loop_label(data.loop_label);
  if (label == LoopLabel::Custom)
    throw std::invalid_argument("fit_detuning: dataset has no catalog loop to model");
  const DrivingConfig& cfg = data.config;
  const auto loop = catalog_loop(label, cfg.loop_rate);
  const Design design(data.records, data.spin);
  const double bracket = 0.2 * cfg.omega0;
  const double unit = 0.01 * cfg.omega0;  // optimizer works in these units
  auto model = [&](double dz) {
    const Vec3 d(cfg.delta[0], cfg.delta[1], dz);
    return design.residual(holonomy_nonadiabatic(loop, cfg.with_delta(d), options.propagation_tol).matrix());
  };

  const int points = 41;
  std::vector<double> grid(points);
  for (int k = 0; k < points; ++k) grid[static_cast<std::size_t>(k)] = -bracket + 2 * bracket * k / (points - 1);
  const auto values = parallel_map(grid.size(), [&](std::size_t k) { return model(grid[k]); });
  // refine the deepest local minima of the grid; a narrow true basin can sit
  // between grid points while a shallower alias lands on one
  std::vector<std::size_t> minima;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const bool left = k == 0 || values[k] <= values[k - 1];
    const bool right = k + 1 == grid.size() || values[k] <= values[k + 1];
    if (left && right) minima.push_back(k);
  }
  std::stable_sort(minima.begin(), minima.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  minima.resize(std::min<std::size_t>(minima.size(), 3));

  SimplexOptions simplex;
  simplex.x_tol = 1e-4;  // ~0.01 Hz at the default operating point
  simplex.f_tol = std::numeric_limits<double>::infinity();
  simplex.max_evals = 200;
  auto objective = [&](const Eigen::VectorXd& u) {
    const double dz = u[0] * unit;
    if (std::abs(dz) > bracket) return std::numeric_limits<double>::max();
    return model(dz);
  };
  std::vector<DetuningFit> candidates;
  for (std::size_t k : minima) {
    Eigen::VectorXd u0(1);
    u0[0] = grid[k] / unit;
    const auto res = nelder_mead<double>(objective, u0, simplex);
    if (res.f <= values[k])
      candidates.push_back({res.x[0] * unit, res.f, res.converged});
    else
      candidates.push_back({grid[k], values[k], res.converged});
  }
  double best = std::numeric_limits<double>::infinity();
  for (const auto& c : candidates) best = std::min(best, c.residual);
  // exact aliases (e.g. l3 revivals) tie; prefer the smallest |Delta_z|
  const double tie = best * (1 + 1e-9) + 1e-18;
  DetuningFit fit;
  bool have = false;
  for (const auto& c : candidates)
    if (c.residual <= tie && (!have || std::abs(c.delta_z) < std::abs(fit.delta_z))) {
      fit = c;
      have = true;
    }
  return fit;
}

UnitaryD ideal_target(LoopLabel label, const DrivingConfig& config, double tol) {
  if (config.epsilon == 0.0) {
    try {
      return holonomy_closed_form(label, g_factor(config.omega0, config.omega), config.spin);
    } catch (const UnsupportedLoop&) {
    }
  }
  return holonomy_nonadiabatic(catalog_loop(label, config.loop_rate), config.with_delta(Vec3::Zero()), tol);
}

FidelityReport fidelity_report(const TomographyDataset& data, const FitOptions& options) {
  const LoopLabel label = parse_loop_label(data.loop_label);
  FidelityReport rep;
  rep.estimate = fit_holonomy(data, options);
  const DetuningFit det = fit_detuning(data, options);
  rep.fitted_delta_z = det.delta_z;
  rep.estimate.fitted_delta_z = det.delta_z;
  const DrivingConfig& cfg = data.config;
  rep.fidelity_ideal = fidelity(rep.estimate.reconstructed, ideal_target(label, cfg, options.propagation_tol));
  const Vec3 d(cfg.delta[0], cfg.delta[1], det.delta_z);
  rep.fidelity_detuned = fidelity(
      rep.estimate.reconstructed,
      holonomy_nonadiabatic(catalog_loop(label, cfg.loop_rate), cfg.with_delta(d), options.propagation_tol));
  return rep;
}

namespace {

using nlohmann::json;

json setting_json(const ReadoutSetting& s) {
  return {{"enabled", s.enabled}, {"pulse_area_rad", s.pulse_area}, {"pulse_phase_rad", s.pulse_phase}};
}

ReadoutSetting setting_from(const json& j) {
  ReadoutSetting s;
  s.enabled = j.at("enabled").get<bool>();
  s.pulse_area = j.at("pulse_area_rad").get<double>();
  s.pulse_phase = j.at("pulse_phase_rad").get<double>();
  return s;
}

json vec3_json(const Vec3& v) { return {v[0], v[1], v[2]}; }

Vec3 vec3_from(const json& j) {
  if (!j.is_array() || j.size() != 3) throw std::invalid_argument("dataset json: expected a 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

// row-major, each entry [re, im]
json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string dataset_to_json(const TomographyDataset& data, int indent) {
  const DrivingConfig& c = data.config;
  json j;
  j["schema_version"] = kDatasetSchemaVersion;
  j["spin_twice"] = data.spin.twice();
  j["loop"] = data.loop_label;
  j["rng_seed"] = data.rng_seed;
  j["design_rank"] = data.design_rank;
  j["informationally_complete"] = data.informationally_complete;
  j["config"] = {{"spin_twice", c.spin.twice()},      {"omega0_rad_per_s", c.omega0},
                 {"omega_rad_per_s", c.omega},         {"loop_rate_rad_per_s", c.loop_rate},
                 {"omega_rf_rad_per_s", c.omega_rf},   {"omega_z_rad_per_s", c.omega_z},
                 {"delta_rad_per_s", vec3_json(c.delta)}, {"epsilon_rad_per_s", c.epsilon}};
  j["hidden_true_delta_rad_per_s"] = data.hidden_true_delta ? vec3_json(*data.hidden_true_delta) : json(nullptr);
  json recs = json::array();
  for (const auto& r : data.records)
    recs.push_back({{"prep_m", r.prep_m},
                    {"prep_pulse", setting_json(r.prep_pulse)},
                    {"readout", setting_json(r.setting)},
                    {"populations", r.populations},
                    {"atom_count", r.atom_count},
                    {"scan_id", r.scan_id}});
  j["records"] = recs;
  return j.dump(indent);
}

TomographyDataset dataset_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("dataset json: ") + e.what());
  }
  try {
    const int version = j.at("schema_version").get<int>();
    if (version != kDatasetSchemaVersion)
      throw std::invalid_argument("dataset json: unsupported schema_version " + std::to_string(version));
    TomographyDataset d;
    d.spin = Spin::from_twice(j.at("spin_twice").get<int>());
    d.loop_label = j.at("loop").get<std::string>();
    d.rng_seed = j.at("rng_seed").get<std::uint64_t>();
    d.design_rank = j.value("design_rank", 0);
    d.informationally_complete = j.value("informationally_complete", false);
    const json& c = j.at("config");
    d.config.spin = Spin::from_twice(c.at("spin_twice").get<int>());
    d.config.omega0 = c.at("omega0_rad_per_s").get<double>();
    d.config.omega = c.at("omega_rad_per_s").get<double>();
    d.config.loop_rate = c.at("loop_rate_rad_per_s").get<double>();
    d.config.omega_rf = c.at("omega_rf_rad_per_s").get<double>();
    d.config.omega_z = c.at("omega_z_rad_per_s").get<double>();
    d.config.delta = vec3_from(c.at("delta_rad_per_s"));
    d.config.epsilon = c.at("epsilon_rad_per_s").get<double>();
    const json& hidden = j.at("hidden_true_delta_rad_per_s");
    if (!hidden.is_null()) d.hidden_true_delta = vec3_from(hidden);
    for (const json& r : j.at("records")) {
      MeasurementRecord rec;
      rec.prep_m = r.at("prep_m").get<double>();
      rec.prep_pulse = setting_from(r.at("prep_pulse"));
      rec.setting = setting_from(r.at("readout"));
      rec.populations = r.at("populations").get<std::vector<double>>();
      rec.atom_count = r.at("atom_count").get<std::int64_t>();
      rec.scan_id = r.at("scan_id").get<int>();
      if (static_cast<int>(rec.populations.size()) != d.spin.dim())
        throw std::invalid_argument("dataset json: population vector has the wrong length");
      d.spin.index_of_m(rec.prep_m);
      d.records.push_back(std::move(rec));
    }
    return d;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("dataset json: ") + e.what());
  }
}

void save_dataset(const TomographyDataset& data, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << dataset_to_json(data) << '\n';
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

TomographyDataset load_dataset(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return dataset_from_json(buf.str());
}

std::string estimate_to_json(const HolonomyEstimate& e, int indent) {
  json j;
  j["schema_version"] = kDatasetSchemaVersion;
  j["coefficients"] = std::vector<double>(e.coefficients.data(), e.coefficients.data() + e.coefficients.size());
  j["unitary"] = matrix_json(e.reconstructed.matrix());
  j["residual"] = e.residual;
  j["converged"] = e.converged;
  j["evaluations"] = e.evaluations;
  j["fitted_delta_z_rad_per_s"] = e.fitted_delta_z ? json(*e.fitted_delta_z) : json(nullptr);
  return j.dump(indent);
}

}  // namespace floqgate
