#include "floqgate/config.hpp"

#include "floqgate/hamiltonians.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace floqgate {

namespace pt = boost::property_tree;

namespace {

const std::map<std::string, std::set<std::string>>& known_keys() {
  static const std::map<std::string, std::set<std::string>> keys{
      {"spin", {"F"}},
      {"loop", {"label", "theta0", "theta_winding", "phi0", "phi_winding"}},
      {"drive", {"omega0_hz", "drive_ratio", "loop_ratio", "omega_rf_hz", "omega_z_hz"}},
      {"detuning", {"delta_x_hz", "delta_y_hz", "delta_z_hz", "epsilon_mode", "epsilon_hz"}},
      {"integrator", {"tol"}},
      {"run", {"seed", "out_dir"}},
      {"sweep", {"span", "points"}},
      {"tomography",
       {"scans", "loops", "atom_count", "delta_mean_hz", "scan_sigma_hz", "record_sigma_hz",
        "imaging_sigma", "restarts"}},
  };
  return keys;
}

std::string fmt(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

template <typename T>
T get(const pt::ptree& tree, const std::string& key, T fallback) {
  const auto node = tree.get_child_optional(pt::ptree::path_type(key, '.'));
  if (!node) return fallback;
  try {
    return node->get_value<T>();
  } catch (const pt::ptree_bad_data&) {
    throw ConfigError("config: cannot parse '" + key + "' = '" + node->data() + "'");
  }
}

std::vector<std::string> split_list(const std::string& text) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    const auto e = item.find_last_not_of(" \t");
    if (b != std::string::npos) out.push_back(item.substr(b, e - b + 1));
  }
  return out;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) out += (out.empty() ? "" : ",") + s;
  return out;
}

}  // namespace

void ExperimentConfig::validate() const {
  if (!(spin > 0) || std::abs(2 * spin - std::round(2 * spin)) > 1e-12 || 2 * spin + 1 > kMaxDim)
    throw ConfigError("config: F must be a positive half-integer with 2F+1 <= " + std::to_string(kMaxDim));
  if (!(omega0_hz > 0)) throw ConfigError("config: omega0_hz must be positive");
  if (!(drive_ratio > 0)) throw ConfigError("config: drive_ratio must be positive");
  if (!(loop_ratio > 0)) throw ConfigError("config: loop_ratio must be positive");
  if (!(omega_rf_hz > 0) || !(omega_z_hz > 0)) throw ConfigError("config: RF and Zeeman frequencies must be positive");
  for (double d : delta_hz)
    if (!std::isfinite(d)) throw ConfigError("config: detuning must be finite");
  if (!std::isfinite(epsilon_hz)) throw ConfigError("config: epsilon_hz must be finite");
  if (!(tol >= 1e-13 && tol <= 1e-4)) throw ConfigError("config: tol must lie in [1e-13, 1e-4]");
  if (!(sweep.span > 0) || sweep.points < 2) throw ConfigError("config: sweep needs span > 0 and points >= 2");
  if (tomography.scans < 1 || tomography.loops.empty()) throw ConfigError("config: tomography needs scans >= 1 and a loop");
  if (tomography.atom_count < 0 || tomography.scan_sigma_hz < 0 || tomography.record_sigma_hz < 0 ||
      tomography.imaging_sigma < 0 || tomography.restarts < 0)
    throw ConfigError("config: tomography noise settings must be non-negative");
  try {
    loop_label();
    for (const auto& l : tomography.loops)
      if (parse_loop_label(l) == LoopLabel::Custom) throw ConfigError("config: tomography needs catalog loops");
  } catch (const ConfigError&) {
    throw;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  if (loop_label() == LoopLabel::Custom &&
      (std::abs(custom.theta_winding - std::round(custom.theta_winding)) > 1e-12 ||
       std::abs(custom.phi_winding - std::round(custom.phi_winding)) > 1e-12))
    throw ConfigError("config: custom loop windings must be integers");
}

DrivingConfig ExperimentConfig::driving() const {
  validate();
  DrivingConfig c;
  c.spin = spin_value();
  c.omega0 = hz_to_rad(omega0_hz);
  c.omega = c.omega0 / drive_ratio;
  c.loop_rate = c.omega0 * loop_ratio;
  c.omega_rf = hz_to_rad(omega_rf_hz);
  c.omega_z = hz_to_rad(omega_z_hz);
  c.delta = Vec3(hz_to_rad(delta_hz[0]), hz_to_rad(delta_hz[1]), hz_to_rad(delta_hz[2]));
  c.epsilon = epsilon_mode == EpsilonMode::FromZeeman ? epsilon_from_zeeman(c.omega_z) : hz_to_rad(epsilon_hz);
  return c;
}

LoopLabel ExperimentConfig::loop_label() const { return parse_loop_label(loop); }

ParameterLoop ExperimentConfig::parameter_loop() const {
  const DrivingConfig c = driving();
  const LoopLabel label = loop_label();
  if (label != LoopLabel::Custom) return catalog_loop(label, c.loop_rate);
  return ParameterLoop::linear(custom.theta0, custom.theta_winding, custom.phi0, custom.phi_winding,
                               c.loop_rate);
}

std::vector<double> ExperimentConfig::delta_grid() const {
  const double half = sweep.span * hz_to_rad(omega0_hz);
  std::vector<double> grid(static_cast<std::size_t>(sweep.points));
  for (int k = 0; k < sweep.points; ++k)
    grid[static_cast<std::size_t>(k)] = -half + 2 * half * k / (sweep.points - 1);
  return grid;
}

NoiseModel ExperimentConfig::noise_model() const {
  NoiseModel n;
  n.delta_mean = hz_to_rad(tomography.delta_mean_hz);
  n.scan_sigma = hz_to_rad(tomography.scan_sigma_hz);
  n.record_sigma = hz_to_rad(tomography.record_sigma_hz);
  n.atom_count = tomography.atom_count;
  n.imaging_sigma = tomography.imaging_sigma;
  return n;
}

ExperimentConfig parse_config(const std::string& ini_text) {
  pt::ptree tree;
  std::istringstream in(ini_text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  const auto& keys = known_keys();
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty())
      throw ConfigError("config: key '" + section + "' outside a section");
    const auto it = keys.find(section);
    if (it == keys.end()) throw ConfigError("config: unknown section [" + section + "]");
    for (const auto& kv : body)
      if (!it->second.count(kv.first)) throw ConfigError("config: unknown key '" + section + "." + kv.first + "'");
  }

  ExperimentConfig c;
  c.spin = get(tree, "spin.F", c.spin);
  c.loop = get(tree, "loop.label", c.loop);
  c.custom.theta0 = get(tree, "loop.theta0", c.custom.theta0);
  c.custom.theta_winding = get(tree, "loop.theta_winding", c.custom.theta_winding);
  c.custom.phi0 = get(tree, "loop.phi0", c.custom.phi0);
  c.custom.phi_winding = get(tree, "loop.phi_winding", c.custom.phi_winding);
  c.omega0_hz = get(tree, "drive.omega0_hz", c.omega0_hz);
  c.drive_ratio = get(tree, "drive.drive_ratio", c.drive_ratio);
  c.loop_ratio = get(tree, "drive.loop_ratio", c.loop_ratio);
  c.omega_rf_hz = get(tree, "drive.omega_rf_hz", c.omega_rf_hz);
  c.omega_z_hz = get(tree, "drive.omega_z_hz", c.omega_z_hz);
  c.delta_hz[0] = get(tree, "detuning.delta_x_hz", c.delta_hz[0]);
  c.delta_hz[1] = get(tree, "detuning.delta_y_hz", c.delta_hz[1]);
  c.delta_hz[2] = get(tree, "detuning.delta_z_hz", c.delta_hz[2]);
  const std::string mode = get<std::string>(tree, "detuning.epsilon_mode", "explicit");
  if (mode == "explicit")
    c.epsilon_mode = EpsilonMode::Explicit;
  else if (mode == "from-zeeman")
    c.epsilon_mode = EpsilonMode::FromZeeman;
  else
    throw ConfigError("config: epsilon_mode must be 'explicit' or 'from-zeeman'");
  c.epsilon_hz = get(tree, "detuning.epsilon_hz", c.epsilon_hz);
  c.tol = get(tree, "integrator.tol", c.tol);
  c.seed = get(tree, "run.seed", c.seed);
  c.out_dir = get(tree, "run.out_dir", c.out_dir);
  c.sweep.span = get(tree, "sweep.span", c.sweep.span);
  c.sweep.points = get(tree, "sweep.points", c.sweep.points);
  auto& t = c.tomography;
  t.scans = get(tree, "tomography.scans", t.scans);
  if (const auto loops = tree.get_optional<std::string>("tomography.loops")) t.loops = split_list(*loops);
  t.atom_count = get(tree, "tomography.atom_count", t.atom_count);
  t.delta_mean_hz = get(tree, "tomography.delta_mean_hz", t.delta_mean_hz);
  t.scan_sigma_hz = get(tree, "tomography.scan_sigma_hz", t.scan_sigma_hz);
  t.record_sigma_hz = get(tree, "tomography.record_sigma_hz", t.record_sigma_hz);
  t.imaging_sigma = get(tree, "tomography.imaging_sigma", t.imaging_sigma);
  t.restarts = get(tree, "tomography.restarts", t.restarts);
  c.validate();
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open '" + path + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_config(buf.str());
}

std::string render_config(const ExperimentConfig& c) {
  std::ostringstream o;
  o << "; frequencies in Hz\n"
    << "[spin]\nF = " << fmt(c.spin) << "\n\n"
    << "[loop]\nlabel = " << c.loop << "\n"
    << "theta0 = " << fmt(c.custom.theta0) << "\ntheta_winding = " << fmt(c.custom.theta_winding)
    << "\nphi0 = " << fmt(c.custom.phi0) << "\nphi_winding = " << fmt(c.custom.phi_winding) << "\n\n"
    << "[drive]\nomega0_hz = " << fmt(c.omega0_hz) << "\ndrive_ratio = " << fmt(c.drive_ratio)
    << "\nloop_ratio = " << fmt(c.loop_ratio) << "\nomega_rf_hz = " << fmt(c.omega_rf_hz)
    << "\nomega_z_hz = " << fmt(c.omega_z_hz) << "\n\n"
    << "[detuning]\ndelta_x_hz = " << fmt(c.delta_hz[0]) << "\ndelta_y_hz = " << fmt(c.delta_hz[1])
    << "\ndelta_z_hz = " << fmt(c.delta_hz[2]) << "\nepsilon_mode = "
    << (c.epsilon_mode == EpsilonMode::FromZeeman ? "from-zeeman" : "explicit")
    << "\nepsilon_hz = " << fmt(c.epsilon_hz) << "\n\n"
    << "[integrator]\ntol = " << fmt(c.tol) << "\n\n"
    << "[run]\nseed = " << c.seed << "\nout_dir = " << c.out_dir << "\n\n"
    << "[sweep]\nspan = " << fmt(c.sweep.span) << "\npoints = " << c.sweep.points << "\n\n";
  const auto& t = c.tomography;
  o << "[tomography]\nscans = " << t.scans << "\nloops = " << join(t.loops)
    << "\natom_count = " << t.atom_count << "\ndelta_mean_hz = " << fmt(t.delta_mean_hz)
    << "\nscan_sigma_hz = " << fmt(t.scan_sigma_hz) << "\nrecord_sigma_hz = " << fmt(t.record_sigma_hz)
    << "\nimaging_sigma = " << fmt(t.imaging_sigma) << "\nrestarts = " << t.restarts << "\n";
  return o.str();
}

}  // namespace floqgate
