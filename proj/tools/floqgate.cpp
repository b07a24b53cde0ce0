// Command-line front end: floqgate <subcommand> [--config FILE] [options]
#include "floqgate/config.hpp"
#include "floqgate/experiments.hpp"
#include "floqgate/propagation.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <iostream>
#include <optional>

namespace {

enum Exit { kOk = 0, kValidation = 1, kNumerical = 2 };

struct Overrides {
  std::string config_path;
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out_dir;
  std::optional<double> tol;
  std::optional<std::string> loop;
  std::optional<double> spin;
  bool print_config = false;
};

floqgate::ExperimentConfig resolve(const Overrides& o) {
  floqgate::ExperimentConfig c = o.config_path.empty() ? floqgate::ExperimentConfig{} : floqgate::load_config(o.config_path);
  if (o.seed) c.seed = *o.seed;
  if (o.out_dir) c.out_dir = *o.out_dir;
  if (o.tol) c.tol = *o.tol;
  if (o.loop) c.loop = *o.loop;
  if (o.spin) c.spin = *o.spin;
  c.validate();
  return c;
}

void report(const floqgate::RunOutput& out) {
  for (const auto& [key, value] : out.summary) std::printf("%s = %.10g\n", key.c_str(), value);
  for (const auto& f : out.files) std::printf("wrote %s\n", f.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Floquet-engineered spin holonomies: simulation, gauge analysis and synthetic tomography"};
  app.require_subcommand(1);
  Overrides o;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", o.config_path, "INI configuration file")->check(CLI::ExistingFile);
    sub->add_option("--seed", o.seed, "master RNG seed");
    sub->add_option("--out-dir", o.out_dir, "output directory");
    sub->add_option("--tol", o.tol, "integrator tolerance");
    sub->add_option("--loop", o.loop, "loop label (l1..l6, p1..p3, custom)");
    sub->add_option("--spin", o.spin, "spin F");
    sub->add_flag("--print-config", o.print_config, "print the resolved configuration and exit");
  };
  auto* trajectory = app.add_subcommand("trajectory", "Bloch trajectories in the rotating and Floquet frames");
  auto* holonomy = app.add_subcommand("holonomy", "closed-form, path-ordered and non-adiabatic holonomies");
  auto* sweep = app.add_subcommand("fidelity-sweep", "fidelity against Delta_z for the six experimental loops");
  auto* wilson = app.add_subcommand("wilson", "Wilson-loop ordering difference against Delta_z");
  auto* tomography = app.add_subcommand("tomography", "synthetic tomography scans and fits");
  auto* fit = app.add_subcommand("fit", "fit a saved tomography dataset");
  std::string dataset;
  fit->add_option("dataset", dataset, "dataset JSON")->required()->check(CLI::ExistingFile);
  for (auto* sub : {trajectory, holonomy, sweep, wilson, tomography, fit}) add_common(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kValidation;
  }

  try {
    const floqgate::ExperimentConfig config = resolve(o);
    if (o.print_config) {
      std::cout << floqgate::render_config(config);
      return kOk;
    }
    floqgate::RunOutput out;
    if (*trajectory) out = floqgate::run_trajectory(config);
    else if (*holonomy) out = floqgate::run_holonomy(config);
    else if (*sweep) out = floqgate::run_fidelity_sweep(config);
    else if (*wilson) out = floqgate::run_wilson(config);
    else if (*tomography) out = floqgate::run_tomography(config);
    else out = floqgate::run_fit(config, dataset);
    report(out);
    return kOk;
  } catch (const floqgate::IntegrationError& e) {
    std::cerr << "numerical failure at t = " << e.time << ": " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::runtime_error& e) {  // file I/O
    std::cerr << "error: " << e.what() << '\n';
    return kValidation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
}
