#include <doctest.h>

#include "floqgate/config.hpp"
#include "floqgate/hamiltonians.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>

using namespace floqgate;

TEST_CASE("defaults are the operating point") {
  const ExperimentConfig c;
  const DrivingConfig d = c.driving();
  const DrivingConfig op = DrivingConfig::operating_point(Spin::from_value(1.0));
  CHECK(d.omega0 == doctest::Approx(op.omega0));
  CHECK(d.omega == doctest::Approx(op.omega));
  CHECK(d.loop_rate == doctest::Approx(op.loop_rate));
  CHECK(d.omega0 == doctest::Approx(2 * std::numbers::pi * 14.27e3));
  CHECK(d.epsilon == 0.0);
  CHECK(d.delta.isZero());
  CHECK(c.loop_label() == LoopLabel::L1);
}

TEST_CASE("frequencies in Hz become angular rates") {
  const auto c = parse_config(R"(
[spin]
F = 1.5
[drive]
omega0_hz = 10000
drive_ratio = 2
loop_ratio = 0.05
[detuning]
delta_z_hz = 250
delta_x_hz = -10
epsilon_mode = from-zeeman
)");
  const auto d = c.driving();
  CHECK(d.spin.twice() == 3);
  CHECK(d.omega0 == doctest::Approx(2 * std::numbers::pi * 1e4));
  CHECK(d.omega == doctest::Approx(2 * std::numbers::pi * 5e3));
  CHECK(d.loop_rate == doctest::Approx(2 * std::numbers::pi * 500));
  CHECK(d.delta[2] == doctest::Approx(2 * std::numbers::pi * 250));
  CHECK(d.delta[0] == doctest::Approx(-2 * std::numbers::pi * 10));
  CHECK(d.epsilon == doctest::Approx(epsilon_from_zeeman(d.omega_z)));

  const auto e = parse_config("[detuning]\nepsilon_mode = explicit\nepsilon_hz = 100\n");
  CHECK(e.driving().epsilon == doctest::Approx(2 * std::numbers::pi * 100));
}

TEST_CASE("render and parse round trip") {
  ExperimentConfig c;
  c.spin = 2;
  c.loop = "custom";
  c.custom.theta_winding = 1;
  c.custom.phi_winding = 2;
  c.custom.theta0 = 0.3;
  c.delta_hz = {1.5, -2.25, 1e3 / 3};
  c.tol = 3e-9;
  c.seed = 987654321987ULL;
  c.out_dir = "results/run1";
  c.sweep.points = 17;
  c.tomography.loops = {"l2", "l5"};
  c.tomography.record_sigma_hz = 0;
  c.epsilon_mode = EpsilonMode::FromZeeman;
  const std::string text = render_config(c);
  const auto back = parse_config(text);
  CHECK(render_config(back) == text);
  CHECK(back.delta_hz == c.delta_hz);
  CHECK(back.seed == c.seed);
  CHECK(back.tomography.loops == c.tomography.loops);
  CHECK(back.custom.theta0 == c.custom.theta0);
  CHECK(back.epsilon_mode == EpsilonMode::FromZeeman);
  // defaults are all materialized
  CHECK(render_config(ExperimentConfig{}).find("record_sigma_hz = 200") != std::string::npos);
}

TEST_CASE("custom loop") {
  auto c = parse_config("[loop]\nlabel = custom\ntheta0 = 1.5707963267948966\nphi_winding = 1\n");
  const auto loop = c.parameter_loop();
  CHECK(loop.label == LoopLabel::Custom);
  CHECK(loop.closure_gap() < 1e-12);
  CHECK(loop.duration == doctest::Approx(2 * std::numbers::pi / c.driving().loop_rate));
  c.custom.phi_winding = 0.5;
  CHECK_THROWS_AS(c.validate(), ConfigError);
}

TEST_CASE("delta grid") {
  ExperimentConfig c;
  c.sweep.points = 5;
  const auto grid = c.delta_grid();
  REQUIRE(grid.size() == 5);
  const double w0 = 2 * std::numbers::pi * 14.27e3;
  CHECK(grid.front() == doctest::Approx(-0.2 * w0));
  CHECK(grid[2] == doctest::Approx(0.0));
  CHECK(grid.back() == doctest::Approx(0.2 * w0));
}

TEST_CASE("noise model") {
  const auto n = parse_config("[tomography]\nscan_sigma_hz = 100\natom_count = 0\n").noise_model();
  CHECK(n.scan_sigma == doctest::Approx(2 * std::numbers::pi * 100));
  CHECK(n.record_sigma == doctest::Approx(2 * std::numbers::pi * 200));
  CHECK(n.atom_count == 0);
}

TEST_CASE("validation") {
  CHECK_THROWS_AS(parse_config("[spin]\nF = 0.7\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[spin]\nF = 6\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[spin]\nF = abc\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[drive]\ndrive_ratio = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[drive]\nloop_ratio = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[drive]\nomega0 = 5\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[nonsense]\nx = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("stray = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[loop]\nlabel = l9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[detuning]\nepsilon_mode = maybe\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[integrator]\ntol = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[tomography]\nloops = custom\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[sweep]\npoints = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[spin\nF = 1\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.ini"), ConfigError);
}

TEST_CASE("load from file") {
  const auto path = std::filesystem::temp_directory_path() / "floqgate_config_test.ini";
  {
    std::ofstream out(path);
    out << "; comment\n[spin]\nF = 0.5\n[run]\nseed = 7\n";
  }
  const auto c = load_config(path.string());
  CHECK(c.spin == 0.5);
  CHECK(c.seed == 7);
  std::filesystem::remove(path);
}
