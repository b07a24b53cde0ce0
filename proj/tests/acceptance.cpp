// Acceptance suite: one PASS/FAIL line per criterion, with measured values
// and wall time. `--expect-fail N` marks criterion N as a known failure; the
// exit status is non-zero on any unexpected failure or unexpected pass.
#include "floqgate/gauge_analysis.hpp"
#include "floqgate/hamiltonians.hpp"
#include "floqgate/propagation.hpp"
#include "floqgate/tomography.hpp"
#include "oracles.hpp"

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>

using namespace floqgate;

namespace {

constexpr double kPi = std::numbers::pi;

struct Outcome {
  bool pass = true;
  std::string detail;
};

struct Criterion {
  int id;
  std::string name;
  double time_limit_s;
  std::function<Outcome()> run;
};

std::string sci(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", x);
  return buf;
}

Outcome coupling_constant() {
  const double g = g_factor(1.0, 1.0);
  const double oracle_g = 1.0 - oracle::j0_series(1.0);
  Outcome o;
  o.pass = std::abs(g - 0.234802) <= 1e-6 && std::abs(g - oracle_g) <= 1e-12;
  char buf[96];
  std::snprintf(buf, sizeof buf, "g=%.10f oracle=%.10f", g, oracle_g);
  o.detail = buf;
  return o;
}

Outcome closed_vs_path_ordered() {
  const double g = g_factor(1.0, 1.0);
  double worst = 1.0;
  const LoopLabel loops[] = {LoopLabel::L1, LoopLabel::L2, LoopLabel::L3, LoopLabel::L4,
                             LoopLabel::P1, LoopLabel::P2, LoopLabel::P3};
  for (double f : {0.5, 1.0, 2.0})
    for (LoopLabel label : loops) {
      const Spin spin = Spin::from_value(f);
      const auto loop = catalog_loop(label, 1.0);
      worst = std::min(worst, fidelity(holonomy_path_ordered(loop, g, spin, 10000),
                                       holonomy_closed_form(label, g, spin)));
    }
  return {worst >= 1 - 1e-8, "min fidelity=" + std::to_string(worst) + " (1-F=" + sci(1 - worst) + ")"};
}

Outcome nonadiabatic_error() {
  std::vector<double> infid;
  for (double ratio : {1.0 / 10, 1.0 / 40, 1.0 / 160}) {
    auto cfg = DrivingConfig::operating_point(Spin::from_value(0.5));
    cfg.loop_rate = ratio * cfg.omega;
    const auto loop = catalog_loop(LoopLabel::L1, cfg.loop_rate);
    const auto traj = stroboscopic_trajectory(loop, cfg, Frame::Rotating, 1e-11);
    const UnitaryD target = holonomy_closed_form(LoopLabel::L1, g_factor(cfg.omega0, cfg.omega), cfg.spin);
    infid.push_back(1 - fidelity(traj.back().second, target));
  }
  const bool band = infid[0] >= 0.01 && infid[0] <= 0.06;
  const bool monotone = infid[1] < infid[0] && infid[2] < infid[1];
  Outcome o;
  o.pass = band && monotone;
  o.detail = "1-F at Omega/omega=1/10,1/40,1/160: " + sci(infid[0]) + ", " + sci(infid[1]) + ", " +
             sci(infid[2]) + (band ? "" : " [outside 0.01..0.06]") + (monotone ? " monotone" : " NOT monotone");
  return o;
}

Outcome detuning_average_oracle() {
  std::mt19937_64 rng(20240);
  std::normal_distribution<double> nd;
  auto cfg = DrivingConfig::operating_point(Spin::from_value(1.0));
  double worst = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const Vec3 q = Vec3(nd(rng), nd(rng), nd(rng)).normalized();
    cfg.delta = Vec3(nd(rng), nd(rng), nd(rng));
    const auto loop = ParameterLoop::linear(std::acos(q[2]), 0, std::atan2(q[1], q[0]), 0, cfg.loop_rate);
    const Matrix df = spin_ops(cfg.spin).dot(cfg.delta);
    const int n = 2048;
    const double period = kTwoPi / cfg.omega;
    Matrix avg = Matrix::Zero(df.rows(), df.cols());
    for (int k = 0; k < n; ++k) {
      const Matrix u = micromotion(period * k / n, loop, cfg).matrix();
      avg += u.adjoint() * df * u;
    }
    avg /= double(n);
    worst = std::max(worst, oracle::max_abs(avg - h_detuning_floquet(0.0, loop, cfg)) / cfg.delta.norm());
  }
  return {worst <= 1e-6, "max |average - closed form| / |Delta| = " + sci(worst)};
}

Outcome trace_commutator() {
  const double g = 0.234802;
  double worst = 0.0, worst_imag = 0.0, at_zero = 0.0;
  std::ostringstream values;
  for (double f : {0.5, 1.0, 1.5, 2.0}) {
    const Spin spin = Spin::from_value(f);
    const Matrix g1 = holonomy_closed_form(LoopLabel::P1, g, spin).matrix();
    const Matrix g2 = holonomy_closed_form(LoopLabel::P2, g, spin).matrix();
    const Matrix g3 = holonomy_closed_form(LoopLabel::P3, g, spin).matrix();
    const cplx brute = (g3 * (g2 * g1 - g1 * g2)).trace();
    const double analytic = trace_commutator_analytic(spin, g);
    worst = std::max(worst, std::abs(brute - analytic));
    worst_imag = std::max(worst_imag, std::abs(brute.imag()));
    at_zero = std::max(at_zero, std::abs(trace_commutator_analytic(spin, 0.0)));
    values << " F=" << f << ":" << sci(analytic);
  }
  return {worst <= 1e-10 && worst_imag <= 1e-10 && at_zero <= 1e-12,
          "max |analytic - brute|=" + sci(worst) + " max |Im|=" + sci(worst_imag) + " I(g=0)=" + sci(at_zero) +
              values.str()};
}

// Some fidelity rises by more than 0.01 above an earlier minimum (Delta_z > 0 half).
bool has_revival(const std::vector<FidelityPoint>& curve) {
  double lowest = 2.0;
  for (const auto& p : curve) {
    if (p.delta_z < 0) continue;
    lowest = std::min(lowest, p.fidelity);
    if (p.fidelity > lowest + 0.01) return true;
  }
  return false;
}

Outcome detuning_revival() {
  const auto cfg = DrivingConfig::operating_point(Spin::from_value(1.0));
  const double g = g_factor(cfg.omega0, cfg.omega);
  std::vector<double> grid(200);
  for (int k = 0; k < 200; ++k) grid[std::size_t(k)] = -0.2 * cfg.omega0 + 0.4 * cfg.omega0 * k / 199;
  const auto l3 = catalog_loop(LoopLabel::L3, cfg.loop_rate);
  const double revival = revival_detuning(g, l3.duration);
  const double at_revival = fidelity_vs_detuning(l3, cfg, {revival}).front().fidelity;
  int revivals = 0;
  std::string missing;
  for (LoopLabel label : experimental_loops()) {
    if (has_revival(fidelity_vs_detuning(catalog_loop(label, cfg.loop_rate), cfg, grid)))
      ++revivals;
    else
      missing += " " + to_string(label);
  }
  return {at_revival >= 0.999 && revivals == 6,
          "l3 fidelity at Delta_z=" + sci(revival / cfg.omega0) + " Omega0: " + std::to_string(at_revival) +
              "; loops with revivals " + std::to_string(revivals) + "/6" + (missing.empty() ? "" : " missing:" + missing)};
}

Outcome tomography_round_trip() {
  std::mt19937_64 rng(777);
  const Spin spin = Spin::from_value(1.0);
  double worst = 1.0;
  for (int k = 0; k < 20; ++k) {
    const UnitaryD gate(oracle::haar_special_unitary(3, rng));
    const auto data = generate_dataset(gate, default_plan(spin), NoiseModel::noiseless(), 1000 + std::uint64_t(k));
    worst = std::min(worst, fidelity(fit_holonomy(data).reconstructed, gate));
  }
  const auto cfg = DrivingConfig::operating_point(spin);
  double worst_dz = 0.0;
  for (LoopLabel label : {LoopLabel::L1, LoopLabel::L4, LoopLabel::L6})
    for (double hz : {0.0, 500.0}) {
      NoiseModel noise = NoiseModel::noiseless();
      noise.delta_mean = hz_to_rad(hz);
      const auto data = generate_dataset(label, cfg, default_plan(spin), noise, 55);
      worst_dz = std::max(worst_dz, std::abs(fit_detuning(data).delta_z - hz_to_rad(hz)));
    }
  return {worst >= 0.999 && worst_dz <= hz_to_rad(10.0),
          "min SU(3) fidelity=" + std::to_string(worst) + "; max |Delta_z error|=" + sci(rad_to_hz(worst_dz)) + " Hz"};
}

Outcome statistical_reproduction() {
  // 0.2 kHz detuning noise per scan and per measurement, 1e5 atoms, quadratic
  // Zeeman shift in both the data and the models.
  auto cfg = DrivingConfig::operating_point(Spin::from_value(1.0));
  cfg.epsilon = epsilon_from_zeeman(cfg.omega_z);
  NoiseModel noise;
  noise.scan_sigma = hz_to_rad(200.0);
  noise.record_sigma = hz_to_rad(200.0);
  noise.atom_count = 100000;
  const int per_loop = 9;
  double sum_ideal = 0.0, sum_detuned = 0.0;
  int scans = 0;
  for (LoopLabel label : experimental_loops())
    for (int s = 0; s < per_loop; ++s) {
      const auto data = generate_dataset(label, cfg, default_plan(cfg.spin), noise,
                                         5000 + 100 * std::uint64_t(label) + std::uint64_t(s));
      const auto rep = fidelity_report(data);
      sum_ideal += rep.fidelity_ideal;
      sum_detuned += rep.fidelity_detuned;
      ++scans;
    }
  const double mean_ideal = sum_ideal / scans, mean_detuned = sum_detuned / scans;
  return {mean_detuned >= 0.74 && mean_detuned <= 0.94 && mean_ideal < mean_detuned,
          std::to_string(scans) + " scans: mean F=" + std::to_string(mean_ideal) +
              ", mean F^Delta=" + std::to_string(mean_detuned)};
}

Outcome structural_invariants() {
  double comm = 0.0, casimir = 0.0;
  for (int twice = 1; twice <= 10; ++twice) {
    const Spin spin = Spin::from_twice(twice);
    const auto& o = spin_ops(spin);
    const cplx i(0, 1);
    comm = std::max({comm, oracle::max_abs(commutator(o.fx, o.fy) - i * o.fz),
                     oracle::max_abs(commutator(o.fy, o.fz) - i * o.fx),
                     oracle::max_abs(commutator(o.fz, o.fx) - i * o.fy)});
    const double f = spin.value();
    casimir = std::max(casimir, oracle::max_abs(o.fx * o.fx + o.fy * o.fy + o.fz * o.fz -
                                                f * (f + 1) * Matrix::Identity(spin.dim(), spin.dim())));
  }
  double wigner = 0.0;
  for (int twice = 1; twice <= 4; ++twice) {
    const Spin spin = Spin::from_twice(twice);
    for (double beta = -3.0; beta <= 3.0; beta += 0.37) {
      const Eigen::MatrixXd d = wigner_d_matrix(spin, beta);
      const int n = spin.dim();
      wigner = std::max(wigner, (d * d.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff());
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          const double m = spin.m_of_index(a), mp = spin.m_of_index(b);
          const double sign = std::lround(m - mp) % 2 == 0 ? 1.0 : -1.0;
          wigner = std::max({wigner, std::abs(d(a, b) - sign * d(b, a)), std::abs(d(a, b) - d(n - 1 - b, n - 1 - a))});
        }
    }
  }
  double drift = 0.0, su2 = 0.0;
  const LoopLabel loops[] = {LoopLabel::L1, LoopLabel::L2, LoopLabel::L3, LoopLabel::L4, LoopLabel::L5,
                             LoopLabel::L6, LoopLabel::P1, LoopLabel::P2, LoopLabel::P3};
  for (double f : {0.5, 1.0, 1.5, 2.0}) {
    const auto cfg = DrivingConfig::operating_point(Spin::from_value(f));
    for (LoopLabel label : loops) {
      const auto loop = catalog_loop(label, cfg.loop_rate);
      const auto res = propagate_nonadiabatic(loop, cfg);
      drift = std::max({drift, res.diagnostics.max_unitarity_drift, unitarity_defect(res.final_unitary.matrix())});
      su2 = std::max(su2, su2_projection(res.final_unitary).residual);
    }
    const auto rot = propagate(frame_hamiltonian(catalog_loop(LoopLabel::L2, cfg.loop_rate), cfg, Frame::Rotating), 0.0,
                               catalog_loop(LoopLabel::L2, cfg.loop_rate).duration,
                               PropagateOptions{1e-10, drive_step_limit(cfg), {}, 50'000'000});
    drift = std::max({drift, rot.diagnostics.max_unitarity_drift, unitarity_defect(rot.final_unitary.matrix())});
  }
  return {comm <= 1e-12 && casimir <= 1e-10 && wigner <= 1e-10 && drift <= 1e-8 && su2 <= 1e-8,
          "commutators " + sci(comm) + ", Casimir " + sci(casimir) + ", Wigner-d " + sci(wigner) +
              ", unitarity drift " + sci(drift) + ", SU(2) residual " + sci(su2)};
}

}  // namespace

int main(int argc, char** argv) {
  std::set<int> expected_fail;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--expect-fail") == 0 && i + 1 < argc)
      expected_fail.insert(std::atoi(argv[++i]));
    else if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc)
      only.insert(std::atoi(argv[++i]));
    else {
      std::fprintf(stderr, "usage: %s [--expect-fail N]... [--only N]...\n", argv[0]);
      return 2;
    }
  }

  const std::vector<Criterion> criteria{
      {1, "coupling constant", 1e-3, coupling_constant},
      {2, "closed form vs path-ordered", 10, closed_vs_path_ordered},
      {3, "non-adiabatic error (l1, F=1/2)", 30, nonadiabatic_error},
      {4, "micromotion average of the detuning", 10, detuning_average_oracle},
      {5, "trace commutator", 5, trace_commutator},
      {6, "l3 revival and detuning revivals", 120, detuning_revival},
      {7, "tomography round trip", 300, tomography_round_trip},
      {8, "statistical fidelity reproduction", 900, statistical_reproduction},
      {9, "structural invariants", 60, structural_invariants},
  };

  int unexpected = 0;
  for (const auto& c : criteria) {
    if (!only.empty() && !only.count(c.id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const bool in_time = secs < c.time_limit_s;
    const bool pass = o.pass && in_time;
    const bool known = expected_fail.count(c.id) > 0;
    std::printf("[%s] %d %s: %s; %.3f s (limit %g s)%s%s\n", pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs, c.time_limit_s, in_time ? "" : " TOO SLOW",
                known ? (pass ? " (expected to fail)" : " (known failure)") : "");
    std::fflush(stdout);
    if (pass == known) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
