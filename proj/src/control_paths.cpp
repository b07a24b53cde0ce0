#include "floqgate/control_paths.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace floqgate {

namespace {

constexpr double kPi = std::numbers::pi;

struct LabelName {
  LoopLabel label;
  std::string_view name;
};

constexpr std::array<LabelName, 10> kLabelNames{{{LoopLabel::L1, "l1"},
                                                 {LoopLabel::L2, "l2"},
                                                 {LoopLabel::L3, "l3"},
                                                 {LoopLabel::L4, "l4"},
                                                 {LoopLabel::L5, "l5"},
                                                 {LoopLabel::L6, "l6"},
                                                 {LoopLabel::P1, "p1"},
                                                 {LoopLabel::P2, "p2"},
                                                 {LoopLabel::P3, "p3"},
                                                 {LoopLabel::Custom, "custom"}}};

void check_time(const ParameterLoop& loop, double t) {
  const double slack = 1e-12 * std::max(1.0, loop.duration);
  if (!(t >= -slack && t <= loop.duration + slack))
    throw std::out_of_range("loop time " + std::to_string(t) + " outside [0, " +
                            std::to_string(loop.duration) + "]");
}

// integral of cos(Theta(t')) cos(omega t') over [a, b], split at half drive
// periods so each Gauss-Kronrod panel sees at most one lobe.
double cos_theta_drive_integral(const ParameterLoop& loop, double a, double b, double omega) {
  if (b <= a) return 0.0;
  auto integrand = [&](double s) { return std::cos(loop.theta(s)) * std::cos(omega * s); };
  const double panel = kPi / omega;
  double total = 0.0;
  for (double lo = a; lo < b;) {
    const double hi = std::min(b, lo + panel);
    double err = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, lo, hi, 4,
                                                                           1e-13, &err);
    lo = hi;
  }
  return total;
}

bool has_constant_theta(const ParameterLoop& loop) {
  // Linear loops record a constant polar angle by leaving dtheta identically
  // zero; probe a few points rather than trusting a flag.
  for (double frac : {0.0, 0.173, 0.5, 0.81, 1.0})
    if (loop.dtheta(frac * loop.duration) != 0.0) return false;
  return true;
}

}  // namespace

std::string to_string(LoopLabel label) {
  for (const auto& ln : kLabelNames)
    if (ln.label == label) return std::string(ln.name);
  return "custom";
}

LoopLabel parse_loop_label(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  for (const auto& ln : kLabelNames)
    if (ln.name == lower) return ln.label;
  throw std::invalid_argument("unknown loop label '" + std::string(text) + "'");
}

const std::vector<LoopLabel>& experimental_loops() {
  static const std::vector<LoopLabel> loops{LoopLabel::L1, LoopLabel::L2, LoopLabel::L3,
                                            LoopLabel::L4, LoopLabel::L5, LoopLabel::L6};
  return loops;
}

ParameterLoop ParameterLoop::linear(double theta0, double theta_winding, double phi0,
                                    double phi_winding, double loop_rate, std::string name) {
  if (!(loop_rate > 0)) throw std::invalid_argument("loop rate must be positive");
  ParameterLoop loop;
  const double theta_rate = theta_winding * loop_rate;
  const double phi_rate = phi_winding * loop_rate;
  loop.theta = [theta0, theta_rate](double t) { return theta0 + theta_rate * t; };
  loop.phi = [phi0, phi_rate](double t) { return phi0 + phi_rate * t; };
  loop.dtheta = [theta_rate](double) { return theta_rate; };
  loop.dphi = [phi_rate](double) { return phi_rate; };
  loop.duration = kTwoPi / loop_rate;
  loop.name = std::move(name);
  if (loop.closure_gap() > 1e-9)
    throw std::invalid_argument("loop '" + loop.name + "' is not closed: |q(0) - q(T)| = " +
                                std::to_string(loop.closure_gap()));
  return loop;
}

ParameterLoop ParameterLoop::reversed() const {
  ParameterLoop r;
  const double period = duration;
  r.theta = [f = theta, period](double t) { return f(period - t); };
  r.phi = [f = phi, period](double t) { return f(period - t); };
  r.dtheta = [f = dtheta, period](double t) { return -f(period - t); };
  r.dphi = [f = dphi, period](double t) { return -f(period - t); };
  r.duration = duration;
  r.label = LoopLabel::Custom;
  r.name = name + "-reversed";
  return r;
}

double ParameterLoop::closure_gap() const {
  return (q_of_t(*this, 0.0) - q_of_t(*this, duration)).norm();
}

ParameterLoop catalog_loop(LoopLabel label, double loop_rate) {
  ParameterLoop loop;
  switch (label) {
    case LoopLabel::L1: loop = ParameterLoop::linear(0, 1, 0, 0, loop_rate); break;
    case LoopLabel::L2: loop = ParameterLoop::linear(0, 1, kPi / 2, 0, loop_rate); break;
    case LoopLabel::L3: loop = ParameterLoop::linear(kPi / 2, 0, 0, 1, loop_rate); break;
    case LoopLabel::L4: loop = ParameterLoop::linear(0, 1, kPi / 4, 0, loop_rate); break;
    case LoopLabel::L5: loop = ParameterLoop::linear(kPi / 4, 0, 0, 1, loop_rate); break;
    case LoopLabel::L6: loop = ParameterLoop::linear(0, 1, 0, 1, loop_rate); break;
    case LoopLabel::P1: loop = ParameterLoop::linear(0, 1, -kPi / 2, 0, loop_rate); break;
    case LoopLabel::P2: loop = ParameterLoop::linear(0, 1, 0, 0, loop_rate); break;
    case LoopLabel::P3: loop = ParameterLoop::linear(kPi / 2, 0, 0, 1, loop_rate); break;
    case LoopLabel::Custom:
      throw std::invalid_argument("catalog_loop: 'custom' is not a catalog entry");
  }
  loop.label = label;
  loop.name = to_string(label);
  return loop;
}

Vec3 q_of_t(const ParameterLoop& loop, double t) {
  check_time(loop, t);
  const double th = loop.theta(t);
  const double ph = loop.phi(t);
  return {std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)};
}

Vec3 dq_dt(const ParameterLoop& loop, double t) {
  check_time(loop, t);
  const double th = loop.theta(t);
  const double ph = loop.phi(t);
  const double dth = loop.dtheta(t);
  const double dph = loop.dphi(t);
  const double st = std::sin(th), ct = std::cos(th), sp = std::sin(ph), cp = std::cos(ph);
  return {ct * cp * dth - st * sp * dph, ct * sp * dth + st * cp * dph, -st * dth};
}

double rf_amplitude(const ParameterLoop& loop, double t, double omega0, double omega) {
  check_time(loop, t);
  return 2.0 * omega0 * std::sin(loop.theta(t)) * std::cos(omega * t);
}

double rf_phase(const ParameterLoop& loop, double t, double omega0, double omega) {
  check_time(loop, t);
  double integral = 0.0;
  if (has_constant_theta(loop))
    integral = std::cos(loop.theta(0.0)) * std::sin(omega * t) / omega;
  else
    integral = cos_theta_drive_integral(loop, 0.0, t, omega);
  return loop.phi(t) + kPi / 2 - omega0 * integral;
}

std::vector<double> rf_phase_on_grid(const ParameterLoop& loop, const std::vector<double>& times,
                                     double omega0, double omega) {
  std::vector<double> out;
  out.reserve(times.size());
  const bool constant = has_constant_theta(loop);
  const double cos_theta0 = std::cos(loop.theta(0.0));
  double integral = 0.0;
  double prev = 0.0;
  for (double t : times) {
    check_time(loop, t);
    if (t < prev) throw std::invalid_argument("rf_phase_on_grid: times must be non-decreasing");
    if (constant)
      integral = cos_theta0 * std::sin(omega * t) / omega;
    else
      integral += cos_theta_drive_integral(loop, prev, t, omega);
    prev = t;
    out.push_back(loop.phi(t) + kPi / 2 - omega0 * integral);
  }
  return out;
}

Waveform synthesize_waveform(const ParameterLoop& loop, const DrivingConfig& config,
                             double sample_rate) {
  const double nyquist = 2.0 * (rad_to_hz(config.omega_rf) + rad_to_hz(config.omega));
  if (!(sample_rate > nyquist))
    throw std::invalid_argument("synthesize_waveform: sample rate " + std::to_string(sample_rate) +
                                " Hz is below the Nyquist rate " + std::to_string(nyquist) + " Hz");
  Waveform wf;
  wf.sample_rate = sample_rate;
  const auto count = static_cast<std::size_t>(std::floor(loop.duration * sample_rate)) + 1;
  wf.t.resize(count);
  for (std::size_t k = 0; k < count; ++k)
    wf.t[k] = std::min(loop.duration, static_cast<double>(k) / sample_rate);
  const auto phase = rf_phase_on_grid(loop, wf.t, config.omega0, config.omega);
  wf.amplitude.resize(count);
  for (std::size_t k = 0; k < count; ++k) {
    const double t = wf.t[k];
    wf.amplitude[k] = rf_amplitude(loop, t, config.omega0, config.omega) *
                      std::sin(config.omega_rf * t + phase[k]);
  }
  return wf;
}

}  // namespace floqgate
