#include "floqgate/propagation.hpp"

#include "floqgate/hamiltonians.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace floqgate {

namespace {

// Dormand-Prince 5(4) tableau.
constexpr std::array<double, 7> kC{0.0, 1.0 / 5, 3.0 / 10, 4.0 / 5, 8.0 / 9, 1.0, 1.0};
constexpr double kA[7][6] = {
    {},
    {1.0 / 5},
    {3.0 / 40, 9.0 / 40},
    {44.0 / 45, -56.0 / 15, 32.0 / 9},
    {19372.0 / 6561, -25360.0 / 2187, 64448.0 / 6561, -212.0 / 729},
    {9017.0 / 3168, -355.0 / 33, 46732.0 / 5247, 49.0 / 176, -5103.0 / 18656},
    {35.0 / 384, 0.0, 500.0 / 1113, 125.0 / 192, -2187.0 / 6784, 11.0 / 84}};
// fifth-order weights minus embedded fourth-order weights
constexpr std::array<double, 7> kE{71.0 / 57600,      0.0,          -71.0 / 16695, 71.0 / 1920,
                                   -17253.0 / 339200, 22.0 / 525,   -1.0 / 40};

const cplx kMinusI(0.0, -1.0);

class Integrator {
 public:
  Integrator(const HamiltonianFn& h, const PropagateOptions& opts, int dim)
      : h_(h), opts_(opts), dim_(dim), reproject_at_(std::min(10.0 * opts.tol, 1e-9)) {}

  // Advance u from t to t_end; h_cur holds H(t) on entry and exit.
  void advance(Matrix& u, double& t, double t_end, Matrix& h_cur, double& step) {
    const double span = t_end - t;
    if (span <= 0) return;
    std::array<Matrix, 7> k;
    while (t < t_end) {
      const double remaining = t_end - t;
      const double tiny = 1e-13 * std::max({std::abs(t), std::abs(t_end), span});
      if (remaining <= tiny) {
        // rounding leftover; H over this interval is below the error budget
        t = t_end;
        break;
      }
      bool last = false;
      double hstep = std::min(step, opts_.max_step);
      // stretch by up to 1% rather than leave a sliver behind
      if (t + 1.01 * hstep >= t_end) {
        hstep = remaining;
        last = true;
      }
      if (hstep < tiny)
        throw IntegrationError("propagate: step size underflow at t = " + std::to_string(t), t,
                               diag_);
      if (diag_.accepted + diag_.rejected >= opts_.max_steps)
        throw IntegrationError("propagate: step budget exhausted", t, diag_);

      k[0] = kMinusI * (h_cur * u);
      Matrix h_end;
      for (int s = 1; s < 7; ++s) {
        Matrix y = u;
        for (int j = 0; j < s; ++j)
          if (kA[s][j] != 0.0) y += (hstep * kA[s][j]) * k[static_cast<std::size_t>(j)];
        const double ts = (s == 6 || (last && kC[s] == 1.0)) ? t + hstep : t + kC[s] * hstep;
        Matrix hs = h_(ts);
        k[static_cast<std::size_t>(s)] = kMinusI * (hs * y);
        if (s == 6) {
          h_end = std::move(hs);
          stage_seven_input_ = std::move(y);
        }
      }
      const Matrix& u_new = stage_seven_input_;
      Matrix err = Matrix::Zero(dim_, dim_);
      for (int s = 0; s < 7; ++s)
        if (kE[static_cast<std::size_t>(s)] != 0.0)
          err += (hstep * kE[static_cast<std::size_t>(s)]) * k[static_cast<std::size_t>(s)];
      double err_norm = 0.0;
      for (int r = 0; r < dim_; ++r)
        for (int c = 0; c < dim_; ++c) {
          const double scale = opts_.tol * (1.0 + std::max(std::abs(u(r, c)), std::abs(u_new(r, c))));
          err_norm = std::max(err_norm, std::abs(err(r, c)) / scale);
        }
      // overflowed stages give NaN ratios, which std::max would drop
      if (!u_new.allFinite() || !err.allFinite()) err_norm = std::numeric_limits<double>::infinity();

      if (err_norm <= 1.0) {
        ++diag_.accepted;
        t = last ? t_end : t + hstep;
        u = u_new;
        h_cur = std::move(h_end);
        const double drift = unitarity_defect(u);
        diag_.max_unitarity_drift = std::max(diag_.max_unitarity_drift, drift);
        if (drift > reproject_at_) {
          u = polar_project<double>(u);
          ++diag_.reunitarizations;
        }
        const double factor =
            err_norm == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 5.0);
        // a step shortened to land on t_end says nothing about the next one
        if (!last || hstep >= step) step = hstep * factor;
      } else {
        ++diag_.rejected;
        step = hstep * std::clamp(0.9 * std::pow(err_norm, -0.2), 0.2, 1.0);
      }
    }
  }

  const StepDiagnostics& diagnostics() const { return diag_; }

 private:
  const HamiltonianFn& h_;
  const PropagateOptions& opts_;
  int dim_;
  double reproject_at_;
  StepDiagnostics diag_;
  Matrix stage_seven_input_;
};

UnitaryD stored(const Matrix& u) {
  // The integrator keeps drift below 1e-9, which the Unitary check accepts.
  return UnitaryD(u);
}

}  // namespace

PropagationResult propagate(const HamiltonianFn& hamiltonian, double t0, double t1,
                            const PropagateOptions& options) {
  if (!(t1 > t0)) throw std::invalid_argument("propagate: t1 must exceed t0");
  if (!(options.tol >= 1e-13 && options.tol <= 1e-4))
    throw std::invalid_argument("propagate: tol must lie in [1e-13, 1e-4]");
  if (!(options.max_step > 0)) throw std::invalid_argument("propagate: max_step must be positive");
  for (std::size_t i = 0; i < options.sample_times.size(); ++i) {
    const double s = options.sample_times[i];
    if (s < t0 || s > t1 || (i > 0 && s < options.sample_times[i - 1]))
      throw std::invalid_argument("propagate: sample times must be sorted within [t0, t1]");
  }

  Matrix h_cur = hamiltonian(t0);
  const int dim = static_cast<int>(h_cur.rows());
  Matrix u = Matrix::Identity(dim, dim);
  const double norm = h_cur.cwiseAbs().maxCoeff();
  double step = std::min(t1 - t0, norm > 0 ? 0.01 / norm : t1 - t0);
  step = std::min(step, options.max_step);

  Integrator integrator(hamiltonian, options, dim);
  PropagationResult result{UnitaryD::identity(dim), {}, {}};
  result.trajectory.reserve(options.sample_times.size());
  double t = t0;
  for (double target : options.sample_times) {
    integrator.advance(u, t, target, h_cur, step);
    result.trajectory.emplace_back(target, stored(u));
  }
  integrator.advance(u, t, t1, h_cur, step);
  result.final_unitary = stored(u);
  result.diagnostics = integrator.diagnostics();
  return result;
}

HamiltonianFn frame_hamiltonian(const ParameterLoop& loop, const DrivingConfig& config,
                                Frame frame) {
  if (frame == Frame::Rotating)
    return [&loop, config](double t) {
      return h_rotating(t, loop, config, RotatingTerms{true, true});
    };
  return [&loop, config](double t) { return h_floquet_total(t, loop, config); };
}

std::vector<std::pair<double, UnitaryD>> stroboscopic_trajectory(const ParameterLoop& loop,
                                                                 const DrivingConfig& config,
                                                                 Frame frame, double tol) {
  config.validate();
  const double half_periods = loop.duration * config.omega / std::numbers::pi;
  const double rounded = std::round(half_periods);
  if (std::abs(half_periods - rounded) > 1e-9 * std::max(1.0, half_periods))
    throw std::invalid_argument(
        "stroboscopic_trajectory: loop rate must be a sub-harmonic of the drive (T omega / pi = " +
        std::to_string(half_periods) + ")");
  const auto count = static_cast<std::size_t>(rounded) + 1;
  PropagateOptions opts;
  opts.tol = tol;
  opts.max_step = drive_step_limit(config);
  for (std::size_t k = 0; k < count; ++k)
    opts.sample_times.push_back(std::min(loop.duration, double(k) * std::numbers::pi / config.omega));
  auto result = propagate(frame_hamiltonian(loop, config, frame), 0.0, loop.duration, opts);
  return std::move(result.trajectory);
}

std::vector<BlochSample> bloch_trajectory(const PropagationResult& result, const Vector& initial) {
  const int dim = result.final_unitary.dim();
  if (initial.size() != dim) throw std::invalid_argument("bloch_trajectory: state dimension mismatch");
  const Spin spin = Spin::from_twice(dim - 1);
  const auto& ops = spin_ops(spin);
  const double scale = spin.twice() == 0 ? 0.0 : 1.0 / spin.value();
  const Vector psi0 = initial / initial.norm();
  std::vector<BlochSample> out;
  out.reserve(result.trajectory.size());
  for (const auto& [t, u] : result.trajectory) {
    const Vector psi = u.matrix() * psi0;
    Vec3 e;
    for (int a = 0; a < 3; ++a) e[a] = psi.dot(ops.component(a) * psi).real();
    out.push_back({t, e, scale * e});
  }
  return out;
}

UnitaryD holonomy_closed_form(LoopLabel label, double g, Spin spin) {
  const auto& ops = spin_ops(spin);
  const double pi = std::numbers::pi;
  switch (label) {
    case LoopLabel::L1:
    case LoopLabel::P2: return expm_generator<double>(ops.fy, 2 * pi * g);
    case LoopLabel::L2: return expm_generator<double>(ops.fx, -2 * pi * g);
    case LoopLabel::L3:
    case LoopLabel::P3: return expm_generator<double>(ops.fz, 2 * pi * g);
    case LoopLabel::L4: return expm_generator<double>(Matrix(ops.fx - ops.fy), -std::sqrt(2.0) * pi * g);
    case LoopLabel::P1: return expm_generator<double>(ops.fx, 2 * pi * g);
    case LoopLabel::L5:
    case LoopLabel::L6:
    case LoopLabel::Custom: break;
  }
  throw UnsupportedLoop("holonomy_closed_form: no closed form for loop '" + to_string(label) +
                        "'; use holonomy_path_ordered or holonomy_nonadiabatic");
}

UnitaryD holonomy_path_ordered(const ParameterLoop& loop, double g, Spin spin, int n_segments) {
  if (n_segments < 16) throw std::invalid_argument("holonomy_path_ordered: need >= 16 segments");
  const GaugeConnection conn{g, spin};
  const double dt = loop.duration / n_segments;
  Matrix u = Matrix::Identity(spin.dim(), spin.dim());
  Vec3 q_prev = q_of_t(loop, 0.0);
  for (int k = 0; k < n_segments; ++k) {
    const double t_next = (k + 1 == n_segments) ? loop.duration : (k + 1) * dt;
    const Vec3 q_next = q_of_t(loop, t_next);
    const Vec3 q_mid = q_of_t(loop, (k + 0.5) * dt);
    u = expm_generator<double>(conn.contract(q_mid, q_next - q_prev), 1.0).matrix() * u;
    q_prev = q_next;
  }
  return UnitaryD(polar_project<double>(u));
}

PropagationResult propagate_nonadiabatic(const ParameterLoop& loop, const DrivingConfig& config,
                                         double tol) {
  config.validate();
  PropagateOptions opts;
  opts.tol = tol;
  opts.max_step = drive_step_limit(config);
  return propagate(frame_hamiltonian(loop, config, Frame::Floquet), 0.0, loop.duration, opts);
}

UnitaryD holonomy_nonadiabatic(const ParameterLoop& loop, const DrivingConfig& config, double tol) {
  return propagate_nonadiabatic(loop, config, tol).final_unitary;
}

}  // namespace floqgate
