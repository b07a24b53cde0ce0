// Time-ordered evolution operators and holonomies.
#ifndef FLOQGATE_PROPAGATION_HPP
#define FLOQGATE_PROPAGATION_HPP

#include "floqgate/control_paths.hpp"
#include "floqgate/driving_config.hpp"
#include "floqgate/spin_algebra.hpp"

#include <cstddef>
#include <functional>
#include <limits>
#include <stdexcept>
#include <utility>
#include <vector>

namespace floqgate {

using HamiltonianFn = std::function<Matrix(double)>;

struct PropagateOptions {
  double tol = 1e-10;
  double max_step = std::numeric_limits<double>::infinity();
  /// Instants (within [t0, t1]) at which U(t) is recorded, in increasing order.
  std::vector<double> sample_times;
  std::size_t max_steps = 50'000'000;
};

struct StepDiagnostics {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t reunitarizations = 0;
  double max_unitarity_drift = 0.0;  // largest |U^dag U - I| seen before projection
};

struct PropagationResult {
  UnitaryD final_unitary;
  std::vector<std::pair<double, UnitaryD>> trajectory;
  StepDiagnostics diagnostics;
};

class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double t, StepDiagnostics diag)
      : std::runtime_error(what), time(t), diagnostics(diag) {}
  double time;
  StepDiagnostics diagnostics;
};

class UnsupportedLoop : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// dU/dt = -i H(t) U, U(t0) = I, by an adaptive Dormand-Prince 5(4) pair.
/// The state is re-projected onto the unitary group (polar decomposition)
/// whenever |U^dag U - I|_max exceeds min(10 tol, 1e-9).
PropagationResult propagate(const HamiltonianFn& hamiltonian, double t0, double t1,
                            const PropagateOptions& options = {});

/// Step clamp giving at least 50 accepted steps per drive period.
inline double drive_step_limit(const DrivingConfig& config) {
  return std::numbers::pi / (25.0 * config.omega);
}

enum class Frame { Rotating, Floquet };

/// U(t_k) at t_k = k pi / omega, where the micromotion is the identity.
/// Rotating frame includes the detuning and quadratic Zeeman terms.
std::vector<std::pair<double, UnitaryD>> stroboscopic_trajectory(const ParameterLoop& loop,
                                                                 const DrivingConfig& config,
                                                                 Frame frame, double tol = 1e-10);

/// Hamiltonian used for propagation in the given frame.
HamiltonianFn frame_hamiltonian(const ParameterLoop& loop, const DrivingConfig& config,
                                Frame frame);

struct BlochSample {
  double t;
  Vec3 expectation;  // (<Fx>, <Fy>, <Fz>)
  Vec3 bloch;        // expectation / F, the Bloch vector for F = 1/2
};

/// Spin expectation values of U(t) psi0 along the stored trajectory.
std::vector<BlochSample> bloch_trajectory(const PropagationResult& result, const Vector& initial);

/// Known holonomies of l1..l4 and p1..p3.
UnitaryD holonomy_closed_form(LoopLabel label, double g, Spin spin);

/// Ordered product of exp(-i dq_k . A(q_mid,k)) over n uniform time segments.
UnitaryD holonomy_path_ordered(const ParameterLoop& loop, double g, Spin spin, int n_segments);

/// Time-ordered evolution over one loop under h_floquet_total.
PropagationResult propagate_nonadiabatic(const ParameterLoop& loop, const DrivingConfig& config,
                                         double tol = 1e-10);
UnitaryD holonomy_nonadiabatic(const ParameterLoop& loop, const DrivingConfig& config,
                               double tol = 1e-10);

}  // namespace floqgate

#endif  // FLOQGATE_PROPAGATION_HPP
