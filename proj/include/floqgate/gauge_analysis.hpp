// Gate fidelity, Wilson loops, Wigner rotations and the trace commutator.
#ifndef FLOQGATE_GAUGE_ANALYSIS_HPP
#define FLOQGATE_GAUGE_ANALYSIS_HPP

#include "floqgate/control_paths.hpp"
#include "floqgate/driving_config.hpp"
#include "floqgate/spin_algebra.hpp"

#include <array>
#include <utility>
#include <vector>

namespace floqgate {

/// |tr(target^dag measured)| / N, clamped to [0, 1].
double fidelity(const UnitaryD& measured, const UnitaryD& target);

inline cplx wilson_loop(const UnitaryD& holonomy) { return holonomy.matrix().trace(); }

/// <F,m| exp(-i beta Fy) |F,m'>
double wigner_d(Spin spin, double m, double m_prime, double beta);

/// Full d-matrix in the library's basis order.
Eigen::MatrixXd wigner_d_matrix(Spin spin, double beta);

/// Z-Y-Z Euler rotation: <m|R|m'> = e^{-i alpha m} d_{m m'}(beta) e^{-i gamma m'}.
UnitaryD rotation_euler(Spin spin, double alpha, double beta, double gamma);

/// tr(G3 [G2, G1]) for the great-circle paths p1, p2, p3, summed over d-matrix
/// elements at beta = 2 pi g. Real by construction.
double trace_commutator_analytic(Spin spin, double g);

struct WilsonReport {
  std::array<LoopLabel, 3> ordering{};  // (i, j, k)
  cplx w_ijk;  // tr(G_k G_j G_i): loop i traversed first
  cplx w_jik;  // tr(G_k G_i G_j)
  cplx difference;
  Vec3 delta = Vec3::Zero();
  Spin spin = Spin::from_twice(2);
};

/// Composes non-adiabatic holonomies of three catalog loops in both orderings.
WilsonReport trace_commutator_numeric(const DrivingConfig& config,
                                      const std::array<LoopLabel, 3>& triple = {LoopLabel::P1,
                                                                                LoopLabel::P2,
                                                                                LoopLabel::P3},
                                      double tol = 1e-10);

struct FidelityPoint {
  double delta_z;
  double fidelity;
};

/// Fidelity of the non-adiabatic holonomy at each Delta_z against the
/// Delta = 0 holonomy of the same loop. Grid points are evaluated in parallel.
std::vector<FidelityPoint> fidelity_vs_detuning(const ParameterLoop& loop,
                                                const DrivingConfig& config,
                                                const std::vector<double>& delta_z_grid,
                                                double tol = 1e-10);

/// n-th detuning at which a loop with commuting generators (l3) returns to
/// fidelity one: 2 pi n / ((1 - g) T).
double revival_detuning(double g, double loop_duration, int n = 1);

struct Su2Fit {
  Vec3 axis = Vec3::UnitZ();
  double angle = 0.0;
  cplx phase{1.0, 0.0};
  double residual = 0.0;  // |U - phase exp(-i angle axis.F)|_max
};

/// Nearest spin-F image of an SU(2) rotation, read off from the adjoint
/// action of U on (Fx, Fy, Fz).
Su2Fit su2_projection(const UnitaryD& u);

}  // namespace floqgate

#endif  // FLOQGATE_GAUGE_ANALYSIS_HPP
