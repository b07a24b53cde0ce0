// Spin-F matrix representations, SU(N) generator bases and the Hermitian
// matrix exponential used by every propagator in the library.
//
// Matrices use a max-size Eigen layout so that nothing up to kMaxDim touches
// the heap. Index 0 of every basis is m = +F, descending to m = -F.
#ifndef FLOQGATE_SPIN_ALGEBRA_HPP
#define FLOQGATE_SPIN_ALGEBRA_HPP

#include <Eigen/Dense>

#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace floqgate {

/// Largest supported manifold dimension (F = 5).
inline constexpr int kMaxDim = 11;

template <typename Scalar>
using CMatrix = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, Eigen::Dynamic,
                              Eigen::ColMajor, kMaxDim, kMaxDim>;
template <typename Scalar>
using CVector = Eigen::Matrix<std::complex<Scalar>, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;
template <typename Scalar>
using RVector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1, Eigen::ColMajor, kMaxDim, 1>;

using Matrix = CMatrix<double>;
using Vector = CVector<double>;
using Vec3 = Eigen::Vector3d;
using cplx = std::complex<double>;

/// Spin quantum number F, stored as the integer 2F.
class Spin {
 public:
  static Spin from_twice(int two_f) {
    if (two_f < 0) throw std::invalid_argument("spin: F must be non-negative");
    if (two_f + 1 > kMaxDim)
      throw std::invalid_argument("spin: 2F+1 = " + std::to_string(two_f + 1) +
                                  " exceeds the supported dimension " + std::to_string(kMaxDim));
    return Spin(two_f);
  }

  static Spin from_value(double f) {
    const double twice = 2.0 * f;
    const double rounded = std::round(twice);
    if (!std::isfinite(f) || std::abs(twice - rounded) > 1e-9)
      throw std::invalid_argument("spin: F must be a half-integer, got " + std::to_string(f));
    return from_twice(static_cast<int>(rounded));
  }

  int twice() const { return two_f_; }
  double value() const { return 0.5 * two_f_; }
  int dim() const { return two_f_ + 1; }

  /// Magnetic quantum number of basis index i (i = 0 is m = +F).
  double m_of_index(int i) const { return value() - i; }

  int index_of_m(double m) const {
    const double idx = value() - m;
    const double r = std::round(idx);
    if (std::abs(idx - r) > 1e-9 || r < 0 || r >= dim())
      throw std::invalid_argument("spin: m = " + std::to_string(m) + " is not a level of F = " +
                                  std::to_string(value()));
    return static_cast<int>(r);
  }

  friend bool operator==(Spin a, Spin b) { return a.two_f_ == b.two_f_; }

 private:
  explicit Spin(int two_f) : two_f_(two_f) {}
  int two_f_;
};

template <typename Scalar = double>
struct SpinOperators {
  Spin spin;
  CMatrix<Scalar> fx, fy, fz;

  int dim() const { return spin.dim(); }
  /// n . F for a real 3-vector n.
  template <typename V>
  CMatrix<Scalar> dot(const V& n) const {
    return Scalar(n[0]) * fx + Scalar(n[1]) * fy + Scalar(n[2]) * fz;
  }
  const CMatrix<Scalar>& component(int axis) const {
    return axis == 0 ? fx : (axis == 1 ? fy : fz);
  }
};

template <typename Scalar = double>
SpinOperators<Scalar> spin_matrices(Spin spin) {
  using C = std::complex<Scalar>;
  const int n = spin.dim();
  const Scalar f = Scalar(spin.value());
  CMatrix<Scalar> fz = CMatrix<Scalar>::Zero(n, n);
  CMatrix<Scalar> raise = CMatrix<Scalar>::Zero(n, n);
  for (int i = 0; i < n; ++i) {
    const Scalar m = f - Scalar(i);
    fz(i, i) = C(m);
    // <m+1| F+ |m> sits one row above the diagonal entry of m.
    if (i > 0) raise(i - 1, i) = C(std::sqrt(f * (f + 1) - m * (m + 1)));
  }
  const CMatrix<Scalar> lower = raise.adjoint();
  SpinOperators<Scalar> ops{spin, (raise + lower) * C(0.5), (raise - lower) * C(0, -0.5), fz};
  return ops;
}

template <typename Scalar = double>
SpinOperators<Scalar> spin_matrices(double f) {
  return spin_matrices<Scalar>(Spin::from_value(f));
}

/// (F+, F-) = (fx + i fy, fx - i fy).
template <typename Scalar>
std::pair<CMatrix<Scalar>, CMatrix<Scalar>> ladder_operators(const SpinOperators<Scalar>& ops) {
  const std::complex<Scalar> i(0, 1);
  return {ops.fx + i * ops.fy, ops.fx - i * ops.fy};
}

/// Hermitian traceless basis of su(N) normalized to tr(l_a l_b) = 2 delta_ab.
template <typename Scalar = double>
struct GeneratorBasis {
  int dim = 0;
  std::vector<CMatrix<Scalar>> generators;

  std::size_t size() const { return generators.size(); }

  template <typename Coeffs>
  CMatrix<Scalar> combine(const Coeffs& c) const {
    CMatrix<Scalar> h = CMatrix<Scalar>::Zero(dim, dim);
    for (std::size_t a = 0; a < generators.size(); ++a) h += Scalar(c[a]) * generators[a];
    return h;
  }

  /// Coefficients tr(H l_a)/2; exact for traceless Hermitian H.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> decompose(const CMatrix<Scalar>& h) const {
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> c(generators.size());
    for (std::size_t a = 0; a < generators.size(); ++a)
      c[a] = (h * generators[a]).trace().real() / Scalar(2);
    return c;
  }
};

/// Generalized Gell-Mann matrices. Ordered so that N = 2 gives the Pauli
/// matrices and N = 3 the standard lambda_1 ... lambda_8.
template <typename Scalar = double>
GeneratorBasis<Scalar> su_generators(int n) {
  using C = std::complex<Scalar>;
  if (n < 2) throw std::invalid_argument("su_generators: N must be >= 2");
  if (n > kMaxDim) throw std::invalid_argument("su_generators: N exceeds the supported dimension");
  GeneratorBasis<Scalar> basis;
  basis.dim = n;
  basis.generators.reserve(static_cast<std::size_t>(n * n - 1));
  for (int k = 1; k < n; ++k) {
    for (int j = 0; j < k; ++j) {
      CMatrix<Scalar> sym = CMatrix<Scalar>::Zero(n, n);
      sym(j, k) = sym(k, j) = C(1);
      basis.generators.push_back(sym);
      CMatrix<Scalar> anti = CMatrix<Scalar>::Zero(n, n);
      anti(j, k) = C(0, -1);
      anti(k, j) = C(0, 1);
      basis.generators.push_back(anti);
    }
    CMatrix<Scalar> diag = CMatrix<Scalar>::Zero(n, n);
    const Scalar norm = std::sqrt(Scalar(2) / Scalar(k * (k + 1)));
    for (int i = 0; i < k; ++i) diag(i, i) = C(norm);
    diag(k, k) = C(-Scalar(k) * norm);
    basis.generators.push_back(diag);
  }
  return basis;
}

template <typename Derived>
double unitarity_defect(const Eigen::MatrixBase<Derived>& u) {
  const auto n = u.rows();
  return (u.adjoint() * u - Derived::Identity(n, n)).cwiseAbs().maxCoeff();
}

template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& h) {
  return (h - h.adjoint()).cwiseAbs().maxCoeff();
}

/// Square complex matrix with U^dagger U = I checked on construction.
template <typename Scalar = double>
class Unitary {
 public:
  static constexpr double kTolerance = 1e-9;

  explicit Unitary(CMatrix<Scalar> m) : m_(std::move(m)) {
    if (m_.rows() != m_.cols()) throw std::invalid_argument("Unitary: matrix is not square");
    const double defect = unitarity_defect(m_);
    if (!(defect <= kTolerance))
      throw std::invalid_argument("Unitary: U^dagger U deviates from identity by " +
                                  std::to_string(defect));
  }

  static Unitary identity(int n) { return Unitary(CMatrix<Scalar>::Identity(n, n)); }

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix<Scalar>& matrix() const { return m_; }
  Unitary adjoint() const { return Unitary(m_.adjoint(), Trusted{}); }
  std::complex<Scalar> operator()(int r, int c) const { return m_(r, c); }

  friend Unitary operator*(const Unitary& a, const Unitary& b) {
    if (a.dim() != b.dim()) throw std::invalid_argument("Unitary: dimension mismatch in product");
    return Unitary(a.m_ * b.m_);
  }

 private:
  struct Trusted {};
  Unitary(CMatrix<Scalar> m, Trusted) : m_(std::move(m)) {}
  CMatrix<Scalar> m_;
};

using UnitaryD = Unitary<double>;

/// exp(-i s H) for Hermitian H via the Hermitian eigensolver.
template <typename Scalar = double>
Unitary<Scalar> expm_generator(const CMatrix<Scalar>& h, Scalar s) {
  using C = std::complex<Scalar>;
  if (h.rows() != h.cols()) throw std::invalid_argument("expm_generator: matrix is not square");
  const double scale = std::max(1.0, double(h.cwiseAbs().maxCoeff()));
  if (hermiticity_defect(h) > 1e-10 * scale)
    throw std::invalid_argument("expm_generator: generator is not Hermitian");
  const Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> eig(h);
  const auto& vals = eig.eigenvalues();
  CVector<Scalar> phases(vals.size());
  for (Eigen::Index k = 0; k < vals.size(); ++k) phases[k] = std::exp(C(0, -s * vals[k]));
  const CMatrix<Scalar>& v = eig.eigenvectors();
  return Unitary<Scalar>(v * phases.asDiagonal() * v.adjoint());
}

/// Closest unitary in Frobenius norm: U (U^dagger U)^(-1/2).
template <typename Scalar = double>
CMatrix<Scalar> polar_project(const CMatrix<Scalar>& u) {
  const Eigen::SelfAdjointEigenSolver<CMatrix<Scalar>> eig(u.adjoint() * u);
  RVector<Scalar> inv_sqrt = eig.eigenvalues().cwiseSqrt().cwiseInverse();
  const CMatrix<Scalar>& v = eig.eigenvectors();
  return u * v * inv_sqrt.template cast<std::complex<Scalar>>().asDiagonal() * v.adjoint();
}

template <typename Derived>
auto commutator(const Eigen::MatrixBase<Derived>& a, const Eigen::MatrixBase<Derived>& b) {
  return (a * b - b * a).eval();
}

}  // namespace floqgate

#endif  // FLOQGATE_SPIN_ALGEBRA_HPP
