#pragma once

// Dense complex Hermitian linear algebra: validation, eigendecomposition and
// spectral matrix functions. Everything else in the library builds on the
// HermitianMatrix / HpdMatrix value types defined here.

#include <Eigen/Dense>

#include <complex>
#include <memory>
#include <span>

#include "cesgeom/error.hpp"

namespace cesgeom {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RMatrix = Eigen::MatrixXd;
using RVector = Eigen::VectorXd;

/// Relative Frobenius asymmetry above which an input is rejected.
inline constexpr double kSymmetryTolerance = 1e-8;
/// Default certificate for positive definiteness: lambda_min > tol * lambda_max.
inline constexpr double kDefaultPdTolerance = 1e-12;

/// (M + M^H) / 2 for a square matrix, without any tolerance check.
CMatrix hermitian_part(const CMatrix& m);

/// A p x p Hermitian matrix. Construction from an arbitrary square matrix
/// checks the asymmetry against kSymmetryTolerance and symmetrizes.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const CMatrix& m);
  /// Real symmetric input embedded with zero imaginary part.
  explicit HermitianMatrix(const RMatrix& m);

  /// Symmetrizes without the tolerance check. For results of algebra that is
  /// Hermitian in exact arithmetic (e.g. A H A^H).
  static HermitianMatrix symmetrized(const CMatrix& m);
  static HermitianMatrix zero(int p);
  static HermitianMatrix identity(int p);
  static HermitianMatrix diagonal(std::span<const double> values);

  int dim() const { return static_cast<int>(m_.rows()); }
  const CMatrix& matrix() const { return m_; }
  Complex operator()(int i, int j) const { return m_(i, j); }

  double trace() const { return m_.diagonal().real().sum(); }
  double frobenius_norm() const { return m_.norm(); }

  HermitianMatrix operator-() const;
  HermitianMatrix& operator+=(const HermitianMatrix& other);
  HermitianMatrix& operator-=(const HermitianMatrix& other);
  HermitianMatrix& operator*=(double s);

  friend HermitianMatrix operator+(HermitianMatrix a, const HermitianMatrix& b) { return a += b; }
  friend HermitianMatrix operator-(HermitianMatrix a, const HermitianMatrix& b) { return a -= b; }
  friend HermitianMatrix operator*(HermitianMatrix a, double s) { return a *= s; }
  friend HermitianMatrix operator*(double s, HermitianMatrix a) { return a *= s; }
  friend HermitianMatrix operator/(HermitianMatrix a, double s) { return a *= 1.0 / s; }

 private:
  struct Trusted {};
  HermitianMatrix(CMatrix m, Trusted) : m_(std::move(m)) {}

  CMatrix m_;
};

/// Real eigenvalues in non-decreasing order and a unitary eigenvector matrix.
struct EigDecomposition {
  RVector eigenvalues;
  CMatrix eigenvectors;

  /// U diag(f(lambda)) U^H, symmetrized.
  template <typename F>
  HermitianMatrix apply(F&& f) const {
    RVector mapped = eigenvalues.unaryExpr(std::forward<F>(f));
    return HermitianMatrix::symmetrized(eigenvectors * mapped.asDiagonal() *
                                        eigenvectors.adjoint());
  }
};

EigDecomposition eig_hermitian(const HermitianMatrix& m);

/// Hermitian positive definite matrix. Immutable; carries its eigendecomposition
/// together with the square root, inverse square root and inverse, which every
/// geometric operation needs.
class HpdMatrix {
 public:
  const HermitianMatrix& hermitian() const { return state_->base; }
  const CMatrix& matrix() const { return state_->base.matrix(); }
  Complex operator()(Eigen::Index i, Eigen::Index j) const { return state_->base.matrix()(i, j); }
  int dim() const { return state_->base.dim(); }

  const EigDecomposition& eig() const { return state_->eig; }
  const CMatrix& sqrt() const { return state_->sqrt; }
  const CMatrix& inv_sqrt() const { return state_->inv_sqrt; }
  const CMatrix& inverse() const { return state_->inverse; }
  double log_det() const;

  static HpdMatrix identity(int p);

  friend HpdMatrix validate_hpd(const HermitianMatrix& m, double rel_tol);

 private:
  struct State {
    HermitianMatrix base;
    EigDecomposition eig;
    CMatrix sqrt;
    CMatrix inv_sqrt;
    CMatrix inverse;
  };
  explicit HpdMatrix(std::shared_ptr<const State> state) : state_(std::move(state)) {}

  std::shared_ptr<const State> state_;
};

/// Certifies lambda_min > rel_tol * lambda_max. Throws NotPositiveDefinite.
HpdMatrix validate_hpd(const HermitianMatrix& m, double rel_tol = kDefaultPdTolerance);
/// Checks symmetry first (NotHermitian), then positive definiteness.
HpdMatrix validate_hpd(const CMatrix& m, double rel_tol = kDefaultPdTolerance);

/// Scalar functions accepted by spectral_map.
class SpectralFn {
 public:
  enum class Kind { Exp, Log, Sqrt, InvSqrt, Pow, Inv };

  static SpectralFn exp() { return SpectralFn(Kind::Exp); }
  static SpectralFn log() { return SpectralFn(Kind::Log); }
  static SpectralFn sqrt() { return SpectralFn(Kind::Sqrt); }
  static SpectralFn inv_sqrt() { return SpectralFn(Kind::InvSqrt); }
  static SpectralFn pow(double t) { return SpectralFn(Kind::Pow, t); }
  static SpectralFn inv() { return SpectralFn(Kind::Inv); }

  Kind kind() const { return kind_; }
  double exponent() const { return exponent_; }
  /// Every map except exp needs a positive spectrum.
  bool needs_positive_spectrum() const { return kind_ != Kind::Exp; }
  double operator()(double lambda) const;

 private:
  explicit SpectralFn(Kind kind, double exponent = 0.0) : kind_(kind), exponent_(exponent) {}

  Kind kind_;
  double exponent_;
};

/// U f(Lambda) U^H. Log-family maps throw DomainError unless the input passes
/// validate_hpd.
HermitianMatrix spectral_map(const HermitianMatrix& m, SpectralFn f);
HermitianMatrix spectral_map(const HpdMatrix& m, SpectralFn f);

/// A H A^H, symmetrized.
HermitianMatrix congruence(const CMatrix& a, const HermitianMatrix& h);

/// Re tr(A B) for Hermitian A, B.
double trace_product(const HermitianMatrix& a, const HermitianMatrix& b);

/// ||A - B||_F / ||B||_F (or the absolute norm when B is zero).
double relative_frobenius_error(const CMatrix& a, const CMatrix& b);

}  // namespace cesgeom
