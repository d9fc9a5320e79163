#include "cesgeom/matrix_core.hpp"

#include <cmath>
#include <string>

namespace cesgeom {

namespace {

void require_square_finite(const CMatrix& m) {
  if (m.rows() != m.cols()) {
    throw Error(ErrorCode::DimensionMismatch,
                "matrix is not square (" + std::to_string(m.rows()) + "x" +
                    std::to_string(m.cols()) + ")");
  }
  if (!m.allFinite()) {
    throw Error(ErrorCode::DomainError, "matrix has non-finite entries");
  }
}

}  // namespace

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

HermitianMatrix::HermitianMatrix(const CMatrix& m) {
  require_square_finite(m);
  const double norm = m.norm();
  const double asym = (m - m.adjoint()).norm();
  if (norm > 0.0 && asym / norm > kSymmetryTolerance) {
    throw Error(ErrorCode::NotHermitian,
                "relative asymmetry " + std::to_string(asym / norm));
  }
  m_ = hermitian_part(m);
}

HermitianMatrix::HermitianMatrix(const RMatrix& m)
    : HermitianMatrix(CMatrix(m.cast<Complex>())) {}

HermitianMatrix HermitianMatrix::symmetrized(const CMatrix& m) {
  return HermitianMatrix(hermitian_part(m), Trusted{});
}

HermitianMatrix HermitianMatrix::zero(int p) {
  return HermitianMatrix(CMatrix::Zero(p, p), Trusted{});
}

HermitianMatrix HermitianMatrix::identity(int p) {
  return HermitianMatrix(CMatrix::Identity(p, p), Trusted{});
}

HermitianMatrix HermitianMatrix::diagonal(std::span<const double> values) {
  const auto p = static_cast<Eigen::Index>(values.size());
  CMatrix m = CMatrix::Zero(p, p);
  for (Eigen::Index i = 0; i < p; ++i) {
    m(i, i) = values[static_cast<std::size_t>(i)];
  }
  require_square_finite(m);
  return HermitianMatrix(std::move(m), Trusted{});
}

HermitianMatrix HermitianMatrix::operator-() const { return HermitianMatrix(-m_, Trusted{}); }

HermitianMatrix& HermitianMatrix::operator+=(const HermitianMatrix& other) {
  require_same_dim(dim(), other.dim(), "Hermitian sum");
  m_ += other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator-=(const HermitianMatrix& other) {
  require_same_dim(dim(), other.dim(), "Hermitian difference");
  m_ -= other.m_;
  return *this;
}

HermitianMatrix& HermitianMatrix::operator*=(double s) {
  m_ *= s;
  return *this;
}

EigDecomposition eig_hermitian(const HermitianMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(m.matrix());
  if (solver.info() != Eigen::Success) {
    throw Error(ErrorCode::ConvergenceFailure, "Hermitian eigensolver did not converge");
  }
  // Eigen returns eigenvalues in increasing order.
  return EigDecomposition{solver.eigenvalues(), solver.eigenvectors()};
}

double HpdMatrix::log_det() const { return eig().eigenvalues.array().log().sum(); }

HpdMatrix HpdMatrix::identity(int p) { return validate_hpd(HermitianMatrix::identity(p)); }

HpdMatrix validate_hpd(const HermitianMatrix& m, double rel_tol) {
  if (m.dim() == 0) {
    throw Error(ErrorCode::NotPositiveDefinite, "empty matrix");
  }
  EigDecomposition eig = eig_hermitian(m);
  const double lmin = eig.eigenvalues(0);
  const double lmax = eig.eigenvalues(eig.eigenvalues.size() - 1);
  if (!(lmax > 0.0) || !(lmin > rel_tol * lmax)) {
    throw Error(ErrorCode::NotPositiveDefinite,
                "eigenvalue range [" + std::to_string(lmin) + ", " + std::to_string(lmax) +
                    "] fails lambda_min > " + std::to_string(rel_tol) + " * lambda_max");
  }
  const CMatrix& u = eig.eigenvectors;
  const RVector root = eig.eigenvalues.array().sqrt();
  CMatrix sqrt = hermitian_part(u * root.asDiagonal() * u.adjoint());
  CMatrix inv_sqrt = hermitian_part(u * root.cwiseInverse().asDiagonal() * u.adjoint());
  CMatrix inverse = hermitian_part(u * eig.eigenvalues.cwiseInverse().asDiagonal() * u.adjoint());
  auto state = std::make_shared<const HpdMatrix::State>(HpdMatrix::State{
      m, std::move(eig), std::move(sqrt), std::move(inv_sqrt), std::move(inverse)});
  return HpdMatrix(std::move(state));
}

HpdMatrix validate_hpd(const CMatrix& m, double rel_tol) {
  return validate_hpd(HermitianMatrix(m), rel_tol);
}

double SpectralFn::operator()(double lambda) const {
  switch (kind_) {
    case Kind::Exp: return std::exp(lambda);
    case Kind::Log: return std::log(lambda);
    case Kind::Sqrt: return std::sqrt(lambda);
    case Kind::InvSqrt: return 1.0 / std::sqrt(lambda);
    case Kind::Pow: return std::exp(exponent_ * std::log(lambda));
    case Kind::Inv: return 1.0 / lambda;
  }
  return 0.0;
}

HermitianMatrix spectral_map(const HermitianMatrix& m, SpectralFn f) {
  if (f.needs_positive_spectrum()) {
    try {
      return spectral_map(validate_hpd(m), f);
    } catch (const Error& e) {
      if (e.code() == ErrorCode::NotPositiveDefinite) {
        throw Error(ErrorCode::DomainError, std::string("spectral map needs HPD input: ") + e.what());
      }
      throw;
    }
  }
  return eig_hermitian(m).apply(f);
}

HermitianMatrix spectral_map(const HpdMatrix& m, SpectralFn f) { return m.eig().apply(f); }

HermitianMatrix congruence(const CMatrix& a, const HermitianMatrix& h) {
  return HermitianMatrix::symmetrized(a * h.matrix() * a.adjoint());
}

double trace_product(const HermitianMatrix& a, const HermitianMatrix& b) {
  require_same_dim(a.dim(), b.dim(), "trace product");
  // Re tr(AB) = sum_ij Re(A_ij * conj(B_ij)) for Hermitian B.
  return (a.matrix().array() * b.matrix().array().conjugate()).real().sum();
}

double relative_frobenius_error(const CMatrix& a, const CMatrix& b) {
  const double denom = b.norm();
  const double diff = (a - b).norm();
  return denom > 0.0 ? diff / denom : diff;
}

}  // namespace cesgeom
