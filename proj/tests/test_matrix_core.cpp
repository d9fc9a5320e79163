#include <gtest/gtest.h>

#include <array>

#include "cesgeom/cli/scenarios.hpp"
#include "cesgeom/matrix_core.hpp"
#include "support/test_support.hpp"

using namespace cesgeom;
using namespace cesgeom::testing;

namespace {

void expect_code(ErrorCode code, const std::function<void()>& f) {
  try {
    f();
    ADD_FAILURE() << "expected " << to_string(code);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), code) << e.what();
  }
}

HermitianMatrix diag(std::initializer_list<double> v) {
  std::vector<double> values(v);
  return HermitianMatrix::diagonal(values);
}

}  // namespace

TEST(ValidateHpd, AcceptsIdentity) {
  const HpdMatrix m = validate_hpd(HermitianMatrix::identity(3), 1e-12);
  EXPECT_EQ(m.dim(), 3);
  EXPECT_NEAR(m.log_det(), 0.0, 1e-15);
}

TEST(ValidateHpd, RejectsNegativeEigenvalue) {
  expect_code(ErrorCode::NotPositiveDefinite, [] { validate_hpd(diag({1.0, -1.0}), 1e-12); });
  expect_code(ErrorCode::NotPositiveDefinite, [] { validate_hpd(diag({1.0, -1.0}), 0.0); });
}

TEST(ValidateHpd, RejectsAsymmetry) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = 0.5;
  expect_code(ErrorCode::NotHermitian, [&] { validate_hpd(m); });
}

TEST(ValidateHpd, SymmetrizesSmallAsymmetry) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(0, 1) = 1e-12;
  const HpdMatrix h = validate_hpd(m);
  EXPECT_EQ(h.matrix(), h.matrix().adjoint());
}

TEST(ValidateHpd, RejectsNonFiniteAndNonSquare) {
  CMatrix m = CMatrix::Identity(2, 2);
  m(1, 1) = std::nan("");
  expect_code(ErrorCode::DomainError, [&] { HermitianMatrix{m}; });
  expect_code(ErrorCode::DimensionMismatch, [] { HermitianMatrix{CMatrix(2, 3)}; });
}

TEST(ValidateHpd, ToeplitzScatterAgreesWithJacobiOracle) {
  const Complex rho = 0.9 * Complex(1.0, 1.0) / std::sqrt(2.0);
  const HpdMatrix s = cli::build_toeplitz_scatter(10, rho);
  const RVector lib = s.eig().eigenvalues;
  const RVector oracle = jacobi_eigenvalues(s.matrix());
  ASSERT_GT(oracle(0), 0.0);
  for (int i = 0; i < 10; ++i) EXPECT_NEAR(lib(i), oracle(i), 1e-11 * oracle(9));
}

TEST(EigHermitian, DiagonalInput) {
  const EigDecomposition e = eig_hermitian(diag({2.0, 5.0}));
  EXPECT_NEAR(e.eigenvalues(0), 2.0, 1e-15);
  EXPECT_NEAR(e.eigenvalues(1), 5.0, 1e-15);
  EXPECT_NEAR(max_abs(e.eigenvectors.cwiseAbs().cast<Complex>() - CMatrix::Identity(2, 2)), 0.0,
              1e-15);
}

TEST(EigHermitian, IdentityEigenvaluesAreOne) {
  const EigDecomposition e = eig_hermitian(HermitianMatrix::identity(5));
  for (int i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(e.eigenvalues(i), 1.0);
}

TEST(EigHermitian, ReconstructionAndUnitarity) {
  TestRng rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 9;
    const HermitianMatrix h = random_hermitian(p, rng);
    const EigDecomposition e = eig_hermitian(h);
    const CMatrix& u = e.eigenvectors;
    const CMatrix rec = u * e.eigenvalues.cast<Complex>().asDiagonal() * u.adjoint();
    EXPECT_LT(relative_frobenius_error(rec, h.matrix()), 1e-10);
    EXPECT_LT((u.adjoint() * u - CMatrix::Identity(p, p)).norm(), 1e-10);
    for (int i = 1; i < p; ++i) EXPECT_LE(e.eigenvalues(i - 1), e.eigenvalues(i));
    const RVector oracle = jacobi_eigenvalues(h.matrix());
    EXPECT_LT((e.eigenvalues - oracle).cwiseAbs().maxCoeff(), 1e-10);
  }
}

TEST(SpectralMap, Examples) {
  EXPECT_LT(max_abs(spectral_map(HermitianMatrix::zero(3), SpectralFn::exp()).matrix() -
                    CMatrix::Identity(3, 3)),
            1e-15);
  EXPECT_LT(max_abs(spectral_map(HermitianMatrix::identity(4), SpectralFn::log()).matrix()), 1e-15);
  EXPECT_LT(max_abs(spectral_map(diag({4.0, 9.0}), SpectralFn::sqrt()).matrix() -
                    diag({2.0, 3.0}).matrix()),
            1e-14);
  const HermitianMatrix half = spectral_map(diag({4.0}), SpectralFn::pow(0.5));
  EXPECT_NEAR(half(0, 0).real(), std::exp(0.5 * std::log(4.0)), 1e-15);
  EXPECT_NEAR(half(0, 0).real(), 2.0, 1e-14);
}

TEST(SpectralMap, LogFamilyRejectsNonPositiveSpectrum) {
  for (SpectralFn f : {SpectralFn::log(), SpectralFn::sqrt(), SpectralFn::inv_sqrt(),
                       SpectralFn::pow(0.3), SpectralFn::inv()}) {
    expect_code(ErrorCode::DomainError, [&] { spectral_map(diag({1.0, -2.0}), f); });
  }
  EXPECT_NO_THROW(spectral_map(diag({1.0, -2.0}), SpectralFn::exp()));
}

TEST(SpectralMap, OutputsAreExactlyHermitian) {
  TestRng rng(5);
  const HpdMatrix a = random_hpd(7, rng);
  for (SpectralFn f : {SpectralFn::exp(), SpectralFn::log(), SpectralFn::sqrt(),
                       SpectralFn::inv_sqrt(), SpectralFn::pow(0.7), SpectralFn::inv()}) {
    const CMatrix m = spectral_map(a.hermitian(), f).matrix();
    EXPECT_EQ(m, m.adjoint());
  }
}

TEST(SpectralMapProperty, PowersCompose) {
  TestRng rng(21);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + static_cast<int>(rng.uniform() * 20);
    const HpdMatrix a = random_hpd(p, rng, 100.0);
    const double t = rng.uniform();
    const CMatrix prod =
        spectral_map(a, SpectralFn::pow(t)).matrix() * spectral_map(a, SpectralFn::pow(1 - t)).matrix();
    EXPECT_LT(relative_frobenius_error(prod, a.matrix()), 1e-9);
  }
}

TEST(SpectralMapProperty, ExpLogInverse) {
  TestRng rng(22);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 1 + trial % 12;
    const HpdMatrix a = random_hpd(p, rng, 50.0);
    const HermitianMatrix l = spectral_map(a, SpectralFn::log());
    EXPECT_LT(relative_frobenius_error(spectral_map(l, SpectralFn::exp()).matrix(), a.matrix()), 1e-9);
    // Independent series oracles.
    EXPECT_LT(relative_frobenius_error(series_logm(a.matrix()), l.matrix()), 1e-9);

    HermitianMatrix h = random_hermitian(p, rng);
    const double radius = jacobi_eigenvalues(h.matrix()).cwiseAbs().maxCoeff();
    h *= 4.0 / radius;
    const HermitianMatrix e = spectral_map(h, SpectralFn::exp());
    EXPECT_LT(relative_frobenius_error(taylor_expm(h.matrix()), e.matrix()), 1e-9);
    EXPECT_LT(relative_frobenius_error(spectral_map(e, SpectralFn::log()).matrix(), h.matrix()), 1e-9);
  }
}

TEST(SpectralMapProperty, SqrtSquares) {
  TestRng rng(23);
  for (int trial = 0; trial < 30; ++trial) {
    const HpdMatrix a = random_hpd(1 + trial % 15, rng, 1e3);
    const CMatrix r = a.sqrt();
    EXPECT_LT(relative_frobenius_error(r * r, a.matrix()), 1e-10);
    EXPECT_LT(relative_frobenius_error(a.inv_sqrt() * a.inv_sqrt() * a.matrix(),
                                       CMatrix::Identity(a.dim(), a.dim())),
              1e-10);
  }
}

TEST(HermitianMatrix, RealEmbedding) {
  RMatrix r(2, 2);
  r << 2, 1, 1, 3;
  const HermitianMatrix h(r);
  EXPECT_EQ(h(0, 1), Complex(1.0, 0.0));
  EXPECT_DOUBLE_EQ(h.trace(), 5.0);
}
