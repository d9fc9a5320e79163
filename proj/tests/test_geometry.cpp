#include <gtest/gtest.h>

#include "cesgeom/ces_models.hpp"
#include "cesgeom/geometry.hpp"
#include "support/test_support.hpp"

using namespace cesgeom;
using namespace cesgeom::testing;

namespace {

HermitianMatrix diag(std::vector<double> v) { return HermitianMatrix::diagonal(v); }
HpdMatrix hpd_diag(std::vector<double> v) { return validate_hpd(diag(std::move(v))); }

HpdMatrix congruent(const CMatrix& u, const HpdMatrix& s) {
  return validate_hpd(congruence(u, s.hermitian()));
}

}  // namespace

TEST(MetricParams, Validity) {
  EXPECT_TRUE((MetricParams{1.0, 0.0}.is_valid_for(3)));
  EXPECT_TRUE((MetricParams{1.0, -0.3}.is_valid_for(3)));
  EXPECT_FALSE((MetricParams{1.0, -0.34}.is_valid_for(3)));
  EXPECT_FALSE((MetricParams{0.0, 0.0}.is_valid_for(3)));
  TestRng rng(1);
  const HpdMatrix s = random_hpd(3, rng);
  try {
    metric_inner(s, s.hermitian(), s.hermitian(), {1.0, -1.0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidMetricParams);
  }
}

TEST(MetricInner, Examples) {
  const HpdMatrix i2 = HpdMatrix::identity(2);
  EXPECT_DOUBLE_EQ(metric_inner(i2, i2.hermitian(), i2.hermitian()), 2.0);
  for (int p : {1, 3, 7}) {
    const HpdMatrix ip = HpdMatrix::identity(p);
    EXPECT_NEAR(metric_inner(ip, ip.hermitian(), ip.hermitian(), {1.0, 1.0}), p + p * p, 1e-12);
  }
}

TEST(MetricInner, DimensionMismatch) {
  try {
    metric_inner(HpdMatrix::identity(2), HermitianMatrix::identity(3), HermitianMatrix::identity(2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(MetricInner, AgreesWithFisherMonteCarlo) {
  TestRng trng(2);
  const HpdMatrix s = random_hpd(4, trng);
  const HermitianMatrix xi = random_hermitian(4, trng);
  const HermitianMatrix eta = random_hermitian(4, trng);
  const CesModel t5 = CesModel::student_t(4, 5.0);
  SeededRng rng(2024, 1);
  const McEstimate mc = fim_inner_mc(s, xi, eta, t5, 1'000'000, rng);
  const double exact = metric_inner(s, xi, eta, coefficients(t5).metric());
  EXPECT_LT(std::abs(mc.estimate - exact), 3.0 * mc.std_error)
      << mc.estimate << " vs " << exact << " se " << mc.std_error;
}

TEST(MetricProperty, PositiveDefinite) {
  TestRng rng(3);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 1 + trial % 6;
    const HpdMatrix s = random_hpd(p, rng, 100.0);
    const double alpha = rng.uniform(0.1, 3.0);
    const double beta = -alpha / p + rng.uniform(1e-3, 3.0);
    const HermitianMatrix xi = random_hermitian(p, rng);
    EXPECT_GT(metric_inner(s, xi, xi, {alpha, beta}), 0.0);
  }
  // Near the admissible edge: the direction Sigma itself has the smallest ratio.
  const HpdMatrix s = HpdMatrix::identity(4);
  EXPECT_GT(metric_inner(s, s.hermitian(), s.hermitian(), {1.0, -0.25 + 1e-9}), 0.0);
}

TEST(MetricProperty, BilinearAndSymmetric) {
  TestRng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 2 + trial % 5;
    const HpdMatrix s = random_hpd(p, rng);
    const MetricParams mp{rng.uniform(0.5, 2.0), rng.uniform(-0.1, 1.0)};
    const HermitianMatrix a = random_hermitian(p, rng);
    const HermitianMatrix b = random_hermitian(p, rng);
    const HermitianMatrix c = random_hermitian(p, rng);
    const double x = rng.normal();
    const double y = rng.normal();
    const double lhs = metric_inner(s, a * x + b * y, c, mp);
    const double rhs = x * metric_inner(s, a, c, mp) + y * metric_inner(s, b, c, mp);
    EXPECT_NEAR(lhs, rhs, 1e-10 * (1.0 + std::abs(rhs)));
    EXPECT_NEAR(metric_inner(s, a, c, mp), metric_inner(s, c, a, mp), 1e-12 * (1.0 + std::abs(rhs)));
  }
}

TEST(MetricProperty, CongruenceInvariance) {
  TestRng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 2 + trial % 5;
    const HpdMatrix s = random_hpd(p, rng);
    const CMatrix u = random_invertible(p, rng);
    const HermitianMatrix a = random_hermitian(p, rng);
    const HermitianMatrix b = random_hermitian(p, rng);
    const MetricParams mp{1.3, 0.4};
    const double before = metric_inner(s, a, b, mp);
    const double after = metric_inner(congruent(u, s), congruence(u, a), congruence(u, b), mp);
    EXPECT_NEAR(after, before, 1e-9 * std::max(1.0, std::abs(before)));
  }
}

TEST(Geodesic, FromDirectionExamples) {
  TestRng rng(6);
  const HpdMatrix s = random_hpd(4, rng);
  const HermitianMatrix xi = random_hermitian(4, rng);
  EXPECT_LT(relative_frobenius_error(geodesic_from_direction(s, xi, 0.0).matrix(), s.matrix()), 1e-12);
  const HpdMatrix g = geodesic_from_direction(HpdMatrix::identity(2), diag({1.0, -1.0}), 1.0);
  EXPECT_NEAR(g(0, 0).real(), std::exp(1.0), 1e-14);
  EXPECT_NEAR(g(1, 1).real(), std::exp(-1.0), 1e-14);
}

TEST(Geodesic, SymmetricFormMatchesNonSymmetricForm) {
  TestRng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 5;
    const HpdMatrix s = random_hpd(p, rng);
    const HermitianMatrix xi = random_hermitian(p, rng, 0.5);
    const double t = rng.uniform(-1.0, 1.0);
    const CMatrix alt = s.matrix() * taylor_expm(t * s.inverse() * xi.matrix());
    EXPECT_LT(relative_frobenius_error(geodesic_from_direction(s, xi, t).matrix(), alt), 1e-10);
  }
}

TEST(Geodesic, OdeResidualSmall) {
  TestRng rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int p = 2 + trial % 5;
    const HpdMatrix s = random_hpd(p, rng);
    const HermitianMatrix xi = random_hermitian(p, rng, 0.3);
    const double r = connection_residual(s, xi, 0.5, 1e-4);
    EXPECT_LT(r, 1e-4 * std::max(1.0, xi.frobenius_norm() * xi.frobenius_norm()));
  }
}

TEST(Geodesic, BetweenExamples) {
  TestRng rng(9);
  const HpdMatrix a = random_hpd(5, rng);
  const HpdMatrix b = random_hpd(5, rng);
  EXPECT_LT(relative_frobenius_error(geodesic_between(a, b, 0.0).matrix(), a.matrix()), 1e-10);
  EXPECT_LT(relative_frobenius_error(geodesic_between(a, b, 1.0).matrix(), b.matrix()), 1e-10);
  const HpdMatrix mid = geodesic_between(HpdMatrix::identity(2), hpd_diag({4.0, 16.0}), 0.5);
  EXPECT_LT(max_abs(mid.matrix() - diag({2.0, 4.0}).matrix()), 1e-13);
  try {
    geodesic_between(a, HpdMatrix::identity(3), 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DimensionMismatch);
  }
}

TEST(Geodesic, BetweenIsReversible) {
  TestRng rng(10);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 2 + trial % 6;
    const HpdMatrix a = random_hpd(p, rng);
    const HpdMatrix b = random_hpd(p, rng);
    const double t = rng.uniform();
    EXPECT_LT(relative_frobenius_error(geodesic_between(a, b, t).matrix(),
                                       geodesic_between(b, a, 1.0 - t).matrix()),
              1e-9);
  }
}

TEST(GeodesicSpec, BothForms) {
  TestRng rng(11);
  const HpdMatrix a = random_hpd(3, rng);
  const HpdMatrix b = random_hpd(3, rng);
  const GeodesicSpec by_end{a, b};
  const GeodesicSpec by_dir{a, riemannian_log(a, b)};
  EXPECT_LT(relative_frobenius_error(by_end.at(0.3).matrix(), by_dir.at(0.3).matrix()), 1e-10);
}

TEST(ExpLog, Examples) {
  TestRng rng(12);
  const HpdMatrix s = random_hpd(4, rng);
  EXPECT_LT(relative_frobenius_error(riemannian_exp(s, HermitianMatrix::zero(4)).matrix(), s.matrix()),
            1e-12);
  const HermitianMatrix logd = diag({std::log(3.0), std::log(0.5)});
  EXPECT_LT(max_abs(riemannian_exp(HpdMatrix::identity(2), logd).matrix() - diag({3.0, 0.5}).matrix()),
            1e-14);
  EXPECT_LT(max_abs(riemannian_log(s, s).matrix()), 1e-12);
  const HermitianMatrix l =
      riemannian_log(HpdMatrix::identity(2), hpd_diag({std::exp(2.0), 1.0}));
  EXPECT_LT(max_abs(l.matrix() - diag({2.0, 0.0}).matrix()), 1e-14);
}

TEST(ExpLog, RoundTrip) {
  TestRng rng(13);
  for (int trial = 0; trial < 30; ++trial) {
    const int p = 2 + trial % 6;
    const HpdMatrix a = random_hpd(p, rng, 20.0);
    const HpdMatrix b = random_hpd(p, rng, 20.0);
    EXPECT_LT(relative_frobenius_error(riemannian_exp(a, riemannian_log(a, b)).matrix(), b.matrix()),
              1e-9);
    const HermitianMatrix xi = color(a, random_hermitian(p, rng, 0.5));
    EXPECT_LT(relative_frobenius_error(riemannian_log(a, riemannian_exp(a, xi)).matrix(), xi.matrix()),
              1e-9);
  }
}

TEST(Distance, Examples) {
  TestRng rng(14);
  const HpdMatrix s = random_hpd(4, rng);
  EXPECT_NEAR(fisher_rao_distance_sq(s, s), 0.0, 1e-20);
  const double e = std::exp(1.0);
  EXPECT_NEAR(fisher_rao_distance_sq(HpdMatrix::identity(2), hpd_diag({e, e})), 2.0, 1e-13);
  for (int p : {2, 5}) {
    const double c = 3.5;
    const MetricParams mp{0.7, 0.2};
    const HpdMatrix cs = validate_hpd(HermitianMatrix::identity(p) * c);
    const double l = std::log(c);
    EXPECT_NEAR(fisher_rao_distance_sq(HpdMatrix::identity(p), cs, mp),
                (mp.alpha * p + mp.beta * p * p) * l * l, 1e-12);
  }
  EXPECT_NEAR(fisher_rao_distance_sq(HpdMatrix::identity(2),
                                     hpd_diag({std::exp(2.0), std::exp(-2.0)}), {1.0, 1.0}),
              8.0, 1e-12);
}

TEST(Distance, CongruenceInvariance) {
  TestRng rng(15);
  for (int trial = 0; trial < 100; ++trial) {
    const int p = 2 + trial % 6;
    const HpdMatrix a = random_hpd(p, rng);
    const HpdMatrix b = random_hpd(p, rng);
    const CMatrix u = random_invertible(p, rng);
    const MetricParams mp{rng.uniform(0.5, 2.0), rng.uniform(-0.1, 0.5)};
    const double before = fisher_rao_distance_sq(a, b, mp);
    const double after = fisher_rao_distance_sq(congruent(u, a), congruent(u, b), mp);
    EXPECT_LT(rel_err(after, before), 1e-8);
  }
}

TEST(Distance, SymmetricAndMatchesLogNorm) {
  TestRng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    const int p = 2 + trial % 6;
    const HpdMatrix a = random_hpd(p, rng);
    const HpdMatrix b = random_hpd(p, rng);
    const MetricParams mp{rng.uniform(0.5, 2.0), rng.uniform(-0.1, 0.5)};
    const double d = fisher_rao_distance_sq(a, b, mp);
    EXPECT_LT(rel_err(fisher_rao_distance_sq(b, a, mp), d), 1e-10);
    const HermitianMatrix l = riemannian_log(a, b);
    EXPECT_LT(rel_err(metric_inner(a, l, l, mp), d), 1e-9);
    // Eigenvalues of A^-1 B from the Jacobi oracle.
    const RVector lam = jacobi_eigenvalues(congruence(a.inv_sqrt(), b.hermitian()).matrix());
    const RVector logs = lam.array().log();
    const double oracle = mp.alpha * logs.squaredNorm() + mp.beta * logs.sum() * logs.sum();
    EXPECT_LT(rel_err(d, oracle), 1e-9);
  }
}

TEST(Distance, TriangleInequality) {
  TestRng rng(17);
  for (int trial = 0; trial < 200; ++trial) {
    const int p = 2 + trial % 4;
    const HpdMatrix a = random_hpd(p, rng, 30.0);
    const HpdMatrix b = random_hpd(p, rng, 30.0);
    const HpdMatrix c = random_hpd(p, rng, 30.0);
    const double ab = std::sqrt(fisher_rao_distance_sq(a, b));
    const double bc = std::sqrt(fisher_rao_distance_sq(b, c));
    const double ac = std::sqrt(fisher_rao_distance_sq(a, c));
    EXPECT_LE(ac, ab + bc + 1e-12);
  }
}

TEST(Distance, GeodesicHasConstantSpeed) {
  TestRng rng(18);
  const HpdMatrix a = random_hpd(4, rng);
  const HpdMatrix b = random_hpd(4, rng);
  const double total = fisher_rao_distance_sq(a, b);
  for (double t : {0.25, 0.5, 0.8}) {
    const HpdMatrix g = geodesic_between(a, b, t);
    EXPECT_LT(rel_err(fisher_rao_distance_sq(a, g), t * t * total), 1e-9);
  }
}

TEST(EuclideanDistance, Examples) {
  TestRng rng(19);
  const HpdMatrix a = random_hpd(3, rng);
  const HpdMatrix b = random_hpd(3, rng);
  EXPECT_EQ(euclidean_distance_sq(a, a), 0.0);
  EXPECT_NEAR(euclidean_distance_sq(HpdMatrix::identity(3),
                                    validate_hpd(HermitianMatrix::identity(3) * 2.0)),
              3.0, 1e-14);
  double oracle = 0.0;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) oracle += std::norm(a(i, j) - b(i, j));
  EXPECT_NEAR(euclidean_distance_sq(a, b), oracle, 1e-12);
}

TEST(Retraction, FirstOrder) {
  TestRng rng(20);
  const HpdMatrix s = random_hpd(3, rng);
  EXPECT_EQ(retract_first_order(s, HermitianMatrix::zero(3)).matrix(), s.matrix());
  const HpdMatrix up = retract_first_order(HpdMatrix::identity(2), HermitianMatrix::identity(2) * 0.5);
  EXPECT_LT(max_abs(up.matrix() - 1.5 * CMatrix::Identity(2, 2)), 1e-15);
  try {
    retract_first_order(HpdMatrix::identity(2), HermitianMatrix::identity(2) * -2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::LeftCone);
  }
}

TEST(Retraction, SecondOrder) {
  TestRng rng(21);
  const HpdMatrix s = random_hpd(3, rng);
  EXPECT_LT(relative_frobenius_error(retract_second_order(s, HermitianMatrix::zero(3)).matrix(),
                                     s.matrix()),
            1e-14);
  const HpdMatrix half = retract_second_order(HpdMatrix::identity(2), -HermitianMatrix::identity(2));
  EXPECT_LT(max_abs(half.matrix() - 0.5 * CMatrix::Identity(2, 2)), 1e-15);
  // Always stays in the cone, even for huge negative steps.
  for (int trial = 0; trial < 20; ++trial) {
    const HermitianMatrix xi = random_hermitian(3, rng, 50.0);
    EXPECT_NO_THROW(retract_second_order(s, xi));
  }
  // Direct formula.
  const HermitianMatrix xi = random_hermitian(3, rng);
  const CMatrix direct = s.matrix() + xi.matrix() + 0.5 * xi.matrix() * s.inverse() * xi.matrix();
  EXPECT_LT(relative_frobenius_error(retract_second_order(s, xi).matrix(), direct), 1e-12);
}

TEST(Retraction, SecondOrderIsThirdOrderAccurate) {
  TestRng rng(22);
  for (int trial = 0; trial < 10; ++trial) {
    const HpdMatrix s = random_hpd(4, rng);
    const HermitianMatrix xi = random_hermitian(4, rng);
    const double t = 0.02;
    auto err = [&](double tt) {
      return (retract_second_order(s, xi * tt).matrix() - riemannian_exp(s, xi * tt).matrix()).norm();
    };
    const double ratio = err(t) / err(t / 2);
    EXPECT_GT(ratio, 8.0 / 1.5);
    EXPECT_LT(ratio, 8.0 * 1.5);
  }
}

TEST(Retraction, FirstOrderAgreementAsStepVanishes) {
  // R1 matches sigma + t xi exactly; R2 deviates by O(t^2), so gap/t is O(t).
  TestRng rng(23);
  const HpdMatrix s = random_hpd(4, rng);
  const HermitianMatrix xi = random_hermitian(4, rng);
  std::vector<double> gaps;
  for (double t : {1e-2, 1e-3, 1e-4}) {
    const HpdMatrix r1 = retract_first_order(s, xi * t);
    EXPECT_LT((r1.matrix() - s.matrix() - t * xi.matrix()).norm() / t, 1e-12);
    const HpdMatrix r2 = retract_second_order(s, xi * t);
    gaps.push_back((r2.matrix() - s.matrix() - t * xi.matrix()).norm() / t);
  }
  for (std::size_t k = 1; k < gaps.size(); ++k) {
    EXPECT_GT(gaps[k - 1] / gaps[k], 8.0);
    EXPECT_LT(gaps[k - 1] / gaps[k], 12.0);
  }
}

TEST(ConnectionResidual, Examples) {
  TestRng rng(24);
  const HpdMatrix s = random_hpd(4, rng);
  EXPECT_EQ(connection_residual(s, HermitianMatrix::zero(4), 0.3, 1e-3), 0.0);
  const HermitianMatrix xi = color(s, random_hermitian(4, rng, 0.5));
  const double xi2 = xi.frobenius_norm() * xi.frobenius_norm();
  EXPECT_LT(connection_residual(s, xi, 0.5, 1e-3), 1e-3 * xi2);
  const double ratio = connection_residual(s, xi, 0.5, 1e-2) / connection_residual(s, xi, 0.5, 5e-3);
  EXPECT_GT(ratio, 2.0);
  EXPECT_LT(ratio, 8.0);
  try {
    connection_residual(s, xi, 0.5, 0.1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::InvalidArgument);
  }
}
