#pragma once

// The (alpha, beta) affine-invariant metric family on HPD matrices:
//
//   <xi, eta>_Sigma = alpha tr(S^-1 xi S^-1 eta) + beta tr(S^-1 xi) tr(S^-1 eta)
//
// together with its geodesics, exponential/logarithm maps, distance and two
// retractions. The Levi-Civita connection, and hence the geodesics, do not
// depend on (alpha, beta); only metric_inner and the distance take params.

#include <variant>

#include "cesgeom/matrix_core.hpp"

namespace cesgeom {

/// Coefficients of the affine-invariant metric. Valid for dimension p when
/// alpha > 0 and beta > -alpha / p.
struct MetricParams {
  double alpha = 1.0;
  double beta = 0.0;

  static MetricParams natural() { return {1.0, 0.0}; }

  bool is_valid_for(int p) const;
  /// Throws InvalidMetricParams.
  void validate(int p) const;

  friend bool operator==(const MetricParams&, const MetricParams&) = default;
};

double metric_inner(const HpdMatrix& sigma, const HermitianMatrix& xi, const HermitianMatrix& eta,
                    MetricParams params = {});

/// Sigma^{-1/2} xi Sigma^{-1/2}: the tangent vector in whitened coordinates.
HermitianMatrix whiten(const HpdMatrix& sigma, const HermitianMatrix& xi);
/// Sigma^{1/2} w Sigma^{1/2}.
HermitianMatrix color(const HpdMatrix& sigma, const HermitianMatrix& w);

HpdMatrix geodesic_from_direction(const HpdMatrix& sigma, const HermitianMatrix& xi, double t);
HpdMatrix geodesic_between(const HpdMatrix& sigma1, const HpdMatrix& sigma2, double t);

/// Geodesic given by its start and either an initial direction or an endpoint.
struct GeodesicSpec {
  HpdMatrix start;
  std::variant<HermitianMatrix, HpdMatrix> target;

  HpdMatrix at(double t) const;
};

HpdMatrix riemannian_exp(const HpdMatrix& sigma, const HermitianMatrix& xi);
HermitianMatrix riemannian_log(const HpdMatrix& sigma, const HpdMatrix& sigma_hat);

/// alpha ||log(S1^-1 S2)||_F^2 + beta (log det(S1^-1 S2))^2.
double fisher_rao_distance_sq(const HpdMatrix& sigma1, const HpdMatrix& sigma2,
                              MetricParams params = {});
double euclidean_distance_sq(const HpdMatrix& sigma1, const HpdMatrix& sigma2);

/// Sigma + xi. Throws LeftCone when the result is not HPD.
HpdMatrix retract_first_order(const HpdMatrix& sigma, const HermitianMatrix& xi);
/// Sigma + xi + xi Sigma^-1 xi / 2, always HPD.
HpdMatrix retract_second_order(const HpdMatrix& sigma, const HermitianMatrix& xi);

/// Finite-difference estimate of || nabla_{gamma'} gamma' ||_F along the
/// geodesic through (sigma, xi) at parameter t, using central differences of
/// step h in (0, 1e-2].
double connection_residual(const HpdMatrix& sigma, const HermitianMatrix& xi, double t, double h);

}  // namespace cesgeom
