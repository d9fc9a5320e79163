#include "cesgeom/geometry.hpp"

#include <cmath>
#include <string>

namespace cesgeom {

bool MetricParams::is_valid_for(int p) const {
  return std::isfinite(alpha) && std::isfinite(beta) && alpha > 0.0 && beta > -alpha / p;
}

void MetricParams::validate(int p) const {
  if (!is_valid_for(p)) {
    throw Error(ErrorCode::InvalidMetricParams,
                "need alpha > 0 and beta > -alpha/p; got alpha=" + std::to_string(alpha) +
                    ", beta=" + std::to_string(beta) + ", p=" + std::to_string(p));
  }
}

HermitianMatrix whiten(const HpdMatrix& sigma, const HermitianMatrix& xi) {
  require_same_dim(sigma.dim(), xi.dim(), "whiten");
  return congruence(sigma.inv_sqrt(), xi);
}

HermitianMatrix color(const HpdMatrix& sigma, const HermitianMatrix& w) {
  require_same_dim(sigma.dim(), w.dim(), "color");
  return congruence(sigma.sqrt(), w);
}

double metric_inner(const HpdMatrix& sigma, const HermitianMatrix& xi, const HermitianMatrix& eta,
                    MetricParams params) {
  require_same_dim(sigma.dim(), xi.dim(), "metric_inner xi");
  require_same_dim(sigma.dim(), eta.dim(), "metric_inner eta");
  params.validate(sigma.dim());
  const HermitianMatrix a = whiten(sigma, xi);
  const HermitianMatrix b = &xi == &eta ? a : whiten(sigma, eta);
  return params.alpha * trace_product(a, b) + params.beta * a.trace() * b.trace();
}

HpdMatrix geodesic_from_direction(const HpdMatrix& sigma, const HermitianMatrix& xi, double t) {
  const HermitianMatrix w = whiten(sigma, xi) * t;
  return validate_hpd(color(sigma, spectral_map(w, SpectralFn::exp())));
}

HpdMatrix geodesic_between(const HpdMatrix& sigma1, const HpdMatrix& sigma2, double t) {
  require_same_dim(sigma1.dim(), sigma2.dim(), "geodesic_between");
  const HermitianMatrix inner = congruence(sigma1.inv_sqrt(), sigma2.hermitian());
  return validate_hpd(color(sigma1, spectral_map(inner, SpectralFn::pow(t))));
}

HpdMatrix GeodesicSpec::at(double t) const {
  if (const auto* xi = std::get_if<HermitianMatrix>(&target)) {
    return geodesic_from_direction(start, *xi, t);
  }
  return geodesic_between(start, std::get<HpdMatrix>(target), t);
}

HpdMatrix riemannian_exp(const HpdMatrix& sigma, const HermitianMatrix& xi) {
  return geodesic_from_direction(sigma, xi, 1.0);
}

HermitianMatrix riemannian_log(const HpdMatrix& sigma, const HpdMatrix& sigma_hat) {
  require_same_dim(sigma.dim(), sigma_hat.dim(), "riemannian_log");
  const HermitianMatrix inner = congruence(sigma.inv_sqrt(), sigma_hat.hermitian());
  return color(sigma, spectral_map(inner, SpectralFn::log()));
}

double fisher_rao_distance_sq(const HpdMatrix& sigma1, const HpdMatrix& sigma2,
                              MetricParams params) {
  require_same_dim(sigma1.dim(), sigma2.dim(), "fisher_rao_distance_sq");
  params.validate(sigma1.dim());
  // Eigenvalues of S1^-1 S2 are those of S1^-1/2 S2 S1^-1/2.
  const HermitianMatrix inner = congruence(sigma1.inv_sqrt(), sigma2.hermitian());
  const RVector logs = eig_hermitian(inner).eigenvalues.array().log();
  const double sum = logs.sum();
  return params.alpha * logs.squaredNorm() + params.beta * sum * sum;
}

double euclidean_distance_sq(const HpdMatrix& sigma1, const HpdMatrix& sigma2) {
  require_same_dim(sigma1.dim(), sigma2.dim(), "euclidean_distance_sq");
  return (sigma1.matrix() - sigma2.matrix()).squaredNorm();
}

HpdMatrix retract_first_order(const HpdMatrix& sigma, const HermitianMatrix& xi) {
  require_same_dim(sigma.dim(), xi.dim(), "retract_first_order");
  try {
    return validate_hpd(sigma.hermitian() + xi);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NotPositiveDefinite) {
      throw Error(ErrorCode::LeftCone, std::string("first-order retraction: ") + e.what());
    }
    throw;
  }
}

HpdMatrix retract_second_order(const HpdMatrix& sigma, const HermitianMatrix& xi) {
  require_same_dim(sigma.dim(), xi.dim(), "retract_second_order");
  // Sigma^1/2 (I + W + W^2/2) Sigma^1/2 with W = Sigma^-1/2 xi Sigma^-1/2.
  const CMatrix w = whiten(sigma, xi).matrix();
  const auto p = w.rows();
  const HermitianMatrix poly =
      HermitianMatrix::symmetrized(CMatrix::Identity(p, p) + w + 0.5 * w * w);
  return validate_hpd(color(sigma, poly));
}

double connection_residual(const HpdMatrix& sigma, const HermitianMatrix& xi, double t, double h) {
  if (!(h > 0.0 && h <= 1e-2)) {
    throw Error(ErrorCode::InvalidArgument, "finite-difference step must lie in (0, 1e-2]");
  }
  const CMatrix before = geodesic_from_direction(sigma, xi, t - h).matrix();
  const HpdMatrix here = geodesic_from_direction(sigma, xi, t);
  const CMatrix after = geodesic_from_direction(sigma, xi, t + h).matrix();
  const CMatrix velocity = (after - before) / (2.0 * h);
  const CMatrix acceleration = (after - 2.0 * here.matrix() + before) / (h * h);
  const CMatrix correction = hermitian_part(velocity * here.inverse() * velocity);
  return (acceleration - correction).norm();
}

}  // namespace cesgeom
