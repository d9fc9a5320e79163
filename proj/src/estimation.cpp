#include "cesgeom/estimation.hpp"

#include <cmath>
#include <string>

namespace cesgeom {

void EstimationConfig::validate() const {
  if (!(tolerance > 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be positive");
  }
  if (max_iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_iterations must be >= 1");
  }
  if (const auto* c = std::get_if<ConstantStep>(&step_rule)) {
    if (!(c->value > 0.0) || !std::isfinite(c->value)) {
      throw Error(ErrorCode::InvalidArgument, "constant step must be positive");
    }
  } else {
    const auto& b = std::get<Backtracking>(step_rule);
    if (!(b.shrink > 0.0 && b.shrink < 1.0) ||
        !(b.sufficient_decrease > 0.0 && b.sufficient_decrease < 1.0)) {
      throw Error(ErrorCode::InvalidArgument, "backtracking constants must lie in (0, 1)");
    }
    if (b.initial_step && !(*b.initial_step > 0.0)) {
      throw Error(ErrorCode::InvalidArgument, "initial step must be positive");
    }
    if (b.max_trials < 1) {
      throw Error(ErrorCode::InvalidArgument, "backtracking needs at least one trial");
    }
  }
}

HermitianMatrix weighted_outer_sum(const SampleBatch& batch, const RVector& weights) {
  const CMatrix& x = batch.samples();
  const CMatrix weighted = x * weights.cast<Complex>().asDiagonal();
  return HermitianMatrix::symmetrized(weighted * x.adjoint() / static_cast<double>(batch.count()));
}

HpdMatrix scm(const SampleBatch& batch) {
  return validate_hpd(weighted_outer_sum(batch, RVector::Ones(batch.count())));
}

HermitianMatrix fixed_point_map(const SampleBatch& batch, const HpdMatrix& sigma,
                                const CesModel& model) {
  const RVector q = quadratic_forms(batch, sigma);
  const RVector w = q.unaryExpr([&model](double t) { return psi(model, t); });
  return weighted_outer_sum(batch, w);
}

HpdMatrix default_initialization(const SampleBatch& batch) {
  try {
    return scm(batch);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NotPositiveDefinite) throw;
  }
  const double energy = batch.samples().squaredNorm() / batch.count() / batch.dim();
  if (!(energy > 0.0)) {
    throw Error(ErrorCode::NotPositiveDefinite, "batch has zero energy");
  }
  return validate_hpd(HermitianMatrix::identity(batch.dim()) * energy);
}

EstimationResult mle_fixed_point(const SampleBatch& batch, const CesModel& model,
                                 const EstimationConfig& config, std::optional<HpdMatrix> sigma0) {
  require_same_dim(batch.dim(), model.dim(), "mle_fixed_point");
  if (batch.count() <= batch.dim()) {
    throw Error(ErrorCode::InsufficientSamples,
                "fixed point needs n > p (n=" + std::to_string(batch.count()) +
                    ", p=" + std::to_string(batch.dim()) + ")");
  }
  if (!(config.tolerance > 0.0) || config.max_iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be positive, max_iterations >= 1");
  }
  HpdMatrix sigma = sigma0 ? *sigma0 : default_initialization(batch);
  require_same_dim(batch.dim(), sigma.dim(), "mle_fixed_point start");

  EstimationResult result{sigma, 0, {}, false, {}};
  for (int k = 0; k < config.max_iterations; ++k) {
    HpdMatrix next = validate_hpd(fixed_point_map(batch, sigma, model));
    const double change = relative_frobenius_error(next.matrix(), sigma.matrix());
    sigma = std::move(next);
    ++result.iterations;
    result.residual_history.push_back(change);
    if (config.record_iterates) result.iterates.push_back(sigma);
    if (change < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.estimate = sigma;
  return result;
}

HermitianMatrix riemannian_grad_nll(const HpdMatrix& sigma, const SampleBatch& batch,
                                    const CesModel& model, MetricParams params) {
  require_same_dim(sigma.dim(), batch.dim(), "riemannian_grad_nll");
  require_same_dim(sigma.dim(), model.dim(), "riemannian_grad_nll model");
  const int p = sigma.dim();
  params.validate(p);
  const double n = batch.count();
  // (1,0) gradient: n Sigma - sum psi(q) x x^H.
  const HermitianMatrix g10 = (sigma.hermitian() - fixed_point_map(batch, sigma, model)) * n;
  if (params == MetricParams{}) return g10;
  // (alpha, beta) gradient from the (1,0) one.
  const double tr = trace_product(HermitianMatrix::symmetrized(sigma.inverse()), g10);
  const double a = params.alpha;
  const double b = params.beta;
  return g10 / a - sigma.hermitian() * (b / (a * (a + p * b)) * tr);
}

HpdMatrix retract(Retraction kind, const HpdMatrix& sigma, const HermitianMatrix& xi) {
  switch (kind) {
    case Retraction::FirstOrder: return retract_first_order(sigma, xi);
    case Retraction::SecondOrder: return retract_second_order(sigma, xi);
    case Retraction::Exponential: return riemannian_exp(sigma, xi);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown retraction");
}

EstimationResult riemannian_gradient_descent(const SampleBatch& batch, const CesModel& model,
                                             MetricParams params, const EstimationConfig& config,
                                             const HpdMatrix& sigma0,
                                             const std::optional<Penalty>& penalty) {
  config.validate();
  require_same_dim(batch.dim(), sigma0.dim(), "riemannian_gradient_descent");
  params.validate(sigma0.dim());

  auto cost = [&](const HpdMatrix& s) {
    double c = neg_log_likelihood(batch, s, model);
    if (penalty) c += penalty->value(s);
    return c;
  };
  auto gradient = [&](const HpdMatrix& s) {
    HermitianMatrix g = riemannian_grad_nll(s, batch, model, params);
    if (penalty) g += penalty->riemannian_gradient(s, params);
    return g;
  };
  auto norm_of = [&](const HpdMatrix& s, const HermitianMatrix& g) {
    return std::sqrt(std::max(0.0, metric_inner(s, g, g, params)));
  };

  HpdMatrix sigma = sigma0;
  HermitianMatrix grad = gradient(sigma);
  double grad_norm = norm_of(sigma, grad);
  EstimationResult result{sigma, 0, {}, grad_norm < config.tolerance, {}};
  if (result.converged) return result;

  const bool backtrack = std::holds_alternative<Backtracking>(config.step_rule);
  double current_cost = backtrack ? cost(sigma) : 0.0;

  for (int k = 0; k < config.max_iterations; ++k) {
    std::optional<HpdMatrix> next;
    if (const auto* c = std::get_if<ConstantStep>(&config.step_rule)) {
      try {
        next = retract(config.retraction, sigma, grad * (-c->value));
      } catch (const Error& e) {
        if (e.code() != ErrorCode::LeftCone) throw;
        throw Error(ErrorCode::LeftCone, "iteration " + std::to_string(k + 1) +
                                             ", gradient norm " + std::to_string(grad_norm) +
                                             ": " + e.what());
      }
    } else {
      const auto& b = std::get<Backtracking>(config.step_rule);
      double step = b.initial_step.value_or(1.0 / batch.count());
      const double slope = grad_norm * grad_norm;
      for (int trial = 0; trial < b.max_trials; ++trial, step *= b.shrink) {
        std::optional<HpdMatrix> candidate;
        try {
          candidate = retract(config.retraction, sigma, grad * (-step));
        } catch (const Error& e) {
          if (e.code() != ErrorCode::LeftCone) throw;
          continue;
        }
        const double candidate_cost = cost(*candidate);
        if (candidate_cost <= current_cost - b.sufficient_decrease * step * slope) {
          next = std::move(candidate);
          current_cost = candidate_cost;
          break;
        }
      }
      // No acceptable step: the iterate is stationary to working precision.
      if (!next) break;
    }
    sigma = std::move(*next);
    grad = gradient(sigma);
    grad_norm = norm_of(sigma, grad);
    ++result.iterations;
    result.residual_history.push_back(grad_norm);
    if (config.record_iterates) result.iterates.push_back(sigma);
    if (grad_norm < config.tolerance) {
      result.converged = true;
      break;
    }
  }
  result.estimate = sigma;
  return result;
}

HpdMatrix apply_estimator(const EstimatorSpec& spec, const SampleBatch& batch,
                          const EstimationConfig& config) {
  if (!spec.model) return scm(batch);
  EstimationResult r = mle_fixed_point(batch, *spec.model, config);
  if (!r.converged) {
    throw Error(ErrorCode::NoConvergence,
                spec.tag + " fixed point did not converge in " + std::to_string(r.iterations) +
                    " iterations");
  }
  return r.estimate;
}

}  // namespace cesgeom
