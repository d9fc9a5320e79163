#pragma once

// Scatter estimators: the sample covariance, the CES maximum-likelihood fixed
// point, and Riemannian gradient descent on the negative log-likelihood.

#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "cesgeom/ces_models.hpp"
#include "cesgeom/geometry.hpp"

namespace cesgeom {

enum class Retraction { FirstOrder, SecondOrder, Exponential };

struct ConstantStep {
  double value;
};

/// Armijo backtracking. The trial step starts at initial_step (1/n when unset)
/// every iteration and is multiplied by shrink until sufficient decrease holds.
struct Backtracking {
  double shrink = 0.5;
  double sufficient_decrease = 1e-4;
  std::optional<double> initial_step;
  int max_trials = 60;
};

using StepRule = std::variant<ConstantStep, Backtracking>;

struct EstimationConfig {
  double tolerance = 1e-9;
  int max_iterations = 1000;
  Retraction retraction = Retraction::FirstOrder;
  StepRule step_rule = Backtracking{};
  bool record_iterates = false;

  /// Throws InvalidArgument.
  void validate() const;
};

struct EstimationResult {
  HpdMatrix estimate;
  int iterations = 0;
  /// One entry per iteration: relative change for the fixed point, gradient
  /// norm at the new iterate for gradient descent.
  std::vector<double> residual_history;
  bool converged = false;
  /// Filled when record_iterates is set; excludes the starting point.
  std::vector<HpdMatrix> iterates;
};

/// Additive term in the cost. riemannian_gradient must be the gradient in the
/// metric passed to it.
struct Penalty {
  std::function<double(const HpdMatrix&)> value;
  std::function<HermitianMatrix(const HpdMatrix&, MetricParams)> riemannian_gradient;
};

/// (1/n) sum_i w_i x_i x_i^H, Hermitian by construction.
HermitianMatrix weighted_outer_sum(const SampleBatch& batch, const RVector& weights);

/// Throws NotPositiveDefinite when the result is singular (n <= p or
/// degenerate data).
HpdMatrix scm(const SampleBatch& batch);

/// Sigma -> (1/n) sum_i psi(x_i^H Sigma^-1 x_i) x_i x_i^H.
HermitianMatrix fixed_point_map(const SampleBatch& batch, const HpdMatrix& sigma,
                                const CesModel& model);

/// SCM, or I scaled by mean sample energy when the SCM is rejected.
HpdMatrix default_initialization(const SampleBatch& batch);

/// Iterates the fixed point map until the relative Frobenius change drops
/// below config.tolerance. Only tolerance, max_iterations and record_iterates
/// are read. Throws InsufficientSamples when n <= p; hitting max_iterations is
/// reported through converged = false.
EstimationResult mle_fixed_point(const SampleBatch& batch, const CesModel& model,
                                 const EstimationConfig& config = {},
                                 std::optional<HpdMatrix> sigma0 = std::nullopt);

/// Riemannian gradient of neg_log_likelihood in the (alpha, beta) metric.
HermitianMatrix riemannian_grad_nll(const HpdMatrix& sigma, const SampleBatch& batch,
                                    const CesModel& model, MetricParams params = {});

HpdMatrix retract(Retraction kind, const HpdMatrix& sigma, const HermitianMatrix& xi);

/// Sigma_{k+1} = R(-step * grad). Stops when the metric norm of the gradient
/// falls below config.tolerance. With a constant step, a first-order
/// retraction that leaves the cone throws LeftCone; under backtracking such a
/// trial is rejected and the step shrinks.
EstimationResult riemannian_gradient_descent(const SampleBatch& batch, const CesModel& model,
                                             MetricParams params, const EstimationConfig& config,
                                             const HpdMatrix& sigma0,
                                             const std::optional<Penalty>& penalty = std::nullopt);

/// SCM when model is empty, otherwise the fixed-point MLE under model.
struct EstimatorSpec {
  std::string tag;
  std::optional<CesModel> model;

  static EstimatorSpec scm() { return {"SCM", std::nullopt}; }
  static EstimatorSpec mle(std::string tag, CesModel m) { return {std::move(tag), std::move(m)}; }
};

/// Runs the estimator. A fixed point that does not converge throws
/// NoConvergence.
HpdMatrix apply_estimator(const EstimatorSpec& spec, const SampleBatch& batch,
                          const EstimationConfig& config = {});

}  // namespace cesgeom
