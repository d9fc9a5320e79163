#pragma once

// Karcher means on HPD matrices and the minimum-distance-to-mean classifier,
// with a synthetic generator of labelled covariance estimates.

#include <cstdint>
#include <optional>
#include <vector>

#include "cesgeom/ces_models.hpp"
#include "cesgeom/estimation.hpp"
#include "cesgeom/geometry.hpp"

namespace cesgeom {

/// (1/2m) sum_j d^2(sigma_bar, sigma_j).
double karcher_variance(const HpdMatrix& sigma_bar, const std::vector<HpdMatrix>& set,
                        MetricParams params = {});

struct KarcherResult {
  HpdMatrix mean;
  int iterations = 0;
  /// ||(1/m) sum_j log(S^-1 Sigma_j S^-1)||_F with S = mean^{1/2}, the (1,0)
  /// metric norm of the variance gradient at the returned mean.
  double gradient_norm = 0.0;
  bool converged = false;
  /// Variance at the start and after every accepted iteration.
  std::vector<double> variance_history;
};

/// Fixed-step Riemannian gradient iteration, starting from the arithmetic
/// mean unless init is given. A step that increases the variance is halved.
/// The mean does not depend on the metric coefficients. Throws
/// InvalidArgument for an empty set or tol <= 0; max_iter exhaustion is
/// reported through converged = false.
KarcherResult karcher_mean(const std::vector<HpdMatrix>& set, double tol = 1e-12,
                           int max_iter = 500, std::optional<HpdMatrix> init = std::nullopt);

/// Norm of (1/m) sum_j log_{sigma_bar}(sigma_j) in the (1,0) metric.
double karcher_gradient_norm(const HpdMatrix& sigma_bar, const std::vector<HpdMatrix>& set);

/// Covariances with labels in [1, class_count].
struct LabeledCovSet {
  std::vector<HpdMatrix> matrices;
  std::vector<int> labels;
  int class_count = 0;

  std::size_t size() const { return matrices.size(); }
  void add(HpdMatrix m, int label);
  /// Throws InvalidArgument or DimensionMismatch.
  void validate() const;
};

struct ClassCenters {
  /// centers[y - 1] belongs to label y.
  std::vector<HpdMatrix> centers;
  MetricParams params;
  std::vector<KarcherResult> fits;
};

/// One Karcher mean per class. Throws EmptyClass, and NoConvergence when a
/// class mean does not converge.
ClassCenters mdm_train(const LabeledCovSet& train, MetricParams params = {}, double tol = 1e-12,
                       int max_iter = 500);

/// Label of the nearest center; ties go to the lowest label.
int mdm_predict(const ClassCenters& centers, const HpdMatrix& sigma_hat);

/// Fraction of correctly predicted labels.
double evaluate_accuracy(const ClassCenters& centers, const LabeledCovSet& test);

struct MixtureScenario {
  /// One scatter and one law per class.
  std::vector<HpdMatrix> class_scatters;
  std::vector<CesModel> class_models;
  int n = 0;
  int train_batches = 1;
  int test_batches = 1;
  EstimatorSpec estimator = EstimatorSpec::scm();
  EstimationConfig estimator_config{};
  std::uint64_t seed = 0;
  int workers = 1;

  int dim() const;
  int class_count() const { return static_cast<int>(class_scatters.size()); }
  void validate() const;
};

struct MixtureData {
  LabeledCovSet train;
  LabeledCovSet test;
  /// Batches whose estimate failed and were left out.
  int dropped = 0;
};

/// Draws train_batches + test_batches batches per class; the first
/// train_batches go to training. The batch for (class c, index b) uses a
/// stream keyed by (seed, c, b), so the raw data does not depend on the
/// estimator or the worker count.
MixtureData synthetic_mixture(const MixtureScenario& scenario);

}  // namespace cesgeom
