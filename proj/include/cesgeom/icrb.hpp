#pragma once

// Intrinsic Cramer-Rao bounds: orthonormal tangent bases, Fisher information
// matrices in coordinates, closed-form bounds for three distances, and a
// Monte-Carlo harness comparing estimator errors against those bounds.
//
// Curvature and bias terms are neglected; the bound is E[d^2] >= tr(F^-1).

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "cesgeom/ces_models.hpp"
#include "cesgeom/estimation.hpp"
#include "cesgeom/geometry.hpp"

namespace cesgeom {

enum class DistanceKind { Euclidean, Natural, FisherRao };

std::string_view to_string(DistanceKind kind);

/// p^2 Hermitian elements orthonormal at `point` under `params`. An empty
/// params means the flat inner product Re tr(xi eta), valid at any point.
struct TangentBasis {
  std::optional<HpdMatrix> point;
  std::optional<MetricParams> params;
  std::vector<HermitianMatrix> elements;

  int dim() const;
  /// Inner product the basis is orthonormal under.
  double inner(const HermitianMatrix& xi, const HermitianMatrix& eta) const;
};

/// Diagonal units, then (E_ij + E_ji)/sqrt(2) for i < j, then
/// i (E_ij - E_ji)/sqrt(2) for i < j, pairs in lexicographic order.
TangentBasis euclidean_basis(int p);
/// Sigma^{1/2} e Sigma^{1/2} for each Euclidean element e; orthonormal in (1,0).
TangentBasis natural_basis(const HpdMatrix& sigma);
/// Modified Gram-Schmidt of the natural basis under params. Throws
/// NumericalRankLoss when a pivot norm drops below 1e-12.
TangentBasis gram_schmidt_basis(const HpdMatrix& sigma, MetricParams params);

/// Gram matrix of the elements under the basis's own inner product.
RMatrix basis_gram(const TangentBasis& basis);

struct FimMatrix {
  RMatrix entries;
  int sample_count;
};

/// F_ql = n (alpha_g Re tr(S^-1 e_q S^-1 e_l) + beta_g tr(S^-1 e_q) tr(S^-1 e_l)).
FimMatrix fim_matrix(const HpdMatrix& sigma, const TangentBasis& basis, CesCoefficients coeffs,
                     int n);
FimMatrix fim_matrix(const HpdMatrix& sigma, const TangentBasis& basis, const CesModel& model,
                     int n);

/// Condition estimate above which a bound is flagged.
inline constexpr double kFimConditionWarning = 1e12;

struct BoundReport {
  DistanceKind distance;
  double value;
  int p;
  int n;
  CesCoefficients coefficients;
  /// Reciprocal condition estimate of the FIM; 1 for closed forms.
  double condition_estimate = 1.0;
  bool ill_conditioned = false;
};

/// tr(F^-1) over the Euclidean basis. Throws SingularFim.
BoundReport crb_euclidean(const HpdMatrix& sigma, const CesModel& model, int n);
/// (1/n) ((p^2 - 1)/alpha_g + 1/(alpha_g + p beta_g)); independent of Sigma.
BoundReport crb_natural(const CesModel& model, int n);
/// p^2 / n.
BoundReport crb_fisher_rao(int p, int n);

/// tr(F^-1) by a dense SPD solve. Throws SingularFim.
double trace_inverse(const RMatrix& f, double* condition_estimate = nullptr);

/// Coordinates of the logarithm of sigma_hat at sigma in the basis; for the
/// Euclidean basis the logarithm is sigma_hat - sigma.
RVector error_vector(const HpdMatrix& sigma, const HpdMatrix& sigma_hat,
                     const TangentBasis& basis);

struct McScenario {
  HpdMatrix true_sigma;
  CesModel model_true;
  std::vector<EstimatorSpec> estimators;
  std::vector<int> n_grid;
  int trials;
  std::uint64_t seed;
  int workers = 1;
  EstimationConfig mle_config{};
};

struct McMseRow {
  std::string estimator;
  int n;
  DistanceKind distance;
  double mean_sq_dist;
  double std_err;
  double bound;
  int trials;
  int failures;
};

struct McMseTable {
  std::vector<McMseRow> rows;

  /// Throws InvalidArgument when no such row exists.
  const McMseRow& find(std::string_view estimator, int n, DistanceKind distance) const;
};

/// For each n and trial draws one batch from the true law, runs every
/// estimator on it and records the three squared distances to the truth.
/// Streams are keyed by (seed, n index, trial), so the table does not depend
/// on the worker count. Estimator failures and non-converged fixed points are
/// counted per cell and excluded from the means.
McMseTable mc_mse_experiment(const McScenario& scenario);

}  // namespace cesgeom
