#include "cesgeom/icrb.hpp"

#include <cmath>
#include <string>

#include "parallel.hpp"

namespace cesgeom {

namespace {

constexpr double kInvSqrt2 = 0.70710678118654752440;

/// Real coordinates (Re, Im of every entry) so that the dot product of two
/// columns equals Re tr(A B) for Hermitian A, B.
RMatrix stack_real(const std::vector<HermitianMatrix>& mats) {
  const int p = mats.front().dim();
  const Eigen::Index len = static_cast<Eigen::Index>(p) * p;
  RMatrix v(2 * len, static_cast<Eigen::Index>(mats.size()));
  for (std::size_t q = 0; q < mats.size(); ++q) {
    const CMatrix& m = mats[q].matrix();
    const auto col = static_cast<Eigen::Index>(q);
    for (Eigen::Index k = 0; k < len; ++k) {
      v(k, col) = m.data()[k].real();
      v(len + k, col) = m.data()[k].imag();
    }
  }
  return v;
}

std::vector<HermitianMatrix> whitened(const HpdMatrix& sigma, const TangentBasis& basis) {
  std::vector<HermitianMatrix> out;
  out.reserve(basis.elements.size());
  for (const auto& e : basis.elements) out.push_back(whiten(sigma, e));
  return out;
}

void require_basis_at(const TangentBasis& basis, const HpdMatrix& sigma) {
  require_same_dim(basis.dim(), sigma.dim(), "basis dimension");
  if (basis.point && relative_frobenius_error(basis.point->matrix(), sigma.matrix()) > 1e-12) {
    throw Error(ErrorCode::InvalidArgument, "basis is attached to a different point");
  }
}

}  // namespace

std::string_view to_string(DistanceKind kind) {
  switch (kind) {
    case DistanceKind::Euclidean: return "euclidean";
    case DistanceKind::Natural: return "natural";
    case DistanceKind::FisherRao: return "fisher_rao";
  }
  return "unknown";
}

int TangentBasis::dim() const { return elements.empty() ? 0 : elements.front().dim(); }

double TangentBasis::inner(const HermitianMatrix& xi, const HermitianMatrix& eta) const {
  if (!params) return trace_product(xi, eta);
  if (!point) throw Error(ErrorCode::InvalidArgument, "metric basis without a point");
  return metric_inner(*point, xi, eta, *params);
}

TangentBasis euclidean_basis(int p) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "basis dimension must be >= 1");
  TangentBasis basis;
  basis.elements.reserve(static_cast<std::size_t>(p) * p);
  for (int i = 0; i < p; ++i) {
    CMatrix e = CMatrix::Zero(p, p);
    e(i, i) = 1.0;
    basis.elements.push_back(HermitianMatrix::symmetrized(e));
  }
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      CMatrix e = CMatrix::Zero(p, p);
      e(i, j) = kInvSqrt2;
      e(j, i) = kInvSqrt2;
      basis.elements.push_back(HermitianMatrix::symmetrized(e));
    }
  }
  for (int i = 0; i < p; ++i) {
    for (int j = i + 1; j < p; ++j) {
      CMatrix e = CMatrix::Zero(p, p);
      e(i, j) = Complex(0.0, kInvSqrt2);
      e(j, i) = Complex(0.0, -kInvSqrt2);
      basis.elements.push_back(HermitianMatrix::symmetrized(e));
    }
  }
  return basis;
}

TangentBasis natural_basis(const HpdMatrix& sigma) {
  TangentBasis basis = euclidean_basis(sigma.dim());
  for (auto& e : basis.elements) e = color(sigma, e);
  basis.point = sigma;
  basis.params = MetricParams{};
  return basis;
}

TangentBasis gram_schmidt_basis(const HpdMatrix& sigma, MetricParams params) {
  const int p = sigma.dim();
  params.validate(p);
  // Orthonormalize in whitened coordinates, where the metric reads
  // alpha Re tr(AB) + beta tr A tr B and the natural basis is the Euclidean one.
  auto inner = [&params](const HermitianMatrix& a, const HermitianMatrix& b) {
    return params.alpha * trace_product(a, b) + params.beta * a.trace() * b.trace();
  };
  std::vector<HermitianMatrix> w = euclidean_basis(p).elements;
  for (std::size_t q = 0; q < w.size(); ++q) {
    const double before = std::sqrt(std::max(0.0, inner(w[q], w[q])));
    for (std::size_t l = 0; l < q; ++l) {
      w[q] -= w[l] * inner(w[q], w[l]);
    }
    const double norm = std::sqrt(std::max(0.0, inner(w[q], w[q])));
    // A relative pivot below 1e-6 means a Gram condition above 1e12.
    if (!(norm > 1e-6 * before)) {
      throw Error(ErrorCode::NumericalRankLoss,
                  "Gram-Schmidt pivot " + std::to_string(q) + " has norm " + std::to_string(norm));
    }
    w[q] *= 1.0 / norm;
  }
  TangentBasis basis;
  basis.point = sigma;
  basis.params = params;
  basis.elements.reserve(w.size());
  for (const auto& e : w) basis.elements.push_back(color(sigma, e));
  return basis;
}

RMatrix basis_gram(const TangentBasis& basis) {
  const auto m = static_cast<Eigen::Index>(basis.elements.size());
  if (!basis.params) {
    const RMatrix v = stack_real(basis.elements);
    return v.transpose() * v;
  }
  RMatrix g(m, m);
  for (Eigen::Index q = 0; q < m; ++q) {
    for (Eigen::Index l = 0; l <= q; ++l) {
      g(q, l) = basis.inner(basis.elements[q], basis.elements[l]);
      g(l, q) = g(q, l);
    }
  }
  return g;
}

FimMatrix fim_matrix(const HpdMatrix& sigma, const TangentBasis& basis, CesCoefficients coeffs,
                     int n) {
  require_basis_at(basis, sigma);
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  const std::vector<HermitianMatrix> w = whitened(sigma, basis);
  const RMatrix v = stack_real(w);
  RVector traces(static_cast<Eigen::Index>(w.size()));
  for (std::size_t q = 0; q < w.size(); ++q) traces(static_cast<Eigen::Index>(q)) = w[q].trace();
  RMatrix f = coeffs.alpha_g * (v.transpose() * v) + coeffs.beta_g * traces * traces.transpose();
  f *= static_cast<double>(n);
  // Exact symmetry; the product above is symmetric only up to round-off.
  f = 0.5 * (f + f.transpose()).eval();
  return {std::move(f), n};
}

FimMatrix fim_matrix(const HpdMatrix& sigma, const TangentBasis& basis, const CesModel& model,
                     int n) {
  require_same_dim(sigma.dim(), model.dim(), "fim_matrix model");
  return fim_matrix(sigma, basis, coefficients(model), n);
}

double trace_inverse(const RMatrix& f, double* condition_estimate) {
  Eigen::LLT<RMatrix> llt(f);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::SingularFim, "Fisher information matrix is not positive definite");
  }
  const double rcond = llt.rcond();
  if (condition_estimate) *condition_estimate = rcond;
  if (!(rcond > 0.0)) {
    throw Error(ErrorCode::SingularFim, "Fisher information matrix is singular");
  }
  const RMatrix inv = llt.solve(RMatrix::Identity(f.rows(), f.cols()));
  return inv.trace();
}

BoundReport crb_euclidean(const HpdMatrix& sigma, const CesModel& model, int n) {
  require_same_dim(sigma.dim(), model.dim(), "crb_euclidean");
  const CesCoefficients c = coefficients(model);
  const FimMatrix f = fim_matrix(sigma, euclidean_basis(sigma.dim()), c, n);
  double rcond = 1.0;
  const double value = trace_inverse(f.entries, &rcond);
  return {DistanceKind::Euclidean, value,           sigma.dim(), n, c,
          rcond,                   1.0 / rcond > kFimConditionWarning};
}

BoundReport crb_natural(const CesModel& model, int n) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  const CesCoefficients c = coefficients(model);
  const double p = model.dim();
  const double value = ((p * p - 1.0) / c.alpha_g + 1.0 / (c.alpha_g + p * c.beta_g)) / n;
  return {DistanceKind::Natural, value, model.dim(), n, c};
}

BoundReport crb_fisher_rao(int p, int n) {
  if (p < 1 || n < 1) throw Error(ErrorCode::InvalidArgument, "p and n must be >= 1");
  const double value = static_cast<double>(p) * p / n;
  return {DistanceKind::FisherRao, value, p, n, CesCoefficients{1.0, 0.0}};
}

RVector error_vector(const HpdMatrix& sigma, const HpdMatrix& sigma_hat,
                     const TangentBasis& basis) {
  require_same_dim(sigma.dim(), sigma_hat.dim(), "error_vector");
  require_basis_at(basis, sigma);
  const auto m = static_cast<Eigen::Index>(basis.elements.size());
  RVector eps(m);
  if (!basis.params) {
    const HermitianMatrix diff = sigma_hat.hermitian() - sigma.hermitian();
    for (Eigen::Index q = 0; q < m; ++q) eps(q) = trace_product(diff, basis.elements[q]);
    return eps;
  }
  const HermitianMatrix log = riemannian_log(sigma, sigma_hat);
  for (Eigen::Index q = 0; q < m; ++q) {
    eps(q) = metric_inner(sigma, log, basis.elements[q], *basis.params);
  }
  return eps;
}

const McMseRow& McMseTable::find(std::string_view estimator, int n, DistanceKind distance) const {
  for (const auto& row : rows) {
    if (row.estimator == estimator && row.n == n && row.distance == distance) return row;
  }
  throw Error(ErrorCode::InvalidArgument, "no table row for " + std::string(estimator) +
                                              ", n=" + std::to_string(n) + ", " +
                                              std::string(to_string(distance)));
}

McMseTable mc_mse_experiment(const McScenario& scenario) {
  const int p = scenario.true_sigma.dim();
  require_same_dim(p, scenario.model_true.dim(), "scenario model");
  if (scenario.trials < 1) throw Error(ErrorCode::InvalidArgument, "trials must be >= 1");
  if (scenario.estimators.empty() || scenario.n_grid.empty()) {
    throw Error(ErrorCode::InvalidArgument, "scenario needs estimators and an n grid");
  }
  for (const auto& est : scenario.estimators) {
    if (est.model) require_same_dim(p, est.model->dim(), "estimator model");
  }
  for (int n : scenario.n_grid) {
    if (n <= p) {
      throw Error(ErrorCode::InsufficientSamples,
                  "every n in the grid must exceed p (got n=" + std::to_string(n) + ")");
    }
  }

  constexpr int kDistances = 3;
  const MetricParams fr_params = coefficients(scenario.model_true).metric();
  const int n_count = static_cast<int>(scenario.n_grid.size());
  const int est_count = static_cast<int>(scenario.estimators.size());
  const int tasks = n_count * scenario.trials;

  // Per task and estimator: three squared distances, NaN marks a failure.
  std::vector<double> results(static_cast<std::size_t>(tasks) * est_count * kDistances);
  detail::parallel_for(tasks, scenario.workers, [&](int task) {
    const int ni = task / scenario.trials;
    const int trial = task % scenario.trials;
    SeededRng rng(derive_seed(scenario.seed, static_cast<std::uint64_t>(ni)),
                  static_cast<std::uint64_t>(trial));
    const SampleBatch batch =
        sample_batch(scenario.true_sigma, scenario.model_true, scenario.n_grid[ni], rng);
    for (int e = 0; e < est_count; ++e) {
      double* out = &results[(static_cast<std::size_t>(task) * est_count + e) * kDistances];
      const EstimatorSpec& spec = scenario.estimators[e];
      try {
        const HpdMatrix estimate = apply_estimator(spec, batch, scenario.mle_config);
        out[0] = euclidean_distance_sq(estimate, scenario.true_sigma);
        out[1] = fisher_rao_distance_sq(scenario.true_sigma, estimate, MetricParams{});
        out[2] = fisher_rao_distance_sq(scenario.true_sigma, estimate, fr_params);
      } catch (const Error&) {
        std::fill(out, out + kDistances, std::nan(""));
      }
    }
  });

  McMseTable table;
  for (int e = 0; e < est_count; ++e) {
    for (int ni = 0; ni < n_count; ++ni) {
      const int n = scenario.n_grid[ni];
      const double bounds[kDistances] = {crb_euclidean(scenario.true_sigma, scenario.model_true, n).value,
                                         crb_natural(scenario.model_true, n).value,
                                         crb_fisher_rao(p, n).value};
      for (int d = 0; d < kDistances; ++d) {
        std::vector<double> values;
        values.reserve(static_cast<std::size_t>(scenario.trials));
        for (int trial = 0; trial < scenario.trials; ++trial) {
          const int task = ni * scenario.trials + trial;
          const double v = results[(static_cast<std::size_t>(task) * est_count + e) * kDistances + d];
          if (!std::isnan(v)) values.push_back(v);
        }
        const int ok = static_cast<int>(values.size());
        double mean = std::nan("");
        double se = 0.0;
        if (ok > 0) {
          mean = 0.0;
          for (double v : values) mean += v;
          mean /= ok;
        }
        if (ok > 1) {
          double ss = 0.0;
          for (double v : values) ss += (v - mean) * (v - mean);
          se = std::sqrt(ss / (ok - 1) / ok);
        }
        table.rows.push_back({scenario.estimators[e].tag, n, static_cast<DistanceKind>(d), mean, se,
                              bounds[d], ok, scenario.trials - ok});
      }
    }
  }
  return table;
}

}  // namespace cesgeom
