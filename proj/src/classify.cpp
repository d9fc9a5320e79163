#include "cesgeom/classify.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "parallel.hpp"

namespace cesgeom {

namespace {

constexpr int kMaxHalvings = 40;
/// Relative variance increase tolerated as evaluation round-off before a step
/// is halved. Near the mean the true decrease is O(|grad|^2), far below the
/// error in the computed variance.
constexpr double kVarianceSlack = 64.0 * std::numeric_limits<double>::epsilon();

struct KarcherState {
  /// (1/m) sum_j log(S^-1 Sigma_j S^-1), whitened tangent at the iterate.
  HermitianMatrix mean_log;
  double variance;
};

KarcherState evaluate(const HpdMatrix& sigma_bar, const std::vector<HpdMatrix>& set) {
  const int p = sigma_bar.dim();
  CMatrix sum = CMatrix::Zero(p, p);
  double sq = 0.0;
  for (const auto& s : set) {
    require_same_dim(p, s.dim(), "Karcher set");
    const HermitianMatrix inner = congruence(sigma_bar.inv_sqrt(), s.hermitian());
    const EigDecomposition eig = eig_hermitian(inner);
    const RVector logs = eig.eigenvalues.array().log();
    sq += logs.squaredNorm();
    sum += eig.eigenvectors * logs.asDiagonal() * eig.eigenvectors.adjoint();
  }
  const double m = static_cast<double>(set.size());
  return {HermitianMatrix::symmetrized(sum / m), sq / (2.0 * m)};
}

HpdMatrix arithmetic_mean(const std::vector<HpdMatrix>& set) {
  HermitianMatrix sum = HermitianMatrix::zero(set.front().dim());
  for (const auto& s : set) sum += s.hermitian();
  return validate_hpd(sum / static_cast<double>(set.size()));
}

}  // namespace

double karcher_variance(const HpdMatrix& sigma_bar, const std::vector<HpdMatrix>& set,
                        MetricParams params) {
  if (set.empty()) throw Error(ErrorCode::InvalidArgument, "empty set");
  double sum = 0.0;
  for (const auto& s : set) sum += fisher_rao_distance_sq(sigma_bar, s, params);
  return sum / (2.0 * static_cast<double>(set.size()));
}

double karcher_gradient_norm(const HpdMatrix& sigma_bar, const std::vector<HpdMatrix>& set) {
  if (set.empty()) throw Error(ErrorCode::InvalidArgument, "empty set");
  HermitianMatrix sum = HermitianMatrix::zero(sigma_bar.dim());
  for (const auto& s : set) sum += riemannian_log(sigma_bar, s);
  sum = sum / static_cast<double>(set.size());
  return std::sqrt(metric_inner(sigma_bar, sum, sum));
}

KarcherResult karcher_mean(const std::vector<HpdMatrix>& set, double tol, int max_iter,
                           std::optional<HpdMatrix> init) {
  if (set.empty()) throw Error(ErrorCode::InvalidArgument, "Karcher mean of an empty set");
  if (!(tol > 0.0) || max_iter < 0) {
    throw Error(ErrorCode::InvalidArgument, "tol must be positive and max_iter >= 0");
  }
  if (set.size() == 1 && !init) {
    return {set.front(), 0, 0.0, true, {0.0}};
  }
  HpdMatrix mean = init ? *init : arithmetic_mean(set);
  require_same_dim(mean.dim(), set.front().dim(), "Karcher initial point");
  KarcherState state = evaluate(mean, set);

  KarcherResult result{mean, 0, state.mean_log.frobenius_norm(), false, {state.variance}};
  while (true) {
    if (result.gradient_norm < tol) {
      result.converged = true;
      break;
    }
    if (result.iterations >= max_iter) break;
    double step = 1.0;
    bool accepted = false;
    for (int h = 0; h <= kMaxHalvings && !accepted; ++h, step *= 0.5) {
      const HermitianMatrix expo = spectral_map(state.mean_log * step, SpectralFn::exp());
      HpdMatrix candidate = validate_hpd(color(mean, expo));
      KarcherState next = evaluate(candidate, set);
      if (next.variance <= state.variance * (1.0 + kVarianceSlack)) {
        mean = std::move(candidate);
        state = std::move(next);
        accepted = true;
      }
    }
    // No step decreases the variance: stationary to working precision.
    if (!accepted) break;
    ++result.iterations;
    result.gradient_norm = state.mean_log.frobenius_norm();
    result.variance_history.push_back(state.variance);
  }
  result.mean = mean;
  return result;
}

void LabeledCovSet::add(HpdMatrix m, int label) {
  matrices.push_back(std::move(m));
  labels.push_back(label);
}

void LabeledCovSet::validate() const {
  if (matrices.size() != labels.size()) {
    throw Error(ErrorCode::InvalidArgument, "matrix and label counts differ");
  }
  if (class_count < 1) throw Error(ErrorCode::InvalidArgument, "class_count must be >= 1");
  for (std::size_t i = 0; i < matrices.size(); ++i) {
    require_same_dim(matrices.front().dim(), matrices[i].dim(), "labelled set");
    if (labels[i] < 1 || labels[i] > class_count) {
      throw Error(ErrorCode::InvalidArgument, "label " + std::to_string(labels[i]) +
                                                  " outside [1, " + std::to_string(class_count) +
                                                  "]");
    }
  }
}

ClassCenters mdm_train(const LabeledCovSet& train, MetricParams params, double tol,
                       int max_iter) {
  train.validate();
  if (!train.matrices.empty()) params.validate(train.matrices.front().dim());
  std::vector<std::vector<HpdMatrix>> groups(static_cast<std::size_t>(train.class_count));
  for (std::size_t i = 0; i < train.size(); ++i) {
    groups[static_cast<std::size_t>(train.labels[i] - 1)].push_back(train.matrices[i]);
  }
  ClassCenters out{{}, params, {}};
  for (std::size_t c = 0; c < groups.size(); ++c) {
    if (groups[c].empty()) {
      throw Error(ErrorCode::EmptyClass, "class " + std::to_string(c + 1) + " has no members");
    }
    KarcherResult fit = karcher_mean(groups[c], tol, max_iter);
    if (!fit.converged) {
      throw Error(ErrorCode::NoConvergence,
                  "class " + std::to_string(c + 1) + " mean stalled at gradient norm " +
                      std::to_string(fit.gradient_norm));
    }
    out.centers.push_back(fit.mean);
    out.fits.push_back(std::move(fit));
  }
  return out;
}

int mdm_predict(const ClassCenters& centers, const HpdMatrix& sigma_hat) {
  if (centers.centers.empty()) throw Error(ErrorCode::InvalidArgument, "no class centers");
  int best = 0;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t c = 0; c < centers.centers.size(); ++c) {
    const double d = fisher_rao_distance_sq(centers.centers[c], sigma_hat, centers.params);
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(c) + 1;
    }
  }
  return best;
}

double evaluate_accuracy(const ClassCenters& centers, const LabeledCovSet& test) {
  if (test.size() == 0) throw Error(ErrorCode::InvalidArgument, "empty test set");
  std::size_t correct = 0;
  for (std::size_t i = 0; i < test.size(); ++i) {
    if (mdm_predict(centers, test.matrices[i]) == test.labels[i]) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(test.size());
}

int MixtureScenario::dim() const {
  return class_scatters.empty() ? 0 : class_scatters.front().dim();
}

void MixtureScenario::validate() const {
  if (class_scatters.empty()) throw Error(ErrorCode::InvalidArgument, "no classes");
  if (class_models.size() != class_scatters.size()) {
    throw Error(ErrorCode::InvalidArgument, "one model per class scatter is required");
  }
  for (std::size_t c = 0; c < class_scatters.size(); ++c) {
    require_same_dim(dim(), class_scatters[c].dim(), "class scatter");
    require_same_dim(dim(), class_models[c].dim(), "class model");
  }
  if (estimator.model) require_same_dim(dim(), estimator.model->dim(), "estimator model");
  if (n < 1 || train_batches < 1 || test_batches < 1) {
    throw Error(ErrorCode::InvalidArgument, "n and batch counts must be >= 1");
  }
}

MixtureData synthetic_mixture(const MixtureScenario& scenario) {
  scenario.validate();
  const int z = scenario.class_count();
  const int per_class = scenario.train_batches + scenario.test_batches;
  const int tasks = z * per_class;
  std::vector<std::optional<HpdMatrix>> estimates(static_cast<std::size_t>(tasks));
  detail::parallel_for(tasks, scenario.workers, [&](int task) {
    const int c = task / per_class;
    const int b = task % per_class;
    SeededRng rng(derive_seed(scenario.seed, static_cast<std::uint64_t>(c)),
                  static_cast<std::uint64_t>(b));
    const SampleBatch batch =
        sample_batch(scenario.class_scatters[c], scenario.class_models[c], scenario.n, rng);
    try {
      estimates[static_cast<std::size_t>(task)] =
          apply_estimator(scenario.estimator, batch, scenario.estimator_config);
    } catch (const Error&) {
      // Left empty and counted below.
    }
  });

  MixtureData out;
  out.train.class_count = z;
  out.test.class_count = z;
  for (int task = 0; task < tasks; ++task) {
    auto& est = estimates[static_cast<std::size_t>(task)];
    if (!est) {
      ++out.dropped;
      continue;
    }
    const int c = task / per_class;
    const int b = task % per_class;
    (b < scenario.train_batches ? out.train : out.test).add(std::move(*est), c + 1);
  }
  return out;
}

}  // namespace cesgeom
