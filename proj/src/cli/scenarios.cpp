#include "cesgeom/cli/scenarios.hpp"

#include <cmath>

#include "cesgeom/cli/matrix_io.hpp"

namespace cesgeom::cli {

HpdMatrix build_toeplitz_scatter(int p, Complex rho) {
  if (p < 1) throw Error(ErrorCode::InvalidArgument, "p must be >= 1");
  if (!(std::abs(rho) < 1.0)) throw Error(ErrorCode::InvalidArgument, "|rho| must be < 1");
  CMatrix m(p, p);
  for (int i = 0; i < p; ++i) {
    Complex power = 1.0;
    for (int j = i; j < p; ++j) {
      m(i, j) = power;
      m(j, i) = std::conj(power);
      power *= rho;
    }
  }
  return validate_hpd(HermitianMatrix::symmetrized(m));
}

CesModel model_from(const std::string& name, int p, double dof) {
  if (name == "gaussian") return CesModel::gaussian(p);
  if (name == "student_t") return CesModel::student_t(p, dof);
  throw Error(ErrorCode::ConfigError, "unknown model '" + name + "'");
}

McScenario build_crb_scenario(const CrbSimConfig& config) {
  config.validate();
  const int p = config.p;
  std::optional<HpdMatrix> sigma;
  if (config.scatter == "toeplitz") {
    sigma = build_toeplitz_scatter(p, Complex(config.rho_re, config.rho_im));
  } else if (config.scatter == "identity") {
    sigma = HpdMatrix::identity(p);
  } else {
    std::vector<HpdMatrix> read = parse_hpd_matrices(read_text_file(config.scatter_file));
    if (read.size() != 1) {
      throw Error(ErrorCode::ConfigError, "scatter_file must hold exactly one matrix");
    }
    require_same_dim(p, read.front().dim(), "scatter_file");
    sigma = read.front();
  }
  const CesModel truth = model_from(config.model, p, config.dof);
  std::vector<EstimatorSpec> estimators;
  for (const auto& tag : config.estimators) {
    if (tag == "SCM") {
      estimators.push_back(EstimatorSpec::scm());
    } else if (tag == "MLE") {
      estimators.push_back(EstimatorSpec::mle("MLE", truth));
    } else {
      estimators.push_back(EstimatorSpec::mle("mMLE", CesModel::student_t(p, config.mismatched_dof)));
    }
  }
  EstimationConfig solver;
  solver.tolerance = config.tolerance;
  solver.max_iterations = config.max_iterations;
  return McScenario{*sigma,  truth,          std::move(estimators), config.effective_n_grid(),
                    config.trials, config.seed, config.workers,   solver};
}

std::vector<Pipeline> classify_pipelines(const ClassifySimConfig& config) {
  const int p = config.p;
  const CesModel t = CesModel::student_t(p, config.pipeline_dof);
  return {
      Pipeline{"gaussian", EstimatorSpec::scm(), MetricParams{}},
      Pipeline{"student_t", EstimatorSpec::mle("MLE", t), coefficients(t).metric()},
  };
}

MixtureScenario build_mixture(const ClassifySimConfig& config, const Pipeline& pipeline) {
  config.validate();
  const int p = config.p;
  MixtureScenario s;
  const HpdMatrix first = HpdMatrix::identity(p);
  if (config.scenario == "identical") {
    s.class_scatters = {first, first};
  } else {
    const HpdMatrix toeplitz =
        build_toeplitz_scatter(p, Complex(config.class_rho_re, config.class_rho_im));
    s.class_scatters = {first, validate_hpd(toeplitz.hermitian() * config.class_scale)};
  }
  const CesModel law = model_from(config.model, p, config.dof);
  s.class_models = {law, law};
  s.n = config.effective_n();
  s.train_batches = config.train_batches;
  s.test_batches = config.test_batches;
  s.estimator = pipeline.estimator;
  s.estimator_config.tolerance = config.tolerance;
  s.estimator_config.max_iterations = config.max_iterations;
  s.seed = config.seed;
  s.workers = config.workers;
  return s;
}

}  // namespace cesgeom::cli
