#pragma once

#include "cesgeom/classify.hpp"
#include "cesgeom/cli/config.hpp"
#include "cesgeom/icrb.hpp"

namespace cesgeom::cli {

/// Entry (i, j) is rho^(j-i) for j >= i and its conjugate below the diagonal.
/// Throws InvalidArgument for |rho| >= 1 and NotPositiveDefinite when the
/// matrix is numerically singular.
HpdMatrix build_toeplitz_scatter(int p, Complex rho);

CesModel model_from(const std::string& name, int p, double dof);

McScenario build_crb_scenario(const CrbSimConfig& config);

/// The two feature pipelines compared by classify-sim.
struct Pipeline {
  std::string name;
  EstimatorSpec estimator;
  MetricParams metric;
};

/// "gaussian": SCM with the (1,0) metric. "student_t": Student-t MLE with the
/// metric of its own Fisher coefficients.
std::vector<Pipeline> classify_pipelines(const ClassifySimConfig& config);

MixtureScenario build_mixture(const ClassifySimConfig& config, const Pipeline& pipeline);

}  // namespace cesgeom::cli
