#pragma once

// Experiment configuration documents. Each is a flat JSON object; every key is
// optional, unknown keys are rejected, and validate() runs before any work.

#include <cstdint>
#include <string>
#include <vector>

namespace cesgeom::cli {

struct CrbSimConfig {
  std::string experiment = "crb";
  int p = 10;
  /// "gaussian" or "student_t".
  std::string model = "student_t";
  double dof = 3.0;
  /// "toeplitz", "identity" or "file".
  std::string scatter = "toeplitz";
  double rho_re = 0.63639610306789277196;  // 0.9 / sqrt(2)
  double rho_im = 0.63639610306789277196;
  std::string scatter_file;
  /// Empty means {2p, 5p, 10p, 100p}.
  std::vector<int> n_grid;
  int trials = 500;
  std::uint64_t seed = 0;
  /// Any of "SCM", "MLE" (true model), "mMLE" (Student-t with mismatched_dof).
  std::vector<std::string> estimators{"SCM", "MLE", "mMLE"};
  double mismatched_dof = 10.0;
  double tolerance = 1e-9;
  int max_iterations = 1000;
  int workers = 1;
  std::string output = "crb_sim.csv";

  std::vector<int> effective_n_grid() const;
  void validate() const;
  friend bool operator==(const CrbSimConfig&, const CrbSimConfig&) = default;
};

struct ClassifySimConfig {
  std::string experiment = "classify";
  int p = 8;
  /// "separated": class scatters I and class_scale * Toeplitz(rho);
  /// "identical": both classes use I.
  std::string scenario = "separated";
  double class_scale = 4.0;
  double class_rho_re = 0.7;
  double class_rho_im = 0.0;
  /// Law of the data in both classes.
  std::string model = "student_t";
  double dof = 2.1;
  /// dof of the Student-t pipeline's estimator and metric.
  double pipeline_dof = 2.1;
  /// 0 means 10p.
  int n = 0;
  int train_batches = 20;
  int test_batches = 100;
  std::uint64_t seed = 0;
  double tolerance = 1e-9;
  int max_iterations = 1000;
  int workers = 1;
  std::string output = "classify_sim.csv";

  int effective_n() const { return n > 0 ? n : 10 * p; }
  void validate() const;
  friend bool operator==(const ClassifySimConfig&, const ClassifySimConfig&) = default;
};

struct EstimateConfig {
  std::string input;
  std::string model = "student_t";
  double dof = 3.0;
  double tolerance = 1e-9;
  int max_iterations = 1000;
  std::string output;

  void validate() const;
  friend bool operator==(const EstimateConfig&, const EstimateConfig&) = default;
};

struct MeanConfig {
  std::string input;
  double tolerance = 1e-12;
  int max_iterations = 500;
  std::string output;

  void validate() const;
  friend bool operator==(const MeanConfig&, const MeanConfig&) = default;
};

/// Parse a document; throws ConfigError (also for unknown keys) or ParseError.
CrbSimConfig parse_crb_sim(const std::string& text);
ClassifySimConfig parse_classify_sim(const std::string& text);
EstimateConfig parse_estimate(const std::string& text);
MeanConfig parse_mean(const std::string& text);

/// Serialize every field; parsing the result yields an equal config.
std::string to_text(const CrbSimConfig& config);
std::string to_text(const ClassifySimConfig& config);
std::string to_text(const EstimateConfig& config);
std::string to_text(const MeanConfig& config);

/// Whole file contents. Throws IoError.
std::string read_text_file(const std::string& path);

}  // namespace cesgeom::cli
