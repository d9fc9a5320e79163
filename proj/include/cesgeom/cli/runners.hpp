#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>

#include "cesgeom/cli/config.hpp"
#include "cesgeom/icrb.hpp"

namespace cesgeom::cli {

inline constexpr const char* kCrbCsvHeader =
    "experiment,estimator,n,distance,mean_sq_dist,std_err,bound,trials,failures";
inline constexpr const char* kClassifyCsvHeader =
    "experiment,pipeline,n,metric_alpha,metric_beta,accuracy,std_err,test_count,failures";

/// Command-line overrides applied on top of a config document.
struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<std::string> out;
  std::optional<int> workers;
  bool quiet = false;
};

std::string crb_csv(const std::string& experiment, const McMseTable& table);

/// Each runner validates, computes, then writes its output file once. Errors
/// propagate as cesgeom::Error and leave no output file.
void run_crb_sim(CrbSimConfig config, const RunOptions& options, std::ostream& console);
void run_classify_sim(ClassifySimConfig config, const RunOptions& options, std::ostream& console);
void run_estimate(EstimateConfig config, const RunOptions& options, std::ostream& console);
void run_mean(MeanConfig config, const RunOptions& options, std::ostream& console);

/// Full command line: `<prog> <subcommand> --config <path> [--seed N]
/// [--out PATH] [--workers K] [--quiet]`. Returns the process exit code.
int run_cli(int argc, char** argv, std::ostream& console, std::ostream& diagnostics);

}  // namespace cesgeom::cli
