#include "cesgeom/cli/runners.hpp"

#include <cmath>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "cesgeom/classify.hpp"
#include "cesgeom/cli/matrix_io.hpp"
#include "cesgeom/cli/scenarios.hpp"
#include "cesgeom/estimation.hpp"

namespace cesgeom::cli {

namespace {

template <typename Config>
void apply(Config& config, const RunOptions& options) {
  if (options.out) config.output = *options.out;
}

template <typename Config>
void apply_sim(Config& config, const RunOptions& options) {
  apply(config, options);
  if (options.seed) config.seed = *options.seed;
  if (options.workers) config.workers = *options.workers;
}

}  // namespace

std::string crb_csv(const std::string& experiment, const McMseTable& table) {
  std::string out = std::string(kCrbCsvHeader) + "\n";
  for (const auto& row : table.rows) {
    out += experiment + "," + row.estimator + "," + std::to_string(row.n) + "," +
           std::string(to_string(row.distance)) + "," + format_double(row.mean_sq_dist) + "," +
           format_double(row.std_err) + "," + format_double(row.bound) + "," +
           std::to_string(row.trials) + "," + std::to_string(row.failures) + "\n";
  }
  return out;
}

void run_crb_sim(CrbSimConfig config, const RunOptions& options, std::ostream& console) {
  apply_sim(config, options);
  config.validate();
  const McMseTable table = mc_mse_experiment(build_crb_scenario(config));
  write_file_atomic(config.output, crb_csv(config.experiment, table));
  if (options.quiet) return;
  console << "crb-sim: p=" << config.p << " model=" << config.model << " trials=" << config.trials
          << " seed=" << config.seed << "\n";
  for (const auto& row : table.rows) {
    console << "  " << row.estimator << " n=" << row.n << " " << to_string(row.distance)
            << " mse=" << format_double(row.mean_sq_dist) << " bound=" << format_double(row.bound)
            << " failures=" << row.failures << "\n";
  }
  console << "wrote " << table.rows.size() << " rows to " << config.output << "\n";
}

void run_classify_sim(ClassifySimConfig config, const RunOptions& options,
                      std::ostream& console) {
  apply_sim(config, options);
  config.validate();
  std::string csv = std::string(kClassifyCsvHeader) + "\n";
  std::ostringstream summary;
  for (const Pipeline& pipeline : classify_pipelines(config)) {
    const MixtureData data = synthetic_mixture(build_mixture(config, pipeline));
    const ClassCenters centers = mdm_train(data.train, pipeline.metric);
    const double acc = evaluate_accuracy(centers, data.test);
    const double count = static_cast<double>(data.test.size());
    const double se = std::sqrt(acc * (1.0 - acc) / count);
    csv += config.experiment + "," + pipeline.name + "," + std::to_string(config.effective_n()) +
           "," + format_double(pipeline.metric.alpha) + "," + format_double(pipeline.metric.beta) +
           "," + format_double(acc) + "," + format_double(se) + "," +
           std::to_string(data.test.size()) + "," + std::to_string(data.dropped) + "\n";
    summary << "  " << pipeline.name << " accuracy=" << format_double(acc) << " (+/- "
            << format_double(se) << ", " << data.test.size() << " test batches, " << data.dropped
            << " dropped)\n";
  }
  write_file_atomic(config.output, csv);
  if (options.quiet) return;
  console << "classify-sim: p=" << config.p << " scenario=" << config.scenario
          << " n=" << config.effective_n() << " seed=" << config.seed << "\n"
          << summary.str() << "wrote " << config.output << "\n";
}

void run_estimate(EstimateConfig config, const RunOptions& options, std::ostream& console) {
  apply(config, options);
  config.validate();
  const SampleBatch batch = parse_batch(read_text_file(config.input));
  const CesModel model = model_from(config.model, batch.dim(), config.dof);
  EstimationConfig solver;
  solver.tolerance = config.tolerance;
  solver.max_iterations = config.max_iterations;
  const EstimationResult r = mle_fixed_point(batch, model, solver);
  const double residual = relative_frobenius_error(
      fixed_point_map(batch, r.estimate, model).matrix(), r.estimate.matrix());
  const std::string text = format_hpd(r.estimate);
  if (!config.output.empty()) write_file_atomic(config.output, text);
  if (options.quiet) return;
  console << text << "iterations " << r.iterations << "\nconverged "
          << (r.converged ? "true" : "false") << "\nfixed_point_residual "
          << format_double(residual) << "\n";
}

void run_mean(MeanConfig config, const RunOptions& options, std::ostream& console) {
  apply(config, options);
  config.validate();
  const std::vector<HpdMatrix> set = parse_hpd_matrices(read_text_file(config.input));
  const KarcherResult r = karcher_mean(set, config.tolerance, config.max_iterations);
  const std::string text = format_hpd(r.mean);
  if (!config.output.empty()) write_file_atomic(config.output, text);
  if (options.quiet) return;
  console << text << "iterations " << r.iterations << "\nconverged "
          << (r.converged ? "true" : "false") << "\ngradient_norm "
          << format_double(r.gradient_norm) << "\n";
}

int run_cli(int argc, char** argv, std::ostream& console, std::ostream& diagnostics) {
  CLI::App app{"Fisher-Rao geometry of CES distributions: experiments and tools"};
  app.require_subcommand(1);

  std::string config_path;
  std::uint64_t seed = 0;
  std::string out;
  int workers = 0;
  bool quiet = false;

  auto add_common = [&](CLI::App* sub, bool simulation) {
    sub->add_option("--config", config_path, "JSON config document")->required();
    sub->add_option("--out", out, "output file (overrides the config)");
    sub->add_flag("--quiet", quiet, "suppress the console summary");
    if (simulation) {
      sub->add_option("--seed", seed, "RNG seed (overrides the config)");
      sub->add_option("--workers", workers, "worker threads (overrides the config)")
          ->check(CLI::PositiveNumber);
    } else {
      sub->add_option("--seed", seed, "accepted for uniformity; unused");
    }
  };
  CLI::App* crb = app.add_subcommand("crb-sim", "Monte-Carlo MSE against intrinsic bounds");
  CLI::App* cls = app.add_subcommand("classify-sim", "MDM classification on synthetic data");
  CLI::App* est = app.add_subcommand("estimate", "scatter MLE of a batch file");
  CLI::App* mean = app.add_subcommand("mean", "Karcher mean of a matrix file");
  add_common(crb, true);
  add_common(cls, true);
  add_common(est, false);
  add_common(mean, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, console, diagnostics);
    return code;
  }

  RunOptions options;
  options.quiet = quiet;
  for (CLI::App* sub : {crb, cls, est, mean}) {
    if (!sub->parsed()) continue;
    if (sub->count("--seed") > 0) options.seed = seed;
    if (sub->count("--out") > 0) options.out = out;
    const CLI::Option* w = sub->get_option_no_throw("--workers");
    if (w != nullptr && w->count() > 0) options.workers = workers;
  }

  try {
    const std::string text = read_text_file(config_path);
    if (crb->parsed()) {
      run_crb_sim(parse_crb_sim(text), options, console);
    } else if (cls->parsed()) {
      run_classify_sim(parse_classify_sim(text), options, console);
    } else if (est->parsed()) {
      run_estimate(parse_estimate(text), options, console);
    } else {
      run_mean(parse_mean(text), options, console);
    }
  } catch (const Error& e) {
    diagnostics << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    diagnostics << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}

}  // namespace cesgeom::cli
