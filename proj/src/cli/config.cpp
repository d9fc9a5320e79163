#include "cesgeom/cli/config.hpp"

#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include <json.hpp>

#include "cesgeom/error.hpp"

namespace cesgeom::cli {

namespace {

using nlohmann::json;

void config_error(const std::string& msg) { throw Error(ErrorCode::ConfigError, msg); }

/// Binds each key of a flat document to a field. Reading rejects unknown keys
/// and type mismatches; writing emits every bound field.
class Binder {
 public:
  template <typename T>
  Binder& bind(const std::string& key, T& field) {
    readers_[key] = [&field, key](const json& v) {
      try {
        field = v.get<T>();
      } catch (const json::exception& e) {
        config_error("key '" + key + "': " + e.what());
      }
    };
    writers_.emplace_back([&field, key](json& doc) { doc[key] = field; });
    return *this;
  }

  void read(const std::string& text) {
    json doc;
    try {
      doc = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(ErrorCode::ParseError, std::string("config is not valid JSON: ") + e.what());
    }
    if (!doc.is_object()) config_error("config must be a JSON object");
    for (const auto& [key, value] : doc.items()) {
      auto it = readers_.find(key);
      if (it == readers_.end()) config_error("unknown key '" + key + "'");
      it->second(value);
    }
  }

  std::string write() const {
    json doc = json::object();
    for (const auto& w : writers_) w(doc);
    return doc.dump(2) + "\n";
  }

 private:
  std::map<std::string, std::function<void(const json&)>> readers_;
  std::vector<std::function<void(json&)>> writers_;
};

void bind(Binder& b, CrbSimConfig& c) {
  b.bind("experiment", c.experiment)
      .bind("p", c.p)
      .bind("model", c.model)
      .bind("dof", c.dof)
      .bind("scatter", c.scatter)
      .bind("rho_re", c.rho_re)
      .bind("rho_im", c.rho_im)
      .bind("scatter_file", c.scatter_file)
      .bind("n_grid", c.n_grid)
      .bind("trials", c.trials)
      .bind("seed", c.seed)
      .bind("estimators", c.estimators)
      .bind("mismatched_dof", c.mismatched_dof)
      .bind("tolerance", c.tolerance)
      .bind("max_iterations", c.max_iterations)
      .bind("workers", c.workers)
      .bind("output", c.output);
}

void bind(Binder& b, ClassifySimConfig& c) {
  b.bind("experiment", c.experiment)
      .bind("p", c.p)
      .bind("scenario", c.scenario)
      .bind("class_scale", c.class_scale)
      .bind("class_rho_re", c.class_rho_re)
      .bind("class_rho_im", c.class_rho_im)
      .bind("model", c.model)
      .bind("dof", c.dof)
      .bind("pipeline_dof", c.pipeline_dof)
      .bind("n", c.n)
      .bind("train_batches", c.train_batches)
      .bind("test_batches", c.test_batches)
      .bind("seed", c.seed)
      .bind("tolerance", c.tolerance)
      .bind("max_iterations", c.max_iterations)
      .bind("workers", c.workers)
      .bind("output", c.output);
}

void bind(Binder& b, EstimateConfig& c) {
  b.bind("input", c.input)
      .bind("model", c.model)
      .bind("dof", c.dof)
      .bind("tolerance", c.tolerance)
      .bind("max_iterations", c.max_iterations)
      .bind("output", c.output);
}

void bind(Binder& b, MeanConfig& c) {
  b.bind("input", c.input)
      .bind("tolerance", c.tolerance)
      .bind("max_iterations", c.max_iterations)
      .bind("output", c.output);
}

template <typename Config>
Config parse(const std::string& text) {
  Config c;
  Binder b;
  bind(b, c);
  b.read(text);
  c.validate();
  return c;
}

template <typename Config>
std::string serialize(const Config& config) {
  Config copy = config;
  Binder b;
  bind(b, copy);
  return b.write();
}

void check_model(const std::string& model, double dof, const char* what) {
  if (model != "gaussian" && model != "student_t") {
    config_error(std::string(what) + " must be 'gaussian' or 'student_t', got '" + model + "'");
  }
  if (model == "student_t" && !(dof > 0.0 && std::isfinite(dof))) {
    config_error("dof must be positive");
  }
}

void check_solver(double tolerance, int max_iterations) {
  if (!(tolerance > 0.0)) config_error("tolerance must be positive");
  if (max_iterations < 1) config_error("max_iterations must be >= 1");
}

}  // namespace

std::vector<int> CrbSimConfig::effective_n_grid() const {
  if (!n_grid.empty()) return n_grid;
  return {2 * p, 5 * p, 10 * p, 100 * p};
}

void CrbSimConfig::validate() const {
  if (p < 2) config_error("p must be >= 2");
  check_model(model, dof, "model");
  if (scatter != "toeplitz" && scatter != "identity" && scatter != "file") {
    config_error("scatter must be 'toeplitz', 'identity' or 'file'");
  }
  if (scatter == "file" && scatter_file.empty()) config_error("scatter 'file' needs scatter_file");
  if (scatter == "toeplitz" && !(std::hypot(rho_re, rho_im) < 1.0)) {
    config_error("|rho| must be < 1");
  }
  for (int n : effective_n_grid()) {
    if (n <= p) config_error("every n in n_grid must exceed p (got " + std::to_string(n) + ")");
  }
  if (trials < 1) config_error("trials must be >= 1");
  if (estimators.empty()) config_error("estimators must be non-empty");
  for (const auto& e : estimators) {
    if (e != "SCM" && e != "MLE" && e != "mMLE") {
      config_error("unknown estimator '" + e + "' (expected SCM, MLE or mMLE)");
    }
  }
  if (!(mismatched_dof > 0.0)) config_error("mismatched_dof must be positive");
  check_solver(tolerance, max_iterations);
  if (workers < 1) config_error("workers must be >= 1");
  if (output.empty()) config_error("output must be set");
}

void ClassifySimConfig::validate() const {
  if (p < 2) config_error("p must be >= 2");
  if (scenario != "separated" && scenario != "identical") {
    config_error("scenario must be 'separated' or 'identical'");
  }
  if (!(class_scale > 0.0)) config_error("class_scale must be positive");
  if (!(std::hypot(class_rho_re, class_rho_im) < 1.0)) config_error("|class_rho| must be < 1");
  check_model(model, dof, "model");
  if (!(pipeline_dof > 0.0)) config_error("pipeline_dof must be positive");
  if (effective_n() <= p) config_error("n must exceed p");
  if (train_batches < 1 || test_batches < 1) config_error("batch counts must be >= 1");
  check_solver(tolerance, max_iterations);
  if (workers < 1) config_error("workers must be >= 1");
  if (output.empty()) config_error("output must be set");
}

void EstimateConfig::validate() const {
  if (input.empty()) config_error("input must be set");
  check_model(model, dof, "model");
  check_solver(tolerance, max_iterations);
}

void MeanConfig::validate() const {
  if (input.empty()) config_error("input must be set");
  check_solver(tolerance, max_iterations);
}

CrbSimConfig parse_crb_sim(const std::string& text) { return parse<CrbSimConfig>(text); }
ClassifySimConfig parse_classify_sim(const std::string& text) {
  return parse<ClassifySimConfig>(text);
}
EstimateConfig parse_estimate(const std::string& text) { return parse<EstimateConfig>(text); }
MeanConfig parse_mean(const std::string& text) { return parse<MeanConfig>(text); }

std::string to_text(const CrbSimConfig& config) { return serialize(config); }
std::string to_text(const ClassifySimConfig& config) { return serialize(config); }
std::string to_text(const EstimateConfig& config) { return serialize(config); }
std::string to_text(const MeanConfig& config) { return serialize(config); }

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace cesgeom::cli
