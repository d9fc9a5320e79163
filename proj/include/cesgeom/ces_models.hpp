#pragma once

// Circular complex elliptically symmetric laws: x = sqrt(Q) Sigma^{1/2} u with
// u uniform on the complex unit sphere and Q the second-order modular variate.
// Two density generators are provided, Gaussian g(t) = exp(-t) and Student-t
// g(t) = (1 + t/d)^-(d+p).

#include <cstdint>
#include <functional>
#include <random>
#include <variant>

#include "cesgeom/geometry.hpp"
#include "cesgeom/matrix_core.hpp"

namespace cesgeom {

struct Gaussian {
  friend bool operator==(const Gaussian&, const Gaussian&) = default;
};

struct StudentT {
  double dof;
  friend bool operator==(const StudentT&, const StudentT&) = default;
};

using Generator = std::variant<Gaussian, StudentT>;

/// Fisher metric coefficients of a generator. beta_g == alpha_g - 1.
struct CesCoefficients {
  double alpha_g;
  double beta_g;

  MetricParams metric() const { return {alpha_g, beta_g}; }
};

class CesModel {
 public:
  /// Throws InvalidArgument for p < 1 or a non-positive dof.
  CesModel(int dim, Generator generator);

  static CesModel gaussian(int p) { return CesModel(p, Gaussian{}); }
  static CesModel student_t(int p, double dof) { return CesModel(p, StudentT{dof}); }

  int dim() const { return dim_; }
  const Generator& generator() const { return generator_; }
  bool is_gaussian() const { return std::holds_alternative<Gaussian>(generator_); }

  friend bool operator==(const CesModel&, const CesModel&) = default;

 private:
  int dim_;
  Generator generator_;
};

CesCoefficients coefficients(const CesModel& model);

/// psi = -g'/g, the fixed-point weight.
double psi(const CesModel& model, double t);
/// phi = g'/g.
double phi(const CesModel& model, double t);
double phi_prime(const CesModel& model, double t);
/// log g(t), without the normalizing constant.
double log_g(const CesModel& model, double t);

/// n samples of dimension p, stored as the columns of a p x n matrix.
class SampleBatch {
 public:
  /// Throws InvalidArgument when empty or non-finite.
  explicit SampleBatch(CMatrix samples);

  int dim() const { return static_cast<int>(samples_.rows()); }
  int count() const { return static_cast<int>(samples_.cols()); }
  const CMatrix& samples() const { return samples_; }
  auto sample(int i) const { return samples_.col(i); }

 private:
  CMatrix samples_;
};

/// x_i^H Sigma^-1 x_i for every sample.
RVector quadratic_forms(const SampleBatch& batch, const HpdMatrix& sigma);

/// n log det Sigma - sum_i log g(x_i^H Sigma^-1 x_i).
double neg_log_likelihood(const SampleBatch& batch, const HpdMatrix& sigma, const CesModel& model);

/// mt19937_64 keyed by (seed, stream). Distinct streams are independent for
/// practical purposes; equal keys reproduce identical draws.
class SeededRng {
 public:
  SeededRng(std::uint64_t seed, std::uint64_t stream);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream() const { return stream_; }

  double standard_normal() { return normal_(engine_); }
  /// Gamma(shape, scale = 1).
  double gamma(double shape);
  /// Standard complex normal: real and imaginary parts are N(0, 1/2).
  Complex complex_normal();
  std::mt19937_64& engine() { return engine_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_;
};

/// Derives a 64-bit key from a base seed and a list of indices.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b = 0);

CVector sample_uniform_sphere(int p, SeededRng& rng);
double sample_second_order_modular(const CesModel& model, SeededRng& rng);

using ModularSampler = std::function<double(SeededRng&)>;

/// Throws InvalidArgument for n < 1, DimensionMismatch for p != sigma.dim().
SampleBatch sample_batch(const HpdMatrix& sigma, const CesModel& model, int n, SeededRng& rng);
/// Same representation with a caller-supplied modular variate.
SampleBatch sample_batch(const HpdMatrix& sigma, int n, SeededRng& rng,
                         const ModularSampler& modular);

struct McEstimate {
  double estimate;
  double std_error;
};

/// Monte-Carlo estimate of E[D l(x)[xi] D l(x)[eta]] for a single sample.
/// Needs n_draws >= 1e4.
McEstimate fim_inner_mc(const HpdMatrix& sigma, const HermitianMatrix& xi,
                        const HermitianMatrix& eta, const CesModel& model, int n_draws,
                        SeededRng& rng);

}  // namespace cesgeom
