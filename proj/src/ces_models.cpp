#include "cesgeom/ces_models.hpp"

#include <cmath>
#include <string>

namespace cesgeom {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

CesModel::CesModel(int dim, Generator generator) : dim_(dim), generator_(generator) {
  if (dim < 1) {
    throw Error(ErrorCode::InvalidArgument, "model dimension must be >= 1");
  }
  if (const auto* t = std::get_if<StudentT>(&generator_)) {
    if (!(t->dof > 0.0) || !std::isfinite(t->dof)) {
      throw Error(ErrorCode::InvalidArgument, "Student-t dof must be positive and finite");
    }
  }
}

CesCoefficients coefficients(const CesModel& model) {
  const double p = model.dim();
  return std::visit(overloaded{
                        [](const Gaussian&) { return CesCoefficients{1.0, 0.0}; },
                        [p](const StudentT& t) {
                          const double k = t.dof + p;
                          return CesCoefficients{k / (k + 1.0), -1.0 / (k + 1.0)};
                        },
                    },
                    model.generator());
}

double psi(const CesModel& model, double t) { return -phi(model, t); }

double phi(const CesModel& model, double t) {
  const double p = model.dim();
  return std::visit(overloaded{
                        [](const Gaussian&) { return -1.0; },
                        [p, t](const StudentT& s) { return -(s.dof + p) / (s.dof + t); },
                    },
                    model.generator());
}

double phi_prime(const CesModel& model, double t) {
  const double p = model.dim();
  return std::visit(overloaded{
                        [](const Gaussian&) { return 0.0; },
                        [p, t](const StudentT& s) {
                          const double den = s.dof + t;
                          return (s.dof + p) / (den * den);
                        },
                    },
                    model.generator());
}

double log_g(const CesModel& model, double t) {
  const double p = model.dim();
  return std::visit(overloaded{
                        [t](const Gaussian&) { return -t; },
                        [p, t](const StudentT& s) { return -(s.dof + p) * std::log1p(t / s.dof); },
                    },
                    model.generator());
}

SampleBatch::SampleBatch(CMatrix samples) : samples_(std::move(samples)) {
  if (samples_.rows() < 1 || samples_.cols() < 1) {
    throw Error(ErrorCode::InvalidArgument, "sample batch must be non-empty");
  }
  if (!samples_.allFinite()) {
    throw Error(ErrorCode::DomainError, "sample batch has non-finite entries");
  }
}

RVector quadratic_forms(const SampleBatch& batch, const HpdMatrix& sigma) {
  require_same_dim(batch.dim(), sigma.dim(), "quadratic_forms");
  const CMatrix white = sigma.inv_sqrt() * batch.samples();
  return white.colwise().squaredNorm().transpose();
}

double neg_log_likelihood(const SampleBatch& batch, const HpdMatrix& sigma,
                          const CesModel& model) {
  require_same_dim(batch.dim(), model.dim(), "neg_log_likelihood model");
  const RVector q = quadratic_forms(batch, sigma);
  double sum = 0.0;
  for (Eigen::Index i = 0; i < q.size(); ++i) {
    sum += log_g(model, q(i));
  }
  return batch.count() * sigma.log_det() - sum;
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
  return splitmix64(splitmix64(splitmix64(seed) ^ a) ^ b);
}

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream)
    : seed_(seed), stream_(stream), engine_(derive_seed(seed, stream)), normal_(0.0, 1.0) {}

double SeededRng::gamma(double shape) {
  std::gamma_distribution<double> dist(shape, 1.0);
  return dist(engine_);
}

Complex SeededRng::complex_normal() {
  constexpr double kScale = 0.70710678118654752440;
  const double re = standard_normal();
  const double im = standard_normal();
  return {kScale * re, kScale * im};
}

CVector sample_uniform_sphere(int p, SeededRng& rng) {
  CVector z(p);
  for (int i = 0; i < p; ++i) {
    z(i) = rng.complex_normal();
  }
  const double norm = z.norm();
  // A zero draw has probability zero; redraw rather than divide by it.
  if (norm == 0.0) {
    return sample_uniform_sphere(p, rng);
  }
  return z / norm;
}

double sample_second_order_modular(const CesModel& model, SeededRng& rng) {
  const double p = model.dim();
  return std::visit(overloaded{
                        [&](const Gaussian&) { return rng.gamma(p); },
                        [&](const StudentT& t) {
                          const double num = rng.gamma(p);
                          const double den = rng.gamma(t.dof) / t.dof;
                          return num / den;
                        },
                    },
                    model.generator());
}

SampleBatch sample_batch(const HpdMatrix& sigma, int n, SeededRng& rng,
                         const ModularSampler& modular) {
  if (n < 1) {
    throw Error(ErrorCode::InvalidArgument, "sample count must be >= 1");
  }
  const int p = sigma.dim();
  CMatrix x(p, n);
  for (int i = 0; i < n; ++i) {
    const double q = modular(rng);
    const CVector u = sample_uniform_sphere(p, rng);
    x.col(i) = std::sqrt(q) * u;
  }
  return SampleBatch(sigma.sqrt() * x);
}

SampleBatch sample_batch(const HpdMatrix& sigma, const CesModel& model, int n, SeededRng& rng) {
  require_same_dim(sigma.dim(), model.dim(), "sample_batch");
  return sample_batch(sigma, n, rng,
                      [&model](SeededRng& r) { return sample_second_order_modular(model, r); });
}

McEstimate fim_inner_mc(const HpdMatrix& sigma, const HermitianMatrix& xi,
                        const HermitianMatrix& eta, const CesModel& model, int n_draws,
                        SeededRng& rng) {
  require_same_dim(sigma.dim(), model.dim(), "fim_inner_mc model");
  require_same_dim(sigma.dim(), xi.dim(), "fim_inner_mc xi");
  require_same_dim(sigma.dim(), eta.dim(), "fim_inner_mc eta");
  if (n_draws < 10000) {
    throw Error(ErrorCode::InvalidArgument, "fim_inner_mc needs at least 1e4 draws");
  }
  const int p = sigma.dim();
  // Score of one sample: -tr(S^-1 xi) - phi(q) w^H xi w with w = S^-1 x.
  // Whitened: x = sqrt(Q) S^1/2 u gives q = Q and S^1/2 w = sqrt(Q) u.
  const CMatrix a = whiten(sigma, xi).matrix();
  const CMatrix b = whiten(sigma, eta).matrix();
  const double tr_a = a.diagonal().real().sum();
  const double tr_b = b.diagonal().real().sum();
  double mean = 0.0;
  double m2 = 0.0;
  for (int k = 0; k < n_draws; ++k) {
    const double q = sample_second_order_modular(model, rng);
    const CVector u = sample_uniform_sphere(p, rng);
    const double f = phi(model, q) * q;
    const double sa = -tr_a - f * u.dot(a * u).real();
    const double sb = -tr_b - f * u.dot(b * u).real();
    const double v = sa * sb;
    const double delta = v - mean;
    mean += delta / (k + 1);
    m2 += delta * (v - mean);
  }
  const double var = m2 / (n_draws - 1);
  return {mean, std::sqrt(var / n_draws)};
}

}  // namespace cesgeom
