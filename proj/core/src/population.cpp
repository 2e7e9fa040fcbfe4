#include "levylab/population.hpp"

#include <cmath>
#include <exception>
#include <numeric>

#include "levylab/error.hpp"
#include "levylab/matrix_model.hpp"
#include "levylab/stable_random.hpp"

namespace levylab {

namespace {

void check_config(cplx z, double alpha, const PopulationConfig& cfg) {
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
  if (!(z.imag() > 0.0)) throw DomainError("population dynamics needs Im z > 0");
  if (cfg.pool_size < 2 || cfg.K < 1 || cfg.sweeps < 1) throw DomainError("invalid population config");
}

cplx pool_mean(const std::vector<cplx>& v) {
  cplx s = 0.0;
  for (const auto& x : v) s += x;
  return s / static_cast<double>(v.size());
}

}  // namespace

double imag_moment(const std::vector<cplx>& samples, double alpha) {
  double s = 0.0;
  for (const auto& x : samples) s += std::pow(x.imag(), alpha / 2.0);
  return s / static_cast<double>(samples.size());
}

PopulationPool population_dynamics(cplx z, double alpha, const PopulationConfig& cfg) {
  check_config(z, alpha, cfg);
  const auto n = static_cast<std::size_t>(cfg.pool_size);
  const auto K = static_cast<std::size_t>(cfg.K);
  PopulationPool pool;
  pool.z = z;
  pool.alpha = alpha;
  pool.K = cfg.K;
  pool.samples.assign(n, -1.0 / z);
  std::vector<cplx> next(n);
  std::vector<double> xi(n * K);
  std::vector<double> tail(n);
  std::vector<std::uint32_t> index(n * K);

  const int budget = cfg.sweeps + cfg.max_extra_sweeps;
  double previous = imag_moment(pool.samples, alpha);
  for (int sweep = 0; sweep < budget; ++sweep) {
    RngStream rng = derive_stream(cfg.seed, static_cast<std::uint64_t>(sweep));
    std::uniform_int_distribution<std::uint32_t> pick(0, static_cast<std::uint32_t>(n - 1));
    for (std::size_t i = 0; i < n; ++i) {
      const PoissonWeights w = poisson_weights(alpha, cfg.K, rng);
      std::copy(w.xi.begin(), w.xi.end(), xi.begin() + static_cast<std::ptrdiff_t>(i * K));
      tail[i] = cfg.compensate_tail ? w.tail_mean() : 0.0;
      for (std::size_t k = 0; k < K; ++k) index[i * K + k] = pick(rng);
    }
    const cplx mean = pool_mean(pool.samples);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(n); ++ii) {
      const auto i = static_cast<std::size_t>(ii);
      cplx s = z + tail[i] * mean;
      for (std::size_t k = 0; k < K; ++k) s += xi[i * K + k] * pool.samples[index[i * K + k]];
      next[i] = -1.0 / s;
    }
    pool.samples.swap(next);
    pool.iterations = sweep + 1;
    const double m = imag_moment(pool.samples, alpha);
    pool.moment_history.push_back(m);
    const bool settled = std::abs(m - previous) <= cfg.check_tolerance * std::abs(m);
    previous = m;
    if (pool.iterations >= cfg.sweeps && settled) {
      pool.converged = true;
      break;
    }
  }
  return pool;
}

std::vector<PopulationPool> population_replicates(cplx z, double alpha, int replicates, const PopulationConfig& cfg) {
  if (replicates < 2) throw DomainError("need at least two replicate pools");
  std::vector<PopulationPool> out;
  for (int r = 0; r < replicates; ++r) {
    PopulationConfig c = cfg;
    c.seed = mix64(cfg.seed ^ mix64(static_cast<std::uint64_t>(r) + 0x5eed));
    out.push_back(population_dynamics(z, alpha, c));
  }
  return out;
}

Estimate replicate_estimate(const std::vector<PopulationPool>& replicates, const std::function<double(cplx)>& fn) {
  if (replicates.size() < 2) throw DomainError("need at least two replicate pools");
  std::vector<double> means;
  for (const auto& p : replicates) {
    double s = 0.0;
    for (const auto& x : p.samples) s += fn(x);
    means.push_back(s / static_cast<double>(p.samples.size()));
  }
  const double r = static_cast<double>(means.size());
  const double mean = std::accumulate(means.begin(), means.end(), 0.0) / r;
  double var = 0.0;
  for (double m : means) var += (m - mean) * (m - mean);
  var /= r - 1.0;
  return {mean, std::sqrt(var / r)};
}

HomogeneousFn population_gamma(const std::vector<PopulationPool>& replicates, const std::vector<double>& thetas) {
  if (replicates.empty()) throw DomainError("no pools");
  const double alpha = replicates.front().alpha;
  const double g = std::tgamma(1.0 - alpha / 2.0);
  std::vector<cplx> values(thetas.size(), 0.0);
  std::size_t total = 0;
  for (const auto& p : replicates) {
    total += p.samples.size();
    for (const auto& r : p.samples) {
      const cplx w = cplx(0.0, -1.0) * r;
      for (std::size_t j = 0; j < thetas.size(); ++j) {
        values[j] += right_half_pow(dot(w, std::polar(1.0, thetas[j])), alpha / 2.0);
      }
    }
  }
  for (auto& v : values) v *= g / static_cast<double>(total);
  return HomogeneousFn(alpha / 2.0, thetas, std::move(values));
}

ClosureCheck lk_closure(const PopulationPool& pool, double w, int draws, int K, std::uint64_t seed) {
  if (!(w > 0.0) || draws < 2) throw DomainError("invalid closure check");
  const double alpha = pool.alpha;
  const double half = alpha / 2.0;
  const std::size_t n = pool.samples.size();
  cplx mean_w = 0.0, mean_pow = 0.0;
  for (const auto& r : pool.samples) {
    const cplx W = cplx(0.0, -1.0) * r;
    mean_w += W;
    mean_pow += std::pow(W, half);
  }
  mean_w /= static_cast<double>(n);
  mean_pow /= static_cast<double>(n);

  RngStream rng = derive_stream(seed, 0x1c);
  std::uniform_int_distribution<std::size_t> pick(0, n - 1);
  cplx sum = 0.0;
  double sq = 0.0;
  for (int d = 0; d < draws; ++d) {
    const PoissonWeights xi = poisson_weights(alpha, K, rng);
    cplx s = xi.tail_mean() * mean_w;
    for (double x : xi.xi) s += x * (cplx(0.0, -1.0) * pool.samples[pick(rng)]);
    const cplx e = std::exp(-w * s);
    sum += e;
    sq += std::norm(e);
  }
  ClosureCheck out;
  out.w = w;
  out.lhs = sum / static_cast<double>(draws);
  const double var = (sq / draws - std::norm(out.lhs)) * draws / (draws - 1.0);
  out.lhs_se = std::sqrt(std::max(0.0, var) / draws);
  out.rhs = std::exp(-std::tgamma(1.0 - half) * std::pow(w, half) * mean_pow);
  return out;
}

}  // namespace levylab
