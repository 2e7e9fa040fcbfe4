#include "levylab/matrix_model.hpp"

#include <lapacke.h>

#include <cmath>
#include <cstdio>
#include <memory>

#include "levylab/error.hpp"
#include "levylab/stable_random.hpp"

namespace levylab {

LevyMatrix build_levy_matrix(int n, double alpha, std::uint64_t seed) {
  if (n < 1) throw DomainError("matrix dimension must be positive");
  const StableLaw law(alpha);
  LevyMatrix out;
  out.n = n;
  out.alpha = alpha;
  out.seed = seed;
  out.entries.resize(n, n);
  const double scale = std::pow(static_cast<double>(n), -1.0 / alpha);
  RngStream rng = derive_stream(seed, static_cast<std::uint64_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double x = scale * sample_standard_stable(law, rng);
      out.entries(i, j) = x;
      out.entries(j, i) = x;
    }
  }
  return out;
}

SpectralDecomposition eigendecompose(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw DomainError("eigendecompose needs a square matrix");
  if (!a.allFinite()) throw DomainError("matrix has non-finite entries");
  const auto n = static_cast<lapack_int>(a.rows());
  SpectralDecomposition sd;
  sd.eigenvectors = a;
  sd.eigenvalues.resize(n);
  if (n == 0) return sd;
  const lapack_int info = LAPACKE_dsyevd(LAPACK_COL_MAJOR, 'V', 'U', n, sd.eigenvectors.data(), n,
                                         sd.eigenvalues.data());
  if (info != 0) {
    throw ConvergenceError("dsyevd failed with info = " + std::to_string(info));
  }
  return sd;
}

SpectralDecomposition eigendecompose(const LevyMatrix& a) { return eigendecompose(a.entries); }

ResolventDiagonal resolvent_diagonal(const SpectralDecomposition& sd, std::complex<double> z) {
  if (!(z.imag() > 0.0)) throw DomainError("resolvent needs Im z > 0");
  const int n = sd.n();
  ResolventDiagonal rd;
  rd.z = z;
  rd.values.assign(static_cast<std::size_t>(n), {});
  std::vector<std::complex<double>> inv(static_cast<std::size_t>(n));
  for (int j = 0; j < n; ++j) inv[static_cast<std::size_t>(j)] = 1.0 / (sd.eigenvalues(j) - z);
  const auto& u = sd.eigenvectors;
  for (int j = 0; j < n; ++j) {
    const auto c = inv[static_cast<std::size_t>(j)];
    const double* col = u.col(j).data();
    for (int k = 0; k < n; ++k) rd.values[static_cast<std::size_t>(k)] += col[k] * col[k] * c;
  }
  return rd;
}

std::complex<double> right_half_pow(std::complex<double> x, double p) {
  const double r = std::abs(x);
  if (r == 0.0) return 0.0;
  if (x.real() < -1e-12 * r) throw DomainError("fractional power argument has negative real part");
  const double arg = std::atan2(x.imag(), std::max(x.real(), 0.0));
  return std::polar(std::pow(r, p), p * arg);
}

HomogeneousFn empirical_gamma(const ResolventDiagonal& rd, double alpha, const std::vector<double>& thetas) {
  if (thetas.empty()) throw DomainError("empirical_gamma needs a non-empty grid");
  if (!(alpha > 0.0 && alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
  const double half = alpha / 2.0;
  const double g = std::tgamma(1.0 - half);
  const double inv_n = 1.0 / rd.n();
  return HomogeneousFn::sample(half, thetas, [&](double theta) {
    const std::complex<double> u = std::polar(1.0, theta);
    std::complex<double> acc = 0.0;
    for (const auto& r : rd.values) acc += right_half_pow(dot(std::complex<double>(0.0, -1.0) * r, u), half);
    return g * inv_n * acc;
  });
}

double fractional_moment(const ResolventDiagonal& rd, double beta) {
  if (!(beta > 0.0)) throw DomainError("fractional moment needs beta > 0");
  double acc = 0.0;
  for (const auto& r : rd.values) acc += std::pow(r.imag(), beta);
  return acc / rd.n();
}

double mean_abs_square(const ResolventDiagonal& rd) {
  double acc = 0.0;
  for (const auto& r : rd.values) acc += std::norm(r);
  return acc / rd.n();
}

void write_spectrum_csv(const SpectralDecomposition& sd, const std::string& path) {
  std::unique_ptr<std::FILE, int (*)(std::FILE*)> f(std::fopen(path.c_str(), "w"), &std::fclose);
  if (!f) throw Error("cannot open " + path + " for writing");
  std::fprintf(f.get(), "index,eigenvalue\n");
  for (int k = 0; k < sd.n(); ++k) std::fprintf(f.get(), "%d,%.17g\n", k, sd.eigenvalues(k));
}

}  // namespace levylab
