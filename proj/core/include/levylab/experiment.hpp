#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "levylab/fixed_point.hpp"

namespace levylab {

enum class IntervalKind { rho, rho_prime, fixed };

/// |I| = width_scale n^{-r} (log n)^{log_power} with r = ρ or ρ', or |I| = width.
struct IntervalRule {
  IntervalKind kind = IntervalKind::rho;
  double width = 0.2;        ///< used by `fixed`
  double width_scale = 1.0;
  double log_power = 2.0;
};

/// ρ = α/(2+3α).
double rho_exponent(double alpha);
/// ρ' = min(α/(4+α), 1/4).
double rho_prime_exponent(double alpha);
double interval_width(const IntervalRule& rule, double alpha, int n);

struct ExperimentConfig {
  std::string name = "run";
  double alpha = 1.0;
  std::vector<int> n_list = {500};
  std::vector<std::uint64_t> seeds;  ///< explicit list; when empty, derived from master_seed
  std::uint64_t master_seed = 1;
  int seed_count = 20;
  std::vector<double> energies = {0.0};
  IntervalRule interval;
  double eta = 0.0;    ///< resolvent η; 0 means the interval half-width
  double kappa = 0.5;  ///< exponent parameter of the localization bound, recorded only
  DensityConfig density;
  int density_nodes = 4;  ///< Gauss–Legendre nodes for μ★(I)
  bool check_mass = false;  ///< local law: require μ★(ℝ) = 1 within 2%
  std::string output_dir = ".";
};

/// The seed list actually used: `seeds`, or mix64(master_seed + i) for i < seed_count.
std::vector<std::uint64_t> resolve_seeds(const ExperimentConfig& cfg);
/// Seed of the matrix for sample (seed, n).
std::uint64_t matrix_seed(std::uint64_t seed, int n);

std::string config_to_json(const ExperimentConfig& cfg);
/// Missing keys keep their defaults. Throws DomainError on malformed input.
ExperimentConfig config_from_json(const std::string& text);
ExperimentConfig load_config(const std::string& path);
/// FNV-1a 64 of the canonical JSON serialization.
std::uint64_t config_hash(const ExperimentConfig& cfg);

/// One (n, seed, E) sample.
struct MetricRow {
  double alpha = 0.0;
  int n = 0;
  std::uint64_t seed = 0;
  std::uint64_t matrix_seed = 0;
  double energy = 0.0;
  double half_width = 0.0;
  double eta = 0.0;
  int count = 0;
  double count_fraction = 0.0;  ///< |Λ_I|/n
  double Q = 0.0;
  double Pi = 0.0;
  double renyi_half = 0.0;
  double mean_abs_r2 = 0.0;  ///< (1/n) Σ |R_kk(E + iη)|²
  bool ok = true;
};

/// Mean and Monte Carlo standard error.
struct Stat {
  double mean = 0.0;
  double se = 0.0;
  int samples = 0;
};

struct Aggregate {
  int n = 0;
  double energy = 0.0;
  int failed = 0;
  Stat count_fraction;
  Stat Q;  ///< over samples with a non-empty interval
  Stat Pi;
  Stat mean_abs_r2;
  double mu_star = 0.0;  ///< μ★(I) for local-law runs, NaN otherwise
};

struct RunRecord {
  std::string kind;
  ExperimentConfig config;
  std::uint64_t config_hash = 0;
  std::vector<MetricRow> rows;
  std::vector<Aggregate> aggregates;
  double wall_clock = 0.0;
  std::string version;
  double total_mass = 0.0;  ///< μ★(ℝ) when checked, NaN otherwise

  int failed_samples() const;
};

Stat mean_se(const std::vector<double>& xs);

/// Aggregates per (n, E) in the order of first appearance in `rows`. `mu_star` maps
/// (n, E) to μ★(I); missing entries give NaN.
std::vector<Aggregate> aggregate_rows(const std::vector<MetricRow>& rows,
                                      const std::map<std::pair<int, double>, double>& mu_star = {});

/// For every (n, seed, E): interval statistics at I centered at E.
RunRecord run_transition_sweep(const ExperimentConfig& cfg);

/// As run_transition_sweep, with μ★(I) = ∫_I f★ from the density pipeline attached
/// to each aggregate.
RunRecord run_local_law(const ExperimentConfig& cfg);

/// 0 when nothing failed, 2 when some samples were skipped, 1 when more than 10% failed.
int exit_code(const RunRecord& record);

extern const char* const kRowColumns;
extern const char* const kAggregateColumns;

/// Writes <dir>/<name>_rows.csv, <dir>/<name>_aggregates.csv and <dir>/<name>_meta.json.
/// Returns the paths in that order.
std::vector<std::string> emit(const RunRecord& record, const std::string& dir);
/// Reads the three files written by emit.
RunRecord parse_record(const std::string& dir, const std::string& name);

/// Canonical CSV text (header plus rows) used by emit.
std::string rows_csv(const std::vector<MetricRow>& rows);
std::string aggregates_csv(const std::vector<Aggregate>& aggs);

}  // namespace levylab
