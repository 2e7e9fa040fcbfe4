#include "levylab/experiment.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include "json_detail.hpp"
#include "levylab/error.hpp"
#include "levylab/localization.hpp"
#include "levylab/matrix_model.hpp"
#include "levylab/quadrature.hpp"
#include "levylab/stable_random.hpp"

#ifndef LEVYLAB_VERSION
#define LEVYLAB_VERSION "unknown"
#endif

namespace levylab {

using nlohmann::json;

const char* const kRowColumns =
    "alpha,n,seed,matrix_seed,energy,half_width,eta,count,count_fraction,Q,Pi,renyi_half,mean_abs_r2,ok";
const char* const kAggregateColumns =
    "n,energy,failed,count_fraction_mean,count_fraction_se,count_fraction_samples,Q_mean,Q_se,Q_samples,"
    "Pi_mean,Pi_se,Pi_samples,mean_abs_r2_mean,mean_abs_r2_se,mean_abs_r2_samples,mu_star";

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

const char* kind_name(IntervalKind k) {
  switch (k) {
    case IntervalKind::rho: return "rho";
    case IntervalKind::rho_prime: return "rho_prime";
    case IntervalKind::fixed: return "fixed";
  }
  return "rho";
}

IntervalKind kind_from(const std::string& s) {
  if (s == "rho") return IntervalKind::rho;
  if (s == "rho_prime") return IntervalKind::rho_prime;
  if (s == "fixed") return IntervalKind::fixed;
  throw DomainError("unknown interval rule '" + s + "'");
}

json config_json(const ExperimentConfig& c) {
  const auto& d = c.density;
  json j{{"name", c.name},
         {"alpha", c.alpha},
         {"n_list", c.n_list},
         {"master_seed", c.master_seed},
         {"seed_count", c.seed_count},
         {"energies", c.energies},
         {"interval",
          {{"rule", kind_name(c.interval.kind)},
           {"width", c.interval.width},
           {"width_scale", c.interval.width_scale},
           {"log_power", c.interval.log_power}}},
         {"eta", c.eta},
         {"kappa", c.kappa},
         {"density",
          {{"eta_ladder", d.eta_ladder},
           {"max_abs_energy", d.max_abs_energy},
           {"energy_step", d.energy_step},
           {"relative_step", d.relative_step},
           {"grid_size", d.solver.grid_size},
           {"tolerance", d.solver.tolerance},
           {"max_iterations", d.solver.max_iterations},
           {"anderson", d.solver.anderson},
           {"quadrature", detail::quadrature_json(d.solver.quadrature)}}},
         {"density_nodes", c.density_nodes},
         {"check_mass", c.check_mass},
         {"output_dir", c.output_dir}};
  if (!c.seeds.empty()) j["seeds"] = c.seeds;
  return j;
}

void validate(const ExperimentConfig& c) {
  if (!(c.alpha > 0.0 && c.alpha < 2.0)) throw DomainError("alpha must lie in (0,2)");
  if (c.n_list.empty()) throw DomainError("n_list is empty");
  for (int n : c.n_list) {
    if (n < 2) throw DomainError("matrix sizes must be at least 2");
  }
  if (c.energies.empty()) throw DomainError("energies is empty");
  if (c.seeds.empty() && c.seed_count < 1) throw DomainError("seed_count must be positive");
  if (c.interval.kind == IntervalKind::fixed && !(c.interval.width > 0.0)) {
    throw DomainError("fixed interval width must be positive");
  }
  if (!(c.interval.width_scale > 0.0)) throw DomainError("width_scale must be positive");
  if (c.eta < 0.0) throw DomainError("eta must be non-negative");
  if (c.density_nodes < 1) throw DomainError("density_nodes must be positive");
}

std::string fmt_double(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream ss(line);
  while (std::getline(ss, cur, ',')) out.push_back(cur);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

double to_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw DomainError("not a number: '" + s + "'");
  return v;
}

std::uint64_t to_u64(const std::string& s) {
  char* end = nullptr;
  const auto v = std::strtoull(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw DomainError("not an integer: '" + s + "'");
  return v;
}

std::vector<std::vector<std::string>> read_csv(const std::string& path, const char* header) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  std::string line;
  if (!std::getline(is, line) || line != header) throw DomainError("unexpected header in " + path);
  std::vector<std::vector<std::string>> out;
  const std::size_t cols = split(header).size();
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    auto f = split(line);
    if (f.size() != cols) throw DomainError("wrong column count in " + path + ": " + line);
    out.push_back(std::move(f));
  }
  return out;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path);
  os << text;
  if (!os) throw Error("failed writing " + path);
}

struct Sample {
  int n;
  std::uint64_t seed;
};

std::vector<MetricRow> sample_rows(const ExperimentConfig& cfg, const Sample& s) {
  const std::uint64_t mseed = matrix_seed(s.seed, s.n);
  const double half = 0.5 * interval_width(cfg.interval, cfg.alpha, s.n);
  const double eta = cfg.eta > 0.0 ? cfg.eta : half;
  std::vector<MetricRow> rows;
  auto base = [&](double E) {
    MetricRow r;
    r.alpha = cfg.alpha;
    r.n = s.n;
    r.seed = s.seed;
    r.matrix_seed = mseed;
    r.energy = E;
    r.half_width = half;
    r.eta = eta;
    return r;
  };
  try {
    const SpectralDecomposition sd = eigendecompose(build_levy_matrix(s.n, cfg.alpha, mseed));
    for (double E : cfg.energies) {
      MetricRow r = base(E);
      const IntervalStats st = interval_stats(sd, E - half, E + half, cfg.alpha);
      r.count = st.count;
      r.count_fraction = static_cast<double>(st.count) / s.n;
      r.Q = st.Q;
      r.Pi = st.Pi;
      r.renyi_half = st.renyi_half;
      r.mean_abs_r2 = mean_abs_square(resolvent_diagonal(sd, cplx(E, eta)));
      rows.push_back(r);
    }
  } catch (const Error& e) {
    std::fprintf(stderr, "sample n=%d seed=%llu skipped: %s\n", s.n, static_cast<unsigned long long>(s.seed),
                 e.what());
    rows.clear();
    for (double E : cfg.energies) {
      MetricRow r = base(E);
      r.ok = false;
      rows.push_back(r);
    }
  }
  return rows;
}

RunRecord sweep(const ExperimentConfig& cfg, const char* kind) {
  validate(cfg);
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Sample> samples;
  for (int n : cfg.n_list) {
    for (auto seed : resolve_seeds(cfg)) samples.push_back({n, seed});
  }
  std::vector<std::vector<MetricRow>> per(samples.size());
  const long count = static_cast<long>(samples.size());
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < count; ++i) per[i] = sample_rows(cfg, samples[i]);

  RunRecord rec;
  rec.kind = kind;
  rec.config = cfg;
  rec.config_hash = config_hash(cfg);
  rec.version = LEVYLAB_VERSION;
  rec.total_mass = kNaN;
  for (auto& r : per) rec.rows.insert(rec.rows.end(), r.begin(), r.end());
  rec.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

void put_stat(std::string& out, const Stat& s) {
  out += ',' + fmt_double(s.mean) + ',' + fmt_double(s.se) + ',' + std::to_string(s.samples);
}

Stat get_stat(const std::vector<std::string>& f, std::size_t at) {
  return {to_double(f[at]), to_double(f[at + 1]), static_cast<int>(to_u64(f[at + 2]))};
}

}  // namespace

double rho_exponent(double alpha) { return alpha / (2.0 + 3.0 * alpha); }

double rho_prime_exponent(double alpha) { return std::min(alpha / (4.0 + alpha), 0.25); }

double interval_width(const IntervalRule& rule, double alpha, int n) {
  if (rule.kind == IntervalKind::fixed) return rule.width;
  if (n < 2) throw DomainError("interval width needs n >= 2");
  const double r = rule.kind == IntervalKind::rho ? rho_exponent(alpha) : rho_prime_exponent(alpha);
  return rule.width_scale * std::pow(static_cast<double>(n), -r) * std::pow(std::log(static_cast<double>(n)), rule.log_power);
}

std::vector<std::uint64_t> resolve_seeds(const ExperimentConfig& cfg) {
  if (!cfg.seeds.empty()) return cfg.seeds;
  std::vector<std::uint64_t> out;
  for (int i = 0; i < cfg.seed_count; ++i) out.push_back(mix64(cfg.master_seed + static_cast<std::uint64_t>(i)));
  return out;
}

std::uint64_t matrix_seed(std::uint64_t seed, int n) {
  return mix64(seed ^ mix64(static_cast<std::uint64_t>(n)));
}

std::string config_to_json(const ExperimentConfig& cfg) { return config_json(cfg).dump(); }

ExperimentConfig config_from_json(const std::string& text) {
  ExperimentConfig c;
  try {
    const json j = json::parse(text);
    c.name = j.value("name", c.name);
    c.alpha = j.value("alpha", c.alpha);
    c.n_list = j.value("n_list", c.n_list);
    c.seeds = j.value("seeds", c.seeds);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.seed_count = j.value("seed_count", c.seed_count);
    c.energies = j.value("energies", c.energies);
    if (j.contains("interval")) {
      const auto& i = j["interval"];
      c.interval.kind = kind_from(i.value("rule", std::string(kind_name(c.interval.kind))));
      c.interval.width = i.value("width", c.interval.width);
      c.interval.width_scale = i.value("width_scale", c.interval.width_scale);
      c.interval.log_power = i.value("log_power", c.interval.log_power);
    }
    c.eta = j.value("eta", c.eta);
    c.kappa = j.value("kappa", c.kappa);
    if (j.contains("density")) {
      const auto& d = j["density"];
      auto& dc = c.density;
      dc.eta_ladder = d.value("eta_ladder", dc.eta_ladder);
      dc.max_abs_energy = d.value("max_abs_energy", dc.max_abs_energy);
      dc.energy_step = d.value("energy_step", dc.energy_step);
      dc.relative_step = d.value("relative_step", dc.relative_step);
      dc.solver.grid_size = d.value("grid_size", dc.solver.grid_size);
      dc.solver.tolerance = d.value("tolerance", dc.solver.tolerance);
      dc.solver.max_iterations = d.value("max_iterations", dc.solver.max_iterations);
      dc.solver.anderson = d.value("anderson", dc.solver.anderson);
      if (d.contains("quadrature")) dc.solver.quadrature = detail::quadrature_from(d["quadrature"]);
    }
    c.density_nodes = j.value("density_nodes", c.density_nodes);
    c.check_mass = j.value("check_mass", c.check_mass);
    c.output_dir = j.value("output_dir", c.output_dir);
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed config: ") + e.what());
  }
  validate(c);
  return c;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return config_from_json(ss.str());
}

std::uint64_t config_hash(const ExperimentConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config_to_json(cfg)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

int RunRecord::failed_samples() const {
  int k = 0;
  for (const auto& r : rows) k += r.ok ? 0 : 1;
  return k;
}

Stat mean_se(const std::vector<double>& xs) {
  Stat s;
  s.samples = static_cast<int>(xs.size());
  if (xs.empty()) {
    s.mean = s.se = kNaN;
    return s;
  }
  double sum = 0.0;
  for (double x : xs) sum += x;
  s.mean = sum / s.samples;
  if (s.samples > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - s.mean) * (x - s.mean);
    s.se = std::sqrt(ss / (s.samples - 1) / s.samples);
  }
  return s;
}

std::vector<Aggregate> aggregate_rows(const std::vector<MetricRow>& rows,
                                      const std::map<std::pair<int, double>, double>& mu_star) {
  std::vector<std::pair<int, double>> keys;
  std::map<std::pair<int, double>, std::vector<const MetricRow*>> groups;
  for (const auto& r : rows) {
    const auto key = std::make_pair(r.n, r.energy);
    auto& g = groups[key];
    if (g.empty()) keys.push_back(key);
    g.push_back(&r);
  }
  std::vector<Aggregate> out;
  for (const auto& key : keys) {
    Aggregate a;
    a.n = key.first;
    a.energy = key.second;
    std::vector<double> frac, q, pi, r2;
    for (const MetricRow* r : groups[key]) {
      if (!r->ok) {
        ++a.failed;
        continue;
      }
      frac.push_back(r->count_fraction);
      r2.push_back(r->mean_abs_r2);
      if (r->count > 0) {
        q.push_back(r->Q);
        pi.push_back(r->Pi);
      }
    }
    a.count_fraction = mean_se(frac);
    a.Q = mean_se(q);
    a.Pi = mean_se(pi);
    a.mean_abs_r2 = mean_se(r2);
    const auto it = mu_star.find(key);
    a.mu_star = it == mu_star.end() ? kNaN : it->second;
    out.push_back(a);
  }
  return out;
}

RunRecord run_transition_sweep(const ExperimentConfig& cfg) {
  RunRecord rec = sweep(cfg, "localization-sweep");
  rec.aggregates = aggregate_rows(rec.rows);
  return rec;
}

RunRecord run_local_law(const ExperimentConfig& cfg) {
  validate(cfg);
  for (double E : cfg.energies) {
    if (std::abs(E) > cfg.density.max_abs_energy) {
      throw DomainError("energy " + fmt_double(E) + " outside the continuation range");
    }
  }
  const auto t0 = std::chrono::steady_clock::now();
  RunRecord rec = sweep(cfg, "local-law");

  // μ★(I) by Gauss–Legendre on each interval; all nodes in one continuation.
  const GaussRule& gl = gauss_legendre(cfg.density_nodes);
  std::vector<double> nodes;
  std::vector<std::pair<int, double>> keys;
  for (int n : cfg.n_list) {
    const double half = 0.5 * interval_width(cfg.interval, cfg.alpha, n);
    for (double E : cfg.energies) {
      keys.emplace_back(n, E);
      for (double x : gl.x) nodes.push_back(E - half + 2.0 * half * x);
    }
  }
  const auto dens = spectral_density(nodes, cfg.alpha, cfg.density);
  std::map<std::pair<int, double>, double> mu;
  std::size_t at = 0;
  for (const auto& key : keys) {
    const double half = 0.5 * interval_width(cfg.interval, cfg.alpha, key.first);
    double sum = 0.0;
    for (std::size_t k = 0; k < gl.size(); ++k) sum += gl.w[k] * dens[at++].f_star;
    mu[key] = 2.0 * half * sum;
  }
  rec.aggregates = aggregate_rows(rec.rows, mu);

  if (cfg.check_mass) {
    rec.total_mass = density_mass(cfg.alpha, cfg.density).mass;
    if (std::abs(rec.total_mass - 1.0) > 0.02) {
      throw ConvergenceError("density mass " + fmt_double(rec.total_mass) + " is not within 2% of 1");
    }
  }
  rec.wall_clock = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rec;
}

int exit_code(const RunRecord& record) {
  const int failed = record.failed_samples();
  if (failed == 0) return 0;
  return 10 * failed > static_cast<int>(record.rows.size()) ? 1 : 2;
}

std::string rows_csv(const std::vector<MetricRow>& rows) {
  std::string out = std::string(kRowColumns) + '\n';
  for (const auto& r : rows) {
    out += fmt_double(r.alpha) + ',' + std::to_string(r.n) + ',' + std::to_string(r.seed) + ',' +
           std::to_string(r.matrix_seed) + ',' + fmt_double(r.energy) + ',' + fmt_double(r.half_width) + ',' +
           fmt_double(r.eta) + ',' + std::to_string(r.count) + ',' + fmt_double(r.count_fraction) + ',' +
           fmt_double(r.Q) + ',' + fmt_double(r.Pi) + ',' + fmt_double(r.renyi_half) + ',' +
           fmt_double(r.mean_abs_r2) + ',' + (r.ok ? "1" : "0") + '\n';
  }
  return out;
}

std::string aggregates_csv(const std::vector<Aggregate>& aggs) {
  std::string out = std::string(kAggregateColumns) + '\n';
  for (const auto& a : aggs) {
    std::string line = std::to_string(a.n) + ',' + fmt_double(a.energy) + ',' + std::to_string(a.failed);
    put_stat(line, a.count_fraction);
    put_stat(line, a.Q);
    put_stat(line, a.Pi);
    put_stat(line, a.mean_abs_r2);
    out += line + ',' + fmt_double(a.mu_star) + '\n';
  }
  return out;
}

std::vector<std::string> emit(const RunRecord& record, const std::string& dir) {
  std::filesystem::create_directories(dir);
  const std::string base = (std::filesystem::path(dir) / record.config.name).string();
  const std::vector<std::string> paths = {base + "_rows.csv", base + "_aggregates.csv", base + "_meta.json"};
  write_text(paths[0], rows_csv(record.rows));
  write_text(paths[1], aggregates_csv(record.aggregates));
  char hash[32];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(record.config_hash));
  json meta{{"kind", record.kind},
            {"config", config_json(record.config)},
            {"config_hash", hash},
            {"version", record.version},
            {"wall_clock_seconds", record.wall_clock},
            {"seeds", resolve_seeds(record.config)},
            {"matrix_seed_rule", "mix64(seed ^ mix64(n))"},
            {"failed_samples", record.failed_samples()},
            {"row_columns", kRowColumns},
            {"aggregate_columns", kAggregateColumns}};
  if (!std::isnan(record.total_mass)) meta["total_mass"] = record.total_mass;
  write_text(paths[2], meta.dump(2) + '\n');
  return paths;
}

RunRecord parse_record(const std::string& dir, const std::string& name) {
  const std::string base = (std::filesystem::path(dir) / name).string();
  RunRecord rec;
  {
    std::ifstream is(base + "_meta.json");
    if (!is) throw Error("cannot open " + base + "_meta.json");
    std::stringstream ss;
    ss << is.rdbuf();
    try {
      const json meta = json::parse(ss.str());
      rec.kind = meta.at("kind").get<std::string>();
      rec.config = config_from_json(meta.at("config").dump());
      rec.config_hash = std::strtoull(meta.at("config_hash").get<std::string>().c_str(), nullptr, 16);
      rec.version = meta.value("version", std::string());
      rec.wall_clock = meta.value("wall_clock_seconds", 0.0);
      rec.total_mass = meta.value("total_mass", kNaN);
    } catch (const json::exception& e) {
      throw DomainError("malformed metadata " + base + "_meta.json: " + e.what());
    }
  }
  for (const auto& f : read_csv(base + "_rows.csv", kRowColumns)) {
    MetricRow r;
    r.alpha = to_double(f[0]);
    r.n = static_cast<int>(to_u64(f[1]));
    r.seed = to_u64(f[2]);
    r.matrix_seed = to_u64(f[3]);
    r.energy = to_double(f[4]);
    r.half_width = to_double(f[5]);
    r.eta = to_double(f[6]);
    r.count = static_cast<int>(to_u64(f[7]));
    r.count_fraction = to_double(f[8]);
    r.Q = to_double(f[9]);
    r.Pi = to_double(f[10]);
    r.renyi_half = to_double(f[11]);
    r.mean_abs_r2 = to_double(f[12]);
    r.ok = f[13] == "1";
    rec.rows.push_back(r);
  }
  for (const auto& f : read_csv(base + "_aggregates.csv", kAggregateColumns)) {
    Aggregate a;
    a.n = static_cast<int>(to_u64(f[0]));
    a.energy = to_double(f[1]);
    a.failed = static_cast<int>(to_u64(f[2]));
    a.count_fraction = get_stat(f, 3);
    a.Q = get_stat(f, 6);
    a.Pi = get_stat(f, 9);
    a.mean_abs_r2 = get_stat(f, 12);
    a.mu_star = to_double(f[15]);
    rec.aggregates.push_back(a);
  }
  return rec;
}

}  // namespace levylab
