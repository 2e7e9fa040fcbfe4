#include "levylab/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "json_detail.hpp"
#include "levylab/error.hpp"

namespace levylab {

using nlohmann::json;

namespace {

json fn_json(const HomogeneousFn& f) {
  std::vector<double> re, im;
  for (const auto& v : f.values()) {
    re.push_back(v.real());
    im.push_back(v.imag());
  }
  return json{{"beta", f.beta()}, {"thetas", f.thetas()}, {"values_re", re}, {"values_im", im}};
}

HomogeneousFn fn_from(const json& j) {
  try {
    const auto re = j.at("values_re").get<std::vector<double>>();
    const auto im = j.at("values_im").get<std::vector<double>>();
    if (re.size() != im.size()) throw DomainError("values_re and values_im differ in length");
    std::vector<cplx> values(re.size());
    for (std::size_t i = 0; i < re.size(); ++i) values[i] = {re[i], im[i]};
    return HomogeneousFn(j.at("beta").get<double>(), j.at("thetas").get<std::vector<double>>(), std::move(values));
  } catch (const json::exception& e) {
    throw DomainError(std::string("malformed homogeneous function: ") + e.what());
  }
}

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  std::stringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

}  // namespace

std::string homogeneous_to_json(const HomogeneousFn& f) { return fn_json(f).dump(); }

HomogeneousFn homogeneous_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw DomainError(std::string("invalid JSON: ") + e.what());
  }
  return fn_from(j);
}

void save_checkpoint(const FixedPointSolution& sol, const QuadratureConfig& q, const std::string& path) {
  json j{{"z_re", sol.z.real()},       {"z_im", sol.z.imag()},     {"alpha", sol.alpha},
         {"residual", sol.residual},   {"iterations", sol.iterations},
         {"quadrature", detail::quadrature_json(q)}, {"gamma", fn_json(sol.gamma)}};
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os << j.dump(2) << '\n';
  if (!os) throw Error("failed writing " + path);
}

FixedPointSolution load_checkpoint(const std::string& path, QuadratureConfig* q) {
  json j;
  try {
    j = json::parse(slurp(path));
  } catch (const json::exception& e) {
    throw DomainError("invalid checkpoint " + path + ": " + e.what());
  }
  FixedPointSolution sol;
  try {
    sol.z = {j.at("z_re").get<double>(), j.at("z_im").get<double>()};
    sol.alpha = j.at("alpha").get<double>();
    sol.residual = j.value("residual", 0.0);
    sol.iterations = j.value("iterations", 0);
    sol.gamma = fn_from(j.at("gamma"));
    if (q) *q = detail::quadrature_from(j.value("quadrature", json::object()));
  } catch (const json::exception& e) {
    throw DomainError("malformed checkpoint " + path + ": " + e.what());
  }
  return sol;
}

void write_density_csv(const std::vector<DensityPoint>& points, const std::string& path) {
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path);
  os << "E,f_star,eta_used,extrapolation_error\n";
  char buf[256];
  for (const auto& p : points) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g,%.17g\n", p.E, p.f_star, p.eta_used, p.extrapolation_error);
    os << buf;
  }
  if (!os) throw Error("failed writing " + path);
}

std::vector<DensityPoint> read_density_csv(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw Error("cannot open " + path);
  std::string line;
  std::getline(is, line);
  if (line != "E,f_star,eta_used,extrapolation_error") throw DomainError("unexpected density header in " + path);
  std::vector<DensityPoint> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    DensityPoint p;
    if (std::sscanf(line.c_str(), "%lf,%lf,%lf,%lf", &p.E, &p.f_star, &p.eta_used, &p.extrapolation_error) != 4) {
      throw DomainError("malformed density row: " + line);
    }
    out.push_back(p);
  }
  return out;
}

}  // namespace levylab
