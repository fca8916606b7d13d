#include "opkernel/report.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "opkernel/besov.hpp"
#include "opkernel/multiplier.hpp"
#include "opkernel/random.hpp"
#include "opkernel/schur.hpp"
#include "opkernel/symbol.hpp"
#include "opkernel/torus.hpp"

#ifndef OPKERNEL_VERSION
#define OPKERNEL_VERSION "0.0.0"
#endif

namespace opkernel {

namespace {

using json = nlohmann::ordered_json;
using K = ScenarioKind;

NormedSpace make_space(const std::string& name, Eigen::Index dim) {
  if (name == "euclidean") return NormedSpace::euclidean(dim);
  if (name == "ell1") return NormedSpace::ell1(dim);
  if (name == "ellinf") return NormedSpace::ellinf(dim);
  if (name.rfind("lp:", 0) == 0) {
    const std::string v = name.substr(3);
    return NormedSpace::weighted(v == "inf" ? kInf : std::stod(v), RVector::Ones(dim));
  }
  throw Error("unknown norm '" + name + "'");
}

TorusGrid make_grid(const Scenario& s, int points) {
  return TorusGrid(s.grid_n, points, s.period > 0.0 ? s.period : 2.0 * std::numbers::pi);
}

Symbol make_symbol(const Scenario& s, const TorusGrid& grid) {
  const int n = s.grid_n;
  if (s.builtin == "identity") return symbols::identity(n, s.source_dim);
  if (s.builtin == "zero") return symbols::zero(n, s.source_dim, s.source_dim);
  if (s.builtin == "scalar-decay") return symbols::scalar_decay(n);
  if (s.builtin == "diag-decay") {
    if (n != 1) throw Error("diag-decay needs grid-n = 1");
    return symbols::diag_decay();
  }
  if (s.builtin == "block") return symbols::block(s.block, build_partition(grid).k_max(), n);
  throw Error("builtin '" + s.builtin + "' is not a symbol");
}

// Square symbols share one space on both sides; the source norm names X and
// the target norm Y.
std::pair<NormedSpace, NormedSpace> symbol_spaces(const Scenario& s, const Symbol& m) {
  return {make_space(s.source_norm, m.cols()), make_space(s.target_norm, m.rows())};
}

OperatorKernel make_kernel(const Scenario& s) {
  if (s.builtin == "circulant") {
    CVector g(static_cast<Eigen::Index>(s.taps.size()));
    for (std::size_t i = 0; i < s.taps.size(); ++i) g(static_cast<Eigen::Index>(i)) = s.taps[i];
    return OperatorKernel::circulant(g);
  }
  if (s.kind == K::YoungCheck) {
    // scalar convolution with a gaussian kernel on the torus
    const TorusGrid grid = make_grid(s, s.grid_points);
    Rng rng = make_rng(s.seed, 0x6Bu);
    const MatrixField g(grid, 1, 1, complex_gaussian(rng, 1, grid.size()));
    const NormedSpace e = NormedSpace::euclidean(1);
    return convolution_kernel(g, e, e);
  }
  const NormedSpace x = make_space(s.source_norm, s.source_dim);
  const NormedSpace y = make_space(s.target_norm, s.target_dim);
  if (s.builtin == "zero")
    return OperatorKernel::zero(DiscreteMeasureSpace::counting(s.domain_points),
                                DiscreteMeasureSpace::counting(s.codomain_points), x, y);
  Rng rng = make_rng(s.seed, 0x6Bu);
  return random_gaussian_kernel(s.domain_points, s.codomain_points, x, y, rng);
}

void run_schur(const Scenario& s, RunReport& r) {
  const OperatorKernel k = make_kernel(s);
  const SchurReport rep = verify_schur_bound(k, s.theta, s.q, s.budget, s.seed, s.tolerance);
  const Real tol = s.given.count("tolerance") || rep.certified ? s.tolerance : 1e-6;
  r.constants["c1"] = rep.constants.c1.upper;
  r.constants["c1_lower"] = rep.constants.c1.lower;
  r.constants["c2"] = rep.constants.c2.upper;
  r.constants["c2_lower"] = rep.constants.c2.lower;
  r.constants["p"] = rep.exponents.p;
  r.constants["tolerance"] = tol;
  r.bound = rep.bound;
  r.lower = rep.lower.value;
  r.ratio = rep.ratio;
  r.pass = rep.ratio <= 1.0 + tol;
}

// random band-limited function: gaussian spectrum on the lower half of the
// frequency box
Samples random_band_limited(const TorusGrid& grid, Eigen::Index dim, std::uint64_t seed) {
  Rng rng = make_rng(seed, 0xB5u);
  Samples spec = complex_gaussian(rng, dim, grid.size());
  const RVector r = grid.frequency_norms();
  const Real cut = 0.5 * grid.nyquist();
  for (Eigen::Index j = 0; j < grid.size(); ++j)
    if (r(j) > cut) spec.col(j).setZero();
  return dft_inverse(grid, spec);
}

void run_besov(const Scenario& s, RunReport& r) {
  const TorusGrid grid = make_grid(s, s.grid_points);
  const BesovParams params = BesovParams::checked(s.s, s.q, s.r);
  Real value = 0.0;
  if (s.builtin == "random-gaussian") {
    const NormedSpace y = make_space(s.target_norm, s.target_dim);
    value = besov_norm(random_band_limited(grid, s.target_dim, s.seed), y, params, build_partition(grid));
  } else {
    const Symbol m = make_symbol(s, grid);
    const auto [x, y] = symbol_spaces(s, m);
    const TorusGrid ft = frequency_torus(grid);
    const MatrixField field =
        MatrixField::sample(ft, m.rows(), m.cols(), [&](const RVector& t) { return m(t); }, false);
    value = besov_norm(field, x, y, params, build_partition(ft));
  }
  r.constants["besov"] = value;
  r.pass = std::isfinite(value);
}

// Stability of a positive series: every value within 10% of the last one.
bool stable_series(const std::vector<SeriesPoint>& series) {
  if (series.empty()) return false;
  const Real last = series.back().y;
  for (const auto& pt : series)
    if (!std::isfinite(pt.y) || std::abs(pt.y - last) > 0.1 * std::max(std::abs(last), 1e-300)) return false;
  return true;
}

std::vector<int> grid_sizes(const Scenario& s) {
  std::vector<int> sizes = s.refine.empty() ? std::vector<int>{s.grid_points} : s.refine;
  std::sort(sizes.begin(), sizes.end());
  return sizes;
}

void run_fm(const Scenario& s, RunReport& r) {
  const std::vector<int> sizes = grid_sizes(s);
  FmReport last;
  for (int n : sizes) {
    const TorusGrid grid = make_grid(s, n);
    const Symbol m = make_symbol(s, grid);
    const auto [x, y] = symbol_spaces(s, m);
    last = s.mode == "besov" ? verify_fm_besov(m, grid, s.u, s.q, s.p, s.s, s.r, x, y, s.budget, s.seed)
                             : verify_fm_lq_lp(m, grid, s.u, s.q, s.p, x, y, s.budget, s.seed);
    r.series.push_back({static_cast<Real>(n), last.ratio});
  }
  r.constants[s.mode == "besov" ? "a" : "mu"] = last.theory;
  for (std::size_t k = 0; k < last.block_constants.size(); ++k)
    r.constants["a_" + std::to_string(k)] = last.block_constants[k];
  r.lower = last.lower;
  r.ratio = last.ratio;
  r.pass = sizes.size() > 1 ? stable_series(r.series) : std::isfinite(last.ratio);
  if (sizes.size() == 1) r.series.clear();
}

void record_multiplier(const MultiplierReport& rep, RunReport& r) {
  r.constants["a"] = rep.constant_a;
  r.constants["l"] = rep.derivative_order;
  for (std::size_t k = 0; k < rep.order_constants.size(); ++k)
    r.constants["order_" + std::to_string(k)] = rep.order_constants[k];
  for (std::size_t k = 0; k < rep.growth.size(); ++k)
    r.constants["growth_" + std::to_string(k)] = rep.growth[k];
  r.constants["skipped"] = static_cast<Real>(rep.skipped_points);
}

void run_mikhlin(const Scenario& s, RunReport& r) {
  const std::vector<int> sizes = grid_sizes(s);
  bool admissible = true;
  for (int n : sizes) {
    const TorusGrid grid = make_grid(s, n);
    const Symbol m = make_symbol(s, grid);
    const auto [x, y] = symbol_spaces(s, m);
    const MultiplierReport rep = s.variant == "remark38c" ? remark38c_check(m, grid, s.p, s.q, x, y)
                                                          : mikhlin_check(m, grid, s.u, s.p, s.q, x, y);
    admissible = admissible && rep.admissible;
    record_multiplier(rep, r);
    if (sizes.size() > 1) r.series.push_back({static_cast<Real>(n), rep.constant_a});
  }
  r.pass = admissible;
}

void run_lemma36(const Scenario& s, RunReport& r) {
  const TorusGrid grid = make_grid(s, s.grid_points);
  const Symbol m = make_symbol(s, grid);
  const auto [x, y] = symbol_spaces(s, m);
  const MultiplierReport rep = lemma36_check(m, grid, s.u, s.p, s.q, s.theta, x, y);
  record_multiplier(rep, r);
  r.pass = rep.admissible;
}

void run_corollary32(const Scenario& s, RunReport& r) {
  const TorusGrid grid = make_grid(s, s.grid_points);
  const Corollary32Report rep =
      check_corollary32(s.u, s.theta, grid, s.samples, s.seed, make_space(s.target_norm, s.target_dim));
  r.constants["max_ratio"] = rep.max_ratio;
  r.constants["max_ratio_doubled"] = rep.max_ratio_doubled;
  r.constants["mean_ratio"] = rep.mean_ratio;
  r.constants["smoothness"] = rep.smoothness;
  r.constants["skipped"] = rep.skipped;
  r.ratio = rep.max_ratio;
  r.pass = rep.finite && rep.stable;
}

// Non-finite values are written as strings so that every line stays valid JSON.
json real_json(Real x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

Real json_real(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return kInf;
    if (s == "-inf") return -kInf;
    if (s == "nan") return std::numeric_limits<Real>::quiet_NaN();
    throw Error("bad number '" + s + "' in report");
  }
  return j.get<Real>();
}

json optional_json(const std::optional<Real>& x) { return x ? real_json(*x) : json(nullptr); }

std::optional<Real> json_optional(const json& j) {
  if (j.is_null()) return std::nullopt;
  return json_real(j);
}

std::string num(Real x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string num(const std::optional<Real>& x) { return x ? num(*x) : std::string(); }

std::string csv_field(const std::string& v) {
  if (v.find_first_of(",\"\n") == std::string::npos) return v;
  std::string out = "\"";
  for (char c : v) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string tool_version() { return std::string("opkernel ") + OPKERNEL_VERSION; }

RunReport run_scenario(const Scenario& s) {
  RunReport r;
  r.name = s.name;
  r.kind = std::string(kind_name(s.kind));
  r.seed = s.seed;
  r.parameters = s.given;
  r.version = tool_version();
  const auto start = std::chrono::steady_clock::now();
  try {
    validate(s);
    switch (s.kind) {
      case K::SchurVerify:
      case K::YoungCheck: run_schur(s, r); break;
      case K::BesovNorm: run_besov(s, r); break;
      case K::FmCheck: run_fm(s, r); break;
      case K::MikhlinCheck: run_mikhlin(s, r); break;
      case K::Lemma36Check: run_lemma36(s, r); break;
      case K::Corollary32Check: run_corollary32(s, r); break;
    }
  } catch (const std::exception& e) {
    r.pass = false;
    r.error = e.what();
  }
  r.seconds = std::chrono::duration<Real>(std::chrono::steady_clock::now() - start).count();
  return r;
}

std::vector<RunReport> run_scenarios(const std::vector<Scenario>& scenarios, int parallelism) {
  std::vector<RunReport> out(scenarios.size());
  const std::size_t workers =
      std::min<std::size_t>(std::max(1, parallelism), std::max<std::size_t>(1, scenarios.size()));
  std::atomic<std::size_t> next{0};
  const auto work = [&] {
    for (std::size_t i = next++; i < scenarios.size(); i = next++) out[i] = run_scenario(scenarios[i]);
  };
  if (workers == 1) {
    work();
    return out;
  }
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < workers; ++t) pool.emplace_back(work);
  for (auto& t : pool) t.join();
  return out;
}

ReportFormat parse_format(const std::string& name) {
  if (name == "json-lines") return ReportFormat::JsonLines;
  if (name == "csv") return ReportFormat::Csv;
  if (name == "plot-data") return ReportFormat::PlotData;
  throw Error("unknown format '" + name + "' (expected json-lines, csv or plot-data)");
}

std::string emit_report(const std::vector<RunReport>& reports, ReportFormat format, bool include_timing) {
  std::ostringstream out;
  switch (format) {
    case ReportFormat::JsonLines:
      for (const auto& r : reports) {
        json j;
        j["name"] = r.name;
        j["kind"] = r.kind;
        j["seed"] = r.seed;
        j["version"] = r.version;
        j["parameters"] = json::object();
        for (const auto& [k, v] : r.parameters) j["parameters"][k] = v;
        j["constants"] = json::object();
        for (const auto& [k, v] : r.constants) j["constants"][k] = real_json(v);
        j["bound"] = optional_json(r.bound);
        j["lower"] = optional_json(r.lower);
        j["ratio"] = optional_json(r.ratio);
        j["series"] = json::array();
        for (const auto& pt : r.series) j["series"].push_back({real_json(pt.x), real_json(pt.y)});
        j["pass"] = r.pass;
        j["error"] = r.error;
        if (include_timing) j["seconds"] = r.seconds;
        out << j.dump() << '\n';
      }
      break;
    case ReportFormat::Csv:
      out << "name,kind,seed,pass,bound,lower,ratio,constants,error,version\n";
      for (const auto& r : reports) {
        std::string constants;
        for (const auto& [k, v] : r.constants) constants += (constants.empty() ? "" : ";") + k + "=" + num(v);
        out << csv_field(r.name) << ',' << r.kind << ',' << r.seed << ',' << (r.pass ? "true" : "false") << ','
            << num(r.bound) << ',' << num(r.lower) << ',' << num(r.ratio) << ',' << csv_field(constants) << ','
            << csv_field(r.error) << ',' << csv_field(r.version);
        if (include_timing) out << ',' << num(r.seconds);
        out << '\n';
      }
      break;
    case ReportFormat::PlotData:
      out << "# name x y\n";
      for (const auto& r : reports) {
        // reports without a refinement series have nothing to plot
        std::vector<SeriesPoint> pts = r.series;
        std::stable_sort(pts.begin(), pts.end(), [](const auto& a, const auto& b) { return a.x < b.x; });
        for (const auto& pt : pts) out << r.name << ' ' << num(pt.x) << ' ' << num(pt.y) << '\n';
      }
      break;
  }
  return out.str();
}

RunReport report_from_json(const std::string& line) {
  json j;
  try {
    j = json::parse(line);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed report line: ") + e.what());
  }
  RunReport r;
  try {
    r.name = j.at("name").get<std::string>();
    r.kind = j.at("kind").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.version = j.at("version").get<std::string>();
    for (const auto& [k, v] : j.at("parameters").items()) r.parameters[k] = v.get<std::string>();
    for (const auto& [k, v] : j.at("constants").items()) r.constants[k] = json_real(v);
    r.bound = json_optional(j.at("bound"));
    r.lower = json_optional(j.at("lower"));
    r.ratio = json_optional(j.at("ratio"));
    for (const auto& pt : j.at("series")) r.series.push_back({json_real(pt.at(0)), json_real(pt.at(1))});
    r.pass = j.at("pass").get<bool>();
    r.error = j.at("error").get<std::string>();
    if (j.contains("seconds")) r.seconds = j.at("seconds").get<Real>();
  } catch (const json::exception& e) {
    throw Error(std::string("report line is missing a field: ") + e.what());
  }
  return r;
}

}  // namespace opkernel
