#include "opkernel/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <functional>
#include <set>
#include <sstream>

#include "opkernel/besov.hpp"
#include "opkernel/exponent.hpp"

namespace opkernel {

namespace {

using K = ScenarioKind;

constexpr std::pair<K, std::string_view> kKindNames[] = {
    {K::SchurVerify, "schur-verify"},   {K::YoungCheck, "young-check"},
    {K::BesovNorm, "besov-norm"},       {K::FmCheck, "fm-check"},
    {K::MikhlinCheck, "mikhlin-check"}, {K::Lemma36Check, "lemma36-check"},
    {K::Corollary32Check, "corollary32-check"},
};

// A validation failure attributable to one key.
struct KeyError : Error {
  KeyError(std::string key, const std::string& msg) : Error(msg), key(std::move(key)) {}
  std::string key;
};

template <typename F>
void blame(const std::string& key, F&& check) {
  try {
    check();
  } catch (const KeyError&) {
    throw;
  } catch (const Error& e) {
    throw KeyError(key, e.what());
  }
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

Real to_real(const std::string& v) {
  if (v == "inf" || v == "infinity") return kInf;
  std::size_t used = 0;
  Real x = 0.0;
  try {
    x = std::stod(v, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != v.size() || v.empty() || std::isnan(x)) throw Error("expected a number, got '" + v + "'");
  return x;
}

template <typename Int>
Int to_int(const std::string& v) {
  Int x{};
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty())
    throw Error("expected an integer, got '" + v + "'");
  return x;
}

template <typename T, typename Parse>
std::vector<T> to_list(const std::string& v, Parse parse) {
  std::vector<T> out;
  std::stringstream ss(v);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(parse(trim(item)));
  if (out.empty()) throw Error("expected a comma-separated list");
  return out;
}

std::string one_of(const std::string& v, std::initializer_list<const char*> options) {
  for (const char* o : options)
    if (v == o) return v;
  std::string all;
  for (const char* o : options) all += std::string(all.empty() ? "" : ", ") + o;
  throw Error("unknown value '" + v + "' (expected one of: " + all + ")");
}

struct KeySpec {
  std::set<K> kinds;
  std::function<void(Scenario&, const std::string&)> set;
};

const std::set<K> kAll{K::SchurVerify, K::YoungCheck, K::BesovNorm, K::FmCheck,
                       K::MikhlinCheck, K::Lemma36Check, K::Corollary32Check};
const std::set<K> kKernel{K::SchurVerify, K::YoungCheck};
const std::set<K> kSymbol{K::BesovNorm, K::FmCheck, K::MikhlinCheck, K::Lemma36Check};
const std::set<K> kGrid{K::YoungCheck, K::BesovNorm, K::FmCheck, K::MikhlinCheck, K::Lemma36Check,
                        K::Corollary32Check};
const std::set<K> kSearch{K::SchurVerify, K::YoungCheck, K::FmCheck};

std::set<K> join(std::initializer_list<std::set<K>> sets) {
  std::set<K> out;
  for (const auto& s : sets) out.insert(s.begin(), s.end());
  return out;
}

const std::map<std::string, KeySpec>& key_table() {
  static const std::map<std::string, KeySpec> table = {
      {"seed", {kAll, [](Scenario& s, const std::string& v) { s.seed = to_int<std::uint64_t>(v); }}},
      {"tolerance", {kAll, [](Scenario& s, const std::string& v) { s.tolerance = to_real(v); }}},
      {"builtin",
       {join({kKernel, kSymbol}),
        [](Scenario& s, const std::string& v) {
          s.builtin = one_of(v, {"identity", "zero", "scalar-decay", "diag-decay", "block", "circulant",
                                 "random-gaussian"});
        }}},
      {"taps", {kKernel, [](Scenario& s, const std::string& v) { s.taps = to_list<Real>(v, to_real); }}},
      {"block", {kSymbol, [](Scenario& s, const std::string& v) { s.block = to_int<int>(v); }}},
      {"theta",
       {{K::SchurVerify, K::YoungCheck, K::Lemma36Check, K::Corollary32Check},
        [](Scenario& s, const std::string& v) { s.theta = to_real(v); }}},
      {"q",
       {{K::SchurVerify, K::YoungCheck, K::BesovNorm, K::FmCheck, K::MikhlinCheck, K::Lemma36Check},
        [](Scenario& s, const std::string& v) { s.q = to_real(v); }}},
      {"p",
       {{K::FmCheck, K::MikhlinCheck, K::Lemma36Check},
        [](Scenario& s, const std::string& v) { s.p = to_real(v); }}},
      {"u",
       {{K::FmCheck, K::MikhlinCheck, K::Lemma36Check, K::Corollary32Check},
        [](Scenario& s, const std::string& v) { s.u = to_real(v); }}},
      {"s", {{K::BesovNorm, K::FmCheck}, [](Scenario& s, const std::string& v) { s.s = to_real(v); }}},
      {"r", {{K::BesovNorm, K::FmCheck}, [](Scenario& s, const std::string& v) { s.r = to_real(v); }}},
      {"domain-points",
       {{K::SchurVerify}, [](Scenario& s, const std::string& v) { s.domain_points = to_int<int>(v); }}},
      {"codomain-points",
       {{K::SchurVerify}, [](Scenario& s, const std::string& v) { s.codomain_points = to_int<int>(v); }}},
      {"source-dim",
       {{K::SchurVerify, K::BesovNorm, K::FmCheck, K::MikhlinCheck, K::Lemma36Check},
        [](Scenario& s, const std::string& v) { s.source_dim = to_int<int>(v); }}},
      {"target-dim",
       {{K::SchurVerify, K::BesovNorm, K::Corollary32Check},
        [](Scenario& s, const std::string& v) { s.target_dim = to_int<int>(v); }}},
      {"source-norm",
       {join({{K::SchurVerify}, kSymbol}), [](Scenario& s, const std::string& v) { s.source_norm = v; }}},
      {"target-norm",
       {join({{K::SchurVerify, K::Corollary32Check}, kSymbol}),
        [](Scenario& s, const std::string& v) { s.target_norm = v; }}},
      {"grid-n", {kGrid, [](Scenario& s, const std::string& v) { s.grid_n = to_int<int>(v); }}},
      {"grid-points", {kGrid, [](Scenario& s, const std::string& v) { s.grid_points = to_int<int>(v); }}},
      {"period", {kGrid, [](Scenario& s, const std::string& v) { s.period = to_real(v); }}},
      {"mode", {{K::FmCheck}, [](Scenario& s, const std::string& v) { s.mode = one_of(v, {"lq-lp", "besov"}); }}},
      {"variant",
       {{K::MikhlinCheck},
        [](Scenario& s, const std::string& v) { s.variant = one_of(v, {"mikhlin", "remark38c"}); }}},
      {"refine",
       {{K::FmCheck, K::MikhlinCheck},
        [](Scenario& s, const std::string& v) { s.refine = to_list<int>(v, to_int<int>); }}},
      {"restarts", {kSearch, [](Scenario& s, const std::string& v) { s.budget.restarts = to_int<int>(v); }}},
      {"iterations",
       {kSearch, [](Scenario& s, const std::string& v) { s.budget.iterations = to_int<int>(v); }}},
      {"sphere-samples",
       {kSearch, [](Scenario& s, const std::string& v) { s.budget.sphere_samples = to_int<int>(v); }}},
      {"samples", {{K::Corollary32Check}, [](Scenario& s, const std::string& v) { s.samples = to_int<int>(v); }}},
  };
  return table;
}

void check_norm_name(const std::string& v) {
  if (v == "euclidean" || v == "ell1" || v == "ellinf") return;
  if (v.rfind("lp:", 0) == 0) {
    exponent::require_valid(to_real(v.substr(3)), "norm exponent");
    return;
  }
  throw Error("unknown norm '" + v + "' (expected euclidean, ell1, ellinf or lp:<p>)");
}

void require_fm_region(Real u, Real p, Real q) {
  if (!(u >= 1.0 && u <= 2.0)) throw Error("u must lie in [1, 2]");
  exponent::require_valid(p, "p");
  exponent::require_valid(q, "q");
  const Real gap = exponent::reciprocal(q) - exponent::reciprocal(p);
  if (gap < -1e-12 || gap > exponent::reciprocal(u) + 1e-12)
    throw Error("outside admissible region: need 0 <= 1/q - 1/p <= 1/u");
}

}  // namespace

std::string_view kind_name(ScenarioKind kind) {
  for (const auto& [k, n] : kKindNames)
    if (k == kind) return n;
  return "unknown";
}

ScenarioKind parse_kind(std::string_view name) {
  for (const auto& [k, n] : kKindNames)
    if (n == name) return k;
  throw Error("unknown scenario kind '" + std::string(name) + "'");
}

std::vector<std::string> preset_names() { return {"young-z4", "identity-fm"}; }

Scenario preset_scenario(const std::string& preset) {
  Scenario s;
  s.name = preset;
  if (preset == "young-z4") {
    s.kind = K::YoungCheck;
    s.builtin = "circulant";
    s.taps = {1.0, 1.0, 0.0, 0.0};
    s.theta = 2.0;
    s.q = 1.0;
  } else if (preset == "identity-fm") {
    s.kind = K::FmCheck;
    s.builtin = "identity";
    s.mode = "lq-lp";
    s.u = 2.0;
    s.q = 2.0;
    s.p = 2.0;
    s.grid_points = 32;
  } else {
    throw Error("unknown preset '" + preset + "'");
  }
  s.given["preset"] = preset;
  return s;
}

void set_parameter(Scenario& scenario, const std::string& key, const std::string& value) {
  const auto& table = key_table();
  const auto it = table.find(key);
  if (it == table.end()) throw Error("unknown key '" + key + "'");
  if (!it->second.kinds.count(scenario.kind))
    throw Error("key '" + key + "' does not apply to kind " + std::string(kind_name(scenario.kind)));
  try {
    it->second.set(scenario, value);
  } catch (const Error& e) {
    throw Error("key '" + key + "': " + e.what());
  }
  scenario.given[key] = value;
}

void validate(const Scenario& s) {
  const bool kernel = s.kind == K::SchurVerify || s.kind == K::YoungCheck;
  const bool symbol = s.kind == K::BesovNorm || s.kind == K::FmCheck || s.kind == K::MikhlinCheck ||
                      s.kind == K::Lemma36Check;
  const auto fail = [](const char* key, const std::string& msg) { throw KeyError(key, msg); };
  if (kernel) {
    blame("q", [&] { make_exponents(s.q, s.theta); });
    const bool ok = s.builtin == "circulant" || s.builtin == "random-gaussian" ||
                    (s.kind == K::SchurVerify && s.builtin == "zero");
    if (!ok) fail("builtin", "builtin '" + s.builtin + "' is not a kernel for " + std::string(kind_name(s.kind)));
    if (s.builtin == "circulant" && s.taps.empty()) fail("taps", "circulant kernels need taps");
  }
  if (symbol && s.builtin == "circulant") fail("builtin", "builtin 'circulant' is not a symbol");
  if (symbol && s.builtin == "random-gaussian" && s.kind != K::BesovNorm)
    fail("builtin", "builtin 'random-gaussian' is not a symbol");
  if (s.builtin == "block" && s.block < 0) fail("block", "block index must be nonnegative");
  if (s.domain_points < 1) fail("domain-points", "point counts must be positive");
  if (s.codomain_points < 1) fail("codomain-points", "point counts must be positive");
  if (s.source_dim < 1) fail("source-dim", "dimensions must be positive");
  if (s.target_dim < 1) fail("target-dim", "dimensions must be positive");
  blame("source-norm", [&] { check_norm_name(s.source_norm); });
  blame("target-norm", [&] { check_norm_name(s.target_norm); });
  if (s.grid_n < 1 || s.grid_n > 3) fail("grid-n", "grid-n must lie in [1, 3]");
  if (s.grid_points < 2 || s.grid_points % 2 != 0) fail("grid-points", "grid sizes must be even and at least 2");
  for (int n : s.refine)
    if (n < 2 || n % 2 != 0) fail("refine", "grid sizes must be even and at least 2");
  if (s.period < 0.0) fail("period", "period must be positive");
  if (s.budget.restarts < 1) fail("restarts", "restarts must be positive");
  if (s.budget.iterations < 0) fail("iterations", "iterations must be nonnegative");
  if (s.budget.sphere_samples < 0) fail("sphere-samples", "sphere-samples must be nonnegative");
  if (s.samples < 1) fail("samples", "samples must be positive");
  if (!(s.tolerance >= 0.0)) fail("tolerance", "tolerance must be nonnegative");
  switch (s.kind) {
    case K::BesovNorm:
      blame("q", [&] { BesovParams::checked(s.s, s.q, s.r); });
      break;
    case K::FmCheck:
      blame("q", [&] { require_fm_region(s.u, s.p, s.q); });
      if (s.mode == "besov") blame("r", [&] { BesovParams::checked(s.s, std::max(s.q, s.p), s.r); });
      break;
    case K::MikhlinCheck:
      blame("q", [&] { require_fm_region(s.u, s.p, s.q); });
      break;
    case K::Lemma36Check:
      blame("q", [&] { require_fm_region(s.u, s.p, s.q); });
      blame("theta", [&] { exponent::require_valid(s.theta, "theta"); });
      if (s.theta < s.u) fail("theta", "theta must lie in [u, inf]");
      break;
    case K::Corollary32Check:
      if (!(s.u >= 1.0 && s.u <= 2.0)) fail("u", "u must lie in [1, 2]");
      blame("theta", [&] { exponent::require_valid(s.theta, "theta"); });
      if (s.theta > exponent::conjugate(s.u)) fail("theta", "outside admissible region: need 1 <= theta <= u'");
      break;
    default:
      break;
  }
}

std::vector<Scenario> parse_config(std::string_view text) {
  std::vector<Scenario> out;
  std::set<std::string> names;
  struct Pending {
    std::string name;
    int line = 0;
    std::vector<std::tuple<int, std::string, std::string>> entries;
  };
  std::optional<Pending> current;

  const auto fail = [](int line, const std::string& msg) -> Error {
    return Error("line " + std::to_string(line) + ": " + msg);
  };

  const auto finish = [&]() {
    if (!current) return;
    const Pending& p = *current;
    // kind and preset first, then everything else in file order
    Scenario s;
    bool have_kind = false;
    for (const auto& [line, key, value] : p.entries)
      if (key == "preset") {
        try {
          s = preset_scenario(value);
        } catch (const Error& e) {
          throw fail(line, std::string("key 'preset': ") + e.what());
        }
        have_kind = true;
      }
    for (const auto& [line, key, value] : p.entries)
      if (key == "kind") {
        try {
          const ScenarioKind k = parse_kind(value);
          if (have_kind && s.given.count("preset") && k != s.kind)
            throw Error("kind conflicts with the preset");
          s.kind = k;
          if (!s.given.count("preset") && (k == K::FmCheck || k == K::MikhlinCheck || k == K::Lemma36Check))
            s.builtin = "identity";
        } catch (const Error& e) {
          throw fail(line, std::string("key 'kind': ") + e.what());
        }
        s.given["kind"] = value;
        have_kind = true;
      }
    if (!have_kind) throw fail(p.line, "scenario '" + p.name + "' has no kind");
    s.name = p.name;
    for (const auto& [line, key, value] : p.entries) {
      if (key == "kind" || key == "preset") continue;
      try {
        set_parameter(s, key, value);
      } catch (const Error& e) {
        throw fail(line, e.what());
      }
    }
    try {
      validate(s);
    } catch (const KeyError& e) {
      // point at the key when the file sets it, else at the section header
      int at = p.line;
      for (const auto& [line, key, value] : p.entries)
        if (key == e.key) at = line;
      throw fail(at, "scenario '" + p.name + "': key '" + e.key + "': " + e.what());
    } catch (const Error& e) {
      throw fail(p.line, "scenario '" + p.name + "': " + e.what());
    }
    out.push_back(std::move(s));
    current.reset();
  };

  std::stringstream ss{std::string(text)};
  std::string raw;
  int line = 0;
  while (std::getline(ss, raw)) {
    ++line;
    const std::string l = trim(raw);
    if (l.empty() || l[0] == '#' || l[0] == ';') continue;
    if (l.front() == '[') {
      if (l.back() != ']') throw fail(line, "unterminated section header");
      const std::string inner = trim(std::string_view(l).substr(1, l.size() - 2));
      if (inner.rfind("scenario", 0) != 0) throw fail(line, "expected [scenario NAME]");
      const std::string name = trim(std::string_view(inner).substr(8));
      if (name.empty()) throw fail(line, "scenario name is empty");
      finish();
      if (!names.insert(name).second) throw fail(line, "duplicate scenario name '" + name + "'");
      current = Pending{name, line, {}};
      continue;
    }
    const auto eq = l.find('=');
    if (eq == std::string::npos) throw fail(line, "expected key = value");
    const std::string key = trim(std::string_view(l).substr(0, eq));
    const std::string value = trim(std::string_view(l).substr(eq + 1));
    if (!current) throw fail(line, "key '" + key + "' outside a [scenario] section");
    if (key.empty()) throw fail(line, "empty key");
    if (key != "kind" && key != "preset" && !key_table().count(key))
      throw fail(line, "unknown key '" + key + "'");
    for (const auto& e : current->entries)
      if (std::get<1>(e) == key) throw fail(line, "duplicate key '" + key + "'");
    current->entries.emplace_back(line, key, value);
  }
  finish();
  return out;
}

}  // namespace opkernel
