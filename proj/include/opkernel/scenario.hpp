#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "opkernel/norm_estimate.hpp"

namespace opkernel {

enum class ScenarioKind {
  SchurVerify,
  YoungCheck,
  BesovNorm,
  FmCheck,
  MikhlinCheck,
  Lemma36Check,
  Corollary32Check,
};

std::string_view kind_name(ScenarioKind kind);
ScenarioKind parse_kind(std::string_view name);

/// One experiment. Every field has a default; `given` records the keys that
/// were set explicitly (echoed in reports).
struct Scenario {
  std::string name;
  ScenarioKind kind = ScenarioKind::SchurVerify;
  std::uint64_t seed = 1;

  std::string builtin = "random-gaussian";  ///< identity for fm, mikhlin and lemma36 kinds
  std::vector<Real> taps;
  int block = 1;

  Real theta = 2.0;
  Real q = 1.0;
  Real p = 2.0;
  Real u = 2.0;
  Real s = 0.0;
  Real r = kInf;

  int domain_points = 6;
  int codomain_points = 6;
  int source_dim = 1;
  int target_dim = 1;
  std::string source_norm = "euclidean";
  std::string target_norm = "euclidean";

  int grid_n = 1;
  int grid_points = 32;
  Real period = 0.0;  ///< 0 selects 2 pi

  std::string mode = "lq-lp";       ///< fm-check: lq-lp | besov
  std::string variant = "mikhlin";  ///< mikhlin-check: mikhlin | remark38c
  std::vector<int> refine;          ///< grid sizes for a refinement study

  SearchBudget budget{20, 50, 200, 1e-15};
  int samples = 100;
  Real tolerance = 1e-9;

  /// key -> value text as written (after preset expansion), for the echo.
  std::map<std::string, std::string> given;
};

/// Built-in scenarios: "young-z4" and "identity-fm".
Scenario preset_scenario(const std::string& preset);
std::vector<std::string> preset_names();

/// Parses the scenario config format:
///
///   # comment
///   [scenario NAME]
///   kind = schur-verify
///   theta = 2
///
/// Keys are validated against the kind; errors carry the line number and
/// the offending key. Duplicate names are rejected.
std::vector<Scenario> parse_config(std::string_view text);

/// Applies a single key = value to a scenario (used by the CLI overrides).
void set_parameter(Scenario& scenario, const std::string& key, const std::string& value);

/// Checks kind-specific parameter constraints; throws Error.
void validate(const Scenario& scenario);

}  // namespace opkernel
