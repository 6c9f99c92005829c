#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "gur/json_io.hpp"
#include "gur/rules.hpp"

namespace gur {

enum class Verdict { Holds, Violated, NotApplicable };

std::string to_string(Verdict v);

// Exact inputs and both sides of a failed (or scope-limited) equation.
// `inputs` carries everything needed to recompute the distance.
struct Witness {
  nlohmann::json inputs;
  CMat lhs;
  CMat rhs;
  double distance = 0.0;
};

struct CheckResult {
  std::string rule;
  std::string check;
  Verdict verdict = Verdict::Holds;
  // "single-system", "composite" or "both": the scope at which the verdict
  // holds (for Holds) or the scope the check covers (otherwise).
  std::string scope = "both";
  int trials_run = 0;
  double tol = 1e-9;
  std::uint64_t seed = 0;
  std::optional<Witness> witness;
};

nlohmann::json check_result_to_json(const CheckResult& r);

struct CheckConfig {
  int trials = 200;
  // Spaces used for composite-scope trials; entries of length 1 are used
  // for single-system scope instead (defaults to dims 2, 3, 4 when absent).
  std::vector<std::vector<int>> dims = {{2, 2}, {2, 3}, {2, 2, 2}};
  double tol = 1e-9;
  std::uint64_t seed = 42;

  std::vector<std::vector<int>> composite_spaces() const;
  std::vector<std::vector<int>> single_spaces() const;
};

// Orthogonality, idempotence and completeness of a projector family.
CheckResult validate_observable(const Observable& obs, double tol = 1e-9);

// Definition-level constraints.
CheckResult check_born(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_homogeneity(const UpdateRule& rule, const CheckConfig& cfg);

// Assumptions A1..A6.
CheckResult check_A1(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_A2(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_A3(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_A4(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_A5(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_A6(const UpdateRule& rule, const CheckConfig& cfg);

// Operational properties.
CheckResult check_det_repeatability(const UpdateRule& rule,
                                    const CheckConfig& cfg);
CheckResult check_weak_repeatability(const UpdateRule& rule,
                                     const CheckConfig& cfg);
CheckResult check_prep_indistinguishability(const UpdateRule& rule,
                                            const CheckConfig& cfg);
CheckResult check_composition_compat(const UpdateRule& rule,
                                     const CheckConfig& cfg);
CheckResult check_ideality(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_local_tomography(const UpdateRule& rule,
                                   const CheckConfig& cfg);
CheckResult check_coherence(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_nonlocality(const UpdateRule& rule, const CheckConfig& cfg);
CheckResult check_complete_positivity(const UpdateRule& rule,
                                      const CheckConfig& cfg);

// Every check above, in a fixed order, deterministic under cfg.seed.
std::vector<CheckResult> run_all(const UpdateRule& rule,
                                 const CheckConfig& cfg);

// Run one check by name (A1..A6, born, homogeneity, det-repeatability, ...).
CheckResult run_check(const std::string& check_name, const UpdateRule& rule,
                      const CheckConfig& cfg);
std::vector<std::string> all_check_names();

// Recompute a witness distance from its serialized inputs.
double replay_witness(const CheckResult& r);

// CHSH score on the singlet at the fixed settings a in {0, pi/2},
// b in {pi/4, 3pi/4}; joint probabilities come from sequential updates,
// measuring subsystem 0 first when a_first is true.
double chsh_value(const UpdateRule& rule, bool a_first = true);

}  // namespace gur
