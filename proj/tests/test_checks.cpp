#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "gur/checks.hpp"
#include "gur/std_states.hpp"

using namespace gur;

namespace {

CheckConfig fast_config() {
  CheckConfig cfg;
  cfg.trials = 60;
  cfg.seed = 42;
  return cfg;
}

// Deliberately broken rule: doubles the luders output, breaking the born
// weight while staying homogeneous.
class DoublingRule : public UpdateRule {
 public:
  std::string name() const override { return "doubling"; }
  Gemenge apply(const Outcome& o, const QuantumState& s) const override {
    Gemenge g = luders(o, s);
    for (GemengeItem& item : g.items) item.state.matrix *= 2.0;
    return g;
  }
};

nlohmann::json results_json(const std::vector<CheckResult>& rs) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CheckResult& r : rs) arr.push_back(check_result_to_json(r));
  return arr;
}

}  // namespace

TEST_CASE("observable validation flags structural defects") {
  Observable good;
  good.outcomes.push_back({basis_projector(2, 0), 0});
  good.outcomes.push_back({basis_projector(2, 1), 0});
  CHECK(validate_observable(good).verdict == Verdict::Holds);

  Observable overlapping;
  overlapping.outcomes.push_back({basis_projector(2, 0), 0});
  overlapping.outcomes.push_back({plus_projector(), 0});
  const CheckResult r1 = validate_observable(overlapping);
  CHECK(r1.verdict == Verdict::Violated);
  CHECK(r1.witness.has_value());

  Observable incomplete;
  incomplete.outcomes.push_back({basis_projector(3, 0), 0});
  incomplete.outcomes.push_back({basis_projector(3, 1), 0});
  CHECK(validate_observable(incomplete).verdict == Verdict::Violated);

  Observable skewed;
  CMat notproj(2, 2);
  notproj << 0.5, 0.5, 0.5, 0.5;
  notproj(0, 1) = 0.7;
  skewed.outcomes.push_back({notproj, 0});
  skewed.outcomes.push_back({CMat::Identity(2, 2) - notproj, 0});
  CHECK(validate_observable(skewed).verdict == Verdict::Violated);
}

TEST_CASE("definition-level checks hold across the catalog") {
  const CheckConfig cfg = fast_config();
  for (const std::string& name : catalog_rule_names()) {
    const RulePtr rule = make_rule(name);
    CHECK(check_born(*rule, cfg).verdict == Verdict::Holds);
    CHECK(check_homogeneity(*rule, cfg).verdict == Verdict::Holds);
  }
  const DoublingRule bad;
  const CheckResult r = check_born(bad, cfg);
  CHECK(r.verdict == Verdict::Violated);
  REQUIRE(r.witness.has_value());
  CHECK(r.witness->distance > 0.01);
}

TEST_CASE("assumption verdicts match the reference columns") {
  const CheckConfig cfg = fast_config();
  // A1 holds throughout the catalog.
  for (const std::string& name : {"luders", "cc-dep", "mu:0.5", "unitary-kick"})
    CHECK(check_A1(*make_rule(name), cfg).verdict == Verdict::Holds);
  // A2 singles out the refinement-dependent rule.
  CHECK(check_A2(*make_rule("von-neumann"), cfg).verdict == Verdict::Violated);
  CHECK(check_A2(*make_rule("luders"), cfg).verdict == Verdict::Holds);
  CHECK(check_A2(*make_rule("cc-dep"), cfg).verdict == Verdict::Holds);
  // A3 singles out the kicked rule.
  CHECK(check_A3(*make_rule("unitary-kick"), cfg).verdict ==
        Verdict::Violated);
  CHECK(check_A3(*make_rule("luders"), cfg).verdict == Verdict::Holds);
  CHECK(check_A3(*make_rule("von-neumann"), cfg).verdict == Verdict::Holds);
  // A4 holds throughout the catalog.
  CHECK(check_A4(*make_rule("luders"), cfg).verdict == Verdict::Holds);
  CHECK(check_A4(*make_rule("cc-dep"), cfg).verdict == Verdict::Holds);
  CHECK(check_A4(*make_rule("mu:0.5"), cfg).verdict == Verdict::Holds);
  // A5 rejects the rules that erase or distort the untouched remainder.
  CHECK(check_A5(*make_rule("cc-dep"), cfg).verdict == Verdict::Violated);
  CHECK(check_A5(*make_rule("cc-lambda:0.5"), cfg).verdict ==
        Verdict::Violated);
  CHECK(check_A5(*make_rule("mu:0.5"), cfg).verdict == Verdict::Holds);
  CHECK(check_A5(*make_rule("von-neumann"), cfg).verdict == Verdict::Holds);
  CHECK(check_A5(*make_rule("unitary-kick"), cfg).verdict == Verdict::Holds);
  // A6 rejects order-dependent composition.
  CHECK(check_A6(*make_rule("cc-lambda:0.5"), cfg).verdict ==
        Verdict::Violated);
  CHECK(check_A6(*make_rule("mu:0.5"), cfg).verdict == Verdict::Violated);
  CHECK(check_A6(*make_rule("luders"), cfg).verdict == Verdict::Holds);
  CHECK(check_A6(*make_rule("von-neumann"), cfg).verdict == Verdict::Holds);
  CHECK(check_A6(*make_rule("unitary-kick"), cfg).verdict == Verdict::Holds);
  // cc-dep composes to a different global update than its own reapplication,
  // even though the reference matrix records it as order-independent.
  CHECK(check_A6(*make_rule("cc-dep"), cfg).verdict == Verdict::Violated);
}

TEST_CASE("operational verdicts match the reference columns") {
  const CheckConfig cfg = fast_config();
  const RulePtr luders_rule = make_rule("luders");
  const RulePtr locl = make_rule("loc-luders");
  const RulePtr pas = make_rule("passive");
  const RulePtr dep = make_rule("dep");
  const RulePtr lam = make_rule("lambda:0.25");

  CHECK(check_det_repeatability(*luders_rule, cfg).verdict == Verdict::Holds);
  CHECK(check_det_repeatability(*locl, cfg).verdict == Verdict::Holds);
  CHECK(check_det_repeatability(*pas, cfg).verdict == Verdict::Violated);
  CHECK(check_det_repeatability(*dep, cfg).verdict == Verdict::Violated);
  CHECK(check_det_repeatability(*lam, cfg).verdict == Verdict::Violated);

  CHECK(check_weak_repeatability(*luders_rule, cfg).verdict == Verdict::Holds);
  CHECK(check_weak_repeatability(*lam, cfg).verdict == Verdict::Holds);
  const CheckResult weak_pas = check_weak_repeatability(*pas, cfg);
  CHECK(weak_pas.verdict == Verdict::Violated);
  CHECK(check_weak_repeatability(*dep, cfg).verdict == Verdict::Violated);

  const CheckResult prep_locl = check_prep_indistinguishability(*locl, cfg);
  CHECK(prep_locl.verdict == Verdict::Holds);
  CHECK(prep_locl.scope == "single-system");
  CHECK(check_prep_indistinguishability(*luders_rule, cfg).verdict ==
        Verdict::Holds);
  CHECK(check_prep_indistinguishability(*pas, cfg).verdict ==
        Verdict::Violated);
  CHECK(check_prep_indistinguishability(*dep, cfg).verdict == Verdict::Holds);
  CHECK(check_prep_indistinguishability(*lam, cfg).verdict ==
        Verdict::Violated);

  CHECK(check_composition_compat(*luders_rule, cfg).verdict == Verdict::Holds);
  CHECK(check_composition_compat(*locl, cfg).verdict == Verdict::Violated);
  CHECK(check_composition_compat(*pas, cfg).verdict == Verdict::Holds);
  CHECK(check_composition_compat(*dep, cfg).verdict == Verdict::Violated);
  CHECK(check_composition_compat(*lam, cfg).verdict == Verdict::Violated);

  const CheckResult ideal_lam = check_ideality(*lam, cfg);
  CHECK(ideal_lam.verdict == Verdict::Holds);
  CHECK(ideal_lam.scope == "single-system");
  CHECK(check_ideality(*luders_rule, cfg).verdict == Verdict::Holds);
  CHECK(check_ideality(*pas, cfg).verdict == Verdict::Holds);
  CHECK(check_ideality(*dep, cfg).verdict == Verdict::Violated);

  CHECK(check_local_tomography(*luders_rule, cfg).verdict == Verdict::Holds);
  CHECK(check_local_tomography(*locl, cfg).verdict == Verdict::Violated);
  CHECK(check_local_tomography(*dep, cfg).verdict == Verdict::Holds);

  CHECK(check_coherence(*luders_rule, cfg).verdict == Verdict::Holds);
  CHECK(check_coherence(*locl, cfg).verdict == Verdict::Holds);
  CHECK(check_coherence(*pas, cfg).verdict == Verdict::Violated);
  CHECK(check_coherence(*dep, cfg).verdict == Verdict::Violated);
  CHECK(check_coherence(*lam, cfg).verdict == Verdict::Violated);

  CHECK(check_nonlocality(*luders_rule, cfg).verdict == Verdict::Holds);
  CHECK(check_nonlocality(*locl, cfg).verdict == Verdict::Violated);
  CHECK(check_nonlocality(*dep, cfg).verdict == Verdict::Holds);

  CHECK(check_complete_positivity(*luders_rule, cfg).verdict ==
        Verdict::Holds);
  CHECK(check_complete_positivity(*locl, cfg).verdict == Verdict::Violated);
  CHECK(check_complete_positivity(*pas, cfg).verdict == Verdict::Violated);
  CHECK(check_complete_positivity(*dep, cfg).verdict == Verdict::Holds);
  CHECK(check_complete_positivity(*lam, cfg).verdict == Verdict::Violated);
}

TEST_CASE("composite-only checks report not-applicable without composites") {
  CheckConfig cfg = fast_config();
  cfg.dims = {{2}, {3}};
  const RulePtr rule = make_rule("luders");
  CHECK(check_A4(*rule, cfg).verdict == Verdict::NotApplicable);
  CHECK(check_A6(*rule, cfg).verdict == Verdict::NotApplicable);
  CHECK(check_composition_compat(*rule, cfg).verdict ==
        Verdict::NotApplicable);
  CHECK(check_local_tomography(*rule, cfg).verdict == Verdict::NotApplicable);
  CHECK(check_nonlocality(*rule, cfg).verdict == Verdict::NotApplicable);
  const CheckResult det = check_det_repeatability(*rule, cfg);
  CHECK(det.verdict == Verdict::Holds);
  CHECK(det.scope == "single-system");
  CHECK(check_coherence(*rule, cfg).verdict == Verdict::Holds);
}

TEST_CASE("witnesses replay to their recorded distances") {
  const CheckConfig cfg = fast_config();
  int violations = 0;
  for (const std::string& name : catalog_rule_names()) {
    const RulePtr rule = make_rule(name);
    for (const CheckResult& r : run_all(*rule, cfg)) {
      if (r.verdict != Verdict::Violated) continue;
      REQUIRE(r.witness.has_value());
      ++violations;
      CHECK(std::abs(replay_witness(r) - r.witness->distance) <= 1e-10);
    }
  }
  CHECK(violations > 20);
  // Results without witnesses cannot be replayed.
  const CheckResult ok = check_born(*make_rule("luders"), cfg);
  CHECK_THROWS_AS(replay_witness(ok), std::invalid_argument);
}

TEST_CASE("run_all is deterministic for a fixed seed") {
  const CheckConfig cfg = fast_config();
  for (const std::string& name : {"luders", "mu:0.5"}) {
    const RulePtr rule = make_rule(name);
    const auto a = results_json(run_all(*rule, cfg));
    const auto b = results_json(run_all(*rule, cfg));
    CHECK(a.dump() == b.dump());
  }
  CheckConfig other = cfg;
  other.seed = 43;
  const auto a42 = results_json(run_all(*make_rule("passive"), cfg));
  const auto a43 = results_json(run_all(*make_rule("passive"), other));
  CHECK(a42.dump() != a43.dump());
}

TEST_CASE("run_check dispatches by name") {
  const CheckConfig cfg = fast_config();
  const RulePtr rule = make_rule("cc-dep");
  const CheckResult direct = check_A5(*rule, cfg);
  const CheckResult named = run_check("A5", *rule, cfg);
  CHECK(check_result_to_json(direct).dump() ==
        check_result_to_json(named).dump());
  CHECK_THROWS_AS(run_check("A7", *rule, cfg), std::invalid_argument);
  CHECK(all_check_names().size() == 17);
  // run_all covers every name in the fixed order.
  const auto all = run_all(*rule, cfg);
  REQUIRE(all.size() == all_check_names().size());
  for (std::size_t i = 0; i < all.size(); ++i)
    CHECK(all[i].check == all_check_names()[i]);
}

TEST_CASE("chsh scores at the fixed settings") {
  const double tsirelson = 2.0 * std::sqrt(2.0);
  CHECK(std::abs(chsh_value(*make_rule("luders")) - tsirelson) <= 1e-9);
  CHECK(std::abs(chsh_value(*make_rule("luders"), false) - tsirelson) <=
        1e-9);
  CHECK(std::abs(chsh_value(*make_rule("dep")) - tsirelson) <= 1e-9);
  CHECK(chsh_value(*make_rule("loc-luders")) <= 2.0 + 1e-9);
  CHECK(chsh_value(*make_rule("passive")) <= 2.0 + 1e-9);
  CHECK(chsh_value(*make_rule("unitary-kick")) <= 2.0 + 1e-9);
  CHECK(chsh_value(*make_rule("lambda:0.25")) <= 2.0 + 1e-9);
}
