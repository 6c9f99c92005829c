#include "gur/experiments.hpp"

#include <cstdio>
#include <stdexcept>
#include <utility>

#include "gur/golden_data.hpp"
#include "gur/std_states.hpp"

namespace gur {

namespace {

const std::vector<std::string> kTable1Rows = {"det-repeatability",
                                              "prep-indistinguishability",
                                              "composition-compatibility",
                                              "ideality",
                                              "local-tomography",
                                              "coherence",
                                              "nonlocality",
                                              "complete-positivity",
                                              "weak-repeatability"};
const std::vector<std::string> kTable1Columns = {"luders", "loc-luders",
                                                 "passive", "dep",
                                                 "lambda:0.25"};
const std::vector<std::string> kTable2Rows = {"A1", "A2", "A3",
                                              "A4", "A5", "A6"};
const std::vector<std::string> kTable2Columns = {
    "cc-dep", "cc-lambda:0.5", "mu:0.5", "von-neumann", "unitary-kick"};

// Checks evaluated independently at single-system and composite scope, where
// a composite-only violation reports as pass-single instead of fail.
bool is_dual_scope(const std::string& check) {
  return check == "det-repeatability" || check == "weak-repeatability" ||
         check == "prep-indistinguishability" || check == "ideality";
}

std::string cell_code(const CheckResult& r) {
  if (r.verdict == Verdict::NotApplicable) return "na";
  if (r.verdict == Verdict::Violated) return "fail";
  if (r.scope == "single-system" && is_dual_scope(r.check))
    return "pass-single";
  return "pass";
}

TableReport build_table(int which, const std::vector<std::string>& rows,
                        const std::vector<std::string>& columns,
                        const CheckConfig& cfg) {
  TableReport t;
  t.table = which;
  t.rows = rows;
  t.columns = columns;
  t.seed = cfg.seed;
  t.trials = cfg.trials;
  t.tol = cfg.tol;
  for (const std::string& row : rows) {
    std::vector<TableCell> line;
    for (const std::string& col : columns) {
      const RulePtr rule = make_rule(col);
      line.push_back({cell_code(run_check(row, *rule, cfg))});
    }
    t.cells.push_back(std::move(line));
  }
  return t;
}

CMat scalar(double v) {
  CMat m(1, 1);
  m(0, 0) = v;
  return m;
}

CheckResult meta_result(std::string check, const CheckConfig& cfg,
                        std::string scope) {
  CheckResult res;
  res.rule = "catalog";
  res.check = std::move(check);
  res.scope = std::move(scope);
  res.tol = cfg.tol;
  res.seed = cfg.seed;
  return res;
}

void meta_violation(CheckResult& res, nlohmann::json inputs) {
  res.verdict = Verdict::Violated;
  res.witness = Witness{std::move(inputs), scalar(1.0), scalar(0.0), 1.0};
}

std::string format_mu(double mu) {
  char buf[48];
  std::snprintf(buf, sizeof(buf), "%.17g", mu);
  return buf;
}

// True when the rule's single-system update agrees with luders on random
// states and projectors at every configured single dimension.
bool matches_luders_single(const UpdateRule& rule, const CheckConfig& cfg) {
  const RulePtr luders = make_rule("luders");
  Rng rng(Rng::derive(cfg.seed, 0x1d1u));
  for (const auto& dims : cfg.single_spaces()) {
    const CompositeSpace sp(dims);
    const int d = sp.total();
    for (int i = 0; i < 100; ++i) {
      const QuantumState s{sp, random_density(d, rng.uniform_int(1, d), rng)};
      const Outcome o{random_projector(d, rng.uniform_int(1, d), rng), 0};
      const CMat a = gemenge_density(rule.apply(o, s)).matrix;
      const CMat b = gemenge_density(luders->apply(o, s)).matrix;
      if (max_diff(a, b) > cfg.tol) return false;
    }
  }
  return true;
}

}  // namespace

TableReport reproduce_table1(const CheckConfig& cfg) {
  return build_table(1, kTable1Rows, kTable1Columns, cfg);
}

TableReport reproduce_table2(const CheckConfig& cfg) {
  return build_table(2, kTable2Rows, kTable2Columns, cfg);
}

TableReport expected_table(int which) {
  const char* text = nullptr;
  if (which == 1) text = data::table1_expected_json();
  if (which == 2) text = data::table2_expected_json();
  if (text == nullptr)
    throw std::invalid_argument("expected_table: table must be 1 or 2");
  const nlohmann::json j = nlohmann::json::parse(text);
  TableReport t;
  t.table = j.at("table");
  t.rows = j.at("rows").get<std::vector<std::string>>();
  t.columns = j.at("columns").get<std::vector<std::string>>();
  for (const std::string& row : t.rows) {
    std::vector<TableCell> line;
    for (const auto& code : j.at("cells").at(row))
      line.push_back({code.get<std::string>()});
    t.cells.push_back(std::move(line));
  }
  return t;
}

std::vector<TableMismatch> compare_tables(const TableReport& computed,
                                          const TableReport& expected) {
  std::vector<TableMismatch> out;
  for (std::size_t r = 0; r < expected.rows.size(); ++r) {
    for (std::size_t c = 0; c < expected.columns.size(); ++c) {
      const std::string& want = expected.cells[r][c].code;
      std::string got = "absent";
      for (std::size_t rr = 0; rr < computed.rows.size(); ++rr) {
        if (computed.rows[rr] != expected.rows[r]) continue;
        for (std::size_t cc = 0; cc < computed.columns.size(); ++cc)
          if (computed.columns[cc] == expected.columns[c])
            got = computed.cells[rr][cc].code;
      }
      if (got != want)
        out.push_back({expected.rows[r], expected.columns[c], want, got});
    }
  }
  return out;
}

nlohmann::json table_to_json(const TableReport& t) {
  nlohmann::json cells = nlohmann::json::object();
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    nlohmann::json line = nlohmann::json::array();
    for (const TableCell& cell : t.cells[r]) line.push_back(cell.code);
    cells[t.rows[r]] = line;
  }
  return {{"table", t.table}, {"columns", t.columns}, {"rows", t.rows},
          {"cells", cells},   {"seed", t.seed},       {"trials", t.trials},
          {"tol", t.tol}};
}

std::string table_to_markdown(const TableReport& t) {
  const auto glyph = [](const std::string& code) -> std::string {
    if (code == "pass") return "✓";
    if (code == "pass-single") return "(✓)";
    if (code == "fail") return "✗";
    return "n/a";
  };
  std::string out = t.table == 1 ? "| property |" : "| assumption |";
  for (const std::string& col : t.columns) out += " " + col + " |";
  out += "\n|---|";
  for (std::size_t c = 0; c < t.columns.size(); ++c) out += "---|";
  out += "\n";
  for (std::size_t r = 0; r < t.rows.size(); ++r) {
    out += "| " + t.rows[r] + " |";
    for (const TableCell& cell : t.cells[r]) out += " " + glyph(cell.code) + " |";
    out += "\n";
  }
  return out;
}

bool CounterexampleRecord::matches(double tol) const {
  return distance_lhs <= tol && distance_rhs <= tol;
}

CounterexampleRecord counterexample(const std::string& name, double mu) {
  CounterexampleRecord rec;
  rec.name = name;
  if (name == "dep-cc") {
    const CompositeSpace sp{2, 2};
    const QuantumState s = make_state(sp, tensor(basis_projector(2, 0),
                                               basis_projector(2, 0)));
    const Outcome local{basis_projector(2, 0), 0};
    const Outcome global{embedded_projector(local, sp), std::nullopt};
    const RulePtr dep = make_rule("dep");
    rec.inputs = {{"rule", "dep"},
                  {"state", state_to_json(s)},
                  {"outcome", outcome_to_json(local)}};
    rec.computed_lhs = gemenge_density(dep->apply(local, s)).matrix;
    rec.computed_rhs = gemenge_density(dep->apply(global, s)).matrix;
    const CMat half = CMat::Identity(2, 2) / 2.0;
    rec.expected_lhs = tensor(half, basis_projector(2, 0));
    rec.expected_rhs = tensor(half, half);
  } else if (name == "passive-gemenge") {
    const CompositeSpace sp{2};
    Gemenge gz, gx;
    gz.items.push_back({0.5, {sp, basis_projector(2, 0)}});
    gz.items.push_back({0.5, {sp, basis_projector(2, 1)}});
    gx.items.push_back({0.5, {sp, plus_projector()}});
    gx.items.push_back({0.5, {sp, minus_projector()}});
    const Outcome o{basis_projector(2, 0), 0};
    const RulePtr passive = make_rule("passive");
    rec.inputs = {{"rule", "passive"},
                  {"gemenge1", gemenge_to_json(gz)},
                  {"gemenge2", gemenge_to_json(gx)},
                  {"outcome", outcome_to_json(o)}};
    rec.computed_lhs = gemenge_density(apply_gemenge(*passive, o, gz)).matrix;
    rec.computed_rhs = gemenge_density(apply_gemenge(*passive, o, gx)).matrix;
    rec.expected_lhs = 0.5 * basis_projector(2, 0);
    rec.expected_rhs = CMat::Identity(2, 2) / 4.0;
  } else if (name == "mu-ordering") {
    const CompositeSpace sp{2, 2};
    const CMat phi = bell_phi_plus();
    const QuantumState s = make_state(sp, phi);
    const Outcome ox{basis_projector(2, 0), 0};
    const Outcome oy{basis_projector(2, 1), 1};
    const RulePtr rule = make_rule("mu:" + format_mu(mu));
    rec.inputs = {{"rule", rule->name()},
                  {"state", state_to_json(s)},
                  {"outcome_x", outcome_to_json(ox)},
                  {"outcome_y", outcome_to_json(oy)}};
    rec.computed_lhs =
        gemenge_density(apply_sequence(*rule, {ox, oy}, pure_gemenge(s))).matrix;
    rec.computed_rhs =
        gemenge_density(apply_sequence(*rule, {oy, ox}, pure_gemenge(s))).matrix;
    const CMat e11 = tensor(basis_projector(2, 1), basis_projector(2, 1));
    const CMat e00 = tensor(basis_projector(2, 0), basis_projector(2, 0));
    rec.expected_lhs = (mu / 4.0) * ((1.0 - mu) * e11 + mu * phi);
    rec.expected_rhs = (mu / 4.0) * ((1.0 - mu) * e00 + mu * phi);
  } else {
    throw std::invalid_argument("unknown counterexample: " + name);
  }
  rec.distance_lhs = max_diff(rec.computed_lhs, rec.expected_lhs);
  rec.distance_rhs = max_diff(rec.computed_rhs, rec.expected_rhs);
  return rec;
}

std::vector<std::string> counterexample_names() {
  return {"dep-cc", "passive-gemenge", "mu-ordering"};
}

nlohmann::json counterexample_to_json(const CounterexampleRecord& r) {
  return {{"name", r.name},
          {"inputs", r.inputs},
          {"expected_lhs", matrix_to_json(r.expected_lhs)},
          {"expected_rhs", matrix_to_json(r.expected_rhs)},
          {"computed_lhs", matrix_to_json(r.computed_lhs)},
          {"computed_rhs", matrix_to_json(r.computed_rhs)},
          {"distance_lhs", r.distance_lhs},
          {"distance_rhs", r.distance_rhs},
          {"matches", r.matches()}};
}

CheckResult verify_lemma1(const CheckConfig& cfg) {
  CheckResult res = meta_result("lemma1", cfg, "single-system");
  for (const std::string& name : catalog_rule_names()) {
    const RulePtr rule = make_rule(name);
    ++res.trials_run;
    const CheckResult coh = check_coherence(*rule, cfg);
    if (coh.verdict != Verdict::Holds) continue;
    const CheckResult det = check_det_repeatability(*rule, cfg);
    const CheckResult idl = check_ideality(*rule, cfg);
    if (det.verdict != Verdict::Holds || idl.verdict != Verdict::Holds) {
      meta_violation(res, {{"rule", name},
                           {"coherence", to_string(coh.verdict)},
                           {"det-repeatability", to_string(det.verdict)},
                           {"ideality", to_string(idl.verdict)}});
      return res;
    }
  }
  res.verdict = Verdict::Holds;
  return res;
}

CheckResult verify_theorem1(const CheckConfig& cfg) {
  CheckResult res = meta_result("theorem1", cfg, "single-system");
  CheckConfig luders_cfg = cfg;
  luders_cfg.dims = {{2}, {3}, {4}};
  luders_cfg.trials = std::max(cfg.trials, 1200);
  const CheckResult luders_coh =
      check_coherence(*make_rule("luders"), luders_cfg);
  res.trials_run += luders_coh.trials_run;
  if (luders_coh.verdict != Verdict::Holds) {
    meta_violation(res, {{"rule", "luders"},
                         {"part", "a"},
                         {"coherence", to_string(luders_coh.verdict)}});
    return res;
  }
  std::vector<std::string> names = catalog_rule_names();
  names.push_back("lambda:0");
  for (const std::string& name : names) {
    if (name == "luders") continue;
    const RulePtr rule = make_rule(name);
    ++res.trials_run;
    if (matches_luders_single(*rule, cfg)) continue;
    const CheckResult coh = check_coherence(*rule, cfg);
    if (coh.verdict != Verdict::Violated) {
      meta_violation(res, {{"rule", name},
                           {"part", "b"},
                           {"coherence", to_string(coh.verdict)}});
      return res;
    }
  }
  res.verdict = Verdict::Holds;
  return res;
}

CheckResult verify_theorem2(const CheckConfig& cfg) {
  CheckResult res = meta_result("theorem2", cfg, "both");
  if (cfg.composite_spaces().empty()) {
    res.verdict = Verdict::NotApplicable;
    return res;
  }
  std::vector<std::string> passing;
  Verdict loc_coherence = Verdict::NotApplicable;
  Verdict loc_cc = Verdict::NotApplicable;
  for (const std::string& name : catalog_rule_names()) {
    const RulePtr rule = make_rule(name);
    ++res.trials_run;
    const CheckResult coh = check_coherence(*rule, cfg);
    const CheckResult cc = check_composition_compat(*rule, cfg);
    if (coh.verdict == Verdict::Holds && cc.verdict == Verdict::Holds)
      passing.push_back(name);
    if (name == "loc-luders") {
      loc_coherence = coh.verdict;
      loc_cc = cc.verdict;
    }
  }
  const bool unique = passing == std::vector<std::string>{"luders"};
  const bool separation =
      loc_coherence == Verdict::Holds && loc_cc == Verdict::Violated;
  if (!unique || !separation) {
    meta_violation(res, {{"passing", passing},
                         {"loc-luders coherence", to_string(loc_coherence)},
                         {"loc-luders cc", to_string(loc_cc)}});
    return res;
  }
  res.verdict = Verdict::Holds;
  return res;
}

ChshReport chsh(const UpdateRule& rule, const CheckConfig& cfg) {
  ChshReport rep;
  rep.rule = rule.name();
  CheckConfig gate = cfg;
  gate.dims = {{2, 2}};
  rep.order_dependent = check_A6(rule, gate).verdict != Verdict::Holds;
  rep.values.push_back(chsh_value(rule, true));
  if (rep.order_dependent) rep.values.push_back(chsh_value(rule, false));
  return rep;
}

}  // namespace gur
