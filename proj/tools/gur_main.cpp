#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "gur/experiments.hpp"

namespace {

using gur::CheckConfig;
using gur::CheckResult;
using gur::Verdict;

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

std::vector<int> parse_dims_entry(const std::string& entry) {
  std::vector<int> dims;
  for (const std::string& part : split_csv(entry)) {
    std::size_t used = 0;
    int d = 0;
    try {
      d = std::stoi(part, &used);
    } catch (const std::exception&) {
      throw CLI::ValidationError("--dims", "not a number: " + part);
    }
    if (used != part.size() || d < 2)
      throw CLI::ValidationError("--dims", "dimensions must be integers >= 2");
    dims.push_back(d);
  }
  if (dims.empty()) throw CLI::ValidationError("--dims", "empty entry");
  return dims;
}

struct Options {
  std::string rule;
  std::string only;
  std::vector<std::string> dims;
  int table = 1;
  std::string expect;
  std::string format = "json";
  std::string out;
  std::string name;
  double mu = 0.5;
  double lambda = 0.25;
  CheckConfig cfg;
};

void add_common(CLI::App* sub, Options& opt) {
  sub->add_option("--dims", opt.dims,
                  "factor dimensions of one space as a comma list; repeat "
                  "for several spaces (default 2,2 2,3 2,2,2)");
  sub->add_option("--trials", opt.cfg.trials, "random trials per check")
      ->check(CLI::PositiveNumber);
  sub->add_option("--seed", opt.cfg.seed, "rng seed (default: GUR_SEED or 42)");
  sub->add_option("--tol", opt.cfg.tol, "numerical tolerance")
      ->check(CLI::PositiveNumber);
  sub->add_option("--format", opt.format, "output format")
      ->check(CLI::IsMember({"json", "md"}));
  sub->add_option("--out", opt.out, "write output to this file");
}

void finish_config(Options& opt) {
  if (!opt.dims.empty()) {
    opt.cfg.dims.clear();
    for (const std::string& entry : opt.dims)
      opt.cfg.dims.push_back(parse_dims_entry(entry));
  }
}

// Appends a parameter to the bare rule names that take one.
std::string resolve_rule(const Options& opt, const CLI::App* sub) {
  std::string name = opt.rule;
  if (name.find(':') != std::string::npos) return name;
  const auto with = [](const std::string& base, double v) {
    std::ostringstream os;
    os << base << ':' << v;
    return os.str();
  };
  if ((name == "lambda" || name == "cc-lambda") && sub->count("--lambda"))
    return with(name, opt.lambda);
  if (name == "mu" && sub->count("--mu")) return with(name, opt.mu);
  return name;
}

int emit(const std::string& text, const std::string& out_path) {
  std::string body = text;
  if (body.empty() || body.back() != '\n') body += '\n';
  if (out_path.empty()) {
    std::cout << body;
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "error: cannot open " << out_path << "\n";
    return 2;
  }
  f << body;
  return 0;
}

bool dual_scope(const std::string& check) {
  return check == "det-repeatability" || check == "weak-repeatability" ||
         check == "prep-indistinguishability" || check == "ideality";
}

std::string cell_code(const CheckResult& r) {
  if (r.verdict == Verdict::NotApplicable) return "na";
  if (r.verdict == Verdict::Violated) return "fail";
  if (r.scope == "single-system" && dual_scope(r.check)) return "pass-single";
  return "pass";
}

std::string results_markdown(const std::vector<CheckResult>& results) {
  std::string out = "| check | verdict | scope | trials | distance |\n";
  out += "|---|---|---|---|---|\n";
  for (const CheckResult& r : results) {
    std::ostringstream line;
    line << "| " << r.check << " | " << gur::to_string(r.verdict) << " | "
         << r.scope << " | " << r.trials_run << " | ";
    if (r.witness)
      line << r.witness->distance;
    else
      line << "-";
    line << " |\n";
    out += line.str();
  }
  return out;
}

int cmd_check(Options& opt, const CLI::App* sub) {
  finish_config(opt);
  gur::RulePtr rule;
  try {
    rule = gur::make_rule(resolve_rule(opt, sub));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::vector<std::string> checks =
      opt.only.empty() ? gur::all_check_names() : split_csv(opt.only);
  const std::vector<std::string> known = gur::all_check_names();
  for (const std::string& c : checks) {
    if (std::find(known.begin(), known.end(), c) == known.end()) {
      std::cerr << "error: unknown check: " << c << "\n";
      return 2;
    }
  }
  std::vector<CheckResult> results;
  for (const std::string& c : checks)
    results.push_back(gur::run_check(c, *rule, opt.cfg));
  std::string text;
  if (opt.format == "md") {
    text = results_markdown(results);
  } else {
    nlohmann::json arr = nlohmann::json::array();
    for (const CheckResult& r : results)
      arr.push_back(gur::check_result_to_json(r));
    text = arr.dump(2);
  }
  const int code = emit(text, opt.out);
  if (code != 0) return code;
  if (opt.expect.empty()) return 0;
  int which = 0;
  if (opt.expect == "table1") which = 1;
  if (opt.expect == "table2") which = 2;
  if (which == 0) {
    std::cerr << "error: --expect must be table1 or table2\n";
    return 2;
  }
  const gur::TableReport exp = gur::expected_table(which);
  std::size_t col = exp.columns.size();
  for (std::size_t c = 0; c < exp.columns.size(); ++c)
    if (exp.columns[c] == rule->name()) col = c;
  if (col == exp.columns.size()) {
    std::cerr << "error: rule " << rule->name() << " has no " << opt.expect
              << " column\n";
    return 2;
  }
  int compared = 0;
  int mismatched = 0;
  for (const CheckResult& r : results) {
    for (std::size_t row = 0; row < exp.rows.size(); ++row) {
      if (exp.rows[row] != r.check) continue;
      ++compared;
      const std::string want = exp.cells[row][col].code;
      const std::string got = cell_code(r);
      if (got != want) {
        ++mismatched;
        std::cerr << "mismatch: " << r.check << ": expected " << want
                  << ", computed " << got << "\n";
      }
    }
  }
  if (compared == 0) {
    std::cerr << "error: none of the requested checks appear in "
              << opt.expect << "\n";
    return 2;
  }
  return mismatched == 0 ? 0 : 1;
}

int cmd_table(Options& opt) {
  finish_config(opt);
  const gur::TableReport rep =
      opt.table == 1 ? gur::reproduce_table1(opt.cfg)
                     : gur::reproduce_table2(opt.cfg);
  const std::string text = opt.format == "md"
                               ? gur::table_to_markdown(rep)
                               : gur::table_to_json(rep).dump(2);
  const int code = emit(text, opt.out);
  if (code != 0) return code;
  int which = opt.table;
  if (opt.expect == "table1") which = 1;
  if (opt.expect == "table2") which = 2;
  const auto mismatches = gur::compare_tables(rep, gur::expected_table(which));
  for (const gur::TableMismatch& m : mismatches)
    std::cerr << "mismatch at (" << m.row << ", " << m.column
              << "): expected " << m.expected << ", computed " << m.computed
              << "\n";
  return mismatches.empty() ? 0 : 1;
}

int cmd_counterexample(Options& opt) {
  finish_config(opt);
  gur::CounterexampleRecord rec;
  try {
    rec = gur::counterexample(opt.name, opt.mu);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::string text;
  if (opt.format == "md") {
    std::ostringstream os;
    os << "# " << rec.name << "\n\n"
       << "| side | distance to reference |\n|---|---|\n"
       << "| lhs | " << rec.distance_lhs << " |\n"
       << "| rhs | " << rec.distance_rhs << " |\n";
    text = os.str();
  } else {
    text = gur::counterexample_to_json(rec).dump(2);
  }
  const int code = emit(text, opt.out);
  if (code != 0) return code;
  return rec.matches(opt.cfg.tol) ? 0 : 1;
}

int cmd_chsh(Options& opt, const CLI::App* sub) {
  finish_config(opt);
  gur::RulePtr rule;
  try {
    rule = gur::make_rule(resolve_rule(opt, sub));
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  const gur::ChshReport rep = gur::chsh(*rule, opt.cfg);
  if (rep.order_dependent)
    std::cerr << "warning: " << rep.rule
              << " is measurement-order dependent; reporting both orderings\n";
  std::string text;
  if (opt.format == "md") {
    std::ostringstream os;
    os << "S(" << rep.rule << ", subsystem 0 first) = " << rep.values[0]
       << "\n";
    if (rep.values.size() > 1)
      os << "S(" << rep.rule << ", subsystem 1 first) = " << rep.values[1]
         << "\n";
    text = os.str();
  } else {
    text = nlohmann::json{{"rule", rep.rule},
                          {"order_dependent", rep.order_dependent},
                          {"values", rep.values}}
               .dump(2);
  }
  return emit(text, opt.out);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generalised quantum state-update rules: checks, tables, "
               "counterexamples and CHSH scores"};
  app.require_subcommand(1);

  Options opt;
  if (const char* env = std::getenv("GUR_SEED")) {
    try {
      opt.cfg.seed = std::stoull(env);
    } catch (const std::exception&) {
      std::cerr << "warning: ignoring invalid GUR_SEED: " << env << "\n";
    }
  }

  CLI::App* check = app.add_subcommand("check", "run property checks for one rule");
  check->add_option("--rule", opt.rule, "update rule name")->required();
  check->add_option("--only", opt.only, "comma list of checks to run");
  check->add_option("--expect", opt.expect,
                    "compare verdicts against a reference column "
                    "(table1 or table2)");
  check->add_option("--mu", opt.mu, "parameter for the mu rule");
  check->add_option("--lambda", opt.lambda, "parameter for the lambda rules");
  add_common(check, opt);

  CLI::App* table = app.add_subcommand("table", "reproduce a summary table");
  table->add_option("which", opt.table, "table number")
      ->required()
      ->check(CLI::Range(1, 2));
  table->add_option("--expect", opt.expect,
                    "reference table to compare against (table1 or table2)")
      ->check(CLI::IsMember({"table1", "table2"}));
  add_common(table, opt);

  CLI::App* ce = app.add_subcommand("counterexample",
                                    "replay a recorded counterexample");
  ce->add_option("name", opt.name, "counterexample name")->required();
  ce->add_option("--mu", opt.mu, "parameter for the mu rule");
  add_common(ce, opt);

  CLI::App* chsh = app.add_subcommand("chsh", "CHSH score on the singlet");
  chsh->add_option("--rule", opt.rule, "update rule name")->required();
  chsh->add_option("--mu", opt.mu, "parameter for the mu rule");
  chsh->add_option("--lambda", opt.lambda, "parameter for the lambda rules");
  add_common(chsh, opt);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (check->parsed()) return cmd_check(opt, check);
    if (table->parsed()) return cmd_table(opt);
    if (ce->parsed()) return cmd_counterexample(opt);
    if (chsh->parsed()) return cmd_chsh(opt, chsh);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
