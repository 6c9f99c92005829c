#pragma once

#include "gur/checks.hpp"

namespace gur {

// One table cell: pass, pass-single (holds for single-system measurements
// only), fail, or na.
struct TableCell {
  std::string code;
};

struct TableReport {
  int table = 1;
  std::vector<std::string> rows;
  std::vector<std::string> columns;
  // cells[r][c] aligned with rows x columns.
  std::vector<std::vector<TableCell>> cells;
  std::uint64_t seed = 0;
  int trials = 0;
  double tol = 1e-9;
};

struct TableMismatch {
  std::string row;
  std::string column;
  std::string expected;
  std::string computed;
};

// Operational-property matrix of the five valid rules (lambda 1/4).
TableReport reproduce_table1(const CheckConfig& cfg);

// A1..A6 matrix of the five invalid rules (lambda 1/2, mu 1/2).
TableReport reproduce_table2(const CheckConfig& cfg);

// Reference matrices shipped with the repository.
TableReport expected_table(int which);
std::vector<TableMismatch> compare_tables(const TableReport& computed,
                                          const TableReport& expected);

nlohmann::json table_to_json(const TableReport& t);
std::string table_to_markdown(const TableReport& t);

// Exact hand-checkable discrepancies, each asserting hardcoded matrices.
struct CounterexampleRecord {
  std::string name;
  nlohmann::json inputs;
  CMat expected_lhs, expected_rhs;
  CMat computed_lhs, computed_rhs;
  double distance_lhs = 0.0, distance_rhs = 0.0;

  bool matches(double tol = 1e-9) const;
};

// name in {dep-cc, passive-gemenge, mu-ordering}.
CounterexampleRecord counterexample(const std::string& name, double mu = 0.5);
std::vector<std::string> counterexample_names();
nlohmann::json counterexample_to_json(const CounterexampleRecord& r);

// Coherence implies deterministic repeatability and ideality (single-system
// scope) across the whole rule catalog.
CheckResult verify_lemma1(const CheckConfig& cfg);

// luders is coherent (zero violations over >= 1000 trials at dims 2..4) and
// every other catalog rule's single-system form either coincides with it or
// yields a coherence witness.
CheckResult verify_theorem1(const CheckConfig& cfg);

// luders is the only catalog rule passing both coherence and composition
// compatibility; loc-luders passes coherence but fails compatibility.
CheckResult verify_theorem2(const CheckConfig& cfg);

struct ChshReport {
  std::string rule;
  bool order_dependent = false;
  // One value, or both measurement orderings when order-dependent.
  std::vector<double> values;
};

ChshReport chsh(const UpdateRule& rule, const CheckConfig& cfg);

}  // namespace gur
