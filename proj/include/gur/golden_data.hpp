#pragma once

namespace gur::data {

// JSON text of the reference verdict matrices (see data/).
const char* table1_expected_json();
const char* table2_expected_json();

}  // namespace gur::data
