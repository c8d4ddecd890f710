#pragma once

#include <string>

namespace delaudit {

// Runs the shipped fixture suite for the four touchstone controllers against
// the control, confidentiality, and adaptive-HI definitions. The control and
// confidentiality columns reproduce the reference compliance pattern.
struct MatrixResult {
  std::string json;  // canonical {cells, columns_match_reference, seed}
  std::string csv;
  bool columns_match_reference = false;
};

MatrixResult run_matrix(uint64_t seed, int jobs);

}  // namespace delaudit
