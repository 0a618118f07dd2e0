#pragma once

#include <string>
#include <vector>

namespace qrep {

struct SuiteReport {
  std::string name;
  bool passed = true;
  std::vector<std::string> lines;  // one per check; failures start with "FAIL"
};

// dephasing, timing, tables, clifford, purification
const std::vector<std::string>& suite_names();

// ValidationError for unknown names.
SuiteReport run_suite(const std::string& name);

}  // namespace qrep
