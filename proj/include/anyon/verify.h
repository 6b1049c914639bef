#pragma once

// Acceptance suite shared by `anyonctl verify` and the acceptance test binary.

#include <cstdint>
#include <string>
#include <vector>

namespace anyon::verify {

struct Options {
  std::uint64_t seed = 1;
};

struct CriterionResult {
  int id = 0;
  std::string name;
  bool pass = false;
  std::string detail;  // measured values and tolerances
  double seconds = 0;
};

// Ids 1..12, in order.
std::vector<int> criterion_ids();
std::string criterion_name(int id);
CriterionResult run_criterion(int id, const Options& opts = {});

// "acceptance" or "all" runs every criterion; otherwise a comma-separated id list.
std::vector<int> parse_suite(const std::string& suite);

// One line: "[PASS] 07 controlled-x-oracle ... (1.23 s)".
std::string format_line(const CriterionResult& r, bool expected_fail = false);
std::string to_json(const std::vector<CriterionResult>& results, const Options& opts);

}  // namespace anyon::verify
