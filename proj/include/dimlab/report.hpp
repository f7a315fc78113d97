#pragma once

#include <map>
#include <string>
#include <vector>

namespace dimlab {

enum class CheckStatus { VERIFIED, FAILED, PARTIAL };

inline std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::VERIFIED: return "VERIFIED";
    case CheckStatus::FAILED: return "FAILED";
    case CheckStatus::PARTIAL: return "PARTIAL";
  }
  return "?";
}

// Structured outcome of one verification run.
struct CheckReport {
  std::string check;
  std::map<std::string, std::string> params;
  CheckStatus status = CheckStatus::VERIFIED;
  std::string lhs_invariants;
  std::string rhs_invariants;
  std::vector<std::string> witnesses;
  long millis = 0;

  void note(std::string s) { witnesses.push_back(std::move(s)); }
  void fail(std::string s) {
    status = CheckStatus::FAILED;
    witnesses.push_back("FAIL: " + std::move(s));
  }
  bool ok() const { return status != CheckStatus::FAILED; }
};

}  // namespace dimlab
