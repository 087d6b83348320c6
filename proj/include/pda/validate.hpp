#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pda/machine.hpp"

namespace pda {

struct Violation {
  std::string rule;     // short rule name, e.g. "bottom-marker discipline"
  std::string message;  // full human-readable description
  std::optional<TransKey> where;
};

struct ValidationReport {
  std::vector<Violation> violations;
  bool ok() const { return violations.empty(); }
  bool has(const std::string& rule) const;
  std::string text() const;
};

// Checks every structural rule a machine must satisfy. Never throws.
//
// Row completeness is checked per (state, top) pair: a pair with no moves at
// all is allowed (reaching it is a runtime error), a pair with only λ-moves
// must put all its mass on them. Otherwise δ[q,σ,a] + δ[q,λ,a] = 1 must hold
// for every σ in Σ once any Σ-read or λ-move exists, for $ once a $-read or
// λ-move exists, and for ¢ where a ¢-read exists.
ValidationReport validate(const Machine& m);

struct ComplexityStats {
  int n = 0;  // states
  int m = 0;  // stack symbols
  int e = 1;  // push size
  bool operator==(const ComplexityStats&) const = default;
};

ComplexityStats complexity(const Machine& m);
// Longest push string that actually occurs in δ (0 if none).
int observed_push_size(const Machine& m);

}  // namespace pda
