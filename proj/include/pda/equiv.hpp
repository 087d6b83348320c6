#pragma once

#include <optional>
#include <string>
#include <vector>

#include "pda/machine.hpp"
#include "pda/sim.hpp"
#include "pda/transforms.hpp"
#include "pda/validate.hpp"

namespace pda {

enum class EquivMode { Error, Language };

// All words over `alphabet` of length ≤ max_len in shortlex order, λ first.
std::vector<Word> shortlex_words(const std::set<Sym>& alphabet, int max_len);

struct WordRecord {
  Word word;
  Outcome a;
  Outcome b;
  bool equal = false;
};

struct EquivalenceReport {
  EquivMode mode = EquivMode::Error;
  int max_len = 0;
  std::vector<WordRecord> records;
  bool pass = true;
  std::optional<Word> counterexample;
  ComplexityStats a_stats;
  ComplexityStats b_stats;

  std::string json() const;
  std::string table() const;
};

struct EquivalenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Exact comparison of acceptance and rejection probabilities on every word
// up to max_len. Stops at the first difference unless `exhaustive`.
EquivalenceReport check_error_equivalence(const Machine& a, const Machine& b, int max_len,
                                          bool exhaustive = false);
// Same walk, comparing only the accept/reject decision under each machine's mode.
EquivalenceReport check_language_equivalence(const Machine& a, const Machine& b, int max_len,
                                             bool exhaustive = false);

struct BoundCheck {
  std::string name;
  bool exact = false;  // exact count rather than an envelope
  double value = 0;
  double bound = 0;    // for envelopes this is log2 of the bound when `log2` is set
  bool log2 = false;
  bool ok = true;
  std::string formula;
};

struct BoundReport {
  std::string transform;
  std::vector<BoundCheck> checks;
  bool ok() const;
  std::string json() const;
  std::string table() const;
};

// Counts and envelopes for a transform trace, chosen by trace.name. Nested
// stages are checked too and appended.
BoundReport check_bounds(const TransformTrace& trace);

}  // namespace pda
