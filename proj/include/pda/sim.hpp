#pragma once

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pda/machine.hpp"

namespace pda {

// Raised when a machine cannot be simulated: divergent λ-moves, probability
// mass with nowhere to go, or a word over the wrong alphabet.
struct SimulationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct HaltingReport {
  bool ok = true;
  // Empty when ok. Otherwise a λ-path such as "(q,a)→(p,ba)→(q,a)".
  std::string witness;
  std::string reason;  // "cycle" or "growth"
  int max_lambda_chain = 0;
  std::string text() const;
};

// Explores λ-moves from every (state, top) pair over (state, replacement
// word) nodes and rejects on a cycle, or when the replacement word grows
// beyond e·|Q|·|Γ| symbols above the starting symbol.
HaltingReport check_halting(const Machine& m);

struct ClosureEntry {
  std::string to;
  Word w;  // replaces the starting top symbol; never empty
  Rational p;
  bool operator==(const ClosureEntry&) const = default;
};

// δ*[q,λ,a ↦ p,λ,w] for all (p,w) with nonzero value: the probability that a
// run of λ-moves starting at (q,a) passes through (p,w) without popping a.
// Sorted by (p,w). Requires check_halting(m).ok.
std::vector<ClosureEntry> lambda_closure(const Machine& m, const std::string& q, const Sym& a);

struct Outcome {
  Rational acc = 0;
  Rational rej = 0;
  bool operator==(const Outcome&) const = default;
};

struct SurfaceConfig {
  std::string state;
  Word stack;  // topmost first, bottom marker last
  auto operator<=>(const SurfaceConfig&) const = default;
  bool operator==(const SurfaceConfig&) const = default;
};

using Profile = std::map<SurfaceConfig, Rational>;

bool decide(Mode mode, const Outcome& o);

// Compiled simulator. Construction runs check_halting once and throws
// SimulationError if it fails.
class Simulator {
 public:
  explicit Simulator(const Machine& m);
  ~Simulator();
  Simulator(Simulator&&) noexcept;
  Simulator& operator=(Simulator&&) noexcept;

  Outcome run(const Word& word) const;
  bool accepts(const Word& word) const;

  // Mass passing through each configuration while the head sits just after
  // `prefix` (for the endmarked kind, just after ¢·prefix), counting the
  // configurations entered by the last read and every λ-move at that cell.
  Profile reach_profile(const Word& prefix) const;

  const HaltingReport& halting() const;
  const Machine& machine() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Outcome run(const Machine& m, const Word& word);
bool accepts(const Machine& m, const Word& word);

// Splits a CLI word into input symbols, one Unicode scalar each.
Word parse_word(const std::string& text);

}  // namespace pda
