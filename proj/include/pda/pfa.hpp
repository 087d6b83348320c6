#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "pda/machine.hpp"

namespace pda {

using Matrix = std::vector<std::vector<Rational>>;

// Probabilistic finite automaton over a stack alphabet, with no initial or
// halting states. U.at(σ)[i][j] is the probability of moving from state i
// to state j on σ.
struct FreePFA {
  std::vector<std::string> states;
  std::vector<Sym> alphabet;  // symbols other than the end symbol
  Sym end_symbol;
  std::map<Sym, Matrix> U;  // keyed by alphabet symbols and end_symbol

  int index(const std::string& q) const;
  const Matrix& matrix(const Sym& s) const;
  bool stochastic() const;
};

struct PfaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// One PFA state per machine state; δ_N(q,σ ↦ p) = δ(q,λ,σ ↦ p,λ).
// Throws PfaError if some λ-move does not pop.
FreePFA derive_free_pfa(const Machine& m);

// Path-sum probability of going from q to p while reading w left to right.
Rational pfa_run_prob(const FreePFA& pfa, int q, const Word& w, int p);
// Distribution over end states after reading w from q.
std::vector<Rational> pfa_run(const FreePFA& pfa, int q, const Word& w);

inline constexpr int kMaxReverseStates = 20;

// Name of the subset-state with the given bitmask: "{}" or "{a,b}".
std::string subset_name(const FreePFA& pfa, uint32_t mask);

// One row of the reversed automaton: the distribution over subset-states
// reached from subset `mask` on σ. Computed on demand so large state sets
// stay usable when only a few subsets are ever visited.
std::map<uint32_t, Rational> reversed_row(const FreePFA& pfa, uint32_t mask, const Sym& sigma);

// Number of decomposition steps behind reversed_row (zero-mass steps skipped).
int reversed_row_steps(const FreePFA& pfa, uint32_t mask, const Sym& sigma);

struct ReversedPFA {
  FreePFA K;               // states indexed by bitmask, ∅ first, full set last
  std::vector<uint32_t> s; // s[p] = {p}
  std::vector<std::vector<uint32_t>> T;  // T[q] = all subsets containing q
};

// Full reversal. Requires stochastic rows and at most kMaxReverseStates
// states. Satisfies p_N(q,w,p) = Σ_{r∈T(q)} p_K(s(p), w^R, r).
ReversedPFA reverse_pfa(const FreePFA& pfa);

// Text table of a matrix, for debug dumps.
std::string matrix_table(const Matrix& m, const std::vector<std::string>& labels);

}  // namespace pda
