#pragma once

#include <compare>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "pda/rational.hpp"

namespace pda {

using Sym = std::string;
// Stack strings are stored topmost symbol first; input words left to right.
using Word = std::vector<Sym>;

inline const Sym kLambda = "λ";
inline const Sym kCent = "¢";
inline const Sym kDollar = "$";

enum class Kind { Endmarked, NoLeftEndmark, NoEndmark };
enum class Mode { Probabilistic, Deterministic, Nondeterministic };

std::string to_string(Kind k);
std::string to_string(Mode m);
Kind parse_kind(const std::string& s);
Mode parse_mode(const std::string& s);

struct TransKey {
  std::string from;
  Sym read;  // input symbol, kLambda, kCent or kDollar
  Sym top;
  auto operator<=>(const TransKey&) const = default;
  bool operator==(const TransKey&) const = default;
};

struct Target {
  std::string to;
  Word push;  // replaces the top symbol; empty means pop
  auto operator<=>(const Target&) const = default;
  bool operator==(const Target&) const = default;
};

using Row = std::map<Target, Rational>;

struct Machine {
  Kind kind = Kind::Endmarked;
  Mode mode = Mode::Probabilistic;
  std::set<std::string> states;
  std::set<Sym> input;
  std::set<Sym> stack;
  Sym bottom = "Z";
  std::string initial;
  std::set<std::string> accept;
  std::set<std::string> reject;
  std::map<TransKey, Row> delta;
  std::optional<int> declared_push_size;

  // Adds probability mass to a transition; zero mass is ignored so the
  // table never stores explicit zeros.
  void add(const std::string& from, const Sym& read, const Sym& top, const std::string& to,
           const Word& push, const Rational& p);

  bool halting(const std::string& q) const { return accept.count(q) || reject.count(q); }
  // δ[q,σ,a]: total mass of the row.
  Rational mass(const std::string& q, const Sym& read, const Sym& top) const;
  const Row* row(const std::string& q, const Sym& read, const Sym& top) const;

  // Input symbols readable on the tape for this kind, endmarkers included.
  std::vector<Sym> readable() const;

  bool operator==(const Machine&) const = default;
};

// Split a UTF-8 string into Unicode scalars.
std::vector<std::string> utf8_scalars(const std::string& s);
bool is_single_scalar(const std::string& s);
std::string join(const Word& w, const std::string& sep = "");

// Word in display form: concatenation when every symbol is a single scalar,
// otherwise space separated. λ for the empty word.
std::string show_word(const Word& w);

// Canonical decorated names used by the constructions.
std::string tag(const std::vector<std::string>& parts);
// Returns base, or base with trailing primes, so it is not in `taken`.
std::string fresh_name(const std::string& base, const std::set<std::string>& taken);

}  // namespace pda
