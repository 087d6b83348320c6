// Right-endmarker removal.
//
// The input machine reads $ only in a stationary move into a halting state.
// The new machine guesses that final move in advance: whenever the input
// machine would sit in p with a on top, the new one sits in the guessed
// halting state r with [p,a] on top, having paid δ(p,$,a ↦ r,a). When the
// input ends there, r is the verdict. When another symbol σ comes instead,
// the guess is cancelled by dividing through δ[p,$,a], the σ-move is made,
// and plus-states replay λ-moves until the next guess.

#include "transforms_common.hpp"

namespace pda {

using namespace detail;

namespace {

void check_preconditions(const std::string& stage, const Machine& m) {
  for (const auto& [key, row] : m.delta)
    for (const auto& [t, p] : row) {
      std::string move = "(" + key.from + "," + key.read + "," + key.top + ")";
      if (key.read == kDollar) {
        if (t.push != Word{key.top})
          throw TransformError(stage, "the $-move " + move + " alters the stack");
        if (!m.halting(t.to))
          throw TransformError(stage, "the $-move " + move + " enters non-halting state " + t.to);
      } else if (m.halting(t.to)) {
        throw TransformError(stage, "the move " + move + " halts before $");
      }
    }
}

}  // namespace

Machine remove_right_endmarker(const Machine& m, TransformTrace* trace) {
  const std::string stage = "remove-right";
  if (m.kind != Kind::NoLeftEndmark)
    throw TransformError(stage, "input must have a right endmarker only");
  require_sound(stage, m);
  check_preconditions(stage, m);

  Machine n;
  n.kind = Kind::NoEndmark;
  n.mode = m.mode;
  n.input = m.input;
  n.bottom = m.bottom;
  n.stack = m.stack;
  std::set<std::string> taken = m.states;
  std::map<std::string, std::string> plus;
  for (const auto& q : m.states) {
    plus[q] = fresh_name(plus_name(q), taken);
    taken.insert(plus[q]);
    note_origin(trace, plus[q], "replays λ-moves of " + q + " before guessing again");
  }
  n.initial = fresh_name("init", taken);
  note_origin(trace, n.initial, "makes the first guess");
  n.states = m.states;
  n.states.insert(n.initial);
  for (const auto& [q, p] : plus) n.states.insert(p);

  std::map<std::pair<std::string, Sym>, Sym> guess;  // (p, a) → [p,a]
  std::set<Sym> symbols = m.stack;
  for (const auto& q : m.states)
    for (const auto& a : m.stack) {
      Sym name = fresh_name(tag({q, a}), symbols);
      symbols.insert(name);
      guess[{q, a}] = name;
      n.stack.insert(name);
      note_origin(trace, name, "guessed final move of " + q + " on " + a);
    }

  n.accept = m.accept;
  if (accepts(m, {})) n.accept.insert(n.initial);
  for (const auto& q : n.states)
    if (!n.accept.count(q)) n.reject.insert(q);

  // Puts [p,b] over b's place and enters r; Z0 keeps a real bottom below.
  auto rebracket = [&](const std::string& from, const Sym& b, const std::string& p) {
    const Row* r = m.row(p, kDollar, b);
    if (!r) return;
    for (const auto& [t, d] : *r) {
      Word w{guess.at({p, b})};
      if (b == m.bottom) w.push_back(m.bottom);
      n.add(from, kLambda, b, t.to, w, d);
    }
  };

  if (!m.halting(m.initial)) rebracket(n.initial, m.bottom, m.initial);
  for (const auto& p : m.states) {
    if (m.halting(p)) continue;
    for (const auto& a : m.stack) {
      Rational stop = m.mass(p, kDollar, a);
      if (stop > 0) {
        std::set<std::string> deciders;
        for (const auto& [t, d] : *m.row(p, kDollar, a)) deciders.insert(t.to);
        for (const auto& s : m.input) {
          const Row* r = m.row(p, s, a);
          if (!r) continue;
          for (const auto& [t, d] : *r) {
            Word w = t.push;
            if (a == m.bottom) w.pop_back();  // the real Z0 is already below
            for (const auto& decider : deciders) n.add(decider, s, guess.at({p, a}), plus.at(t.to), w, d / stop);
          }
        }
      }
      if (const Row* r = m.row(p, kLambda, a))
        for (const auto& [t, d] : *r) n.add(plus.at(p), kLambda, a, plus.at(t.to), t.push, d);
      rebracket(plus.at(p), a, p);
    }
  }
  finish(stage, m, n, trace);
  return n;
}

}  // namespace pda
