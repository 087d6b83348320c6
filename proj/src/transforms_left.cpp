// Left-endmarker removal.
//
// The new machine reads the first input symbol σ where the old one read ¢.
// It remembers σ by bracketing what the old machine wrote on ¢ as [σ,a],
// then replays the old machine's λ-moves on the bracketed symbols in hatted
// states. When the old machine would read σ, a hatted λ-move performs that
// read instead and the ordinary states take over. The empty input ($ in the
// first cell) is handled by writing the full outcome of the old machine on
// "¢$" in one move.

#include "transforms_common.hpp"

namespace pda {

using namespace detail;

namespace {

using Config = std::pair<std::string, Word>;  // state, stack topmost first

// Outcome of the old machine on ¢$ up to and including the $-read, plus
// configurations that halted on the way.
std::map<Config, Rational> run_on_empty(const Machine& m) {
  std::map<Config, Rational> done;
  std::map<Config, Rational> cur;
  if (const Row* r = m.row(m.initial, kCent, m.bottom))
    for (const auto& [t, p] : *r) cur[{t.to, t.push}] += p;
  while (!cur.empty()) {
    std::map<Config, Rational> next;
    for (const auto& [c, p] : cur) {
      if (m.halting(c.first)) {
        done[c] += p;
        continue;
      }
      const Sym& top = c.second.front();
      Word below(c.second.begin() + 1, c.second.end());
      for (const auto& [read, into] : {std::pair{kLambda, &next}, std::pair{kDollar, &done}}) {
        const Row* r = m.row(c.first, read, top);
        if (!r) continue;
        for (const auto& [t, q] : *r) {
          Word w = t.push;
          w.insert(w.end(), below.begin(), below.end());
          (*into)[{t.to, w}] += p * q;
        }
      }
    }
    cur = std::move(next);
  }
  return done;
}

}  // namespace

Machine remove_left_endmarker(const Machine& m, TransformTrace* trace) {
  const std::string stage = "remove-left";
  if (m.kind != Kind::Endmarked) throw TransformError(stage, "input must be an endmarked machine");
  require_sound(stage, m);

  Machine n;
  n.kind = Kind::NoLeftEndmark;
  n.mode = m.mode;
  n.input = m.input;
  n.bottom = m.bottom;
  n.stack = m.stack;
  std::set<std::string> taken = m.states;
  std::map<std::string, std::string> hat;
  for (const auto& q : m.states) {
    hat[q] = fresh_name(hat_name(q), taken);
    taken.insert(hat[q]);
    note_origin(trace, hat[q], "replays λ-moves before the first read, first symbol pending");
  }
  n.states = m.states;
  for (const auto& [q, h] : hat) n.states.insert(h);
  for (const auto& q : m.accept) n.accept.insert({q, hat[q]});
  for (const auto& q : m.reject) n.reject.insert({q, hat[q]});
  n.initial = hat.at(m.initial);

  std::map<std::pair<Sym, Sym>, Sym> br;  // (σ, a) → [σ,a]
  std::set<Sym> symbols = m.stack;
  for (const auto& s : m.input)
    for (const auto& a : m.stack) {
      Sym name = fresh_name(tag({s, a}), symbols);
      symbols.insert(name);
      br[{s, a}] = name;
      n.stack.insert(name);
      note_origin(trace, name, "stack symbol remembering the pending first input symbol");
    }
  auto bracket = [&](const Sym& s, const Word& w) {
    Word out;
    for (const auto& a : w) out.push_back(br.at({s, a}));
    return out;
  };
  // Write for a move on top [σ,a] that the old machine made on a: a kept
  // top stays bracketed, anything else is written raw.
  auto keep_bracket = [&](const Sym& s, const Sym& a, const Word& w) {
    if (!w.empty() && w.back() == a) {
      Word out(w.begin(), w.end() - 1);
      out.push_back(br.at({s, a}));
      return out;
    }
    return w;
  };

  // First move on a real symbol: carry out the ¢-move, bracketing its write.
  if (!m.halting(m.initial)) {
    const Row* cent = m.row(m.initial, kCent, m.bottom);
    for (const auto& s : m.input)
      for (const auto& [t, p] : *cent) {
        Word w = bracket(s, t.push);
        w.push_back(m.bottom);
        n.add(n.initial, s, m.bottom, hat.at(t.to), w, p);
      }
    for (const auto& [c, p] : run_on_empty(m)) n.add(n.initial, kDollar, m.bottom, c.first, c.second, p);
  }

  for (const auto& q : m.states) {
    if (m.halting(q)) continue;
    for (const auto& s : m.input)
      for (const auto& a : m.stack) {
        const Sym& top = br.at({s, a});
        // Hatted: old λ-moves under the bracket, or the pending read of s.
        if (const Row* r = m.row(q, kLambda, a))
          for (const auto& [t, p] : *r) n.add(hat.at(q), kLambda, top, hat.at(t.to), bracket(s, t.push), p);
        if (const Row* r = m.row(q, s, a))
          for (const auto& [t, p] : *r) {
            Word w = a == m.bottom ? Word(t.push.begin(), t.push.end() - 1) : keep_bracket(s, a, t.push);
            n.add(hat.at(q), kLambda, top, t.to, w, p);
          }
        // Unhatted on a leftover bracket: behave as on a.
        std::vector<Sym> reads(m.input.begin(), m.input.end());
        reads.push_back(kDollar);
        reads.push_back(kLambda);
        for (const auto& x : reads) {
          const Row* r = m.row(q, x, a);
          if (!r) continue;
          for (const auto& [t, p] : *r) {
            Word w;
            if (a != m.bottom) {
              w = keep_bracket(s, a, t.push);
            } else if (x == kLambda) {
              w.assign(t.push.begin(), t.push.end() - 1);
            } else {
              w.assign(t.push.begin(), t.push.end() - 1);
              w.push_back(top);
            }
            n.add(q, x, top, t.to, w, p);
          }
        }
      }
  }
  // Unhatted on raw symbols: copy.
  for (const auto& [key, row] : m.delta) {
    if (key.read == kCent) continue;
    for (const auto& [t, p] : row) n.add(key.from, key.read, key.top, t.to, t.push, p);
  }
  finish(stage, m, n, trace);
  return n;
}

}  // namespace pda
