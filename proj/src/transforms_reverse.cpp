// Reversal by guess-and-cancel.
//
// The new machine reads ¢x^R$ and walks a computation of the input machine
// on ¢x$ backwards. It starts by guessing the halting state, then repeatedly
// guesses the move that entered the current configuration, undoing its
// stack effect. A guessed read of σ is checked against the tape; a guessed
// λ-move consumes nothing. The reversed read of ¢ must coincide with the
// final $ and the initial configuration. Any failed check cancels the run
// with equal acceptance and rejection mass, and so does the slack left when
// the guessed moves of a configuration weigh less than the normalizer.
//
// The cancelled mass shifts both probabilities towards 1/2, and reversing a
// run of λ-pops yields a run of λ-pushes of unbounded length, so for most
// inputs the output fails the halting gate. Both effects are reported by the
// acceptance suite.

#include "transforms_common.hpp"

namespace pda {

using namespace detail;

namespace {

struct RState {
  enum Role { Init, Guess, Check, Verify } role = Init;
  std::string q;          // input machine state
  bool accept = false;    // verdict carried to the end
  bool post = false;      // still undoing moves made after $ (Guess)
  Sym sigma;              // guessed read (Check)
  std::string next;       // continuation (Verify)
  Word expect;            // symbols still to pop (Verify)
  Sym last;               // final symbol to check (Verify)
  bool replace = false;   // final symbol is replaced by `put` rather than kept
  Sym put;
  static RState guess(const std::string& q, bool accept, bool post) {
    RState s;
    s.role = Guess;
    s.q = q;
    s.accept = accept;
    s.post = post;
    return s;
  }
  static RState check(const std::string& q, const Sym& sigma, bool accept) {
    RState s;
    s.role = Check;
    s.q = q;
    s.sigma = sigma;
    s.accept = accept;
    return s;
  }
  auto key() const {
    return std::make_tuple(static_cast<int>(role), q, accept, post, sigma, next, expect, last, replace,
                           put);
  }
};

class Reverser {
 public:
  Reverser(const Machine& m) : m_(m) {
    normalizer_ = 1;
    for (const auto& p : m_.states)
      for (const auto& c : m_.stack)
        for (bool post : {true, false}) {
          Rational total = 0;
          for (const auto& [mv, d] : entering(p, c, post)) total += d;
          if (total > normalizer_) normalizer_ = total;
        }
  }

  Machine build() {
    Machine base;
    base.kind = Kind::Endmarked;
    // Cancellation splits mass evenly, so a deterministic input yields a
    // probabilistic output.
    base.mode = m_.mode == Mode::Deterministic ? Mode::Probabilistic : m_.mode;
    base.input = m_.input;
    base.bottom = m_.bottom;
    acc_ = claim("acc");
    rej_ = claim("rej");
    base.initial = name(RState{});
    RowSource rows = [this](const std::string& q, const Sym& c) { return rows_of(q, c); };
    return explore(base, rows, [this](const std::string& q) { return q == acc_ ? 1 : q == rej_ ? 2 : 0; });
  }

  const Rational& normalizer() const { return normalizer_; }

 private:
  struct Move {
    std::string from;
    Sym read;
    Sym top;
    Word push;
    auto operator<=>(const Move&) const = default;
  };

  // Moves that could have produced a configuration in p with c on top.
  std::map<Move, Rational> entering(const std::string& p, const Sym& c, bool post) const {
    std::map<Move, Rational> out;
    for (const auto& [key, row] : m_.delta) {
      bool allowed = key.read == kLambda || (post ? key.read == kDollar : key.read != kDollar);
      if (!allowed) continue;
      for (const auto& [t, d] : row) {
        if (t.to != p) continue;
        bool fits = t.push.empty() ? key.top != m_.bottom : t.push.front() == c;
        if (fits) out[{key.from, key.read, key.top, t.push}] += d;
      }
    }
    return out;
  }

  std::string claim(const std::string& base) {
    std::string n = fresh_name(base, taken_);
    taken_.insert(n);
    return n;
  }

  std::string name(const RState& s) {
    auto k = s.key();
    auto it = names_.find(k);
    if (it != names_.end()) return it->second;
    std::string verdict = s.accept ? "acc" : "rej";
    std::string base;
    switch (s.role) {
      case RState::Init: base = "init"; break;
      case RState::Guess: base = tag({s.q, verdict, s.post ? "post" : "main"}); break;
      case RState::Check: base = tag({s.q, s.sigma, verdict}); break;
      case RState::Verify:
        base = tag({"?", s.next, show_word(s.expect), s.last, s.replace ? s.put : "="});
        break;
    }
    std::string n = claim(base);
    names_[k] = n;
    states_[n] = s;
    return n;
  }

  void cancel(Row& row, const Sym& c, const Rational& p) {
    if (p == 0) return;
    row[Target{acc_, {c}}] += p / 2;
    row[Target{rej_, {c}}] += p / 2;
  }

  PairRows rows_of(const std::string& n, const Sym& c) {
    PairRows out;
    auto it = states_.find(n);
    if (it == states_.end()) return out;
    const RState s = it->second;
    switch (s.role) {
      case RState::Init: {
        if (c != m_.bottom) break;
        std::vector<std::string> halting;
        for (const auto& q : m_.states)
          if (m_.halting(q)) halting.push_back(q);
        for (const auto& h : halting) {
          RState g = RState::guess(h, m_.accept.count(h) > 0, true);
          out[kCent][Target{name(g), {c}}] += Rational(1, static_cast<long>(halting.size()));
        }
        break;
      }
      case RState::Guess: {
        Row& row = out[kLambda];
        Rational used = 0;
        for (const auto& [mv, d] : entering(s.q, c, s.post)) {
          Rational w = d / normalizer_;
          used += w;
          RState next;
          if (mv.read == kLambda || mv.read == kDollar) {
            next = RState::guess(mv.from, s.accept, s.post && mv.read == kLambda);
          } else {
            next = RState::check(mv.from, mv.read, s.accept);
          }
          std::string cont = name(next);
          if (mv.push.empty()) {
            row[Target{cont, {mv.top, c}}] += w;
          } else if (mv.push.size() == 1) {
            if (mv.push.back() == mv.top) {
              row[Target{cont, {c}}] += w;
            } else {
              row[Target{cont, {mv.top}}] += w;
            }
          } else {
            RState v;
            v.role = RState::Verify;
            v.next = cont;
            v.expect.assign(mv.push.begin() + 1, mv.push.end() - 1);
            v.last = mv.push.back();
            v.replace = mv.push.back() != mv.top;
            v.put = mv.top;
            row[Target{name(v), {}}] += w;
          }
        }
        cancel(row, c, 1 - used);
        break;
      }
      case RState::Check: {
        for (const auto& y : m_.input) {
          if (s.sigma == y)
            out[y][Target{name(RState::guess(s.q, s.accept, false)), {c}}] += 1;
          else
            cancel(out[y], c, 1);
        }
        if (s.sigma == kCent && s.q == m_.initial && c == m_.bottom)
          out[kDollar][Target{s.accept ? acc_ : rej_, {c}}] += 1;
        else
          cancel(out[kDollar], c, 1);
        break;
      }
      case RState::Verify: {
        Row& row = out[kLambda];
        if (!s.expect.empty()) {
          if (c != s.expect.front() || c == m_.bottom) {
            cancel(row, c, 1);
            break;
          }
          RState v = s;
          v.expect.erase(v.expect.begin());
          row[Target{name(v), {}}] += 1;
        } else if (c != s.last) {
          cancel(row, c, 1);
        } else {
          row[Target{s.next, {s.replace ? s.put : c}}] += 1;
        }
        break;
      }
    }
    return out;
  }

  const Machine& m_;
  Rational normalizer_;
  std::string acc_, rej_;
  std::set<std::string> taken_;
  std::map<decltype(RState{}.key()), std::string> names_;
  std::map<std::string, RState> states_;
};

}  // namespace

Machine reverse_language(const Machine& m, TransformTrace* trace) {
  const std::string stage = "reverse";
  if (m.kind != Kind::Endmarked) throw TransformError(stage, "input must be an endmarked machine");
  require_sound(stage, m);
  Machine ideal = m;
  if (!check_ideal_shape(m).all()) {
    TransformTrace inner;
    ideal = to_ideal_shape(m, trace ? &inner : nullptr);
    if (trace) {
      trace->stages.push_back(inner);
      trace->intermediates.emplace_back("ideal shape", ideal);
    }
  }
  Reverser r(ideal);
  Machine out = r.build();
  if (trace) {
    trace->notes.push_back("guess normalizer " + to_string(r.normalizer()));
    trace->intermediates.emplace_back("reversed, unchecked", out);
  }
  finish(stage, m, out, trace);
  return out;
}

}  // namespace pda
