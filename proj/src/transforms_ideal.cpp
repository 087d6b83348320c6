// Ideal-shape construction.
//
// Stage one merges every run of λ-moves into the move that ends it, using
// the λ-closure, so that λ-moves only pop or enter a halting state.
//
// Stage two caches the top part of the merged machine's stack in the state.
// A read-point state ⟨p,C⟩ holds the topmost symbols C (at most L of them,
// L being the longest write of stage one) and has already decided to read
// next. After a read the new cache is resolved through the λ-pops, which
// yields a read-point, a halting state, or an exhausted cache. Cached
// content that no longer fits is pushed as one block symbol [D]; blocks
// sitting directly on Z0 get a separate variant so the bottom is visible
// when they are popped. Every read is then stationary, a single push or a
// pop, and only exhausted states make λ-moves, which are pops.

#include <tuple>

#include "transforms_common.hpp"

namespace pda {

using namespace detail;

namespace {

std::string word_key(const Word& w) { return join(w, "·"); }

Machine merge_lambda_runs(const Machine& h, const std::string& init) {
  std::vector<Sym> reads(h.input.begin(), h.input.end());
  reads.push_back(kDollar);
  RowSource rows = [&](const std::string& q, const Sym& a) {
    PairRows out;
    if (q == init) {
      if (a == h.bottom)
        if (const Row* r = h.row(h.initial, kCent, a)) out[kCent] = *r;
      return out;
    }
    if (h.halting(q)) return out;
    for (const auto& e : lambda_closure(h, q, a)) {
      if (h.halting(e.to)) {
        Word keep = a == h.bottom ? Word{a} : Word{};
        out[kLambda][Target{e.to, keep}] += e.p;
        continue;
      }
      const Sym& b = e.w.front();
      Word below(e.w.begin() + 1, e.w.end());
      for (const auto& s : reads) {
        const Row* r = h.row(e.to, s, b);
        if (!r) continue;
        for (const auto& [t, p] : *r) {
          Word w = t.push;
          w.insert(w.end(), below.begin(), below.end());
          out[s][Target{t.to, w}] += e.p * p;
        }
      }
      if (below.empty() && a != h.bottom)
        if (const Row* r = h.row(e.to, kLambda, b))
          for (const auto& [t, p] : *r)
            if (t.push.empty()) out[kLambda][Target{t.to, {}}] += e.p * p;
    }
    for (auto it = out.begin(); it != out.end();) {
      for (auto jt = it->second.begin(); jt != it->second.end();)
        jt = jt->second == 0 ? it->second.erase(jt) : std::next(jt);
      it = it->second.empty() ? out.erase(it) : std::next(it);
    }
    return out;
  };
  Machine base = h;
  base.initial = init;
  Machine m1 = explore(base, rows, [&](const std::string& q) {
    return h.accept.count(q) ? 1 : h.reject.count(q) ? 2 : 0;
  });
  m1.declared_push_size.reset();
  return m1;
}

class BlockBuilder {
 public:
  BlockBuilder(const Machine& m1, const std::string& m1_init, TransformTrace* trace)
      : m1_(m1), m1_init_(m1_init), trace_(trace) {
    for (const auto& [key, row] : m1.delta)
      if (key.read != kLambda)
        for (const auto& [t, p] : row) {
          size_t len = t.push.size();
          if (len && t.push.back() == m1.bottom) --len;
          limit_ = std::max(limit_, len);
        }
    std::set<std::string> taken(m1.accept.begin(), m1.accept.end());
    taken.insert(m1.reject.begin(), m1.reject.end());
    init_ = fresh_name("init", taken);
    names_[init_] = {Kind::Init, "", {}};
    for (const auto& q : m1.accept) names_[q] = {Kind::Halt, q, {}};
    for (const auto& q : m1.reject) names_[q] = {Kind::Halt, q, {}};
  }

  Machine build() {
    Machine base = m1_;
    base.initial = init_;
    RowSource rows = [&](const std::string& q, const Sym& a) { return rows_of(q, a); };
    Machine r = explore(base, rows, [&](const std::string& q) {
      return m1_.accept.count(q) ? 1 : m1_.reject.count(q) ? 2 : 0;
    });
    return r;
  }

  size_t limit() const { return limit_; }

 private:
  enum class Kind { Init, Point, BottomPoint, Exhausted, Halt };
  struct RState {
    Kind kind;
    std::string p;
    Word cache;
  };
  struct Outcome {
    Kind kind;  // Point, BottomPoint, Exhausted or Halt
    std::string p;
    Word cache;
    bool operator<(const Outcome& o) const {
      return std::tie(kind, p, cache) < std::tie(o.kind, o.p, o.cache);
    }
  };
  using Dist = std::map<Outcome, Rational>;

  std::string name(const Outcome& o) {
    std::string n;
    switch (o.kind) {
      case Kind::Point: n = tag({o.p, word_key(o.cache)}); break;
      case Kind::BottomPoint: n = tag({o.p, m1_.bottom}); break;
      case Kind::Exhausted: n = tag({o.p}); break;
      case Kind::Halt: return o.p;
      case Kind::Init: return init_;
    }
    if (!names_.count(n)) {
      names_[n] = {o.kind, o.p, o.cache};
      note_origin(trace_, n,
                  o.kind == Kind::Point         ? "read point holding a cached stack top"
                  : o.kind == Kind::BottomPoint ? "read point on the bottom marker"
                                                : "cache exhausted, pops the next block");
    }
    return n;
  }

  std::string block(const Word& d, bool on_bottom) {
    std::string n = on_bottom ? tag({word_key(d), m1_.bottom}) : tag({word_key(d)});
    if (!blocks_.count(n)) {
      blocks_[n] = {d, on_bottom};
      note_origin(trace_, n, on_bottom ? "block of cached symbols resting on the bottom marker"
                                       : "block of cached symbols");
    }
    return n;
  }

  const Dist& resolve(const std::string& s, const Word& c) {
    auto key = std::make_pair(s, c);
    if (auto it = memo_.find(key); it != memo_.end()) return it->second;
    Dist d;
    Rational lam = m1_.mass(s, kLambda, c.front());
    if (lam < 1) d[{Kind::Point, s, c}] += 1 - lam;
    if (const Row* row = m1_.row(s, kLambda, c.front()))
      for (const auto& [t, p] : *row) {
        if (m1_.halting(t.to)) {
          d[{Kind::Halt, t.to, {}}] += p;
        } else if (c.size() == 1) {
          d[{Kind::Exhausted, t.to, {}}] += p;
        } else {
          for (const auto& [o, q] : resolve(t.to, Word(c.begin() + 1, c.end()))) d[o] += p * q;
        }
      }
    return memo_[key] = std::move(d);
  }

  Dist resolve_bottom(const std::string& s) {
    Dist d;
    Rational lam = m1_.mass(s, kLambda, m1_.bottom);
    if (lam < 1) d[{Kind::BottomPoint, s, {}}] += 1 - lam;
    if (const Row* row = m1_.row(s, kLambda, m1_.bottom))
      for (const auto& [t, p] : *row) {
        if (!m1_.halting(t.to))
          throw TransformError("ideal-shape", "λ-move on the bottom marker into running state " + t.to);
        d[{Kind::Halt, t.to, {}}] += p;
      }
    return d;
  }

  // Outcomes once the cache above `x` is used up and x itself is popped.
  void pop_block(const std::string& s, const Sym& x, const Rational& q, Row& row) {
    const auto& [d, on_bottom] = blocks_.at(x);
    for (const auto& [o, p] : Dist(resolve(s, d))) {
      if (o.kind == Kind::Exhausted && on_bottom) {
        for (const auto& [o2, p2] : resolve_bottom(o.p)) row[Target{name(o2), {}}] += q * p * p2;
      } else {
        row[Target{name(o), {}}] += q * p;
      }
    }
  }

  void exhaust(const std::string& s, const Sym& x, const Rational& q, Row& row) {
    if (x == m1_.bottom) {
      for (const auto& [o, p] : resolve_bottom(s)) row[Target{name(o), {x}}] += q * p;
    } else {
      pop_block(s, x, q, row);
    }
  }

  // After the merged machine moved to s with cache c (c = written word
  // followed by the untouched rest of the previous cache) on real top x.
  void after_read(const std::string& s, const Word& c, const Word& rest, const Sym& x,
                  const Rational& q, Row& row) {
    if (m1_.halting(s)) {
      row[Target{s, {x}}] += q;
      return;
    }
    if (c.empty()) {
      exhaust(s, x, q, row);
      return;
    }
    for (const auto& [o, p] : Dist(resolve(s, c))) {
      if (o.kind == Kind::Exhausted) {
        exhaust(o.p, x, q * p, row);
      } else if (o.kind == Kind::Point && o.cache.size() > limit_) {
        size_t head = o.cache.size() - rest.size();
        Outcome kept{Kind::Point, o.p, Word(o.cache.begin(), o.cache.begin() + head)};
        row[Target{name(kept), {block(rest, x == m1_.bottom), x}}] += q * p;
      } else {
        row[Target{name(o), {x}}] += q * p;
      }
    }
  }

  void read_rows(const std::string& p, const Sym& top_m1, const Word& rest, const Sym& x,
                 const std::vector<Sym>& reads, PairRows& out) {
    Rational stop = 1 - m1_.mass(p, kLambda, top_m1);
    for (const auto& s : reads) {
      const Row* r = m1_.row(p, s, top_m1);
      if (!r) continue;
      Row row;
      for (const auto& [t, d] : *r) {
        Word c = t.push;
        if (top_m1 == m1_.bottom) c.pop_back();
        c.insert(c.end(), rest.begin(), rest.end());
        after_read(t.to, c, rest, x, d / stop, row);
      }
      for (auto it = row.begin(); it != row.end();) it = it->second == 0 ? row.erase(it) : std::next(it);
      if (!row.empty()) out[s] = std::move(row);
    }
  }

  PairRows rows_of(const std::string& q, const Sym& a) {
    PairRows out;
    auto it = names_.find(q);
    if (it == names_.end()) return out;
    const RState st = it->second;
    if (a != m1_.bottom && !blocks_.count(a)) return out;
    std::vector<Sym> reads(m1_.input.begin(), m1_.input.end());
    reads.push_back(kDollar);
    switch (st.kind) {
      case Kind::Init:
        if (a == m1_.bottom) read_rows(m1_init_, m1_.bottom, {}, a, {kCent}, out);
        break;
      case Kind::Point:
        read_rows(st.p, st.cache.front(), Word(st.cache.begin() + 1, st.cache.end()), a, reads, out);
        break;
      case Kind::BottomPoint:
        if (a == m1_.bottom) read_rows(st.p, m1_.bottom, {}, a, reads, out);
        break;
      case Kind::Exhausted:
        if (blocks_.count(a)) {
          Row row;
          pop_block(st.p, a, 1, row);
          out[kLambda] = std::move(row);
        }
        break;
      case Kind::Halt: break;
    }
    return out;
  }

  const Machine& m1_;
  std::string m1_init_;
  TransformTrace* trace_;
  size_t limit_ = 0;
  std::string init_;
  std::map<std::string, RState> names_;
  std::map<std::string, std::pair<Word, bool>> blocks_;
  std::map<std::pair<std::string, Word>, Dist> memo_;
};

}  // namespace

Machine ideal_shape_of_normalized(const Machine& h, TransformTrace* trace) {
  const std::string stage = "ideal-shape";
  if (h.kind != Kind::Endmarked) throw TransformError(stage, "input must be an endmarked machine");
  require_sound(stage, h);
  if (h.halting(h.initial)) throw TransformError(stage, "initial state must not be halting");

  std::string init1 = fresh_name("init", h.states);
  Machine m1 = merge_lambda_runs(h, init1);
  auto m1_halting = check_halting(m1);
  if (!m1_halting.ok)
    throw TransformError(stage, "merged machine diverges: " + m1_halting.witness);
  if (trace) trace->intermediates.emplace_back("λ-runs merged", m1);

  BlockBuilder builder(m1, init1, trace);
  Machine r = builder.build();
  if (trace) trace->notes.push_back("cache limit L = " + std::to_string(builder.limit()));
  finish(stage, h, r, trace);
  return r;
}

Machine to_ideal_shape(const Machine& m, TransformTrace* trace) {
  const std::string stage = "ideal-shape";
  TransformTrace first;
  Machine h = halt_normalize(m, trace ? &first : nullptr);
  if (trace) trace->intermediates.emplace_back("halt-normalized", h);
  Machine r = ideal_shape_of_normalized(h, trace);
  if (trace) {
    trace->before = complexity(m);
    for (auto& o : first.origins) trace->origins.insert(trace->origins.begin(), o);
  }
  return r;
}

}  // namespace pda
