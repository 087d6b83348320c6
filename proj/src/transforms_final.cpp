// Removal of λ-moves after the right endmarker.
//
// After reading $ the input machine only pops its stack by λ-moves until it
// halts on Z0. That tail is a finite automaton N reading the stack top-down,
// so its verdict from state q with stack w is p_N(q, w, ⊤). The new machine
// keeps the reversal K of N running over the stack bottom-up: each stack
// symbol remembers K's state below it, and the control state holds K's state
// for the whole stack. On $ the verdict is then a lookup.

#include "pda/pfa.hpp"
#include "transforms_common.hpp"

namespace pda {

using namespace detail;

namespace {

class FinalLambdaBuilder {
 public:
  FinalLambdaBuilder(const Machine& m, const std::string& stage) : m_(m), stage_(stage) {}

  Machine build(TransformTrace* trace) {
    collect_tail();
    build_pfa();
    s0_ = 1u << top_;
    Machine base;
    base.kind = Kind::NoLeftEndmark;
    base.mode = m_.mode;
    base.input = m_.input;
    base.bottom = m_.bottom;
    taken_ = {};
    init_ = claim("init");
    acc_ = claim("acc");
    rej_ = claim("rej");
    base.initial = init_;
    symbols_[m_.bottom] = {m_.bottom, s0_};
    used_symbols_ = {m_.bottom};
    RowSource rows = [this](const std::string& q, const Sym& a) { return rows_of(q, a); };
    Machine out = explore(base, rows, [this](const std::string& q) { return classify(q); });
    out.declared_push_size = std::nullopt;
    if (trace) {
      trace->notes.push_back("post-$ automaton has " + std::to_string(pfa_.states.size()) +
                             " states");
      for (const auto& [name, st] : states_)
        note_origin(trace, name, "state " + st.first + " with reversed-automaton state " +
                                     subset_name(pfa_, st.second));
      for (const auto& [name, sy] : symbols_)
        if (name != m_.bottom)
          note_origin(trace, name, "symbol " + sy.first + " over reversed-automaton state " +
                                       subset_name(pfa_, sy.second));
    }
    return out;
  }

 private:
  // States entered on $ and everything reachable from them by λ.
  void collect_tail() {
    std::vector<std::string> work;
    for (const auto& [key, row] : m_.delta)
      if (key.read == kDollar)
        for (const auto& [t, p] : row)
          if (tail_.insert(t.to).second) work.push_back(t.to);
    while (!work.empty()) {
      std::string q = work.back();
      work.pop_back();
      for (const auto& a : m_.stack) {
        const Row* r = m_.row(q, kLambda, a);
        if (!r) continue;
        for (const auto& [t, p] : *r) {
          if (a != m_.bottom && !t.push.empty())
            throw TransformError(stage_, "after $, state " + q + " moves by λ on " + a +
                                             " without popping");
          if (a == m_.bottom && !m_.halting(t.to))
            throw TransformError(stage_, "after $, state " + q +
                                             " moves by λ on the bottom marker without halting");
          if (tail_.insert(t.to).second) work.push_back(t.to);
        }
      }
    }
  }

  void build_pfa() {
    for (const auto& q : tail_)
      if (!m_.halting(q)) pfa_.states.push_back(q);
    std::set<std::string> names(pfa_.states.begin(), pfa_.states.end());
    std::string top = fresh_name("⊤", names);
    names.insert(top);
    std::string bot = fresh_name("⊥", names);
    top_ = static_cast<int>(pfa_.states.size());
    pfa_.states.push_back(top);
    pfa_.states.push_back(bot);
    if (pfa_.states.size() > static_cast<size_t>(kMaxReverseStates))
      throw TransformError(stage_, "post-$ automaton has " + std::to_string(pfa_.states.size()) +
                                       " states, more than the supported " +
                                       std::to_string(kMaxReverseStates));
    pfa_.alphabet = upper_symbols(m_);
    pfa_.end_symbol = m_.bottom;
    size_t n = pfa_.states.size();
    for (const auto& a : m_.stack) {
      Matrix u(n, std::vector<Rational>(n, 0));
      for (size_t i = 0; i + 2 < n; ++i) {
        Rational sum = 0;
        if (const Row* r = m_.row(pfa_.states[i], kLambda, a))
          for (const auto& [t, p] : *r) {
            u[i][target(t.to)] += p;
            sum += p;
          }
        u[i][i] += 1 - sum;  // mass the input machine would block on
      }
      u[n - 2][n - 2] = 1;
      u[n - 1][n - 1] = 1;
      pfa_.U[a] = std::move(u);
    }
  }

  int target(const std::string& q) const {
    if (m_.accept.count(q)) return top_;
    if (m_.reject.count(q)) return top_ + 1;
    return pfa_.index(q);
  }

  const std::map<uint32_t, Rational>& k_row(uint32_t mask, const Sym& a) {
    auto key = std::make_pair(mask, a);
    auto it = k_rows_.find(key);
    if (it != k_rows_.end()) return it->second;
    return k_rows_[key] = reversed_row(pfa_, mask, a);
  }

  std::string claim(const std::string& base) {
    std::string name = fresh_name(base, taken_);
    taken_.insert(name);
    return name;
  }

  std::string state(const std::string& q, uint32_t k) {
    auto key = std::make_pair(q, k);
    auto it = state_names_.find(key);
    if (it != state_names_.end()) return it->second;
    std::string name = claim(tag({q, subset_name(pfa_, k)}));
    state_names_[key] = name;
    states_[name] = key;
    return name;
  }

  Sym symbol(const Sym& b, uint32_t r) {
    auto key = std::make_pair(b, r);
    auto it = symbol_names_.find(key);
    if (it != symbol_names_.end()) return it->second;
    Sym name = fresh_name(tag({b, subset_name(pfa_, r)}), used_symbols_);
    used_symbols_.insert(name);
    symbol_names_[key] = name;
    symbols_[name] = key;
    return name;
  }

  int classify(const std::string& q) const {
    if (q == acc_) return 1;
    if (q == rej_) return 2;
    if (q == init_) return m_.accept.count(m_.initial) ? 1 : m_.reject.count(m_.initial) ? 2 : 0;
    auto it = states_.find(q);
    if (it == states_.end()) return 0;
    if (m_.accept.count(it->second.first)) return 1;
    if (m_.reject.count(it->second.first)) return 2;
    return 0;
  }

  // K reads `w` (topmost first) bottom-to-top starting in `from`. Returns
  // the distribution over (end state, bracketed copy of w).
  std::map<std::pair<uint32_t, Word>, Rational> run_k(uint32_t from, const Word& w) {
    std::map<std::pair<uint32_t, Word>, Rational> cur{{{from, Word{}}, 1}};
    for (auto it = w.rbegin(); it != w.rend(); ++it) {
      std::map<std::pair<uint32_t, Word>, Rational> next;
      for (const auto& [st, p] : cur) {
        for (const auto& [k, g] : k_row(st.first, *it)) {
          Word pushed = st.second;
          pushed.insert(pushed.begin(), symbol(*it, st.first));
          next[{k, pushed}] += p * g;
        }
      }
      cur = std::move(next);
    }
    return cur;
  }

  PairRows rows_of(const std::string& name, const Sym& x) {
    PairRows out;
    if (name == init_) {
      if (x != m_.bottom || m_.halting(m_.initial)) return out;
      for (const auto& [k, g] : k_row(s0_, m_.bottom)) add_rows(out, m_.initial, k, m_.bottom, s0_, g);
      return out;
    }
    auto st = states_.find(name);
    auto sy = symbols_.find(x);
    if (st == states_.end() || sy == symbols_.end()) return out;
    if (m_.halting(st->second.first)) return out;
    add_rows(out, st->second.first, st->second.second, sy->second.first, sy->second.second, 1);
    return out;
  }

  // Rows of the new machine at M's pair (q, a), where K is in state k for
  // the whole stack and was in state r below a. Scaled by `weight`.
  void add_rows(PairRows& out, const std::string& q, uint32_t k, const Sym& a, uint32_t r,
                const Rational& weight) {
    Sym top = a == m_.bottom ? a : symbol(a, r);
    std::vector<Sym> reads(m_.input.begin(), m_.input.end());
    reads.push_back(kLambda);
    reads.push_back(kDollar);
    for (const auto& xi : reads) {
      const Row* row = m_.row(q, xi, a);
      if (!row) continue;
      Rational accept = 0, total = 0;
      for (const auto& [t, d] : *row) {
        bool keep = !t.push.empty() && t.push.back() == a;
        std::map<std::pair<uint32_t, Word>, Rational> outcomes;
        if (keep) {
          Word v(t.push.begin(), t.push.end() - 1);
          for (auto& [o, g] : run_k(k, v)) {
            Word w = o.second;
            w.push_back(top);
            outcomes[{o.first, w}] += g;
          }
        } else {
          outcomes = run_k(r, t.push);
        }
        total += d;
        for (const auto& [o, g] : outcomes) {
          if (xi == kDollar) {
            if (o.first >> target(t.to) & 1u) accept += d * g;
            continue;
          }
          out[xi][Target{state(t.to, o.first), o.second}] += weight * d * g;
        }
      }
      if (xi == kDollar) {
        if (accept > 0) out[xi][Target{acc_, {top}}] += weight * accept;
        if (total - accept > 0) out[xi][Target{rej_, {top}}] += weight * (total - accept);
      }
    }
  }

  const Machine& m_;
  std::string stage_;
  std::set<std::string> tail_;
  FreePFA pfa_;
  int top_ = 0;
  uint32_t s0_ = 0;
  std::set<std::string> taken_;
  std::set<Sym> used_symbols_;
  std::string init_, acc_, rej_;
  std::map<std::pair<uint32_t, Sym>, std::map<uint32_t, Rational>> k_rows_;
  std::map<std::pair<std::string, uint32_t>, std::string> state_names_;
  std::map<std::string, std::pair<std::string, uint32_t>> states_;
  std::map<std::pair<Sym, uint32_t>, Sym> symbol_names_;
  std::map<Sym, std::pair<Sym, uint32_t>> symbols_;
};

}  // namespace

Machine remove_final_lambda(const Machine& m, TransformTrace* trace) {
  const std::string stage = "remove-final-lambda";
  if (m.kind != Kind::NoLeftEndmark)
    throw TransformError(stage, "input must have a right endmarker only");
  require_sound(stage, m);
  FinalLambdaBuilder builder(m, stage);
  Machine out;
  try {
    out = builder.build(trace);
  } catch (const PfaError& e) {
    throw TransformError(stage, e.what());
  }
  finish(stage, m, out, trace);
  return out;
}

}  // namespace pda
