#pragma once

// Test-side helpers: an independent path-enumeration simulator, random
// machine and PFA generators, and renaming. Nothing here calls into the
// library's simulator.

#include <functional>
#include <map>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "pda/machine.hpp"
#include "pda/pfa.hpp"

namespace oracle {

using pda::Machine;
using pda::Rational;
using pda::Sym;
using pda::Word;

struct Blocked : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (state, stack topmost first)
using Conf = std::pair<std::string, Word>;

struct Result {
  Rational acc = 0;
  Rational rej = 0;
  std::map<Conf, Rational> terminal;
  bool lambda_after_dollar = false;
  // Mass through each configuration while the head is at `profile_cell`.
  std::map<Conf, Rational> profile;
};

inline std::vector<Sym> tape_of(const Machine& m, const Word& w) {
  std::vector<Sym> tape;
  if (m.kind == pda::Kind::Endmarked) tape.push_back(pda::kCent);
  tape.insert(tape.end(), w.begin(), w.end());
  if (m.kind != pda::Kind::NoEndmark) tape.push_back(pda::kDollar);
  return tape;
}

// Enumerates every computation path one by one. profile_cell < 0 disables
// profiling.
inline Result run(const Machine& m, const Word& w, int profile_cell = -1) {
  Result res;
  const auto tape = tape_of(m, w);
  const bool free_end = m.kind == pda::Kind::NoEndmark;
  auto mass_of = [&](const std::string& q, const Sym& r, const Sym& a) {
    Rational s = 0;
    auto it = m.delta.find(pda::TransKey{q, r, a});
    if (it != m.delta.end())
      for (const auto& [t, p] : it->second) s += p;
    return s;
  };
  std::function<void(const std::string&, const Word&, size_t, const Rational&, bool, int)> go =
      [&](const std::string& q, const Word& st, size_t pos, const Rational& p, bool after_dollar,
          int depth) {
        if (depth > 4000) throw Blocked("path too long");
        if (static_cast<int>(pos) == profile_cell) res.profile[{q, st}] += p;
        if (!free_end && m.halting(q)) {
          res.terminal[{q, st}] += p;
          (m.accept.count(q) ? res.acc : res.rej) += p;
          return;
        }
        const Sym& top = st.front();
        Word below(st.begin() + 1, st.end());
        auto follow = [&](const Sym& read, size_t next_pos) {
          auto it = m.delta.find(pda::TransKey{q, read, top});
          if (it == m.delta.end()) return;
          for (const auto& [t, d] : it->second) {
            if (read == pda::kLambda && after_dollar) res.lambda_after_dollar = true;
            Word ns = t.push;
            ns.insert(ns.end(), below.begin(), below.end());
            go(t.to, ns, next_pos, p * d, after_dollar || read == pda::kDollar, depth + 1);
          }
        };
        Rational lam = mass_of(q, pda::kLambda, top);
        if (pos == tape.size()) {
          follow(pda::kLambda, pos);
          if (free_end) {
            Rational rest = (1 - lam) * p;
            if (rest != 0) {
              res.terminal[{q, st}] += rest;
              (m.accept.count(q) ? res.acc : res.rej) += rest;
            }
          } else if (lam != 1) {
            throw Blocked("stuck after the last cell in " + q);
          }
          return;
        }
        const Sym& s = tape[pos];
        if (lam + mass_of(q, s, top) != 1) throw Blocked("stuck in " + q + " on " + s);
        follow(pda::kLambda, pos);
        follow(s, pos + 1);
      };
  go(m.initial, Word{m.bottom}, 0, 1, false, 0);
  return res;
}

inline bool decide(pda::Mode mode, const Result& r) {
  switch (mode) {
    case pda::Mode::Nondeterministic: return r.acc > 0;
    default: return r.acc * 2 > 1;
  }
}

inline std::vector<Word> words(const std::set<Sym>& sigma, int max_len) {
  std::vector<Word> out{{}};
  size_t from = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t to = out.size();
    for (size_t i = from; i < to; ++i)
      for (const auto& s : sigma) {
        Word w = out[i];
        w.push_back(s);
        out.push_back(w);
      }
    from = to;
  }
  return out;
}

// --- renaming --------------------------------------------------------------

inline Machine rename(const Machine& m, const std::function<std::string(const std::string&)>& fq,
                      const std::function<Sym(const Sym&)>& fs) {
  Machine r;
  r.kind = m.kind;
  r.mode = m.mode;
  r.input = m.input;
  for (const auto& q : m.states) r.states.insert(fq(q));
  for (const auto& a : m.stack) r.stack.insert(fs(a));
  r.bottom = fs(m.bottom);
  r.initial = fq(m.initial);
  for (const auto& q : m.accept) r.accept.insert(fq(q));
  for (const auto& q : m.reject) r.reject.insert(fq(q));
  r.declared_push_size = m.declared_push_size;
  for (const auto& [k, row] : m.delta)
    for (const auto& [t, p] : row) {
      Word w;
      for (const auto& a : t.push) w.push_back(fs(a));
      r.add(fq(k.from), k.read, fs(k.top), fq(t.to), w, p);
    }
  return r;
}

// --- random machines -------------------------------------------------------

// Valid, halting machines with at most three states. λ-moves always go to a
// later running state or a halting one, which rules out λ-cycles.
class Generator {
 public:
  explicit Generator(unsigned seed) : rng_(seed) {}

  Machine endmarked(bool deterministic = false) { return make(pda::Kind::Endmarked, deterministic); }
  Machine no_endmark() { return make(pda::Kind::NoEndmark, false); }

 private:
  int pick(int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng_); }

  // Splits `total` into k positive parts.
  std::vector<Rational> split(const Rational& total, int k, bool deterministic) {
    if (deterministic || k == 1) return {total};
    static const Rational shares[] = {Rational(1, 2), Rational(1, 3), Rational(2, 3), Rational(1, 4),
                                      Rational(3, 4)};
    Rational f = shares[pick(5)];
    return {total * f, total * (1 - f)};
  }

  Word random_push(const Sym& a, const std::vector<Sym>& uppers, const Sym& z) {
    int kind = pick(a == z ? 2 : 4);
    if (uppers.empty()) kind = a == z ? 0 : (pick(2) ? 0 : 2);
    switch (kind) {
      case 0: return {a};
      case 1: return {uppers[pick(uppers.size())], a};
      case 2: return {};
      default: return {uppers[pick(uppers.size())]};
    }
  }

  Machine make(pda::Kind kind, bool deterministic) {
    Machine m;
    m.kind = kind;
    m.mode = deterministic ? pda::Mode::Deterministic : pda::Mode::Probabilistic;
    m.input = pick(2) ? std::set<Sym>{"a", "b"} : std::set<Sym>{"a"};
    m.bottom = "Z";
    m.stack = {"Z"};
    if (pick(3)) m.stack.insert("A");
    if (!pick(4)) m.stack.insert("B");
    std::vector<Sym> uppers;
    for (const auto& a : m.stack)
      if (a != "Z") uppers.push_back(a);
    std::vector<std::string> running, halting;
    if (kind == pda::Kind::NoEndmark) {
      int n = 2 + pick(2);
      for (int i = 0; i < n; ++i) running.push_back("q" + std::to_string(i));
      for (const auto& q : running) m.states.insert(q);
      for (const auto& q : running) (pick(2) ? m.accept : m.reject).insert(q);
      if (m.accept.empty()) {
        m.reject.erase(running.back());
        m.accept.insert(running.back());
      }
    } else {
      int layout = pick(3);
      running = layout == 0 ? std::vector<std::string>{"q0"} : std::vector<std::string>{"q0", "q1"};
      halting = layout == 0 ? std::vector<std::string>{"acc", "rej"}
                            : std::vector<std::string>{layout == 1 ? "acc" : "rej"};
      for (const auto& q : running) m.states.insert(q);
      for (const auto& q : halting) m.states.insert(q);
      for (const auto& h : halting) (h == "acc" ? m.accept : m.reject).insert(h);
    }
    m.initial = running.front();
    auto later = [&](size_t i) {
      std::vector<std::string> out(running.begin() + i + 1, running.end());
      out.insert(out.end(), halting.begin(), halting.end());
      return out;
    };
    std::vector<std::string> anywhere = running;
    anywhere.insert(anywhere.end(), halting.begin(), halting.end());

    for (size_t i = 0; i < running.size(); ++i) {
      const auto& q = running[i];
      for (const auto& a : m.stack) {
        auto lambda_targets = later(i);
        Rational lam = 0;
        if (!lambda_targets.empty()) {
          int c = pick(3);
          lam = c == 0 ? Rational(0) : c == 1 ? Rational(1, 2) : Rational(1);
          if (deterministic && lam == Rational(1, 2)) lam = 0;
        }
        if (q == m.initial && a == m.bottom && kind != pda::Kind::NoEndmark) lam = 0;
        if (lam > 0) {
          auto parts = split(lam, 1 + pick(2), deterministic);
          for (const auto& p : parts) {
            std::string to = lambda_targets[pick(lambda_targets.size())];
            Word w = random_push(a, uppers, m.bottom);
            m.add(q, pda::kLambda, a, to, w, p);
          }
        }
        std::vector<Sym> reads(m.input.begin(), m.input.end());
        if (kind != pda::Kind::NoEndmark) reads.push_back(pda::kDollar);
        if (q == m.initial && a == m.bottom && kind == pda::Kind::Endmarked) reads.push_back(pda::kCent);
        for (const auto& s : reads) {
          Rational rest = 1 - lam;
          if (rest == 0) break;
          auto parts = split(rest, 1 + pick(2), deterministic);
          for (const auto& p : parts) {
            if (s == pda::kDollar) {
              std::string to = halting[pick(halting.size())];
              m.add(q, s, a, to, {a}, p);
            } else {
              std::string to = anywhere[pick(anywhere.size())];
              if (kind == pda::Kind::NoEndmark) to = running[pick(running.size())];
              m.add(q, s, a, to, random_push(a, uppers, m.bottom), p);
            }
          }
        }
      }
    }
    return m;
  }

  std::mt19937 rng_;
};

// Random stochastic free PFA with at most three states over {x, y} and end
// symbol "#".
inline pda::FreePFA random_pfa(std::mt19937& rng) {
  auto pick = [&](int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); };
  pda::FreePFA f;
  int n = 1 + pick(3);
  for (int i = 0; i < n; ++i) f.states.push_back("s" + std::to_string(i));
  f.alphabet = {"x", "y"};
  f.end_symbol = "#";
  for (const auto& s : {"x", "y", "#"}) {
    pda::Matrix u(n, std::vector<Rational>(n, 0));
    for (int i = 0; i < n; ++i) {
      int left = 4;
      for (int j = 0; j + 1 < n; ++j) {
        int k = pick(left + 1);
        u[i][j] = Rational(k, 4);
        u[i][j].canonicalize();
        left -= k;
      }
      u[i][n - 1] = Rational(left, 4);
      u[i][n - 1].canonicalize();
    }
    f.U[s] = u;
  }
  return f;
}

// Sum over all state paths of the product of matrix entries.
inline Rational path_sum(const pda::FreePFA& f, int from, const Word& w, int to) {
  std::function<Rational(int, size_t)> go = [&](int q, size_t i) -> Rational {
    if (i == w.size()) return q == to ? Rational(1) : Rational(0);
    Rational s = 0;
    const auto& u = f.U.at(w[i]);
    for (size_t j = 0; j < u.size(); ++j)
      if (u[q][j] != 0) s += u[q][j] * go(static_cast<int>(j), i + 1);
    return s;
  };
  return go(from, 0);
}

}  // namespace oracle
