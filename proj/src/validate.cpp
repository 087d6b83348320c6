#include "pda/validate.hpp"

#include <algorithm>
#include <sstream>

namespace pda {

bool ValidationReport::has(const std::string& rule) const {
  return std::any_of(violations.begin(), violations.end(),
                     [&](const Violation& v) { return v.rule == rule; });
}

std::string ValidationReport::text() const {
  if (ok()) return "valid\n";
  std::ostringstream out;
  for (const auto& v : violations) out << "violation: " << v.message << "\n";
  return out.str();
}

int observed_push_size(const Machine& m) {
  size_t e = 0;
  for (const auto& [key, row] : m.delta)
    for (const auto& [t, p] : row) e = std::max(e, t.push.size());
  return static_cast<int>(e);
}

ComplexityStats complexity(const Machine& m) {
  ComplexityStats s;
  s.n = static_cast<int>(m.states.size());
  s.m = static_cast<int>(m.stack.size());
  s.e = std::max({1, observed_push_size(m), m.declared_push_size.value_or(1)});
  return s;
}

namespace {

std::string triple(const std::string& q, const Sym& s, const Sym& a) {
  return "(" + q + "," + s + "," + a + ")";
}

class Checker {
 public:
  explicit Checker(const Machine& m) : m_(m) {}

  ValidationReport run() {
    sets();
    transitions();
    rows();
    first_step();
    return std::move(report_);
  }

 private:
  void fail(const std::string& rule, const std::string& detail,
            std::optional<TransKey> where = std::nullopt) {
    report_.violations.push_back({rule, rule + ": " + detail, where});
  }

  void sets() {
    if (!m_.stack.count(m_.bottom)) fail("bottom marker", "bottom marker not in stack alphabet");
    if (m_.stack.count(kLambda)) fail("reserved symbol", "λ used as a stack symbol");
    if (!m_.states.count(m_.initial)) fail("initial state", "initial state " + m_.initial + " not in Q");
    for (const auto& q : m_.accept)
      if (!m_.states.count(q)) fail("halting states", "accepting state " + q + " not in Q");
    for (const auto& q : m_.reject)
      if (!m_.states.count(q)) fail("halting states", "rejecting state " + q + " not in Q");
    for (const auto& q : m_.accept)
      if (m_.reject.count(q)) fail("disjoint halting sets", q + " is both accepting and rejecting");
    for (const auto& s : m_.input)
      if (!is_single_scalar(s) || s == kLambda || s == kCent || s == kDollar)
        fail("input alphabet", "bad input symbol \"" + s + "\"");
    if (m_.kind == Kind::NoEndmark)
      for (const auto& q : m_.states)
        if (!m_.halting(q)) fail("state partition", "state " + q + " is neither accepting nor rejecting");
    int observed = observed_push_size(m_);
    if (m_.declared_push_size && *m_.declared_push_size < observed)
      fail("push size", "declared push size " + std::to_string(*m_.declared_push_size) +
                            " is below observed " + std::to_string(observed));
  }

  bool read_allowed(const Sym& s) const {
    if (s == kLambda) return true;
    if (s == kCent) return m_.kind == Kind::Endmarked;
    if (s == kDollar) return m_.kind != Kind::NoEndmark;
    return m_.input.count(s) > 0;
  }

  void transitions() {
    for (const auto& [key, row] : m_.delta) {
      std::string where = triple(key.from, key.read, key.top);
      if (!m_.states.count(key.from)) fail("unknown state", where + " uses unknown state " + key.from, key);
      if (!read_allowed(key.read))
        fail("read symbol", where + " reads " + key.read + ", not allowed for kind " + to_string(m_.kind), key);
      if (!m_.stack.count(key.top)) fail("unknown symbol", where + " has unknown top " + key.top, key);
      if (m_.kind != Kind::NoEndmark && m_.halting(key.from))
        fail("halting states have no moves", where + " leaves halting state " + key.from, key);
      for (const auto& [t, p] : row) {
        std::string move = where + "→(" + t.to + "," + show_word(t.push) + ")";
        if (!m_.states.count(t.to)) fail("unknown state", move + " targets unknown state", key);
        for (const auto& s : t.push)
          if (!m_.stack.count(s)) fail("unknown symbol", move + " pushes unknown symbol " + s, key);
        if (!is_probability(p) || p == 0)
          fail("probability out of range", move + " has probability " + to_string(p), key);
        if (m_.mode == Mode::Deterministic && p != 1 && p != 0)
          fail("deterministic mode", move + " has probability " + to_string(p), key);
        bool bottom_ok;
        if (key.top == m_.bottom) {
          bottom_ok = !t.push.empty() && t.push.back() == m_.bottom &&
                      std::count(t.push.begin(), t.push.end(), m_.bottom) == 1;
        } else {
          bottom_ok = std::count(t.push.begin(), t.push.end(), m_.bottom) == 0;
        }
        if (!bottom_ok) fail("bottom-marker discipline", move, key);
      }
    }
  }

  bool requirement_applies(const std::string& q) const {
    return m_.kind == Kind::NoEndmark || !m_.halting(q);
  }

  void rows() {
    for (const auto& q : m_.states) {
      if (!requirement_applies(q)) continue;
      for (const auto& a : m_.stack) {
        Rational lam = m_.mass(q, kLambda, a);
        bool any_read = false;
        for (const auto& s : m_.readable())
          if (m_.mass(q, s, a) > 0) any_read = true;
        if (lam > 1) {
          fail("probability requirement", "δ[" + q + ",λ," + a + "]=" + to_string(lam) + ">1",
               TransKey{q, kLambda, a});
          continue;
        }
        if (!any_read) {
          if (lam > 0 && lam < 1)
            fail("probability requirement",
                 "δ[" + q + ",λ," + a + "]=" + to_string(lam) + "≠1 with no read moves",
                 TransKey{q, kLambda, a});
          continue;
        }
        // Σ-reads form one group: any of them present means all must be.
        bool sigma_read = false;
        for (const auto& s : m_.input)
          if (m_.mass(q, s, a) > 0) sigma_read = true;
        std::vector<Sym> check;
        if (sigma_read || lam > 0) check.assign(m_.input.begin(), m_.input.end());
        for (const auto& s : {kCent, kDollar})
          if (read_allowed(s) && (m_.mass(q, s, a) > 0 || (lam > 0 && s == kDollar)))
            check.push_back(s);
        for (const auto& s : check) {
          Rational sum = m_.mass(q, s, a) + lam;
          if (sum != 1)
            fail("probability requirement",
                 "δ[" + q + "," + s + "," + a + "]+δ[" + q + ",λ," + a + "]=" + to_string(sum) + "≠1",
                 TransKey{q, s, a});
        }
      }
    }
  }

  void first_step() {
    if (!m_.states.count(m_.initial) || m_.halting(m_.initial)) return;
    if (m_.kind == Kind::Endmarked) {
      if (m_.mass(m_.initial, kCent, m_.bottom) != 1)
        fail("first step", "δ[" + m_.initial + ",¢," + m_.bottom + "] must be 1");
    } else if (m_.kind == Kind::NoLeftEndmark) {
      std::vector<Sym> first(m_.input.begin(), m_.input.end());
      first.push_back(kDollar);
      for (const auto& s : first)
        if (m_.mass(m_.initial, s, m_.bottom) != 1)
          fail("first step", "δ[" + m_.initial + "," + s + "," + m_.bottom + "] must be 1");
    }
  }

  const Machine& m_;
  ValidationReport report_;
};

}  // namespace

ValidationReport validate(const Machine& m) { return Checker(m).run(); }

}  // namespace pda
