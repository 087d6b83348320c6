// Acceptance run: one PASS/FAIL line per criterion. Reference values come
// from the path-enumeration oracle in support.hpp, never from the library's
// simulator alone.

#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>

#include "corpus.hpp"
#include "pda/equiv.hpp"
#include "pda/io.hpp"
#include "pda/pfa.hpp"
#include "pda/sim.hpp"
#include "pda/transforms.hpp"
#include "pda/validate.hpp"
#include "support.hpp"

using namespace pda;

namespace {

struct Failure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void expect(bool ok, const std::string& what) {
  if (!ok) throw Failure(what);
}

std::string stats(const Machine& m) {
  auto s = complexity(m);
  return "n=" + std::to_string(s.n) + " m=" + std::to_string(s.m) + " e=" + std::to_string(s.e);
}

// Both machines enumerated by the oracle on every word up to max_len.
void same_outcomes(const std::string& label, const Machine& reference, const Machine& other, int max_len) {
  for (const auto& w : oracle::words(reference.input, max_len)) {
    auto x = oracle::run(reference, w);
    auto y = oracle::run(other, w);
    if (x.acc != y.acc || x.rej != y.rej)
      throw Failure(label + " differs on " + show_word(w) + ": " + to_string(x.acc) + "/" + to_string(x.rej) +
                    " vs " + to_string(y.acc) + "/" + to_string(y.rej));
  }
}

// The pipeline's stages, pruned in between exactly as the pipeline does.
struct Stages {
  Machine input, halted, ideal, left, final_free, right;
};

Stages stages_of(const Machine& m) {
  Stages s;
  s.input = m;
  s.halted = prune_unreachable(halt_normalize(m));
  s.ideal = prune_unreachable(ideal_shape_of_normalized(s.halted));
  s.left = prune_unreachable(remove_left_endmarker(s.ideal));
  s.final_free = prune_unreachable(remove_final_lambda(s.left));
  s.right = remove_right_endmarker(s.final_free);
  return s;
}

std::map<std::string, Stages> cache;
const Stages& stages(const std::string& name) {
  auto it = cache.find(name);
  if (it == cache.end()) it = cache.emplace(name, stages_of(corpus(name))).first;
  return it->second;
}

// --- criteria --------------------------------------------------------------

std::string round_trip() {
  auto start = std::chrono::steady_clock::now();
  std::ostringstream detail;
  for (const auto& name : halting_corpus()) {
    Machine m = corpus(name);
    expect(m.states.size() <= 4 && m.input.size() <= 2, name + " is outside the corpus limits");
    Machine back = m.kind == Kind::NoEndmark ? strip_endmarkers_pipeline(add_endmarkers(m))
                                             : add_endmarkers(strip_endmarkers_pipeline(m));
    same_outcomes(name + " round trip", m, back, 5);
    detail << name << " " << stats(back) << "; ";
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  expect(secs <= 600, "took " + std::to_string(secs) + " s");
  detail << "time " << secs << " s";
  return detail.str();
}

std::string endmarker_counts() {
  std::vector<std::pair<std::string, Machine>> inputs{{"coin", corpus("coin")}};
  for (const auto& name : endmarked_corpus())
    inputs.emplace_back(name + " stripped", strip_endmarkers_pipeline(corpus(name)));
  std::ostringstream detail;
  for (const auto& [name, m] : inputs) {
    auto a = complexity(m), b = complexity(add_endmarkers(m));
    expect(b.n <= 2 * a.n + 1, name + ": " + std::to_string(b.n) + " states");
    expect(b.m == a.m + 2, name + ": " + std::to_string(b.m) + " stack symbols");
    expect(b.e == a.e, name + ": push size " + std::to_string(b.e));
    detail << name << " " << a.n << "->" << b.n << "; ";
  }
  return detail.str();
}

std::string halt_normal_form() {
  std::ostringstream detail;
  for (const auto& name : endmarked_corpus()) {
    Machine m = corpus(name);
    Machine h = halt_normalize(m);
    expect(h.states.size() == 2 * m.states.size() + 2, name + ": " + std::to_string(h.states.size()) + " states");
    expect(h.accept.size() == 1 && h.reject.size() == 1, name + ": more than one halting state per verdict");
    const auto& acc = *h.accept.begin();
    const auto& rej = *h.reject.begin();
    for (const auto& w : oracle::words(m.input, 6)) {
      auto r = oracle::run(h, w);
      for (const auto& [conf, p] : r.terminal)
        expect((conf.first == acc || conf.first == rej) && conf.second == Word{h.bottom},
               name + ": terminal mass in (" + conf.first + "," + join(conf.second) + ") on " + show_word(w));
      auto o = oracle::run(m, w);
      expect(r.acc == o.acc && r.rej == o.rej, name + ": differs on " + show_word(w));
    }
    detail << name << " n=" << h.states.size() << "; ";
  }
  return detail.str();
}

std::string ideal_shape() {
  std::ostringstream detail;
  for (const auto& name : endmarked_corpus()) {
    Machine m = corpus(name);
    Machine i = to_ideal_shape(m);
    auto report = check_ideal_shape(i);
    expect(report.all(), name + ": " + report.text());
    expect(observed_push_size(i) <= 2, name + ": push size " + std::to_string(observed_push_size(i)));
    same_outcomes(name, m, i, 5);
    detail << name << " " << stats(i) << "; ";
  }
  return detail.str();
}

std::string left_removal() {
  std::ostringstream detail;
  for (const auto& name : endmarked_corpus()) {
    const Stages& s = stages(name);
    Machine l = remove_left_endmarker(s.ideal);
    size_t n = s.ideal.states.size(), m = s.ideal.stack.size();
    expect(l.states.size() == 2 * n, name + ": " + std::to_string(l.states.size()) + " states");
    expect(l.stack.size() <= (n + 1) * m, name + ": " + std::to_string(l.stack.size()) + " stack symbols");
    same_outcomes(name, s.input, l, 5);
    detail << name << " " << stats(s.ideal) << " -> " << stats(l) << "; ";
  }
  return detail.str();
}

std::string pfa_reversal_law() {
  std::mt19937 rng(2024);
  int automata = 0;
  long checks = 0;
  for (; automata < 24; ++automata) {
    FreePFA n = oracle::random_pfa(rng);
    ReversedPFA r = reverse_pfa(n);
    int size = static_cast<int>(n.states.size());
    for (const auto& w : oracle::words({"x", "y", "#"}, 5)) {
      Word rev(w.rbegin(), w.rend());
      for (int q = 0; q < size; ++q)
        for (int p = 0; p < size; ++p) {
          Rational lhs = oracle::path_sum(n, q, w, p);
          Rational rhs = 0;
          for (uint32_t k : r.T[q]) rhs += oracle::path_sum(r.K, static_cast<int>(r.s[p]), rev, static_cast<int>(k));
          expect(lhs == rhs, "automaton " + std::to_string(automata) + " on " + show_word(w));
          ++checks;
        }
    }
  }
  return std::to_string(automata) + " automata, " + std::to_string(checks) + " equalities";
}

std::string final_lambda_removal() {
  std::ostringstream detail;
  for (const auto& name : endmarked_corpus()) {
    const Stages& s = stages(name);
    Machine f = remove_final_lambda(s.left);
    for (const auto& w : oracle::words(f.input, 5))
      expect(!oracle::run(f, w).lambda_after_dollar, name + ": λ-move after $ on " + show_word(w));
    size_t n = s.left.states.size(), m = s.left.stack.size();
    double bound = static_cast<double>(m) * std::pow(2.0, static_cast<double>(n));
    expect(static_cast<double>(f.stack.size()) <= bound, name + ": " + std::to_string(f.stack.size()) + " stack symbols");
    same_outcomes(name, s.input, f, 5);
    detail << name << " m=" << f.stack.size() << " <= " << bound << "; ";
  }
  return detail.str();
}

// F (p,aw) · δ(p,$,a ↦ r,a) must equal N (r,[p,a]w) at the cell after x.
void condition_star(const std::string& name, const Machine& f, const Machine& n, int max_len) {
  for (const auto& x : oracle::words(f.input, max_len)) {
    int cell = static_cast<int>(x.size());
    auto pf = oracle::run(f, x, cell).profile;
    auto pn = oracle::run(n, x, cell).profile;
    std::map<oracle::Conf, Rational> expected, got;
    for (const auto& [conf, mass] : pf) {
      const auto& [p, st] = conf;
      const Sym& a = st.front();
      const Row* row = f.row(p, kDollar, a);
      if (!row) continue;
      Sym bracket = tag({p, a});
      expect(!f.stack.count(bracket), name + ": bracket name " + bracket + " is ambiguous");
      Word w{bracket};
      if (a == f.bottom) w.push_back(f.bottom);
      else w.insert(w.end(), st.begin() + 1, st.end());
      for (const auto& [t, d] : *row) expected[{t.to, w}] += mass * d;
    }
    for (const auto& [conf, mass] : pn)
      if (!f.stack.count(conf.second.front())) got[conf] += mass;
    expect(expected == got, name + ": condition fails after " + show_word(x));
  }
}

std::string right_removal() {
  std::ostringstream detail;
  for (const auto& name : endmarked_corpus()) {
    const Stages& s = stages(name);
    const Machine& f = s.final_free;
    const Machine& r = s.right;
    size_t n = f.states.size(), m = f.stack.size();
    expect(r.states.size() == 2 * n + 1, name + ": " + std::to_string(r.states.size()) + " states");
    expect(r.stack.size() == m * (n + 1), name + ": " + std::to_string(r.stack.size()) + " stack symbols");
    condition_star(name, f, r, 4);
    same_outcomes(name, s.input, r, 5);
    detail << name << " " << stats(f) << " -> " << stats(r) << "; ";
  }
  return detail.str();
}

bool zero_one(const Rational& p) { return p == 0 || p == 1; }

std::string special_modes() {
  std::ostringstream detail;
  Machine det = corpus("anbn_det");
  Machine out = strip_endmarkers_pipeline(det);
  expect(out.mode == Mode::Deterministic && validate(out).ok(), "deterministic output does not validate");
  for (const auto& [k, row] : out.delta)
    for (const auto& [t, p] : row) expect(zero_one(p), "transition probability " + to_string(p));
  Simulator sim(out);
  for (const auto& w : oracle::words(det.input, 6)) {
    auto o = sim.run(w);
    auto x = oracle::run(det, w);
    expect(zero_one(o.acc) && zero_one(o.rej), "outcome " + to_string(o.acc) + " on " + show_word(w));
    expect(o.acc == x.acc, "anbn_det language differs on " + show_word(w));
  }
  detail << "anbn_det " << stats(out) << "; ";

  Machine nd = corpus("nondet_has_a");
  Machine nout = strip_endmarkers_pipeline(nd);
  Simulator nsim(nout);
  for (const auto& w : oracle::words(nd.input, 6)) {
    auto o = nsim.run(w);
    auto x = oracle::run(nd, w);
    expect((o.acc > 0) == (x.acc > 0), "nondet acceptance differs on " + show_word(w));
    expect((o.rej == 1) == (x.rej == 1), "nondet rejection differs on " + show_word(w));
  }
  detail << "nondet_has_a " << stats(nout);
  return detail.str();
}

std::string language_reversal() {
  Machine m = corpus("anbn_bounded");
  Machine r = reverse_language(m);
  auto halting = check_halting(r);
  expect(halting.ok, "output does not halt: " + halting.reason);
  Simulator sim(r);
  int total = 0, exact = 0, decided = 0;
  bool bound = true;
  for (const auto& w : oracle::words(m.input, 5)) {
    Word rev(w.rbegin(), w.rend());
    auto x = oracle::run(m, w);
    auto y = sim.run(rev);
    ++total;
    if (x.acc == y.acc && x.rej == y.rej) ++exact;
    if (oracle::decide(m.mode, x) == decide(r.mode, y)) ++decided;
    if (y.acc > Rational(1, 4) && y.rej > Rational(1, 4)) bound = false;
  }
  std::string detail = std::to_string(exact) + "/" + std::to_string(total) + " words exact, " +
                       std::to_string(decided) + "/" + std::to_string(total) + " decisions kept, error bound 1/4 " +
                       (bound ? "kept" : "lost") + ", " + stats(r);
  expect(exact == total && bound, detail);
  return detail;
}

std::string property_suite() {
  int machines = 0;
  for (int i = 0; i < 600; ++i) {
    oracle::Generator g(90000 + i);
    Machine m = i % 3 == 0 ? g.no_endmark() : g.endmarked(i % 3 == 1);
    expect(validate(m).ok(), "machine " + std::to_string(i) + " invalid");
    expect(check_halting(m).ok, "machine " + std::to_string(i) + " fails the halting gate");
    std::string text = serialize_machine(m);
    expect(parse_machine(text) == m, "machine " + std::to_string(i) + " does not round-trip");
    Machine r = oracle::rename(
        m, [](const std::string& q) { return "r." + q; }, [](const Sym& a) { return a == "Z" ? Sym("Y") : "x" + a; });
    expect(validate(r).ok(), "renamed machine " + std::to_string(i) + " invalid");
    Simulator a(m), b(r);
    Machine out = m.kind == Kind::NoEndmark ? add_endmarkers(m) : halt_normalize(m);
    Simulator c(out);
    for (const auto& w : oracle::words(m.input, 3)) {
      auto x = oracle::run(m, w);
      Outcome expected{x.acc, x.rej};
      expect(a.run(w) == expected, "machine " + std::to_string(i) + " simulator differs on " + show_word(w));
      expect(b.run(w) == expected, "machine " + std::to_string(i) + " renaming changes " + show_word(w));
      expect(c.run(w) == expected, "machine " + std::to_string(i) + " transform changes " + show_word(w));
    }
    // The same machine with a λ-self-loop on its initial pair must be refused.
    Machine bad = m;
    std::erase_if(bad.delta, [&](const auto& kv) { return kv.first.from == m.initial && kv.first.top == m.bottom; });
    bad.add(m.initial, kLambda, m.bottom, m.initial, {m.bottom}, 1);
    expect(!check_halting(bad).ok, "machine " + std::to_string(i) + " λ-loop passes the halting gate");
    ++machines;
  }
  return std::to_string(machines) + " random machines";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<std::string()>>> criteria = {
      {"round trip through the pipeline", round_trip},
      {"endmarker addition counts", endmarker_counts},
      {"halt normal form", halt_normal_form},
      {"ideal shape", ideal_shape},
      {"left endmarker removal", left_removal},
      {"free automaton reversal law", pfa_reversal_law},
      {"final λ-move removal", final_lambda_removal},
      {"right endmarker removal and guessed decisions", right_removal},
      {"deterministic and nondeterministic modes", special_modes},
      {"language reversal", language_reversal},
      {"randomized properties", property_suite},
  };
  int failed = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    const auto& [name, check] = criteria[i];
    std::string verdict, detail;
    try {
      detail = check();
      verdict = "PASS";
    } catch (const std::exception& e) {
      detail = e.what();
      verdict = "FAIL";
      ++failed;
    }
    std::cout << "criterion " << i + 1 << " [" << name << "]: " << verdict << " - " << detail << std::endl;
  }
  std::cout << (failed ? std::to_string(failed) + " criteria failed" : std::string("all criteria passed"))
            << std::endl;
  return failed ? 1 : 0;
}
