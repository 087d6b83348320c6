#include "pda/equiv.hpp"

#include <cmath>
#include <iomanip>
#include <json.hpp>
#include <sstream>

namespace pda {

std::vector<Word> shortlex_words(const std::set<Sym>& alphabet, int max_len) {
  std::vector<Word> out{Word{}};
  size_t layer = 0;
  for (int len = 1; len <= max_len; ++len) {
    size_t end = out.size();
    for (size_t i = layer; i < end; ++i)
      for (const auto& s : alphabet) {
        Word w = out[i];
        w.push_back(s);
        out.push_back(std::move(w));
      }
    layer = end;
  }
  return out;
}

namespace {

std::string word_text(const Word& w) { return w.empty() ? "λ" : join(w, ""); }

EquivalenceReport compare(const Machine& a, const Machine& b, int max_len, bool exhaustive,
                          EquivMode mode) {
  if (a.input != b.input) throw EquivalenceError("input alphabets differ");
  if (max_len < 0) throw EquivalenceError("maximum length must be non-negative");
  Simulator sa(a), sb(b);
  EquivalenceReport r;
  r.mode = mode;
  r.max_len = max_len;
  r.a_stats = complexity(a);
  r.b_stats = complexity(b);
  for (const auto& w : shortlex_words(a.input, max_len)) {
    WordRecord rec{w, sa.run(w), sb.run(w)};
    rec.equal = mode == EquivMode::Error ? rec.a == rec.b
                                         : decide(a.mode, rec.a) == decide(b.mode, rec.b);
    r.records.push_back(rec);
    if (!rec.equal && r.pass) {
      r.pass = false;
      r.counterexample = w;
      if (!exhaustive) break;
    }
  }
  return r;
}

nlohmann::json stats_json(const ComplexityStats& s) { return {{"n", s.n}, {"m", s.m}, {"e", s.e}}; }

}  // namespace

EquivalenceReport check_error_equivalence(const Machine& a, const Machine& b, int max_len,
                                          bool exhaustive) {
  return compare(a, b, max_len, exhaustive, EquivMode::Error);
}

EquivalenceReport check_language_equivalence(const Machine& a, const Machine& b, int max_len,
                                             bool exhaustive) {
  return compare(a, b, max_len, exhaustive, EquivMode::Language);
}

std::string EquivalenceReport::json() const {
  nlohmann::json j;
  j["mode"] = mode == EquivMode::Error ? "error" : "language";
  j["max_len"] = max_len;
  j["verdict"] = pass ? "pass" : "fail";
  j["counterexample"] = counterexample ? nlohmann::json(join(*counterexample, "")) : nlohmann::json();
  j["a"] = stats_json(a_stats);
  j["b"] = stats_json(b_stats);
  nlohmann::json recs = nlohmann::json::array();
  for (const auto& r : records)
    recs.push_back({{"word", join(r.word, "")},
                    {"a_acc", to_string(r.a.acc)},
                    {"a_rej", to_string(r.a.rej)},
                    {"b_acc", to_string(r.b.acc)},
                    {"b_rej", to_string(r.b.rej)},
                    {"equal", r.equal}});
  j["records"] = recs;
  return j.dump(2) + "\n";
}

std::string EquivalenceReport::table() const {
  std::ostringstream out;
  out << std::left << std::setw(10) << "word" << std::setw(14) << "A p_acc" << std::setw(14)
      << "A p_rej" << std::setw(14) << "B p_acc" << std::setw(14) << "B p_rej" << "equal\n";
  for (const auto& r : records)
    out << std::setw(10) << word_text(r.word) << std::setw(14) << to_string(r.a.acc) << std::setw(14)
        << to_string(r.a.rej) << std::setw(14) << to_string(r.b.acc) << std::setw(14)
        << to_string(r.b.rej) << (r.equal ? "yes" : "NO") << "\n";
  out << (mode == EquivMode::Error ? "error" : "language") << " equivalence up to length " << max_len
      << ": " << (pass ? "pass" : "fail");
  if (counterexample) out << ", counterexample " << word_text(*counterexample);
  out << "\n";
  return out.str();
}

// ---------------------------------------------------------------------------

bool BoundReport::ok() const {
  for (const auto& c : checks)
    if (!c.ok) return false;
  return true;
}

std::string BoundReport::json() const {
  nlohmann::json j;
  j["transform"] = transform;
  j["ok"] = ok();
  nlohmann::json cs = nlohmann::json::array();
  for (const auto& c : checks)
    cs.push_back({{"name", c.name},
                  {"kind", c.exact ? "exact" : "envelope"},
                  {"value", c.value},
                  {c.log2 ? "log2_bound" : "bound", c.bound},
                  {"formula", c.formula},
                  {"ok", c.ok}});
  j["checks"] = cs;
  return j.dump(2) + "\n";
}

std::string BoundReport::table() const {
  std::ostringstream out;
  for (const auto& c : checks) {
    out << (c.ok ? "ok   " : "FAIL ") << std::left << std::setw(40) << c.name << " " << c.value
        << (c.exact ? " vs " : " within ") << c.formula << " = ";
    if (c.log2)
      out << "2^" << c.bound;
    else
      out << c.bound;
    out << "\n";
  }
  return out.str();
}

namespace {

void add_exact(BoundReport& r, const std::string& name, double value, double bound,
               const std::string& formula, bool at_most = false) {
  BoundCheck c;
  c.name = name;
  c.exact = !at_most;
  c.value = value;
  c.bound = bound;
  c.formula = formula;
  c.ok = at_most ? value <= bound : value == bound;
  r.checks.push_back(c);
}

// Envelope given as log2 of the bound, so huge values stay finite.
void add_envelope(BoundReport& r, const std::string& name, double value, double log2_bound,
                  const std::string& formula) {
  BoundCheck c;
  c.name = name;
  c.value = value;
  c.bound = log2_bound;
  c.log2 = true;
  c.formula = formula;
  c.ok = value > 0 ? std::log2(value) <= log2_bound : true;
  r.checks.push_back(c);
}

void check_one(const TransformTrace& t, BoundReport& r) {
  double n = t.before.n, m = t.before.m, e = t.before.e;
  const std::string& s = t.name;
  auto label = [&](const std::string& what) { return s + ": " + what; };
  if (s == "add-endmarkers") {
    add_exact(r, label("states"), t.after.n, 2 * n + 1, "2n+1", true);
    add_exact(r, label("stack symbols"), t.after.m, m + 2, "m+2");
    add_exact(r, label("push size"), t.after.e, e, "e");
  } else if (s == "halt-normalize") {
    add_exact(r, label("states"), t.after.n, 2 * n + 2, "2n+2");
  } else if (s == "ideal-shape") {
    // The constant in front of the envelope is taken as 1.
    double lg = std::log2(e) + 2 * std::log2(n) + 2 * std::log2(m) + 2 * e * n * m * std::log2(2 * m);
    add_envelope(r, label("states"), t.after.n, lg, "1·e·n²·m²·(2m)^(2enm)");
    add_exact(r, label("push size"), t.after.e, 2, "2", true);
  } else if (s == "remove-left") {
    add_exact(r, label("states"), t.after.n, 2 * n, "2n");
    add_exact(r, label("stack symbols"), t.after.m, (n + 1) * m, "(n+1)m", true);
  } else if (s == "remove-final-lambda") {
    add_exact(r, label("stack symbols"), t.after.m, m * std::pow(2.0, n), "m·2^n", true);
  } else if (s == "remove-right") {
    add_exact(r, label("states"), t.after.n, 2 * n + 1, "2n+1");
    add_exact(r, label("stack symbols"), t.after.m, m * (n + 1), "m(n+1)");
  } else if (s == "pipeline") {
    double lg = 2 * std::log2(e) + 4 * std::log2(n) + 4 * std::log2(m) + 3 * e * n * m * std::log2(2 * m);
    add_envelope(r, label("states"), t.after.n, lg, "1·e²·n⁴·m⁴·(2m)^(3enm)");
    add_envelope(r, label("stack symbols"), t.after.m, lg, "1·e²·n⁴·m⁴·(2m)^(3enm)");
    add_exact(r, label("push size"), t.after.e, 2, "2", true);
  }
}

}  // namespace

BoundReport check_bounds(const TransformTrace& trace) {
  BoundReport r;
  r.transform = trace.name;
  check_one(trace, r);
  for (const auto& st : trace.stages) {
    BoundReport inner = check_bounds(st);
    r.checks.insert(r.checks.end(), inner.checks.begin(), inner.checks.end());
  }
  return r;
}

}  // namespace pda
