#include <json.hpp>
#include <sstream>

#include "pda/io.hpp"
#include "transforms_common.hpp"

namespace pda {

std::string hat_name(const std::string& q) { return tag({q, "^"}); }
std::string dollar_name(const std::string& q) { return tag({q, "$"}); }
std::string bar_name(const std::string& q) { return tag({q, "-"}); }
std::string plus_name(const std::string& q) { return tag({q, "+"}); }

namespace detail {

void require_sound(const std::string& stage, const Machine& m, const char* what) {
  auto report = validate(m);
  if (!report.ok())
    throw TransformError(stage, std::string(what) + " is not a valid machine: " +
                                    report.violations.front().message);
  auto halting = check_halting(m);
  if (!halting.ok)
    throw TransformError(stage, std::string(what) + " does not halt (" + halting.reason + "): " +
                                    halting.witness);
}

void finish(const std::string& stage, const Machine& in, const Machine& out, TransformTrace* trace) {
  require_sound(stage, out, "output");
  if (!trace) return;
  trace->name = stage;
  trace->before = complexity(in);
  trace->after = complexity(out);
}

std::vector<Sym> upper_symbols(const Machine& m) {
  std::vector<Sym> out;
  for (const auto& a : m.stack)
    if (a != m.bottom) out.push_back(a);
  return out;
}

}  // namespace detail

using namespace detail;

namespace {

nlohmann::json stats_json(const ComplexityStats& s) { return {{"n", s.n}, {"m", s.m}, {"e", s.e}}; }

nlohmann::json trace_to_json(const TransformTrace& t, bool with_machines) {
  nlohmann::json j;
  j["name"] = t.name;
  j["before"] = stats_json(t.before);
  j["after"] = stats_json(t.after);
  nlohmann::json origins = nlohmann::json::array();
  for (const auto& [name, rule] : t.origins) origins.push_back({{"name", name}, {"rule", rule}});
  j["origins"] = origins;
  j["notes"] = t.notes;
  nlohmann::json inter = nlohmann::json::array();
  for (const auto& [label, m] : t.intermediates) {
    nlohmann::json e{{"label", label}, {"stats", stats_json(complexity(m))}};
    if (with_machines) e["machine"] = nlohmann::json::parse(serialize_unchecked(m));
    inter.push_back(e);
  }
  j["intermediates"] = inter;
  nlohmann::json stages = nlohmann::json::array();
  for (const auto& s : t.stages) stages.push_back(trace_to_json(s, with_machines));
  j["stages"] = stages;
  return j;
}

}  // namespace

std::string trace_json(const TransformTrace& t, bool with_machines) {
  return trace_to_json(t, with_machines).dump(2) + "\n";
}

// ---------------------------------------------------------------------------

std::string IdealShapeReport::text() const {
  std::ostringstream out;
  for (int i = 0; i < 4; ++i) {
    out << "condition " << i + 1 << ": " << (conditions[i] ? "holds" : "fails");
    if (!witnesses[i].empty()) out << " (" << witnesses[i].front() << ")";
    out << "\n";
  }
  return out.str();
}

IdealShapeReport check_ideal_shape(const Machine& m) {
  IdealShapeReport r;
  auto flag = [&](int i, const std::string& w) {
    r.conditions[i] = false;
    r.witnesses[i].push_back(w);
  };
  for (const auto& [key, row] : m.delta) {
    for (const auto& [t, p] : row) {
      std::string move = "(" + key.from + "," + key.read + "," + key.top + ")→(" + t.to + "," +
                         show_word(t.push) + ")";
      if (key.read == kLambda) {
        if (key.top != m.bottom && !t.push.empty()) flag(1, move);
        continue;
      }
      bool stationary = t.push == Word{key.top};
      bool push_one = t.push.size() == 2 && t.push[1] == key.top && t.push[0] != m.bottom;
      bool pop = t.push.empty();
      if (!stationary && !push_one && !pop) flag(0, move);
      if (push_one && m.mass(t.to, kLambda, t.push[0]) != 0) flag(2, move);
      if (stationary && m.mass(t.to, kLambda, key.top) != 0) flag(3, move);
    }
  }
  return r;
}

// ---------------------------------------------------------------------------

namespace {

// Decorated copies of every state, made unique against `taken`.
std::map<std::string, std::string> decorate(const std::set<std::string>& states,
                                            std::string (*fn)(const std::string&),
                                            std::set<std::string>& taken) {
  std::map<std::string, std::string> out;
  for (const auto& q : states) {
    std::string name = fresh_name(fn(q), taken);
    taken.insert(name);
    out[q] = name;
  }
  return out;
}

}  // namespace

Machine add_endmarkers(const Machine& m, TransformTrace* trace) {
  const std::string stage = "add-endmarkers";
  if (m.kind != Kind::NoEndmark) throw TransformError(stage, "input must have no endmarkers");
  require_sound(stage, m);

  Machine n;
  n.kind = Kind::Endmarked;
  n.mode = m.mode;
  n.input = m.input;
  n.stack = m.stack;
  n.stack.insert(kCent);
  n.stack.insert(kDollar);
  n.bottom = m.bottom;
  n.declared_push_size = m.declared_push_size;
  std::set<std::string> taken = m.states;
  auto hat = decorate(m.states, hat_name, taken);
  n.initial = fresh_name("init", taken);
  n.states = m.states;
  n.states.insert(n.initial);
  note_origin(trace, n.initial, "fresh initial state reading ¢");
  for (const auto& [q, h] : hat) {
    n.states.insert(h);
    (m.accept.count(q) ? n.accept : n.reject).insert(h);
    note_origin(trace, h, "halting copy entered on $");
  }

  n.add(n.initial, kCent, m.bottom, m.initial, {m.bottom}, 1);
  for (const auto& [key, row] : m.delta)
    for (const auto& [t, p] : row) n.add(key.from, key.read, key.top, t.to, t.push, p);
  // On $ the original machine's verdict is read off its state; λ-mass still
  // flows through the copied λ-moves.
  for (const auto& q : m.states)
    for (const auto& a : m.stack) {
      Rational rest = 1 - m.mass(q, kLambda, a);
      if (rest > 0) n.add(q, kDollar, a, hat.at(q), {a}, rest);
    }
  finish(stage, m, n, trace);
  return n;
}

Machine halt_normalize(const Machine& m, TransformTrace* trace) {
  const std::string stage = "halt-normalize";
  if (m.kind != Kind::Endmarked) throw TransformError(stage, "input must be an endmarked machine");
  require_sound(stage, m);

  std::set<std::string> halting, running;
  for (const auto& q : m.states) (m.halting(q) ? halting : running).insert(q);

  Machine n;
  n.kind = Kind::Endmarked;
  n.mode = m.mode;
  n.input = m.input;
  n.stack = m.stack;
  n.bottom = m.bottom;
  n.declared_push_size = m.declared_push_size;
  std::set<std::string> taken = m.states;
  auto dol = decorate(m.states, dollar_name, taken);
  auto bar = decorate(halting, bar_name, taken);
  std::string acc = fresh_name("acc", taken);
  taken.insert(acc);
  std::string rej = fresh_name("rej", taken);
  taken.insert(rej);
  n.states = running;
  for (const auto& [q, d] : dol) {
    n.states.insert(d);
    note_origin(trace, d, "post-$ copy of " + q);
  }
  for (const auto& [q, b] : bar) {
    n.states.insert(b);
    note_origin(trace, b, "waits for $ after an early halt in " + q);
  }
  n.states.insert(acc);
  n.states.insert(rej);
  n.accept = {acc};
  n.reject = {rej};
  note_origin(trace, acc, "single accepting state");
  note_origin(trace, rej, "single rejecting state");
  n.initial = m.halting(m.initial) ? bar.at(m.initial) : m.initial;
  auto verdict = [&](const std::string& q) { return m.accept.count(q) ? acc : rej; };
  auto uppers = upper_symbols(m);

  for (const auto& [key, row] : m.delta) {
    if (!running.count(key.from)) continue;
    for (const auto& [t, p] : row) {
      if (key.read == kDollar) {
        n.add(key.from, key.read, key.top, dol.at(t.to), t.push, p);
      } else if (m.halting(t.to)) {
        n.add(key.from, key.read, key.top, bar.at(t.to), t.push, p);
      } else {
        n.add(key.from, key.read, key.top, t.to, t.push, p);
      }
    }
  }
  for (const auto& q : running)
    for (const auto& a : m.stack) {
      // Only rows that move by λ with certainty can be live after $; the
      // others would leave the original machine stuck.
      if (m.mass(q, kLambda, a) != 1) continue;
      for (const auto& [t, p] : *m.row(q, kLambda, a)) n.add(dol.at(q), kLambda, a, dol.at(t.to), t.push, p);
    }
  for (const auto& q : halting) {
    for (const auto& a : uppers) {
      n.add(dol.at(q), kLambda, a, dol.at(q), {}, 1);
      n.add(bar.at(q), kLambda, a, bar.at(q), {}, 1);
    }
    n.add(dol.at(q), kLambda, m.bottom, verdict(q), {m.bottom}, 1);
    for (const auto& s : m.input) n.add(bar.at(q), s, m.bottom, bar.at(q), {m.bottom}, 1);
    n.add(bar.at(q), kCent, m.bottom, bar.at(q), {m.bottom}, 1);
    n.add(bar.at(q), kDollar, m.bottom, verdict(q), {m.bottom}, 1);
  }
  finish(stage, m, n, trace);
  return n;
}

}  // namespace pda
