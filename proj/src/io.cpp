#include "pda/io.hpp"

#include <fstream>
#include <json.hpp>
#include <sstream>

#include "pda/validate.hpp"

namespace pda {

using nlohmann::json;

namespace {

std::string str_field(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError(key + ": missing field");
  if (!doc[key].is_string()) throw ParseError(key + ": expected a string");
  return doc[key].get<std::string>();
}

std::set<std::string> str_set(const json& doc, const std::string& key) {
  if (!doc.contains(key)) throw ParseError(key + ": missing field");
  if (!doc[key].is_array()) throw ParseError(key + ": expected an array");
  std::set<std::string> out;
  for (size_t i = 0; i < doc[key].size(); ++i) {
    const auto& v = doc[key][i];
    if (!v.is_string()) throw ParseError(key + "[" + std::to_string(i) + "]: expected a string");
    auto s = v.get<std::string>();
    if (s.empty()) throw ParseError(key + "[" + std::to_string(i) + "]: empty name");
    if (!out.insert(s).second)
      throw ParseError(key + "[" + std::to_string(i) + "]: duplicate \"" + s + "\"");
  }
  return out;
}

Word parse_push(const json& v, const std::string& path) {
  Word w;
  if (v.is_string()) {
    try {
      w = utf8_scalars(v.get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError(path + ": " + e.what());
    }
  } else if (v.is_array()) {
    for (size_t i = 0; i < v.size(); ++i) {
      if (!v[i].is_string())
        throw ParseError(path + "[" + std::to_string(i) + "]: expected a symbol name");
      w.push_back(v[i].get<std::string>());
    }
  } else {
    throw ParseError(path + ": expected a string or an array of symbols");
  }
  return w;
}

json push_json(const Word& w) {
  for (const auto& s : w)
    if (!is_single_scalar(s)) return json(w);
  return json(join(w));
}

json to_json(const Machine& m) {
  json doc;
  doc["kind"] = to_string(m.kind);
  doc["mode"] = to_string(m.mode);
  doc["states"] = m.states;
  doc["input_alphabet"] = m.input;
  doc["stack_alphabet"] = m.stack;
  doc["bottom"] = m.bottom;
  doc["initial"] = m.initial;
  doc["accept"] = m.accept;
  doc["reject"] = m.reject;
  if (m.declared_push_size) doc["push_size"] = *m.declared_push_size;
  json ts = json::array();
  for (const auto& [key, row] : m.delta)
    for (const auto& [t, p] : row) {
      json tr;
      tr["from"] = key.from;
      tr["read"] = key.read;
      tr["top"] = key.top;
      tr["to"] = t.to;
      tr["push"] = push_json(t.push);
      tr["prob"] = to_string(p);
      ts.push_back(tr);
    }
  doc["transitions"] = ts;
  return doc;
}

}  // namespace

std::string encode_push_string(const Word& w) { return push_json(w).dump(); }

Machine parse_machine(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("syntax error: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("document: expected an object");

  Machine m;
  try {
    m.kind = parse_kind(str_field(doc, "kind"));
  } catch (const std::invalid_argument& e) {
    throw ParseError(std::string("kind: ") + e.what());
  }
  if (doc.contains("mode")) {
    try {
      m.mode = parse_mode(str_field(doc, "mode"));
    } catch (const std::invalid_argument& e) {
      throw ParseError(std::string("mode: ") + e.what());
    }
  }
  m.states = str_set(doc, "states");
  m.input = str_set(doc, "input_alphabet");
  m.stack = str_set(doc, "stack_alphabet");
  m.bottom = str_field(doc, "bottom");
  m.initial = str_field(doc, "initial");
  m.accept = str_set(doc, "accept");
  m.reject = str_set(doc, "reject");
  if (doc.contains("push_size")) {
    if (!doc["push_size"].is_number_integer() || doc["push_size"].get<int>() < 1)
      throw ParseError("push_size: expected a positive integer");
    m.declared_push_size = doc["push_size"].get<int>();
  }

  if (!m.stack.count(m.bottom)) throw ParseError("bottom: bottom marker not in stack alphabet");
  if (!m.states.count(m.initial)) throw ParseError("initial: unknown state \"" + m.initial + "\"");
  for (const auto* set : {&m.accept, &m.reject})
    for (const auto& q : *set)
      if (!m.states.count(q))
        throw ParseError(std::string(set == &m.accept ? "accept" : "reject") +
                         ": unknown state \"" + q + "\"");
  for (const auto& s : m.input) {
    if (!is_single_scalar(s))
      throw ParseError("input_alphabet: \"" + s + "\" is not a single Unicode scalar");
    if (s == kLambda || s == kCent || s == kDollar)
      throw ParseError("input_alphabet: reserved symbol \"" + s + "\"");
  }
  if (m.stack.count(kLambda)) throw ParseError("stack_alphabet: reserved symbol \"λ\"");

  if (!doc.contains("transitions") || !doc["transitions"].is_array())
    throw ParseError("transitions: expected an array");
  const auto& ts = doc["transitions"];
  for (size_t i = 0; i < ts.size(); ++i) {
    std::string path = "transitions[" + std::to_string(i) + "]";
    const auto& tr = ts[i];
    if (!tr.is_object()) throw ParseError(path + ": expected an object");
    auto field = [&](const char* k) {
      if (!tr.contains(k) || !tr[k].is_string())
        throw ParseError(path + "." + k + ": missing or not a string");
      return tr[k].get<std::string>();
    };
    std::string from = field("from"), read = field("read"), top = field("top"), to = field("to");
    if (!m.states.count(from)) throw ParseError(path + ".from: unknown state \"" + from + "\"");
    if (!m.states.count(to)) throw ParseError(path + ".to: unknown state \"" + to + "\"");
    if (read != kLambda && read != kCent && read != kDollar && !m.input.count(read))
      throw ParseError(path + ".read: unknown symbol \"" + read + "\"");
    if (!m.stack.count(top)) throw ParseError(path + ".top: unknown symbol \"" + top + "\"");
    if (!tr.contains("push")) throw ParseError(path + ".push: missing field");
    Word push = parse_push(tr["push"], path + ".push");
    for (const auto& s : push)
      if (!m.stack.count(s)) throw ParseError(path + ".push: unknown symbol \"" + s + "\"");
    Rational p;
    try {
      p = parse_rational(field("prob"));
    } catch (const std::invalid_argument& e) {
      throw ParseError(path + ".prob: " + e.what());
    }
    if (!is_probability(p)) throw ParseError(path + ".prob: probability out of range");
    m.add(from, read, top, to, push, p);
  }
  for (const auto& [key, row] : m.delta)
    for (const auto& [t, p] : row)
      if (p > 1)
        throw ParseError("transitions: probability out of range after merging duplicates of (" +
                         key.from + "," + key.read + "," + key.top + ")");
  return m;
}

std::string serialize_unchecked(const Machine& m) { return to_json(m).dump(2) + "\n"; }

std::string serialize_machine(const Machine& m) {
  auto report = validate(m);
  if (!report.ok())
    throw std::invalid_argument("refusing to serialize an invalid machine: " +
                                report.violations.front().message);
  return serialize_unchecked(m);
}

Machine load_machine(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError(path + ": cannot open file");
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_machine(ss.str());
}

void save_machine(const Machine& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << serialize_machine(m);
}

}  // namespace pda
