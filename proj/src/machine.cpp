#include "pda/machine.hpp"

#include <stdexcept>

namespace pda {

std::string to_string(Kind k) {
  switch (k) {
    case Kind::Endmarked: return "Endmarked";
    case Kind::NoLeftEndmark: return "NoLeftEndmark";
    case Kind::NoEndmark: return "NoEndmark";
  }
  return "?";
}

std::string to_string(Mode m) {
  switch (m) {
    case Mode::Probabilistic: return "Probabilistic";
    case Mode::Deterministic: return "Deterministic";
    case Mode::Nondeterministic: return "Nondeterministic";
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  if (s == "Endmarked") return Kind::Endmarked;
  if (s == "NoLeftEndmark") return Kind::NoLeftEndmark;
  if (s == "NoEndmark") return Kind::NoEndmark;
  throw std::invalid_argument("unknown machine kind \"" + s + "\"");
}

Mode parse_mode(const std::string& s) {
  if (s == "Probabilistic") return Mode::Probabilistic;
  if (s == "Deterministic") return Mode::Deterministic;
  if (s == "Nondeterministic") return Mode::Nondeterministic;
  throw std::invalid_argument("unknown semantics mode \"" + s + "\"");
}

void Machine::add(const std::string& from, const Sym& read, const Sym& top, const std::string& to,
                  const Word& push, const Rational& p) {
  if (p == 0) return;
  delta[TransKey{from, read, top}][Target{to, push}] += p;
}

Rational Machine::mass(const std::string& q, const Sym& read, const Sym& top) const {
  Rational total = 0;
  if (const Row* r = row(q, read, top))
    for (const auto& [t, p] : *r) total += p;
  return total;
}

const Row* Machine::row(const std::string& q, const Sym& read, const Sym& top) const {
  auto it = delta.find(TransKey{q, read, top});
  return it == delta.end() ? nullptr : &it->second;
}

std::vector<Sym> Machine::readable() const {
  std::vector<Sym> out(input.begin(), input.end());
  if (kind == Kind::Endmarked) out.push_back(kCent);
  if (kind != Kind::NoEndmark) out.push_back(kDollar);
  return out;
}

std::vector<std::string> utf8_scalars(const std::string& s) {
  std::vector<std::string> out;
  size_t i = 0;
  while (i < s.size()) {
    unsigned char c = static_cast<unsigned char>(s[i]);
    size_t len = 1;
    if (c >= 0xF0) len = 4;
    else if (c >= 0xE0) len = 3;
    else if (c >= 0xC0) len = 2;
    if (i + len > s.size()) throw std::invalid_argument("malformed UTF-8 in \"" + s + "\"");
    out.push_back(s.substr(i, len));
    i += len;
  }
  return out;
}

bool is_single_scalar(const std::string& s) {
  if (s.empty()) return false;
  try {
    return utf8_scalars(s).size() == 1;
  } catch (const std::invalid_argument&) {
    return false;
  }
}

std::string join(const Word& w, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) out += sep;
    out += w[i];
  }
  return out;
}

std::string show_word(const Word& w) {
  if (w.empty()) return kLambda;
  for (const auto& s : w)
    if (!is_single_scalar(s)) return join(w, " ");
  return join(w);
}

std::string tag(const std::vector<std::string>& parts) {
  std::string out = "[";
  for (size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + "]";
}

std::string fresh_name(const std::string& base, const std::set<std::string>& taken) {
  std::string name = base;
  while (taken.count(name)) name += "'";
  return name;
}

}  // namespace pda
