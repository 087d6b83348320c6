#include "pda/rational.hpp"

#include <cctype>
#include <stdexcept>

namespace pda {

std::string to_string(const Rational& r) {
  return r.get_num().get_str() + "/" + r.get_den().get_str();
}

namespace {
bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}
}  // namespace

Rational parse_rational(const std::string& text) {
  std::string body = text;
  bool negative = false;
  if (!body.empty() && body[0] == '-') {
    negative = true;
    body = body.substr(1);
  }
  auto slash = body.find('/');
  std::string num = slash == std::string::npos ? body : body.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : body.substr(slash + 1);
  if (!all_digits(num) || !all_digits(den))
    throw std::invalid_argument("not a rational: \"" + text + "\"");
  mpz_class d(den);
  if (d == 0) throw std::invalid_argument("zero denominator: \"" + text + "\"");
  Rational r{mpz_class(num), d};
  r.canonicalize();
  if (negative) r = -r;
  return r;
}

}  // namespace pda
