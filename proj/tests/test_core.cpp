#include <doctest.h>

#include "corpus.hpp"
#include "pda/io.hpp"
#include "pda/validate.hpp"

using namespace pda;

namespace {

const char* kSmall = R"({
  "kind": "Endmarked", "mode": "Probabilistic",
  "states": ["p", "acc", "rej"], "input_alphabet": ["a"], "stack_alphabet": ["Z", "A"],
  "bottom": "Z", "initial": "p", "accept": ["acc"], "reject": ["rej"],
  "transitions": [
    {"from": "p", "read": "¢", "top": "Z", "to": "p", "push": "Z", "prob": "1/1"},
    {"from": "p", "read": "a", "top": "Z", "to": "p", "push": "AZ", "prob": "1/1"},
    {"from": "p", "read": "a", "top": "A", "to": "p", "push": "", "prob": "1/1"},
    {"from": "p", "read": "$", "top": "Z", "to": "acc", "push": "Z", "prob": "1/1"},
    {"from": "p", "read": "$", "top": "A", "to": "rej", "push": "A", "prob": "1/1"}
  ]})";

Machine small() { return parse_machine(kSmall); }

std::string replace(std::string s, const std::string& from, const std::string& to) {
  auto at = s.find(from);
  REQUIRE(at != std::string::npos);
  return s.replace(at, from.size(), to);
}

}  // namespace

TEST_CASE("corpus files parse, validate and survive a serialization round trip") {
  for (const auto& name : halting_corpus()) {
    CAPTURE(name);
    Machine m = corpus(name);
    CHECK(validate(m).ok());
    Machine again = parse_machine(serialize_machine(m));
    CHECK(again == m);
    CHECK(serialize_machine(again) == serialize_machine(m));
  }
}

TEST_CASE("parse errors name the offending field") {
  auto message = [](const std::string& text) {
    try {
      parse_machine(text);
    } catch (const ParseError& e) {
      return std::string(e.what());
    }
    return std::string("no error");
  };
  CHECK(message(replace(kSmall, R"("bottom": "Z")", R"("bottom": "Y")")).rfind("bottom:", 0) == 0);
  CHECK(message(replace(kSmall, R"("prob": "1/1"})", R"("prob": "3/2"})")).find("probability out of range") !=
        std::string::npos);
  CHECK(message(replace(kSmall, R"("to": "acc")", R"("to": "nowhere")")).find("unknown state") !=
        std::string::npos);
  CHECK(message("{ not json").rfind("syntax error", 0) == 0);
  CHECK(message(replace(kSmall, R"(["a"])", R"(["ab"])")).rfind("input_alphabet", 0) == 0);
}

TEST_CASE("duplicate transitions are merged") {
  std::string text = replace(kSmall, R"({"from": "p", "read": "a", "top": "Z", "to": "p", "push": "AZ", "prob": "1/1"})",
                             R"({"from": "p", "read": "a", "top": "Z", "to": "p", "push": "AZ", "prob": "1/2"},
    {"from": "p", "read": "a", "top": "Z", "to": "p", "push": "AZ", "prob": "1/2"})");
  Machine m = parse_machine(text);
  CHECK(m.mass("p", "a", "Z") == 1);
  CHECK(m.row("p", "a", "Z")->size() == 1);
}

TEST_CASE("probability requirement is reported with the offending sum") {
  Machine m = small();
  m.delta.erase(TransKey{"p", "a", "Z"});
  m.add("p", "a", "Z", "p", {"A", "Z"}, Rational(1, 2));
  auto r = validate(m);
  REQUIRE(r.has("probability requirement"));
  CHECK(r.text().find("δ[p,a,Z]+δ[p,λ,Z]=1/2≠1") != std::string::npos);
}

TEST_CASE("λ-mass above one and partial λ-mass without reads are violations") {
  Machine m = small();
  m.add("p", kLambda, "A", "p", {}, Rational(1, 2));
  CHECK(validate(m).has("probability requirement"));

  Machine n = small();
  n.states.insert("w");
  n.add("w", kLambda, "A", "p", {}, Rational(1, 2));
  CHECK(validate(n).has("probability requirement"));
}

TEST_CASE("bottom-marker discipline") {
  Machine m = small();
  m.delta.erase(TransKey{"p", "a", "Z"});
  m.add("p", "a", "Z", "p", {"A"}, 1);
  CHECK(validate(m).has("bottom-marker discipline"));
  Machine n = small();
  n.delta.erase(TransKey{"p", "a", "A"});
  n.add("p", "a", "A", "p", {"Z"}, 1);
  CHECK(validate(n).has("bottom-marker discipline"));
}

TEST_CASE("halting states may not move and the first step reads ¢ with certainty") {
  Machine m = small();
  m.add("acc", "a", "Z", "acc", {"Z"}, 1);
  CHECK(validate(m).has("halting states have no moves"));
  Machine n = small();
  n.delta.erase(TransKey{"p", kCent, "Z"});
  n.add("p", kCent, "Z", "p", {"Z"}, Rational(1, 2));
  n.add("p", kCent, "Z", "acc", {"Z"}, Rational(1, 3));
  CHECK(validate(n).has("first step"));
}

TEST_CASE("deterministic mode rejects fractional probabilities") {
  Machine m = corpus("anbn_bounded");
  m.mode = Mode::Deterministic;
  CHECK(validate(m).has("deterministic mode"));
  CHECK(validate(corpus("anbn_det")).ok());
}

TEST_CASE("no-endmarker machines classify every state") {
  Machine m = corpus("coin");
  m.reject.erase("t");
  CHECK(validate(m).has("state partition"));
}

TEST_CASE("declared push size must cover the observed one") {
  Machine m = small();
  m.declared_push_size = 1;
  CHECK(validate(m).has("push size"));
  m.declared_push_size = 3;
  CHECK(validate(m).ok());
  CHECK(complexity(m).e == 3);
  CHECK(observed_push_size(m) == 2);
}

TEST_CASE("complexity counts states, stack symbols and push size") {
  auto s = complexity(corpus("anbn_det"));
  CHECK(s.n == 4);
  CHECK(s.m == 2);
  CHECK(s.e == 2);
}

TEST_CASE("name helpers") {
  CHECK(tag({"q", "a"}) == "[q,a]");
  CHECK(fresh_name("q", {"q", "q'"}) == "q''");
  CHECK(utf8_scalars("¢a$").size() == 3);
  CHECK(is_single_scalar("λ"));
  CHECK_FALSE(is_single_scalar("ab"));
  CHECK(encode_push_string({"A", "Z"}) == "\"AZ\"");
}
