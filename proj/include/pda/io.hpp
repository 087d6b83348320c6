#pragma once

#include <stdexcept>
#include <string>

#include "pda/machine.hpp"

namespace pda {

// Raised for malformed or inconsistent machine documents. The message starts
// with the JSON path of the offending field.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Machine parse_machine(const std::string& text);
// Canonical JSON: sorted keys, sorted arrays, transitions in key order.
// Throws std::invalid_argument when the machine fails validate().
std::string serialize_machine(const Machine& m);
// Same layout without the validity gate; used for debugging dumps.
std::string serialize_unchecked(const Machine& m);

Machine load_machine(const std::string& path);
void save_machine(const Machine& m, const std::string& path);

// Push strings are written as a plain string when every symbol is a single
// Unicode scalar, otherwise as an array of symbol names.
std::string encode_push_string(const Word& w);

}  // namespace pda
