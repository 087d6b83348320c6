#pragma once

// Shared helpers for the transform sources. Not part of the public API.

#include <string>

#include "pda/machine.hpp"
#include "pda/sim.hpp"
#include "pda/transforms.hpp"
#include "pda/validate.hpp"

namespace pda::detail {

// Throws TransformError unless m validates and halts.
void require_sound(const std::string& stage, const Machine& m, const char* what = "input");

// Output gate plus trace bookkeeping.
void finish(const std::string& stage, const Machine& in, const Machine& out, TransformTrace* trace);

inline void note_origin(TransformTrace* trace, const std::string& name, const std::string& rule) {
  if (trace) trace->origins.emplace_back(name, rule);
}

// Γ − {Z0}
std::vector<Sym> upper_symbols(const Machine& m);

}  // namespace pda::detail
