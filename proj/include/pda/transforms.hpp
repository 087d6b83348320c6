#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pda/machine.hpp"
#include "pda/validate.hpp"

namespace pda {

// A transform refused its input or produced something broken. `stage` names
// the transform; the message names the failed hypothesis.
struct TransformError : std::runtime_error {
  std::string stage;
  TransformError(std::string stage_name, const std::string& message)
      : std::runtime_error(stage_name + ": " + message), stage(std::move(stage_name)) {}
};

struct TransformTrace {
  std::string name;
  ComplexityStats before;
  ComplexityStats after;
  // Manufactured state or stack-symbol name and the rule that produced it.
  std::vector<std::pair<std::string, std::string>> origins;
  // Intermediate machines worth keeping for debugging, in build order.
  std::vector<std::pair<std::string, Machine>> intermediates;
  std::vector<TransformTrace> stages;
  std::vector<std::string> notes;
};

// JSON document for a trace. Intermediate machines are embedded only when
// `with_machines` is set.
std::string trace_json(const TransformTrace& t, bool with_machines = false);

// --- exploration -----------------------------------------------------------

// All rows of one (state, top) pair, keyed by read symbol (λ included).
using PairRows = std::map<Sym, Row>;
using RowSource = std::function<PairRows(const std::string& state, const Sym& top)>;

// Builds an explicit machine by exploring (state, top) pairs reachable from
// (base.initial, base.bottom), asking `rows` for each pair's moves. The
// symbols below each stack symbol are tracked so that pops lead to the
// right pairs. kind, mode, input, bottom and initial come from `base`;
// `halting` classifies states (0 running, 1 accepting, 2 rejecting).
Machine explore(const Machine& base, const RowSource& rows,
                const std::function<int(const std::string&)>& halting);

// Keeps only states, stack symbols and rows reachable from the initial
// configuration. Idempotent; error-equivalent to the input.
Machine prune_unreachable(const Machine& m);

// --- ideal shape -----------------------------------------------------------

struct IdealShapeReport {
  bool conditions[4] = {true, true, true, true};
  std::vector<std::string> witnesses[4];
  bool all() const { return conditions[0] && conditions[1] && conditions[2] && conditions[3]; }
  std::string text() const;
};

IdealShapeReport check_ideal_shape(const Machine& m);

// --- constructions ---------------------------------------------------------
// Each transform validates its input, gates on check_halting, and checks the
// same on its output. A non-null trace is filled in.

Machine add_endmarkers(const Machine& m, TransformTrace* trace = nullptr);
Machine halt_normalize(const Machine& m, TransformTrace* trace = nullptr);
// Applies halt_normalize and then the ideal-shape construction.
Machine to_ideal_shape(const Machine& m, TransformTrace* trace = nullptr);
// The ideal-shape construction alone, for input that is already
// halt-normalized (single accepting and rejecting state, halting only on Z0
// after $).
Machine ideal_shape_of_normalized(const Machine& m, TransformTrace* trace = nullptr);
Machine remove_left_endmarker(const Machine& m, TransformTrace* trace = nullptr);
Machine remove_final_lambda(const Machine& m, TransformTrace* trace = nullptr);
Machine remove_right_endmarker(const Machine& m, TransformTrace* trace = nullptr);
Machine strip_endmarkers_pipeline(const Machine& m, TransformTrace* trace = nullptr,
                                  bool prune = true);
Machine reverse_language(const Machine& m, TransformTrace* trace = nullptr);

// Names accepted by the CLI's --step flag, in pipeline order where relevant.
const std::vector<std::string>& transform_names();
Machine apply_transform(const std::string& name, const Machine& m, TransformTrace* trace = nullptr);

// Conventional decorated names shared by the constructions.
std::string hat_name(const std::string& q);     // [q,^]
std::string dollar_name(const std::string& q);  // [q,$]
std::string bar_name(const std::string& q);     // [q,-]
std::string plus_name(const std::string& q);    // [q,+]

}  // namespace pda
