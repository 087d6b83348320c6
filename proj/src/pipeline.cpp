#include "transforms_common.hpp"

namespace pda {

using namespace detail;

Machine strip_endmarkers_pipeline(const Machine& m, TransformTrace* trace, bool prune) {
  const std::string stage = "pipeline";
  if (m.kind != Kind::Endmarked) throw TransformError(stage, "input must be an endmarked machine");
  require_sound(stage, m);
  using Step = Machine (*)(const Machine&, TransformTrace*);
  const std::vector<Step> steps = {halt_normalize, ideal_shape_of_normalized, remove_left_endmarker,
                                   remove_final_lambda, remove_right_endmarker};
  Machine cur = m;
  for (Step step : steps) {
    TransformTrace t;
    cur = step(cur, trace ? &t : nullptr);
    if (prune) {
      cur = prune_unreachable(cur);
      if (trace) {
        auto s = complexity(cur);
        t.notes.push_back("pruned to n=" + std::to_string(s.n) + " m=" + std::to_string(s.m) +
                          " e=" + std::to_string(s.e));
      }
    }
    if (trace) trace->stages.push_back(std::move(t));
  }
  if (trace) {
    trace->name = stage;
    trace->before = complexity(m);
    trace->after = complexity(cur);
    trace->notes.push_back("output push size " + std::to_string(observed_push_size(cur)));
  }
  return cur;
}

const std::vector<std::string>& transform_names() {
  static const std::vector<std::string> names = {
      "add-endmarkers", "halt-normalize", "ideal-shape", "remove-left", "remove-final-lambda",
      "remove-right",   "pipeline",       "reverse",     "prune"};
  return names;
}

Machine apply_transform(const std::string& name, const Machine& m, TransformTrace* trace) {
  if (name == "add-endmarkers") return add_endmarkers(m, trace);
  if (name == "halt-normalize") return halt_normalize(m, trace);
  if (name == "ideal-shape") return to_ideal_shape(m, trace);
  if (name == "remove-left") return remove_left_endmarker(m, trace);
  if (name == "remove-final-lambda") return remove_final_lambda(m, trace);
  if (name == "remove-right") return remove_right_endmarker(m, trace);
  if (name == "pipeline") return strip_endmarkers_pipeline(m, trace);
  if (name == "reverse") return reverse_language(m, trace);
  if (name == "prune") {
    require_sound(name, m);
    Machine out = prune_unreachable(m);
    if (trace) {
      trace->name = name;
      trace->before = complexity(m);
      trace->after = complexity(out);
    }
    return out;
  }
  throw TransformError(name, "unknown transform");
}

}  // namespace pda
