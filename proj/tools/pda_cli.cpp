// Command-line front end. Exit codes: 0 success or pass, 1 failure or
// counterexample, 2 usage or input error.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>

#include "pda/equiv.hpp"
#include "pda/io.hpp"
#include "pda/pfa.hpp"
#include "pda/sim.hpp"
#include "pda/transforms.hpp"
#include "pda/validate.hpp"

using namespace pda;

namespace {

constexpr int kFail = 1;
constexpr int kInputError = 2;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

Machine load(const std::string& path) {
  try {
    return load_machine(path);
  } catch (const std::exception& e) {
    throw InputError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << text;
}

std::string stats_line(const ComplexityStats& s) {
  return "n=" + std::to_string(s.n) + " m=" + std::to_string(s.m) + " e=" + std::to_string(s.e);
}

int cmd_validate(const std::string& file) {
  Machine m = load(file);
  auto report = validate(m);
  std::cout << (report.ok() ? "valid\n" : report.text());
  auto halting = check_halting(m);
  std::cout << halting.text();
  return report.ok() && halting.ok ? 0 : kFail;
}

int cmd_run(const std::string& file, const std::string& text) {
  Machine m = load(file);
  Word w;
  try {
    w = parse_word(text);
  } catch (const std::exception& e) {
    throw InputError(e.what());
  }
  for (const auto& s : w)
    if (!m.input.count(s)) throw InputError("symbol \"" + s + "\" is not in the input alphabet");
  auto report = validate(m);
  if (!report.ok()) {
    std::cout << report.text();
    return kFail;
  }
  Outcome o;
  try {
    o = run(m, w);
  } catch (const SimulationError& e) {
    std::cout << "simulation error: " << e.what() << "\n";
    return kFail;
  }
  std::cout << "p_acc = " << to_string(o.acc) << ", p_rej = " << to_string(o.rej)
            << ", decision = " << (decide(m.mode, o) ? "accept" : "reject") << "\n";
  return 0;
}

struct OutputFlags {
  std::string out;
  std::string trace;
  bool no_prune = false;
};

int emit(const Machine& in, Machine out, const TransformTrace& trace, const OutputFlags& f,
         bool prune) {
  if (prune && !f.no_prune) out = prune_unreachable(out);
  std::cout << "before: " << stats_line(complexity(in)) << "\n";
  std::cout << "after:  " << stats_line(complexity(out)) << "\n";
  for (const auto& s : trace.stages)
    std::cout << "  stage " << s.name << ": " << stats_line(s.before) << " -> " << stats_line(s.after)
              << "\n";
  if (!f.trace.empty()) write_text(f.trace, trace_json(trace));
  if (f.out.empty())
    std::cout << serialize_machine(out);
  else
    save_machine(out, f.out);
  return 0;
}

int cmd_transform(const std::string& file, const std::string& step, const OutputFlags& f) {
  Machine m = load(file);
  TransformTrace trace;
  Machine out;
  try {
    out = step == "pipeline" ? strip_endmarkers_pipeline(m, &trace, !f.no_prune)
                             : apply_transform(step, m, &trace);
  } catch (const TransformError& e) {
    std::cout << "transform failed at stage " << e.stage << ": " << e.what() << "\n";
    return kFail;
  }
  return emit(m, out, trace, f, step != "pipeline" && step != "prune");
}

int cmd_equiv(const std::string& a_file, const std::string& b_file, int max_len,
              const std::string& mode, bool json, bool exhaustive) {
  Machine a = load(a_file), b = load(b_file);
  if (a.input != b.input) throw InputError("input alphabets differ");
  for (const auto* m : {&a, &b}) {
    auto report = validate(*m);
    if (!report.ok()) {
      std::cout << report.text();
      return kFail;
    }
  }
  EquivalenceReport r;
  try {
    r = mode == "language" ? check_language_equivalence(a, b, max_len, exhaustive)
                           : check_error_equivalence(a, b, max_len, exhaustive);
  } catch (const EquivalenceError& e) {
    throw InputError(e.what());
  } catch (const SimulationError& e) {
    std::cout << "simulation error: " << e.what() << "\n";
    return kFail;
  }
  std::cout << (json ? r.json() : r.table());
  return r.pass ? 0 : kFail;
}

int cmd_stats(const std::string& file, bool pfa) {
  Machine m = load(file);
  auto s = complexity(m);
  std::cout << "kind: " << to_string(m.kind) << "\nmode: " << to_string(m.mode) << "\n"
            << stats_line(s) << "\nobserved push size: " << observed_push_size(m) << "\n";
  if (!pfa) return 0;
  try {
    FreePFA n = derive_free_pfa(m);
    for (const auto& [sym, u] : n.U) std::cout << "U[" << sym << "]\n" << matrix_table(u, n.states);
    if (!n.stochastic()) {
      // Rows of states that do not pop on a symbol keep their mass in place.
      std::cout << "missing row mass placed on self-loops\n";
      for (auto& [sym, u] : n.U)
        for (size_t i = 0; i < u.size(); ++i) {
          Rational sum = 0;
          for (const auto& x : u[i]) sum += x;
          u[i][i] += 1 - sum;
        }
    }
    ReversedPFA r = reverse_pfa(n);
    for (const auto& [sym, v] : r.K.U) std::cout << "V[" << sym << "]\n" << matrix_table(v, r.K.states);
  } catch (const PfaError& e) {
    std::cout << "no free automaton: " << e.what() << "\n";
    return kFail;
  }
  return 0;
}

int cmd_ideal_check(const std::string& file) {
  Machine m = load(file);
  auto r = check_ideal_shape(m);
  std::cout << r.text();
  return r.all() ? 0 : kFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Toolkit for one-way probabilistic pushdown automata"};
  app.require_subcommand(1);

  std::string file, file_b, word, step, mode = "error";
  int max_len = 5;
  bool json = false, exhaustive = false, pfa = false;
  OutputFlags flags;
  auto add_output = [&](CLI::App* c) {
    c->add_option("--out", flags.out, "Write the output machine here");
    c->add_option("--trace", flags.trace, "Write the transform trace (JSON) here");
    c->add_flag("--no-prune", flags.no_prune, "Keep unreachable states and symbols");
  };

  auto* validate_cmd = app.add_subcommand("validate", "Check a machine file");
  validate_cmd->add_option("file", file)->required();
  auto* run_cmd = app.add_subcommand("run", "Exact acceptance and rejection probabilities");
  run_cmd->add_option("file", file)->required();
  run_cmd->add_option("--word", word, "Input word, one symbol per character")->required();
  auto* transform_cmd = app.add_subcommand("transform", "Apply one transform");
  transform_cmd->add_option("file", file)->required();
  transform_cmd->add_option("--step", step)->required()->check(CLI::IsMember(transform_names()));
  add_output(transform_cmd);
  auto* pipeline_cmd = app.add_subcommand("pipeline", "Remove both endmarkers");
  pipeline_cmd->add_option("file", file)->required();
  add_output(pipeline_cmd);
  auto* reverse_cmd = app.add_subcommand("reverse", "Build a machine for the reversed language");
  reverse_cmd->add_option("file", file)->required();
  add_output(reverse_cmd);
  auto* equiv_cmd = app.add_subcommand("equiv", "Compare two machines on all short words");
  equiv_cmd->add_option("a", file)->required();
  equiv_cmd->add_option("b", file_b)->required();
  equiv_cmd->add_option("--max-len", max_len)->check(CLI::NonNegativeNumber);
  equiv_cmd->add_option("--mode", mode)->check(CLI::IsMember({"error", "language"}));
  equiv_cmd->add_flag("--json", json, "JSON report instead of a table");
  equiv_cmd->add_flag("--exhaustive", exhaustive, "Keep going after the first difference");
  auto* stats_cmd = app.add_subcommand("stats", "State count, stack alphabet size, push size");
  stats_cmd->add_option("file", file)->required();
  stats_cmd->add_flag("--pfa", pfa, "Dump the free automaton of the λ-pops and its reversal");
  auto* ideal_cmd = app.add_subcommand("ideal-check", "Evaluate the ideal-shape conditions");
  ideal_cmd->add_option("file", file)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kInputError;
  }

  try {
    if (*validate_cmd) return cmd_validate(file);
    if (*run_cmd) return cmd_run(file, word);
    if (*transform_cmd) return cmd_transform(file, step, flags);
    if (*pipeline_cmd) return cmd_transform(file, "pipeline", flags);
    if (*reverse_cmd) return cmd_transform(file, "reverse", flags);
    if (*equiv_cmd) return cmd_equiv(file, file_b, max_len, mode, json, exhaustive);
    if (*stats_cmd) return cmd_stats(file, pfa);
    if (*ideal_cmd) return cmd_ideal_check(file);
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kFail;
  }
  return kInputError;
}
