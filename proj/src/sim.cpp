#include "pda/sim.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

#include "pda/validate.hpp"

namespace pda {

std::string HaltingReport::text() const {
  std::ostringstream out;
  if (ok) {
    out << "halting: ok (longest λ-chain " << max_lambda_chain << ")\n";
  } else {
    out << "halting: rejected (" << reason << ") witness " << witness << "\n";
  }
  return out.str();
}

namespace {

// A λ-exploration node: a state plus the word that currently replaces the
// starting top symbol, topmost first.
using LNode = std::pair<std::string, Word>;

std::string show_node(const LNode& n) {
  if (n.second.size() <= 8) return "(" + n.first + "," + show_word(n.second) + ")";
  Word head(n.second.begin(), n.second.begin() + 4);
  return "(" + n.first + "," + show_word(head) + "…" + std::to_string(n.second.size()) + " symbols)";
}

// λ-successors of a node; an empty word means the chain popped the start.
std::vector<std::pair<LNode, Rational>> lambda_successors(const Machine& m, const LNode& n) {
  std::vector<std::pair<LNode, Rational>> out;
  const Row* row = m.row(n.first, kLambda, n.second.front());
  if (!row) return out;
  for (const auto& [t, p] : *row) {
    Word w = t.push;
    w.insert(w.end(), n.second.begin() + 1, n.second.end());
    out.push_back({{t.to, std::move(w)}, p});
  }
  return out;
}

class HaltingSearch {
 public:
  explicit HaltingSearch(const Machine& m) : m_(m) {
    auto c = complexity(m);
    bound_ = static_cast<size_t>(c.e) * m.states.size() * m.stack.size();
  }

  HaltingReport run() {
    HaltingReport r;
    for (const auto& [key, row] : m_.delta) {
      if (key.read != kLambda) continue;
      LNode start{key.from, Word{key.top}};
      if (color_.count(start)) continue;
      visit(start);
      if (!report_.ok) return report_;
    }
    for (const auto& [n, len] : longest_) r.max_lambda_chain = std::max(r.max_lambda_chain, len);
    return r;
  }

 private:
  void visit(const LNode& n) {
    color_[n] = 1;
    path_.push_back(n);
    int best = 0;
    for (const auto& [next, p] : lambda_successors(m_, n)) {
      if (!report_.ok) break;
      if (next.second.empty()) {
        best = std::max(best, 1);
        continue;
      }
      if (next.second.size() - 1 > bound_) {
        report_.ok = false;
        report_.reason = "growth";
        report_.witness = render(0) + "→" + show_node(next);
        break;
      }
      auto it = color_.find(next);
      if (it != color_.end() && it->second == 1) {
        size_t from = 0;
        while (path_[from] != next) ++from;
        report_.ok = false;
        report_.reason = "cycle";
        report_.witness = render(from) + "→" + show_node(next);
        break;
      }
      if (it == color_.end()) visit(next);
      if (!report_.ok) break;
      best = std::max(best, 1 + longest_[next]);
    }
    longest_[n] = best;
    color_[n] = 2;
    path_.pop_back();
  }

  std::string render(size_t from) const {
    // Long witnesses keep their ends only.
    std::string s;
    size_t n = path_.size() - from;
    for (size_t i = from; i < path_.size(); ++i) {
      size_t k = i - from;
      if (n > 6 && k >= 2 && k + 2 < n) {
        if (k == 2) s += "→…(" + std::to_string(n - 4) + " more)…";
        continue;
      }
      s += (k ? "→" : "") + show_node(path_[i]);
    }
    return s;
  }

  const Machine& m_;
  size_t bound_ = 0;
  std::map<LNode, int> color_;
  std::map<LNode, int> longest_;
  std::vector<LNode> path_;
  HaltingReport report_;
};

}  // namespace

HaltingReport check_halting(const Machine& m) { return HaltingSearch(m).run(); }

std::vector<ClosureEntry> lambda_closure(const Machine& m, const std::string& q, const Sym& a) {
  // Post-order over the λ-DAG reachable from (q,a), then push mass forward in
  // reverse post-order (a topological order).
  LNode start{q, Word{a}};
  std::vector<LNode> order;
  std::set<LNode> seen;
  std::function<void(const LNode&)> dfs = [&](const LNode& n) {
    seen.insert(n);
    for (const auto& [next, p] : lambda_successors(m, n))
      if (!next.second.empty() && !seen.count(next)) dfs(next);
    order.push_back(n);
  };
  dfs(start);
  std::map<LNode, Rational> mass;
  mass[start] = 1;
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    Rational here = mass[*it];
    if (here == 0) continue;
    for (const auto& [next, p] : lambda_successors(m, *it))
      if (!next.second.empty()) mass[next] += here * p;
  }
  std::vector<ClosureEntry> out;
  for (const auto& [n, p] : mass)
    if (p != 0) out.push_back({n.first, n.second, p});
  return out;
}

bool decide(Mode mode, const Outcome& o) {
  switch (mode) {
    case Mode::Probabilistic: return o.acc * 2 > 1;
    case Mode::Deterministic: return o.acc == 1;
    case Mode::Nondeterministic: return o.acc > 0;
  }
  return false;
}

Word parse_word(const std::string& text) { return utf8_scalars(text); }

// ---------------------------------------------------------------------------

namespace {

struct Move {
  int to;
  std::vector<int> push;  // bottom-first, ready to append
  Rational p;
};

struct Config {
  int q;
  std::vector<int> st;  // bottom-first
  bool operator<(const Config& o) const { return q != o.q ? q < o.q : st < o.st; }
};

using Dist = std::map<Config, Rational>;

}  // namespace

struct Simulator::Impl {
  Machine m;
  HaltingReport hr;
  std::vector<std::string> states;
  std::map<std::string, int> sid;
  std::vector<Sym> syms;
  std::map<Sym, int> yid;
  std::map<Sym, int> rid;  // input symbols, then ¢, $, λ
  int cent = 0, dollar = 0, lambda = 0;
  // moves[q][a][r]
  std::vector<std::vector<std::vector<std::vector<Move>>>> moves;
  std::vector<std::vector<Rational>> lam_mass;
  std::vector<std::vector<std::vector<Rational>>> read_mass;
  std::vector<Sym> read_names;
  std::vector<int> kind_of;  // 0 running, 1 accepting, 2 rejecting
  bool absorb = true;

  explicit Impl(const Machine& machine) : m(machine) {
    hr = check_halting(m);
    if (!hr.ok) throw SimulationError("machine does not halt: " + hr.reason + " " + hr.witness);
    for (const auto& q : m.states) {
      sid[q] = static_cast<int>(states.size());
      states.push_back(q);
      kind_of.push_back(m.accept.count(q) ? 1 : m.reject.count(q) ? 2 : 0);
    }
    for (const auto& a : m.stack) {
      yid[a] = static_cast<int>(syms.size());
      syms.push_back(a);
    }
    int r = 0;
    for (const auto& s : m.input) rid[s] = r++;
    cent = rid[kCent] = r++;
    dollar = rid[kDollar] = r++;
    lambda = rid[kLambda] = r++;
    read_names.assign(r, "");
    for (const auto& [s, i] : rid) read_names[i] = s;
    size_t n = states.size(), k = syms.size();
    moves.assign(n, std::vector<std::vector<std::vector<Move>>>(k, std::vector<std::vector<Move>>(r)));
    lam_mass.assign(n, std::vector<Rational>(k, 0));
    read_mass.assign(n, std::vector<std::vector<Rational>>(k, std::vector<Rational>(r, 0)));
    for (const auto& [key, row] : m.delta) {
      int q = sid.at(key.from), a = yid.at(key.top), s = rid.at(key.read);
      for (const auto& [t, p] : row) {
        Move mv{sid.at(t.to), {}, p};
        for (auto it = t.push.rbegin(); it != t.push.rend(); ++it) mv.push.push_back(yid.at(*it));
        moves[q][a][s].push_back(std::move(mv));
        if (s == lambda) lam_mass[q][a] += p;
        else read_mass[q][a][s] += p;
      }
    }
    absorb = m.kind != Kind::NoEndmark;
  }

  Config apply(const Config& c, const Move& mv) const {
    Config out{mv.to, c.st};
    out.st.pop_back();
    out.st.insert(out.st.end(), mv.push.begin(), mv.push.end());
    return out;
  }

  void settle(const Config& c, const Rational& p, Dist& into, Outcome& o, bool halt = true) const {
    if (halt && absorb && kind_of[c.q]) {
      (kind_of[c.q] == 1 ? o.acc : o.rej) += p;
      return;
    }
    into[c] += p;
  }

  std::string show(const Config& c) const {
    Word w;
    for (auto it = c.st.rbegin(); it != c.st.rend(); ++it) w.push_back(syms[*it]);
    return "(" + states[c.q] + "," + show_word(w) + ")";
  }

  // Runs every λ-move available at the current cell and the read of tape
  // symbol `r` (or none when r < 0). Mass that can neither move by λ nor read
  // is an error unless `terminal` is given, which then receives it.
  // With `hold_reads`, halting targets of the read stay in `next`.
  void cell(Dist cur, int r, Dist& next, Outcome& o, Dist* terminal, Profile* profile,
            bool hold_reads = false) const {
    bool halt = profile == nullptr;
    while (!cur.empty()) {
      Dist lam;
      for (const auto& [c, p] : cur) {
        if (profile) record(c, p, *profile);
        int a = c.st.back();
        for (const auto& mv : moves[c.q][a][lambda]) settle(apply(c, mv), p * mv.p, lam, o, halt);
        Rational rest = 1 - lam_mass[c.q][a];
        if (r >= 0) {
          for (const auto& mv : moves[c.q][a][r]) settle(apply(c, mv), p * mv.p, next, o, !hold_reads);
          rest -= read_mass[c.q][a][r];
        }
        if (rest == 0) continue;
        if (terminal) {
          (*terminal)[c] += p * rest;
        } else {
          std::string what = r >= 0 ? read_names[r] : "end of input";
          throw SimulationError("blocked configuration " + show(c) + " at " + what +
                                ": mass " + to_string(rest) + " has no move");
        }
      }
      cur = std::move(lam);
    }
  }

  void record(const Config& c, const Rational& p, Profile& profile) const {
    SurfaceConfig sc;
    sc.state = states[c.q];
    for (auto it = c.st.rbegin(); it != c.st.rend(); ++it) sc.stack.push_back(syms[*it]);
    profile[sc] += p;
  }

  std::vector<int> tape(const Word& word) const {
    std::vector<int> t;
    if (m.kind == Kind::Endmarked) t.push_back(cent);
    for (const auto& s : word) {
      auto it = m.input.find(s);
      if (it == m.input.end()) throw SimulationError("symbol \"" + s + "\" is not in the input alphabet");
      t.push_back(rid.at(s));
    }
    if (m.kind != Kind::NoEndmark) t.push_back(dollar);
    return t;
  }

  Outcome run(const Word& word) const {
    Outcome o;
    auto t = tape(word);
    Dist cur;
    settle(Config{sid.at(m.initial), {yid.at(m.bottom)}}, 1, cur, o);
    for (int r : t) {
      Dist next;
      cell(std::move(cur), r, next, o, nullptr, nullptr);
      cur = std::move(next);
    }
    if (m.kind == Kind::NoEndmark) {
      Dist done, unused;
      cell(std::move(cur), -1, unused, o, &done, nullptr);
      for (const auto& [c, p] : done) (kind_of[c.q] == 1 ? o.acc : o.rej) += p;
    } else {
      Dist unused;
      cell(std::move(cur), -1, unused, o, nullptr, nullptr);
    }
    return o;
  }

  Profile profile(const Word& prefix) const {
    Outcome o;
    auto t = tape(prefix);
    if (m.kind != Kind::NoEndmark) t.pop_back();
    Dist cur;
    settle(Config{sid.at(m.initial), {yid.at(m.bottom)}}, 1, cur, o);
    for (size_t i = 0; i < t.size(); ++i) {
      Dist next;
      cell(std::move(cur), t[i], next, o, nullptr, nullptr, i + 1 == t.size());
      cur = std::move(next);
    }
    Profile prof;
    Dist ignore_next, ignore_terminal;
    // Halting targets of λ-moves at this cell are recorded, not absorbed.
    cell(std::move(cur), -1, ignore_next, o, &ignore_terminal, &prof);
    return prof;
  }
};

Simulator::Simulator(const Machine& m) : impl_(std::make_unique<Impl>(m)) {}
Simulator::~Simulator() = default;
Simulator::Simulator(Simulator&&) noexcept = default;
Simulator& Simulator::operator=(Simulator&&) noexcept = default;

Outcome Simulator::run(const Word& word) const { return impl_->run(word); }
bool Simulator::accepts(const Word& word) const { return decide(impl_->m.mode, run(word)); }
Profile Simulator::reach_profile(const Word& prefix) const { return impl_->profile(prefix); }
const HaltingReport& Simulator::halting() const { return impl_->hr; }
const Machine& Simulator::machine() const { return impl_->m; }

Outcome run(const Machine& m, const Word& word) { return Simulator(m).run(word); }
bool accepts(const Machine& m, const Word& word) { return Simulator(m).accepts(word); }

}  // namespace pda
