#include <deque>

#include "transforms_common.hpp"

namespace pda {

namespace {

class Explorer {
 public:
  Explorer(const RowSource& rows) : rows_(rows) {}

  void run(const std::string& q0, const Sym& z0) {
    add_item(q0, z0);
    while (!queue_.empty() || !below_queue_.empty()) {
      if (!below_queue_.empty()) {
        auto [x, b] = below_queue_.front();
        below_queue_.pop_front();
        propagate_below(x, b);
        continue;
      }
      auto item = queue_.front();
      queue_.pop_front();
      process(item.first, item.second);
    }
  }

  std::map<std::pair<std::string, Sym>, PairRows> table;
  std::set<std::string> states;
  std::set<Sym> symbols;

 private:
  using Item = std::pair<std::string, Sym>;

  void add_item(const std::string& q, const Sym& a) {
    states.insert(q);
    symbols.insert(a);
    if (table.count({q, a})) return;
    table[{q, a}];  // placeholder until processed
    queue_.push_back({q, a});
  }

  void add_below(const Sym& x, const Sym& b) {
    if (below_[x].insert(b).second) below_queue_.push_back({x, b});
  }

  void propagate_below(const Sym& x, const Sym& b) {
    for (const auto& p : pops_[x]) add_item(p, b);
    for (const auto& y : inherit_[x]) add_below(y, b);
  }

  void add_inherit(const Sym& from, const Sym& to) {
    if (from == to || !inherit_[from].insert(to).second) return;
    for (const auto& b : std::set<Sym>(below_[from])) add_below(to, b);
  }

  void add_pop(const Sym& a, const std::string& p) {
    if (!pops_[a].insert(p).second) return;
    for (const auto& b : std::set<Sym>(below_[a])) add_item(p, b);
  }

  void process(const std::string& q, const Sym& a) {
    PairRows rows = rows_(q, a);
    for (auto& [read, row] : rows) {
      for (const auto& [t, p] : row) {
        states.insert(t.to);
        for (const auto& s : t.push) symbols.insert(s);
        if (t.push.empty()) {
          add_pop(a, t.to);
          continue;
        }
        add_item(t.to, t.push.front());
        for (size_t i = 0; i + 1 < t.push.size(); ++i) add_below(t.push[i], t.push[i + 1]);
        add_inherit(a, t.push.back());
      }
    }
    table[{q, a}] = std::move(rows);
  }

  const RowSource& rows_;
  std::deque<Item> queue_;
  std::deque<std::pair<Sym, Sym>> below_queue_;
  std::map<Sym, std::set<Sym>> below_;
  std::map<Sym, std::set<Sym>> inherit_;
  std::map<Sym, std::set<std::string>> pops_;
};

}  // namespace

Machine explore(const Machine& base, const RowSource& rows,
                const std::function<int(const std::string&)>& halting) {
  Explorer ex(rows);
  ex.run(base.initial, base.bottom);
  Machine out;
  out.kind = base.kind;
  out.mode = base.mode;
  out.input = base.input;
  out.bottom = base.bottom;
  out.initial = base.initial;
  out.states = ex.states;
  out.stack = ex.symbols;
  out.stack.insert(base.bottom);
  for (const auto& q : out.states) {
    int h = halting(q);
    if (h == 1) out.accept.insert(q);
    if (h == 2) out.reject.insert(q);
  }
  for (const auto& [item, pair_rows] : ex.table)
    for (const auto& [read, row] : pair_rows)
      for (const auto& [t, p] : row) out.add(item.first, read, item.second, t.to, t.push, p);
  return out;
}

Machine prune_unreachable(const Machine& m) {
  RowSource rows = [&](const std::string& q, const Sym& a) {
    PairRows out;
    std::vector<Sym> reads = m.readable();
    reads.push_back(kLambda);
    for (const auto& s : reads)
      if (const Row* r = m.row(q, s, a)) out[s] = *r;
    return out;
  };
  Machine out = explore(m, rows, [&](const std::string& q) {
    return m.accept.count(q) ? 1 : m.reject.count(q) ? 2 : 0;
  });
  out.declared_push_size = m.declared_push_size;
  return out;
}

}  // namespace pda
