#include "pda/pfa.hpp"

#include <algorithm>
#include <sstream>

namespace pda {

int FreePFA::index(const std::string& q) const {
  auto it = std::find(states.begin(), states.end(), q);
  if (it == states.end()) throw PfaError("unknown pfa state " + q);
  return static_cast<int>(it - states.begin());
}

const Matrix& FreePFA::matrix(const Sym& s) const {
  auto it = U.find(s);
  if (it == U.end()) throw PfaError("symbol \"" + s + "\" outside the pfa alphabet");
  return it->second;
}

bool FreePFA::stochastic() const {
  for (const auto& [s, mat] : U)
    for (const auto& row : mat) {
      Rational sum = 0;
      for (const auto& x : row) sum += x;
      if (sum != 1) return false;
    }
  return true;
}

FreePFA derive_free_pfa(const Machine& m) {
  FreePFA pfa;
  pfa.states.assign(m.states.begin(), m.states.end());
  for (const auto& a : m.stack)
    if (a != m.bottom) pfa.alphabet.push_back(a);
  pfa.end_symbol = m.bottom;
  size_t n = pfa.states.size();
  for (const auto& a : m.stack) pfa.U[a] = Matrix(n, std::vector<Rational>(n, 0));
  for (const auto& [key, row] : m.delta) {
    if (key.read != kLambda) continue;
    for (const auto& [t, p] : row) {
      if (!t.push.empty())
        throw PfaError("λ-move (" + key.from + ",λ," + key.top + ")→(" + t.to + "," +
                       show_word(t.push) + ") does not pop");
      pfa.U[key.top][pfa.index(key.from)][pfa.index(t.to)] += p;
    }
  }
  return pfa;
}

std::vector<Rational> pfa_run(const FreePFA& pfa, int q, const Word& w) {
  size_t n = pfa.states.size();
  std::vector<Rational> v(n, 0);
  v.at(q) = 1;
  for (const auto& s : w) {
    const Matrix& u = pfa.matrix(s);
    std::vector<Rational> next(n, 0);
    for (size_t i = 0; i < n; ++i) {
      if (v[i] == 0) continue;
      for (size_t j = 0; j < n; ++j)
        if (u[i][j] != 0) next[j] += v[i] * u[i][j];
    }
    v = std::move(next);
  }
  return v;
}

Rational pfa_run_prob(const FreePFA& pfa, int q, const Word& w, int p) { return pfa_run(pfa, q, w).at(p); }

std::string subset_name(const FreePFA& pfa, uint32_t mask) {
  std::vector<std::string> parts;
  for (size_t i = 0; i < pfa.states.size(); ++i)
    if (mask >> i & 1u) parts.push_back(pfa.states[i]);
  return "{" + join(parts, ",") + "}";
}

namespace {

void check_reversible(const FreePFA& pfa, const Sym& sigma) {
  if (pfa.states.size() > static_cast<size_t>(kMaxReverseStates))
    throw PfaError("reversal needs 2^" + std::to_string(pfa.states.size()) +
                   " subset states, above the limit of 2^" + std::to_string(kMaxReverseStates));
  const Matrix& u = pfa.matrix(sigma);
  for (size_t i = 0; i < u.size(); ++i) {
    Rational sum = 0;
    for (const auto& x : u[i]) sum += x;
    if (sum != 1)
      throw PfaError("row of " + pfa.states[i] + " on " + sigma + " sums to " + to_string(sum) +
                     ", not stochastic");
  }
}

// β_k(σ)_l = Σ_{j∈Q_k} U_σ[l][j], then peeled into support-indicator layers.
struct Decomposition {
  std::map<uint32_t, Rational> row;
  int steps = 0;
};

Decomposition decompose(const FreePFA& pfa, uint32_t mask, const Sym& sigma) {
  check_reversible(pfa, sigma);
  const Matrix& u = pfa.matrix(sigma);
  size_t n = pfa.states.size();
  std::vector<Rational> beta(n, 0);
  for (size_t l = 0; l < n; ++l)
    for (size_t j = 0; j < n; ++j)
      if (mask >> j & 1u) beta[l] += u[l][j];
  Rational top = 0;
  for (const auto& b : beta) top = std::max(top, b);

  Decomposition d;
  std::vector<Rational> rest = beta;
  while (true) {
    uint32_t support = 0;
    Rational least = 0;
    for (size_t l = 0; l < n; ++l)
      if (rest[l] > 0) {
        support |= 1u << l;
        if (least == 0 || rest[l] < least) least = rest[l];
      }
    if (!support) break;
    d.row[support] += least;
    ++d.steps;
    for (size_t l = 0; l < n; ++l)
      if (support >> l & 1u) rest[l] -= least;
  }
  if (top < 1) d.row[0] += 1 - top;
  return d;
}

}  // namespace

std::map<uint32_t, Rational> reversed_row(const FreePFA& pfa, uint32_t mask, const Sym& sigma) {
  return decompose(pfa, mask, sigma).row;
}

int reversed_row_steps(const FreePFA& pfa, uint32_t mask, const Sym& sigma) {
  return decompose(pfa, mask, sigma).steps;
}

ReversedPFA reverse_pfa(const FreePFA& pfa) {
  if (pfa.states.size() > static_cast<size_t>(kMaxReverseStates))
    throw PfaError("reversal needs 2^" + std::to_string(pfa.states.size()) +
                   " subset states, above the limit of 2^" + std::to_string(kMaxReverseStates));
  size_t n = pfa.states.size();
  uint32_t count = 1u << n;
  ReversedPFA r;
  r.K.alphabet = pfa.alphabet;
  r.K.end_symbol = pfa.end_symbol;
  for (uint32_t k = 0; k < count; ++k) r.K.states.push_back(subset_name(pfa, k));
  for (const auto& [sigma, u] : pfa.U) {
    Matrix v(count, std::vector<Rational>(count, 0));
    for (uint32_t k = 0; k < count; ++k)
      for (const auto& [l, g] : reversed_row(pfa, k, sigma)) v[k][l] = g;
    r.K.U[sigma] = std::move(v);
  }
  r.s.resize(n);
  r.T.resize(n);
  for (size_t p = 0; p < n; ++p) {
    r.s[p] = 1u << p;
    for (uint32_t k = 0; k < count; ++k)
      if (k >> p & 1u) r.T[p].push_back(k);
  }
  return r;
}

std::string matrix_table(const Matrix& m, const std::vector<std::string>& labels) {
  std::vector<std::vector<std::string>> cells(m.size() + 1, std::vector<std::string>(m.size() + 1));
  for (size_t i = 0; i < m.size(); ++i) {
    cells[0][i + 1] = labels[i];
    cells[i + 1][0] = labels[i];
    for (size_t j = 0; j < m.size(); ++j) cells[i + 1][j + 1] = m[i][j] == 0 ? "0" : to_string(m[i][j]);
  }
  std::vector<size_t> width(m.size() + 1, 0);
  for (const auto& row : cells)
    for (size_t j = 0; j < row.size(); ++j) width[j] = std::max(width[j], utf8_scalars(row[j]).size());
  std::ostringstream out;
  for (const auto& row : cells) {
    for (size_t j = 0; j < row.size(); ++j) {
      out << row[j] << std::string(width[j] - utf8_scalars(row[j]).size() + 2, ' ');
    }
    out << "\n";
  }
  return out.str();
}

}  // namespace pda
