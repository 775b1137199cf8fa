#pragma once

// Independent reference implementations used only by the tests. None of them
// share code paths with the library beyond field multiplication.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <vector>

#include "annex/analysis.hpp"
#include "annex/codec.hpp"
#include "annex/gfield.hpp"

namespace oracle {

using annex::FieldElement;
using annex::GaloisField;

// Determinant by Laplace expansion along the first row. In characteristic 2
// the signs vanish.
inline FieldElement laplace_det(const GaloisField& f, const std::vector<std::vector<FieldElement>>& a) {
  const std::size_t k = a.size();
  if (k == 0) return FieldElement(1);
  if (k == 1) return a[0][0];
  FieldElement acc{};
  for (std::size_t c = 0; c < k; ++c) {
    if (a[0][c].value == 0) continue;
    std::vector<std::vector<FieldElement>> minor;
    for (std::size_t r = 1; r < k; ++r) {
      std::vector<FieldElement> row;
      for (std::size_t cc = 0; cc < k; ++cc) {
        if (cc != c) row.push_back(a[r][cc]);
      }
      minor.push_back(row);
    }
    acc = f.add(acc, f.mul(a[0][c], laplace_det(f, minor)));
  }
  return acc;
}

// Rank as the largest order of a nonzero minor.
inline std::size_t minor_rank(const GaloisField& f, const annex::Matrix& m) {
  const std::size_t R = m.rows(), C = m.cols();
  for (std::size_t k = std::min(R, C); k > 0; --k) {
    std::vector<std::uint32_t> rsel, csel;
    for (std::uint32_t rm = 0; rm < (1u << R); ++rm) {
      if (static_cast<std::size_t>(__builtin_popcount(rm)) != k) continue;
      for (std::uint32_t cm = 0; cm < (1u << C); ++cm) {
        if (static_cast<std::size_t>(__builtin_popcount(cm)) != k) continue;
        std::vector<std::vector<FieldElement>> sub;
        for (std::size_t r = 0; r < R; ++r) {
          if (!(rm >> r & 1)) continue;
          std::vector<FieldElement> row;
          for (std::size_t c = 0; c < C; ++c) {
            if (cm >> c & 1) row.push_back(m(r, c));
          }
          sub.push_back(row);
        }
        if (laplace_det(f, sub).value != 0) return k;
      }
    }
  }
  return 0;
}

// Expected draws for the collector's brotherhood problem by value iteration
// on the absorbing chain over sorted count vectors (counts capped at m_1).
inline double markov_collection(std::size_t n, const annex::CollectorProfile& p) {
  const std::size_t cap = p.m.empty() ? 0 : p.m.front();
  auto done = [&](const std::vector<std::size_t>& s) {
    for (std::size_t j = 0; j < p.A(); ++j) {
      std::size_t c = 0;
      for (auto v : s) c += v >= p.m[j] ? 1 : 0;
      if (c < p.k[j]) return false;
    }
    return true;
  };
  std::map<std::vector<std::size_t>, double> memo;
  // E[s] = (1 + sum_{moves to t != s} P E[t]) / (1 - P(self)) ; states only grow.
  auto solve = [&](auto&& self, std::vector<std::size_t> s) -> double {
    std::sort(s.begin(), s.end());
    if (done(s)) return 0.0;
    if (auto it = memo.find(s); it != memo.end()) return it->second;
    double stay = 0, rest = 0;
    for (std::size_t i = 0; i < n; ++i) {
      if (s[i] >= cap) {
        stay += 1.0 / static_cast<double>(n);
        continue;
      }
      auto t = s;
      ++t[i];
      rest += self(self, t) / static_cast<double>(n);
    }
    const double e = (1.0 + rest) / (1.0 - stay);
    memo[s] = e;
    return e;
  };
  return solve(solve, std::vector<std::size_t>(n, 0));
}

// 1 - P(requirements met) for independent Poisson(x) counts, by summing the
// multinomial over how many generations fall in each band directly.
inline double nested_sum_integrand(std::size_t n, const annex::CollectorProfile& p, double x) {
  const std::size_t A = p.A();
  // band probabilities, index 0: >= m_1, index j: [m_{j+1}, m_j), index A: < m_A
  std::vector<double> band(A + 1, 0.0);
  auto pmf = [&](std::size_t i) { return std::exp(-x + i * std::log(x) - std::lgamma(i + 1.0)); };
  double below_m1 = 0;
  for (std::size_t i = 0; i < p.m[0]; ++i) below_m1 += pmf(i);
  band[0] = 1.0 - below_m1;
  for (std::size_t j = 1; j <= A; ++j) {
    const std::size_t hi = p.m[j - 1], lo = j < A ? p.m[j] : 0;
    for (std::size_t i = lo; i < hi; ++i) band[j] += pmf(i);
  }
  // enumerate counts c_0..c_A summing to n; feasible iff c_0+..+c_{j-1} >= k_j
  double met = 0;
  std::vector<std::size_t> c(A + 1, 0);
  auto rec = [&](auto&& self, std::size_t j, std::size_t left) -> void {
    if (j == A) {
      c[A] = left;
      std::size_t cum = 0;
      for (std::size_t t = 0; t < A; ++t) {
        cum += c[t];
        if (cum < p.k[t]) return;
      }
      double term = std::lgamma(n + 1.0);
      double prod = 1.0;
      for (std::size_t t = 0; t <= A; ++t) {
        term -= std::lgamma(c[t] + 1.0);
        prod *= std::pow(band[t], static_cast<double>(c[t]));
      }
      met += std::exp(term) * prod;
      return;
    }
    for (std::size_t v = 0; v <= left; ++v) {
      c[j] = v;
      self(self, j + 1, left - v);
    }
  };
  rec(rec, 0, n);
  return 1.0 - met;
}

// Decodability oracle for the codec: starting from no knowledge, repeatedly
// solve any generation whose received rows, restricted to its unknown
// members, reach full rank. Works on coefficient rows only.
inline std::size_t fixpoint_resolved(const annex::GenerationLayout& layout, const GaloisField& f,
                                     const std::vector<annex::CodedPacket>& received) {
  const std::size_t N = layout.packet_count();
  std::vector<bool> known(N, false);
  bool changed = true;
  while (changed) {
    changed = false;
    for (annex::GenerationIndex j = 0; j < layout.generation_count(); ++j) {
      const auto mem = layout.members(j);
      std::vector<std::size_t> cols;
      for (std::size_t s = 0; s < mem.size(); ++s) {
        if (!known[mem[s]]) cols.push_back(s);
      }
      if (cols.empty()) continue;
      std::vector<FieldElement> entries;
      std::size_t rows = 0;
      for (const auto& cp : received) {
        if (cp.gen_index != j) continue;
        for (auto c : cols) entries.push_back(cp.coding_vector[c]);
        ++rows;
      }
      if (rows < cols.size()) continue;
      annex::Matrix m(rows, cols.size(), entries);
      if (annex::rank(f, m) == cols.size()) {
        for (auto c : cols) known[mem[c]] = true;
        changed = true;
      }
    }
  }
  return static_cast<std::size_t>(std::count(known.begin(), known.end(), true));
}

// Rank of the global stacked system (each coded packet expanded to an
// N-wide row).
inline std::size_t global_rank(const annex::GenerationLayout& layout, const GaloisField& f,
                               const std::vector<annex::CodedPacket>& received) {
  const std::size_t N = layout.packet_count();
  annex::Matrix m(received.size(), N);
  for (std::size_t r = 0; r < received.size(); ++r) {
    const auto mem = layout.members(received[r].gen_index);
    for (std::size_t s = 0; s < mem.size(); ++s) m(r, mem[s]) = received[r].coding_vector[s];
  }
  return annex::rank(f, m);
}

// Packets determined by the received set as a whole: e_p lies in the row
// space of the stacked system.
inline std::vector<bool> global_determinable(const annex::GenerationLayout& layout,
                                             const GaloisField& f,
                                             const std::vector<annex::CodedPacket>& received) {
  const std::size_t N = layout.packet_count();
  annex::Matrix m(received.size() + 1, N);
  for (std::size_t r = 0; r < received.size(); ++r) {
    const auto mem = layout.members(received[r].gen_index);
    for (std::size_t s = 0; s < mem.size(); ++s) m(r, mem[s]) = received[r].coding_vector[s];
  }
  annex::Matrix base(received.size(), N,
                     std::vector<FieldElement>(m.entries().begin(),
                                               m.entries().begin() + received.size() * N));
  const std::size_t r0 = annex::rank(f, base);
  std::vector<bool> out(N);
  for (std::size_t p = 0; p < N; ++p) {
    auto aug = m;
    aug(received.size(), p) = FieldElement(1);
    out[p] = annex::rank(f, aug) == r0;
  }
  return out;
}

}  // namespace oracle
