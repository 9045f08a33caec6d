#pragma once

// Test-side oracles, deliberately written from the definitions rather than
// on top of the library's linear algebra: plain int arithmetic mod 3,
// rank by row-span enumeration, affine solving by an independent RREF,
// and sign diagonals built from the literal block pattern.

#include <algorithm>
#include <cstdint>
#include <initializer_list>
#include <random>
#include <stdexcept>
#include <vector>

#include "code.hpp"
#include "errors.hpp"
#include "gf3.hpp"
#include "repair.hpp"

namespace testsupport {

inline int mod3(long long v) { return static_cast<int>(((v % 3) + 3) % 3); }

// Rank over GF(3) as log_3 of the row-span size, by enumerating all 3^r
// row combinations. Only viable for small row counts.
inline std::size_t rank_by_span(const std::vector<std::vector<int>>& rows) {
  const std::size_t r = rows.size();
  if (r > 12) throw std::runtime_error("rank_by_span: too many rows");
  const std::size_t cols = r ? rows[0].size() : 0;
  std::size_t combos = 1;
  for (std::size_t i = 0; i < r; ++i) combos *= 3;

  std::vector<std::vector<int>> span;
  span.reserve(combos);
  std::vector<int> coeff(r, 0);
  for (std::size_t n = 0; n < combos; ++n) {
    std::size_t rem = n;
    for (std::size_t i = 0; i < r; ++i) {
      coeff[i] = static_cast<int>(rem % 3);
      rem /= 3;
    }
    std::vector<int> v(cols, 0);
    for (std::size_t i = 0; i < r; ++i)
      for (std::size_t c = 0; c < cols; ++c) v[c] = mod3(v[c] + coeff[i] * rows[i][c]);
    span.push_back(std::move(v));
  }
  std::sort(span.begin(), span.end());
  span.erase(std::unique(span.begin(), span.end()), span.end());

  std::size_t rank = 0;
  std::size_t size = span.size();
  while (size > 1) {
    if (size % 3) throw std::runtime_error("rank_by_span: span size not a power of 3");
    size /= 3;
    ++rank;
  }
  return rank;
}

// Every solution of A x = b: a particular solution (free variables zero)
// plus the nullspace basis. Throws if the system is inconsistent.
struct AffineSolution {
  std::vector<int> particular;
  std::vector<std::vector<int>> nullspace;

  bool determined(std::size_t c) const {
    for (const auto& v : nullspace)
      if (v[c]) return false;
    return true;
  }
};

inline AffineSolution solve_affine(std::vector<std::vector<int>> a, std::vector<int> b) {
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  if (b.size() != rows) throw std::runtime_error("solve_affine: rhs length");

  std::vector<std::size_t> pivot_col;
  std::size_t rank = 0;
  for (std::size_t col = 0; col < cols && rank < rows; ++col) {
    std::size_t p = rank;
    while (p < rows && a[p][col] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[rank], a[p]);
    std::swap(b[rank], b[p]);
    const int inv = a[rank][col];  // 1 and 2 are self-inverse mod 3
    for (std::size_t c = 0; c < cols; ++c) a[rank][c] = mod3(a[rank][c] * inv);
    b[rank] = mod3(b[rank] * inv);
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank || a[r][col] == 0) continue;
      const int f = a[r][col];
      for (std::size_t c = 0; c < cols; ++c) a[r][c] = mod3(a[r][c] - f * a[rank][c]);
      b[r] = mod3(b[r] - f * b[rank]);
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (std::size_t r = rank; r < rows; ++r)
    if (b[r]) throw std::runtime_error("solve_affine: inconsistent system");

  std::vector<int> is_pivot(cols, 0);
  for (std::size_t p : pivot_col) is_pivot[p] = 1;

  AffineSolution out;
  out.particular.assign(cols, 0);
  for (std::size_t r = 0; r < rank; ++r) out.particular[pivot_col[r]] = b[r];
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<int> v(cols, 0);
    v[free] = 1;
    for (std::size_t r = 0; r < rank; ++r) v[pivot_col[r]] = mod3(-a[r][free]);
    out.nullspace.push_back(std::move(v));
  }
  return out;
}

// Diagonal entry of X_i at position t from the literal block pattern:
// 2^{i-1} repetitions of (N/2^i plus-ones, then N/2^i minus-ones).
inline int x_sign(int i, int k, int t) {
  const int n = 1 << k;
  std::vector<int> diag;
  diag.reserve(n);
  const int run = n >> i;
  while (static_cast<int>(diag.size()) < n) {
    for (int p = 0; p < run; ++p) diag.push_back(1);
    for (int p = 0; p < run; ++p) diag.push_back(-1);
  }
  return diag[t];
}

// prod X_i^{bits[i-1]} applied to the all-ones vector, in +1/-1 form.
inline std::vector<int> product_column(int k, const std::vector<int>& bits) {
  const int n = 1 << k;
  std::vector<int> v(n, 1);
  for (int i = 1; i <= k; ++i) {
    if (!bits[i - 1]) continue;
    for (int t = 0; t < n; ++t) v[t] *= x_sign(i, k, t);
  }
  return v;
}

inline hdsc::gf3::Vec to_gf3(const std::vector<int>& v) {
  hdsc::gf3::Vec out(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) out[i] = hdsc::gf3::canon(v[i]);
  return out;
}

inline hdsc::gf3::Vec vec(std::initializer_list<int> v) {
  return to_gf3(std::vector<int>(v));
}

inline hdsc::gf3::Vec random_file(const hdsc::CodeParams& params, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(0, 2);
  hdsc::gf3::Vec f(static_cast<std::size_t>(params.file_symbols()));
  for (auto& s : f) s = static_cast<hdsc::gf3::Sym>(d(rng));
  return f;
}

inline std::vector<std::uint8_t> random_bytes(std::size_t len, std::mt19937& rng) {
  std::uniform_int_distribution<int> d(0, 255);
  std::vector<std::uint8_t> out(len);
  for (auto& b : out) b = static_cast<std::uint8_t>(d(rng));
  return out;
}

// Error code raised by fn, or Errc{0} if it returned normally.
template <typename Fn>
hdsc::Errc errc_of(Fn&& fn) {
  try {
    fn();
  } catch (const hdsc::Error& e) {
    return e.code();
  }
  return static_cast<hdsc::Errc>(0);
}

// Brute-force repair: stack every downloaded equation of a systematic
// repair transcript as one linear system over all k*N file symbols and
// solve by elimination; the target block's coordinates must come out
// uniquely determined.
inline hdsc::gf3::Vec brute_force_repair(const hdsc::CodeParams& params, int i,
                                         const hdsc::RepairTranscript& t) {
  const int k = params.k;
  const int n = params.node_symbols;
  const hdsc::RepairMatrixV v = hdsc::repair_matrix(params, i);

  std::vector<std::vector<int>> a;
  std::vector<int> b;
  const auto column = [&](std::size_t idx) {
    return product_column(k, v.tuples[idx].bits());
  };

  for (const hdsc::Download& d : t.downloads) {
    if (d.payload.size() != v.tuples.size())
      throw std::runtime_error("brute_force_repair: unexpected payload length");
    for (std::size_t r = 0; r < d.payload.size(); ++r) {
      const std::vector<int> col = column(r);
      std::vector<int> row(static_cast<std::size_t>(k) * n, 0);
      switch (d.source.role) {
        case hdsc::Role::Systematic:
          for (int p = 0; p < n; ++p) row[(d.source.index - 1) * n + p] = mod3(col[p]);
          break;
        case hdsc::Role::ParityA:
          for (int j = 0; j < k; ++j)
            for (int p = 0; p < n; ++p) row[j * n + p] = mod3(col[p]);
          break;
        case hdsc::Role::ParityB:
          for (int j = 0; j < k; ++j)
            for (int p = 0; p < n; ++p) row[j * n + p] = mod3(col[p] * x_sign(j + 1, k, p));
          break;
      }
      a.push_back(std::move(row));
      b.push_back(d.payload[r]);
    }
  }

  const AffineSolution sol = solve_affine(std::move(a), std::move(b));
  hdsc::gf3::Vec block(static_cast<std::size_t>(n));
  for (int p = 0; p < n; ++p) {
    const std::size_t c = static_cast<std::size_t>((i - 1) * n + p);
    if (!sol.determined(c))
      throw std::runtime_error("brute_force_repair: target symbol not determined");
    block[p] = static_cast<hdsc::gf3::Sym>(sol.particular[c]);
  }
  return block;
}

}  // namespace testsupport
