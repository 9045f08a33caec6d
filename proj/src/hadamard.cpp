#include "hadamard.hpp"

#include <bit>

namespace hdsc {

void SignDiagonal::apply(gf3::Vec& v) const {
  if (static_cast<int>(v.size()) != order)
    fail(Errc::dimension_mismatch, "sign diagonal order != vector length");
  for (int t = 0; t < order; ++t)
    if (neg[t]) v[t] = gf3::neg(v[t]);
}

gf3::Vec SignDiagonal::applied(gf3::Vec v) const {
  apply(v);
  return v;
}

SignDiagonal SignDiagonal::composed(const SignDiagonal& other) const {
  if (order != other.order) fail(Errc::dimension_mismatch, "sign diagonal orders differ");
  SignDiagonal out{order, std::vector<std::uint8_t>(neg.size())};
  for (std::size_t t = 0; t < neg.size(); ++t) out.neg[t] = neg[t] ^ other.neg[t];
  return out;
}

bool SignDiagonal::is_identity() const {
  for (auto b : neg)
    if (b) return false;
  return true;
}

SignDiagonal generator(int i, int k) {
  if (k < 1 || k > 16) fail(Errc::unsupported_k, "generator: k must be in [1,16]");
  if (i < 1 || i > k) fail(Errc::index_out_of_range, "generator: index must be in [1,k]");
  const int n = 1 << k;
  SignDiagonal d{n, std::vector<std::uint8_t>(static_cast<std::size_t>(n))};
  for (int t = 0; t < n; ++t) d.neg[t] = static_cast<std::uint8_t>((t >> (k - i)) & 1);
  return d;
}

ExponentTuple ExponentTuple::flipped(int axis) const {
  if (axis < 1 || axis > k) fail(Errc::index_out_of_range, "flipped: axis must be in [1,k]");
  return ExponentTuple{k, mask ^ (1u << (k - axis))};
}

std::vector<int> ExponentTuple::bits() const {
  std::vector<int> out(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) out[i - 1] = bit(i);
  return out;
}

ExponentTuple ExponentTuple::from_bits(const std::vector<int>& bits) {
  const int k = static_cast<int>(bits.size());
  if (k < 1 || k > 16) fail(Errc::unsupported_k, "from_bits: k must be in [1,16]");
  std::uint32_t mask = 0;
  for (int i = 1; i <= k; ++i) {
    const int b = bits[i - 1];
    if (b != 0 && b != 1) fail(Errc::invalid_argument, "from_bits: entries must be 0 or 1");
    mask |= static_cast<std::uint32_t>(b) << (k - i);
  }
  return ExponentTuple{k, mask};
}

gf3::Vec hadamard_column(const ExponentTuple& x) {
  const int n = 1 << x.k;
  gf3::Vec v(static_cast<std::size_t>(n));
  // Entry t of prod X_i^{x_i} w is (-1)^{popcount(t & mask)}.
  for (int t = 0; t < n; ++t)
    v[t] = (std::popcount(static_cast<unsigned>(t) & x.mask) & 1) ? gf3::Sym(2) : gf3::Sym(1);
  return v;
}

gf3::Vec HadamardMatrix::column(int c) const {
  gf3::Vec v(values.rows());
  for (std::size_t r = 0; r < values.rows(); ++r) v[r] = values.at(r, static_cast<std::size_t>(c));
  return v;
}

HadamardMatrix sylvester(int k) {
  if (k < 0 || k > 12) fail(Errc::unsupported_k, "sylvester: k must be in [0,12]");
  gf3::Matrix h(1, 1);
  h.at(0, 0) = 1;
  for (int step = 0; step < k; ++step) {
    const std::size_t n = h.rows();
    gf3::Matrix next(2 * n, 2 * n);
    for (std::size_t r = 0; r < n; ++r) {
      for (std::size_t c = 0; c < n; ++c) {
        const gf3::Sym v = h.at(r, c);
        next.at(r, c) = v;
        next.at(r, c + n) = v;
        next.at(r + n, c) = v;
        next.at(r + n, c + n) = gf3::neg(v);
      }
    }
    h = std::move(next);
  }
  return HadamardMatrix{k, std::move(h)};
}

int column_distance(const gf3::Vec& a, const gf3::Vec& b) {
  if (a.size() != b.size()) fail(Errc::dimension_mismatch, "column_distance: lengths differ");
  int d = 0;
  for (std::size_t t = 0; t < a.size(); ++t)
    if (a[t] != b[t]) ++d;
  return d;
}

bool verify_gram(const HadamardMatrix& h) {
  const int n = h.order();
  for (int u = 0; u < n; ++u) {
    for (int v = u; v < n; ++v) {
      long long dot = 0;
      for (int t = 0; t < n; ++t) {
        const int a = h.values.at(t, u) == 1 ? 1 : -1;
        const int b = h.values.at(t, v) == 1 ? 1 : -1;
        dot += a * b;
      }
      if (dot != (u == v ? n : 0)) return false;
      // Same identity in the field the code operates in.
      if (gf3::canon(dot) != (u == v ? gf3::canon(n) : 0)) return false;
    }
  }
  return true;
}

}  // namespace hdsc
