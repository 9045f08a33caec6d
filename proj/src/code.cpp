#include "code.hpp"

#include <cctype>

namespace hdsc {

std::optional<NodeId> NodeId::parse(std::string_view spec) {
  std::string s;
  s.reserve(spec.size());
  for (char c : spec) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  if (s == "pa") return parity_a();
  if (s == "pb") return parity_b();
  if (s.size() < 2 || s[0] != 's') return std::nullopt;
  int index = 0;
  for (std::size_t p = 1; p < s.size(); ++p) {
    if (!std::isdigit(static_cast<unsigned char>(s[p]))) return std::nullopt;
    index = index * 10 + (s[p] - '0');
    if (index > 1 << 20) return std::nullopt;
  }
  if (index < 1) return std::nullopt;
  return systematic(index);
}

std::string NodeId::str() const {
  switch (role) {
    case Role::Systematic:
      return "s" + std::to_string(index);
    case Role::ParityA:
      return "pa";
    case Role::ParityB:
      return "pb";
  }
  return "?";
}

CodeParams make_code(int k) {
  if (k < 1 || k > 16) fail(Errc::unsupported_k, "make_code: k must be in [1,16]");
  CodeParams p;
  p.k = k;
  p.node_symbols = 1 << k;
  p.generators.reserve(static_cast<std::size_t>(k));
  for (int i = 1; i <= k; ++i) p.generators.push_back(generator(i, k));
  return p;
}

std::vector<NodeContent> encode(const CodeParams& params, const gf3::Vec& file) {
  const int n = params.node_symbols;
  if (static_cast<int>(file.size()) != params.file_symbols())
    fail(Errc::dimension_mismatch, "encode: file length != k * 2^k");
  for (auto s : file)
    if (s > 2) fail(Errc::invalid_argument, "encode: symbols must be 0, 1 or 2");

  std::vector<NodeContent> out;
  out.reserve(static_cast<std::size_t>(params.k) + 2);
  gf3::Vec pa(static_cast<std::size_t>(n), 0);
  gf3::Vec pb(static_cast<std::size_t>(n), 0);
  for (int i = 1; i <= params.k; ++i) {
    gf3::Vec block(file.begin() + static_cast<std::ptrdiff_t>(i - 1) * n,
                   file.begin() + static_cast<std::ptrdiff_t>(i) * n);
    const SignDiagonal& x = params.generators[static_cast<std::size_t>(i - 1)];
    for (int t = 0; t < n; ++t) {
      pa[t] = gf3::add(pa[t], block[t]);
      pb[t] = gf3::add(pb[t], gf3::mul(x.sign(t), block[t]));
    }
    out.push_back(NodeContent{NodeId::systematic(i), std::move(block)});
  }
  out.push_back(NodeContent{NodeId::parity_a(), std::move(pa)});
  out.push_back(NodeContent{NodeId::parity_b(), std::move(pb)});
  return out;
}

gf3::Matrix RepairMatrixV::dense(const CodeParams& params) const {
  const int n = params.node_symbols;
  gf3::Matrix m(static_cast<std::size_t>(n), tuples.size());
  for (std::size_t c = 0; c < tuples.size(); ++c) {
    const gf3::Vec col = hadamard_column(tuples[c]);
    for (int t = 0; t < n; ++t) m.at(static_cast<std::size_t>(t), c) = col[t];
  }
  return m;
}

RepairMatrixV repair_matrix(const CodeParams& params, int i) {
  if (i < 1 || i > params.k) fail(Errc::index_out_of_range, "repair_matrix: i must be in [1,k]");
  RepairMatrixV v;
  v.for_node = i;
  const std::uint32_t axis = 1u << (params.k - i);
  for (std::uint32_t mask = 0; mask < static_cast<std::uint32_t>(params.node_symbols); ++mask)
    if (!(mask & axis)) v.tuples.push_back(ExponentTuple{params.k, mask});
  return v;
}

long gamma(const CodeParams& params, int i, const RepairMatrixV& v) {
  if (v.for_node != i) fail(Errc::invalid_argument, "gamma: repair matrix is for a different node");
  const gf3::Matrix vd = v.dense(params);
  long total = params.node_symbols;
  for (int j = 1; j <= params.k; ++j) {
    if (j == i) continue;
    total += static_cast<long>(gf3::mat_rank(hstack(vd, apply_generator(params, j, vd))));
  }
  return total;
}

gf3::Matrix apply_generator(const CodeParams& params, int j, const gf3::Matrix& m) {
  if (j < 1 || j > params.k) fail(Errc::index_out_of_range, "apply_generator: j must be in [1,k]");
  const SignDiagonal& x = params.generators[static_cast<std::size_t>(j - 1)];
  if (m.rows() != static_cast<std::size_t>(x.order))
    fail(Errc::dimension_mismatch, "apply_generator: row count != generator order");
  gf3::Matrix out = m;
  for (std::size_t t = 0; t < out.rows(); ++t) {
    if (!x.negative_at(static_cast<int>(t))) continue;
    for (std::size_t c = 0; c < out.cols(); ++c) out.at(t, c) = gf3::neg(out.at(t, c));
  }
  return out;
}

const NodeContent* find_node(std::span<const NodeContent> nodes, const NodeId& id) {
  for (const NodeContent& n : nodes)
    if (n.node == id) return &n;
  return nullptr;
}

}  // namespace hdsc
