#include "repair.hpp"

#include <bit>

#include "lattice.hpp"

namespace hdsc {

namespace {

const NodeContent& survivor(std::span<const NodeContent> nodes, const NodeId& id) {
  const NodeContent* n = find_node(nodes, id);
  if (!n) fail(Errc::node_unavailable, "repair: missing survivor " + id.str());
  if (n->data.empty()) fail(Errc::node_unavailable, "repair: empty content for " + id.str());
  return *n;
}

// V^T x without materializing V: entry a is the dot of column a with x.
gf3::Vec project(const std::vector<ExponentTuple>& tuples, const gf3::Vec& x) {
  gf3::Vec out(tuples.size());
  for (std::size_t a = 0; a < tuples.size(); ++a) {
    const std::uint32_t mask = tuples[a].mask;
    unsigned acc = 0;
    for (std::size_t t = 0; t < x.size(); ++t)
      acc += (std::popcount(static_cast<std::uint32_t>(t) & mask) & 1) ? (3 - x[t]) % 3 : x[t];
    out[a] = static_cast<gf3::Sym>(acc % 3);
  }
  return out;
}

}  // namespace

std::size_t RepairTranscript::total_symbols() const {
  std::size_t n = 0;
  for (const Download& d : downloads) n += d.payload.size();
  return n;
}

std::string format_report(const RepairTranscript& t) {
  std::string out;
  for (const Download& d : t.downloads)
    out += "source=" + d.source.str() + " symbols=" + std::to_string(d.payload.size()) + "\n";
  out += "total=" + std::to_string(t.total_symbols()) + "\n";
  return out;
}

InterferencePairing pairing(const CodeParams& params, int i, int j) {
  if (i < 1 || i > params.k || j < 1 || j > params.k)
    fail(Errc::index_out_of_range, "pairing: indices must be in [1,k]");
  if (i == j) fail(Errc::invalid_argument, "pairing: j must differ from i");

  const RepairMatrixV v = repair_matrix(params, i);
  std::vector<std::size_t> index_of(static_cast<std::size_t>(params.node_symbols), SIZE_MAX);
  for (std::size_t a = 0; a < v.tuples.size(); ++a) index_of[v.tuples[a].mask] = a;

  InterferencePairing p{i, j, std::vector<std::size_t>(v.tuples.size())};
  for (std::size_t a = 0; a < v.tuples.size(); ++a)
    p.partner[a] = index_of[v.tuples[a].flipped(j).mask];
  return p;
}

RepairResult repair_systematic(const CodeParams& params, int i,
                               std::span<const NodeContent> survivors) {
  const int k = params.k;
  const int n = params.node_symbols;
  if (i < 1 || i > k) fail(Errc::index_out_of_range, "repair_systematic: i must be in [1,k]");

  const RepairMatrixV v = repair_matrix(params, i);
  const std::size_t half = v.tuples.size();
  std::vector<std::size_t> index_of(static_cast<std::size_t>(n), SIZE_MAX);
  for (std::size_t a = 0; a < half; ++a) index_of[v.tuples[a].mask] = a;

  RepairTranscript transcript{NodeId::systematic(i), {}};
  gf3::Vec res_a = project(v.tuples, survivor(survivors, NodeId::parity_a()).data);
  gf3::Vec res_b = project(v.tuples, survivor(survivors, NodeId::parity_b()).data);
  transcript.downloads.push_back({NodeId::parity_a(), res_a});
  transcript.downloads.push_back({NodeId::parity_b(), res_b});

  for (int j = 1; j <= k; ++j) {
    if (j == i) continue;
    const gf3::Vec d = project(v.tuples, survivor(survivors, NodeId::systematic(j)).data);
    const InterferencePairing p = pairing(params, i, j);
    for (std::size_t a = 0; a < half; ++a) {
      // Parity a carries f_j through V_i^T directly; parity b carries it
      // through (X_j V_i)^T, a permutation of the same downloaded symbols.
      res_a[a] = gf3::sub(res_a[a], d[a]);
      res_b[a] = gf3::sub(res_b[a], d[p.partner[a]]);
    }
    transcript.downloads.push_back({NodeId::systematic(j), std::move(d)});
  }

  // Stack the residuals by column position: rows of [V_i | X_i V_i]^T are
  // the full Hadamard column set, so the system is H_N^T f_i = g with
  // inverse (N mod 3)^{-1} H_N.
  const std::uint32_t axis = 1u << (k - i);
  gf3::Vec g(static_cast<std::size_t>(n));
  for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(n); ++c)
    g[c] = (c & axis) ? res_b[index_of[c ^ axis]] : res_a[index_of[c]];

  const unsigned inv_n = (n % 3 == 1) ? 1 : 2;
  gf3::Vec restored(static_cast<std::size_t>(n));
  for (std::uint32_t r = 0; r < static_cast<std::uint32_t>(n); ++r) {
    unsigned acc = 0;
    for (std::uint32_t c = 0; c < static_cast<std::uint32_t>(n); ++c)
      acc += (std::popcount(r & c) & 1) ? (3 - g[c]) % 3 : g[c];
    restored[r] = static_cast<gf3::Sym>((acc % 3) * inv_n % 3);
  }

  return RepairResult{NodeContent{NodeId::systematic(i), std::move(restored)}, std::move(transcript)};
}

RepairResult repair_parity(const CodeParams& params, Role parity,
                           std::span<const NodeContent> survivors) {
  if (parity == Role::Systematic)
    fail(Errc::invalid_argument, "repair_parity: target must be a parity node");
  const int k = params.k;
  const int n = params.node_symbols;
  const bool target_a = parity == Role::ParityA;
  const NodeId target = target_a ? NodeId::parity_a() : NodeId::parity_b();
  const NodeId other = target_a ? NodeId::parity_b() : NodeId::parity_a();

  const SignDiagonal& x1 = params.generators[0];
  gf3::Vec acc = x1.applied(survivor(survivors, other).data);

  RepairTranscript transcript{target, {}};
  transcript.downloads.push_back({other, acc});

  for (int j = 2; j <= k; ++j) {
    const SignDiagonal& xj = params.generators[static_cast<std::size_t>(j - 1)];
    const gf3::Vec& fj = survivor(survivors, NodeId::systematic(j)).data;
    gf3::Vec payload;
    payload.reserve(static_cast<std::size_t>(n) / 2);
    for (int t = 0; t < n; ++t) {
      if (x1.negative_at(t) == xj.negative_at(t)) continue;
      payload.push_back(fj[t]);
      if (target_a) {
        // Have -f_j[t] inside the download (X_1 X_j is -1 here), want +f_j[t].
        acc[t] = gf3::add(acc[t], gf3::mul(2, fj[t]));
      } else {
        // Have X_1[t] f_j[t], want X_j[t] f_j[t].
        acc[t] = gf3::add(acc[t], gf3::sub(gf3::mul(xj.sign(t), fj[t]), gf3::mul(x1.sign(t), fj[t])));
      }
    }
    transcript.downloads.push_back({NodeId::systematic(j), std::move(payload)});
  }

  return RepairResult{NodeContent{target, std::move(acc)}, std::move(transcript)};
}

std::vector<std::pair<int, int>> interference_rank_report(const CodeParams& params, int i) {
  const RepairMatrixV v = repair_matrix(params, i);
  const gf3::Matrix vd = v.dense(params);
  std::vector<std::pair<int, int>> report;
  report.reserve(static_cast<std::size_t>(params.k));
  for (int j = 1; j <= params.k; ++j) {
    const int r = static_cast<int>(gf3::mat_rank(hstack(vd, apply_generator(params, j, vd))));
    if (r != lattice::predict_rank(i, j, params.k))
      fail(Errc::internal, "interference rank disagrees with lattice prediction");
    report.emplace_back(j, r);
  }
  return report;
}

}  // namespace hdsc
