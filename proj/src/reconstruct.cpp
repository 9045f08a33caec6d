#include "reconstruct.hpp"

#include <algorithm>

namespace hdsc {

namespace {

constexpr int kMaxDenseSystem = 4096;  // decodability works on a kN x kN matrix

void check_node(const CodeParams& params, const NodeId& id) {
  if (id.role == Role::Systematic && (id.index < 1 || id.index > params.k))
    fail(Errc::index_out_of_range, "node " + id.str() + " is outside this code");
  if (id.role != Role::Systematic && id.index != 0)
    fail(Errc::invalid_argument, "parity nodes carry no index");
}

// One reduced linear system per symbol position: the parity equations only
// couple the k blocks at the same position, so the access system splits
// into N independent systems over the missing blocks.
struct LocalSystem {
  int vars = 0;
  std::vector<gf3::Vec> rows;  // Jordan-reduced, each vars coefficients + rhs
  std::vector<int> pivot_of_var;
  int rank = 0;

  explicit LocalSystem(int v) : vars(v), pivot_of_var(static_cast<std::size_t>(v), -1) {}

  bool full() const { return rank == vars; }

  // Inserts a row, returns whether the rank grew. The decision depends
  // only on the coefficients, never on the rhs.
  bool insert(gf3::Vec row) {
    for (int v = 0; v < vars; ++v) {
      const gf3::Sym f = row[v];
      if (!f || pivot_of_var[v] < 0) continue;
      const gf3::Vec& base = rows[static_cast<std::size_t>(pivot_of_var[v])];
      for (int c = 0; c <= vars; ++c) row[c] = gf3::sub(row[c], gf3::mul(f, base[c]));
    }
    int lead = -1;
    for (int v = 0; v < vars; ++v)
      if (row[v]) {
        lead = v;
        break;
      }
    if (lead < 0) {
      if (row[vars]) fail(Errc::internal, "inconsistent reconstruction system");
      return false;
    }
    const gf3::Sym inv = gf3::inv(row[lead]);
    for (int c = 0; c <= vars; ++c) row[c] = gf3::mul(inv, row[c]);
    for (gf3::Vec& r : rows) {
      const gf3::Sym f = r[lead];
      if (!f) continue;
      for (int c = 0; c <= vars; ++c) r[c] = gf3::sub(r[c], gf3::mul(f, row[c]));
    }
    pivot_of_var[lead] = static_cast<int>(rows.size());
    rows.push_back(std::move(row));
    ++rank;
    return true;
  }

  gf3::Sym solved(int var) const {
    return rows[static_cast<std::size_t>(pivot_of_var[var])][static_cast<std::size_t>(vars)];
  }
};

}  // namespace

AccessSet AccessSet::of(std::vector<NodeId> nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return AccessSet{std::move(nodes)};
}

gf3::Matrix access_matrix(const CodeParams& params, const AccessSet& access) {
  const int k = params.k;
  const int n = params.node_symbols;
  if (params.file_symbols() > kMaxDenseSystem)
    fail(Errc::unsupported_k, "access matrix too large; dense rank supports k * 2^k <= 4096");
  for (const NodeId& id : access.nodes) check_node(params, id);

  gf3::Matrix m(access.nodes.size() * static_cast<std::size_t>(n),
                static_cast<std::size_t>(params.file_symbols()));
  std::size_t row = 0;
  for (const NodeId& id : access.nodes) {
    for (int t = 0; t < n; ++t, ++row) {
      switch (id.role) {
        case Role::Systematic:
          m.at(row, static_cast<std::size_t>((id.index - 1) * n + t)) = 1;
          break;
        case Role::ParityA:
          for (int b = 0; b < k; ++b) m.at(row, static_cast<std::size_t>(b * n + t)) = 1;
          break;
        case Role::ParityB:
          for (int b = 0; b < k; ++b)
            m.at(row, static_cast<std::size_t>(b * n + t)) = params.generators[b].sign(t);
          break;
      }
    }
  }
  return m;
}

DecodabilityReport decodability(const CodeParams& params, const AccessSet& access) {
  const int rank = static_cast<int>(gf3::mat_rank(access_matrix(params, access)));
  const int deficiency = params.file_symbols() - rank;
  return DecodabilityReport{rank, deficiency, deficiency == 0};
}

bool can_tolerate(const CodeParams&, std::span<const NodeId> failed) {
  std::vector<NodeId> f(failed.begin(), failed.end());
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  if (f.size() > 2) return false;
  int systematic = 0;
  for (const NodeId& id : f)
    if (id.role == Role::Systematic) ++systematic;
  return systematic <= 1;
}

std::vector<NodeContent> recover_failures(const CodeParams& params,
                                          std::span<const NodeId> failed,
                                          std::span<const NodeContent> survivors) {
  std::vector<NodeId> f(failed.begin(), failed.end());
  std::sort(f.begin(), f.end());
  f.erase(std::unique(f.begin(), f.end()), f.end());
  for (const NodeId& id : f) check_node(params, id);
  if (!can_tolerate(params, f))
    fail(Errc::intolerable, "failure set is beyond the tolerance of the code");

  const int k = params.k;
  const int n = params.node_symbols;

  if (f.empty()) return {};
  if (f.size() == 1) {
    if (f[0].role == Role::Systematic)
      return {repair_systematic(params, f[0].index, survivors).restored};
    return {repair_parity(params, f[0].role, survivors).restored};
  }

  const auto need = [&](const NodeId& id) -> const gf3::Vec& {
    const NodeContent* c = find_node(survivors, id);
    if (!c) fail(Errc::node_unavailable, "recover: missing survivor " + id.str());
    return c->data;
  };

  if (f[0].role != Role::Systematic) {
    // Both parities lost: re-encode them from the systematic blocks.
    gf3::Vec pa(static_cast<std::size_t>(n), 0);
    gf3::Vec pb(static_cast<std::size_t>(n), 0);
    for (int j = 1; j <= k; ++j) {
      const gf3::Vec& fj = need(NodeId::systematic(j));
      const SignDiagonal& xj = params.generators[static_cast<std::size_t>(j - 1)];
      for (int t = 0; t < n; ++t) {
        pa[t] = gf3::add(pa[t], fj[t]);
        pb[t] = gf3::add(pb[t], gf3::mul(xj.sign(t), fj[t]));
      }
    }
    return {NodeContent{NodeId::parity_a(), std::move(pa)},
            NodeContent{NodeId::parity_b(), std::move(pb)}};
  }

  // One systematic node i plus one parity: peel the surviving parity down
  // to f_i, then re-encode the lost parity.
  const int i = f[0].index;
  const bool lost_a = f[1].role == Role::ParityA;
  const NodeId surviving = lost_a ? NodeId::parity_b() : NodeId::parity_a();
  gf3::Vec fi = need(surviving);
  for (int j = 1; j <= k; ++j) {
    if (j == i) continue;
    const gf3::Vec& fj = need(NodeId::systematic(j));
    const SignDiagonal& xj = params.generators[static_cast<std::size_t>(j - 1)];
    for (int t = 0; t < n; ++t) {
      const gf3::Sym term = lost_a ? gf3::mul(xj.sign(t), fj[t]) : fj[t];
      fi[t] = gf3::sub(fi[t], term);
    }
  }
  if (lost_a) params.generators[static_cast<std::size_t>(i - 1)].apply(fi);  // X_i^{-1} = X_i

  gf3::Vec parity(static_cast<std::size_t>(n), 0);
  for (int j = 1; j <= k; ++j) {
    const gf3::Vec& fj = j == i ? fi : need(NodeId::systematic(j));
    const SignDiagonal& xj = params.generators[static_cast<std::size_t>(j - 1)];
    for (int t = 0; t < n; ++t) {
      const gf3::Sym term = lost_a ? fj[t] : gf3::mul(xj.sign(t), fj[t]);
      parity[t] = gf3::add(parity[t], term);
    }
  }

  std::vector<NodeContent> out;
  out.push_back(NodeContent{NodeId::systematic(i), std::move(fi)});
  out.push_back(NodeContent{lost_a ? NodeId::parity_a() : NodeId::parity_b(), std::move(parity)});
  return out;
}

ReconstructResult reconstruct_file(const CodeParams& params,
                                   std::span<const NodeContent> accessed,
                                   std::span<const NodeContent> extra_sources) {
  const int k = params.k;
  const int n = params.node_symbols;

  std::vector<const gf3::Vec*> known(static_cast<std::size_t>(k), nullptr);
  const gf3::Vec* pa = nullptr;
  const gf3::Vec* pb = nullptr;
  std::vector<NodeId> seen;
  std::size_t downloaded = 0;

  const auto note = [&](const NodeId& id) {
    check_node(params, id);
    if (std::find(seen.begin(), seen.end(), id) != seen.end())
      fail(Errc::invalid_argument, "node " + id.str() + " listed twice");
    seen.push_back(id);
  };

  for (const NodeContent& c : accessed) {
    note(c.node);
    if (static_cast<int>(c.data.size()) != n)
      fail(Errc::dimension_mismatch, "accessed content has the wrong length");
    downloaded += c.data.size();
    switch (c.node.role) {
      case Role::Systematic:
        known[static_cast<std::size_t>(c.node.index - 1)] = &c.data;
        break;
      case Role::ParityA:
        pa = &c.data;
        break;
      case Role::ParityB:
        pb = &c.data;
        break;
    }
  }
  for (const NodeContent& c : extra_sources) {
    note(c.node);
    if (static_cast<int>(c.data.size()) != n)
      fail(Errc::dimension_mismatch, "extra source content has the wrong length");
  }

  std::vector<int> missing;
  for (int b = 0; b < k; ++b)
    if (!known[static_cast<std::size_t>(b)]) missing.push_back(b);

  gf3::Vec file(static_cast<std::size_t>(params.file_symbols()), 0);
  const auto place_known = [&] {
    for (int b = 0; b < k; ++b)
      if (known[static_cast<std::size_t>(b)])
        std::copy(known[static_cast<std::size_t>(b)]->begin(), known[static_cast<std::size_t>(b)]->end(),
                  file.begin() + static_cast<std::ptrdiff_t>(b) * n);
  };

  if (missing.empty()) {
    place_known();
    return ReconstructResult{std::move(file), downloaded};
  }

  const int m = static_cast<int>(missing.size());

  // Row of a node's symbol at position t over the missing blocks, with the
  // known blocks folded into the rhs.
  const auto row_for = [&](const NodeId& id, gf3::Sym value, int t) {
    gf3::Vec row(static_cast<std::size_t>(m) + 1, 0);
    gf3::Sym rhs = value;
    switch (id.role) {
      case Role::Systematic: {
        const auto it = std::find(missing.begin(), missing.end(), id.index - 1);
        if (it == missing.end())
          fail(Errc::invalid_argument, "extra source " + id.str() + " duplicates an accessed block");
        row[static_cast<std::size_t>(it - missing.begin())] = 1;
        break;
      }
      case Role::ParityA:
        for (int v = 0; v < m; ++v) row[static_cast<std::size_t>(v)] = 1;
        for (int b = 0; b < k; ++b)
          if (known[static_cast<std::size_t>(b)])
            rhs = gf3::sub(rhs, (*known[static_cast<std::size_t>(b)])[t]);
        break;
      case Role::ParityB:
        for (int v = 0; v < m; ++v)
          row[static_cast<std::size_t>(v)] = params.generators[static_cast<std::size_t>(missing[v])].sign(t);
        for (int b = 0; b < k; ++b)
          if (known[static_cast<std::size_t>(b)])
            rhs = gf3::sub(rhs, gf3::mul(params.generators[static_cast<std::size_t>(b)].sign(t),
                                         (*known[static_cast<std::size_t>(b)])[t]));
        break;
    }
    row[static_cast<std::size_t>(m)] = rhs;
    return row;
  };

  std::vector<LocalSystem> systems;
  systems.reserve(static_cast<std::size_t>(n));
  for (int t = 0; t < n; ++t) {
    LocalSystem sys(m);
    if (pa) sys.insert(row_for(NodeId::parity_a(), (*pa)[t], t));
    if (pb) sys.insert(row_for(NodeId::parity_b(), (*pb)[t], t));
    systems.push_back(std::move(sys));
  }

  int open = 0;
  for (const LocalSystem& sys : systems)
    if (!sys.full()) ++open;

  for (const NodeContent& src : extra_sources) {
    if (!open) break;
    for (int t = 0; t < n && open; ++t) {
      LocalSystem& sys = systems[static_cast<std::size_t>(t)];
      if (sys.full()) continue;
      if (sys.insert(row_for(src.node, src.data[t], t))) {
        ++downloaded;  // only rank-raising symbols are pulled
        if (sys.full()) --open;
      }
    }
  }
  if (open)
    fail(Errc::insufficient_access, "access set plus extra sources cannot reach full rank");

  place_known();
  for (int t = 0; t < n; ++t)
    for (int v = 0; v < m; ++v)
      file[static_cast<std::size_t>(missing[v] * n + t)] = systems[static_cast<std::size_t>(t)].solved(v);

  return ReconstructResult{std::move(file), downloaded};
}

}  // namespace hdsc
