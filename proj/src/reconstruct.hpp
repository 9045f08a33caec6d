#pragma once

#include <span>
#include <vector>

#include "code.hpp"
#include "repair.hpp"

// Whole-file reconstruction and failure tolerance. An access set names the
// nodes a reader downloads in full; when their stacked equations are rank
// deficient the reader tops up with individual symbols from extra sources,
// taking only symbols that raise the rank.

namespace hdsc {

struct AccessSet {
  std::vector<NodeId> nodes;  // canonical order, unique

  static AccessSet of(std::vector<NodeId> nodes);
};

// Stacked coefficient matrix: one identity row block per accessed
// systematic node, [I .. I] for parity a, [X_1 .. X_k] for parity b.
gf3::Matrix access_matrix(const CodeParams& params, const AccessSet& access);

struct DecodabilityReport {
  int system_rank = 0;
  int deficiency = 0;
  bool decodable = false;
};

DecodabilityReport decodability(const CodeParams& params, const AccessSet& access);

// True for any single failure and any pair with at most one systematic
// node; false otherwise.
bool can_tolerate(const CodeParams& params, std::span<const NodeId> failed);

std::vector<NodeContent> recover_failures(const CodeParams& params,
                                          std::span<const NodeId> failed,
                                          std::span<const NodeContent> survivors);

struct ReconstructResult {
  gf3::Vec file;
  std::size_t downloaded_symbols = 0;
};

// Downloads the accessed contents in full; if the system is deficient,
// walks the extra sources in order, symbol index ascending, downloading
// only symbols that increase the rank, until the rank reaches k * 2^k.
ReconstructResult reconstruct_file(const CodeParams& params,
                                   std::span<const NodeContent> accessed,
                                   std::span<const NodeContent> extra_sources);

}  // namespace hdsc
