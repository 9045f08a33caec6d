#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "code.hpp"

// Bandwidth-optimal single-node repair. A failed systematic node i is
// rebuilt from N/2-symbol projections: each helper multiplies its content
// by V_i^T before sending, and the two parity projections plus the
// interference cancelled from the systematic projections determine f_i.

namespace hdsc {

struct Download {
  NodeId source;
  gf3::Vec payload;
};

struct RepairTranscript {
  NodeId target;
  std::vector<Download> downloads;

  std::size_t total_symbols() const;
};

// "source=<node> symbols=<count>" per download, then "total=<count>".
std::string format_report(const RepairTranscript& t);

// The involution t <-> t xor e_j on the exponent tuples of V_i. Because
// X_j^2 = I, X_j maps column t to column (t xor e_j) with no sign change,
// so the parity-b interference of f_j is a permutation of the symbols
// already downloaded from node j.
struct InterferencePairing {
  int i = 0;
  int j = 0;
  std::vector<std::size_t> partner;  // index into the V_i tuple list
};

InterferencePairing pairing(const CodeParams& params, int i, int j);

struct RepairResult {
  NodeContent restored;
  RepairTranscript transcript;
};

RepairResult repair_systematic(const CodeParams& params, int i,
                               std::span<const NodeContent> survivors);

// Parity repair: download the surviving parity content multiplied by X_1
// (N symbols), then patch the positions where X_1 and X_j disagree with
// N/2 raw symbols from each systematic node j >= 2.
RepairResult repair_parity(const CodeParams& params, Role parity,
                           std::span<const NodeContent> survivors);

// rank([V_i | X_j V_i]) for every j, cross-checked against the lattice
// prediction.
std::vector<std::pair<int, int>> interference_rank_report(const CodeParams& params, int i);

}  // namespace hdsc
