#pragma once

#include <compare>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "gf3.hpp"
#include "hadamard.hpp"

// The (k+2, k) storage code over GF(3). A file of k*2^k symbols is split
// into k blocks f_1..f_k of N = 2^k symbols; systematic node i stores f_i,
// parity node a stores sum f_i and parity node b stores sum X_i f_i.

namespace hdsc {

enum class Role : std::uint8_t {
  Systematic = 0,
  ParityA = 1,
  ParityB = 2,
};

struct NodeId {
  Role role = Role::Systematic;
  int index = 0;  // 1..k for systematic nodes, 0 for parities

  static NodeId systematic(int i) { return NodeId{Role::Systematic, i}; }
  static NodeId parity_a() { return NodeId{Role::ParityA, 0}; }
  static NodeId parity_b() { return NodeId{Role::ParityB, 0}; }

  // Accepts "s<digits>", "pa", "pb" (case-insensitive).
  static std::optional<NodeId> parse(std::string_view spec);
  std::string str() const;

  auto operator<=>(const NodeId&) const = default;
};

struct CodeParams {
  int k = 0;
  int node_symbols = 0;                  // N = 2^k
  std::vector<SignDiagonal> generators;  // X_1..X_k

  int file_symbols() const { return k * node_symbols; }
};

CodeParams make_code(int k);  // k in [1,16]

struct NodeContent {
  NodeId node;
  gf3::Vec data;  // length N
};

std::vector<NodeContent> encode(const CodeParams& params, const gf3::Vec& file);

// Repair matrix for systematic node i: the N/2 Hadamard columns whose
// exponent tuple has x_i = 0, kept as tuple identities.
struct RepairMatrixV {
  int for_node = 0;
  std::vector<ExponentTuple> tuples;  // ascending column position

  gf3::Matrix dense(const CodeParams& params) const;  // N x N/2
};

RepairMatrixV repair_matrix(const CodeParams& params, int i);

// Repair bandwidth for systematic node i:
// N + sum over j != i of rank([V_i | X_j V_i]).
long gamma(const CodeParams& params, int i, const RepairMatrixV& v);

// X_j * m, computed as literal row sign flips.
gf3::Matrix apply_generator(const CodeParams& params, int j, const gf3::Matrix& m);

const NodeContent* find_node(std::span<const NodeContent> nodes, const NodeId& id);

}  // namespace hdsc
