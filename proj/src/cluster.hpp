#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "reconstruct.hpp"

// On-disk cluster simulator. A byte file is widened to base-3 digits (six
// per byte, most significant first), zero-padded to whole stripes of
// k * 2^k symbols, encoded stripe by stripe and laid out as one chunk file
// per node plus a plain-text manifest.
//
// Chunk layout, integers big-endian:
//   magic "HDSC" | version 0x01 | k (1) | role (1) | index (2) |
//   payload length (8) | payload, one symbol per byte | checksum (4),
//   the sum of the payload bytes mod 2^32.

namespace hdsc {

std::vector<std::uint8_t> bytes_to_trits(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> trits_to_bytes(std::span<const std::uint8_t> trits,
                                         std::uint64_t byte_length);

void write_chunk_file(const std::filesystem::path& path, int k, const NodeId& node,
                      const gf3::Vec& payload);
gf3::Vec read_chunk_file(const std::filesystem::path& path, int expect_k,
                         const NodeId& expect_node);

struct ChunkInfo {
  NodeId node;
  std::string filename;
  bool live = true;
};

class Cluster {
 public:
  static Cluster init(int k, std::span<const std::uint8_t> bytes,
                      const std::filesystem::path& dir);
  static Cluster open(const std::filesystem::path& dir);

  const CodeParams& params() const { return params_; }
  const std::filesystem::path& dir() const { return dir_; }
  std::uint64_t byte_length() const { return byte_length_; }
  int stripes() const { return stripes_; }
  std::uint64_t traffic() const { return traffic_; }
  const std::vector<ChunkInfo>& roster() const { return roster_; }

  void fail_node(const NodeId& id);

  // Restores a failed node from the survivors and reports the simulated
  // network transfer, summed over stripes.
  RepairTranscript run_repair(const NodeId& id);

  // Rebuilds the original bytes without reading the excluded nodes in
  // full; excluded live nodes may still serve the rank-completing extra
  // symbols. Returns the number of symbols downloaded.
  std::uint64_t run_reconstruct(std::span<const NodeId> exclude,
                                const std::filesystem::path& output);

 private:
  Cluster() = default;

  ChunkInfo& chunk(const NodeId& id);
  const ChunkInfo& chunk(const NodeId& id) const;
  gf3::Vec read_payload(const ChunkInfo& info) const;
  void write_manifest() const;

  CodeParams params_;
  std::filesystem::path dir_;
  std::uint64_t byte_length_ = 0;
  int stripes_ = 0;
  std::uint64_t traffic_ = 0;
  std::vector<ChunkInfo> roster_;
};

}  // namespace hdsc
