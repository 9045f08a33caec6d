#include "hdsc.h"

#include <cstring>
#include <new>

#include "cluster.hpp"
#include "lattice.hpp"

// C binding: every entry point traps exceptions and maps them to status
// codes; handles own their C++ counterparts.

struct hdsc_code {
  hdsc::CodeParams params;
};

struct hdsc_cluster {
  hdsc::Cluster impl;
};

struct hdsc_transcript {
  hdsc::RepairTranscript t;
};

namespace {

hdsc_status map_errc(hdsc::Errc code) {
  switch (code) {
    case hdsc::Errc::invalid_argument:
      return HDSC_ERR_INVALID_ARGUMENT;
    case hdsc::Errc::unsupported_k:
      return HDSC_ERR_UNSUPPORTED_K;
    case hdsc::Errc::dimension_mismatch:
      return HDSC_ERR_DIMENSION_MISMATCH;
    case hdsc::Errc::singular_matrix:
      return HDSC_ERR_SINGULAR_MATRIX;
    case hdsc::Errc::index_out_of_range:
      return HDSC_ERR_INDEX_OUT_OF_RANGE;
    case hdsc::Errc::node_unavailable:
      return HDSC_ERR_NODE_UNAVAILABLE;
    case hdsc::Errc::already_failed:
      return HDSC_ERR_ALREADY_FAILED;
    case hdsc::Errc::unknown_node:
      return HDSC_ERR_UNKNOWN_NODE;
    case hdsc::Errc::intolerable:
      return HDSC_ERR_INTOLERABLE;
    case hdsc::Errc::insufficient_access:
      return HDSC_ERR_INSUFFICIENT_ACCESS;
    case hdsc::Errc::io_error:
      return HDSC_ERR_IO;
    case hdsc::Errc::corrupt_chunk:
      return HDSC_ERR_CORRUPT_CHUNK;
    case hdsc::Errc::internal:
      return HDSC_ERR_INTERNAL;
  }
  return HDSC_ERR_INTERNAL;
}

template <typename Fn>
hdsc_status guarded(Fn&& fn) {
  try {
    fn();
    return HDSC_OK;
  } catch (const hdsc::Error& e) {
    return map_errc(e.code());
  } catch (const std::bad_alloc&) {
    return HDSC_ERR_INTERNAL;
  } catch (...) {
    return HDSC_ERR_INTERNAL;
  }
}

bool to_node(int role, int index, hdsc::NodeId& out) {
  switch (role) {
    case HDSC_ROLE_SYSTEMATIC:
      if (index < 1) return false;
      out = hdsc::NodeId::systematic(index);
      return true;
    case HDSC_ROLE_PARITY_A:
      out = hdsc::NodeId::parity_a();
      return true;
    case HDSC_ROLE_PARITY_B:
      out = hdsc::NodeId::parity_b();
      return true;
    default:
      return false;
  }
}

hdsc_status node_list(const int* roles, const int* indices, size_t n,
                      std::vector<hdsc::NodeId>& out) {
  if (n && (!roles || !indices)) return HDSC_ERR_INVALID_ARGUMENT;
  out.clear();
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) {
    hdsc::NodeId id;
    if (!to_node(roles[i], indices[i], id)) return HDSC_ERR_INVALID_ARGUMENT;
    out.push_back(id);
  }
  return HDSC_OK;
}

hdsc_transcript* wrap_transcript(hdsc::RepairTranscript t) {
  return new hdsc_transcript{std::move(t)};
}

}  // namespace

extern "C" {

const char* hdsc_status_string(hdsc_status status) {
  switch (status) {
    case HDSC_OK:
      return "ok";
    case HDSC_ERR_INVALID_ARGUMENT:
      return "invalid argument";
    case HDSC_ERR_UNSUPPORTED_K:
      return "unsupported k";
    case HDSC_ERR_DIMENSION_MISMATCH:
      return "dimension mismatch";
    case HDSC_ERR_SINGULAR_MATRIX:
      return "singular matrix";
    case HDSC_ERR_INDEX_OUT_OF_RANGE:
      return "index out of range";
    case HDSC_ERR_NODE_UNAVAILABLE:
      return "node unavailable";
    case HDSC_ERR_ALREADY_FAILED:
      return "node already failed";
    case HDSC_ERR_UNKNOWN_NODE:
      return "unknown node";
    case HDSC_ERR_INTOLERABLE:
      return "failure set beyond code tolerance";
    case HDSC_ERR_INSUFFICIENT_ACCESS:
      return "insufficient access to reconstruct";
    case HDSC_ERR_IO:
      return "i/o error";
    case HDSC_ERR_CORRUPT_CHUNK:
      return "corrupt chunk";
    case HDSC_ERR_BUFFER_TOO_SMALL:
      return "buffer too small";
    case HDSC_ERR_INTERNAL:
      return "internal error";
  }
  return "unknown status";
}

const char* hdsc_version(void) { return "1.0.0"; }

hdsc_status hdsc_node_parse(const char* spec, int* role, int* index) {
  if (!spec || !role || !index) return HDSC_ERR_INVALID_ARGUMENT;
  const auto id = hdsc::NodeId::parse(spec);
  if (!id) return HDSC_ERR_INVALID_ARGUMENT;
  *role = static_cast<int>(id->role);
  *index = id->index;
  return HDSC_OK;
}

hdsc_status hdsc_node_format(int role, int index, char* buf, size_t buf_len) {
  if (!buf) return HDSC_ERR_INVALID_ARGUMENT;
  hdsc::NodeId id;
  if (!to_node(role, index, id)) return HDSC_ERR_INVALID_ARGUMENT;
  const std::string s = id.str();
  if (buf_len < s.size() + 1) return HDSC_ERR_BUFFER_TOO_SMALL;
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return HDSC_OK;
}

hdsc_status hdsc_code_create(int k, hdsc_code** out) {
  if (!out) return HDSC_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] { *out = new hdsc_code{hdsc::make_code(k)}; });
}

void hdsc_code_destroy(hdsc_code* code) { delete code; }

int hdsc_code_k(const hdsc_code* code) { return code ? code->params.k : 0; }

int hdsc_code_node_symbols(const hdsc_code* code) { return code ? code->params.node_symbols : 0; }

int hdsc_code_file_symbols(const hdsc_code* code) { return code ? code->params.file_symbols() : 0; }

hdsc_status hdsc_encode(const hdsc_code* code, const uint8_t* file, size_t file_len,
                        uint8_t* out, size_t out_len) {
  if (!code || !file || !out) return HDSC_ERR_INVALID_ARGUMENT;
  const size_t n = static_cast<size_t>(code->params.node_symbols);
  if (out_len != (static_cast<size_t>(code->params.k) + 2) * n) return HDSC_ERR_DIMENSION_MISMATCH;
  return guarded([&] {
    const hdsc::gf3::Vec f(file, file + file_len);
    const std::vector<hdsc::NodeContent> nodes = hdsc::encode(code->params, f);
    for (size_t b = 0; b < nodes.size(); ++b)
      std::memcpy(out + b * n, nodes[b].data.data(), n);
  });
}

void hdsc_transcript_destroy(hdsc_transcript* transcript) { delete transcript; }

size_t hdsc_transcript_entries(const hdsc_transcript* transcript) {
  return transcript ? transcript->t.downloads.size() : 0;
}

hdsc_status hdsc_transcript_entry(const hdsc_transcript* transcript, size_t idx,
                                  int* role, int* index, uint64_t* symbols) {
  if (!transcript || !role || !index || !symbols) return HDSC_ERR_INVALID_ARGUMENT;
  if (idx >= transcript->t.downloads.size()) return HDSC_ERR_INDEX_OUT_OF_RANGE;
  const hdsc::Download& d = transcript->t.downloads[idx];
  *role = static_cast<int>(d.source.role);
  *index = d.source.index;
  *symbols = d.payload.size();
  return HDSC_OK;
}

uint64_t hdsc_transcript_total(const hdsc_transcript* transcript) {
  return transcript ? transcript->t.total_symbols() : 0;
}

hdsc_status hdsc_repair_node(const hdsc_code* code, int role, int index,
                             const uint8_t* nodes, size_t nodes_len,
                             uint8_t* out, size_t out_len,
                             hdsc_transcript** transcript) {
  if (!code || !nodes || !out) return HDSC_ERR_INVALID_ARGUMENT;
  hdsc::NodeId target;
  if (!to_node(role, index, target)) return HDSC_ERR_INVALID_ARGUMENT;
  const hdsc::CodeParams& params = code->params;
  const size_t n = static_cast<size_t>(params.node_symbols);
  if (nodes_len != (static_cast<size_t>(params.k) + 2) * n) return HDSC_ERR_DIMENSION_MISMATCH;
  if (out_len != n) return HDSC_ERR_DIMENSION_MISMATCH;
  if (transcript) *transcript = nullptr;

  return guarded([&] {
    std::vector<hdsc::NodeId> ids;
    for (int i = 1; i <= params.k; ++i) ids.push_back(hdsc::NodeId::systematic(i));
    ids.push_back(hdsc::NodeId::parity_a());
    ids.push_back(hdsc::NodeId::parity_b());

    std::vector<hdsc::NodeContent> survivors;
    for (size_t b = 0; b < ids.size(); ++b) {
      if (ids[b] == target) continue;
      survivors.push_back(
          hdsc::NodeContent{ids[b], hdsc::gf3::Vec(nodes + b * n, nodes + (b + 1) * n)});
    }

    hdsc::RepairResult r = target.role == hdsc::Role::Systematic
                               ? hdsc::repair_systematic(params, target.index, survivors)
                               : hdsc::repair_parity(params, target.role, survivors);
    std::memcpy(out, r.restored.data.data(), n);
    if (transcript) *transcript = wrap_transcript(std::move(r.transcript));
  });
}

hdsc_status hdsc_interference_rank(const hdsc_code* code, int i, int j, int* rank) {
  if (!code || !rank) return HDSC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const hdsc::RepairMatrixV v = hdsc::repair_matrix(code->params, i);
    const hdsc::gf3::Matrix vd = v.dense(code->params);
    *rank = static_cast<int>(
        hdsc::gf3::mat_rank(hstack(vd, apply_generator(code->params, j, vd))));
  });
}

hdsc_status hdsc_predicted_rank(int k, int i, int j, int* rank) {
  if (!rank) return HDSC_ERR_INVALID_ARGUMENT;
  return guarded([&] { *rank = hdsc::lattice::predict_rank(i, j, k); });
}

hdsc_status hdsc_repair_bandwidth(const hdsc_code* code, int i, uint64_t* symbols) {
  if (!code || !symbols) return HDSC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const hdsc::RepairMatrixV v = hdsc::repair_matrix(code->params, i);
    *symbols = static_cast<uint64_t>(hdsc::gamma(code->params, i, v));
  });
}

hdsc_status hdsc_lattice_union_size(int k, int delta, int i, int j, int wrap, uint64_t* size) {
  if (!size) return HDSC_ERR_INVALID_ARGUMENT;
  return guarded([&] {
    const hdsc::lattice::LatticeSet base = hdsc::lattice::repair_lattice(i, k, delta);
    const hdsc::lattice::LatticeSet shifted = hdsc::lattice::shift(base, j, wrap != 0);
    *size = hdsc::lattice::union_size(base, shifted);
  });
}

hdsc_status hdsc_hadamard_gram_ok(int k, int* ok) {
  if (!ok) return HDSC_ERR_INVALID_ARGUMENT;
  if (k < 1 || k > 8) return HDSC_ERR_UNSUPPORTED_K;
  return guarded([&] { *ok = hdsc::verify_gram(hdsc::sylvester(k)) ? 1 : 0; });
}

hdsc_status hdsc_lattice_closure_ok(int k, int* ok) {
  if (!ok) return HDSC_ERR_INVALID_ARGUMENT;
  if (k < 1 || k > 8) return HDSC_ERR_UNSUPPORTED_K;
  return guarded([&] {
    *ok = 1;
    for (int i = 1; i <= k && *ok; ++i) {
      const hdsc::lattice::LatticeSet base = hdsc::lattice::repair_lattice(i, k, 2);
      for (int j = 1; j <= k; ++j) {
        if (j == i) continue;
        if (!(hdsc::lattice::shift(base, j, true) == base)) {
          *ok = 0;
          break;
        }
      }
    }
  });
}

hdsc_status hdsc_can_tolerate(const hdsc_code* code, const int* roles, const int* indices,
                              size_t n, int* ok) {
  if (!code || !ok) return HDSC_ERR_INVALID_ARGUMENT;
  std::vector<hdsc::NodeId> failed;
  const hdsc_status st = node_list(roles, indices, n, failed);
  if (st != HDSC_OK) return st;
  return guarded([&] { *ok = hdsc::can_tolerate(code->params, failed) ? 1 : 0; });
}

hdsc_status hdsc_decodability(const hdsc_code* code, const int* roles, const int* indices,
                              size_t n, int* rank, int* deficiency, int* decodable) {
  if (!code || !rank || !deficiency || !decodable) return HDSC_ERR_INVALID_ARGUMENT;
  std::vector<hdsc::NodeId> access;
  const hdsc_status st = node_list(roles, indices, n, access);
  if (st != HDSC_OK) return st;
  return guarded([&] {
    const hdsc::DecodabilityReport r =
        hdsc::decodability(code->params, hdsc::AccessSet::of(access));
    *rank = r.system_rank;
    *deficiency = r.deficiency;
    *decodable = r.decodable ? 1 : 0;
  });
}

hdsc_status hdsc_cluster_create(int k, const uint8_t* bytes, size_t len, const char* dir,
                                hdsc_cluster** out) {
  if (!out || !dir || (len && !bytes)) return HDSC_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] {
    *out = new hdsc_cluster{
        hdsc::Cluster::init(k, std::span<const uint8_t>(bytes, len), dir)};
  });
}

hdsc_status hdsc_cluster_open(const char* dir, hdsc_cluster** out) {
  if (!out || !dir) return HDSC_ERR_INVALID_ARGUMENT;
  *out = nullptr;
  return guarded([&] { *out = new hdsc_cluster{hdsc::Cluster::open(dir)}; });
}

void hdsc_cluster_close(hdsc_cluster* cluster) { delete cluster; }

int hdsc_cluster_k(const hdsc_cluster* cluster) {
  return cluster ? cluster->impl.params().k : 0;
}

size_t hdsc_cluster_chunks(const hdsc_cluster* cluster) {
  return cluster ? cluster->impl.roster().size() : 0;
}

hdsc_status hdsc_cluster_chunk_info(const hdsc_cluster* cluster, size_t idx,
                                    int* role, int* index,
                                    char* filename, size_t filename_len, int* live) {
  if (!cluster || !role || !index || !live) return HDSC_ERR_INVALID_ARGUMENT;
  if (idx >= cluster->impl.roster().size()) return HDSC_ERR_INDEX_OUT_OF_RANGE;
  const hdsc::ChunkInfo& info = cluster->impl.roster()[idx];
  if (filename) {
    if (filename_len < info.filename.size() + 1) return HDSC_ERR_BUFFER_TOO_SMALL;
    std::memcpy(filename, info.filename.c_str(), info.filename.size() + 1);
  }
  *role = static_cast<int>(info.node.role);
  *index = info.node.index;
  *live = info.live ? 1 : 0;
  return HDSC_OK;
}

uint64_t hdsc_cluster_traffic(const hdsc_cluster* cluster) {
  return cluster ? cluster->impl.traffic() : 0;
}

hdsc_status hdsc_cluster_fail(hdsc_cluster* cluster, int role, int index) {
  if (!cluster) return HDSC_ERR_INVALID_ARGUMENT;
  hdsc::NodeId id;
  if (!to_node(role, index, id)) return HDSC_ERR_INVALID_ARGUMENT;
  return guarded([&] { cluster->impl.fail_node(id); });
}

hdsc_status hdsc_cluster_repair(hdsc_cluster* cluster, int role, int index,
                                hdsc_transcript** transcript) {
  if (!cluster) return HDSC_ERR_INVALID_ARGUMENT;
  hdsc::NodeId id;
  if (!to_node(role, index, id)) return HDSC_ERR_INVALID_ARGUMENT;
  if (transcript) *transcript = nullptr;
  return guarded([&] {
    hdsc::RepairTranscript t = cluster->impl.run_repair(id);
    if (transcript) *transcript = wrap_transcript(std::move(t));
  });
}

hdsc_status hdsc_cluster_reconstruct(hdsc_cluster* cluster,
                                     const int* exclude_roles, const int* exclude_indices,
                                     size_t n_exclude, const char* output_path,
                                     uint64_t* symbols_downloaded) {
  if (!cluster || !output_path) return HDSC_ERR_INVALID_ARGUMENT;
  std::vector<hdsc::NodeId> exclude;
  const hdsc_status st = node_list(exclude_roles, exclude_indices, n_exclude, exclude);
  if (st != HDSC_OK) return st;
  return guarded([&] {
    const uint64_t downloaded = cluster->impl.run_reconstruct(exclude, output_path);
    if (symbols_downloaded) *symbols_downloaded = downloaded;
  });
}

}  // extern "C"
