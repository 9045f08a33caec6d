#include "cluster.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>

namespace hdsc {

namespace {

constexpr char kMagic[4] = {'H', 'D', 'S', 'C'};
constexpr std::uint8_t kVersion = 0x01;
constexpr const char* kManifestName = "manifest.txt";
constexpr const char* kLostSuffix = ".lost";

void put_be(std::string& out, std::uint64_t v, int bytes) {
  for (int b = bytes - 1; b >= 0; --b) out.push_back(static_cast<char>((v >> (8 * b)) & 0xff));
}

std::uint64_t get_be(const std::string& in, std::size_t at, int bytes) {
  std::uint64_t v = 0;
  for (int b = 0; b < bytes; ++b) v = (v << 8) | static_cast<std::uint8_t>(in[at + b]);
  return v;
}

std::string role_token(Role r) {
  switch (r) {
    case Role::Systematic:
      return "s";
    case Role::ParityA:
      return "pa";
    case Role::ParityB:
      return "pb";
  }
  return "?";
}

std::string default_filename(const NodeId& id) {
  return id.role == Role::Systematic ? "s" + std::to_string(id.index) + ".chunk"
                                     : role_token(id.role) + ".chunk";
}

std::string strip_lost(const std::string& name) {
  const std::string suffix = kLostSuffix;
  if (name.size() > suffix.size() && name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0)
    return name.substr(0, name.size() - suffix.size());
  return name;
}

}  // namespace

std::vector<std::uint8_t> bytes_to_trits(std::span<const std::uint8_t> bytes) {
  std::vector<std::uint8_t> out;
  out.reserve(bytes.size() * 6);
  for (std::uint8_t b : bytes) {
    for (int d = 5; d >= 0; --d) {
      static const int pow3[6] = {1, 3, 9, 27, 81, 243};
      out.push_back(static_cast<std::uint8_t>((b / pow3[d]) % 3));
    }
  }
  return out;
}

std::vector<std::uint8_t> trits_to_bytes(std::span<const std::uint8_t> trits,
                                         std::uint64_t byte_length) {
  if (trits.size() < byte_length * 6)
    fail(Errc::dimension_mismatch, "trit stream shorter than the recorded byte length");
  std::vector<std::uint8_t> out;
  out.reserve(byte_length);
  for (std::uint64_t i = 0; i < byte_length; ++i) {
    unsigned v = 0;
    for (int d = 0; d < 6; ++d) v = v * 3 + trits[i * 6 + d];
    if (v > 0xff) fail(Errc::corrupt_chunk, "trit group does not encode a byte");
    out.push_back(static_cast<std::uint8_t>(v));
  }
  return out;
}

void write_chunk_file(const std::filesystem::path& path, int k, const NodeId& node,
                      const gf3::Vec& payload) {
  std::string blob;
  blob.reserve(17 + payload.size() + 4);
  blob.append(kMagic, 4);
  blob.push_back(static_cast<char>(kVersion));
  blob.push_back(static_cast<char>(k));
  blob.push_back(static_cast<char>(node.role));
  put_be(blob, static_cast<std::uint64_t>(node.role == Role::Systematic ? node.index : 0), 2);
  put_be(blob, payload.size(), 8);
  std::uint32_t checksum = 0;
  for (gf3::Sym s : payload) {
    blob.push_back(static_cast<char>(s));
    checksum += s;
  }
  put_be(blob, checksum, 4);

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f || !f.write(blob.data(), static_cast<std::streamsize>(blob.size())))
    fail(Errc::io_error, "cannot write chunk " + path.string());
}

gf3::Vec read_chunk_file(const std::filesystem::path& path, int expect_k,
                         const NodeId& expect_node) {
  std::ifstream f(path, std::ios::binary);
  if (!f) fail(Errc::io_error, "cannot open chunk " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  const std::string blob = ss.str();

  if (blob.size() < 21) fail(Errc::corrupt_chunk, "chunk truncated: " + path.string());
  if (blob.compare(0, 4, kMagic, 4) != 0) fail(Errc::corrupt_chunk, "bad magic: " + path.string());
  if (static_cast<std::uint8_t>(blob[4]) != kVersion)
    fail(Errc::corrupt_chunk, "unknown chunk version: " + path.string());
  if (blob[5] != static_cast<char>(expect_k))
    fail(Errc::corrupt_chunk, "chunk k disagrees with manifest: " + path.string());
  if (blob[6] != static_cast<char>(expect_node.role))
    fail(Errc::corrupt_chunk, "chunk role disagrees with manifest: " + path.string());
  const int index = static_cast<int>(get_be(blob, 7, 2));
  const int expect_index = expect_node.role == Role::Systematic ? expect_node.index : 0;
  if (index != expect_index)
    fail(Errc::corrupt_chunk, "chunk index disagrees with manifest: " + path.string());

  const std::uint64_t len = get_be(blob, 9, 8);
  if (blob.size() != 17 + len + 4) fail(Errc::corrupt_chunk, "chunk length mismatch: " + path.string());

  gf3::Vec payload(len);
  std::uint32_t checksum = 0;
  for (std::uint64_t t = 0; t < len; ++t) {
    const std::uint8_t s = static_cast<std::uint8_t>(blob[17 + t]);
    if (s > 2) fail(Errc::corrupt_chunk, "chunk payload byte out of range: " + path.string());
    payload[t] = s;
    checksum += s;
  }
  if (checksum != static_cast<std::uint32_t>(get_be(blob, 17 + len, 4)))
    fail(Errc::corrupt_chunk, "chunk checksum mismatch: " + path.string());
  return payload;
}

Cluster Cluster::init(int k, std::span<const std::uint8_t> bytes,
                      const std::filesystem::path& dir) {
  Cluster c;
  c.params_ = make_code(k);
  c.dir_ = dir;
  c.byte_length_ = bytes.size();

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) fail(Errc::io_error, "cannot create directory " + dir.string());
  if (std::filesystem::exists(dir / kManifestName))
    fail(Errc::io_error, "directory already holds a cluster: " + dir.string());

  std::vector<std::uint8_t> trits = bytes_to_trits(bytes);
  const std::size_t stripe_symbols = static_cast<std::size_t>(c.params_.file_symbols());
  c.stripes_ = static_cast<int>(std::max<std::size_t>(
      1, (trits.size() + stripe_symbols - 1) / stripe_symbols));
  trits.resize(static_cast<std::size_t>(c.stripes_) * stripe_symbols, 0);

  const int n = c.params_.node_symbols;
  std::vector<gf3::Vec> payloads(static_cast<std::size_t>(k) + 2);
  for (auto& p : payloads) p.reserve(static_cast<std::size_t>(c.stripes_) * n);
  for (int s = 0; s < c.stripes_; ++s) {
    const gf3::Vec stripe(trits.begin() + static_cast<std::ptrdiff_t>(s) * stripe_symbols,
                          trits.begin() + static_cast<std::ptrdiff_t>(s + 1) * stripe_symbols);
    const std::vector<NodeContent> encoded = encode(c.params_, stripe);
    for (std::size_t node = 0; node < encoded.size(); ++node)
      payloads[node].insert(payloads[node].end(), encoded[node].data.begin(),
                            encoded[node].data.end());
  }

  std::vector<NodeId> ids;
  for (int i = 1; i <= k; ++i) ids.push_back(NodeId::systematic(i));
  ids.push_back(NodeId::parity_a());
  ids.push_back(NodeId::parity_b());
  for (std::size_t node = 0; node < ids.size(); ++node) {
    const std::string name = default_filename(ids[node]);
    write_chunk_file(dir / name, k, ids[node], payloads[node]);
    c.roster_.push_back(ChunkInfo{ids[node], name, true});
  }
  c.write_manifest();
  return c;
}

void Cluster::write_manifest() const {
  std::ofstream f(dir_ / kManifestName, std::ios::trunc);
  if (!f) fail(Errc::io_error, "cannot write manifest in " + dir_.string());
  f << "k=" << params_.k << "\n";
  f << "byte_length=" << byte_length_ << "\n";
  f << "stripes=" << stripes_ << "\n";
  f << "traffic=" << traffic_ << "\n";
  for (const ChunkInfo& info : roster_)
    f << "chunk=" << role_token(info.node.role) << ":" << info.node.index << ":" << info.filename
      << ":" << (info.live ? "live" : "failed") << "\n";
  if (!f) fail(Errc::io_error, "cannot write manifest in " + dir_.string());
}

Cluster Cluster::open(const std::filesystem::path& dir) {
  std::ifstream f(dir / kManifestName);
  if (!f) fail(Errc::io_error, "no cluster manifest in " + dir.string());

  Cluster c;
  c.dir_ = dir;
  int k = -1;
  std::string line;
  const auto bad = [&](const std::string& why) { fail(Errc::io_error, "manifest: " + why); };
  const auto number = [&](const std::string& s) -> std::uint64_t {
    if (s.empty() || s.size() > 19) bad("bad number: " + s);
    std::uint64_t v = 0;
    for (char ch : s) {
      if (ch < '0' || ch > '9') bad("bad number: " + s);
      v = v * 10 + static_cast<std::uint64_t>(ch - '0');
    }
    return v;
  };
  while (std::getline(f, line)) {
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) bad("line without '=': " + line);
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    if (key == "k") {
      k = static_cast<int>(number(value));
      c.params_ = make_code(k);
    } else if (key == "byte_length") {
      c.byte_length_ = number(value);
    } else if (key == "stripes") {
      c.stripes_ = static_cast<int>(number(value));
    } else if (key == "traffic") {
      c.traffic_ = number(value);
    } else if (key == "chunk") {
      std::vector<std::string> parts;
      std::stringstream ss(value);
      std::string part;
      while (std::getline(ss, part, ':')) parts.push_back(part);
      if (parts.size() != 4) bad("malformed chunk line: " + line);
      NodeId id;
      if (parts[0] == "s")
        id = NodeId::systematic(static_cast<int>(number(parts[1])));
      else if (parts[0] == "pa")
        id = NodeId::parity_a();
      else if (parts[0] == "pb")
        id = NodeId::parity_b();
      else
        bad("unknown role: " + parts[0]);
      if (parts[3] != "live" && parts[3] != "failed") bad("unknown status: " + parts[3]);
      c.roster_.push_back(ChunkInfo{id, parts[2], parts[3] == "live"});
    } else {
      bad("unknown key: " + key);
    }
  }
  if (k < 0 || c.stripes_ < 1 || c.roster_.size() != static_cast<std::size_t>(k) + 2)
    bad("incomplete manifest");
  for (const ChunkInfo& info : c.roster_)
    if (info.live && !std::filesystem::exists(dir / info.filename))
      fail(Errc::io_error, "live chunk missing on disk: " + info.filename);
  return c;
}

ChunkInfo& Cluster::chunk(const NodeId& id) {
  for (ChunkInfo& info : roster_)
    if (info.node == id) return info;
  fail(Errc::unknown_node, "no node " + id.str() + " in this cluster");
}

const ChunkInfo& Cluster::chunk(const NodeId& id) const {
  return const_cast<Cluster*>(this)->chunk(id);
}

gf3::Vec Cluster::read_payload(const ChunkInfo& info) const {
  gf3::Vec payload = read_chunk_file(dir_ / info.filename, params_.k, info.node);
  if (payload.size() != static_cast<std::size_t>(stripes_) * params_.node_symbols)
    fail(Errc::corrupt_chunk, "chunk payload length disagrees with manifest: " + info.filename);
  return payload;
}

void Cluster::fail_node(const NodeId& id) {
  ChunkInfo& info = chunk(id);
  if (!info.live) fail(Errc::already_failed, "node " + id.str() + " is already failed");
  const std::string lost = info.filename + kLostSuffix;
  std::error_code ec;
  std::filesystem::rename(dir_ / info.filename, dir_ / lost, ec);
  if (ec) fail(Errc::io_error, "cannot rename chunk for " + id.str());
  info.filename = lost;
  info.live = false;
  write_manifest();
}

RepairTranscript Cluster::run_repair(const NodeId& id) {
  ChunkInfo& info = chunk(id);
  if (info.live) fail(Errc::invalid_argument, "node " + id.str() + " is live");

  std::vector<NodeId> failed;
  for (const ChunkInfo& c : roster_)
    if (!c.live) failed.push_back(c.node);
  if (!can_tolerate(params_, failed))
    fail(Errc::intolerable, "failure set is beyond the tolerance of the code");

  const int n = params_.node_symbols;
  std::vector<std::pair<NodeId, gf3::Vec>> survivor_payloads;
  for (const ChunkInfo& c : roster_)
    if (c.live) survivor_payloads.emplace_back(c.node, read_payload(c));

  gf3::Vec restored_payload;
  restored_payload.reserve(static_cast<std::size_t>(stripes_) * n);
  RepairTranscript merged{id, {}};
  std::map<NodeId, std::size_t> slot;

  const auto merge = [&](const RepairTranscript& t) {
    for (const Download& d : t.downloads) {
      auto [it, fresh] = slot.try_emplace(d.source, merged.downloads.size());
      if (fresh) merged.downloads.push_back(Download{d.source, {}});
      gf3::Vec& payload = merged.downloads[it->second].payload;
      payload.insert(payload.end(), d.payload.begin(), d.payload.end());
    }
  };

  for (int s = 0; s < stripes_; ++s) {
    std::vector<NodeContent> survivors;
    survivors.reserve(survivor_payloads.size());
    for (const auto& [node, payload] : survivor_payloads)
      survivors.push_back(NodeContent{
          node, gf3::Vec(payload.begin() + static_cast<std::ptrdiff_t>(s) * n,
                         payload.begin() + static_cast<std::ptrdiff_t>(s + 1) * n)});

    if (failed.size() == 1) {
      RepairResult r = id.role == Role::Systematic
                           ? repair_systematic(params_, id.index, survivors)
                           : repair_parity(params_, id.role, survivors);
      restored_payload.insert(restored_payload.end(), r.restored.data.begin(),
                              r.restored.data.end());
      merge(r.transcript);
    } else {
      // A second node is down as well: the bandwidth-optimal projections
      // need every other node, so fall back to full-block decoding.
      std::vector<NodeContent> recovered = recover_failures(params_, failed, survivors);
      const NodeContent* mine = find_node(recovered, id);
      if (!mine) fail(Errc::internal, "recovery did not produce the requested node");
      restored_payload.insert(restored_payload.end(), mine->data.begin(), mine->data.end());
      RepairTranscript t{id, {}};
      for (const NodeContent& s2 : survivors) t.downloads.push_back(Download{s2.node, s2.data});
      merge(t);
    }
  }

  const std::string original = strip_lost(info.filename);
  write_chunk_file(dir_ / original, params_.k, id, restored_payload);
  std::error_code ec;
  std::filesystem::remove(dir_ / info.filename, ec);
  info.filename = original;
  info.live = true;
  traffic_ += merged.total_symbols();
  write_manifest();
  return merged;
}

std::uint64_t Cluster::run_reconstruct(std::span<const NodeId> exclude,
                                       const std::filesystem::path& output) {
  std::vector<NodeId> excluded(exclude.begin(), exclude.end());
  std::sort(excluded.begin(), excluded.end());
  excluded.erase(std::unique(excluded.begin(), excluded.end()), excluded.end());
  for (const NodeId& id : excluded) chunk(id);  // unknown_node on typos

  const auto is_excluded = [&](const NodeId& id) {
    return std::binary_search(excluded.begin(), excluded.end(), id);
  };

  const int n = params_.node_symbols;
  std::vector<const ChunkInfo*> access;
  int live_systematics = 0;
  for (const ChunkInfo& info : roster_) {
    if (!info.live || is_excluded(info.node)) continue;
    if (info.node.role == Role::Systematic) {
      access.push_back(&info);
      ++live_systematics;
    }
  }

  std::vector<const ChunkInfo*> extras;
  if (live_systematics < params_.k) {
    // Top up with parities until the system closes, then fall back to the
    // guaranteed extra half block from excluded-but-live nodes.
    std::vector<NodeId> ids;
    for (const ChunkInfo* info : access) ids.push_back(info->node);
    DecodabilityReport report = decodability(params_, AccessSet::of(ids));
    for (const NodeId pid : {NodeId::parity_a(), NodeId::parity_b()}) {
      if (report.decodable) break;
      const ChunkInfo& info = chunk(pid);
      if (!info.live || is_excluded(pid)) continue;
      access.push_back(&info);
      ids.push_back(pid);
      report = decodability(params_, AccessSet::of(ids));
    }
    if (!report.decodable) {
      if (report.deficiency > n / 2)
        fail(Errc::insufficient_access,
             "exclusion leaves more than the guaranteed extra half block to recover");
      for (const ChunkInfo& info : roster_)
        if (info.live && is_excluded(info.node)) extras.push_back(&info);
      if (extras.empty())
        fail(Errc::insufficient_access, "no source left for the rank-completing symbols");
    }
  }

  std::vector<std::pair<const ChunkInfo*, gf3::Vec>> access_payloads, extra_payloads;
  for (const ChunkInfo* info : access) access_payloads.emplace_back(info, read_payload(*info));
  for (const ChunkInfo* info : extras) extra_payloads.emplace_back(info, read_payload(*info));

  std::vector<std::uint8_t> trits;
  trits.reserve(static_cast<std::size_t>(stripes_) * params_.file_symbols());
  std::uint64_t downloaded = 0;
  for (int s = 0; s < stripes_; ++s) {
    const auto slice = [&](const gf3::Vec& payload) {
      return gf3::Vec(payload.begin() + static_cast<std::ptrdiff_t>(s) * n,
                      payload.begin() + static_cast<std::ptrdiff_t>(s + 1) * n);
    };
    std::vector<NodeContent> accessed, extra_contents;
    for (const auto& [info, payload] : access_payloads)
      accessed.push_back(NodeContent{info->node, slice(payload)});
    for (const auto& [info, payload] : extra_payloads)
      extra_contents.push_back(NodeContent{info->node, slice(payload)});

    ReconstructResult r = reconstruct_file(params_, accessed, extra_contents);
    downloaded += r.downloaded_symbols;
    trits.insert(trits.end(), r.file.begin(), r.file.end());
  }

  const std::vector<std::uint8_t> bytes = trits_to_bytes(trits, byte_length_);
  std::ofstream f(output, std::ios::binary | std::ios::trunc);
  if (!f ||
      !f.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size())))
    fail(Errc::io_error, "cannot write output " + output.string());
  return downloaded;
}

}  // namespace hdsc
