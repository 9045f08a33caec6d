// Exercises the shared library through the C header only.
#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"
#include "hdsc.h"

#include <cstdint>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;

  explicit TempDir(const std::string& tag)
      : path(fs::temp_directory_path() / ("hdsc_capi_" + tag)) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  TempDir(const TempDir&) = delete;
  TempDir& operator=(const TempDir&) = delete;
};

struct Code {
  hdsc_code* ptr = nullptr;

  explicit Code(int k) { REQUIRE(hdsc_code_create(k, &ptr) == HDSC_OK); }
  ~Code() { hdsc_code_destroy(ptr); }
  Code(const Code&) = delete;
  Code& operator=(const Code&) = delete;
};

std::vector<std::uint8_t> encode_all(const Code& code, const std::vector<std::uint8_t>& file) {
  const auto k = static_cast<std::size_t>(hdsc_code_k(code.ptr));
  const auto n = static_cast<std::size_t>(hdsc_code_node_symbols(code.ptr));
  std::vector<std::uint8_t> nodes((k + 2) * n, 0);
  REQUIRE(hdsc_encode(code.ptr, file.data(), file.size(), nodes.data(), nodes.size()) ==
          HDSC_OK);
  return nodes;
}

}  // namespace

TEST_CASE("status strings and version") {
  CHECK(std::string(hdsc_status_string(HDSC_OK)) == "ok");
  CHECK(std::string(hdsc_status_string(HDSC_ERR_UNSUPPORTED_K)) == "unsupported k");
  CHECK(std::string(hdsc_status_string(HDSC_ERR_INTOLERABLE)) ==
        "failure set beyond code tolerance");
  CHECK(std::string(hdsc_status_string(HDSC_ERR_BUFFER_TOO_SMALL)) == "buffer too small");
  CHECK(hdsc_status_string(static_cast<hdsc_status>(999)) != nullptr);
  CHECK(std::string(hdsc_version()) == "1.0.0");
}

TEST_CASE("node specs parse and format") {
  int role = -1, index = -1;
  CHECK(hdsc_node_parse("s3", &role, &index) == HDSC_OK);
  CHECK(role == HDSC_ROLE_SYSTEMATIC);
  CHECK(index == 3);
  CHECK(hdsc_node_parse("PA", &role, &index) == HDSC_OK);
  CHECK(role == HDSC_ROLE_PARITY_A);
  CHECK(index == 0);
  CHECK(hdsc_node_parse("pb", &role, &index) == HDSC_OK);
  CHECK(role == HDSC_ROLE_PARITY_B);

  CHECK(hdsc_node_parse("node1", &role, &index) == HDSC_ERR_INVALID_ARGUMENT);
  CHECK(hdsc_node_parse("s0", &role, &index) == HDSC_ERR_INVALID_ARGUMENT);
  CHECK(hdsc_node_parse(nullptr, &role, &index) == HDSC_ERR_INVALID_ARGUMENT);

  char buf[8];
  CHECK(hdsc_node_format(HDSC_ROLE_SYSTEMATIC, 12, buf, sizeof buf) == HDSC_OK);
  CHECK(std::string(buf) == "s12");
  CHECK(hdsc_node_format(HDSC_ROLE_PARITY_B, 0, buf, sizeof buf) == HDSC_OK);
  CHECK(std::string(buf) == "pb");
  CHECK(hdsc_node_format(HDSC_ROLE_SYSTEMATIC, 12, buf, 3) == HDSC_ERR_BUFFER_TOO_SMALL);
  CHECK(hdsc_node_format(7, 0, buf, sizeof buf) == HDSC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("code lifecycle and dimensions") {
  Code code(3);
  CHECK(hdsc_code_k(code.ptr) == 3);
  CHECK(hdsc_code_node_symbols(code.ptr) == 8);
  CHECK(hdsc_code_file_symbols(code.ptr) == 24);

  hdsc_code* bad = nullptr;
  CHECK(hdsc_code_create(0, &bad) == HDSC_ERR_UNSUPPORTED_K);
  CHECK(hdsc_code_create(17, &bad) == HDSC_ERR_UNSUPPORTED_K);
  CHECK(hdsc_code_create(3, nullptr) == HDSC_ERR_INVALID_ARGUMENT);
  hdsc_code_destroy(nullptr);  // must be a no-op
}

TEST_CASE("encode writes systematic blocks then parities") {
  Code code(2);
  std::vector<std::uint8_t> file{1, 0, 0, 0, 0, 0, 0, 0};
  const auto nodes = encode_all(code, file);
  const std::vector<std::uint8_t> expected{1, 0, 0, 0, 0, 0, 0, 0,
                                           1, 0, 0, 0, 1, 0, 0, 0};
  CHECK(nodes == expected);

  std::vector<std::uint8_t> out(16, 0);
  CHECK(hdsc_encode(code.ptr, file.data(), 7, out.data(), out.size()) ==
        HDSC_ERR_DIMENSION_MISMATCH);
  CHECK(hdsc_encode(code.ptr, file.data(), file.size(), out.data(), 15) ==
        HDSC_ERR_DIMENSION_MISMATCH);
  file[0] = 3;
  CHECK(hdsc_encode(code.ptr, file.data(), file.size(), out.data(), out.size()) ==
        HDSC_ERR_INVALID_ARGUMENT);
}

TEST_CASE("repair reads everything except the target block") {
  std::mt19937 rng(71);
  Code code(3);
  std::vector<std::uint8_t> file(24);
  for (auto& s : file) s = static_cast<std::uint8_t>(rng() % 3);
  auto nodes = encode_all(code, file);

  const std::vector<std::uint8_t> target(nodes.begin() + 8, nodes.begin() + 16);
  std::fill(nodes.begin() + 8, nodes.begin() + 16, 0xAA);  // poison s2's block

  std::vector<std::uint8_t> out(8, 0);
  hdsc_transcript* t = nullptr;
  REQUIRE(hdsc_repair_node(code.ptr, HDSC_ROLE_SYSTEMATIC, 2, nodes.data(), nodes.size(),
                           out.data(), out.size(), &t) == HDSC_OK);
  CHECK(out == target);
  REQUIRE(t != nullptr);
  CHECK(hdsc_transcript_total(t) == 16);
  REQUIRE(hdsc_transcript_entries(t) == 4);

  int role = -1, index = -1;
  std::uint64_t symbols = 0;
  CHECK(hdsc_transcript_entry(t, 0, &role, &index, &symbols) == HDSC_OK);
  CHECK(role == HDSC_ROLE_PARITY_A);
  CHECK(symbols == 4);
  CHECK(hdsc_transcript_entry(t, 3, &role, &index, &symbols) == HDSC_OK);
  CHECK(role == HDSC_ROLE_SYSTEMATIC);
  CHECK(index == 3);
  CHECK(hdsc_transcript_entry(t, 4, &role, &index, &symbols) ==
        HDSC_ERR_INDEX_OUT_OF_RANGE);
  hdsc_transcript_destroy(t);

  // transcript pointer is optional, parity targets work too
  std::copy(target.begin(), target.end(), nodes.begin() + 8);
  const std::vector<std::uint8_t> pa(nodes.begin() + 24, nodes.begin() + 32);
  std::fill(nodes.begin() + 24, nodes.begin() + 32, 0xAA);
  REQUIRE(hdsc_repair_node(code.ptr, HDSC_ROLE_PARITY_A, 0, nodes.data(), nodes.size(),
                           out.data(), out.size(), nullptr) == HDSC_OK);
  CHECK(out == pa);
  CHECK(std::all_of(nodes.begin() + 24, nodes.begin() + 32,
                    [](std::uint8_t b) { return b == 0xAA; }));  // input untouched

  CHECK(hdsc_repair_node(code.ptr, HDSC_ROLE_SYSTEMATIC, 2, nodes.data(), 10, out.data(),
                         out.size(), nullptr) == HDSC_ERR_DIMENSION_MISMATCH);
  CHECK(hdsc_repair_node(code.ptr, HDSC_ROLE_SYSTEMATIC, 9, nodes.data(), nodes.size(),
                         out.data(), out.size(), nullptr) == HDSC_ERR_INDEX_OUT_OF_RANGE);
}

TEST_CASE("analysis entry points") {
  Code code(3);
  int rank = 0;
  CHECK(hdsc_interference_rank(code.ptr, 1, 1, &rank) == HDSC_OK);
  CHECK(rank == 8);
  CHECK(hdsc_interference_rank(code.ptr, 1, 2, &rank) == HDSC_OK);
  CHECK(rank == 4);
  CHECK(hdsc_predicted_rank(3, 1, 2, &rank) == HDSC_OK);
  CHECK(rank == 4);
  CHECK(hdsc_predicted_rank(3, 2, 2, &rank) == HDSC_OK);
  CHECK(rank == 8);
  CHECK(hdsc_predicted_rank(17, 1, 2, &rank) == HDSC_ERR_UNSUPPORTED_K);

  std::uint64_t symbols = 0;
  CHECK(hdsc_repair_bandwidth(code.ptr, 2, &symbols) == HDSC_OK);
  CHECK(symbols == 16);
  CHECK(hdsc_repair_bandwidth(code.ptr, 4, &symbols) == HDSC_ERR_INDEX_OUT_OF_RANGE);

  std::uint64_t size = 0;
  CHECK(hdsc_lattice_union_size(3, 2, 1, 2, /*wrap=*/0, &size) == HDSC_OK);
  CHECK(size == 6);  // slab of 4 points grows by half when unwrapped
  CHECK(hdsc_lattice_union_size(3, 2, 1, 2, /*wrap=*/1, &size) == HDSC_OK);
  CHECK(size == 4);  // wrapped shifts fix the lattice
  CHECK(hdsc_lattice_union_size(3, 1, 1, 2, 0, &size) == HDSC_ERR_INVALID_ARGUMENT);

  int ok = 0;
  CHECK(hdsc_hadamard_gram_ok(3, &ok) == HDSC_OK);
  CHECK(ok == 1);
  CHECK(hdsc_lattice_closure_ok(3, &ok) == HDSC_OK);
  CHECK(ok == 1);
  CHECK(hdsc_hadamard_gram_ok(9, &ok) == HDSC_ERR_UNSUPPORTED_K);
  CHECK(hdsc_lattice_closure_ok(0, &ok) == HDSC_ERR_UNSUPPORTED_K);
}

TEST_CASE("tolerance and decodability") {
  Code code(3);
  int ok = -1;
  {
    const int roles[] = {HDSC_ROLE_SYSTEMATIC, HDSC_ROLE_PARITY_A};
    const int indices[] = {1, 0};
    CHECK(hdsc_can_tolerate(code.ptr, roles, indices, 2, &ok) == HDSC_OK);
    CHECK(ok == 1);
  }
  {
    const int roles[] = {HDSC_ROLE_SYSTEMATIC, HDSC_ROLE_SYSTEMATIC};
    const int indices[] = {1, 2};
    CHECK(hdsc_can_tolerate(code.ptr, roles, indices, 2, &ok) == HDSC_OK);
    CHECK(ok == 0);
  }
  CHECK(hdsc_can_tolerate(code.ptr, nullptr, nullptr, 0, &ok) == HDSC_OK);
  CHECK(ok == 1);

  const int roles[] = {HDSC_ROLE_SYSTEMATIC, HDSC_ROLE_PARITY_A, HDSC_ROLE_PARITY_B};
  const int indices[] = {1, 0, 0};
  int rank = 0, deficiency = 0, decodable = -1;
  CHECK(hdsc_decodability(code.ptr, roles, indices, 3, &rank, &deficiency, &decodable) ==
        HDSC_OK);
  CHECK(rank == 20);
  CHECK(deficiency == 4);
  CHECK(decodable == 0);
}

TEST_CASE("cluster flow through the C interface") {
  std::mt19937 rng(72);
  TempDir tmp("flow");
  std::vector<std::uint8_t> bytes(4);
  for (auto& b : bytes) b = static_cast<std::uint8_t>(rng());

  hdsc_cluster* cluster = nullptr;
  REQUIRE(hdsc_cluster_create(3, bytes.data(), bytes.size(), tmp.path.c_str(), &cluster) ==
          HDSC_OK);
  CHECK(hdsc_cluster_k(cluster) == 3);
  CHECK(hdsc_cluster_chunks(cluster) == 5);
  CHECK(hdsc_cluster_traffic(cluster) == 0);

  int role = -1, index = -1, live = 0;
  char name[32];
  REQUIRE(hdsc_cluster_chunk_info(cluster, 1, &role, &index, name, sizeof name, &live) ==
          HDSC_OK);
  CHECK(role == HDSC_ROLE_SYSTEMATIC);
  CHECK(index == 2);
  CHECK(std::string(name) == "s2.chunk");
  CHECK(live == 1);
  CHECK(hdsc_cluster_chunk_info(cluster, 1, &role, &index, name, 3, &live) ==
        HDSC_ERR_BUFFER_TOO_SMALL);
  CHECK(hdsc_cluster_chunk_info(cluster, 9, &role, &index, name, sizeof name, &live) ==
        HDSC_ERR_INDEX_OUT_OF_RANGE);

  CHECK(hdsc_cluster_fail(cluster, HDSC_ROLE_SYSTEMATIC, 2) == HDSC_OK);
  CHECK(hdsc_cluster_fail(cluster, HDSC_ROLE_SYSTEMATIC, 2) == HDSC_ERR_ALREADY_FAILED);
  CHECK(hdsc_cluster_fail(cluster, HDSC_ROLE_SYSTEMATIC, 7) == HDSC_ERR_UNKNOWN_NODE);

  hdsc_transcript* t = nullptr;
  REQUIRE(hdsc_cluster_repair(cluster, HDSC_ROLE_SYSTEMATIC, 2, &t) == HDSC_OK);
  CHECK(hdsc_transcript_total(t) == 16);
  hdsc_transcript_destroy(t);
  CHECK(hdsc_cluster_traffic(cluster) == 16);

  const fs::path out = tmp.path / "out.bin";
  std::uint64_t downloaded = 0;
  REQUIRE(hdsc_cluster_reconstruct(cluster, nullptr, nullptr, 0, out.c_str(), &downloaded) ==
          HDSC_OK);
  CHECK(downloaded == 24);
  std::ifstream f(out, std::ios::binary);
  const std::vector<std::uint8_t> round((std::istreambuf_iterator<char>(f)),
                                        std::istreambuf_iterator<char>());
  CHECK(round == bytes);

  {
    const int ex_roles[] = {HDSC_ROLE_SYSTEMATIC, HDSC_ROLE_SYSTEMATIC};
    const int ex_indices[] = {2, 3};
    REQUIRE(hdsc_cluster_reconstruct(cluster, ex_roles, ex_indices, 2, out.c_str(),
                                     &downloaded) == HDSC_OK);
    CHECK(downloaded == 28);
  }
  {
    const int ex_roles[] = {HDSC_ROLE_SYSTEMATIC, HDSC_ROLE_SYSTEMATIC,
                            HDSC_ROLE_SYSTEMATIC};
    const int ex_indices[] = {1, 2, 3};
    CHECK(hdsc_cluster_reconstruct(cluster, ex_roles, ex_indices, 3, out.c_str(),
                                   &downloaded) == HDSC_ERR_INSUFFICIENT_ACCESS);
  }

  hdsc_cluster_close(cluster);

  hdsc_cluster* reopened = nullptr;
  REQUIRE(hdsc_cluster_open(tmp.path.c_str(), &reopened) == HDSC_OK);
  CHECK(hdsc_cluster_traffic(reopened) == 16);
  hdsc_cluster_close(reopened);

  hdsc_cluster* missing = nullptr;
  CHECK(hdsc_cluster_open((tmp.path / "nowhere").c_str(), &missing) == HDSC_ERR_IO);
}
