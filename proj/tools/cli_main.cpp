#include <cinttypes>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hdsc.h"

// Exit codes: 0 success, 1 domain error, 2 usage error.

namespace {

int fail_with(hdsc_status status) {
  std::cerr << "error: " << hdsc_status_string(status) << "\n";
  return 1;
}

std::string node_name(int role, int index) {
  char buf[16];
  if (hdsc_node_format(role, index, buf, sizeof buf) != HDSC_OK) return "?";
  return buf;
}

// Grammar check only; whether the node exists in a cluster is decided later.
const CLI::Validator node_spec_validator(
    [](std::string& s) -> std::string {
      int role = 0, index = 0;
      if (hdsc_node_parse(s.c_str(), &role, &index) != HDSC_OK)
        return "invalid node spec '" + s + "' (want s<i>, pa or pb)";
      return {};
    },
    "NODE", "node spec");

struct OpenCluster {
  hdsc_cluster* handle = nullptr;
  ~OpenCluster() { hdsc_cluster_close(handle); }
};

int run_encode(int k, const std::string& input, const std::string& outdir) {
  std::ifstream in(input, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read " << input << "\n";
    return 1;
  }
  std::vector<std::uint8_t> bytes{std::istreambuf_iterator<char>(in),
                                  std::istreambuf_iterator<char>()};
  if (in.bad()) {
    std::cerr << "error: cannot read " << input << "\n";
    return 1;
  }

  OpenCluster cluster;
  if (const hdsc_status st =
          hdsc_cluster_create(k, bytes.data(), bytes.size(), outdir.c_str(), &cluster.handle);
      st != HDSC_OK)
    return fail_with(st);

  for (size_t idx = 0; idx < hdsc_cluster_chunks(cluster.handle); ++idx) {
    int role = 0, index = 0, live = 0;
    char filename[256];
    if (const hdsc_status st = hdsc_cluster_chunk_info(cluster.handle, idx, &role, &index,
                                                       filename, sizeof filename, &live);
        st != HDSC_OK)
      return fail_with(st);
    std::cout << node_name(role, index) << "\t" << filename << "\t"
              << (live ? "live" : "failed") << "\n";
  }
  return 0;
}

int run_fail(const std::string& dir, const std::string& node) {
  int role = 0, index = 0;
  hdsc_node_parse(node.c_str(), &role, &index);
  OpenCluster cluster;
  if (const hdsc_status st = hdsc_cluster_open(dir.c_str(), &cluster.handle); st != HDSC_OK)
    return fail_with(st);
  if (const hdsc_status st = hdsc_cluster_fail(cluster.handle, role, index); st != HDSC_OK)
    return fail_with(st);
  return 0;
}

int run_repair(const std::string& dir, const std::string& node, bool report) {
  int role = 0, index = 0;
  hdsc_node_parse(node.c_str(), &role, &index);
  OpenCluster cluster;
  if (const hdsc_status st = hdsc_cluster_open(dir.c_str(), &cluster.handle); st != HDSC_OK)
    return fail_with(st);

  hdsc_transcript* transcript = nullptr;
  if (const hdsc_status st = hdsc_cluster_repair(cluster.handle, role, index, &transcript);
      st != HDSC_OK)
    return fail_with(st);

  if (report) {
    for (size_t i = 0; i < hdsc_transcript_entries(transcript); ++i) {
      int src_role = 0, src_index = 0;
      std::uint64_t symbols = 0;
      hdsc_transcript_entry(transcript, i, &src_role, &src_index, &symbols);
      std::cout << "source=" << node_name(src_role, src_index) << " symbols=" << symbols
                << "\n";
    }
    std::cout << "total=" << hdsc_transcript_total(transcript) << "\n";
  }
  hdsc_transcript_destroy(transcript);
  return 0;
}

int run_reconstruct(const std::string& dir, const std::vector<std::string>& exclude,
                    const std::string& output) {
  std::vector<int> roles(exclude.size()), indices(exclude.size());
  for (size_t i = 0; i < exclude.size(); ++i)
    hdsc_node_parse(exclude[i].c_str(), &roles[i], &indices[i]);

  OpenCluster cluster;
  if (const hdsc_status st = hdsc_cluster_open(dir.c_str(), &cluster.handle); st != HDSC_OK)
    return fail_with(st);

  std::uint64_t downloaded = 0;
  const hdsc_status st =
      hdsc_cluster_reconstruct(cluster.handle, roles.data(), indices.data(), exclude.size(),
                               output.c_str(), &downloaded);
  if (st == HDSC_ERR_INSUFFICIENT_ACCESS) {
    // Diagnose with the rank of everything that was available in bulk.
    std::vector<int> acc_roles, acc_indices;
    for (size_t idx = 0; idx < hdsc_cluster_chunks(cluster.handle); ++idx) {
      int role = 0, index = 0, live = 0;
      if (hdsc_cluster_chunk_info(cluster.handle, idx, &role, &index, nullptr, 0, &live) !=
              HDSC_OK ||
          !live)
        continue;
      bool excluded = false;
      for (size_t e = 0; e < exclude.size(); ++e)
        if (roles[e] == role && indices[e] == index) excluded = true;
      if (excluded) continue;
      acc_roles.push_back(role);
      acc_indices.push_back(index);
    }
    hdsc_code* code = nullptr;
    if (hdsc_code_create(hdsc_cluster_k(cluster.handle), &code) == HDSC_OK) {
      int rank = 0, deficiency = 0, decodable = 0;
      if (hdsc_decodability(code, acc_roles.data(), acc_indices.data(), acc_roles.size(),
                            &rank, &deficiency, &decodable) == HDSC_OK)
        std::cerr << "rank=" << rank << " deficiency=" << deficiency
                  << " decodable=" << (decodable ? "true" : "false") << "\n";
      hdsc_code_destroy(code);
    }
  }
  if (st != HDSC_OK) return fail_with(st);
  std::cout << "downloaded=" << downloaded << "\n";
  return 0;
}

int run_verify(int k, bool ranks, bool lattice, bool gram) {
  if (k < 1 || k > 8) return fail_with(HDSC_ERR_UNSUPPORTED_K);
  if (!ranks && !lattice && !gram) ranks = lattice = gram = true;
  bool all_ok = true;

  if (ranks) {
    hdsc_code* code = nullptr;
    if (const hdsc_status st = hdsc_code_create(k, &code); st != HDSC_OK) return fail_with(st);
    bool ok = true;
    for (int i = 1; i <= k; ++i) {
      for (int j = 1; j <= k; ++j) {
        int rank = 0, predicted = 0;
        const hdsc_status st1 = hdsc_interference_rank(code, i, j, &rank);
        const hdsc_status st2 = hdsc_predicted_rank(k, i, j, &predicted);
        if (st1 != HDSC_OK || st2 != HDSC_OK) {
          hdsc_code_destroy(code);
          return fail_with(st1 != HDSC_OK ? st1 : st2);
        }
        std::cout << "i=" << i << " j=" << j << " rank=" << rank
                  << " predicted=" << predicted << "\n";
        ok = ok && rank == predicted;
      }
    }
    hdsc_code_destroy(code);
    std::cout << "interference ranks: " << (ok ? "PASS" : "FAIL") << "\n";
    all_ok = all_ok && ok;
  }

  if (lattice) {
    int ok = 0;
    if (const hdsc_status st = hdsc_lattice_closure_ok(k, &ok); st != HDSC_OK)
      return fail_with(st);
    std::cout << "wrap-around closure: " << (ok ? "PASS" : "FAIL") << "\n";
    all_ok = all_ok && ok;
  }

  if (gram) {
    int ok = 0;
    if (const hdsc_status st = hdsc_hadamard_gram_ok(k, &ok); st != HDSC_OK)
      return fail_with(st);
    std::cout << "HᵀH = N·I: " << (ok ? "PASS" : "FAIL") << "\n";
    all_ok = all_ok && ok;
  }

  return all_ok ? 0 : 1;
}

int run_analyze(int k, int delta) {
  std::uint64_t base = 1;
  for (int axis = 1; axis < k; ++axis) base *= static_cast<std::uint64_t>(delta);

  std::printf("k,delta,i,j,union_size,ratio\n");
  for (int i = 1; i <= k; ++i) {
    for (int j = 1; j <= k; ++j) {
      if (j == i) continue;
      std::uint64_t size = 0;
      if (const hdsc_status st = hdsc_lattice_union_size(k, delta, i, j, 0, &size);
          st != HDSC_OK)
        return fail_with(st);
      std::printf("%d,%d,%d,%d,%" PRIu64 ",%g\n", k, delta, i, j, size,
                  static_cast<double>(size) / static_cast<double>(base));
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hdsc: (k+2,k) GF(3) storage code with half-block repair"};
  app.require_subcommand(1);

  int k = 0;
  std::string input, outdir, dir, node, output;
  std::vector<std::string> exclude;
  bool report = false, ranks = false, lattice = false, gram = false;
  int delta = 2;

  CLI::App* enc = app.add_subcommand("encode", "Split a file into k+2 chunk files");
  enc->add_option("--k", k, "number of systematic nodes")->required();
  enc->add_option("--input", input, "file to encode")->required();
  enc->add_option("--outdir", outdir, "cluster directory to create")->required();

  CLI::App* fl = app.add_subcommand("fail", "Mark a node failed (renames its chunk)");
  fl->add_option("--dir", dir, "cluster directory")->required();
  fl->add_option("--node", node, "node to fail")->required()->check(node_spec_validator);

  CLI::App* rep = app.add_subcommand("repair", "Rebuild a failed node's chunk");
  rep->add_option("--dir", dir, "cluster directory")->required();
  rep->add_option("--node", node, "node to repair")->required()->check(node_spec_validator);
  rep->add_flag("--report", report, "print the download transcript");

  CLI::App* rec = app.add_subcommand("reconstruct", "Decode the original file");
  rec->add_option("--dir", dir, "cluster directory")->required();
  rec->add_option("--exclude", exclude, "nodes to leave out of bulk access")
      ->delimiter(',')
      ->check(node_spec_validator);
  rec->add_option("--output", output, "where to write the decoded bytes")->required();

  CLI::App* ver = app.add_subcommand("verify", "Check code invariants for one k");
  ver->add_option("--k", k, "number of systematic nodes")->required();
  ver->add_flag("--ranks", ranks, "interference rank table");
  ver->add_flag("--lattice", lattice, "wrap-around lattice closure");
  ver->add_flag("--gram", gram, "Hadamard Gram identity");

  CLI::App* ana = app.add_subcommand("analyze", "Unwrapped lattice overlap table (CSV)");
  ana->add_option("--k", k, "number of systematic nodes")->required()->check(CLI::Range(2, 8));
  ana->add_option("--delta", delta, "values per exponent axis")
      ->required()
      ->check(CLI::Range(2, 254));

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  if (enc->parsed()) return run_encode(k, input, outdir);
  if (fl->parsed()) return run_fail(dir, node);
  if (rep->parsed()) return run_repair(dir, node, report);
  if (rec->parsed()) return run_reconstruct(dir, exclude, output);
  if (ver->parsed()) return run_verify(k, ranks, lattice, gram);
  if (ana->parsed()) return run_analyze(k, delta);
  return 2;
}
