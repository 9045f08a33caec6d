/* hdsc: a (k+2,k) erasure code over GF(3) with half-block node repair.
 *
 * Every function returns HDSC_OK or a status code; results come back
 * through out parameters. Handles are opaque and freed by the matching
 * destroy/close call.
 */

#ifndef HDSC_H
#define HDSC_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum hdsc_status {
  HDSC_OK = 0,
  HDSC_ERR_INVALID_ARGUMENT = 1,
  HDSC_ERR_UNSUPPORTED_K = 2,
  HDSC_ERR_DIMENSION_MISMATCH = 3,
  HDSC_ERR_SINGULAR_MATRIX = 4,
  HDSC_ERR_INDEX_OUT_OF_RANGE = 5,
  HDSC_ERR_NODE_UNAVAILABLE = 6,
  HDSC_ERR_ALREADY_FAILED = 7,
  HDSC_ERR_UNKNOWN_NODE = 8,
  HDSC_ERR_INTOLERABLE = 9,
  HDSC_ERR_INSUFFICIENT_ACCESS = 10,
  HDSC_ERR_IO = 11,
  HDSC_ERR_CORRUPT_CHUNK = 12,
  HDSC_ERR_BUFFER_TOO_SMALL = 13,
  HDSC_ERR_INTERNAL = 14
} hdsc_status;

typedef enum hdsc_role {
  HDSC_ROLE_SYSTEMATIC = 0,
  HDSC_ROLE_PARITY_A = 1,
  HDSC_ROLE_PARITY_B = 2
} hdsc_role;

const char *hdsc_status_string(hdsc_status status);
const char *hdsc_version(void);

/* Node addressing. Specs are "s<digits>", "pa" or "pb", case-insensitive.
 * Systematic indices are 1-based; parities carry index 0. */
hdsc_status hdsc_node_parse(const char *spec, int *role, int *index);
hdsc_status hdsc_node_format(int role, int index, char *buf, size_t buf_len);

/* ---- code-level operations (symbols are bytes with value 0, 1 or 2) ---- */

typedef struct hdsc_code hdsc_code;

hdsc_status hdsc_code_create(int k, hdsc_code **out);
void hdsc_code_destroy(hdsc_code *code);

int hdsc_code_k(const hdsc_code *code);
int hdsc_code_node_symbols(const hdsc_code *code);  /* N = 2^k    */
int hdsc_code_file_symbols(const hdsc_code *code);  /* k * 2^k    */

/* file: k*N symbols. out: (k+2)*N symbols, blocks s1..sk, pa, pb. */
hdsc_status hdsc_encode(const hdsc_code *code, const uint8_t *file, size_t file_len,
                        uint8_t *out, size_t out_len);

typedef struct hdsc_transcript hdsc_transcript;

void hdsc_transcript_destroy(hdsc_transcript *transcript);
size_t hdsc_transcript_entries(const hdsc_transcript *transcript);
hdsc_status hdsc_transcript_entry(const hdsc_transcript *transcript, size_t idx,
                                  int *role, int *index, uint64_t *symbols);
uint64_t hdsc_transcript_total(const hdsc_transcript *transcript);

/* Rebuilds one node from the others. nodes: (k+2)*N symbols in encode
 * order; the target's block is never read. transcript may be NULL. */
hdsc_status hdsc_repair_node(const hdsc_code *code, int role, int index,
                             const uint8_t *nodes, size_t nodes_len,
                             uint8_t *out, size_t out_len,
                             hdsc_transcript **transcript);

/* ---- analysis ---- */

/* rank([V_i | X_j V_i]) computed by elimination. */
hdsc_status hdsc_interference_rank(const hdsc_code *code, int i, int j, int *rank);
/* The same rank from the exponent-lattice argument: 2^k or 2^{k-1}. */
hdsc_status hdsc_predicted_rank(int k, int i, int j, int *rank);
/* Repair bandwidth of systematic node i in symbols: (k+1) * 2^{k-1}. */
hdsc_status hdsc_repair_bandwidth(const hdsc_code *code, int i, uint64_t *symbols);
/* |L_i union shift_j(L_i)| over exponent tuples with delta values per axis. */
hdsc_status hdsc_lattice_union_size(int k, int delta, int i, int j, int wrap,
                                    uint64_t *size);
/* 1 iff H^T H = N*I for the order-2^k Sylvester matrix. */
hdsc_status hdsc_hadamard_gram_ok(int k, int *ok);
/* 1 iff every wrapped shift along j != i fixes the repair lattice of i. */
hdsc_status hdsc_lattice_closure_ok(int k, int *ok);

/* ---- tolerance and decodability ---- */

hdsc_status hdsc_can_tolerate(const hdsc_code *code, const int *roles, const int *indices,
                              size_t n, int *ok);
hdsc_status hdsc_decodability(const hdsc_code *code, const int *roles, const int *indices,
                              size_t n, int *rank, int *deficiency, int *decodable);

/* ---- on-disk cluster ---- */

typedef struct hdsc_cluster hdsc_cluster;

hdsc_status hdsc_cluster_create(int k, const uint8_t *bytes, size_t len, const char *dir,
                                hdsc_cluster **out);
hdsc_status hdsc_cluster_open(const char *dir, hdsc_cluster **out);
void hdsc_cluster_close(hdsc_cluster *cluster);

int hdsc_cluster_k(const hdsc_cluster *cluster);
size_t hdsc_cluster_chunks(const hdsc_cluster *cluster);  /* k + 2 */
hdsc_status hdsc_cluster_chunk_info(const hdsc_cluster *cluster, size_t idx,
                                    int *role, int *index,
                                    char *filename, size_t filename_len, int *live);
uint64_t hdsc_cluster_traffic(const hdsc_cluster *cluster);

hdsc_status hdsc_cluster_fail(hdsc_cluster *cluster, int role, int index);
hdsc_status hdsc_cluster_repair(hdsc_cluster *cluster, int role, int index,
                                hdsc_transcript **transcript);
hdsc_status hdsc_cluster_reconstruct(hdsc_cluster *cluster,
                                     const int *exclude_roles, const int *exclude_indices,
                                     size_t n_exclude, const char *output_path,
                                     uint64_t *symbols_downloaded);

#ifdef __cplusplus
}
#endif

#endif /* HDSC_H */
