#pragma once

#include <stdexcept>
#include <string>

namespace hdsc {

// Error taxonomy shared by the C++ core and mirrored by the C API status codes.
enum class Errc {
  invalid_argument = 1,
  unsupported_k = 2,
  dimension_mismatch = 3,
  singular_matrix = 4,
  index_out_of_range = 5,
  node_unavailable = 6,
  already_failed = 7,
  unknown_node = 8,
  intolerable = 9,
  insufficient_access = 10,
  io_error = 11,
  corrupt_chunk = 12,
  internal = 14,
};

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

}  // namespace hdsc
