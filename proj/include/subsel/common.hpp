#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace subsel {

using Index = std::size_t;

/// Execution policy for the data-parallel kernels. `serial` is the reference
/// path; `parallel` fans out with OpenMP and must agree with it bit for bit.
enum class Exec { serial, parallel };

enum class ErrorCode {
  missing_labels,
  empty_class,
  invalid_dataset,
  zero_norm_row,
  non_positive_gamma,
  bad_neighbor_count,
  dense_too_large,
  index_out_of_range,
  already_selected,
  bad_weights,
  bad_budget,
  not_submodular,
  too_large,
  invalid_simplex,
  empty_training_set,
  bad_k,
  single_class_pool,
  empty_pool,
  config_invalid,
  bad_spec,
  parse_error,
  io_error,
};

std::string_view to_string(ErrorCode code);

/// Validation errors are caller mistakes (bad input, bad flags); everything
/// else is a runtime failure. The CLI maps these to exit codes 2 and 3.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void fail(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace subsel
