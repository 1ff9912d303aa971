#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace seqrec {

enum class ErrorCode {
  usage,
  invalid_matrix,
  invalid_input,
  degenerate_matrix,
  singular_kernel,
  numerical_failure,
  io_error,
  format_error,
  empty_dataset,
  no_negatives_available,
  incompatible_checkpoint,
};

std::string_view to_string(ErrorCode code);

/// Process exit status for a failure of the given kind.
/// 1 = usage, 2 = I/O, 3 = data, 4 = numerical / model state.
int exit_code(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace seqrec
