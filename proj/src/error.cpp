#include "seqrec/error.hpp"

namespace seqrec {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage: return "Usage";
    case ErrorCode::invalid_matrix: return "InvalidMatrix";
    case ErrorCode::invalid_input: return "InvalidInput";
    case ErrorCode::degenerate_matrix: return "DegenerateMatrix";
    case ErrorCode::singular_kernel: return "SingularKernel";
    case ErrorCode::numerical_failure: return "NumericalFailure";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::format_error: return "FormatError";
    case ErrorCode::empty_dataset: return "EmptyDataset";
    case ErrorCode::no_negatives_available: return "NoNegativesAvailable";
    case ErrorCode::incompatible_checkpoint: return "IncompatibleCheckpoint";
  }
  return "Unknown";
}

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::usage:
      return 1;
    case ErrorCode::io_error:
      return 2;
    case ErrorCode::format_error:
    case ErrorCode::empty_dataset:
    case ErrorCode::no_negatives_available:
    case ErrorCode::invalid_input:
    case ErrorCode::incompatible_checkpoint:
      return 3;
    case ErrorCode::invalid_matrix:
    case ErrorCode::degenerate_matrix:
    case ErrorCode::singular_kernel:
    case ErrorCode::numerical_failure:
      return 4;
  }
  return 4;
}

}  // namespace seqrec
