#include "subsel/common.hpp"

namespace subsel {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::missing_labels: return "MissingLabels";
    case ErrorCode::empty_class: return "EmptyClass";
    case ErrorCode::invalid_dataset: return "InvalidDataset";
    case ErrorCode::zero_norm_row: return "ZeroNormRow";
    case ErrorCode::non_positive_gamma: return "NonPositiveGamma";
    case ErrorCode::bad_neighbor_count: return "BadNeighborCount";
    case ErrorCode::dense_too_large: return "DenseTooLarge";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::already_selected: return "AlreadySelected";
    case ErrorCode::bad_weights: return "BadWeights";
    case ErrorCode::bad_budget: return "BadBudget";
    case ErrorCode::not_submodular: return "NotSubmodular";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::invalid_simplex: return "InvalidSimplex";
    case ErrorCode::empty_training_set: return "EmptyTrainingSet";
    case ErrorCode::bad_k: return "BadK";
    case ErrorCode::single_class_pool: return "SingleClassPool";
    case ErrorCode::empty_pool: return "EmptyPool";
    case ErrorCode::config_invalid: return "ConfigInvalid";
    case ErrorCode::bad_spec: return "BadSpec";
    case ErrorCode::parse_error: return "ParseError";
    case ErrorCode::io_error: return "IoError";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::dense_too_large:
    case ErrorCode::too_large:
    case ErrorCode::io_error:
    case ErrorCode::single_class_pool:
      return false;
    default:
      return true;
  }
}

}  // namespace subsel
