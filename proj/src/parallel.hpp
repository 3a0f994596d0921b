#pragma once

#include <cstddef>
#include <cstdint>

#include "subsel/common.hpp"

namespace subsel::detail {

/// Runs body(i) for i in [0, n). Each index must write only its own output
/// slot, so the parallel schedule cannot change the result.
template <class Body>
void for_each_index(std::size_t n, Exec exec, Body&& body) {
  if (exec == Exec::serial) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(dynamic, 16)
  for (std::int64_t i = 0; i < count; ++i) body(static_cast<std::size_t>(i));
}

}  // namespace subsel::detail
