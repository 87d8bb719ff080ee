// Copyright 2026 The dp_irls Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef DP_IRLS_INTERNAL_STATUS_MACROS_HPP_
#define DP_IRLS_INTERNAL_STATUS_MACROS_HPP_

#include <utility>

#include "absl/status/status.h"
#include "absl/status/statusor.h"

#define DP_IRLS_INTERNAL_CONCAT_IMPL(a, b) a##b
#define DP_IRLS_INTERNAL_CONCAT(a, b) DP_IRLS_INTERNAL_CONCAT_IMPL(a, b)

#define DP_IRLS_RETURN_IF_ERROR(expr)                  \
  do {                                                 \
    if (absl::Status _dp_irls_status = (expr);         \
        !_dp_irls_status.ok()) {                       \
      return _dp_irls_status;                          \
    }                                                  \
  } while (0)

#define DP_IRLS_INTERNAL_ASSIGN_OR_RETURN(tmp, lhs, expr) \
  auto tmp = (expr);                                      \
  if (!tmp.ok()) return std::move(tmp).status();          \
  lhs = std::move(tmp).value()

// Evaluates `expr` (a StatusOr) and either assigns its value to `lhs` or
// returns the error from the enclosing function.
#define DP_IRLS_ASSIGN_OR_RETURN(lhs, expr)                                  \
  DP_IRLS_INTERNAL_ASSIGN_OR_RETURN(                                         \
      DP_IRLS_INTERNAL_CONCAT(_dp_irls_statusor_, __LINE__), lhs, expr)

#endif  // DP_IRLS_INTERNAL_STATUS_MACROS_HPP_
