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

#ifndef DP_IRLS_DP_IRLS_HPP_
#define DP_IRLS_DP_IRLS_HPP_

#include "dp_irls/accountant.hpp"
#include "dp_irls/csv.hpp"
#include "dp_irls/datagen.hpp"
#include "dp_irls/evaluation.hpp"
#include "dp_irls/experiment.hpp"
#include "dp_irls/irls.hpp"
#include "dp_irls/mechanisms.hpp"
#include "dp_irls/rng.hpp"
#include "dp_irls/svg_chart.hpp"
#include "dp_irls/types.hpp"

#endif  // DP_IRLS_DP_IRLS_HPP_
