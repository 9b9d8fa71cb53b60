// Copyright 2026 The Collider Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef COLLIDER_CONFIG_H_
#define COLLIDER_CONFIG_H_

#include "absl/strings/string_view.h"
#include <vector>

#include "absl/status/statusor.h"
#include "collider/harness.h"

namespace collider {

// Reads a sweep description written in a small TOML subset: comments, blank
// lines, and one [[run]] table per experiment holding `key = value` pairs
// with string, integer, float or boolean values. Recognized keys:
//
//   algorithm  dist  c0  eps  delta  alpha  beta  n  c_lower  budget  n0
//   max_rounds  f32_bound  variance_bound  centering ("proof"|"verbatim")
//   clamp  trials  seed
//
// Unknown keys and malformed lines are errors that carry the line number.
absl::StatusOr<std::vector<ExperimentConfig>> ParseSweepConfig(
    absl::string_view text);

}  // namespace collider

#endif  // COLLIDER_CONFIG_H_
