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

#ifndef COLLIDER_DIST_SPEC_H_
#define COLLIDER_DIST_SPEC_H_

#include <cstdint>
#include <string>
#include "absl/strings/string_view.h"

#include "absl/status/statusor.h"
#include "collider/distribution.h"

namespace collider {

// A parsed distribution spec string. Accepted forms:
//   uniform:k=<int>
//   powerlaw:k=<int>
//   exponential:k=<int>
//   twopoint:k=<int>,tau=<real>,side=<0|1>
struct DistributionSpec {
  std::string text;  // canonical form, e.g. "uniform:k=10"
  DiscreteDistribution distribution;
};

// Parse errors name the offending token.
absl::StatusOr<DistributionSpec> ParseDistributionSpec(absl::string_view text);

}  // namespace collider

#endif  // COLLIDER_DIST_SPEC_H_
