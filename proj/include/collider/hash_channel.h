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

#ifndef COLLIDER_HASH_CHANNEL_H_
#define COLLIDER_HASH_CHANNEL_H_

#include <array>
#include <cstdint>

#include "absl/status/status.h"
#include "absl/status/statusor.h"
#include "collider/random.h"

namespace collider {

// (alpha, beta)-local differential privacy budget. alpha is on the natural
// log scale.
struct PrivacyParams {
  double alpha = 0.0;
  double beta = 1.0;

  absl::Status Validate() const;
  friend bool operator==(const PrivacyParams&, const PrivacyParams&) = default;
};

// r = ceil(6 * ((e^a + 1) / (e^a - 1))^2 * ln(4 / b)).
// alpha = 0 is FailedPrecondition (r diverges); beta outside (0, 4) is
// InvalidArgument.
absl::StatusOr<int64_t> RequiredSalts(const PrivacyParams& params);

// One-bit report sent by a user.
enum class Report : int8_t { kMinus = -1, kPlus = 1 };

inline int Sign(Report r) { return static_cast<int>(r); }

using HashKey = std::array<uint8_t, 16>;

// Expands a 64-bit seed into a 128-bit key: the two halves are
// DeriveSeed(seed, 0) and DeriveSeed(seed, 1), little-endian.
HashKey KeyFromSeed(uint64_t seed);
HashKey RandomKey(Rng& rng);

// Canonical encoding of the hash input <group, salt, x>: each field is one
// length byte (always 8) followed by the value as a big-endian 64-bit word.
inline constexpr size_t kEncodedInputSize = 27;
std::array<uint8_t, kEncodedInputSize> EncodeHashInput(uint64_t group_id,
                                                       uint64_t salt,
                                                       uint64_t element);

// The salted one-bit hashing channel. The keyed hash is SipHash-2-4 and the
// report is the low bit of its 64-bit output (1 -> +1, 0 -> -1). Immutable
// and shareable across threads.
class HashChannel {
 public:
  // Salt count from RequiredSalts(params).
  static absl::StatusOr<HashChannel> Create(const PrivacyParams& params,
                                            const HashKey& key);
  // Explicit salt count, bypassing the privacy formula.
  static absl::StatusOr<HashChannel> CreateWithSalts(
      const PrivacyParams& params, int64_t salts, const HashKey& key);

  const PrivacyParams& params() const { return params_; }
  int64_t salts() const { return salts_; }
  const HashKey& key() const { return key_; }

  // Deterministic keyed hash of <group_id, salt, element>; salt is 1..r.
  Report Hash(uint64_t group_id, uint64_t salt, uint64_t element) const;

  // Draws the user's salt uniformly from 1..r with `rng` and reports the hash
  // of <group_id, salt, element>.
  Report Privatize(uint64_t group_id, uint64_t element, Rng& rng) const;

 private:
  HashChannel(const PrivacyParams& params, int64_t salts, const HashKey& key)
      : params_(params), salts_(salts), key_(key) {}

  PrivacyParams params_;
  int64_t salts_;
  HashKey key_;
};

// Empirical privacy audit. For each of `trials` fresh hash keys, computes the
// salt-averaged report frequencies of `x` and `x_prime` (group 0) for both
// report values and counts the key as a violation when any likelihood ratio,
// in either direction, exceeds e^alpha (zero denominators count as
// violations). Returns the violation fraction.
absl::StatusOr<double> AuditPrivacy(const PrivacyParams& params,
                                    int64_t trials, uint64_t x,
                                    uint64_t x_prime, Rng& rng);

}  // namespace collider

#endif  // COLLIDER_HASH_CHANNEL_H_
