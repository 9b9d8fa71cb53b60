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

#include "collider/hash_channel.h"

#include <sodium.h>

#include <cmath>
#include <cstdlib>

#include "absl/strings/str_cat.h"
#include "collider/status_macros.h"

namespace collider {
namespace {

static_assert(crypto_shorthash_KEYBYTES == sizeof(HashKey));

void EnsureSodium() {
  static const bool initialized = [] {
    if (sodium_init() < 0) std::abort();
    return true;
  }();
  (void)initialized;
}

void PutField(uint8_t* out, uint64_t value) {
  out[0] = 8;
  for (int i = 0; i < 8; ++i) {
    out[1 + i] = static_cast<uint8_t>(value >> (56 - 8 * i));
  }
}

}  // namespace

absl::Status PrivacyParams::Validate() const {
  if (!(alpha >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be >= 0, got ", alpha));
  }
  if (!(beta > 0.0 && beta <= 1.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must lie in (0, 1], got ", beta));
  }
  return absl::OkStatus();
}

absl::StatusOr<int64_t> RequiredSalts(const PrivacyParams& params) {
  if (!(params.alpha >= 0.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("alpha must be >= 0, got ", params.alpha));
  }
  if (params.alpha == 0.0) {
    return absl::FailedPreconditionError(
        "alpha = 0 is infeasible: the salt count diverges");
  }
  if (!(params.beta > 0.0 && params.beta < 4.0)) {
    return absl::InvalidArgumentError(
        absl::StrCat("beta must lie in (0, 4), got ", params.beta));
  }
  const double e = std::exp(params.alpha);
  // expm1 keeps the denominator accurate for small alpha; for huge alpha the
  // ratio tends to 1.
  const double ratio = std::isinf(e) ? 1.0 : (e + 1.0) / std::expm1(params.alpha);
  const double r = 6.0 * ratio * ratio * std::log(4.0 / params.beta);
  return std::max<int64_t>(1, static_cast<int64_t>(std::ceil(r)));
}

HashKey KeyFromSeed(uint64_t seed) {
  HashKey key{};
  const uint64_t halves[2] = {DeriveSeed(seed, 0), DeriveSeed(seed, 1)};
  for (int h = 0; h < 2; ++h) {
    for (int i = 0; i < 8; ++i) {
      key[8 * h + i] = static_cast<uint8_t>(halves[h] >> (8 * i));
    }
  }
  return key;
}

HashKey RandomKey(Rng& rng) {
  HashKey key{};
  for (int h = 0; h < 2; ++h) {
    const uint64_t word = rng();
    for (int i = 0; i < 8; ++i) key[8 * h + i] = static_cast<uint8_t>(word >> (8 * i));
  }
  return key;
}

std::array<uint8_t, kEncodedInputSize> EncodeHashInput(uint64_t group_id,
                                                       uint64_t salt,
                                                       uint64_t element) {
  std::array<uint8_t, kEncodedInputSize> out{};
  PutField(out.data(), group_id);
  PutField(out.data() + 9, salt);
  PutField(out.data() + 18, element);
  return out;
}

absl::StatusOr<HashChannel> HashChannel::Create(const PrivacyParams& params,
                                                const HashKey& key) {
  RETURN_IF_ERROR(params.Validate());
  ASSIGN_OR_RETURN(int64_t salts, RequiredSalts(params));
  return HashChannel(params, salts, key);
}

absl::StatusOr<HashChannel> HashChannel::CreateWithSalts(
    const PrivacyParams& params, int64_t salts, const HashKey& key) {
  RETURN_IF_ERROR(params.Validate());
  if (salts < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("salt count must be >= 1, got ", salts));
  }
  return HashChannel(params, salts, key);
}

Report HashChannel::Hash(uint64_t group_id, uint64_t salt,
                         uint64_t element) const {
  EnsureSodium();
  const auto input = EncodeHashInput(group_id, salt, element);
  unsigned char digest[crypto_shorthash_BYTES];
  crypto_shorthash(digest, input.data(), input.size(), key_.data());
  // crypto_shorthash writes the SipHash word little-endian; byte 0 holds the
  // low bit.
  return (digest[0] & 1) ? Report::kPlus : Report::kMinus;
}

Report HashChannel::Privatize(uint64_t group_id, uint64_t element,
                              Rng& rng) const {
  const uint64_t salt = 1 + rng.UniformBelow(static_cast<uint64_t>(salts_));
  return Hash(group_id, salt, element);
}

absl::StatusOr<double> AuditPrivacy(const PrivacyParams& params,
                                    int64_t trials, uint64_t x,
                                    uint64_t x_prime, Rng& rng) {
  if (trials < 1) {
    return absl::InvalidArgumentError(
        absl::StrCat("audit needs trials >= 1, got ", trials));
  }
  if (x == x_prime) {
    return absl::InvalidArgumentError(
        "audit needs two distinct elements x != x_prime");
  }
  RETURN_IF_ERROR(params.Validate());
  ASSIGN_OR_RETURN(int64_t salts, RequiredSalts(params));
  const double bound = std::exp(params.alpha);

  int64_t violations = 0;
  for (int64_t t = 0; t < trials; ++t) {
    ASSIGN_OR_RETURN(HashChannel channel,
                     HashChannel::CreateWithSalts(params, salts, RandomKey(rng)));
    int64_t plus = 0;
    int64_t plus_prime = 0;
    for (int64_t s = 1; s <= salts; ++s) {
      plus += channel.Hash(0, s, x) == Report::kPlus;
      plus_prime += channel.Hash(0, s, x_prime) == Report::kPlus;
    }
    // Frequencies share the 1/r factor, so compare counts directly.
    const int64_t counts[2] = {plus, salts - plus};
    const int64_t counts_prime[2] = {plus_prime, salts - plus_prime};
    bool violated = false;
    for (int v = 0; v < 2 && !violated; ++v) {
      const double a = static_cast<double>(counts[v]);
      const double b = static_cast<double>(counts_prime[v]);
      if (a == 0.0 || b == 0.0) {
        violated = true;
        break;
      }
      violated = a / b > bound || b / a > bound;
    }
    violations += violated;
  }
  return static_cast<double>(violations) / static_cast<double>(trials);
}

}  // namespace collider
