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

#include <cmath>
#include <cstdint>

#include "absl/status/status.h"
#include "collider/random.h"
#include "gmock/gmock.h"
#include "gtest/gtest.h"

namespace collider {
namespace {

using ::testing::DoubleNear;
using ::testing::ElementsAreArray;
using ::testing::Le;

// Independent evaluation of the salt formula in long double.
int64_t SaltsOracle(long double alpha, long double beta) {
  const long double e = std::exp(alpha);
  const long double ratio = (e + 1) / (e - 1);
  return static_cast<int64_t>(std::ceil(6 * ratio * ratio * std::log(4 / beta)));
}

TEST(RequiredSaltsTest, ClosedFormExamples) {
  EXPECT_EQ(*RequiredSalts({std::log(3.0), 0.04}), 111);
  EXPECT_EQ(*RequiredSalts({1.0, 1e-5}), 363);
  EXPECT_EQ(*RequiredSalts({2.0, 0.01}), 62);
  EXPECT_EQ(*RequiredSalts({4.0, 0.1}), 24);
}

TEST(RequiredSaltsTest, MatchesOracleOnGrid) {
  for (double alpha : {0.1, 0.5, 1.0, 2.0, 3.0, 5.0, 8.0}) {
    for (double beta : {1e-6, 1e-3, 0.05, 0.3, 1.0}) {
      EXPECT_EQ(*RequiredSalts({alpha, beta}), SaltsOracle(alpha, beta))
          << alpha << " " << beta;
    }
  }
}

TEST(RequiredSaltsTest, LargeAlphaApproachesLimit) {
  const double beta = 0.04;
  const int64_t limit =
      static_cast<int64_t>(std::ceil(6.0 * std::log(4.0 / beta)));
  EXPECT_EQ(*RequiredSalts({50.0, beta}), limit);
  EXPECT_EQ(*RequiredSalts({1000.0, beta}), limit);
}

TEST(RequiredSaltsTest, MonotoneInBothParameters) {
  int64_t previous = *RequiredSalts({0.05, 0.1});
  for (double alpha = 0.1; alpha < 10.0; alpha += 0.05) {
    const int64_t r = *RequiredSalts({alpha, 0.1});
    EXPECT_LE(r, previous) << alpha;
    previous = r;
  }
  previous = *RequiredSalts({1.0, 1e-9});
  for (double beta = 1e-8; beta <= 1.0; beta *= 1.7) {
    const int64_t r = *RequiredSalts({1.0, beta});
    EXPECT_LE(r, previous) << beta;
    previous = r;
  }
}

TEST(RequiredSaltsTest, Errors) {
  EXPECT_EQ(RequiredSalts({0.0, 0.1}).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_EQ(RequiredSalts({1.0, 4.0}).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(RequiredSalts({1.0, 0.0}).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(RequiredSalts({-1.0, 0.1}).status().code(),
            absl::StatusCode::kInvalidArgument);
}

TEST(PrivacyParamsTest, Validate) {
  EXPECT_TRUE(PrivacyParams({0.0, 1.0}).Validate().ok());
  EXPECT_FALSE(PrivacyParams({1.0, 1.5}).Validate().ok());
  EXPECT_FALSE(PrivacyParams({1.0, 0.0}).Validate().ok());
  EXPECT_FALSE(PrivacyParams({NAN, 0.5}).Validate().ok());
}

TEST(EncodeHashInputTest, LengthPrefixedBigEndian) {
  const auto bytes = EncodeHashInput(1, 0x0203, 0x0102030405060708ULL);
  const uint8_t expected[kEncodedInputSize] = {
      8, 0, 0, 0, 0, 0, 0, 0, 1,     //
      8, 0, 0, 0, 0, 0, 0, 2, 3,     //
      8, 1, 2, 3, 4, 5, 6, 7, 8};
  EXPECT_THAT(bytes, ElementsAreArray(expected));
}

TEST(EncodeHashInputTest, NoConcatenationAmbiguity) {
  EXPECT_NE(EncodeHashInput(1, 23, 0), EncodeHashInput(12, 3, 0));
  EXPECT_NE(EncodeHashInput(0, 1, 2), EncodeHashInput(0, 2, 1));
}

TEST(HashChannelTest, CreateUsesFormula) {
  auto channel = HashChannel::Create({std::log(3.0), 0.04}, KeyFromSeed(1));
  ASSERT_TRUE(channel.ok());
  EXPECT_EQ(channel->salts(), 111);
  EXPECT_EQ(HashChannel::Create({0.0, 0.04}, KeyFromSeed(1)).status().code(),
            absl::StatusCode::kFailedPrecondition);
  EXPECT_FALSE(
      HashChannel::CreateWithSalts({1.0, 0.1}, 0, KeyFromSeed(1)).ok());
}

TEST(HashChannelTest, HashIsDeterministic) {
  auto a = HashChannel::Create({1.0, 0.1}, KeyFromSeed(5));
  auto b = HashChannel::Create({1.0, 0.1}, KeyFromSeed(5));
  ASSERT_TRUE(a.ok() && b.ok());
  for (uint64_t x = 1; x <= 100; ++x) {
    EXPECT_EQ(a->Hash(3, 7, x), a->Hash(3, 7, x));
    EXPECT_EQ(a->Hash(3, 7, x), b->Hash(3, 7, x));
  }
}

TEST(HashChannelTest, PrivatizeIsDeterministicGivenRngState) {
  auto channel = HashChannel::Create({1.0, 0.1}, KeyFromSeed(9));
  ASSERT_TRUE(channel.ok());
  Rng a(17);
  Rng b(17);
  for (uint64_t x = 1; x <= 1000; ++x) {
    EXPECT_EQ(channel->Privatize(2, x, a), channel->Privatize(2, x, b));
  }
}

TEST(HashChannelTest, PrivatizeMatchesHashAtDrawnSalt) {
  auto channel = HashChannel::Create({1.0, 0.1}, KeyFromSeed(9));
  ASSERT_TRUE(channel.ok());
  Rng rng(23);
  for (uint64_t x = 1; x <= 200; ++x) {
    Rng shadow = rng;
    const uint64_t salt =
        1 + shadow.UniformBelow(static_cast<uint64_t>(channel->salts()));
    EXPECT_EQ(channel->Privatize(4, x, rng), channel->Hash(4, salt, x));
  }
}

TEST(HashChannelTest, SingleSaltIgnoresRng) {
  auto channel = HashChannel::CreateWithSalts({1.0, 0.1}, 1, KeyFromSeed(3));
  ASSERT_TRUE(channel.ok());
  Rng rng(1);
  for (uint64_t x = 1; x <= 50; ++x) {
    const Report expected = channel->Hash(6, 1, x);
    for (int rep = 0; rep < 5; ++rep) {
      EXPECT_EQ(channel->Privatize(6, x, rng), expected);
    }
  }
}

TEST(HashChannelTest, OutputIsFairCoinOverKeys) {
  const PrivacyParams params{1.0, 0.1};
  Rng rng(2024);
  const int n = 1000000;
  int plus = 0;
  for (int i = 0; i < n; ++i) {
    auto channel = HashChannel::CreateWithSalts(params, 1, RandomKey(rng));
    plus += channel->Hash(1, 1, 42) == Report::kPlus;
  }
  EXPECT_THAT(static_cast<double>(plus) / n, DoubleNear(0.5, 0.002));
}

TEST(HashChannelTest, GroupsLookIndependent) {
  const PrivacyParams params{1.0, 0.1};
  Rng rng(77);
  const int n = 100000;
  double sum_product = 0;
  double sum_a = 0;
  double sum_b = 0;
  for (int i = 0; i < n; ++i) {
    auto channel = HashChannel::CreateWithSalts(params, 1, RandomKey(rng));
    const int a = Sign(channel->Hash(1, 1, 5));
    const int b = Sign(channel->Hash(2, 1, 5));
    sum_product += a * b;
    sum_a += a;
    sum_b += b;
  }
  const double correlation = sum_product / n - (sum_a / n) * (sum_b / n);
  EXPECT_THAT(correlation, DoubleNear(0.0, 4.0 / std::sqrt(n)));
}

TEST(AuditPrivacyTest, Errors) {
  Rng rng(1);
  EXPECT_EQ(AuditPrivacy({1.0, 0.1}, 0, 1, 2, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(AuditPrivacy({1.0, 0.1}, 10, 3, 3, rng).status().code(),
            absl::StatusCode::kInvalidArgument);
  EXPECT_EQ(AuditPrivacy({0.0, 0.1}, 10, 1, 2, rng).status().code(),
            absl::StatusCode::kFailedPrecondition);
}

TEST(AuditPrivacyTest, HugeAlphaNeverViolates) {
  Rng rng(5);
  auto fraction = AuditPrivacy({20.0, 0.04}, 1000, 1, 2, rng);
  ASSERT_TRUE(fraction.ok());
  EXPECT_DOUBLE_EQ(*fraction, 0.0);
}

TEST(AuditPrivacyTest, FractionStaysBelowBetaPlusSlack) {
  Rng rng(6);
  const double beta = 0.04;
  const int trials = 2000;
  auto fraction = AuditPrivacy({std::log(3.0), beta}, trials, 1, 2, rng);
  ASSERT_TRUE(fraction.ok());
  EXPECT_THAT(*fraction, Le(beta + 3.0 * std::sqrt(beta * (1 - beta) / trials)));
}

}  // namespace
}  // namespace collider
