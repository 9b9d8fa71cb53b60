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

#include "collider/config.h"

#include <cmath>
#include <string>
#include <variant>

#include "absl/status/status.h"
#include "absl/strings/numbers.h"
#include "absl/strings/str_cat.h"
#include "absl/strings/str_split.h"
#include "absl/strings/strip.h"
#include "collider/status_macros.h"

namespace collider {
namespace {

using Value = std::variant<std::string, int64_t, double, bool>;

absl::Status LineError(int line, absl::string_view what) {
  return absl::InvalidArgumentError(
      absl::StrCat("config line ", line, ": ", what));
}

absl::string_view StripComment(absl::string_view line) {
  bool in_string = false;
  for (size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') in_string = !in_string;
    if (line[i] == '#' && !in_string) return line.substr(0, i);
  }
  return line;
}

absl::StatusOr<Value> ParseValue(int line, absl::string_view raw) {
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    return std::string(raw.substr(1, raw.size() - 2));
  }
  if (raw == "true") return true;
  if (raw == "false") return false;
  std::string digits;
  for (char c : raw) {
    if (c != '_') digits.push_back(c);
  }
  int64_t integer = 0;
  if (absl::SimpleAtoi(digits, &integer)) return integer;
  double number = 0.0;
  if (absl::SimpleAtod(digits, &number)) return number;
  return LineError(line, absl::StrCat("cannot parse value '", raw, "'"));
}

absl::StatusOr<double> AsNumber(int line, absl::string_view key,
                                const Value& v) {
  if (const double* d = std::get_if<double>(&v)) return *d;
  if (const int64_t* i = std::get_if<int64_t>(&v)) {
    return static_cast<double>(*i);
  }
  return LineError(line, absl::StrCat("'", key, "' expects a number"));
}

absl::StatusOr<int64_t> AsInteger(int line, absl::string_view key,
                                  const Value& v) {
  if (const int64_t* i = std::get_if<int64_t>(&v)) return *i;
  const double* d = std::get_if<double>(&v);
  if (d == nullptr || *d != std::trunc(*d) || std::abs(*d) > 9e15) {
    return LineError(line, absl::StrCat("'", key, "' expects an integer"));
  }
  return static_cast<int64_t>(*d);
}

absl::StatusOr<std::string> AsString(int line, absl::string_view key,
                                     const Value& v) {
  if (const std::string* s = std::get_if<std::string>(&v)) return *s;
  return LineError(line, absl::StrCat("'", key, "' expects a string"));
}

absl::Status Apply(int line, absl::string_view key, const Value& v,
                   ExperimentConfig& c) {
  if (key == "algorithm") {
    ASSIGN_OR_RETURN(std::string name, AsString(line, key, v));
    absl::StatusOr<Algorithm> algorithm = ParseAlgorithm(name);
    if (!algorithm.ok()) return LineError(line, algorithm.status().message());
    c.algorithm = *algorithm;
  } else if (key == "dist") {
    ASSIGN_OR_RETURN(c.distribution, AsString(line, key, v));
  } else if (key == "c0") {
    ASSIGN_OR_RETURN(c.c0, AsNumber(line, key, v));
  } else if (key == "eps") {
    ASSIGN_OR_RETURN(c.epsilon, AsNumber(line, key, v));
  } else if (key == "delta") {
    ASSIGN_OR_RETURN(c.delta, AsNumber(line, key, v));
  } else if (key == "alpha") {
    ASSIGN_OR_RETURN(c.alpha, AsNumber(line, key, v));
  } else if (key == "beta") {
    ASSIGN_OR_RETURN(c.beta, AsNumber(line, key, v));
  } else if (key == "n") {
    ASSIGN_OR_RETURN(c.n, AsInteger(line, key, v));
  } else if (key == "c_lower") {
    ASSIGN_OR_RETURN(c.c_lower, AsNumber(line, key, v));
  } else if (key == "budget") {
    ASSIGN_OR_RETURN(c.budget, AsInteger(line, key, v));
  } else if (key == "n0") {
    ASSIGN_OR_RETURN(c.n0, AsInteger(line, key, v));
  } else if (key == "max_rounds") {
    ASSIGN_OR_RETURN(int64_t rounds, AsInteger(line, key, v));
    c.max_rounds = static_cast<int>(rounds);
  } else if (key == "f32_bound") {
    ASSIGN_OR_RETURN(double bound, AsNumber(line, key, v));
    c.f32_bound = bound;
  } else if (key == "variance_bound") {
    ASSIGN_OR_RETURN(double bound, AsNumber(line, key, v));
    c.variance_bound = bound;
  } else if (key == "centering") {
    ASSIGN_OR_RETURN(std::string mode, AsString(line, key, v));
    if (mode == "proof") {
      c.centering = NullCentering::kProof;
    } else if (mode == "verbatim") {
      c.centering = NullCentering::kVerbatim;
    } else {
      return LineError(line, absl::StrCat("unknown centering '", mode, "'"));
    }
  } else if (key == "clamp") {
    const bool* b = std::get_if<bool>(&v);
    if (b == nullptr) return LineError(line, "'clamp' expects true or false");
    c.clamp = *b;
  } else if (key == "trials") {
    ASSIGN_OR_RETURN(c.trials, AsInteger(line, key, v));
  } else if (key == "seed") {
    ASSIGN_OR_RETURN(int64_t seed, AsInteger(line, key, v));
    c.base_seed = static_cast<uint64_t>(seed);
  } else {
    return LineError(line, absl::StrCat("unknown key '", key, "'"));
  }
  return absl::OkStatus();
}

}  // namespace

absl::StatusOr<std::vector<ExperimentConfig>> ParseSweepConfig(
    absl::string_view text) {
  std::vector<ExperimentConfig> configs;
  int line_number = 0;
  for (absl::string_view raw_line : absl::StrSplit(text, '\n')) {
    ++line_number;
    const absl::string_view line =
        absl::StripAsciiWhitespace(StripComment(raw_line));
    if (line.empty()) continue;
    if (line == "[[run]]") {
      configs.emplace_back();
      continue;
    }
    if (line.front() == '[') {
      return LineError(line_number,
                       absl::StrCat("unsupported table header '", line, "'"));
    }
    std::pair<absl::string_view, absl::string_view> kv =
        absl::StrSplit(line, absl::MaxSplits('=', 1));
    const absl::string_view key = absl::StripAsciiWhitespace(kv.first);
    const absl::string_view raw_value = absl::StripAsciiWhitespace(kv.second);
    if (key.empty() || raw_value.empty()) {
      return LineError(line_number, "expected key = value");
    }
    if (configs.empty()) {
      return LineError(line_number, "key outside of a [[run]] table");
    }
    ASSIGN_OR_RETURN(Value value, ParseValue(line_number, raw_value));
    RETURN_IF_ERROR(Apply(line_number, key, value, configs.back()));
  }
  return configs;
}

}  // namespace collider
