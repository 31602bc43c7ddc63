// Copyright 2026 The matconc authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace matconc {

// Structured record of one bound evaluation: the computed value, the named
// constituent terms, the r-convention and constants convention in use, and
// (when available) the oracle it was compared against. Serialized as one JSON
// line; byte-stable given identical inputs.
struct BoundReport {
  std::string bound_name;
  double q_or_t = 0.0;
  double value = 0.0;
  std::vector<std::pair<std::string, double>> terms;  // insertion-ordered
  std::string r_convention;
  std::string constants_note;
  std::string digest;
  std::optional<double> oracle;
  std::optional<double> ratio;  // value / oracle when oracle > 0
  double stderr_ = 0.0;         // nonzero when a Monte Carlo fallback was used
  // "verified" (exact oracle, check passed), "estimated" (Monte Carlo was
  // involved), "violated", or "info" (no pass/fail semantics).
  std::string verdict = "info";
  // Transient check classification ("upper", "equality", ...); not serialized.
  std::string check_kind;

  void add_term(const std::string& name, double v) { terms.emplace_back(name, v); }
  double term(const std::string& name) const;
  void set_oracle(double o);

  std::string to_json_line() const;
  static BoundReport from_json_line(const std::string& line);
};

// FNV-1a accumulator for input digests recorded in reports.
class Digest {
 public:
  Digest& add(std::uint64_t v);
  Digest& add(double v);
  Digest& add(const std::string& s);
  std::string hex() const;

 private:
  std::uint64_t h_ = 1469598103934665603ULL;
};

}  // namespace matconc
