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

#include "matconc/report.hpp"

#include <cstring>

#include <json.hpp>

#include "matconc/errors.hpp"

namespace matconc {

using Json = nlohmann::ordered_json;

double BoundReport::term(const std::string& name) const {
  for (const auto& [k, v] : terms) {
    if (k == name) return v;
  }
  throw InvalidInputError("BoundReport: no term named '" + name + "'");
}

void BoundReport::set_oracle(double o) {
  oracle = o;
  if (o > 0.0) ratio = value / o;
}

std::string BoundReport::to_json_line() const {
  Json j;
  j["bound"] = bound_name;
  j["q_or_t"] = q_or_t;
  j["value"] = value;
  Json t = Json::object();
  for (const auto& [k, v] : terms) t[k] = v;
  j["terms"] = std::move(t);
  j["r_convention"] = r_convention;
  j["constants"] = constants_note;
  j["digest"] = digest;
  if (oracle) j["oracle"] = *oracle;
  if (ratio) j["ratio"] = *ratio;
  if (stderr_ != 0.0) j["stderr"] = stderr_;
  j["verdict"] = verdict;
  return j.dump();
}

BoundReport BoundReport::from_json_line(const std::string& line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const std::exception& e) {
    throw IoError(std::string("BoundReport: bad record: ") + e.what());
  }
  BoundReport r;
  r.bound_name = j.at("bound").get<std::string>();
  r.q_or_t = j.at("q_or_t").get<double>();
  r.value = j.at("value").get<double>();
  for (auto it = j.at("terms").begin(); it != j.at("terms").end(); ++it) {
    r.terms.emplace_back(it.key(), it.value().get<double>());
  }
  r.r_convention = j.at("r_convention").get<std::string>();
  r.constants_note = j.at("constants").get<std::string>();
  r.digest = j.at("digest").get<std::string>();
  if (j.contains("oracle")) r.oracle = j["oracle"].get<double>();
  if (j.contains("ratio")) r.ratio = j["ratio"].get<double>();
  if (j.contains("stderr")) r.stderr_ = j["stderr"].get<double>();
  r.verdict = j.at("verdict").get<std::string>();
  return r;
}

Digest& Digest::add(std::uint64_t v) {
  for (int i = 0; i < 8; ++i) {
    h_ ^= (v >> (8 * i)) & 0xffULL;
    h_ *= 1099511628211ULL;
  }
  return *this;
}

Digest& Digest::add(double v) {
  std::uint64_t bits;
  std::memcpy(&bits, &v, sizeof bits);
  return add(bits);
}

Digest& Digest::add(const std::string& s) {
  for (unsigned char c : s) {
    h_ ^= c;
    h_ *= 1099511628211ULL;
  }
  return *this;
}

std::string Digest::hex() const {
  static const char* digits = "0123456789abcdef";
  std::string out(16, '0');
  for (int i = 0; i < 16; ++i) out[static_cast<size_t>(15 - i)] = digits[(h_ >> (4 * i)) & 0xf];
  return out;
}

}  // namespace matconc
