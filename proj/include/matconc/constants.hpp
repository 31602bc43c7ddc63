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

#include <cmath>
#include <map>
#include <string>

namespace matconc {

// Absolute constants that the source inequalities leave unspecified. They are
// configuration, not ground truth; every report names the convention in use.
// Everything else (4/sqrt(e), 128/sqrt(e), 256/sqrt(e), 16 r^{3/2},
// 11 r^{3/2}, 2 sqrt(er), 4 sqrt(2) er, 2 sqrt(2er), 4e sqrt(2), the
// Bernstein threshold) is pinned verbatim in the evaluators.
struct Constants {
  double tail_to_moment_c = 4.0;                  // tail-to-moment conversion
  double lower_bound_c = 1.0;                     // degenerate lower bound
  double adamczak_c = 1.0;                        // outer Adamczak constant
  double naive_chaos_c = 4.0 / std::sqrt(M_E);    // pinned so the naive and sharp
                                                  // chaos bounds differ only in the
                                                  // r-factor

  // Recognized keys: tail_to_moment_c, lower_bound_c, adamczak_c,
  // naive_chaos_c. Unknown keys raise ConfigError.
  static Constants with_overrides(const std::map<std::string, double>& overrides);
  std::string convention() const;
};

}  // namespace matconc
