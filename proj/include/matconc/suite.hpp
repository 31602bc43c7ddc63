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
#include <functional>
#include <map>
#include <string>
#include <vector>

#include "matconc/report.hpp"

namespace matconc {

// Batch verification configuration. Empty ranges pick per-suite defaults.
struct SuiteConfig {
  std::string suite = "all";  // khintchine | theorem | adamczak | examples | tools | all
  std::vector<int> n_range;
  std::vector<int> d_range;
  std::vector<double> q_list = {1.0, 2.0};
  int instances_per_cell = 50;
  std::uint64_t master_seed = 1;
  long long mc_replicas = 100000;
  std::map<std::string, double> constants_overrides;
  std::string output_path;  // empty: no file written
};

struct SuiteSummary {
  long long records = 0;
  long long verified = 0;
  long long estimated = 0;
  long long violated = 0;
  double worst_upper_ratio = 0.0;  // smallest ratio among upper-bound checks; 0 when none
  std::string worst_upper_case;
  double adamczak_calibrated_c = 0.0;  // minimal C making every adamczak ratio >= 1
  double lower_calibrated_c = 0.0;     // largest C with C * lower-bound sum <= oracle
  bool any_violation() const { return violated > 0; }
};

// Runs every bound-vs-oracle comparison of the selected suite. Deterministic
// in master_seed; record order and bytes do not depend on the parallelism
// degree. Per-instance capacity problems surface as "estimated" records, not
// aborts.
SuiteSummary run_verification_suite(const SuiteConfig& cfg,
                                    std::vector<BoundReport>* records_out = nullptr);

// Newline-delimited records plus a '#'-prefixed human-readable summary table;
// byte-stable given identical records. An empty list yields a header-only file.
void write_report(const std::vector<BoundReport>& records, const std::string& path);
std::string render_report(const std::vector<BoundReport>& records);
std::vector<BoundReport> load_report(const std::string& path);

// Parallelism helpers. MATCONC_THREADS caps the worker count.
int thread_cap();
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn);

}  // namespace matconc
