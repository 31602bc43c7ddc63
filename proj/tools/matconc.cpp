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

// Verification driver. Talks to the library exclusively through the C API in
// matconc.h, the same surface other language bindings would use.

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matconc.h"

namespace {

std::string last_error() {
  char buf[1024];
  matconc_last_error(buf, sizeof buf);
  return buf;
}

int fail(int code, const std::string& what) {
  std::fprintf(stderr, "matconc: %s: %s\n", what.c_str(), last_error().c_str());
  return code;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (const auto& s : items) {
    if (!out.empty()) out += ',';
    out += s;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"matconc: moment and tail bounds for matrix U-statistics, verified numerically"};
  app.require_subcommand(1);

  // verify ------------------------------------------------------------------
  auto* verify = app.add_subcommand("verify", "run a bound-vs-oracle verification suite");
  std::string suite = "all", out_path, n_list, d_list, q_list;
  std::uint64_t seed = 1;
  std::int64_t replicas = 0;
  int instances = 0;
  std::vector<std::string> sets;
  verify->add_option("--suite", suite,
                     "khintchine | theorem | adamczak | examples | tools | all");
  verify->add_option("--seed", seed, "master seed");
  verify->add_option("--out", out_path, "report path (newline-delimited records)");
  verify->add_option("--n", n_list, "comma-separated n values");
  verify->add_option("--d", d_list, "comma-separated d values");
  verify->add_option("--q", q_list, "comma-separated q values");
  verify->add_option("--replicas", replicas, "Monte Carlo replicas for tail checks");
  verify->add_option("--instances", instances, "instances per (n,d,q) cell");
  verify->add_option("--set", sets, "constant override name=value")->take_all();

  // example -----------------------------------------------------------------
  auto* example = app.add_subcommand("example", "build and export a closed-form instance");
  std::string ex_name, ex_dir;
  int ex_n = 4, ex_d = 4;
  example->add_option("name", ex_name, "example1 | example2 | polynomial-chaos")->required();
  example->add_option("--n", ex_n, "index count n");
  example->add_option("--d", ex_d, "matrix dimension d");
  example->add_option("--export", ex_dir, "output directory")->required();

  // bound -------------------------------------------------------------------
  auto* bound = app.add_subcommand("bound", "evaluate a named bound on a stored instance");
  std::string bound_name, kernel_dir, coeffs_dir;
  double bound_q = 1.0;
  std::vector<std::string> bound_sets;
  bound->add_option("name", bound_name,
                    "khintchine | theorem-full | theorem-corollary | theorem-refined | "
                    "lower-bound | adamczak-full | adamczak-simplified | adamczak-moment | "
                    "concentration-tail")
      ->required();
  bound->add_option("--kernel", kernel_dir, "kernel directory (manifest.txt + records)");
  bound->add_option("--coeffs", coeffs_dir, "coefficient directory (A_<i1>_<i2>.mat)");
  bound->add_option("--q", bound_q, "moment order q (or t for tail bounds)");
  bound->add_option("--set", bound_sets, "constant override name=value")->take_all();

  // moment ------------------------------------------------------------------
  auto* moment = app.add_subcommand("moment", "exact or Monte Carlo moment oracle");
  std::string m_kernel, m_coeffs;
  double m_q = 1.0;
  bool m_decoupled = false;
  std::int64_t m_replicas = 0;
  std::uint64_t m_seed = 1;
  moment->add_option("--kernel", m_kernel, "kernel directory");
  moment->add_option("--coeffs", m_coeffs, "coefficient directory");
  moment->add_option("--q", m_q, "moment order q");
  moment->add_flag("--decoupled", m_decoupled, "decoupled statistic (kernel input only)");
  moment->add_option("--replicas", m_replicas, "Monte Carlo replicas (0 = exact enumeration)");
  moment->add_option("--seed", m_seed, "Monte Carlo seed");

  CLI11_PARSE(app, argc, argv);

  if (*verify) {
    matconc_suite_summary summary{};
    const std::string overrides = join(sets);
    int rc = matconc_verify(suite.c_str(), seed, out_path.empty() ? nullptr : out_path.c_str(),
                            n_list.c_str(), d_list.c_str(), q_list.c_str(), instances, replicas,
                            overrides.empty() ? nullptr : overrides.c_str(), &summary);
    if (rc != MATCONC_OK) return fail(rc, "verify");
    std::printf("suite=%s records=%lld verified=%lld estimated=%lld violated=%lld\n", suite.c_str(),
                static_cast<long long>(summary.records), static_cast<long long>(summary.verified),
                static_cast<long long>(summary.estimated),
                static_cast<long long>(summary.violated));
    if (summary.worst_upper_ratio > 0.0) {
      std::printf("worst-upper-ratio=%.6g\n", summary.worst_upper_ratio);
    }
    if (summary.adamczak_calibrated_c > 0.0) {
      std::printf("adamczak-calibrated-c=%.6g\n", summary.adamczak_calibrated_c);
    }
    if (summary.lower_calibrated_c > 0.0) {
      std::printf("lower-calibrated-c=%.6g\n", summary.lower_calibrated_c);
    }
    return summary.violated > 0 ? 1 : 0;
  }

  if (*example) {
    int rc = matconc_example_export(ex_name.c_str(), ex_n, ex_d, ex_dir.c_str());
    if (rc != MATCONC_OK) return fail(rc, "example");
    std::printf("exported %s (n=%d, d=%d) to %s\n", ex_name.c_str(), ex_n, ex_d, ex_dir.c_str());
    return 0;
  }

  if (*bound) {
    if (kernel_dir.empty() == coeffs_dir.empty()) {
      std::fprintf(stderr, "matconc: bound needs exactly one of --kernel or --coeffs\n");
      return MATCONC_ERR_CONFIG;
    }
    const std::string overrides = join(bound_sets);
    char* record = nullptr;
    int rc;
    if (!kernel_dir.empty()) {
      matconc_kernel* k = nullptr;
      rc = matconc_kernel_load(kernel_dir.c_str(), &k);
      if (rc != MATCONC_OK) return fail(rc, "load kernel");
      rc = matconc_bound_eval_kernel(k, bound_name.c_str(), bound_q,
                                     overrides.empty() ? nullptr : overrides.c_str(), &record);
      matconc_kernel_free(k);
    } else {
      matconc_coeffs* c = nullptr;
      rc = matconc_coeffs_load(coeffs_dir.c_str(), &c);
      if (rc != MATCONC_OK) return fail(rc, "load coefficients");
      rc = matconc_bound_eval_coeffs(c, bound_name.c_str(), bound_q,
                                     overrides.empty() ? nullptr : overrides.c_str(), &record);
      matconc_coeffs_free(c);
    }
    if (rc != MATCONC_OK) return fail(rc, "bound " + bound_name);
    std::printf("%s\n", record);
    matconc_string_free(record);
    return 0;
  }

  if (*moment) {
    if (m_kernel.empty() == m_coeffs.empty()) {
      std::fprintf(stderr, "matconc: moment needs exactly one of --kernel or --coeffs\n");
      return MATCONC_ERR_CONFIG;
    }
    char* record = nullptr;
    int rc;
    if (!m_kernel.empty()) {
      matconc_kernel* k = nullptr;
      rc = matconc_kernel_load(m_kernel.c_str(), &k);
      if (rc != MATCONC_OK) return fail(rc, "load kernel");
      rc = matconc_moment_kernel(k, m_q, m_decoupled ? 1 : 0, m_replicas, m_seed, &record);
      matconc_kernel_free(k);
    } else {
      matconc_coeffs* c = nullptr;
      rc = matconc_coeffs_load(m_coeffs.c_str(), &c);
      if (rc != MATCONC_OK) return fail(rc, "load coefficients");
      rc = matconc_moment_coeffs(c, m_q, m_replicas, m_seed, &record);
      matconc_coeffs_free(c);
    }
    if (rc != MATCONC_OK) return fail(rc, "moment");
    std::printf("%s\n", record);
    matconc_string_free(record);
    return 0;
  }

  return 0;
}
