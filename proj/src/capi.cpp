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

#include "matconc.h"

#include <cstdlib>
#include <cstring>
#include <string>

#include "matconc/adamczak.hpp"
#include "matconc/corpus.hpp"
#include "matconc/fixtures.hpp"
#include "matconc/matio.hpp"
#include "matconc/suite.hpp"

using namespace matconc;

struct matconc_coeffs_s {
  ChaosCoefficients value;
};

struct matconc_kernel_s {
  KernelTable kernel;
  DiscreteDistribution law;
};

namespace {

thread_local std::string g_last_error;

int code_of(const std::exception& e) {
  if (const auto* err = dynamic_cast<const Error*>(&e)) return static_cast<int>(err->kind());
  return MATCONC_ERR_INTERNAL;
}

template <class F>
int wrap(F&& fn) {
  try {
    fn();
    g_last_error.clear();
    return MATCONC_OK;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return code_of(e);
  } catch (...) {
    g_last_error = "unknown error";
    return MATCONC_ERR_INTERNAL;
  }
}

char* dup_string(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (out) std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::map<std::string, double> parse_overrides(const char* overrides) {
  std::map<std::string, double> out;
  if (!overrides || !*overrides) return out;
  std::string s(overrides);
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    const std::string item = s.substr(pos, comma - pos);
    const size_t eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("bad override '" + item + "' (expected name=value)");
    }
    try {
      size_t used = 0;
      const std::string value = item.substr(eq + 1);
      out[item.substr(0, eq)] = std::stod(value, &used);
      if (used != value.size()) throw std::invalid_argument(value);
    } catch (const std::exception&) {
      throw ConfigError("bad override value in '" + item + "'");
    }
    pos = comma + 1;
  }
  return out;
}

std::vector<int> parse_int_list(const char* list) {
  std::vector<int> out;
  if (!list || !*list) return out;
  std::string s(list);
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    try {
      out.push_back(std::stoi(s.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw ConfigError("bad integer list '" + s + "'");
    }
    pos = comma + 1;
  }
  return out;
}

std::vector<double> parse_double_list(const char* list) {
  std::vector<double> out;
  if (!list || !*list) return out;
  std::string s(list);
  size_t pos = 0;
  while (pos < s.size()) {
    size_t comma = s.find(',', pos);
    if (comma == std::string::npos) comma = s.size();
    try {
      out.push_back(std::stod(s.substr(pos, comma - pos)));
    } catch (const std::exception&) {
      throw ConfigError("bad numeric list '" + s + "'");
    }
    pos = comma + 1;
  }
  return out;
}

BoundReport eval_kernel_bound(const matconc_kernel* k, const std::string& bound, double q_or_t,
                              const Constants& constants) {
  KernelExpectations ke(k->kernel, k->law);
  if (bound == "theorem-full") return theorem_moment_bound(ke, q_or_t, TheoremVariant::Full, constants);
  if (bound == "theorem-corollary") {
    return theorem_moment_bound(ke, q_or_t, TheoremVariant::Corollary, constants);
  }
  if (bound == "theorem-refined") {
    return theorem_moment_bound(ke, q_or_t, TheoremVariant::Refined, constants);
  }
  if (bound == "lower-bound") return lower_bound_terms(ke, q_or_t, constants);
  if (bound == "adamczak-full" || bound == "adamczak-simplified") {
    AdamczakTerms terms = adamczak_terms(ke, q_or_t,
                                         bound == "adamczak-full"
                                             ? AdamczakTerms::Variant::Full
                                             : AdamczakTerms::Variant::Simplified,
                                         constants);
    BoundReport rep = adamczak_terms_report(terms, q_or_t);
    rep.digest = Digest().add(bound).add(q_or_t).hex();
    return rep;
  }
  if (bound == "adamczak-moment") {
    AdamczakTerms terms = adamczak_terms(ke, q_or_t, AdamczakTerms::Variant::Full, constants);
    return adamczak_moment_tail(terms, terms.mean_norm_estimate, q_or_t, /*tail_form=*/false,
                                constants);
  }
  if (bound == "concentration-tail") {
    BoundReport rep;
    concentration_tail(ke, k->kernel.max_value_norm(), q_or_t, constants, &rep);
    return rep;
  }
  throw ConfigError("unknown kernel bound '" + bound + "'");
}

}  // namespace

extern "C" {

const char* matconc_version(void) { return "matconc 1.0.0"; }

size_t matconc_last_error(char* buf, size_t buflen) {
  if (buf && buflen > 0) {
    const size_t n = std::min(buflen - 1, g_last_error.size());
    std::memcpy(buf, g_last_error.data(), n);
    buf[n] = '\0';
  }
  return g_last_error.size();
}

void matconc_string_free(char* s) { std::free(s); }

int matconc_coeffs_load(const char* dir, matconc_coeffs** out) {
  return wrap([&] {
    if (!dir || !out) throw InvalidInputError("matconc_coeffs_load: null argument");
    *out = new matconc_coeffs_s{import_coefficients(dir)};
  });
}

void matconc_coeffs_free(matconc_coeffs* c) { delete c; }

int matconc_coeffs_shape(const matconc_coeffs* c, int32_t* n, int32_t* d) {
  return wrap([&] {
    if (!c) throw InvalidInputError("matconc_coeffs_shape: null handle");
    if (n) *n = c->value.n();
    if (d) *d = static_cast<int32_t>(c->value.d());
  });
}

int matconc_kernel_load(const char* dir, matconc_kernel** out) {
  return wrap([&] {
    if (!dir || !out) throw InvalidInputError("matconc_kernel_load: null argument");
    auto [kernel, law] = import_kernel(dir);
    *out = new matconc_kernel_s{std::move(kernel), std::move(law)};
  });
}

void matconc_kernel_free(matconc_kernel* k) { delete k; }

int matconc_kernel_shape(const matconc_kernel* k, int32_t* n, int32_t* d, int32_t* support) {
  return wrap([&] {
    if (!k) throw InvalidInputError("matconc_kernel_shape: null handle");
    if (n) *n = k->kernel.n();
    if (d) *d = static_cast<int32_t>(k->kernel.d());
    if (support) *support = k->kernel.support();
  });
}

int matconc_example_export(const char* name, int32_t n, int32_t d, const char* dir) {
  return wrap([&] {
    if (!name || !dir) throw InvalidInputError("matconc_example_export: null argument");
    const std::string which(name);
    if (which == "example1") {
      export_coefficients(*build_example1(n, d).coeffs, dir);
    } else if (which == "example2") {
      export_coefficients(*build_example2(n, d).coeffs, dir);
    } else if (which == "polynomial-chaos") {
      SplitMix64 rng(0x9e1ceULL);
      ChaosCoefficients a = random_chaos(n, d, rng, /*symmetric=*/true);
      const double s2 = std::sqrt(2.0);
      DiscreteDistribution law({{"-s2", -s2, 0.25}, {"0", 0.0, 0.5}, {"+s2", s2, 0.25}});
      ExampleInstance inst = build_polynomial_chaos(a, law);
      export_kernel(*inst.kernel, law, dir);
    } else {
      throw ConfigError("unknown example '" + which + "'");
    }
  });
}

int matconc_bound_eval_kernel(const matconc_kernel* k, const char* bound, double q_or_t,
                              const char* overrides, char** record) {
  return wrap([&] {
    if (!k || !bound || !record) throw InvalidInputError("matconc_bound_eval_kernel: null argument");
    const Constants constants = Constants::with_overrides(parse_overrides(overrides));
    BoundReport rep = eval_kernel_bound(k, bound, q_or_t, constants);
    rep.constants_note += rep.constants_note.empty() ? constants.convention()
                                                     : ";" + constants.convention();
    *record = dup_string(rep.to_json_line());
  });
}

int matconc_bound_eval_coeffs(const matconc_coeffs* c, const char* bound, double q_or_t,
                              const char* overrides, char** record) {
  return wrap([&] {
    if (!c || !bound || !record) throw InvalidInputError("matconc_bound_eval_coeffs: null argument");
    const Constants constants = Constants::with_overrides(parse_overrides(overrides));
    if (std::string(bound) != "khintchine") {
      throw ConfigError(std::string("unknown coefficient bound '") + bound + "'");
    }
    KhintchineBounds kb = khintchine_bounds(c->value, q_or_t, constants);
    VarianceProxies vp = variance_proxies(c->value);
    BoundReport rep;
    rep.bound_name = "khintchine";
    rep.q_or_t = q_or_t;
    rep.value = kb.upper;
    rep.add_term("lower", kb.lower);
    rep.add_term("naive_upper", kb.naive_upper);
    rep.add_term("gg_star_norm", vp.gg_star_norm);
    rep.add_term("sum_sq_norm", vp.sum_sq_norm);
    rep.r_convention = "r=max(q,log d)";
    rep.constants_note = "4/sqrt(e);" + constants.convention();
    rep.digest = Digest().add("khintchine").add(q_or_t).hex();
    try {
      MomentEstimate exact = exact_chaos_moment(c->value, q_or_t);
      rep.set_oracle(exact.value);
      rep.verdict = rep.value >= exact.value * (1.0 - 1e-9) ? "verified" : "violated";
    } catch (const CapacityError&) {
      // No oracle above the enumeration cap; the bound value stands alone.
    }
    *record = dup_string(rep.to_json_line());
  });
}

int matconc_moment_kernel(const matconc_kernel* k, double q, int decoupled, int64_t mc_replicas,
                          uint64_t seed, char** record) {
  return wrap([&] {
    if (!k || !record) throw InvalidInputError("matconc_moment_kernel: null argument");
    const UMode mode = decoupled ? UMode::Decoupled : UMode::Coupled;
    MomentEstimate est = mc_replicas > 0 ? mc_U_moment(k->kernel, k->law, q, mode, mc_replicas, seed)
                                         : exact_U_moment(k->kernel, k->law, q, mode);
    *record = dup_string(est.to_line());
  });
}

int matconc_moment_coeffs(const matconc_coeffs* c, double q, int64_t mc_replicas, uint64_t seed,
                          char** record) {
  return wrap([&] {
    if (!c || !record) throw InvalidInputError("matconc_moment_coeffs: null argument");
    MomentEstimate est = mc_replicas > 0 ? mc_chaos_moment(c->value, q, mc_replicas, seed)
                                         : exact_chaos_moment(c->value, q);
    *record = dup_string(est.to_line());
  });
}

int matconc_verify(const char* suite, uint64_t master_seed, const char* out_path,
                   const char* n_list, const char* d_list, const char* q_list,
                   int32_t instances_per_cell, int64_t mc_replicas, const char* overrides,
                   matconc_suite_summary* summary) {
  return wrap([&] {
    if (!suite) throw InvalidInputError("matconc_verify: null suite");
    SuiteConfig cfg;
    cfg.suite = suite;
    cfg.master_seed = master_seed;
    if (out_path && *out_path) cfg.output_path = out_path;
    cfg.n_range = parse_int_list(n_list);
    cfg.d_range = parse_int_list(d_list);
    const std::vector<double> qs = parse_double_list(q_list);
    if (q_list && *q_list) cfg.q_list = qs;  // empty string means defaults
    if (instances_per_cell > 0) cfg.instances_per_cell = instances_per_cell;
    if (mc_replicas > 0) cfg.mc_replicas = mc_replicas;
    cfg.constants_overrides = parse_overrides(overrides);
    SuiteSummary s = run_verification_suite(cfg);
    if (summary) {
      summary->records = s.records;
      summary->verified = s.verified;
      summary->estimated = s.estimated;
      summary->violated = s.violated;
      summary->worst_upper_ratio = s.worst_upper_ratio;
      summary->adamczak_calibrated_c = s.adamczak_calibrated_c;
      summary->lower_calibrated_c = s.lower_calibrated_c;
    }
  });
}

}  // extern "C"
