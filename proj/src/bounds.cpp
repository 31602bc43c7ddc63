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

#include "matconc/bounds.hpp"

#include <cmath>

#include "matconc/rng.hpp"
#include "internal.hpp"

namespace matconc {

namespace {

constexpr double kSqrtE = 1.6487212707001281468;  // sqrt(e)

std::string digest_kernel(const KernelTable& h, const DiscreteDistribution& p, double q,
                          const std::string& tag) {
  Digest dg;
  dg.add(tag);
  dg.add(static_cast<std::uint64_t>(h.n())).add(static_cast<std::uint64_t>(h.d()));
  for (int i1 = 0; i1 < h.n(); ++i1) {
    for (int i2 = 0; i2 < h.n(); ++i2) {
      if (i1 == i2) continue;
      for (int x = 0; x < h.support(); ++x) {
        for (int y = 0; y < h.support(); ++y) {
          const Matrix& v = h.at(i1, i2, x, y);
          for (Index r = 0; r < v.rows(); ++r) {
            for (Index c = 0; c < v.cols(); ++c) dg.add(v(r, c).real()).add(v(r, c).imag());
          }
        }
      }
    }
  }
  for (int i = 0; i < p.size(); ++i) dg.add(p.payload(i)).add(p.prob(i));
  dg.add(q);
  return dg.hex();
}

std::string digest_laws(const std::vector<MatrixLaw>& laws, double q, const std::string& tag) {
  Digest dg;
  dg.add(tag);
  for (const auto& law : laws) {
    for (size_t k = 0; k < law.values.size(); ++k) {
      const Matrix& v = law.values[k].mat();
      for (Index r = 0; r < v.rows(); ++r) {
        for (Index c = 0; c < v.cols(); ++c) dg.add(v(r, c).real()).add(v(r, c).imag());
      }
      dg.add(law.probs[k]);
    }
  }
  dg.add(q);
  return dg.hex();
}

void validate_laws(const std::vector<MatrixLaw>& laws, const char* who) {
  if (laws.empty()) throw InvalidInputError(std::string(who) + ": no summands");
  const Index d = laws.front().values.empty() ? 0 : laws.front().values.front().dim();
  for (const auto& law : laws) {
    if (law.values.empty() || law.values.size() != law.probs.size()) {
      throw InvalidInputError(std::string(who) + ": malformed summand law");
    }
    double total = 0.0;
    for (double pr : law.probs) {
      if (!(pr >= 0.0)) throw InvalidInputError(std::string(who) + ": negative probability");
      total += pr;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw InvalidInputError(std::string(who) + ": probabilities sum to " + std::to_string(total));
    }
    for (const auto& v : law.values) {
      if (v.dim() != d) throw InvalidInputError(std::string(who) + ": dimension mismatch");
    }
  }
}

}  // namespace

KernelExpectations::KernelExpectations(const KernelTable& h, const DiscreteDistribution& p,
                                       long long cap, long long mc_replicas, std::uint64_t mc_seed)
    : h_(h), p_(p), cap_(cap), mc_replicas_(mc_replicas), mc_seed_(mc_seed),
      n_(h.n()), s_(h.support()), d_(h.d()) {
  if (s_ != p.size()) throw InvalidInputError("KernelExpectations: support size mismatch");

  e2h2_.assign(static_cast<size_t>(n_) * n_ * s_, Matrix::Zero(d_, d_));
  h2_norm_.assign(static_cast<size_t>(n_) * n_ * s_ * s_, 0.0);
  Matrix var_total = Matrix::Zero(d_, d_);
  for (int i1 = 0; i1 < n_; ++i1) {
    for (int i2 = 0; i2 < n_; ++i2) {
      if (i1 == i2) continue;
      for (int x = 0; x < s_; ++x) {
        Matrix acc = Matrix::Zero(d_, d_);
        for (int y = 0; y < s_; ++y) {
          const Matrix& v = h_.at(i1, i2, x, y);
          const double nrm = spectral_norm_raw(v);
          h2_norm_[(static_cast<size_t>(i1) * n_ + i2) * s_ * s_ + static_cast<size_t>(x) * s_ + y] =
              nrm * nrm;
          acc += p_.prob(y) * (v * v);
        }
        e2h2_[(static_cast<size_t>(i1) * n_ + i2) * s_ + x] = acc;
        var_total += p_.prob(x) * acc;
      }
    }
  }
  t_var_ = std::sqrt(spectral_norm_raw(var_total));

  row_e2_.assign(static_cast<size_t>(n_) * s_, Matrix::Zero(d_, d_));
  rho_.assign(static_cast<size_t>(n_) * s_, 0.0);
  double row_sum = 0.0;
  for (int i1 = 0; i1 < n_; ++i1) {
    for (int x = 0; x < s_; ++x) {
      Matrix acc = Matrix::Zero(d_, d_);
      for (int i2 = 0; i2 < n_; ++i2) {
        if (i2 == i1) continue;
        acc += e2h2(i1, i2, x);
      }
      rho_[static_cast<size_t>(i1) * s_ + x] = spectral_norm_raw(acc);
      row_e2_[static_cast<size_t>(i1) * s_ + x] = std::move(acc);
    }
    for (int x = 0; x < s_; ++x) row_sum += p_.prob(x) * rho_[static_cast<size_t>(i1) * s_ + x];
  }
  row_sum_sqrt_ = std::sqrt(row_sum);
}

TermValue KernelExpectations::t_max(double q) {
  auto it = t_max_memo_.find(q);
  if (it != t_max_memo_.end()) return it->second;

  auto integrand = [&](const std::vector<int>& x1, const std::vector<int>& x2) {
    double worst = 0.0;
    for (int i1 = 0; i1 < n_; ++i1) {
      Matrix acc = Matrix::Zero(d_, d_);
      for (int i2 = 0; i2 < n_; ++i2) {
        if (i2 == i1) continue;
        const Matrix& v = h_.at(i1, i2, x1[static_cast<size_t>(i1)], x2[static_cast<size_t>(i2)]);
        acc += v * v;
      }
      worst = std::max(worst, spectral_norm_raw(acc));
    }
    return worst;
  };

  TermValue out;
  const double count = internal::ipow_count(s_, 2 * n_);
  if (count <= static_cast<double>(cap_)) {
    double sum = 0.0;
    internal::for_each_config(2 * n_, s_, [&](const std::vector<int>& c) {
      double w = 1.0;
      for (int v : c) w *= p_.prob(v);
      if (w == 0.0) return;
      std::vector<int> x1(c.begin(), c.begin() + n_), x2(c.begin() + n_, c.end());
      sum += w * std::pow(integrand(x1, x2), q);
    });
    out.value = internal::root_2q(sum, q);
  } else {
    std::vector<double> samples(static_cast<size_t>(mc_replicas_));
    std::vector<double> cdf(static_cast<size_t>(s_));
    double acc = 0.0;
    for (int i = 0; i < s_; ++i) {
      acc += p_.prob(i);
      cdf[static_cast<size_t>(i)] = acc;
    }
    for (long long r = 0; r < mc_replicas_; ++r) {
      SplitMix64 rng(mix_seed(mc_seed_, static_cast<std::uint64_t>(r)));
      auto draw = [&]() {
        const double u = rng.uniform01();
        for (int i = 0; i < s_; ++i) {
          if (u < cdf[static_cast<size_t>(i)]) return i;
        }
        return s_ - 1;
      };
      std::vector<int> x1(static_cast<size_t>(n_)), x2(static_cast<size_t>(n_));
      for (int i = 0; i < n_; ++i) x1[static_cast<size_t>(i)] = draw();
      for (int i = 0; i < n_; ++i) x2[static_cast<size_t>(i)] = draw();
      samples[static_cast<size_t>(r)] = std::sqrt(integrand(x1, x2));
    }
    // integrand is already a squared norm; samples carry its square root so
    // the shared 2q-root helper applies unchanged.
    MomentEstimate est = internal::moment_from_norm_samples(samples, q);
    out.value = est.value;
    out.stderr_ = est.stderr_;
    out.exact = false;
  }
  t_max_memo_[q] = out;
  return out;
}

void KernelExpectations::first_sample_pass(double q, PairTerm& out) {
  const double count = internal::ipow_count(s_, n_);
  auto eval = [&](const std::vector<int>& x1, double& g_norm, double& s_norm) {
    g_norm = spectral_norm(e2_gg_star(h_, p_, x1));
    Matrix acc = Matrix::Zero(d_, d_);
    for (int i1 = 0; i1 < n_; ++i1) {
      acc += row_e2_[static_cast<size_t>(i1) * s_ + x1[static_cast<size_t>(i1)]];
    }
    s_norm = spectral_norm_raw(acc);
  };

  if (count <= static_cast<double>(cap_)) {
    double g_sum = 0.0, s_sum = 0.0;
    internal::for_each_config(n_, s_, [&](const std::vector<int>& x1) {
      double w = 1.0;
      for (int v : x1) w *= p_.prob(v);
      if (w == 0.0) return;
      double g = 0.0, s = 0.0;
      eval(x1, g, s);
      g_sum += w * std::pow(g, q);
      s_sum += w * std::pow(s, q);
    });
    out.tg.value = internal::root_2q(g_sum, q);
    out.lsum.value = internal::root_2q(s_sum, q);
  } else {
    std::vector<double> g_samples(static_cast<size_t>(mc_replicas_));
    std::vector<double> s_samples(static_cast<size_t>(mc_replicas_));
    std::vector<double> cdf(static_cast<size_t>(s_));
    double acc = 0.0;
    for (int i = 0; i < s_; ++i) {
      acc += p_.prob(i);
      cdf[static_cast<size_t>(i)] = acc;
    }
    for (long long r = 0; r < mc_replicas_; ++r) {
      SplitMix64 rng(mix_seed(mc_seed_ ^ 0x1157ULL, static_cast<std::uint64_t>(r)));
      std::vector<int> x1(static_cast<size_t>(n_));
      for (int i = 0; i < n_; ++i) {
        const double u = rng.uniform01();
        int pick = s_ - 1;
        for (int k = 0; k < s_; ++k) {
          if (u < cdf[static_cast<size_t>(k)]) { pick = k; break; }
        }
        x1[static_cast<size_t>(i)] = pick;
      }
      double g = 0.0, s = 0.0;
      eval(x1, g, s);
      g_samples[static_cast<size_t>(r)] = std::sqrt(g);
      s_samples[static_cast<size_t>(r)] = std::sqrt(s);
    }
    MomentEstimate ge = internal::moment_from_norm_samples(g_samples, q);
    MomentEstimate se = internal::moment_from_norm_samples(s_samples, q);
    out.tg = {ge.value, ge.stderr_, false};
    out.lsum = {se.value, se.stderr_, false};
  }
}

TermValue KernelExpectations::t_g(double q) {
  auto it = sample_memo_.find(q);
  if (it == sample_memo_.end()) {
    PairTerm pt;
    first_sample_pass(q, pt);
    it = sample_memo_.emplace(q, pt).first;
  }
  return it->second.tg;
}

TermValue KernelExpectations::l_sum(double q) {
  auto it = sample_memo_.find(q);
  if (it == sample_memo_.end()) {
    PairTerm pt;
    first_sample_pass(q, pt);
    it = sample_memo_.emplace(q, pt).first;
  }
  return it->second.lsum;
}

double KernelExpectations::t_max_e2(double q) {
  // max over i1 of rho_{i1}(X_{i1}): independent coordinates, exact via the
  // product CDF.
  std::vector<std::vector<std::pair<double, double>>> vars;
  vars.reserve(static_cast<size_t>(n_));
  for (int i1 = 0; i1 < n_; ++i1) {
    std::vector<std::pair<double, double>> v;
    for (int x = 0; x < s_; ++x) v.emplace_back(rho(i1, x), p_.prob(x));
    vars.push_back(std::move(v));
  }
  return internal::root_2q(internal::expected_max_pow(std::move(vars), q), q);
}

double KernelExpectations::t_rowmax(double q) {
  double total = 0.0;
  for (int i1 = 0; i1 < n_; ++i1) {
    for (int x = 0; x < s_; ++x) {
      std::vector<std::vector<std::pair<double, double>>> vars;
      for (int i2 = 0; i2 < n_; ++i2) {
        if (i2 == i1) continue;
        std::vector<std::pair<double, double>> v;
        for (int y = 0; y < s_; ++y) {
          v.emplace_back(
              h2_norm_[(static_cast<size_t>(i1) * n_ + i2) * s_ * s_ + static_cast<size_t>(x) * s_ + y],
              p_.prob(y));
        }
        vars.push_back(std::move(v));
      }
      total += p_.prob(x) * internal::expected_max_pow(std::move(vars), q);
    }
  }
  return internal::root_2q(total, q);
}

double KernelExpectations::gamma_sum(double q) {
  double total = 0.0;
  for (int i1 = 0; i1 < n_; ++i1) {
    for (int x = 0; x < s_; ++x) total += p_.prob(x) * std::pow(rho(i1, x), q);
  }
  return internal::root_2q(total, q);
}

double KernelExpectations::d_sum(double q) {
  double total = 0.0;
  for (int i1 = 0; i1 < n_; ++i1) {
    for (int i2 = 0; i2 < n_; ++i2) {
      if (i1 == i2) continue;
      for (int x = 0; x < s_; ++x) {
        for (int y = 0; y < s_; ++y) {
          total += p_.prob(x) * p_.prob(y) *
                   std::pow(h2_norm_[(static_cast<size_t>(i1) * n_ + i2) * s_ * s_ +
                                     static_cast<size_t>(x) * s_ + y],
                            q);
        }
      }
    }
  }
  return internal::root_2q(total, q);
}

double KernelExpectations::e_e2h2_norm(int i1, int i2) const {
  double total = 0.0;
  for (int x = 0; x < s_; ++x) total += p_.prob(x) * spectral_norm_raw(e2h2(i1, i2, x));
  return total;
}

BoundReport rosenthal_moment_bound(const std::vector<MatrixLaw>& laws, double q,
                                   const Constants& constants) {
  validate_laws(laws, "rosenthal_moment_bound");
  if (q < 1.0) throw InvalidInputError("rosenthal_moment_bound: q must be >= 1");
  const Index d = laws.front().values.front().dim();
  const double r = std::max(q, std::log(static_cast<double>(d)));

  Matrix var_total = Matrix::Zero(d, d);
  std::vector<std::vector<std::pair<double, double>>> centered_norms;
  for (const auto& law : laws) {
    Matrix mean = Matrix::Zero(d, d);
    for (size_t k = 0; k < law.values.size(); ++k) mean += law.probs[k] * law.values[k].mat();
    std::vector<std::pair<double, double>> norms;
    for (size_t k = 0; k < law.values.size(); ++k) {
      Matrix c = law.values[k].mat() - mean;
      var_total += law.probs[k] * (c * c);
      norms.emplace_back(spectral_norm_raw(0.5 * (c + c.adjoint().eval())), law.probs[k]);
    }
    centered_norms.push_back(std::move(norms));
  }
  const double var_term = std::sqrt(spectral_norm_raw(var_total));
  const double emax_root =
      internal::root_2q(internal::expected_max_pow(std::move(centered_norms), 2.0 * q), q);

  BoundReport rep;
  rep.bound_name = "rosenthal";
  rep.q_or_t = q;
  const double first = 2.0 * std::sqrt(M_E * r) * var_term;
  const double second = 4.0 * std::sqrt(2.0) * M_E * r * emax_root;
  rep.value = first + second;
  rep.add_term("r", r);
  rep.add_term("variance_term", var_term);
  rep.add_term("max_term", emax_root);
  rep.add_term("first", first);
  rep.add_term("second", second);
  rep.r_convention = "r=max(q,log d)";
  rep.constants_note = "2*sqrt(er),4*sqrt(2)*er";
  if (q != std::floor(q)) rep.constants_note += ";q non-integer (stated hypothesis needs integer q)";
  rep.digest = digest_laws(laws, q, "rosenthal");
  return rep;
}

BoundReport rosenthal_psd_bound(const std::vector<MatrixLaw>& laws, double q,
                                long long oracle_cap, const Constants& constants) {
  validate_laws(laws, "rosenthal_psd_bound");
  if (q < 1.0) throw InvalidInputError("rosenthal_psd_bound: q must be >= 1");
  const Index d = laws.front().values.front().dim();
  for (const auto& law : laws) {
    for (const auto& v : law.values) {
      Eigen::VectorXd ev = herm_eigenvalues(v.mat());
      if (ev(0) < -1e-12 * std::max(1.0, spectral_norm(v))) {
        throw InvalidInputError("rosenthal_psd_bound: non-PSD support point (min eigenvalue " +
                                std::to_string(ev(0)) + ")");
      }
    }
  }
  const double r = std::max(q, std::log(static_cast<double>(d)));

  Matrix mean_total = Matrix::Zero(d, d);
  std::vector<std::vector<std::pair<double, double>>> norms;
  for (const auto& law : laws) {
    std::vector<std::pair<double, double>> v;
    for (size_t k = 0; k < law.values.size(); ++k) {
      mean_total += law.probs[k] * law.values[k].mat();
      v.emplace_back(spectral_norm(law.values[k]), law.probs[k]);
    }
    norms.push_back(std::move(v));
  }
  const double mean_term = std::sqrt(spectral_norm_raw(mean_total));
  const double emax = internal::expected_max_pow(std::move(norms), q);
  const double max_term = internal::root_2q(emax, q);

  BoundReport rep;
  rep.bound_name = "rosenthal-psd";
  rep.q_or_t = q;
  rep.value = mean_term + 2.0 * std::sqrt(2.0 * M_E * r) * max_term;
  rep.add_term("r", r);
  rep.add_term("mean_term", mean_term);
  rep.add_term("max_term", max_term);
  rep.r_convention = "r=max(q,log d)";
  rep.constants_note = "2*sqrt(2er)";
  rep.digest = digest_laws(laws, q, "rosenthal-psd");
  try {
    const double mean_pow = enumerate_sum_norm_pow(laws, q, /*centered=*/false, oracle_cap);
    rep.set_oracle(internal::root_2q(mean_pow, q));
  } catch (const CapacityError&) {
    // Oracle omitted above the cap; bound value is still exact.
  }
  return rep;
}

double enumerate_sum_norm_pow(const std::vector<MatrixLaw>& laws, double pow, bool centered,
                              long long cap) {
  validate_laws(laws, "enumerate_sum_norm_pow");
  const Index d = laws.front().values.front().dim();
  double count = 1.0;
  for (const auto& law : laws) count *= static_cast<double>(law.values.size());
  if (count > static_cast<double>(cap)) {
    throw CapacityError("enumerate_sum_norm_pow: product support " + std::to_string(count) +
                        " exceeds cap");
  }
  std::vector<Matrix> centers(laws.size(), Matrix::Zero(d, d));
  if (centered) {
    for (size_t i = 0; i < laws.size(); ++i) {
      for (size_t k = 0; k < laws[i].values.size(); ++k) {
        centers[i] += laws[i].probs[k] * laws[i].values[k].mat();
      }
    }
  }

  double sum = 0.0;
  std::vector<size_t> idx(laws.size(), 0);
  while (true) {
    double w = 1.0;
    for (size_t i = 0; i < laws.size(); ++i) w *= laws[i].probs[idx[i]];
    if (w > 0.0) {
      Matrix total = Matrix::Zero(d, d);
      for (size_t i = 0; i < laws.size(); ++i) total += laws[i].values[idx[i]].mat() - centers[i];
      sum += w * std::pow(spectral_norm_raw(total), pow);
    }
    size_t pos = laws.size();
    while (pos > 0) {
      --pos;
      if (++idx[pos] < laws[pos].values.size()) break;
      idx[pos] = 0;
      if (pos == 0) return sum;
    }
  }
}

TailBound bernstein_tail_bound(double sigma2, double b, int d, double u) {
  if (sigma2 < 0.0 || b < 0.0) throw InvalidInputError("bernstein_tail_bound: negative inputs");
  if (d < 1) throw InvalidInputError("bernstein_tail_bound: d must be >= 1");
  if (!(u > 0.0)) throw InvalidInputError("bernstein_tail_bound: u must be positive");
  TailBound out;
  out.threshold = 2.0 * std::sqrt(sigma2) * std::sqrt(u) + 4.0 / 3.0 * b * u;
  out.prob = std::min(1.0, 2.0 * static_cast<double>(d) * std::exp(-u));
  return out;
}

BoundReport bernstein_moment_bound(double sigma2, double b, int d, double q,
                                   const Constants& constants) {
  if (sigma2 < 0.0 || b < 0.0) throw InvalidInputError("bernstein_moment_bound: negative inputs");
  if (d < 1) throw InvalidInputError("bernstein_moment_bound: d must be >= 1");
  if (q < 1.0) throw InvalidInputError("bernstein_moment_bound: q must be >= 1");
  const double sigma = std::sqrt(sigma2);
  const double l2d = std::log(2.0 * static_cast<double>(d));
  // Shift u -> u + log(2d) in the Bernstein tail so 2d e^{-v} becomes e^{-u},
  // then apply the tail-to-moment conversion. C2 emerges instead of being set.
  const double a0 = 2.0 * sigma * std::sqrt(l2d) + 4.0 / 3.0 * b * l2d;
  const double a1 = 2.0 * sigma;
  const double a2 = 4.0 / 3.0 * b;
  BoundReport rep;
  rep.bound_name = "bernstein-moment";
  rep.q_or_t = q;
  rep.value = tail_to_moment(a0, a1, a2, q, constants);
  rep.add_term("a0", a0);
  rep.add_term("a1", a1);
  rep.add_term("a2", a2);
  const double shape = std::sqrt(q + l2d) * sigma + (q + l2d) * b;
  if (shape > 0.0) rep.add_term("effective_c2", rep.value / shape);
  rep.r_convention = "q+log(2d)";
  rep.constants_note = "composed: bernstein_tail + tail_to_moment(C=" +
                       std::to_string(constants.tail_to_moment_c) + ")";
  rep.digest = Digest().add(sigma2).add(b).add(static_cast<std::uint64_t>(d)).add(q).hex();
  return rep;
}

BoundReport theorem_moment_bound(KernelExpectations& ke, double q, TheoremVariant variant,
                                 const Constants& constants) {
  if (q < 1.0) throw InvalidInputError("theorem_moment_bound: q must be >= 1");
  if (!degeneracy_check_normalized(ke.kernel(), ke.law())) {
    throw ContractError(
        "theorem_moment_bound: kernel fails degeneracy_check at the normalized 1e-9 tolerance");
  }
  const double d = static_cast<double>(ke.kernel().d());
  const double r = std::max(q, 1.0 + std::log(d));  // log(ed)
  const double lead = 128.0 / kSqrtE;

  BoundReport rep;
  rep.q_or_t = q;
  rep.r_convention = "r=max(q,log(ed))";
  rep.add_term("r", r);
  double stderr_sq = 0.0;

  switch (variant) {
    case TheoremVariant::Full: {
      rep.bound_name = "theorem-full";
      TermValue tmax = ke.t_max(q);
      TermValue tg = ke.t_g(q);
      const double tvar = ke.t_var();
      rep.add_term("t_max", tmax.value);
      rep.add_term("t_var", tvar);
      rep.add_term("t_g", tg.value);
      rep.value = lead * (16.0 * std::pow(r, 1.5) * tmax.value + r * tvar + r * tg.value);
      stderr_sq += std::pow(lead * 16.0 * std::pow(r, 1.5) * tmax.stderr_, 2);
      stderr_sq += std::pow(lead * r * tg.stderr_, 2);
      rep.constants_note = "128/sqrt(e),16";
      break;
    }
    case TheoremVariant::Corollary: {
      rep.bound_name = "theorem-corollary";
      TermValue tmax = ke.t_max(q);
      const double row = ke.row_sum_sqrt();
      rep.add_term("row_sum", row);
      rep.add_term("t_max", tmax.value);
      rep.value = 2.0 * lead * (r * row + 11.0 * std::pow(r, 1.5) * tmax.value);
      stderr_sq += std::pow(2.0 * lead * 11.0 * std::pow(r, 1.5) * tmax.stderr_, 2);
      rep.constants_note = "256/sqrt(e),11";
      break;
    }
    case TheoremVariant::Refined: {
      rep.bound_name = "theorem-refined";
      TermValue tg = ke.t_g(q);
      const double tvar = ke.t_var();
      const double row = ke.row_sum_sqrt();
      const double tmaxe2 = ke.t_max_e2(q);
      const double trowmax = ke.t_rowmax(q);
      const double remainder_pref = 4.0 * M_E * std::sqrt(2.0) * std::sqrt(1.0 + std::log(d) / q);
      const double remainder =
          remainder_pref * (r * row + std::pow(r, 1.5) * tmaxe2 + r * r * trowmax);
      rep.add_term("row_sum", row);
      rep.add_term("t_max_e2", tmaxe2);
      rep.add_term("t_rowmax", trowmax);
      rep.add_term("t_var", tvar);
      rep.add_term("t_g", tg.value);
      rep.add_term("remainder_prefactor", remainder_pref);
      rep.value = lead * (16.0 * remainder + r * tvar + r * tg.value);
      stderr_sq += std::pow(lead * r * tg.stderr_, 2);
      rep.constants_note = "128/sqrt(e),16,4e*sqrt(2)";
      break;
    }
  }
  rep.stderr_ = std::sqrt(stderr_sq);
  rep.digest = digest_kernel(ke.kernel(), ke.law(), q, rep.bound_name);
  return rep;
}

BoundReport theorem_moment_bound(const KernelTable& h, const DiscreteDistribution& p, double q,
                                 TheoremVariant variant, const Constants& constants) {
  KernelExpectations ke(h, p);
  return theorem_moment_bound(ke, q, variant, constants);
}

BoundReport lower_bound_terms(KernelExpectations& ke, double q, const Constants& constants) {
  if (q < 1.0) throw InvalidInputError("lower_bound_terms: q must be >= 1");
  if (!degeneracy_check_normalized(ke.kernel(), ke.law())) {
    throw ContractError(
        "lower_bound_terms: kernel fails degeneracy_check at the normalized 1e-9 tolerance");
  }
  TermValue tmax = ke.t_max(q);
  TermValue tg = ke.t_g(q);
  TermValue lsum = ke.l_sum(q);
  BoundReport rep;
  rep.bound_name = "lower-bound";
  rep.q_or_t = q;
  rep.add_term("max_term", tmax.value);
  rep.add_term("e2gg_term", tg.value);
  rep.add_term("sum_term", lsum.value);
  rep.value = constants.lower_bound_c * (tmax.value + tg.value + lsum.value);
  rep.stderr_ = std::sqrt(std::pow(tmax.stderr_, 2) + std::pow(tg.stderr_, 2) +
                          std::pow(lsum.stderr_, 2)) *
                constants.lower_bound_c;
  rep.r_convention = "r=max(q,log(ed))";
  rep.constants_note = "lower_bound_c=" + std::to_string(constants.lower_bound_c);
  rep.digest = digest_kernel(ke.kernel(), ke.law(), q, rep.bound_name);
  return rep;
}

TailBound concentration_tail(KernelExpectations& ke, double kernel_bound_m, double t,
                             const Constants& constants, BoundReport* report) {
  if (!(t >= 1.0)) throw InvalidInputError("concentration_tail: t must be >= 1");
  const KernelTable& h = ke.kernel();
  const int n = h.n();
  // Identical kernels required: H_{i,j} == H for all pairs.
  const double scale = std::max(1.0, h.max_value_norm());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      for (int x = 0; x < h.support(); ++x) {
        for (int y = 0; y < h.support(); ++y) {
          if (max_abs(h.at(i1, i2, x, y) - h.at(0, 1, x, y)) > 1e-12 * scale) {
            throw InvalidInputError("concentration_tail: kernels must be identical across pairs");
          }
        }
      }
    }
  }
  if (h.max_value_norm() > kernel_bound_m * (1.0 + 1e-12)) {
    throw InvalidInputError("concentration_tail: kernel norm " +
                            std::to_string(h.max_value_norm()) + " exceeds the stated bound M");
  }
  if (!degeneracy_check_normalized(h, ke.law())) {
    throw ContractError("concentration_tail: kernel fails degeneracy_check");
  }

  // Corollary assembly specialized to identical bounded kernels, written as a
  // polynomial in p = 2q, then converted by moment_to_tail. L = log(ed).
  const double d = static_cast<double>(h.d());
  const double l = 1.0 + std::log(d);
  const double lead = 2.0 * 128.0 / kSqrtE;
  const double k1 = lead * static_cast<double>(n) * std::sqrt(ke.e_e2h2_norm());
  const double k2 = lead * 11.0 * std::sqrt(static_cast<double>(n - 1)) * kernel_bound_m;
  const double a2 = k1 / 2.0;
  const double a3 = k2 / 2.0;
  const double a0 = k1 * l + std::sqrt(2.0) * k2 * std::pow(l, 1.5);

  const double u = std::max(t, 2.0);  // moment_to_tail needs u >= 2; valid since e^{-2} <= e^{-t}
  TailBound out;
  out.threshold = moment_to_tail(a0, 0.0, a2, a3, 0.0, u);
  out.prob = std::exp(-t);
  if (report) {
    report->bound_name = "concentration-tail";
    report->q_or_t = t;
    report->value = out.threshold;
    report->add_term("a0", a0);
    report->add_term("a2", a2);
    report->add_term("a3", a3);
    report->add_term("u", u);
    report->add_term("prob", out.prob);
    report->r_convention = "r=max(q,log(ed))";
    report->constants_note = "composed: theorem-corollary + moment_to_tail";
    report->digest = digest_kernel(h, ke.law(), t, report->bound_name);
  }
  return out;
}

double moment_to_tail(double a0, double a1, double a2, double a3, double a4, double u) {
  if (a0 < 0 || a1 < 0 || a2 < 0 || a3 < 0 || a4 < 0) {
    throw InvalidInputError("moment_to_tail: coefficients must be nonnegative");
  }
  if (!(u >= 2.0)) throw InvalidInputError("moment_to_tail: u must be >= 2");
  return M_E * (a4 * u * u + a3 * std::pow(u, 1.5) + a2 * u + a1 * std::sqrt(u) + a0);
}

double tail_to_moment(double a0, double a1, double a2, double p, const Constants& constants) {
  if (a0 < 0 || a1 < 0 || a2 < 0) {
    throw InvalidInputError("tail_to_moment: coefficients must be nonnegative");
  }
  if (!(p >= 1.0)) throw InvalidInputError("tail_to_moment: p must be >= 1");
  return constants.tail_to_moment_c * (a0 + a1 * std::sqrt(p) + a2 * p);
}

BoundReport sum_max_bound(const std::vector<ScalarLaw>& xis, double q, double alpha) {
  if (xis.empty()) throw InvalidInputError("sum_max_bound: no variables");
  if (!(q > 1.0)) throw InvalidInputError("sum_max_bound: q must be > 1");
  if (alpha < 0.0) throw InvalidInputError("sum_max_bound: alpha must be >= 0");
  for (const auto& law : xis) {
    if (law.values.empty() || law.values.size() != law.probs.size()) {
      throw InvalidInputError("sum_max_bound: malformed scalar law");
    }
    double total = 0.0;
    for (double pr : law.probs) {
      if (!(pr >= 0.0)) throw InvalidInputError("sum_max_bound: negative probability");
      total += pr;
    }
    if (std::abs(total - 1.0) > 1e-12) {
      throw InvalidInputError("sum_max_bound: probabilities sum to " + std::to_string(total));
    }
  }

  const double qaq = std::pow(q, alpha * q);
  double sum_q = 0.0, sum_abs = 0.0;
  std::vector<std::vector<std::pair<double, double>>> abs_laws;
  for (const auto& law : xis) {
    std::vector<std::pair<double, double>> v;
    for (size_t k = 0; k < law.values.size(); ++k) {
      const double a = std::abs(law.values[k]);
      sum_q += law.probs[k] * std::pow(a, q);
      sum_abs += law.probs[k] * a;
      v.emplace_back(a, law.probs[k]);
    }
    abs_laws.push_back(std::move(v));
  }
  const double emax_q = internal::expected_max_pow(std::move(abs_laws), q);

  BoundReport rep;
  rep.bound_name = "sum-max";
  rep.q_or_t = q;
  const double lhs = qaq * sum_q;
  const double rhs = 2.0 * (1.0 + std::pow(q, alpha)) *
                     std::max(qaq * emax_q, std::pow(sum_abs, q));
  rep.value = rhs;
  rep.add_term("alpha", alpha);
  rep.add_term("lhs", lhs);
  rep.add_term("emax_q", emax_q);
  rep.add_term("sum_abs", sum_abs);
  rep.r_convention = "n/a";
  rep.constants_note = "2*(1+q^alpha)";
  Digest dg;
  dg.add("sum-max").add(q).add(alpha);
  for (const auto& law : xis) {
    for (size_t k = 0; k < law.values.size(); ++k) dg.add(law.values[k]).add(law.probs[k]);
  }
  rep.digest = dg.hex();
  rep.set_oracle(lhs);
  return rep;
}

}  // namespace matconc
