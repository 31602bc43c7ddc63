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

#include "matconc/ustat.hpp"

#include <cmath>

#include "matconc/rng.hpp"
#include "internal.hpp"

namespace matconc {

DiscreteDistribution::DiscreteDistribution(std::vector<Point> points) : points_(std::move(points)) {
  if (points_.empty()) throw InvalidInputError("DiscreteDistribution: support must be nonempty");
  double total = 0.0;
  for (const auto& pt : points_) {
    if (!(pt.prob >= 0.0)) throw InvalidInputError("DiscreteDistribution: negative probability");
    if (!std::isfinite(pt.payload)) throw InvalidInputError("DiscreteDistribution: non-finite payload");
    total += pt.prob;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    throw InvalidInputError("DiscreteDistribution: probabilities sum to " + std::to_string(total));
  }
}

DiscreteDistribution DiscreteDistribution::rademacher() {
  return DiscreteDistribution({{"-1", -1.0, 0.5}, {"+1", +1.0, 0.5}});
}

KernelTable::KernelTable(int n, Index d, int support, const Builder& fill)
    : n_(n), d_(d), s_(support) {
  if (n < 2) throw InvalidInputError("KernelTable: n must be >= 2");
  if (d < 1) throw InvalidInputError("KernelTable: d must be >= 1");
  if (support < 1) throw InvalidInputError("KernelTable: support must be >= 1");
  values_.assign(static_cast<size_t>(n) * n * support * support, Matrix());
  double scale = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      for (int x = 0; x < s_; ++x) {
        for (int y = 0; y < s_; ++y) {
          // HermMatrix validates self-adjointness of every table value.
          Matrix v = HermMatrix(fill(i1, i2, x, y)).mat();
          if (v.rows() != d) throw InvalidInputError("KernelTable: value dimension mismatch");
          scale = std::max(scale, max_abs(v));
          values_[index(i1, i2, x, y)] = std::move(v);
        }
      }
    }
  }
  max_value_norm_ = 0.0;
  const double tol = 1e-12 * std::max(1.0, scale);
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = i1 + 1; i2 < n; ++i2) {
      for (int x = 0; x < s_; ++x) {
        for (int y = 0; y < s_; ++y) {
          if (max_abs(at(i1, i2, x, y) - at(i2, i1, y, x)) > tol) {
            throw InvalidInputError("KernelTable: permutation symmetry violated at (" +
                                    std::to_string(i1) + "," + std::to_string(i2) + "," +
                                    std::to_string(x) + "," + std::to_string(y) + ")");
          }
        }
      }
    }
  }
  for (const auto& v : values_) {
    if (v.size() > 0) max_value_norm_ = std::max(max_value_norm_, spectral_norm_raw(v));
  }
}

const Matrix& KernelTable::at(int i1, int i2, int x, int y) const {
  if (i1 == i2) throw InvalidInputError("KernelTable: diagonal pair access");
  return values_[index(i1, i2, x, y)];
}

KernelTable KernelTable::scaled(double c) const {
  return KernelTable(n_, d_, s_, [&](int i1, int i2, int x, int y) -> Matrix {
    return c * at(i1, i2, x, y);
  });
}

const Matrix& HoeffdingParts::mean_at(int i1, int i2) const {
  return mean[static_cast<size_t>(i1) * n + i2];
}

const Matrix& HoeffdingParts::pi1_at(int i1, int i2, int x) const {
  return pi1[(static_cast<size_t>(i1) * n + i2) * support + x];
}

HoeffdingParts pi_project(const KernelTable& h, const DiscreteDistribution& p) {
  if (p.size() < 1) throw InvalidInputError("pi_project: empty distribution");
  const int n = h.n(), s = h.support();
  const Index d = h.d();
  if (s != p.size()) throw InvalidInputError("pi_project: support size mismatch");

  std::vector<Matrix> mean(static_cast<size_t>(n) * n, Matrix::Zero(d, d));
  std::vector<Matrix> pi1(static_cast<size_t>(n) * n * s, Matrix::Zero(d, d));

  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      Matrix m = Matrix::Zero(d, d);
      for (int x = 0; x < s; ++x) {
        Matrix cond = Matrix::Zero(d, d);  // E[H(x, Y)]
        for (int y = 0; y < s; ++y) cond += p.prob(y) * h.at(i1, i2, x, y);
        pi1[(static_cast<size_t>(i1) * n + i2) * s + x] = cond;
        m += p.prob(x) * cond;
      }
      mean[static_cast<size_t>(i1) * n + i2] = m;
      for (int x = 0; x < s; ++x) pi1[(static_cast<size_t>(i1) * n + i2) * s + x] -= m;
    }
  }

  KernelTable pi2(n, d, s, [&](int i1, int i2, int x, int y) -> Matrix {
    return h.at(i1, i2, x, y) - mean[static_cast<size_t>(i1) * n + i2] -
           pi1[(static_cast<size_t>(i1) * n + i2) * s + x] -
           pi1[(static_cast<size_t>(i2) * n + i1) * s + y];
  });

  HoeffdingParts parts{n, d, s, std::move(mean), std::move(pi1), std::move(pi2)};
  return parts;
}

double degeneracy_defect(const KernelTable& h, const DiscreteDistribution& p) {
  if (h.support() != p.size()) throw InvalidInputError("degeneracy_defect: support size mismatch");
  const int n = h.n(), s = h.support();
  double worst = 0.0;
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      for (int x = 0; x < s; ++x) {
        Matrix cond = Matrix::Zero(h.d(), h.d());
        for (int y = 0; y < s; ++y) cond += p.prob(y) * h.at(i1, i2, x, y);
        worst = std::max(worst, spectral_norm_raw(cond));
      }
    }
  }
  return worst;
}

bool degeneracy_check(const KernelTable& h, const DiscreteDistribution& p, double tol) {
  return degeneracy_defect(h, p) <= tol;
}

bool degeneracy_check_normalized(const KernelTable& h, const DiscreteDistribution& p, double tol) {
  const double scale = h.max_value_norm();
  return degeneracy_defect(h, p) <= tol * std::max(scale, 1e-300);
}

HermMatrix evaluate_U(const KernelTable& h, const SampleConfig& cfg) {
  const int n = h.n();
  auto check_indices = [&](const std::vector<int>& xs) {
    if (static_cast<int>(xs.size()) != n) {
      throw InvalidInputError("evaluate_U: sample length must equal n");
    }
    for (int v : xs) {
      if (v < 0 || v >= h.support()) throw InvalidInputError("evaluate_U: index out of range");
    }
  };
  check_indices(cfg.x1);
  const std::vector<int>& second = cfg.x2 ? *cfg.x2 : cfg.x1;
  if (cfg.x2) check_indices(*cfg.x2);

  Matrix u = Matrix::Zero(h.d(), h.d());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      u += h.at(i1, i2, cfg.x1[static_cast<size_t>(i1)], second[static_cast<size_t>(i2)]);
    }
  }
  return HermMatrix(std::move(u));
}

namespace {

double config_prob(const DiscreteDistribution& p, const std::vector<int>& cfg) {
  double w = 1.0;
  for (int x : cfg) w *= p.prob(x);
  return w;
}

}  // namespace

MomentEstimate exact_U_moment(const KernelTable& h, const DiscreteDistribution& p, double q,
                              UMode mode, long long cap) {
  if (q < 1.0) throw InvalidInputError("exact_U_moment: q must be >= 1");
  if (h.support() != p.size()) throw InvalidInputError("exact_U_moment: support size mismatch");
  const int n = h.n(), s = h.support();
  const int len = mode == UMode::Coupled ? n : 2 * n;
  const double count = internal::ipow_count(s, len);
  if (count > static_cast<double>(cap)) {
    throw CapacityError("exact_U_moment: " + std::to_string(count) +
                        " configurations exceed cap; use mc_U_moment");
  }

  double sum = 0.0;
  long long configs = 0;
  internal::for_each_config(len, s, [&](const std::vector<int>& c) {
    SampleConfig cfg;
    cfg.x1.assign(c.begin(), c.begin() + n);
    if (mode == UMode::Decoupled) cfg.x2 = std::vector<int>(c.begin() + n, c.end());
    const double w = config_prob(p, c);
    ++configs;
    if (w == 0.0) return;
    sum += w * std::pow(spectral_norm(evaluate_U(h, cfg)), 2.0 * q);
  });

  MomentEstimate est;
  est.q = q;
  est.method = MomentEstimate::Method::ExactEnumeration;
  est.replicas = configs;
  est.value = internal::root_2q(sum, q);
  return est;
}

MomentEstimate mc_U_moment(const KernelTable& h, const DiscreteDistribution& p, double q,
                           UMode mode, long long replicas, std::uint64_t seed) {
  if (q < 1.0) throw InvalidInputError("mc_U_moment: q must be >= 1");
  if (replicas < 1) throw InvalidInputError("mc_U_moment: replicas must be >= 1");
  if (h.support() != p.size()) throw InvalidInputError("mc_U_moment: support size mismatch");
  const int n = h.n(), s = h.support();

  std::vector<double> cdf(static_cast<size_t>(s));
  double acc = 0.0;
  for (int i = 0; i < s; ++i) {
    acc += p.prob(i);
    cdf[static_cast<size_t>(i)] = acc;
  }
  auto draw = [&](SplitMix64& rng) {
    const double u = rng.uniform01();
    for (int i = 0; i < s; ++i) {
      if (u < cdf[static_cast<size_t>(i)]) return i;
    }
    return s - 1;
  };

  std::vector<double> norms(static_cast<size_t>(replicas));
  for (long long r = 0; r < replicas; ++r) {
    SplitMix64 rng(mix_seed(seed, static_cast<std::uint64_t>(r)));
    SampleConfig cfg;
    cfg.x1.resize(static_cast<size_t>(n));
    for (int i = 0; i < n; ++i) cfg.x1[static_cast<size_t>(i)] = draw(rng);
    if (mode == UMode::Decoupled) {
      cfg.x2 = std::vector<int>(static_cast<size_t>(n));
      for (int i = 0; i < n; ++i) (*cfg.x2)[static_cast<size_t>(i)] = draw(rng);
    }
    norms[static_cast<size_t>(r)] = spectral_norm(evaluate_U(h, cfg));
  }
  return internal::moment_from_norm_samples(norms, q);
}

MomentEstimate exact_randomized_U_moment(const KernelTable& h, const DiscreteDistribution& p,
                                         double q, long long cap) {
  if (q < 1.0) throw InvalidInputError("exact_randomized_U_moment: q must be >= 1");
  const int n = h.n(), s = h.support();
  const double sign_patterns = internal::ipow_count(2, 2 * n);
  const double sample_configs = internal::ipow_count(s, 2 * n);
  if (sign_patterns * sample_configs > static_cast<double>(cap)) {
    throw CapacityError("exact_randomized_U_moment: enumeration exceeds cap");
  }

  double sum = 0.0;
  long long configs = 0;
  internal::for_each_config(2 * n, s, [&](const std::vector<int>& c) {
    const double w = config_prob(p, c);
    if (w == 0.0) {
      configs += static_cast<long long>(sign_patterns);
      return;
    }
    const std::uint64_t patterns = 1ULL << (2 * n);
    for (std::uint64_t k = 0; k < patterns; ++k) {
      Matrix u = Matrix::Zero(h.d(), h.d());
      for (int i1 = 0; i1 < n; ++i1) {
        const double e1 = (k >> i1) & 1 ? 1.0 : -1.0;
        for (int i2 = 0; i2 < n; ++i2) {
          if (i1 == i2) continue;
          const double e2 = (k >> (n + i2)) & 1 ? 1.0 : -1.0;
          u += e1 * e2 * h.at(i1, i2, c[static_cast<size_t>(i1)], c[static_cast<size_t>(n + i2)]);
        }
      }
      sum += w / sign_patterns * std::pow(spectral_norm_raw(u), 2.0 * q);
      ++configs;
    }
  });

  MomentEstimate est;
  est.q = q;
  est.method = MomentEstimate::Method::ExactEnumeration;
  est.replicas = configs;
  est.value = internal::root_2q(sum, q);
  return est;
}

BlockHermMatrix assemble_Gtilde(const KernelTable& h, const SampleConfig& cfg) {
  if (!cfg.x2) throw InvalidInputError("assemble_Gtilde: decoupled config required");
  const int n = h.n();
  BlockHermMatrix g(n, h.d());
  for (int i1 = 0; i1 < n; ++i1) {
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      g.set_block(i1, i2,
                  h.at(i1, i2, cfg.x1[static_cast<size_t>(i1)], (*cfg.x2)[static_cast<size_t>(i2)]));
    }
  }
  return g;
}

HermMatrix e2_gg_star(const KernelTable& h, const DiscreteDistribution& p,
                      const std::vector<int>& x1) {
  const int n = h.n(), s = h.support();
  const Index d = h.d();
  if (static_cast<int>(x1.size()) != n) throw InvalidInputError("e2_gg_star: sample length mismatch");
  if (s != p.size()) throw InvalidInputError("e2_gg_star: support size mismatch");

  Matrix out = Matrix::Zero(static_cast<Index>(n) * d, static_cast<Index>(n) * d);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      Matrix blk = Matrix::Zero(d, d);
      for (int k = 0; k < n; ++k) {
        if (k == i || k == j) continue;
        for (int y = 0; y < s; ++y) {
          const double w = p.prob(y);
          if (w == 0.0) continue;
          blk += w * (h.at(i, k, x1[static_cast<size_t>(i)], y) *
                      h.at(j, k, x1[static_cast<size_t>(j)], y));
        }
      }
      out.block(static_cast<Index>(i) * d, static_cast<Index>(j) * d, d, d) = blk;
    }
  }
  return HermMatrix(std::move(out));
}

}  // namespace matconc
