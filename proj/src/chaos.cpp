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

#include "matconc/chaos.hpp"

#include <cmath>
#include <sstream>

#include "matconc/rng.hpp"
#include "internal.hpp"

namespace matconc {

Constants Constants::with_overrides(const std::map<std::string, double>& overrides) {
  Constants c;
  for (const auto& [k, v] : overrides) {
    if (k == "tail_to_moment_c") c.tail_to_moment_c = v;
    else if (k == "lower_bound_c") c.lower_bound_c = v;
    else if (k == "adamczak_c") c.adamczak_c = v;
    else if (k == "naive_chaos_c") c.naive_chaos_c = v;
    else throw ConfigError("unknown constant override '" + k + "'");
  }
  return c;
}

std::string Constants::convention() const {
  std::ostringstream os;
  os << "tail_to_moment_c=" << tail_to_moment_c << ";lower_bound_c=" << lower_bound_c
     << ";adamczak_c=" << adamczak_c << ";naive_chaos_c=" << naive_chaos_c;
  return os.str();
}

std::string MomentEstimate::to_line() const {
  std::ostringstream os;
  os.precision(17);
  os << "method=" << (method == Method::ExactEnumeration ? "exact-enumeration" : "monte-carlo")
     << " q=" << q << " value=" << value << " stderr=" << stderr_ << " replicas=" << replicas;
  return os.str();
}

MomentEstimate MomentEstimate::from_line(const std::string& line) {
  MomentEstimate est;
  std::istringstream is(line);
  std::string tok;
  bool saw_method = false;
  while (is >> tok) {
    auto eq = tok.find('=');
    if (eq == std::string::npos) throw IoError("MomentEstimate: malformed token '" + tok + "'");
    std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
    if (key == "method") {
      saw_method = true;
      if (val == "exact-enumeration") est.method = Method::ExactEnumeration;
      else if (val == "monte-carlo") est.method = Method::MonteCarlo;
      else throw IoError("MomentEstimate: unknown method '" + val + "'");
    } else if (key == "q") est.q = std::stod(val);
    else if (key == "value") est.value = std::stod(val);
    else if (key == "stderr") est.stderr_ = std::stod(val);
    else if (key == "replicas") est.replicas = std::stoll(val);
    else throw IoError("MomentEstimate: unknown field '" + key + "'");
  }
  if (!saw_method) throw IoError("MomentEstimate: missing method field");
  return est;
}

namespace {

// X(eps) = sum over ordered pairs of A_{i1,i2} eps1_{i1} eps2_{i2}.
Matrix chaos_sum(const ChaosCoefficients& a, const std::vector<int>& eps1,
                 const std::vector<int>& eps2) {
  const int n = a.n();
  Matrix x = Matrix::Zero(a.d(), a.d());
  for (int i1 = 0; i1 < n; ++i1) {
    Matrix row = Matrix::Zero(a.d(), a.d());
    for (int i2 = 0; i2 < n; ++i2) {
      if (i1 == i2) continue;
      row += static_cast<double>(eps2[static_cast<size_t>(i2)]) * a.at(i1, i2);
    }
    x += static_cast<double>(eps1[static_cast<size_t>(i1)]) * row;
  }
  return x;
}

}  // namespace

double sample_chaos_norm(const ChaosCoefficients& a, std::uint64_t seed) {
  SplitMix64 rng(seed);
  const int n = a.n();
  std::vector<int> eps1(static_cast<size_t>(n)), eps2(static_cast<size_t>(n));
  for (int i = 0; i < n; ++i) eps1[static_cast<size_t>(i)] = rng.rademacher();
  for (int i = 0; i < n; ++i) eps2[static_cast<size_t>(i)] = rng.rademacher();
  return spectral_norm_raw(chaos_sum(a, eps1, eps2));
}

MomentEstimate exact_chaos_moment(const ChaosCoefficients& a, double q, int cap_n) {
  if (q < 1.0) throw InvalidInputError("exact_chaos_moment: q must be >= 1");
  const int n = a.n();
  if (n > cap_n) {
    throw CapacityError("exact_chaos_moment: n=" + std::to_string(n) + " exceeds enumeration cap " +
                        std::to_string(cap_n) + "; use mc_chaos_moment");
  }
  const std::uint64_t patterns = 1ULL << (2 * n);
  std::vector<int> eps1(static_cast<size_t>(n)), eps2(static_cast<size_t>(n));
  double sum = 0.0;
  for (std::uint64_t k = 0; k < patterns; ++k) {
    for (int i = 0; i < n; ++i) {
      eps1[static_cast<size_t>(i)] = (k >> i) & 1 ? 1 : -1;
      eps2[static_cast<size_t>(i)] = (k >> (n + i)) & 1 ? 1 : -1;
    }
    sum += std::pow(spectral_norm_raw(chaos_sum(a, eps1, eps2)), 2.0 * q);
  }
  MomentEstimate est;
  est.q = q;
  est.method = MomentEstimate::Method::ExactEnumeration;
  est.replicas = static_cast<long long>(patterns);
  est.value = internal::root_2q(sum / static_cast<double>(patterns), q);
  return est;
}

MomentEstimate mc_chaos_moment(const ChaosCoefficients& a, double q, long long replicas,
                               std::uint64_t seed) {
  if (q < 1.0) throw InvalidInputError("mc_chaos_moment: q must be >= 1");
  if (replicas < 1) throw InvalidInputError("mc_chaos_moment: replicas must be >= 1");
  std::vector<double> norms(static_cast<size_t>(replicas));
  for (long long r = 0; r < replicas; ++r) {
    norms[static_cast<size_t>(r)] = sample_chaos_norm(a, mix_seed(seed, static_cast<std::uint64_t>(r)));
  }
  return internal::moment_from_norm_samples(norms, q);
}

KhintchineBounds khintchine_bounds(const ChaosCoefficients& a, double q,
                                   const Constants& constants) {
  if (q < 1.0) throw InvalidInputError("khintchine_bounds: q must be >= 1");
  VarianceProxies vp = variance_proxies(a);
  KhintchineBounds out;
  out.lower = std::sqrt(std::max(vp.gg_star_norm, vp.sum_sq_norm));
  const double d = static_cast<double>(a.d());
  const double nd = static_cast<double>(a.n()) * d;
  out.upper = 4.0 / std::sqrt(M_E) * std::max(q, std::log(d)) * out.lower;
  out.naive_upper = constants.naive_chaos_c * std::max(q, std::log(nd)) * out.lower;
  return out;
}

EigenCompareResult eigen_compare_check(const std::vector<RectMatrix>& ms, int p) {
  if (ms.empty()) throw InvalidInputError("eigen_compare_check: empty matrix list");
  if (p < 2) throw InvalidInputError("eigen_compare_check: p must be an integer >= 2");
  const Index rows = ms.front().rows(), cols = ms.front().cols();
  for (const auto& m : ms) {
    if (m.rows() != rows || m.cols() != cols) {
      throw InvalidInputError("eigen_compare_check: shape mismatch in matrix list");
    }
  }
  Matrix mm_star = Matrix::Zero(rows, rows);   // d x d
  Matrix m_star_m = Matrix::Zero(cols, cols);  // nd x nd
  for (const auto& m : ms) {
    mm_star += m.mat() * m.mat().adjoint();
    m_star_m += m.mat().adjoint() * m.mat();
  }
  Eigen::VectorXd lambda = herm_eigenvalues(m_star_m);
  Eigen::VectorXd nu = herm_eigenvalues(mm_star);

  EigenCompareResult res;
  res.p = p;
  const double sum_lambda = lambda.sum();
  const double sum_nu = nu.sum();
  res.trace_gap = std::abs(sum_lambda - sum_nu);
  const double d = static_cast<double>(rows);
  res.condition_met = lambda.maxCoeff() <= sum_nu / d;
  double lp = 0.0, np = 0.0;
  for (Index i = 0; i < lambda.size(); ++i) lp += std::pow(std::max(lambda(i), 0.0), p);
  for (Index i = 0; i < nu.size(); ++i) np += std::pow(std::max(nu(i), 0.0), p);
  // Tiny slack for eigenvalue roundoff; the dominance claim itself is strict.
  res.schatten_ok = np >= lp * (1.0 - 1e-12) - 1e-300;
  return res;
}

}  // namespace matconc
