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

#include "matconc/adamczak.hpp"

#include <cmath>

#include "matconc/rng.hpp"
#include "internal.hpp"

namespace matconc {

namespace {

using Vector = Eigen::VectorXcd;

// Real roots of a polynomial with ascending real coefficients, via the
// companion matrix of the trimmed polynomial.
std::vector<double> real_roots(std::vector<double> coeffs) {
  while (!coeffs.empty() && std::abs(coeffs.back()) < 1e-14) coeffs.pop_back();
  std::vector<double> roots;
  if (coeffs.size() < 2) return roots;
  const int deg = static_cast<int>(coeffs.size()) - 1;
  if (deg == 1) {
    roots.push_back(-coeffs[0] / coeffs[1]);
    return roots;
  }
  Eigen::MatrixXd companion = Eigen::MatrixXd::Zero(deg, deg);
  for (int i = 1; i < deg; ++i) companion(i, i - 1) = 1.0;
  for (int i = 0; i < deg; ++i) companion(i, deg - 1) = -coeffs[static_cast<size_t>(i)] / coeffs.back();
  Eigen::EigenSolver<Eigen::MatrixXd> es(companion, /*computeEigenvectors=*/false);
  for (Index i = 0; i < es.eigenvalues().size(); ++i) {
    const auto z = es.eigenvalues()(i);
    if (std::abs(z.imag()) <= 1e-8 * (1.0 + std::abs(z.real()))) roots.push_back(z.real());
  }
  return roots;
}

double objective_value(const QuadFormObjective& obj, const Vector& phi) {
  double f = 0.0;
  for (size_t j = 0; j < obj.mats.size(); ++j) {
    const double a = (phi.adjoint() * obj.mats[j] * phi).value().real();
    f += obj.weights[j] * a * a;
  }
  return f;
}

// One ascent run from phi0; returns the best value found.
double ascend(const QuadFormObjective& obj, Vector phi, int* iterations) {
  constexpr int kMaxIter = 200;
  constexpr double kGradTol = 1e-10;
  phi.normalize();
  double f = objective_value(obj, phi);
  for (int it = 0; it < kMaxIter; ++it) {
    ++*iterations;
    Vector grad = Vector::Zero(obj.d);
    for (size_t j = 0; j < obj.mats.size(); ++j) {
      const Vector mphi = obj.mats[j] * phi;
      const double a = (phi.adjoint() * mphi).value().real();
      grad += (4.0 * obj.weights[j] * a) * mphi;
    }
    Vector v = grad - (phi.adjoint() * grad).value() * phi;  // tangent direction
    const double vn = v.norm();
    if (vn <= kGradTol) break;

    // Along phi(t) = (phi + t v)/sqrt(1 + t^2 |v|^2) each quadratic form is
    // (a_j + 2 b_j t + c_j t^2)/(1 + sigma t^2); the directional derivative of
    // the objective has a quartic numerator whose roots give the exact step.
    const double sigma = vn * vn;
    double p[5] = {0, 0, 0, 0, 0};
    for (size_t j = 0; j < obj.mats.size(); ++j) {
      const Vector mphi = obj.mats[j] * phi;
      const Vector mv = obj.mats[j] * v;
      const double a = (phi.adjoint() * mphi).value().real();
      const double b = (phi.adjoint() * mv).value().real();
      const double c = (v.adjoint() * mv).value().real();
      const double w = obj.weights[j];
      p[0] += w * a * a;
      p[1] += w * 4.0 * a * b;
      p[2] += w * (4.0 * b * b + 2.0 * a * c);
      p[3] += w * 4.0 * b * c;
      p[4] += w * c * c;
    }
    // N(t) = P'(t)(1 + sigma t^2) - 4 sigma t P(t); the t^5 term cancels.
    std::vector<double> numer = {
        p[1],
        2.0 * p[2] - 4.0 * sigma * p[0],
        3.0 * p[3] - 3.0 * sigma * p[1],
        4.0 * p[4] - 2.0 * sigma * p[2],
        -sigma * p[3],
    };
    double best_f = f;
    Vector best_phi = phi;
    for (double t : real_roots(numer)) {
      Vector cand = (phi + t * v).normalized();
      const double fc = objective_value(obj, cand);
      if (fc > best_f) {
        best_f = fc;
        best_phi = std::move(cand);
      }
    }
    {
      Vector cand = v.normalized();  // the t -> infinity endpoint
      const double fc = objective_value(obj, cand);
      if (fc > best_f) {
        best_f = fc;
        best_phi = std::move(cand);
      }
    }
    if (best_f <= f * (1.0 + 1e-15)) {
      f = std::max(f, best_f);
      break;
    }
    f = best_f;
    phi = std::move(best_phi);
  }
  return f;
}

}  // namespace

QuadFormObjective quadform_from_kernel(const KernelTable& h, const DiscreteDistribution& p) {
  if (h.support() != p.size()) throw InvalidInputError("quadform_from_kernel: support mismatch");
  QuadFormObjective obj;
  obj.d = h.d();
  for (int i1 = 0; i1 < h.n(); ++i1) {
    for (int i2 = 0; i2 < h.n(); ++i2) {
      if (i1 == i2) continue;
      for (int x = 0; x < h.support(); ++x) {
        for (int y = 0; y < h.support(); ++y) {
          const double w = p.prob(x) * p.prob(y);
          if (w == 0.0) continue;
          obj.mats.push_back(h.at(i1, i2, x, y));
          obj.weights.push_back(w);
        }
      }
    }
  }
  return obj;
}

SphereSupResult sphere_sup_estimate(const QuadFormObjective& objective, int restarts,
                                    std::uint64_t seed) {
  if (objective.d < 1) throw InvalidInputError("sphere_sup_estimate: empty objective");
  if (restarts < 1) throw InvalidInputError("sphere_sup_estimate: restarts must be >= 1");
  SphereSupResult res;
  res.restarts = restarts;

  Matrix cap = Matrix::Zero(objective.d, objective.d);
  for (size_t j = 0; j < objective.mats.size(); ++j) {
    cap += objective.weights[j] * (objective.mats[j] * objective.mats[j]);
  }
  res.relaxation = spectral_norm_raw(cap);
  if (objective.mats.empty() || res.relaxation == 0.0) return res;

  // Leading eigenvector of the relaxation matrix as a warm start, then
  // seeded random starts.
  Eigen::SelfAdjointEigenSolver<Matrix> es(cap);
  Vector phi0 = es.eigenvectors().col(objective.d - 1);
  res.sup_estimate = std::max(res.sup_estimate, ascend(objective, phi0, &res.iterations));

  SplitMix64 rng(seed);
  for (int rstart = 1; rstart < restarts; ++rstart) {
    Vector phi(objective.d);
    for (Index i = 0; i < objective.d; ++i) phi(i) = Complex(rng.gaussian(), rng.gaussian());
    if (phi.norm() == 0.0) phi(0) = 1.0;
    res.sup_estimate = std::max(res.sup_estimate, ascend(objective, phi, &res.iterations));
  }
  if (res.sup_estimate > res.relaxation + 1e-8) {
    throw Error(ErrorKind::Internal, "sphere_sup_estimate: ascent exceeded the relaxation");
  }
  return res;
}

AdamczakTerms adamczak_terms(KernelExpectations& ke, double q, AdamczakTerms::Variant variant,
                             const Constants& constants, int restarts, std::uint64_t seed) {
  if (q < 1.0) throw InvalidInputError("adamczak_terms: q must be >= 1");
  if (!degeneracy_check_normalized(ke.kernel(), ke.law())) {
    throw ContractError("adamczak_terms: kernel fails degeneracy_check at the normalized tolerance");
  }
  const double d = static_cast<double>(ke.kernel().d());
  const double log_de = 1.0 + std::log(d);  // log(de)

  AdamczakTerms t;
  t.variant = variant;

  const double egg = std::pow(ke.t_g(1.0).value, 2.0);    // E || E2 GG* ||
  const double var2 = std::pow(ke.t_var(), 2.0);          // || sum E H^2 ||
  const double emax1 = std::pow(ke.t_max(1.0).value, 2.0);  // E max_i1 || sum H^2 ||

  SphereSupResult sup = sphere_sup_estimate(quadform_from_kernel(ke.kernel(), ke.law()),
                                            restarts, seed);
  t.b_sup = sup.sup_estimate;
  t.b_relaxation = sup.relaxation;
  t.b = std::sqrt(sup.sup_estimate);

  t.gamma_core = ke.gamma_sum(q);
  t.gamma_alt = 2.0 * t.gamma_core;

  if (variant == AdamczakTerms::Variant::Full) {
    t.a = std::sqrt(log_de) * std::sqrt(egg + var2) + log_de * std::sqrt(emax1);
    t.gamma = std::sqrt(1.0 + std::log(d) / q) * t.gamma_core;
    t.d_term = ke.d_sum(q) + (1.0 + std::log(d) / q) * ke.t_rowmax(q);
  } else {
    t.a = log_de * std::sqrt(egg + var2);
    t.gamma = std::pow(log_de, 1.5) * t.gamma_core;
    t.d_term = log_de * ke.d_sum(q);
  }
  // E||U_n|| proxy with the log(d) assembly shape and unit constant; the
  // corpus-calibrated C of the moment/tail form absorbs the missing absolute
  // constant.
  const double logd = std::log(d);
  t.mean_norm_estimate =
      logd * (ke.t_g(1.0).value + ke.t_var() + std::sqrt(logd) * ke.t_max(1.0).value);
  return t;
}

BoundReport adamczak_terms_report(const AdamczakTerms& terms, double q) {
  BoundReport rep;
  rep.bound_name =
      terms.variant == AdamczakTerms::Variant::Full ? "adamczak-full" : "adamczak-simplified";
  rep.q_or_t = q;
  rep.value = terms.a + terms.b + terms.gamma + terms.d_term;
  rep.add_term("A", terms.a);
  rep.add_term("B", terms.b);
  rep.add_term("Gamma", terms.gamma);
  rep.add_term("D", terms.d_term);
  rep.add_term("B_sup", terms.b_sup);
  rep.add_term("B_relaxation", terms.b_relaxation);
  rep.add_term("Gamma_core", terms.gamma_core);
  rep.add_term("Gamma_alt_2x", terms.gamma_alt);
  rep.add_term("mean_norm_estimate", terms.mean_norm_estimate);
  rep.r_convention = "log(de)";
  rep.constants_note = "terms per the stated choice; Gamma prefactor variants recorded";
  return rep;
}

BoundReport adamczak_moment_tail(const AdamczakTerms& terms, double mean, double q_or_t,
                                 bool tail_form, const Constants& constants) {
  if (tail_form) {
    if (!(q_or_t >= 2.0)) throw InvalidInputError("adamczak_moment_tail: tail form needs t >= 2");
  } else {
    if (!(q_or_t >= 1.0)) throw InvalidInputError("adamczak_moment_tail: q must be >= 1");
  }
  if (mean < 0.0) throw InvalidInputError("adamczak_moment_tail: mean must be nonnegative");
  const double x = q_or_t;
  BoundReport rep;
  rep.bound_name = tail_form ? "adamczak-tail" : "adamczak-moment";
  rep.q_or_t = x;
  rep.value = constants.adamczak_c *
              (mean + std::sqrt(x) * terms.a + x * terms.b + std::pow(x, 1.5) * terms.gamma +
               x * x * terms.d_term);
  rep.add_term("mean", mean);
  rep.add_term("A", terms.a);
  rep.add_term("B", terms.b);
  rep.add_term("Gamma", terms.gamma);
  rep.add_term("D", terms.d_term);
  if (tail_form) rep.add_term("prob", std::exp(-x));
  rep.r_convention = "log(de)";
  rep.constants_note = "adamczak_c=" + std::to_string(constants.adamczak_c);
  return rep;
}

}  // namespace matconc
