// Copyright 2026 The lsmix Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "lsmix/pmle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <tuple>
#include <utility>

#include "lsmix/bfgs.hpp"
#include "lsmix/errors.hpp"
#include "lsmix/init.hpp"

namespace lsmix {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double log_sum_exp(std::span<const double> v) {
  double m = kNegInf;
  for (double x : v) m = std::max(m, x);
  if (m == kNegInf) return kNegInf;
  double s = 0.0;
  for (double x : v) s += std::exp(x - m);
  return m + std::log(s);
}

// log w_k + log f(x|theta_k) for every component.
void joint_log_densities(const MixingDistribution& g, Family family, double x, std::span<double> out) {
  for (std::size_t c = 0; c < g.size(); ++c) {
    const double w = g.weight(c);
    out[c] = w > 0.0 ? std::log(w) + component_log_density(g, family, c, x) : kNegInf;
  }
}

void require_positive_scales(const MixingDistribution& g) {
  if (g.has_point_mass()) throw DomainError("penalized likelihood is undefined for zero scales");
}

// Maximizes sum_n r_n log f(x_n | mu, sigma) - penalty(sigma) over
// (mu, log sigma), starting from (mu, sigma).
std::pair<double, double> numeric_m_step(const SortedSample& sample, Family family,
                                         std::span<const double> resp, double total,
                                         const PenaltyConfig& penalty, double mu, double sigma) {
  const std::span<const double> xs = sample.values();
  const ObjectiveFn fn = [&](std::span<const double> p, std::span<double> grad) {
    const double m = p[0];
    const double tau = p[1];
    if (!(tau > -700.0 && tau < 700.0)) return std::numeric_limits<double>::quiet_NaN();
    const double inv_s = std::exp(-tau);
    double value = 0.0, g_mu = 0.0, g_tau = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = resp[i];
      if (r == 0.0) continue;
      const double z = (xs[i] - m) * inv_s;
      const double d = family.dlog_pdf(z);
      value -= r * (family.log_pdf(z) - tau);
      g_mu += r * d * inv_s;
      g_tau += r * (d * z + 1.0);
    }
    const double ratio = penalty.scale_stat * inv_s * inv_s;
    value += penalty.a_n * (ratio + 2.0 * tau);
    g_tau += penalty.a_n * (2.0 - 2.0 * ratio);
    grad[0] = g_mu;
    grad[1] = g_tau;
    return value;
  };
  BfgsOptions options;
  options.max_iter = 200;
  options.grad_tol = 1e-9 * std::max(1.0, total);
  const BfgsResult res = minimize_bfgs(fn, {mu, std::log(sigma)}, options);
  return {res.x[0], std::exp(res.x[1])};
}

}  // namespace

PenaltyConfig PenaltyConfig::for_sample(const SortedSample& sample, std::optional<double> a_n,
                                        ScaleStatistic stat) {
  PenaltyConfig p;
  p.a_n = a_n.value_or(1.0 / std::sqrt(static_cast<double>(sample.size())));
  if (stat == ScaleStatistic::kVariance) {
    p.scale_stat = sample.var_s();
  } else {
    const double iqr = sample.interquartile_range();
    p.scale_stat = iqr * iqr;
  }
  if (!(p.a_n > 0.0)) throw DomainError("penalty strength a_N must be positive");
  if (!(p.scale_stat > 0.0)) throw DegenerateSampleError("penalty scale statistic must be positive");
  return p;
}

double PenaltyConfig::term(double sigma) const {
  const double s2 = sigma * sigma;
  return a_n * (scale_stat / s2 + std::log(s2));
}

double log_likelihood(const MixingDistribution& g, const SortedSample& sample, Family family) {
  require_positive_scales(g);
  std::vector<double> buf(g.size());
  double total = 0.0;
  for (double x : sample.values()) {
    joint_log_densities(g, family, x, buf);
    total += log_sum_exp(buf);
  }
  return total;
}

double penalized_loglik(const MixingDistribution& g, const SortedSample& sample, Family family,
                        const PenaltyConfig& penalty) {
  double value = log_likelihood(g, sample, family);
  for (double s : g.scales()) value -= penalty.term(s);
  return value;
}

ResponsibilityMatrix responsibilities(const MixingDistribution& g, const SortedSample& sample,
                                      Family family) {
  require_positive_scales(g);
  ResponsibilityMatrix r;
  r.n = sample.size();
  r.k = g.size();
  r.w.assign(r.n * r.k, 0.0);
  std::vector<double> buf(r.k);
  for (std::size_t i = 0; i < r.n; ++i) {
    joint_log_densities(g, family, sample[i], buf);
    const double lse = log_sum_exp(buf);
    if (!std::isfinite(lse)) {
      throw NumericError("observation " + std::to_string(i) + " has zero density under every component");
    }
    for (std::size_t c = 0; c < r.k; ++c) r.w[i * r.k + c] = std::exp(buf[c] - lse);
  }
  return r;
}

MixingDistribution em_step(const MixingDistribution& g, const SortedSample& sample, Family family,
                           const PenaltyConfig& penalty) {
  const ResponsibilityMatrix r = responsibilities(g, sample, family);
  const std::size_t n = r.n;
  const std::size_t k = r.k;
  std::vector<double> weights(k), locations(k), scales(k);
  std::vector<double> column(n);
  for (std::size_t c = 0; c < k; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      column[i] = r(i, c);
      total += column[i];
    }
    if (!(total > 0.0)) {
      throw NumericError("component " + std::to_string(c + 1) + " received no responsibility (starved)");
    }
    weights[c] = total / static_cast<double>(n);
    if (family.kind() == FamilyKind::kNormal) {
      double mu = 0.0;
      for (std::size_t i = 0; i < n; ++i) mu += column[i] * sample[i];
      mu /= total;
      double ss = 0.0;
      for (std::size_t i = 0; i < n; ++i) ss += column[i] * (sample[i] - mu) * (sample[i] - mu);
      locations[c] = mu;
      scales[c] = std::sqrt((ss + 2.0 * penalty.a_n * penalty.scale_stat) / (total + 2.0 * penalty.a_n));
    } else {
      std::tie(locations[c], scales[c]) =
          numeric_m_step(sample, family, column, total, penalty, g.location(c), g.scale(c));
    }
  }
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  for (double& w : weights) w /= wsum;
  return MixingDistribution(std::move(weights), std::move(locations), std::move(scales));
}

FitReport fit_pmle(const SortedSample& sample, Family family, std::size_t k, const PmleConfig& config) {
  require_fittable(sample, k);
  if (config.n_starts == 0) throw DomainError("n_starts must be at least 1");
  const PenaltyConfig penalty = PenaltyConfig::for_sample(sample, config.a_n, config.scale_stat);

  FitReport report;
  report.method = "pmle";
  report.family = family;
  bool have_best = false;
  for (std::size_t s = 0; s < config.n_starts; ++s) {
    StartDiagnostics diag;
    try {
      MixingDistribution g = initial_mixing(sample, k, s, config.seed);
      double pl = penalized_loglik(g, sample, family, penalty);
      std::vector<double> trace{pl};
      bool converged = false;
      std::size_t it = 0;
      while (it < config.max_iter) {
        MixingDistribution next = em_step(g, sample, family, penalty);
        const double next_pl = penalized_loglik(next, sample, family, penalty);
        ++it;
        trace.push_back(next_pl);
        const double gain = next_pl - pl;
        g = std::move(next);
        pl = next_pl;
        if (gain < config.tol) {
          converged = true;
          break;
        }
      }
      diag.objective = pl;
      diag.iterations = it;
      diag.converged = converged;
      if (!have_best || pl > report.objective) {
        report.g_hat = g;
        report.objective = pl;
        report.converged = converged;
        report.iterations = it;
        report.trace = std::move(trace);
        have_best = true;
      }
    } catch (const NumericError& e) {
      diag.failure = e.what();
      diag.objective = std::numeric_limits<double>::quiet_NaN();
    }
    report.starts.push_back(std::move(diag));
  }
  report.starts_tried = config.n_starts;
  if (!have_best) throw NumericError("every pMLE start failed");
  for (double w : report.g_hat.weights()) {
    if (w < 1e-10) report.weight_collapse = true;
  }
  return report;
}

HomogeneousMle fit_homogeneous_mle(const SortedSample& sample, Family family) {
  if (sample.size() < 2 || !(sample.var_s() > 0.0)) {
    throw DegenerateSampleError("the homogeneous MLE needs a non-constant sample");
  }
  const double n = static_cast<double>(sample.size());
  if (family.kind() == FamilyKind::kNormal) {
    return {sample.mean(), std::sqrt(sample.var_s() * (n - 1.0) / n)};
  }
  const std::span<const double> xs = sample.values();
  const double center = sample.mean();
  const ObjectiveFn fn = [&](std::span<const double> p, std::span<double> grad) {
    const double m = p[0];
    const double tau = p[1];
    if (!(tau > -700.0 && tau < 700.0)) return std::numeric_limits<double>::quiet_NaN();
    const double inv_s = std::exp(-tau);
    double value = 0.0, g_mu = 0.0, g_tau = 0.0;
    for (double x : xs) {
      const double z = (x - center - m) * inv_s;
      const double d = family.dlog_pdf(z);
      value -= family.log_pdf(z) - tau;
      g_mu += d * inv_s;
      g_tau += d * z + 1.0;
    }
    grad[0] = g_mu / n;
    grad[1] = g_tau / n;
    return value / n;
  };
  const double sigma0 = sample.sd() / std::sqrt(family.variance());
  BfgsOptions options;
  options.grad_tol = 1e-12;
  options.max_iter = 500;
  const BfgsResult res = minimize_bfgs(fn, {-family.mean() * sigma0, std::log(sigma0)}, options);
  return {center + res.x[0], std::exp(res.x[1])};
}

}  // namespace lsmix
