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

#include "lsmix/mwde.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lsmix/bfgs.hpp"
#include "lsmix/errors.hpp"
#include "lsmix/init.hpp"

namespace lsmix {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_positive_scales(const MixingDistribution& g) {
  if (g.has_point_mass()) {
    throw UnsupportedError("the W2 objective requires every scale to be positive");
  }
}

// Fills ws for a mixture expressed in the same coordinates as the sample
// the standard quantiles were built for.
// A component narrower than the spacing of doubles near xi leaves the
// mixture CDF at xi away from t. The residual goes to the steepest component.
void reconcile(const MixingDistribution& g, Family family, double t, double xi, std::span<double> f,
               std::span<double> tz) {
  double resid = -t;
  for (std::size_t c = 0; c < f.size(); ++c) resid += g.weight(c) * f[c];
  if (std::fabs(resid) <= 1e-12) return;
  std::size_t best = 0;
  double best_width = kInf;
  for (std::size_t c = 0; c < f.size(); ++c) {
    const double width = std::max(g.scale(c), std::fabs(xi - g.location(c)));
    if (g.weight(c) > 0.0 && width < best_width) {
      best_width = width;
      best = c;
    }
  }
  const double fc = std::clamp(f[best] - resid / g.weight(best), 0.0, 1.0);
  f[best] = fc;
  tz[best] = fc <= 0.0 ? 0.0 : fc >= 1.0 ? family.mean() : family.partial_mean(family.quantile(fc));
}

void fill_workspace(const MixingDistribution& g, Family family, std::span<const double> std_q,
                    QuantileWorkspace& ws) {
  const std::size_t n = std_q.size() + 1;
  const std::size_t k = g.size();
  ws.n = n;
  ws.k = k;
  ws.xi.assign(n + 1, 0.0);
  ws.cdf.assign((n + 1) * k, 0.0);
  ws.partial.assign((n + 1) * k, 0.0);
  ws.xi[0] = -kInf;
  ws.xi[n] = kInf;

  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t row = 1; row < n; ++row) {
    const double t = static_cast<double>(row) * inv_n;
    double lo = kInf, hi = -kInf, avg = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double q = g.location(c) + g.scale(c) * std_q[row - 1];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      avg += g.weight(c) * q;
    }
    double guess = avg;
    if (row > 1) {
      const double prev = ws.xi[row - 1];
      lo = std::clamp(prev, lo, hi);
      const double dens = mixture_pdf(g, family, prev);
      if (dens > 0.0) guess = prev + inv_n / dens;
    }
    ws.xi[row] = solve_mixture_quantile(g, family, t, lo, hi, guess);
  }

  for (std::size_t c = 0; c < k; ++c) {
    ws.cdf[n * k + c] = 1.0;
    ws.partial[n * k + c] = family.mean();
  }
  for (std::size_t row = 1; row < n; ++row) {
    const std::span<double> f(ws.cdf.data() + row * k, k), tz(ws.partial.data() + row * k, k);
    for (std::size_t c = 0; c < k; ++c) {
      const double z = (ws.xi[row] - g.location(c)) / g.scale(c);
      f[c] = family.cdf(z);
      tz[c] = family.partial_mean(z);
    }
    reconcile(g, family, static_cast<double>(row) * inv_n, ws.xi[row], f, tz);
  }
}

}  // namespace

UnconstrainedParams UnconstrainedParams::from_mixing(const MixingDistribution& g) {
  UnconstrainedParams p;
  const std::size_t k = g.size();
  const double log_last = std::log(g.weight(k - 1));
  for (std::size_t c = 0; c < k; ++c) {
    if (!(g.weight(c) > 0.0) || !(g.scale(c) > 0.0)) {
      throw DomainError("unconstrained parameters need positive weights and scales");
    }
    p.mus.push_back(g.location(c));
    p.taus.push_back(std::log(g.scale(c)));
    p.ts.push_back(c + 1 == k ? 0.0 : std::log(g.weight(c)) - log_last);
  }
  return p;
}

UnconstrainedParams UnconstrainedParams::unflatten(std::span<const double> flat) {
  if (flat.empty() || flat.size() % 3 != 0) {
    throw DomainError("flattened parameter vector must have length 3K");
  }
  const std::size_t k = flat.size() / 3;
  UnconstrainedParams p;
  p.mus.assign(flat.begin(), flat.begin() + k);
  p.taus.assign(flat.begin() + k, flat.begin() + 2 * k);
  p.ts.assign(flat.begin() + 2 * k, flat.end());
  return p;
}

MixingDistribution UnconstrainedParams::to_mixing() const {
  const std::size_t k = size();
  const double t_max = *std::max_element(ts.begin(), ts.end());
  std::vector<double> w(k), s(k);
  double total = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    w[c] = std::exp(ts[c] - t_max);
    total += w[c];
    s[c] = std::exp(taus[c]);
  }
  for (double& v : w) v /= total;
  return MixingDistribution(std::move(w), mus, std::move(s));
}

std::vector<double> UnconstrainedParams::flatten() const {
  std::vector<double> flat;
  flat.reserve(3 * size());
  flat.insert(flat.end(), mus.begin(), mus.end());
  flat.insert(flat.end(), taus.begin(), taus.end());
  flat.insert(flat.end(), ts.begin(), ts.end());
  return flat;
}

W2Objective::W2Objective(const SortedSample& sample, Family family)
    : centered_(sample.values().begin(), sample.values().end()), shift_(sample.mean()), family_(family) {
  double sq = 0.0;
  for (double& x : centered_) {
    x -= shift_;
    sq += x * x;
  }
  const std::size_t n = centered_.size();
  mean_sq_ = sq / static_cast<double>(n);
  std_quantiles_.resize(n > 0 ? n - 1 : 0);
  for (std::size_t row = 1; row < n; ++row) {
    std_quantiles_[row - 1] = family.quantile(static_cast<double>(row) / static_cast<double>(n));
    if (centered_[row] > centered_[row - 1]) gaps_.push_back({row, centered_[row] - centered_[row - 1]});
  }
}

MixingDistribution W2Objective::center(const MixingDistribution& g) const {
  std::vector<double> loc(g.locations().begin(), g.locations().end());
  for (double& m : loc) m -= shift_;
  return MixingDistribution(std::vector<double>(g.weights().begin(), g.weights().end()), std::move(loc),
                            std::vector<double>(g.scales().begin(), g.scales().end()));
}

QuantileWorkspace W2Objective::workspace(const MixingDistribution& g) const {
  require_positive_scales(g);
  QuantileWorkspace ws;
  fill_workspace(center(g), family_, std_quantiles_, ws);
  for (double& x : ws.xi) x += shift_;
  return ws;
}

double W2Objective::value(const MixingDistribution& g) const {
  require_positive_scales(g);
  return evaluate(center(g), {});
}

double W2Objective::evaluate(const MixingDistribution& g, std::span<double> grad) const {
  const std::size_t k = g.size();
  const double mu0 = family_.mean();
  const double m2 = mu0 * mu0 + family_.variance();
  const double x_last = centered_.back();
  const double inv_n = 1.0 / static_cast<double>(centered_.size());

  // Summation by parts: sum_n x_(n) dH_n = x_(N) H(inf) - sum_n (x_(n+1) - x_(n)) H(xi_n),
  // so only quantiles at gaps between distinct order statistics are needed.
  std::vector<double> sum_xf(k, x_last), sum_xt(k, x_last * mu0), motion(k, 0.0), f(k), tz(k);
  double prev = -kInf, prev_t = 0.0;
  for (const Gap& gap : gaps_) {
    const double t = static_cast<double>(gap.row) * inv_n;
    double lo = kInf, hi = -kInf, avg = 0.0;
    for (std::size_t c = 0; c < k; ++c) {
      const double q = g.location(c) + g.scale(c) * std_quantiles_[gap.row - 1];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
      avg += g.weight(c) * q;
    }
    double guess = avg;
    if (prev > -kInf) {
      lo = std::clamp(prev, lo, hi);
      const double dens = mixture_pdf(g, family_, prev);
      if (dens > 0.0) guess = prev + (t - prev_t) / dens;
    }
    const double xi = solve_mixture_quantile(g, family_, t, lo, hi, guess);
    prev = xi;
    prev_t = t;
    for (std::size_t c = 0; c < k; ++c) {
      const double z = (xi - g.location(c)) / g.scale(c);
      f[c] = family_.cdf(z);
      tz[c] = family_.partial_mean(z);
    }
    reconcile(g, family_, t, xi, f, tz);
    for (std::size_t c = 0; c < k; ++c) {
      sum_xf[c] -= gap.dx * f[c];
      sum_xt[c] -= gap.dx * tz[c];
      motion[c] += gap.dx * xi * f[c];
    }
  }

  std::vector<double> second(k);
  double value = mean_sq_;
  for (std::size_t c = 0; c < k; ++c) {
    const double mu = g.location(c);
    const double sigma = g.scale(c);
    second[c] = mu * mu + sigma * sigma * m2 + 2.0 * mu * sigma * mu0;
    value += g.weight(c) * (second[c] - 2.0 * (mu * sum_xf[c] + sigma * sum_xt[c]));
  }

  if (!grad.empty()) {
    std::vector<double> d_w(k, 0.0);
    for (std::size_t c = 0; c < k; ++c) {
      const double w = g.weight(c);
      const double mu = g.location(c);
      const double sigma = g.scale(c);
      grad[c] = 2.0 * w * (mu + sigma * mu0 - sum_xf[c]);
      grad[k + c] = 2.0 * w * (sigma * m2 + mu * mu0 - sum_xt[c]) * sigma;
      // The last term follows the quantiles xi_n as the weights move.
      d_w[c] = second[c] - 2.0 * (mu * sum_xf[c] + sigma * sum_xt[c]) - 2.0 * motion[c];
    }
    double avg = 0.0;
    for (std::size_t c = 0; c < k; ++c) avg += g.weight(c) * d_w[c];
    for (std::size_t c = 0; c < k; ++c) grad[2 * k + c] = g.weight(c) * (d_w[c] - avg);
  }
  return std::max(value, 0.0);
}

double W2Objective::value_and_gradient(std::span<const double> flat, std::span<double> grad) const {
  const UnconstrainedParams p = UnconstrainedParams::unflatten(flat);
  for (double tau : p.taus) {
    // exp(tau) must stay a finite positive scale with room for z = x / sigma.
    if (!(tau > -700.0 && tau < 700.0)) return std::numeric_limits<double>::quiet_NaN();
  }
  for (double m : p.mus) {
    if (!std::isfinite(m)) return std::numeric_limits<double>::quiet_NaN();
  }
  MixingDistribution g = p.to_mixing();
  const double v = evaluate(center(g), grad);
  return std::isfinite(v) ? v : std::numeric_limits<double>::quiet_NaN();
}

QuantileWorkspace build_quantile_workspace(const MixingDistribution& g, const SortedSample& sample,
                                           Family family) {
  if (sample.size() <= g.size()) {
    throw DegenerateSampleError("the W2 objective needs more observations than components");
  }
  return W2Objective(sample, family).workspace(g);
}

double objective_w2(const MixingDistribution& g, const SortedSample& sample, Family family) {
  if (sample.size() <= g.size()) {
    throw DegenerateSampleError("the W2 objective needs more observations than components");
  }
  return W2Objective(sample, family).value(g);
}

std::vector<double> gradient_w2(const UnconstrainedParams& params, const SortedSample& sample,
                                Family family) {
  if (sample.size() <= params.size()) {
    throw DegenerateSampleError("the W2 objective needs more observations than components");
  }
  std::vector<double> grad(3 * params.size(), 0.0);
  W2Objective(sample, family).value_and_gradient(params.flatten(), grad);
  return grad;
}

FitReport fit_mwde(const SortedSample& sample, Family family, std::size_t k, const MwdeConfig& config) {
  require_fittable(sample, k);
  if (config.n_starts == 0) throw DomainError("n_starts must be at least 1");
  if (!(config.grad_tol > 0.0)) throw DomainError("grad_tol must be positive");

  const W2Objective objective(sample, family);
  const ObjectiveFn fn = [&objective](std::span<const double> x, std::span<double> g) {
    return objective.value_and_gradient(x, g);
  };
  BfgsOptions options;
  options.max_iter = config.max_iter;
  options.grad_tol = config.grad_tol;

  FitReport report;
  report.method = "mwde";
  report.family = family;
  bool have_best = false;
  BfgsResult best;
  for (std::size_t s = 0; s < config.n_starts; ++s) {
    StartDiagnostics diag;
    try {
      const MixingDistribution start = initial_mixing(sample, k, s, config.seed);
      BfgsResult res = minimize_bfgs(fn, UnconstrainedParams::from_mixing(start).flatten(), options);
      diag.objective = res.value;
      diag.iterations = res.iterations;
      diag.converged = res.converged;
      if (!std::isfinite(res.value)) {
        diag.failure = res.stop_reason;
      } else if (!have_best || res.value < best.value) {
        best = std::move(res);
        have_best = true;
      }
    } catch (const Error& e) {
      diag.failure = e.what();
      diag.objective = std::numeric_limits<double>::quiet_NaN();
    }
    report.starts.push_back(std::move(diag));
  }
  report.starts_tried = config.n_starts;
  if (!have_best) throw NumericError("every MWDE start failed");

  report.g_hat = UnconstrainedParams::unflatten(best.x).to_mixing();
  report.objective = best.value;
  report.converged = best.converged;
  report.iterations = best.iterations;
  report.trace = std::move(best.trace);
  for (double w : report.g_hat.weights()) {
    if (w < 1e-10) report.weight_collapse = true;
  }
  return report;
}

HomogeneousEstimate fit_homogeneous_mwde(const SortedSample& sample, Family family) {
  const std::size_t n = sample.size();
  if (n < 2) throw DegenerateSampleError("the homogeneous MWDE needs at least two observations");
  const double center = sample.mean();
  const double inv_n = 1.0 / static_cast<double>(n);
  double s = 0.0;
  double t_prev = 0.0;  // T(-inf)
  for (std::size_t row = 1; row <= n; ++row) {
    const double t_cur =
        row == n ? family.mean() : family.partial_mean(family.quantile(static_cast<double>(row) * inv_n));
    s += (sample[row - 1] - center) * (t_cur - t_prev);
    t_prev = t_cur;
  }
  const double var0 = family.variance();
  HomogeneousEstimate est;
  est.sigma = s / var0;
  est.mu = center - family.mean() * est.sigma;
  if (!(sample.var_s() > 0.0)) {
    est.degenerate = true;
    est.sigma = 0.0;
    est.mu = center;
  }
  est.sigma = std::max(est.sigma, 0.0);
  return est;
}

}  // namespace lsmix
