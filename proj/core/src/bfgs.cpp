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

#include "lsmix/bfgs.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "lsmix/errors.hpp"

namespace lsmix {
namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::fabs(x));
  return m;
}

struct Point {
  double alpha = 0.0;
  double value = 0.0;
  double slope = 0.0;  // directional derivative
  std::vector<double> x;
  std::vector<double> grad;
  bool finite() const { return std::isfinite(value) && std::isfinite(slope); }
};

class LineSearch {
 public:
  LineSearch(const ObjectiveFn& fn, const BfgsOptions& opt, std::span<const double> x,
             std::span<const double> dir, double f0, double slope0, std::size_t& evals)
      : fn_(fn), opt_(opt), x_(x), dir_(dir), f0_(f0), slope0_(slope0), evals_(evals) {}

  // Returns true and fills `out` on success. On failure `out` holds the best
  // sufficient-decrease point seen, if any (alpha > 0).
  bool run(double alpha_init, Point& out) {
    Point prev;
    prev.alpha = 0.0;
    prev.value = f0_;
    prev.slope = slope0_;
    double alpha = alpha_init;
    for (std::size_t i = 0; i < opt_.max_line_search; ++i) {
      Point cur = eval(alpha);
      if (!cur.finite() || cur.value > f0_ + opt_.c1 * alpha * slope0_ ||
          (i > 0 && cur.value >= prev.value)) {
        return zoom(prev, cur, out);
      }
      note_armijo(cur);
      if (std::fabs(cur.slope) <= -opt_.c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope >= 0.0) return zoom(cur, prev, out);
      prev = std::move(cur);
      alpha *= 2.0;
    }
    return fallback(out);
  }

 private:
  Point eval(double alpha) {
    Point p;
    p.alpha = alpha;
    p.x.resize(x_.size());
    p.grad.assign(x_.size(), 0.0);
    for (std::size_t i = 0; i < x_.size(); ++i) p.x[i] = x_[i] + alpha * dir_[i];
    ++evals_;
    p.value = fn_(p.x, p.grad);
    p.slope = std::isfinite(p.value) ? dot(p.grad, dir_) : std::numeric_limits<double>::quiet_NaN();
    return p;
  }

  void note_armijo(const Point& p) {
    if (p.finite() && p.alpha > 0.0 && p.value <= f0_ + opt_.c1 * p.alpha * slope0_ &&
        (!have_best_ || p.value < best_.value)) {
      best_ = p;
      have_best_ = true;
    }
  }

  bool fallback(Point& out) {
    if (have_best_) out = best_;
    return false;
  }

  // Cubic minimizer of the interpolant through (lo, hi); falls back to
  // bisection when it is unusable or too close to an end point.
  static double interpolate(const Point& lo, const Point& hi) {
    const double a = lo.alpha;
    const double b = hi.alpha;
    const double mid = 0.5 * (a + b);
    if (!hi.finite()) return a + 0.25 * (b - a);
    const double d1 = lo.slope + hi.slope - 3.0 * (lo.value - hi.value) / (a - b);
    const double disc = d1 * d1 - lo.slope * hi.slope;
    if (disc < 0.0) return mid;
    const double d2 = std::copysign(std::sqrt(disc), b - a);
    const double denom = hi.slope - lo.slope + 2.0 * d2;
    if (denom == 0.0) return mid;
    const double t = b - (b - a) * (hi.slope + d2 - d1) / denom;
    const double lo_edge = std::min(a, b) + 0.1 * std::fabs(b - a);
    const double hi_edge = std::max(a, b) - 0.1 * std::fabs(b - a);
    if (!std::isfinite(t) || t < lo_edge || t > hi_edge) return mid;
    return t;
  }

  bool zoom(Point lo, Point hi, Point& out) {
    for (std::size_t j = 0; j < opt_.max_line_search; ++j) {
      const double alpha = interpolate(lo, hi);
      if (std::fabs(hi.alpha - lo.alpha) <= 1e-16 * std::max(1.0, std::fabs(lo.alpha))) break;
      Point cur = eval(alpha);
      if (!cur.finite() || cur.value > f0_ + opt_.c1 * alpha * slope0_ || cur.value >= lo.value) {
        hi = std::move(cur);
        continue;
      }
      note_armijo(cur);
      if (std::fabs(cur.slope) <= -opt_.c2 * slope0_) {
        out = std::move(cur);
        return true;
      }
      if (cur.slope * (hi.alpha - lo.alpha) >= 0.0) hi = lo;
      lo = std::move(cur);
    }
    return fallback(out);
  }

  const ObjectiveFn& fn_;
  const BfgsOptions& opt_;
  std::span<const double> x_;
  std::span<const double> dir_;
  double f0_;
  double slope0_;
  std::size_t& evals_;
  Point best_;
  bool have_best_ = false;
};

}  // namespace

BfgsResult minimize_bfgs(const ObjectiveFn& fn, std::vector<double> x0, const BfgsOptions& options) {
  const std::size_t n = x0.size();
  if (n == 0) throw DomainError("BFGS needs at least one variable");
  BfgsResult res;
  res.x = std::move(x0);
  res.gradient.assign(n, 0.0);
  res.value = fn(res.x, res.gradient);
  res.evaluations = 1;
  if (!std::isfinite(res.value)) {
    res.stop_reason = "non-finite objective at start point";
    return res;
  }
  res.trace.push_back(res.value);

  // Row-major inverse Hessian approximation.
  std::vector<double> h(n * n, 0.0);
  auto reset_identity = [&](double scale) {
    std::fill(h.begin(), h.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) h[i * n + i] = scale;
  };
  reset_identity(1.0);
  bool first_step = true;
  std::vector<double> dir(n), s(n), y(n), hy(n);

  while (true) {
    if (inf_norm(res.gradient) < options.grad_tol) {
      res.converged = true;
      res.stop_reason = "gradient tolerance reached";
      return res;
    }
    if (res.iterations >= options.max_iter) {
      res.stop_reason = "iteration limit reached";
      return res;
    }

    for (std::size_t i = 0; i < n; ++i) {
      double acc = 0.0;
      for (std::size_t j = 0; j < n; ++j) acc -= h[i * n + j] * res.gradient[j];
      dir[i] = acc;
    }
    double slope = dot(dir, res.gradient);
    if (!(slope < 0.0)) {
      reset_identity(1.0);
      first_step = true;
      for (std::size_t i = 0; i < n; ++i) dir[i] = -res.gradient[i];
      slope = dot(dir, res.gradient);
    }

    const double alpha0 = first_step ? std::min(1.0, 1.0 / inf_norm(res.gradient)) : 1.0;
    LineSearch search(fn, options, res.x, dir, res.value, slope, res.evaluations);
    Point next;
    const bool ok = search.run(alpha0, next);
    if (!ok && next.alpha <= 0.0) {
      if (!first_step) {
        // Retry once along steepest descent with a fresh Hessian.
        reset_identity(1.0);
        first_step = true;
        continue;
      }
      res.stop_reason = "line search failed";
      return res;
    }

    for (std::size_t i = 0; i < n; ++i) {
      s[i] = next.x[i] - res.x[i];
      y[i] = next.grad[i] - res.gradient[i];
    }
    const double sy = dot(s, y);
    const double prev_value = res.value;
    res.x = std::move(next.x);
    res.gradient = std::move(next.grad);
    res.value = next.value;
    ++res.iterations;
    res.trace.push_back(res.value);

    if (sy > 1e-12 * std::sqrt(dot(s, s) * dot(y, y))) {
      if (first_step) reset_identity(sy / dot(y, y));
      first_step = false;
      const double rho = 1.0 / sy;
      for (std::size_t i = 0; i < n; ++i) {
        double acc = 0.0;
        for (std::size_t j = 0; j < n; ++j) acc += h[i * n + j] * y[j];
        hy[i] = acc;
      }
      const double yhy = dot(y, hy);
      // H+ = H - rho (H y s' + s y' H) + (rho^2 y'Hy + rho) s s'
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
          h[i * n + j] += -rho * (hy[i] * s[j] + s[i] * hy[j]) + (rho * rho * yhy + rho) * s[i] * s[j];
        }
      }
    }

    if (prev_value - res.value <= 1e-15 * std::max(1.0, std::fabs(res.value)) &&
        std::sqrt(dot(s, s)) <= 1e-13 * std::max(1.0, std::sqrt(dot(res.x, res.x)))) {
      res.converged = inf_norm(res.gradient) < options.grad_tol;
      res.stop_reason = "no further progress";
      return res;
    }
  }
}

}  // namespace lsmix
