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

#include "lsmix/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numbers>
#include <utility>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "lsmix/errors.hpp"

namespace lsmix {
namespace {

constexpr double kQuadTol = 1e-10;
// Beyond this many scales from its location a component's density is below
// e^-40 of its peak for every supported family.
constexpr double kTailSpan = 40.0;

std::int64_t choose2_int(std::int64_t n) { return n * (n - 1) / 2; }

// F0^{-1}((m - 1/2) / M), m = 1..M.
std::vector<double> mid_quantile_grid(Family family, std::size_t resolution) {
  std::vector<double> z(resolution);
  const double inv = 1.0 / static_cast<double>(resolution);
  for (std::size_t m = 0; m < resolution; ++m) z[m] = family.quantile((static_cast<double>(m) + 0.5) * inv);
  return z;
}

// Fraction of the grid drawn from component `from` that the MAP rule sends
// to component `to`.
double directed_overlap(const MixingDistribution& g, Family family, std::size_t from, std::size_t to,
                        std::span<const double> grid) {
  const double lw_from = std::log(g.weight(from));
  const double lw_to = std::log(g.weight(to));
  std::size_t hits = 0;
  for (double z : grid) {
    const double x = g.location(from) + g.scale(from) * z;
    const double own = lw_from + component_log_density(g, family, from, x);
    const double other = lw_to + component_log_density(g, family, to, x);
    if (own < other) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(grid.size());
}

DirectedOverlap overlap_on_grid(const MixingDistribution& g, Family family, std::size_t i, std::size_t j,
                                std::span<const double> grid) {
  DirectedOverlap o;
  o.j_given_i = directed_overlap(g, family, i, j, grid);
  o.i_given_j = directed_overlap(g, family, j, i, grid);
  o.total = o.j_given_i + o.i_given_j;
  return o;
}

void require_overlap_args(const MixingDistribution& g, std::size_t i, std::size_t j, std::size_t resolution) {
  if (i >= g.size() || j >= g.size() || i == j) throw DomainError("overlap needs two distinct component indices");
  if (resolution == 0) throw DomainError("overlap resolution must be positive");
  if (g.has_point_mass()) throw UnsupportedError("overlap requires every scale to be positive");
  if (!(g.weight(i) > 0.0) || !(g.weight(j) > 0.0)) throw DomainError("overlap requires positive weights");
}

MixingDistribution two_component(double p, double a, double b) {
  return MixingDistribution({p, 1.0 - p}, {0.0, b}, {a, 1.0});
}

}  // namespace

double product_integral(Family family, double mu1, double sigma1, double mu2, double sigma2) {
  if (!(sigma1 > 0.0) || !(sigma2 > 0.0)) throw UnsupportedError("product integral requires positive scales");
  if (family.kind() == FamilyKind::kNormal) {
    const double v = sigma1 * sigma1 + sigma2 * sigma2;
    const double d = mu1 - mu2;
    return std::exp(-0.5 * d * d / v) / std::sqrt(2.0 * std::numbers::pi * v);
  }
  const auto integrand = [&](double x) {
    return family.pdf((x - mu1) / sigma1) / sigma1 * family.pdf((x - mu2) / sigma2) / sigma2;
  };
  // Both densities are negligible outside the intersection of their
  // supports' bulk; break points keep narrow peaks from being stepped over.
  const double lo = std::max(mu1 - kTailSpan * sigma1, mu2 - kTailSpan * sigma2);
  const double hi = std::min(mu1 + kTailSpan * sigma1, mu2 + kTailSpan * sigma2);
  if (!(lo < hi)) return 0.0;
  std::vector<double> cuts{lo, hi};
  for (double c : {mu1, mu2, mu1 - 5.0 * sigma1, mu1 + 5.0 * sigma1, mu2 - 5.0 * sigma2, mu2 + 5.0 * sigma2,
                   mu1 - sigma1, mu1 + sigma1, mu2 - sigma2, mu2 + sigma2}) {
    if (c > lo && c < hi) cuts.push_back(c);
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  double total = 0.0;
  double error_sum = 0.0;
  for (std::size_t s = 0; s + 1 < cuts.size(); ++s) {
    double error = 0.0;
    total += boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, cuts[s], cuts[s + 1], 20,
                                                                            kQuadTol, &error);
    error_sum += error;
  }
  if (!std::isfinite(total) || error_sum > 1e-8 * std::fabs(total) + 1e-300) {
    throw NumericError("product-density quadrature did not reach tolerance");
  }
  return total;
}

ProductMomentMatrix product_moments(const MixingDistribution& g1, const MixingDistribution& g2,
                                    Family family) {
  ProductMomentMatrix m;
  m.rows = g1.size();
  m.cols = g2.size();
  m.s.resize(m.rows * m.cols);
  for (std::size_t r = 0; r < m.rows; ++r) {
    for (std::size_t c = 0; c < m.cols; ++c) {
      m.s[r * m.cols + c] = product_integral(family, g1.location(r), g1.scale(r), g2.location(c), g2.scale(c));
    }
  }
  return m;
}

double l2_mixture_distance(const MixingDistribution& g1, const MixingDistribution& g2, Family family) {
  const auto quad = [&](const MixingDistribution& a, const MixingDistribution& b) {
    const ProductMomentMatrix m = product_moments(a, b, family);
    double total = 0.0;
    for (std::size_t r = 0; r < m.rows; ++r) {
      for (std::size_t c = 0; c < m.cols; ++c) total += a.weight(r) * m(r, c) * b.weight(c);
    }
    return total;
  };
  const double sq = quad(g1, g1) - 2.0 * quad(g1, g2) + quad(g2, g2);
  return std::sqrt(std::max(sq, 0.0));
}

AriCounts ari_counts(std::span<const int> labels_a, std::span<const int> labels_b) {
  if (labels_a.size() != labels_b.size()) throw DomainError("label vectors must have equal length");
  std::map<std::pair<int, int>, std::int64_t> table;
  std::map<int, std::int64_t> rows, cols;
  for (std::size_t i = 0; i < labels_a.size(); ++i) {
    ++table[{labels_a[i], labels_b[i]}];
    ++rows[labels_a[i]];
    ++cols[labels_b[i]];
  }
  AriCounts c;
  for (const auto& [key, n] : table) c.index += choose2_int(n);
  for (const auto& [key, n] : rows) c.sum_rows += choose2_int(n);
  for (const auto& [key, n] : cols) c.sum_cols += choose2_int(n);
  c.total_pairs = choose2_int(static_cast<std::int64_t>(labels_a.size()));
  return c;
}

double ari(std::span<const int> labels_a, std::span<const int> labels_b) {
  if (labels_a.size() != labels_b.size()) throw DomainError("label vectors must have equal length");
  if (labels_a.size() < 2) throw DomainError("ARI needs at least two items");
  const AriCounts c = ari_counts(labels_a, labels_b);
  __extension__ typedef __int128 wide;
  const wide pairs = c.total_pairs;
  const wide ab = static_cast<wide>(c.sum_rows) * c.sum_cols;
  wide num = 2 * (pairs * c.index - ab);
  wide den = pairs * (static_cast<wide>(c.sum_rows) + c.sum_cols) - 2 * ab;
  if (den == 0) return 1.0;
  constexpr wide kExact = wide(1) << 53;
  const auto abs_wide = [](wide v) { return v < 0 ? -v : v; };
  if (abs_wide(num) < kExact && abs_wide(den) < kExact) {
    return static_cast<double>(num) / static_cast<double>(den);
  }
  return static_cast<double>(static_cast<long double>(num) / static_cast<long double>(den));
}

DirectedOverlap pairwise_overlap(const MixingDistribution& g, Family family, std::size_t i, std::size_t j,
                                 std::size_t resolution) {
  require_overlap_args(g, i, j, resolution);
  const std::vector<double> grid = mid_quantile_grid(family, resolution);
  return overlap_on_grid(g, family, i, j, grid);
}

OverlapReport overlap_report(const MixingDistribution& g, Family family, std::size_t resolution) {
  OverlapReport rep;
  rep.k = g.size();
  rep.o.assign(rep.k * rep.k, 0.0);
  if (rep.k < 2) return rep;
  const std::vector<double> grid = mid_quantile_grid(family, resolution);
  double sum = 0.0;
  std::size_t pairs = 0;
  for (std::size_t i = 0; i < rep.k; ++i) {
    for (std::size_t j = i + 1; j < rep.k; ++j) {
      require_overlap_args(g, i, j, resolution);
      const double o = overlap_on_grid(g, family, i, j, grid).total;
      rep.o[i * rep.k + j] = o;
      rep.o[j * rep.k + i] = o;
      sum += o;
      ++pairs;
    }
  }
  rep.mean_omega = sum / static_cast<double>(pairs);
  return rep;
}

double solve_b_for_overlap(double p, double a, Family family, double target, std::size_t resolution) {
  if (!(p > 0.0 && p < 1.0)) throw DomainError("mixing proportion p must lie in (0, 1)");
  if (!(a > 0.0)) throw DomainError("scale a must be positive");
  if (!(target > 0.0 && target < 1.0)) throw DomainError("target overlap must lie in (0, 1)");
  const std::vector<double> grid = mid_quantile_grid(family, resolution);
  const auto overlap = [&](double b) { return overlap_on_grid(two_component(p, a, b), family, 0, 1, grid).total; };

  constexpr double kLo = 1e-3;
  constexpr double kHi = 50.0;
  constexpr int kChecks = 32;
  const double slack = 2.0 / static_cast<double>(resolution);
  double prev = overlap(kLo);
  const double top = prev;
  for (int c = 1; c <= kChecks; ++c) {
    const double b = kLo + (kHi - kLo) * c / kChecks;
    const double o = overlap(b);
    if (o > prev + slack) throw NumericError("overlap is not monotone in b over the search range");
    prev = o;
  }
  const double bottom = prev;
  if (target > top || target < bottom) {
    throw NumericError("target overlap is not attainable for b in [1e-3, 50]");
  }
  double lo = kLo, hi = kHi;
  for (int it = 0; it < 200 && hi - lo > 1e-10; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (overlap(mid) > target) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  const double b = 0.5 * (lo + hi);
  if (std::fabs(overlap(b) - target) >= 1e-4) {
    throw NumericError("bisection on b did not reach the target overlap");
  }
  return b;
}

}  // namespace lsmix
