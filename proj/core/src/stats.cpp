// Copyright 2026 The Entrain Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "entrain/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "entrain/error.hpp"

namespace entrain::stats {
namespace {

void CheckPair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) {
    throw std::invalid_argument("correlation inputs differ in length");
  }
  if (x.size() < 3) {
    throw InsufficientDataError("correlation needs at least 3 samples");
  }
}

// Continued fraction for I_x(a, b) by the modified Lentz method; converges
// quickly for x < (a + 1) / (a + b + 2).
double BetaContinuedFraction(double a, double b, double x) {
  constexpr int kMaxIterations = 10000;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIterations; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < kEps) break;
  }
  return h;
}

CorrResult FromR(double r, std::size_t n) {
  r = std::clamp(r, -1.0, 1.0);
  CorrResult out{r, 0.0, n};
  const double one_minus = 1.0 - r * r;
  if (one_minus <= 0.0) return out;
  const double df = static_cast<double>(n) - 2.0;
  const double t = r * std::sqrt(df / one_minus);
  out.p = StudentTTwoSidedP(t, df);
  return out;
}

double PearsonR(std::span<const double> x, std::span<const double> y) {
  const double mx = Mean(x);
  const double my = Mean(y);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double dx = x[i] - mx;
    const double dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx <= 0.0 || syy <= 0.0) {
    throw UndefinedCorrelationError("correlation of a constant sequence");
  }
  return sxy / std::sqrt(sxx * syy);
}

}  // namespace

double Mean(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  return std::accumulate(values.begin(), values.end(), 0.0) /
         static_cast<double>(values.size());
}

double PopulationStd(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  const double m = Mean(values);
  double ss = 0.0;
  for (double v : values) ss += (v - m) * (v - m);
  return std::sqrt(ss / static_cast<double>(values.size()));
}

double Median(std::span<const double> values) {
  if (values.empty()) return std::numeric_limits<double>::quiet_NaN();
  std::vector<double> v(values.begin(), values.end());
  const std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid),
                   v.end());
  const double upper = v[mid];
  if (v.size() % 2 == 1) return upper;
  const double lower =
      *std::max_element(v.begin(), v.begin() + static_cast<std::ptrdiff_t>(mid));
  return 0.5 * (lower + upper);
}

double RegularizedIncompleteBeta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0)) {
    throw std::invalid_argument("incomplete beta needs a, b > 0");
  }
  if (x <= 0.0) return 0.0;
  if (x >= 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) -
                           std::lgamma(b) + a * std::log(x) +
                           b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * BetaContinuedFraction(a, b, x) / a;
  }
  return 1.0 - front * BetaContinuedFraction(b, a, 1.0 - x) / b;
}

double StudentTTwoSidedP(double t, double df) {
  if (!(df > 0.0)) throw std::invalid_argument("t test needs df > 0");
  if (std::isinf(t)) return 0.0;
  const double x = df / (df + t * t);
  return std::clamp(RegularizedIncompleteBeta(0.5 * df, 0.5, x), 0.0, 1.0);
}

CorrResult Pearson(std::span<const double> x, std::span<const double> y) {
  CheckPair(x, y);
  return FromR(PearsonR(x, y), x.size());
}

std::vector<double> AverageRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) {
                     return values[a] < values[b];
                   });
  std::vector<double> ranks(values.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    // Positions i..j-1 hold equal values; ranks are 1-based.
    const double rank = 0.5 * static_cast<double>(i + 1 + j);
    for (std::size_t k = i; k < j; ++k) ranks[order[k]] = rank;
    i = j;
  }
  return ranks;
}

CorrResult Spearman(std::span<const double> x, std::span<const double> y) {
  CheckPair(x, y);
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  return FromR(PearsonR(rx, ry), x.size());
}

double SpearmanExactP(std::span<const double> x, std::span<const double> y) {
  CheckPair(x, y);
  if (x.size() > 10) {
    throw std::invalid_argument("exact Spearman p limited to n <= 10");
  }
  const auto rx = AverageRanks(x);
  const auto ry = AverageRanks(y);
  const double observed = std::fabs(PearsonR(rx, ry));
  std::vector<std::size_t> perm(ry.size());
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  std::vector<double> permuted(ry.size());
  std::size_t extreme = 0, total = 0;
  do {
    for (std::size_t i = 0; i < perm.size(); ++i) permuted[i] = ry[perm[i]];
    if (std::fabs(PearsonR(rx, permuted)) >= observed - 1e-12) ++extreme;
    ++total;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return static_cast<double>(extreme) / static_cast<double>(total);
}

Stars StarsFor(double p) {
  if (p < 0.01) return Stars::kThree;
  if (p < 0.05) return Stars::kTwo;
  if (p < 0.1) return Stars::kOne;
  return Stars::kNone;
}

std::string_view ToString(Stars stars) {
  switch (stars) {
    case Stars::kThree:
      return "***";
    case Stars::kTwo:
      return "**";
    case Stars::kOne:
      return "*";
    case Stars::kNone:
      return "";
  }
  return "";
}

}  // namespace entrain::stats
