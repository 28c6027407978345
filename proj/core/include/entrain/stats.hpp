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

// Correlation kernels with two-sided p-values. No external numerics.

#ifndef ENTRAIN_STATS_HPP_
#define ENTRAIN_STATS_HPP_

#include <cstddef>
#include <span>
#include <string_view>
#include <vector>

namespace entrain::stats {

struct CorrResult {
  double r = 0.0;  // in [-1, 1]
  double p = 1.0;  // two-sided, in [0, 1]
  std::size_t n = 0;
};

// Sample Pearson correlation. p from t = r*sqrt((n-2)/(1-r^2)) on n-2 df.
// Throws std::invalid_argument on length mismatch, InsufficientDataError
// when n < 3 and UndefinedCorrelationError when either input is constant.
CorrResult Pearson(std::span<const double> x, std::span<const double> y);

// Pearson correlation of average ranks; same p-value approximation and the
// same errors as Pearson (a sequence of all-equal values is constant).
CorrResult Spearman(std::span<const double> x, std::span<const double> y);

// 1-based ranks; tied values share the mean of the ranks they span.
std::vector<double> AverageRanks(std::span<const double> values);

// Exact two-sided permutation p-value of Spearman's rho, enumerating all n!
// orderings of y. Intended for n <= 10; throws std::invalid_argument beyond.
double SpearmanExactP(std::span<const double> x, std::span<const double> y);

// P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double StudentTTwoSidedP(double t, double df);

// Regularized incomplete beta I_x(a, b), relative accuracy ~1e-12.
double RegularizedIncompleteBeta(double a, double b, double x);

enum class Stars { kNone, kOne, kTwo, kThree };

// *** for p < .01, ** for p < .05, * for p < .1.
Stars StarsFor(double p);
std::string_view ToString(Stars stars);  // "", "*", "**", "***"

// Arithmetic mean and population (1/n) standard deviation.
double Mean(std::span<const double> values);
double PopulationStd(std::span<const double> values);
double Median(std::span<const double> values);

}  // namespace entrain::stats

#endif  // ENTRAIN_STATS_HPP_
