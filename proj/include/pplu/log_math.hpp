// Copyright 2026 The PPLu Authors.
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

// Log-space helpers. Probabilities are kept as natural logs everywhere; these
// are the only places where sums of probabilities are formed.

#ifndef PPLU_LOG_MATH_HPP_
#define PPLU_LOG_MATH_HPP_

#include <algorithm>
#include <cmath>
#include <limits>
#include <span>

namespace pplu {

inline constexpr double kLogZero = -std::numeric_limits<double>::infinity();

// ln(exp(a) + exp(b)).
inline double log_add(double a, double b) {
  if (a < b) std::swap(a, b);
  if (b == kLogZero) return a;
  return a + std::log1p(std::exp(b - a));
}

// ln(sum_i exp(xs[i])). Returns kLogZero for an empty span or all -inf terms.
// A single finite term is returned unchanged.
inline double log_sum_exp(std::span<const double> xs) {
  if (xs.empty()) return kLogZero;
  const double max = *std::max_element(xs.begin(), xs.end());
  if (max == kLogZero) return kLogZero;
  if (std::isinf(max)) return max;
  double sum = 0.0;
  for (double x : xs) sum += std::exp(x - max);
  return max + std::log(sum);
}

}  // namespace pplu

#endif  // PPLU_LOG_MATH_HPP_
