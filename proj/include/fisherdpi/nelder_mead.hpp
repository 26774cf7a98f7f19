// Copyright 2026 The fisherdpi Authors
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

#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numeric>
#include <vector>

namespace fisherdpi {

struct NelderMeadOptions {
  double reflection = 1.0;
  double expansion = 2.0;
  double contraction = 0.5;
  double shrink = 0.5;
  /// Stop once max f − min f over the simplex falls below this.
  double tolerance = 1e-10;
  int max_iterations = 2000;
  double initial_step = 0.5;
};

struct NelderMeadResult {
  std::vector<double> x;
  double value = 0.0;
  int iterations = 0;
  bool converged = false;
};

/// Minimizes f starting from an axis-aligned simplex around x0. NaN values
/// count as +inf.
template <typename F>
NelderMeadResult nelder_mead(F&& f, std::vector<double> x0, const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  const auto eval = [&](const std::vector<double>& x) {
    const double v = f(x);
    return std::isnan(v) ? std::numeric_limits<double>::infinity() : v;
  };
  if (n == 0) return {x0, eval(x0), 0, true};

  std::vector<std::vector<double>> simplex(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) simplex[i + 1][i] += opt.initial_step;
  std::vector<double> values(n + 1);
  for (std::size_t i = 0; i <= n; ++i) values[i] = eval(simplex[i]);

  std::vector<std::size_t> order(n + 1);
  std::vector<double> centroid(n), trial(n), trial2(n);
  const auto combine = [&](std::vector<double>& out, double coef, const std::vector<double>& toward) {
    // out = centroid + coef·(toward − centroid)
    for (std::size_t k = 0; k < n; ++k) out[k] = centroid[k] + coef * (toward[k] - centroid[k]);
  };

  NelderMeadResult res;
  int it = 0;
  for (;; ++it) {
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    const std::size_t best = order.front(), worst = order.back(), second = order[n - 1];
    if (values[worst] - values[best] < opt.tolerance) {
      res.converged = true;
      break;
    }
    if (it >= opt.max_iterations) break;

    std::fill(centroid.begin(), centroid.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[order[i]][k] / static_cast<double>(n);

    combine(trial, -opt.reflection, simplex[worst]);
    const double fr = eval(trial);
    if (fr < values[best]) {
      combine(trial2, -opt.reflection * opt.expansion, simplex[worst]);
      const double fe = eval(trial2);
      if (fe < fr) {
        simplex[worst] = trial2;
        values[worst] = fe;
      } else {
        simplex[worst] = trial;
        values[worst] = fr;
      }
      continue;
    }
    if (fr < values[second]) {
      simplex[worst] = trial;
      values[worst] = fr;
      continue;
    }
    if (fr < values[worst]) {
      combine(trial2, -opt.reflection * opt.contraction, simplex[worst]);
      const double fc = eval(trial2);
      if (fc <= fr) {
        simplex[worst] = trial2;
        values[worst] = fc;
        continue;
      }
    } else {
      combine(trial2, opt.contraction, simplex[worst]);
      const double fc = eval(trial2);
      if (fc < values[worst]) {
        simplex[worst] = trial2;
        values[worst] = fc;
        continue;
      }
    }
    for (std::size_t i = 0; i <= n; ++i) {
      if (i == best) continue;
      for (std::size_t k = 0; k < n; ++k)
        simplex[i][k] = simplex[best][k] + opt.shrink * (simplex[i][k] - simplex[best][k]);
      values[i] = eval(simplex[i]);
    }
  }

  const auto best_it = std::min_element(values.begin(), values.end());
  res.x = simplex[static_cast<std::size_t>(best_it - values.begin())];
  res.value = *best_it;
  res.iterations = it;
  return res;
}

}  // namespace fisherdpi
