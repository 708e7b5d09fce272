// Copyright 2026 The triplescore Authors.
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

#ifndef TRIPLESCORE_LBFGS_HPP_
#define TRIPLESCORE_LBFGS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <deque>
#include <functional>
#include <span>
#include <vector>

#include "triplescore/error.hpp"
#include "triplescore/matrix.hpp"

namespace triplescore {

// Objective value at x; writes the gradient into grad.
using Objective =
    std::function<double(std::span<const double> x, std::span<double> grad)>;

struct LbfgsOptions {
  int max_iters = 500;
  double grad_tolerance = 1e-6;  // on the infinity norm
  int memory = 10;
  double armijo = 1e-4;
  double curvature = 0.9;
  // Relative slack on the objective for the approximate Wolfe test, used
  // once function differences fall to rounding level.
  double f_slack = 1e-10;
  double backtrack = 0.5;
  int max_line_search = 60;
};

enum class LbfgsStatus { kConverged, kMaxIterations, kLineSearchFailed };

struct LbfgsResult {
  std::vector<double> x;
  double value = 0.0;
  double grad_inf_norm = 0.0;
  int iterations = 0;
  LbfgsStatus status = LbfgsStatus::kMaxIterations;
};

inline double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Limited-memory BFGS with a backtracking line search (Armijo, falling back
// to approximate Wolfe near the optimum). Fully
// deterministic: no randomized steps, fixed evaluation order.
inline LbfgsResult minimize_lbfgs(const Objective &f, std::vector<double> x0,
                                  const LbfgsOptions &opt = {}) {
  const std::size_t n = x0.size();
  LbfgsResult res;
  res.x = std::move(x0);
  std::vector<double> g(n), x_new(n), g_new(n), d(n);
  double fx = f(res.x, g);
  if (!std::isfinite(fx) || !std::isfinite(inf_norm(g))) {
    throw NonFinite("objective is not finite at the initial point");
  }

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> history;
  std::vector<double> alpha(static_cast<std::size_t>(opt.memory));

  for (res.iterations = 0;; ++res.iterations) {
    res.grad_inf_norm = inf_norm(g);
    if (res.grad_inf_norm < opt.grad_tolerance) {
      res.status = LbfgsStatus::kConverged;
      break;
    }
    if (res.iterations >= opt.max_iters) {
      res.status = LbfgsStatus::kMaxIterations;
      break;
    }

    // Two-loop recursion: d = -H g.
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    for (std::size_t k = history.size(); k-- > 0;) {
      alpha[k] = history[k].rho * dot(history[k].s, d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha[k] * history[k].y[i];
    }
    if (!history.empty()) {
      const Pair &last = history.back();
      double gamma = dot(last.s, last.y) / dot(last.y, last.y);
      for (double &v : d) v *= gamma;
    }
    for (std::size_t k = 0; k < history.size(); ++k) {
      double beta = history[k].rho * dot(history[k].y, d);
      for (std::size_t i = 0; i < n; ++i) {
        d[i] += history[k].s[i] * (alpha[k] - beta);
      }
    }

    double slope = dot(g, d);
    if (!(slope < 0.0)) {
      history.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }

    double step = history.empty() ? std::min(1.0, 1.0 / inf_norm(g)) : 1.0;
    double f_new = 0.0;
    bool accepted = false;
    for (int ls = 0; ls < opt.max_line_search; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = res.x[i] + step * d[i];
      f_new = f(x_new, g_new);
      if (std::isfinite(f_new)) {
        if (f_new <= fx + opt.armijo * step * slope) {
          accepted = true;
          break;
        }
        // Approximate Wolfe conditions: the directional derivative stays
        // accurate when the objective no longer resolves the decrease.
        double new_slope = dot(g_new, d);
        if (f_new <= fx + opt.f_slack * std::abs(fx) &&
            new_slope >= opt.curvature * slope &&
            new_slope <= (2.0 * opt.armijo - 1.0) * slope) {
          accepted = true;
          break;
        }
      }
      step *= opt.backtrack;
    }
    if (!accepted) {
      if (!history.empty()) {
        // Retry from steepest descent before giving up.
        history.clear();
        --res.iterations;
        continue;
      }
      res.status = LbfgsStatus::kLineSearchFailed;
      break;
    }
    if (!std::isfinite(inf_norm(g_new))) {
      throw NonFinite("gradient is not finite during optimization");
    }

    Pair p{std::vector<double>(n), std::vector<double>(n), 0.0};
    for (std::size_t i = 0; i < n; ++i) {
      p.s[i] = x_new[i] - res.x[i];
      p.y[i] = g_new[i] - g[i];
    }
    double sy = dot(p.s, p.y);
    res.x.swap(x_new);
    g.swap(g_new);
    fx = f_new;
    if (sy > 1e-12 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y))) {
      p.rho = 1.0 / sy;
      history.push_back(std::move(p));
      if (history.size() > static_cast<std::size_t>(opt.memory)) {
        history.pop_front();
      }
    }
  }
  res.value = fx;
  return res;
}

}  // namespace triplescore

#endif  // TRIPLESCORE_LBFGS_HPP_
