#pragma once

// Limited-memory BFGS with Armijo backtracking. The line search is driven by
// an energy-difference callback rather than absolute energies so it keeps
// working once steps shrink below the resolution of the total energy.

#include <algorithm>
#include <cmath>
#include <deque>
#include <numeric>
#include <vector>

namespace penning::detail {

struct LbfgsSettings {
  double tolerance;      // infinity norm of the gradient
  long max_iterations;
  int history;
  double max_step;       // per-component cap on a single move
};

struct LbfgsOutcome {
  std::vector<double> x;
  std::vector<double> gradient;
  double energy_change = 0.0;  // accumulated, always <= 0
  long iterations = 0;
  bool converged = false;
};

inline double inf_norm(const std::vector<double>& v) {
  double m = 0.0;
  for (double e : v) m = std::max(m, std::abs(e));
  return m;
}

inline double dot(const std::vector<double>& a, const std::vector<double>& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

// grad(x) -> gradient; delta(x, step) -> E(x + step) - E(x);
// observe(iteration, accumulated change, gradient) after each accepted step.
template <class Grad, class Delta, class Observe>
LbfgsOutcome lbfgs_minimize(std::vector<double> x, Grad&& grad, Delta&& delta, Observe&& observe,
                            const LbfgsSettings& cfg) {
  constexpr double kArmijo = 1e-4;
  constexpr int kMaxHalvings = 60;

  struct Pair {
    std::vector<double> s, y;
    double rho;
  };
  std::deque<Pair> memory;

  LbfgsOutcome out;
  std::vector<double> g = grad(x);
  const std::size_t n = x.size();
  std::vector<double> d(n), step(n), alpha_k(static_cast<std::size_t>(cfg.history));

  while (true) {
    if (inf_norm(g) <= cfg.tolerance) {
      out.converged = true;
      break;
    }
    if (out.iterations >= cfg.max_iterations) break;

    // Two-loop recursion: d = -H g.
    for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
    for (std::size_t k = memory.size(); k-- > 0;) {
      const auto& m = memory[k];
      alpha_k[k] = m.rho * dot(m.s, d);
      for (std::size_t i = 0; i < n; ++i) d[i] -= alpha_k[k] * m.y[i];
    }
    if (!memory.empty()) {
      const auto& m = memory.back();
      const double gamma = dot(m.s, m.y) / dot(m.y, m.y);
      for (auto& e : d) e *= gamma;
    }
    for (std::size_t k = 0; k < memory.size(); ++k) {
      const auto& m = memory[k];
      const double beta = m.rho * dot(m.y, d);
      for (std::size_t i = 0; i < n; ++i) d[i] += (alpha_k[k] - beta) * m.s[i];
    }

    double slope = dot(g, d);
    if (!(slope < 0)) {
      memory.clear();
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      slope = dot(g, d);
    }

    double alpha = 1.0;
    const double dmax = inf_norm(d);
    if (memory.empty()) alpha = std::min(1.0, cfg.max_step / dmax);
    alpha = std::min(alpha, cfg.max_step / dmax);

    bool accepted = false;
    double change = 0.0;
    for (int h = 0; h < kMaxHalvings; ++h) {
      for (std::size_t i = 0; i < n; ++i) step[i] = alpha * d[i];
      change = delta(x, step);
      if (change <= kArmijo * alpha * slope && change < 0) {
        accepted = true;
        break;
      }
      alpha *= 0.5;
    }
    if (!accepted) {
      if (memory.empty()) break;  // steepest descent made no progress either
      memory.clear();
      continue;
    }

    for (std::size_t i = 0; i < n; ++i) x[i] += step[i];
    std::vector<double> g_new = grad(x);
    std::vector<double> y(n);
    for (std::size_t i = 0; i < n; ++i) y[i] = g_new[i] - g[i];
    const double sy = dot(step, y);
    if (sy > 1e-14 * std::sqrt(dot(step, step) * dot(y, y))) {
      if (static_cast<int>(memory.size()) == cfg.history) memory.pop_front();
      memory.push_back({step, std::move(y), 1.0 / sy});
    }
    g = std::move(g_new);
    out.energy_change += change;
    ++out.iterations;
    observe(out.iterations, out.energy_change, g);
  }
  out.x = std::move(x);
  out.gradient = std::move(g);
  return out;
}

}  // namespace penning::detail
