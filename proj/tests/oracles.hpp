#pragma once

// Reference implementations the tests compare against. Written from scratch
// on purpose, without touching the library's own helpers, so a shared bug
// cannot make a test vacuous.

#include <cmath>
#include <cstdlib>
#include <queue>
#include <stdexcept>
#include <vector>

namespace oracle {

inline int manhattan(int x0, int y0, int x1, int y1) {
  return std::abs(x0 - x1) + std::abs(y0 - y1);
}

/// Multi-source BFS over an explicit adjacency list; -1 where unreachable.
inline std::vector<int> bfs(int n, const std::vector<std::vector<int>>& adj,
                            const std::vector<int>& sources) {
  std::vector<int> dist(n, -1);
  std::queue<int> q;
  for (int s : sources) {
    if (dist[s] == -1) {
      dist[s] = 0;
      q.push(s);
    }
  }
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int u : adj[v]) {
      if (dist[u] == -1) {
        dist[u] = dist[v] + 1;
        q.push(u);
      }
    }
  }
  return dist;
}

namespace detail {

inline double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  double ap = a;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * 1e-16) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

inline double gamma_q_contfrac(double a, double x) {
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < 500; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::fabs(delta - 1.0) < 1e-16) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace detail

/// P(Chi2_dof > x), the chi-square upper tail.
inline double chi_square_survival(double x, int dof) {
  if (dof < 1) throw std::invalid_argument("chi_square_survival: dof");
  if (x <= 0.0) return 1.0;
  const double a = 0.5 * dof;
  const double xx = 0.5 * x;
  if (xx < a + 1.0) return 1.0 - detail::gamma_p_series(a, xx);
  return detail::gamma_q_contfrac(a, xx);
}

}  // namespace oracle
