#ifndef SDW_QUADRATURE_HPP
#define SDW_QUADRATURE_HPP

#include <functional>

#include "sdw/core.hpp"

namespace sdw {

// Gauss-Legendre nodes (descending in x) and weights on [-1, 1].
// n nodes integrate polynomials up to degree 2n-1 exactly.
inline void gauss_legendre(int n, std::vector<double>& nodes, std::vector<double>& weights) {
  require(n >= 1, "gauss_legendre: n must be >= 1");
  nodes.assign(n, 0.0);
  weights.assign(n, 0.0);
  for (int i = 0; i < n; ++i) {
    // Chebyshev-based initial guess, then Newton on P_n.
    double x = std::cos(pi * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      if (n == 1) p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    // polish once more to settle the weight
    {
      double p0 = 1.0, p1 = x;
      for (int k = 1; k < n; ++k) {
        const double p2 = ((2.0 * k + 1.0) * x * p1 - k * p0) / (k + 1.0);
        p0 = p1;
        p1 = p2;
      }
      dp = n * (x * p1 - p0) / (x * x - 1.0);
    }
    nodes[i] = x;
    weights[i] = 2.0 / ((1.0 - x * x) * dp * dp);
  }
}

namespace detail {

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * tol) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int max_depth = 48) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return detail::adaptive_simpson_rec(f, a, b, fa, fm, fb, whole, tol, max_depth);
}

// Fixed composite 5-point Gauss-Legendre rule; deterministic cost, suited to
// smooth integrands such as the squared Schwartz window.
inline double composite_gauss(const std::function<double(double)>& f, double a, double b,
                              int panels) {
  static const double gx[5] = {-0.9061798459386639928, -0.5384693101056830910, 0.0,
                               0.5384693101056830910, 0.9061798459386639928};
  static const double gw[5] = {0.2369268850561890875, 0.4786286704993664680,
                               0.5688888888888888889, 0.4786286704993664680,
                               0.2369268850561890875};
  if (panels < 1) panels = 1;
  const double h = (b - a) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double c = a + (p + 0.5) * h;
    double acc = 0.0;
    for (int k = 0; k < 5; ++k) acc += gw[k] * f(c + 0.5 * h * gx[k]);
    total += 0.5 * h * acc;
  }
  return total;
}

}  // namespace sdw

#endif  // SDW_QUADRATURE_HPP
