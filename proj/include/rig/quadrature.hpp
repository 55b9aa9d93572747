// Globally adaptive Gauss-Kronrod integration with explicit breakpoints.
//
// Boost's recursive driver applies the tolerance to each subinterval, which
// keeps refining regions where the integrand is negligible (b^(n-2) for large
// n). Here Boost supplies only the rule on one interval; the interval with the
// largest error estimate is bisected until the summed error drops below
// rel_tol * |total| (QUADPACK QAG style).
#pragma once

#include <algorithm>
#include <cmath>
#include <initializer_list>
#include <queue>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

namespace rig::quad {

/// Sorted, de-duplicated breakpoints strictly inside (a, b), framed by a and b.
inline std::vector<double> partition(double a, double b,
                                     std::initializer_list<double> hints) {
  std::vector<double> pts{a, b};
  for (double h : hints) {
    if (std::isfinite(h) && h > a && h < b) pts.push_back(h);
  }
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
  return pts;
}

/// Integral of f over [pts.front(), pts.back()]. Stops when the error estimate
/// is below max(rel_tol |total|, abs_tol) or after max_intervals bisections.
template <unsigned Points = 61, class F>
double integrate_pieces(F&& f, const std::vector<double>& pts, double rel_tol,
                        double abs_tol = 0.0, unsigned max_intervals = 4000) {
  using Rule = boost::math::quadrature::gauss_kronrod<double, Points>;
  struct Piece {
    double a, b, value, error;
    bool operator<(const Piece& o) const { return error < o.error; }
  };
  const auto eval = [&](double a, double b) {
    double err = 0.0;
    const double v = Rule::integrate(f, a, b, 0, 0.0, &err);
    return Piece{a, b, v, err};
  };
  std::priority_queue<Piece> heap;
  double total = 0.0;
  double error = 0.0;
  for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
    if (!(pts[k + 1] > pts[k])) continue;
    heap.push(eval(pts[k], pts[k + 1]));
  }
  // Summed afresh so the result does not carry incremental rounding.
  const auto resum = [&] {
    auto copy = heap;
    total = 0.0;
    error = 0.0;
    while (!copy.empty()) {
      total += copy.top().value;
      error += copy.top().error;
      copy.pop();
    }
  };
  resum();
  for (unsigned it = 0; it < max_intervals && !heap.empty(); ++it) {
    if (error <= std::max(rel_tol * std::abs(total), abs_tol)) break;
    const Piece worst = heap.top();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) break;
    heap.pop();
    const Piece left = eval(worst.a, mid);
    const Piece right = eval(mid, worst.b);
    total += left.value + right.value - worst.value;
    error += left.error + right.error - worst.error;
    heap.push(left);
    heap.push(right);
  }
  resum();
  return total;
}

template <unsigned Points = 61, class F>
double integrate(F&& f, double a, double b,
                 std::initializer_list<double> hints, double rel_tol,
                 double abs_tol = 0.0) {
  return integrate_pieces<Points>(std::forward<F>(f), partition(a, b, hints),
                                  rel_tol, abs_tol);
}

}  // namespace rig::quad
