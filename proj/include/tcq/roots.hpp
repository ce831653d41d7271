#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

#include <cmath>
#include <functional>
#include <optional>
#include <vector>

// Real roots of small univariate polynomials: companion-matrix eigenvalues
// followed by Newton polishing (switching to the derivative near multiple
// roots), plus generic bisection/Newton helpers used by the solvers.

namespace tcq {

/// p(x) for ascending coefficients c[0] + c[1] x + ...
inline double poly_eval(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

inline std::vector<double> poly_deriv(const std::vector<double>& c) {
  std::vector<double> d;
  for (std::size_t k = 1; k < c.size(); ++k) d.push_back(c[k] * static_cast<double>(k));
  return d;
}

/// Magnitude of p's terms at x; scale reference for "p(x) is numerically zero".
inline double poly_scale_at(const std::vector<double>& c, double x) {
  double s = 0.0, xp = 1.0;
  for (double ck : c) {
    s += std::abs(ck) * std::abs(xp);
    xp *= x;
  }
  return std::max(s, 1e-300);
}

struct RealRoots {
  std::vector<double> roots;       // sorted ascending, polished
  bool identically_zero = false;   // all coefficients vanish
};

/// All real roots of the polynomial with ascending coefficients `c`.
/// Degree <= 2 is handled in closed form, higher degrees via the companion
/// matrix. Each root is polished with Newton; when the derivative also
/// vanishes (multiple root) the polish runs on the derivative instead, which
/// restores full accuracy for double roots.
inline RealRoots real_roots(std::vector<double> c) {
  RealRoots out;
  double maxc = 0.0;
  for (double v : c) maxc = std::max(maxc, std::abs(v));
  if (maxc == 0.0) {
    out.identically_zero = true;
    return out;
  }
  while (!c.empty() && std::abs(c.back()) <= 1e-14 * maxc) c.pop_back();
  const int deg = static_cast<int>(c.size()) - 1;
  if (deg <= 0) return out;

  std::vector<double> raw;
  if (deg == 1) {
    raw.push_back(-c[0] / c[1]);
  } else if (deg == 2) {
    const double a = c[2], b = c[1], cc = c[0];
    const double disc = b * b - 4.0 * a * cc;
    if (disc >= 0.0) {
      const double sq = std::sqrt(disc);
      // numerically stable quadratic formula
      const double q = -0.5 * (b + (b >= 0 ? sq : -sq));
      raw.push_back(q / a);
      if (q != 0.0)
        raw.push_back(cc / q);
      else
        raw.push_back(-b / a - q / a);
    } else if (disc >= -1e-12 * (b * b + 4.0 * std::abs(a * cc) + 1.0)) {
      raw.push_back(-b / (2.0 * a));  // near-double root
    }
  } else {
    Eigen::MatrixXd comp = Eigen::MatrixXd::Zero(deg, deg);
    for (int i = 1; i < deg; ++i) comp(i, i - 1) = 1.0;
    for (int i = 0; i < deg; ++i) comp(i, deg - 1) = -c[i] / c[deg];
    Eigen::EigenSolver<Eigen::MatrixXd> es(comp, false);
    for (int i = 0; i < deg; ++i) {
      const auto ev = es.eigenvalues()[i];
      if (std::abs(ev.imag()) <= 1e-7 * (1.0 + std::abs(ev.real())))
        raw.push_back(ev.real());
    }
  }

  const auto d = poly_deriv(c);
  const auto d2 = poly_deriv(d);
  for (double r : raw) {
    double x = r;
    for (int it = 0; it < 60; ++it) {
      const double f = poly_eval(c, x);
      const double fp = poly_eval(d, x);
      if (std::abs(fp) > 1e-8 * poly_scale_at(d, x)) {
        const double step = f / fp;
        x -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
      } else {
        // near a multiple root: polish on the derivative
        const double fpp = poly_eval(d2, x);
        if (std::abs(fpp) <= 1e-12 * poly_scale_at(d2, x)) break;
        const double step = fp / fpp;
        x -= step;
        if (std::abs(step) <= 1e-16 * (1.0 + std::abs(x))) break;
      }
    }
    if (std::abs(poly_eval(c, x)) <= 1e-7 * poly_scale_at(c, x)) out.roots.push_back(x);
  }
  std::sort(out.roots.begin(), out.roots.end());
  return out;
}

/// Roots of `c` inside (lo, hi), deduplicated at the given radius.
inline std::vector<double> real_roots_in(const std::vector<double>& c, double lo,
                                         double hi, double dedup = 1e-10) {
  std::vector<double> sel;
  for (double r : real_roots(c).roots) {
    if (r <= lo || r >= hi) continue;
    if (!sel.empty() && std::abs(r - sel.back()) <= dedup) continue;
    sel.push_back(r);
  }
  return sel;
}

/// Bisection for a sign change of f on [a,b]; requires f(a)*f(b) <= 0.
inline double bisect(const std::function<double(double)>& f, double a, double b,
                     double xtol) {
  double fa = f(a);
  double fb = f(b);
  if (fa == 0.0) return a;
  if (fb == 0.0) return b;
  for (int it = 0; it < 200 && (b - a) > xtol; ++it) {
    const double m = 0.5 * (a + b);
    const double fm = f(m);
    if (fm == 0.0) return m;
    if ((fa < 0.0) != (fm < 0.0)) {
      b = m;
      fb = fm;
    } else {
      a = m;
      fa = fm;
    }
  }
  return 0.5 * (a + b);
}

/// Real (m-1)-th roots of p, honoring parity: even exponent branches over
/// both signs (empty when p < 0), odd exponent has a unique real root.
inline std::vector<double> power_roots(double p, int exponent) {
  std::vector<double> r;
  if (exponent % 2 == 1) {
    r.push_back(p >= 0 ? std::pow(p, 1.0 / exponent) : -std::pow(-p, 1.0 / exponent));
  } else {
    if (p > 0.0) {
      const double v = std::pow(p, 1.0 / exponent);
      r.push_back(v);
      r.push_back(-v);
    } else if (p == 0.0) {
      r.push_back(0.0);
    }
  }
  return r;
}

}  // namespace tcq
