#pragma once

#include "tcq/decomp.hpp"
#include "tcq/roots.hpp"
#include "tcq/tensor.hpp"

#include <cmath>
#include <optional>
#include <stdexcept>
#include <variant>
#include <vector>

// TCP(A,q) solvers for n <= 2: complementary-support enumeration with
// polynomial root isolation for dense tensors, a closed-form solver for
// decomposed tensors with independent generators, and the homogeneous
// (q = 0) ray search on the simplex.

namespace tcq {

using TensorDoc = std::variant<DenseTensor, SymOuterDecomp>;

struct TcpSolution {
  Vector u;
  Vector w;  // A u^{m-1} + q
  std::vector<int> support;
  double residual = 0.0;
};

struct SolveOutcome {
  std::vector<TcpSolution> solutions;
  // true when the method provably enumerated all supports/roots; an empty
  // list with exhaustive=true certifies SOL(A,q) is empty.
  bool exhaustive = false;
};

// ---------------------------------------------------------------------------
// Verification

inline double tcp_residual(const Vector& u, const Vector& w) {
  double r = 0.0;
  for (int i = 0; i < u.size(); ++i) {
    r = std::max(r, std::max(-u[i], 0.0));
    r = std::max(r, std::max(-w[i], 0.0));
  }
  return std::max(r, std::abs(u.dot(w)));
}

inline std::vector<int> support_of(const Vector& u) {
  std::vector<int> s;
  const double thr = 1e-9 * (1.0 + u.cwiseAbs().maxCoeff());
  for (int i = 0; i < u.size(); ++i)
    if (u[i] > thr) s.push_back(i);
  return s;
}

namespace detail {
template <class Tensor>
double problem_scale(const Tensor& A, const Vector& q, const Vector& u) {
  double ma;
  int m;
  if constexpr (std::is_same_v<Tensor, DenseTensor>) {
    ma = A.max_abs();
    m = A.order;
  } else {
    ma = 0.0;
    for (const auto& t : A.terms)
      ma = std::max(ma, std::abs(t.mu) * std::pow(t.w.cwiseAbs().maxCoeff(), A.order));
    m = A.order;
  }
  const double un = u.size() ? u.cwiseAbs().maxCoeff() : 0.0;
  const double qn = q.size() ? q.cwiseAbs().maxCoeff() : 0.0;
  return 1.0 + qn + ma * std::pow(1.0 + un, m - 1);
}
}  // namespace detail

/// Accept u as a solution of TCP(A,q) iff the complementarity residual is at
/// most tol times the problem scale.
template <class Tensor>
std::optional<TcpSolution> verify_solution(const Tensor& A, const Vector& q,
                                           const Vector& u,
                                           double tolerance = tol::kAccept) {
  if (q.size() != A.dim || u.size() != A.dim)
    throw std::invalid_argument("verify_solution: dimension mismatch");
  TcpSolution s;
  s.u = u;
  s.w = eval_poly_map(A, u) + q;
  s.residual = tcp_residual(s.u, s.w);
  if (s.residual > tolerance * detail::problem_scale(A, q, u)) return std::nullopt;
  s.support = support_of(s.u);
  return s;
}

inline std::optional<TcpSolution> verify_solution(const TensorDoc& T, const Vector& q,
                                                  const Vector& u,
                                                  double tolerance = tol::kAccept) {
  return std::visit([&](const auto& A) { return verify_solution(A, q, u, tolerance); },
                    T);
}

// ---------------------------------------------------------------------------
// Homogeneous bivariate form of the map for n = 2

/// (A u^{m-1})_i = sum_j coeff[i][j] u1^j u2^{d-j}, d = m-1.
struct HomogeneousMap2 {
  int deg = 0;
  std::vector<double> coeff[2];

  explicit HomogeneousMap2(const DenseTensor& A) {
    if (A.dim != 2) throw std::invalid_argument("HomogeneousMap2: dim must be 2");
    deg = A.order - 1;
    coeff[0].assign(deg + 1, 0.0);
    coeff[1].assign(deg + 1, 0.0);
    const std::int64_t block = DenseTensor::num_entries(A.order, 2) / 2;
    for (int i = 0; i < 2; ++i) {
      std::int64_t t = 0;
      for_each_index(deg, 2, [&](const std::vector<int>& idx) {
        int ones = 0;  // index value 0 selects u1
        for (int p = 0; p < deg; ++p) ones += (idx[p] == 0);
        coeff[i][ones] += A.entries[i * block + t];
        ++t;
      });
    }
  }

  double eval(int i, double u1, double u2) const {
    double acc = 0.0, p1 = 1.0;
    std::vector<double> p2(deg + 1);
    p2[0] = 1.0;
    for (int j = 1; j <= deg; ++j) p2[j] = p2[j - 1] * u2;
    for (int j = 0; j <= deg; ++j) {
      acc += coeff[i][j] * p1 * p2[deg - j];
      p1 *= u1;
    }
    return acc;
  }

  Eigen::Vector2d eval(const Eigen::Vector2d& u) const {
    return {eval(0, u[0], u[1]), eval(1, u[0], u[1])};
  }

  Eigen::Matrix2d jacobian(const Eigen::Vector2d& u) const {
    Eigen::Matrix2d J = Eigen::Matrix2d::Zero();
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j <= deg; ++j) {
        const double c = coeff[i][j];
        if (c == 0.0) continue;
        if (j >= 1) J(i, 0) += c * j * std::pow(u[0], j - 1) * std::pow(u[1], deg - j);
        if (deg - j >= 1)
          J(i, 1) += c * (deg - j) * std::pow(u[0], j) * std::pow(u[1], deg - j - 1);
      }
    return J;
  }

  /// Component i restricted to u1 fixed, as a polynomial in u2 (ascending).
  std::vector<double> slice_poly(int i, double u1, double q_i) const {
    std::vector<double> c(deg + 1, 0.0);
    double p1 = 1.0;
    for (int j = 0; j <= deg; ++j) {
      c[deg - j] = coeff[i][j] * p1;
      p1 *= u1;
    }
    c[0] += q_i;
    return c;
  }

  /// Component i along the simplex u = (theta, 1-theta), as a polynomial in
  /// theta (ascending coefficients).
  std::vector<double> theta_poly(int i) const {
    std::vector<double> out(deg + 1, 0.0);
    // binomial expansion of (1-theta)^{deg-j}
    for (int j = 0; j <= deg; ++j) {
      const double c = coeff[i][j];
      if (c == 0.0) continue;
      double binom = 1.0;
      for (int t = 0; t <= deg - j; ++t) {
        out[j + t] += c * binom * ((t % 2) ? -1.0 : 1.0);
        binom = binom * (deg - j - t) / (t + 1);
      }
    }
    return out;
  }

  double max_coeff_abs() const {
    double s = 0.0;
    for (int i = 0; i < 2; ++i)
      for (double v : coeff[i]) s = std::max(s, std::abs(v));
    return s;
  }
};

// ---------------------------------------------------------------------------
// Shared support helpers

namespace detail {

/// Positive t solving a*t^d + qi = 0 subject to the off-support slack
/// c*t^d + qj >= 0, or nullopt. The degenerate leading coefficient a = 0 is
/// handled explicitly: it requires qi = 0 and turns the slack condition into
/// a feasibility interval for t.
inline std::optional<double> singleton_support_root(double a, double c, double qi,
                                                    double qj, int d,
                                                    double zero_tol) {
  if (std::abs(a) > zero_tol) {
    const double v = -qi / a;  // t^d = v, t > 0
    if (v <= 0.0) return std::nullopt;
    const double t = std::pow(v, 1.0 / d);
    if (c * v + qj >= -zero_tol) return t;
    return std::nullopt;
  }
  // a == 0: no root unless qi == 0 (in particular qi < 0 has no solution)
  if (std::abs(qi) > zero_tol) return std::nullopt;
  if (c > zero_tol) {
    if (qj >= 0.0) return 1.0;
    return std::pow(-qj / c, 1.0 / d);  // slack exactly zero
  }
  if (std::abs(c) <= zero_tol) return qj >= -zero_tol ? std::optional<double>(1.0)
                                                      : std::nullopt;
  // c < 0: slack decreasing in t; feasible only up to (qj/-c)^{1/d}
  if (qj <= zero_tol) return std::nullopt;
  return 0.5 * std::pow(qj / -c, 1.0 / d);
}

inline void push_dedup(std::vector<TcpSolution>& out, TcpSolution s,
                       double radius = tol::kDedup) {
  for (const auto& have : out)
    if ((have.u - s.u).cwiseAbs().maxCoeff() <= radius) return;
  out.push_back(std::move(s));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Dense solvers, n <= 2

struct SolveOptions {
  int slices = 10000;          // full-support scan resolution (normalized 1e-4)
  double bisect_tol = 1e-12;
  int newton_iters = 50;
  double damping = 0.5;
  double accept = tol::kAccept;
};

/// Scalar case: supports {} and {1} enumerate completely.
inline SolveOutcome solve_tcp_n1(const DenseTensor& A, const Vector& q,
                                 const SolveOptions& opts = {}) {
  if (A.dim != 1 || q.size() != 1)
    throw std::invalid_argument("solve_tcp_n1: dim must be 1");
  SolveOutcome out;
  out.exhaustive = true;
  const double zero_tol = 1e-12 * (1.0 + A.max_abs() + std::abs(q[0]));
  if (q[0] >= -zero_tol)
    if (auto s = verify_solution(A, q, Vector::Zero(1), opts.accept))
      detail::push_dedup(out.solutions, *s);
  const double a = A.entries[0];
  if (auto t = detail::singleton_support_root(a, 0.0, q[0], 0.0, A.order - 1, zero_tol)) {
    Vector u(1);
    u << *t;
    if (auto s = verify_solution(A, q, u, opts.accept))
      detail::push_dedup(out.solutions, *s);
  }
  return out;
}

namespace detail {

/// Damped Newton for F(u) = A u^{m-1} + q = 0 on the open positive quadrant.
inline bool newton_polish2(const HomogeneousMap2& H, const Eigen::Vector2d& q,
                           Eigen::Vector2d& u, const SolveOptions& opts,
                           double fscale) {
  Eigen::Vector2d x = u;
  double fn = (H.eval(x) + q).cwiseAbs().maxCoeff();
  for (int it = 0; it < opts.newton_iters; ++it) {
    if (fn <= 1e-13 * fscale) break;
    const Eigen::Matrix2d J = H.jacobian(x);
    const Eigen::Vector2d F = H.eval(x) + q;
    const double det = J.determinant();
    if (std::abs(det) <= 1e-300) return false;
    Eigen::Vector2d step = J.inverse() * F;
    double lambda = 1.0;
    bool improved = false;
    for (int h = 0; h < 30; ++h) {
      const Eigen::Vector2d xn = x - lambda * step;
      const double f2 = (H.eval(xn) + q).cwiseAbs().maxCoeff();
      if (f2 < fn) {
        x = xn;
        fn = f2;
        improved = true;
        break;
      }
      lambda *= opts.damping;
    }
    if (!improved) break;
  }
  u = x;
  return fn <= 1e-10 * fscale;
}

}  // namespace detail

/// Complementary-support enumeration for dense n = 2 tensors. The empty and
/// singleton supports are closed-form; the full support is searched by
/// scanning u1 slices, isolating u2 roots of the first component per slice,
/// and chasing sign changes of the second component along the root branches
/// (bisection in u1 plus damped Newton polish). Solutions outside the search
/// box [0, 1+max|q|]^2 are not claimed impossible: exhaustive stays false.
inline SolveOutcome solve_tcp_n2(const DenseTensor& A, const Vector& q,
                                 const SolveOptions& opts = {}) {
  if (A.dim != 2) throw std::invalid_argument("solve_tcp_n2: dim must be 2");
  if (q.size() != 2) throw std::invalid_argument("solve_tcp_n2: q length mismatch");
  SolveOutcome out;
  out.exhaustive = false;

  const HomogeneousMap2 H(A);
  const int d = H.deg;
  const double qn = q.cwiseAbs().maxCoeff();
  const double zero_tol = 1e-12 * (1.0 + A.max_abs() + qn);

  auto try_add = [&](const Vector& u) {
    if (auto s = verify_solution(A, q, u, opts.accept))
      detail::push_dedup(out.solutions, std::move(*s));
  };

  // support {}
  if (q[0] >= -zero_tol && q[1] >= -zero_tol) try_add(Vector::Zero(2));

  const double B = 1.0 + qn;

  // supports {1} and {2}: a t^d + q_i = 0 with off-support slack check. The
  // degenerate case a = 0, q_i = 0 admits a whole feasible axis segment;
  // sample it densely so downstream set comparisons see the continuum.
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    const double a = H.coeff[i][i == 0 ? d : 0];
    const double c = H.coeff[j][i == 0 ? d : 0];
    auto axis_point = [&](double t) {
      Vector u = Vector::Zero(2);
      u[i] = t;
      try_add(u);
    };
    if (std::abs(a) <= zero_tol && std::abs(q[i]) <= zero_tol) {
      // feasible range of c t^d + q_j >= 0 on (0, B]
      double lo = 0.0, hi = B;
      if (c > zero_tol) {
        lo = q[j] < 0.0 ? std::pow(-q[j] / c, 1.0 / d) : 0.0;
      } else if (c < -zero_tol) {
        if (q[j] <= zero_tol) continue;
        hi = std::min(B, std::pow(q[j] / -c, 1.0 / d));
      } else if (q[j] < -zero_tol) {
        continue;
      }
      if (hi <= lo) continue;
      const double spacing = 1e-3;
      if (lo > 0.0) axis_point(lo);
      for (double t = std::max(lo, spacing); t < hi; t += spacing) axis_point(t);
      axis_point(hi);
    } else if (auto t = detail::singleton_support_root(a, c, q[i], q[j], d, zero_tol)) {
      axis_point(*t);
    }
  }

  // support {1,2}: scan u1, root-solve component 1 per slice, watch component 2
  const double step = B / opts.slices;
  const double fscale = H.max_coeff_abs() * std::pow(B, d) + qn + 1.0;
  const double near_tol = 1e-4 * fscale;
  const Eigen::Vector2d q2(q[0], q[1]);

  auto polish_and_add = [&](double u1, double u2) {
    Eigen::Vector2d u(u1, u2);
    detail::newton_polish2(H, q2, u, opts, fscale);
    if (u[0] > zero_tol && u[1] > zero_tol) {
      Vector v(2);
      v << u[0], u[1];
      try_add(v);
    }
  };

  // Scan twice with the component roles exchanged: root-solve component rc on
  // each slice and track the sign of component wc along the root branches.
  // The second pass covers tensors whose first component is (near) constant in
  // u2, where the first pass sees no slice roots at all.
  auto scan = [&](int rc, int wc) {
    auto slice_roots = [&](double u1) {
      return real_roots_in(H.slice_poly(rc, u1, q[rc]), zero_tol, B + step);
    };
    struct Branch {
      double u2;
      double f2;
    };
    std::vector<Branch> prev;
    double prev_u1 = 0.0;
    for (int s = 1; s <= opts.slices; ++s) {
      const double u1 = s * step;
      std::vector<Branch> cur;
      for (double r : slice_roots(u1)) {
        const double f2 = H.eval(wc, u1, r) + q[wc];
        cur.push_back({r, f2});
        if (std::abs(f2) <= near_tol) polish_and_add(u1, r);
      }
      // sign changes along matched branches
      const double window = std::max(0.05 * B, 20.0 * step);
      for (const auto& b : cur) {
        const Branch* match = nullptr;
        double best = window;
        for (const auto& p : prev) {
          const double dist = std::abs(p.u2 - b.u2);
          if (dist < best) {
            best = dist;
            match = &p;
          }
        }
        if (match && (match->f2 < 0.0) != (b.f2 < 0.0)) {
          // bisect in u1 following the branch
          double lo = prev_u1, hi = u1;
          double rlo = match->u2, rhi = b.u2;
          double flo = match->f2;
          for (int it = 0; it < 80 && hi - lo > opts.bisect_tol; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double expect = 0.5 * (rlo + rhi);
            const auto roots = slice_roots(mid);
            if (roots.empty()) break;
            double rm = roots.front();
            for (double r : roots)
              if (std::abs(r - expect) < std::abs(rm - expect)) rm = r;
            const double fm = H.eval(wc, mid, rm) + q[wc];
            if ((flo < 0.0) != (fm < 0.0)) {
              hi = mid;
              rhi = rm;
            } else {
              lo = mid;
              rlo = rm;
              flo = fm;
            }
          }
          polish_and_add(0.5 * (lo + hi), 0.5 * (rlo + rhi));
        }
      }
      prev = std::move(cur);
      prev_u1 = u1;
    }
  };
  scan(0, 1);
  scan(1, 0);
  return out;
}

/// Nonzero solution rays of TCP(A,0) for dense n = 2 tensors, reported as
/// simplex representatives u = (theta, 1-theta). Boundary rays come from the
/// diagonal/slack sign conditions; interior rays need both components of the
/// map to vanish, so they are roots of component 1 on (0,1) at which
/// component 2 also vanishes. Exhaustive by construction.
inline SolveOutcome solve_tcp_zero_n2(const DenseTensor& A,
                                      const SolveOptions& opts = {}) {
  if (A.dim != 2) throw std::invalid_argument("solve_tcp_zero_n2: dim must be 2");
  SolveOutcome out;
  out.exhaustive = true;
  const HomogeneousMap2 H(A);
  const int d = H.deg;
  const double fscale = H.max_coeff_abs() + 1.0;
  const double ray_tol = opts.accept * fscale;
  const Vector q0 = Vector::Zero(2);

  auto try_ray = [&](double theta) {
    Vector u(2);
    u << theta, 1.0 - theta;
    if (auto s = verify_solution(A, q0, u, opts.accept))
      detail::push_dedup(out.solutions, std::move(*s));
  };

  // theta = 1 (u = e1): needs a_{11...1} = 0 and a_{21...1} >= 0
  if (std::abs(H.coeff[0][d]) <= ray_tol && H.coeff[1][d] >= -ray_tol) try_ray(1.0);
  // theta = 0 (u = e2): needs a_{22...2} = 0 and a_{12...2} >= 0
  if (std::abs(H.coeff[1][0]) <= ray_tol && H.coeff[0][0] >= -ray_tol) try_ray(0.0);

  const auto p1 = H.theta_poly(0);
  const auto p2 = H.theta_poly(1);
  const auto r1 = real_roots(p1);
  if (r1.identically_zero) {
    const auto r2 = real_roots(p2);
    if (r2.identically_zero) {
      try_ray(0.5);  // the map vanishes identically on the simplex
    } else {
      for (double th : r2.roots)
        if (th > 0.0 && th < 1.0) try_ray(th);
    }
  } else {
    for (double th : r1.roots) {
      if (th <= 0.0 || th >= 1.0) continue;
      if (std::abs(poly_eval(p2, th)) <= ray_tol) try_ray(th);
    }
  }
  return out;
}

/// Decomposed zero-problem for n = 2. For one term, or two linearly
/// independent terms, the ray conditions reduce to exact scalar sign tests:
/// writing the slack as mu1 x_i (x.u)^{m-1} + mu2 y_i (y.u)^{m-1}, a
/// full-support ray forces both power terms to vanish, which independence
/// rules out; singleton rays need the corresponding diagonal combination to
/// vanish with a nonnegative off-support combination. Dependent pairs are
/// collapsed to a single term first.
inline SolveOutcome solve_tcp_zero_n2(const SymOuterDecomp& D,
                                      const SolveOptions& opts = {}) {
  if (D.dim != 2)
    throw std::invalid_argument("solve_tcp_zero_n2: dim must be 2");
  if (D.terms.size() > 2 ||
      (D.terms.size() == 2 &&
       !check_linear_independence(D.terms[0].w, D.terms[1].w))) {
    // collapse a dependent pair y = lambda x into (mu1 + mu2 lambda^m) [x]^m
    if (D.terms.size() == 2) {
      const Vector& x = D.terms[0].w;
      const Vector& y = D.terms[1].w;
      const int p = std::abs(x[0]) >= std::abs(x[1]) ? 0 : 1;
      const double lambda = y[p] / x[p];
      const double beta =
          D.terms[0].mu + D.terms[1].mu * std::pow(lambda, D.order);
      if (beta != 0.0)
        return solve_tcp_zero_n2(SymOuterDecomp(D.order, 2, {{beta, x}}), opts);
      return solve_tcp_zero_n2(DenseTensor(D.order, 2), opts);  // zero tensor
    }
    return solve_tcp_zero_n2(materialize(D), opts);
  }

  SolveOutcome out;
  out.exhaustive = true;
  const Vector zq = Vector::Zero(2);
  auto try_ray = [&](double theta) {
    Vector u(2);
    u << theta, 1.0 - theta;
    if (auto s = verify_solution(D, zq, u, opts.accept))
      detail::push_dedup(out.solutions, std::move(*s));
  };

  // zero solution is always present
  if (auto s = verify_solution(D, zq, Vector::Zero(2), opts.accept))
    detail::push_dedup(out.solutions, std::move(*s));

  // Zero tests are relative to the magnitudes of the summands being
  // cancelled, so a structurally planted cancellation (exactly zero in
  // floating point) is kept apart from a merely tiny diagonal.
  auto diag_comb = [&](int i, double& mag) {  // slack factor of u = e_i, comp i
    double v = 0.0;
    mag = 0.0;
    for (const auto& t : D.terms) {
      const double term = t.mu * std::pow(t.w[i], D.order);
      v += term;
      mag += std::abs(term);
    }
    return v;
  };
  auto off_comb = [&](int i, int j, double& mag) {  // u = e_i, component j
    double v = 0.0;
    mag = 0.0;
    for (const auto& t : D.terms) {
      const double term = t.mu * t.w[j] * std::pow(t.w[i], D.order - 1);
      v += term;
      mag += std::abs(term);
    }
    return v;
  };
  // singleton rays u = e_i
  for (int i = 0; i < 2; ++i) {
    double dm = 0.0, om = 0.0;
    const double diag = diag_comb(i, dm);
    const double off = off_comb(i, 1 - i, om);
    if (std::abs(diag) <= 1e-12 * dm && off >= -1e-12 * om)
      try_ray(i == 0 ? 1.0 : 0.0);
  }

  if (D.terms.size() == 1) {
    // full-support ray exists iff w.u = 0 has a positive solution, i.e. the
    // generator has strictly mixed signs; every slack is then exactly zero.
    const Vector& w = D.terms[0].w;
    if (w[0] * w[1] < 0.0) try_ray(std::abs(w[1]) / (std::abs(w[0]) + std::abs(w[1])));
  }
  // two independent terms admit no full-support ray: both power terms would
  // have to vanish, forcing u orthogonal to two independent vectors.
  return out;
}

// ---------------------------------------------------------------------------
// Exact solvers for decomposed tensors

/// Exact support enumeration for A = mu [w]^{(x)m}. Every slack component is
/// mu w_i s + q_i with the single scalar s = (w.u)^{m-1}, so each support
/// pins s (or leaves it free where w vanishes), and feasibility of
/// w.u = s^{1/(m-1)} over positive vectors on the support is a sign
/// condition. Works for any n; exhaustive.
inline SolveOutcome solve_tcp_rank_one(double mu, const Vector& w, int m,
                                       const Vector& q,
                                       const SolveOptions& opts = {}) {
  const int n = static_cast<int>(w.size());
  if (q.size() != n) throw std::invalid_argument("solve_tcp_rank_one: q mismatch");
  if (n > 20) throw std::invalid_argument("solve_tcp_rank_one: dimension too large");
  const int d = m - 1;
  SolveOutcome out;
  out.exhaustive = true;
  const double zero_tol =
      1e-10 * (1.0 + std::abs(mu) * std::pow(w.cwiseAbs().maxCoeff(), m) +
               q.cwiseAbs().maxCoeff());
  const SymOuterDecomp D(m, n, {{mu, w}});

  auto try_add = [&](const Vector& u) {
    if (auto s = verify_solution(D, q, u, opts.accept))
      detail::push_dedup(out.solutions, std::move(*s));
  };

  for (unsigned mask = 0; mask < (1u << n); ++mask) {
    std::vector<int> S;
    for (int i = 0; i < n; ++i)
      if (mask & (1u << i)) S.push_back(i);
    if (S.empty()) {
      if ((q.array() >= -zero_tol).all()) try_add(Vector::Zero(n));
      continue;
    }
    // common s from the active equations mu w_i s + q_i = 0
    bool feasible = true;
    bool s_pinned = false;
    double s_star = 0.0;
    for (int i : S) {
      if (std::abs(w[i]) > zero_tol) {
        const double si = -q[i] / (mu * w[i]);
        if (!s_pinned) {
          s_star = si;
          s_pinned = true;
        } else if (std::abs(si - s_star) >
                   1e-9 * (1.0 + std::abs(si) + std::abs(s_star))) {
          feasible = false;
          break;
        }
      } else if (std::abs(q[i]) > zero_tol) {
        feasible = false;
        break;
      }
    }
    if (!feasible) continue;
    if (!s_pinned) s_star = 0.0;  // w vanishes on S, so (w.u)^{d} = 0

    for (double r : power_roots(std::abs(s_star) <= zero_tol ? 0.0 : s_star, d)) {
      // build u > 0 on S with w.u = r
      Vector u = Vector::Zero(n);
      double base_sum = 0.0, abs_sum = 0.0;
      bool has_pos = false, has_neg = false;
      for (int i : S) {
        abs_sum += std::abs(w[i]);
        has_pos |= w[i] > zero_tol;
        has_neg |= w[i] < -zero_tol;
      }
      if (r == 0.0) {
        if (has_pos && has_neg) {
          double pos = 0.0, neg = 0.0;
          for (int i : S) {
            if (w[i] > zero_tol) pos += w[i];
            if (w[i] < -zero_tol) neg += w[i];
          }
          for (int i : S) u[i] = w[i] > zero_tol ? (-neg / pos) : 1.0;
        } else if (!has_pos && !has_neg) {
          for (int i : S) u[i] = 1.0;
        } else {
          continue;  // single-signed w on S cannot reach 0 with u > 0
        }
      } else {
        if ((r > 0.0 && !has_pos) || (r < 0.0 && !has_neg)) continue;
        const double delta = std::abs(r) / (2.0 * (1.0 + abs_sum));
        for (int i : S) {
          u[i] = delta;
          base_sum += delta * w[i];
        }
        // carrier chosen by value, not position, so representatives commute
        // with coordinate permutations
        int carrier = -1;
        for (int i : S)
          if ((r > 0.0 && w[i] > zero_tol) || (r < 0.0 && w[i] < -zero_tol))
            if (carrier < 0 || std::abs(w[i]) > std::abs(w[carrier])) carrier = i;
        u[carrier] += (r - base_sum) / w[carrier];
        if (u[carrier] <= 0.0) continue;
      }
      // off-support slack
      bool ok = true;
      for (int j = 0; j < n; ++j) {
        if (mask & (1u << j)) continue;
        if (mu * w[j] * s_star + q[j] < -zero_tol) {
          ok = false;
          break;
        }
      }
      if (ok) try_add(u);
    }
  }
  return out;
}

/// Exact solver for decomposed n = 2 tensors with k <= 2 independent
/// generators. The full support reduces to M p = -q with
/// M = [mu_1 w_1  mu_2 w_2] and p_j = ((w_j).u)^{m-1}; each p_j is inverted
/// through the real (m-1)-th root branches and the resulting linear system in
/// u solved directly. Exhaustive.
inline SolveOutcome solve_tcp_decomp_exact(const SymOuterDecomp& D, const Vector& q,
                                           const SolveOptions& opts = {}) {
  D.validate();
  const int k = static_cast<int>(D.terms.size());
  const int n = D.dim;
  if (q.size() != n) throw std::invalid_argument("decomp_exact: q length mismatch");
  if (k > n) throw std::invalid_argument("decomp_exact: more terms than dimension");
  if (k == 1)
    return solve_tcp_rank_one(D.terms[0].mu, D.terms[0].w, D.order, q, opts);
  if (k != 2 || n != 2)
    throw std::invalid_argument("decomp_exact: full support needs n = k = 2");
  if (!check_linear_independence(D.terms[0].w, D.terms[1].w))
    throw std::invalid_argument("decomp_exact: dependent generators");

  const int m = D.order;
  const int d = m - 1;
  SolveOutcome out;
  out.exhaustive = true;
  double wmax = 0.0;
  for (const auto& t : D.terms)
    wmax = std::max(wmax, std::abs(t.mu) * std::pow(t.w.cwiseAbs().maxCoeff(), m));
  const double zero_tol = 1e-12 * (1.0 + wmax + q.cwiseAbs().maxCoeff());

  auto try_add = [&](const Vector& u) {
    if (auto s = verify_solution(D, q, u, opts.accept))
      detail::push_dedup(out.solutions, std::move(*s));
  };

  // support {}
  if ((q.array() >= -zero_tol).all()) try_add(Vector::Zero(2));

  // singleton supports from the decomposed diagonal and slack coefficients
  const Vector diag = diagonal(D);
  for (int i = 0; i < 2; ++i) {
    const int j = 1 - i;
    double c = 0.0;  // slack_j(t e_i) = c t^d + q_j
    for (const auto& t : D.terms) c += t.mu * t.w[j] * std::pow(t.w[i], d);
    if (auto t = detail::singleton_support_root(diag[i], c, q[i], q[j], d, zero_tol)) {
      Vector u = Vector::Zero(2);
      u[i] = *t;
      try_add(u);
    }
  }

  // full support: M p = -q, p_j = ((w_j).u)^{d}
  Eigen::Matrix2d M, Wt;
  for (int j = 0; j < 2; ++j) {
    M.col(j) = D.terms[j].mu * D.terms[j].w;
    Wt.row(j) = D.terms[j].w.transpose();
  }
  const Eigen::Vector2d p = M.inverse() * (-q);
  const auto clip = [&](double v) { return std::abs(v) <= zero_tol ? 0.0 : v; };
  for (double r0 : power_roots(clip(p[0]), d)) {
    for (double r1 : power_roots(clip(p[1]), d)) {
      const Eigen::Vector2d u = Wt.inverse() * Eigen::Vector2d(r0, r1);
      if (u[0] > zero_tol && u[1] > zero_tol) {
        Vector v(2);
        v << u[0], u[1];
        try_add(v);
      }
    }
  }
  return out;
}

/// Solve a dense or decomposed n = 2 instance; decomposed inputs with two
/// independent generators take the exact path.
inline SolveOutcome solve_tcp_n2(const TensorDoc& T, const Vector& q,
                                 const SolveOptions& opts = {}) {
  if (const auto* D = std::get_if<SymOuterDecomp>(&T)) {
    if (D->terms.size() <= 2 && D->dim == 2) {
      if (D->terms.size() == 1 ||
          check_linear_independence(D->terms[0].w, D->terms[1].w))
        return solve_tcp_decomp_exact(*D, q, opts);
    }
    return solve_tcp_n2(materialize(*D), q, opts);
  }
  return solve_tcp_n2(std::get<DenseTensor>(T), q, opts);
}

// ---------------------------------------------------------------------------
// No-solution witnesses for structurally not-R0 canonical forms

/// The explicit q for which TCP(A,q) has no solution, for canonical two-term
/// forms with refutable structure. Odd order: the not-R0 forms give
/// (-|x1|, |x2|+|y2|) up to the index swap. Even order (PLUS_MINUS): the
/// gate is the zero-diagonal pattern y1 = a*x1 (a = +-1) together with
/// |x2| < |y2|, giving (|x1|, -1), again up to the swap; the complementary
/// |x2| >= |y2| branch is refuted by the nonnegative-zero-diagonal rule
/// instead, so this returns nullopt there. Callers certify the returned q
/// with the exhaustive decomposed solver before relying on it.
inline std::optional<Vector> find_q_without_solution(const CanonicalSym2& C) {
  if (C.x.size() != 2)
    throw std::invalid_argument("find_q_without_solution: n must be 2");
  const double x1 = C.x[0], x2 = C.x[1], y1 = C.y[0], y2 = C.y[1];
  const double eq_tol =
      1e-9 * (1.0 + std::max(C.x.cwiseAbs().maxCoeff(), C.y.cwiseAbs().maxCoeff()));
  Vector q(2);

  if (C.order % 2 == 1) {
    const auto form = detect_not_r0_form(C);
    if (!form) return std::nullopt;
    switch (form->form_case) {
      case NotR0Case::OddI:
        q << -std::abs(x1), std::abs(x2) + std::abs(y2);
        return q;
      case NotR0Case::OddII:
        q << std::abs(x1) + std::abs(y1), -std::abs(x2);
        return q;
      default:
        return std::nullopt;
    }
  }

  if (C.form != Sym2Form::PlusMinus)
    throw std::invalid_argument("find_q_without_solution: even order needs PLUS_MINUS");
  const bool diag1_zero = std::abs(x1) > eq_tol &&
                          (std::abs(y1 - x1) <= eq_tol || std::abs(y1 + x1) <= eq_tol);
  if (diag1_zero && std::abs(x2) < std::abs(y2)) {
    q << std::abs(x1), -1.0;
    return q;
  }
  const bool diag2_zero = std::abs(x2) > eq_tol &&
                          (std::abs(y2 - x2) <= eq_tol || std::abs(y2 + x2) <= eq_tol);
  if (diag2_zero && std::abs(x1) < std::abs(y1)) {
    q << -1.0, std::abs(x2);
    return q;
  }
  return std::nullopt;
}

}  // namespace tcq
