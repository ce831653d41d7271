#pragma once

#include "tcq/tensor.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <optional>
#include <stdexcept>

// Rank-one symmetric recognition, generator recovery, and the canonical
// +-x^m +- y^m normal forms for two-term decompositions.

namespace tcq {

/// Recovered generator of a rank-one symmetric tensor. For even order both
/// +-w generate the same tensor; the representative has its first nonzero
/// component positive and sign_ambiguous is set.
struct GeneratorResult {
  Vector w;
  bool sign_ambiguous = false;
};

/// Recover w with A = [w]^{(x)m}, or nullopt when A is not rank-one symmetric.
/// Pivot p maximizes |a_{p...p}|; w_p is the real m-th root of a_{p...p} and
/// the remaining components come from the slice a_{i p...p} = w_i w_p^{m-1}.
/// The reconstruction is verified entrywise before accepting.
inline std::optional<GeneratorResult> extract_generator(const DenseTensor& A) {
  const double scale = A.max_abs();
  if (scale == 0.0) return std::nullopt;  // generators must be nonzero
  if (!is_symmetric(A)) return std::nullopt;

  const Vector diag = diagonal(A);
  int pivot = 0;
  diag.cwiseAbs().maxCoeff(&pivot);
  const double dp = diag[pivot];
  if (std::abs(dp) <= tol::kAbs * (1.0 + scale)) return std::nullopt;
  const bool even = A.order % 2 == 0;
  if (even && dp < 0.0) return std::nullopt;  // w_p^m >= 0 for even m

  Vector w(A.dim);
  const double wp = dp >= 0 ? std::pow(dp, 1.0 / A.order)
                            : -std::pow(-dp, 1.0 / A.order);
  std::vector<int> idx(A.order, pivot);
  for (int i = 0; i < A.dim; ++i) {
    idx[0] = i;
    w[i] = A(idx) / std::pow(wp, A.order - 1);
  }

  const DenseTensor R = sym_rank_one(w, A.order);
  if ((R.entries - A.entries).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + scale))
    return std::nullopt;

  GeneratorResult res{w, even};
  if (even) {
    for (int i = 0; i < A.dim; ++i) {
      if (res.w[i] != 0.0) {
        if (res.w[i] < 0.0) res.w = -res.w;
        break;
      }
    }
  }
  return res;
}

/// All components strictly positive or all strictly negative.
inline bool is_unisigned(const Vector& w) {
  return (w.array() > 0.0).all() || (w.array() < 0.0).all();
}

struct GeneratorPropositionReport {
  bool a_positive = false;
  bool a_neg_positive = false;
  bool unisigned_generator = false;
  bool holds = false;  // both implications of the proposition on this instance
};

/// Instance check of the positive <-> unisigned-generator proposition for
/// A = [w]^{(x)m}.
inline GeneratorPropositionReport check_generator_proposition(const Vector& w, int m) {
  if (w.isZero(0.0)) throw std::invalid_argument("zero generator");
  const DenseTensor A = sym_rank_one(w, m);
  GeneratorPropositionReport r;
  r.a_positive = (A.entries.array() > 0.0).all();
  r.a_neg_positive = (A.entries.array() < 0.0).all();
  r.unisigned_generator = is_unisigned(w);
  const bool i = !r.a_positive || r.unisigned_generator;
  const bool ii = !r.unisigned_generator || (r.a_positive || r.a_neg_positive);
  r.holds = i && ii;
  return r;
}

/// true iff x and y span a 2-dimensional space (smallest singular value of
/// [x y] above kIndep times the largest).
inline bool check_linear_independence(const Vector& x, const Vector& y) {
  if (x.size() != y.size()) throw std::invalid_argument("length mismatch");
  Eigen::MatrixXd M(x.size(), 2);
  M.col(0) = x;
  M.col(1) = y;
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(M);
  const auto& s = svd.singularValues();
  return s[0] > 0.0 && s[1] > tol::kIndep * s[0];
}

enum class Sym2Form { PlusPlus, PlusMinus, MinusMinus };

inline const char* to_string(Sym2Form f) {
  switch (f) {
    case Sym2Form::PlusPlus: return "PLUS_PLUS";
    case Sym2Form::PlusMinus: return "PLUS_MINUS";
    case Sym2Form::MinusMinus: return "MINUS_MINUS";
  }
  return "?";
}

/// A = +-x^{(x)m} +- y^{(x)m} with the coefficients absorbed into x and y.
/// Odd order is always PlusPlus; MinusMinus and PlusMinus occur for even
/// order only.
struct CanonicalSym2 {
  Sym2Form form = Sym2Form::PlusPlus;
  int order = 0;
  Vector x, y;

  SymOuterDecomp decomp() const {
    const double s1 = form == Sym2Form::MinusMinus ? -1.0 : 1.0;
    const double s2 = form == Sym2Form::PlusPlus ? 1.0 : -1.0;
    return SymOuterDecomp(order, static_cast<int>(x.size()), {{s1, x}, {s2, y}});
  }
};

/// Absorb |mu|^{1/m} into each generator; for odd m the sign as well. Even-m
/// residual signs live in `form`, ordered so a positive term comes first.
inline CanonicalSym2 canonicalize_sym2(const SymOuterDecomp& D) {
  D.validate();
  if (D.terms.size() != 2)
    throw std::invalid_argument("canonicalize_sym2: exactly two terms required");
  if (!check_linear_independence(D.terms[0].w, D.terms[1].w))
    throw std::invalid_argument("canonicalize_sym2: dependent generators (Sym <= 1)");

  const int m = D.order;
  const bool odd = m % 2 == 1;
  Vector g[2];
  int sign[2];
  for (int j = 0; j < 2; ++j) {
    const double mu = D.terms[j].mu;
    const double mag = std::pow(std::abs(mu), 1.0 / m);
    if (odd) {
      g[j] = (mu < 0 ? -mag : mag) * D.terms[j].w;
      sign[j] = +1;
    } else {
      g[j] = mag * D.terms[j].w;
      sign[j] = mu < 0 ? -1 : +1;
    }
  }
  int a = 0, b = 1;
  if (sign[0] < 0 && sign[1] > 0) std::swap(a, b);  // positive term first

  CanonicalSym2 c;
  c.order = m;
  c.x = g[a];
  c.y = g[b];
  if (sign[a] > 0 && sign[b] > 0)
    c.form = Sym2Form::PlusPlus;
  else if (sign[a] > 0)
    c.form = Sym2Form::PlusMinus;
  else
    c.form = Sym2Form::MinusMinus;
  return c;
}

// ---------------------------------------------------------------------------
// Structural not-R0 forms for canonical two-term decompositions (n = 2)

enum class NotR0Case { OddI, OddII, EvenI, EvenII };

inline const char* to_string(NotR0Case c) {
  switch (c) {
    case NotR0Case::OddI: return "ODD_I";
    case NotR0Case::OddII: return "ODD_II";
    case NotR0Case::EvenI: return "EVEN_I";
    case NotR0Case::EvenII: return "EVEN_II";
  }
  return "?";
}

struct NotR0Form {
  NotR0Case form_case;
  Eigen::Matrix2d generators;  // columns x, y
  int alpha = 0;               // +-1, even cases only
};

/// Pattern-match the generator matrix [x y] against the structural cases
/// under which a nonzero homogeneous solution exists:
///   odd m  (PlusPlus):  y1 = -x1, x1 != 0, x2+y2 > 0   (or the 2<->1 mirror)
///   even m (PlusMinus): y1 = a*x1, x1(x2 - a*y2) > 0, a = +-1 (or mirror)
/// Returns nullopt when no case matches.
inline std::optional<NotR0Form> detect_not_r0_form(const CanonicalSym2& C) {
  if (C.x.size() != 2) throw std::invalid_argument("detect_not_r0_form: n must be 2");
  const double eq_tol =
      1e-9 * (1.0 + std::max(C.x.cwiseAbs().maxCoeff(), C.y.cwiseAbs().maxCoeff()));
  const double x1 = C.x[0], x2 = C.x[1], y1 = C.y[0], y2 = C.y[1];
  Eigen::Matrix2d G;
  G << x1, y1, x2, y2;

  if (C.order % 2 == 1) {
    if (C.form != Sym2Form::PlusPlus)
      throw std::invalid_argument("odd order must be in PLUS_PLUS form");
    if (std::abs(y1 + x1) <= eq_tol && std::abs(x1) > eq_tol && x2 + y2 > eq_tol)
      return NotR0Form{NotR0Case::OddI, G, 0};
    if (std::abs(y2 + x2) <= eq_tol && std::abs(x2) > eq_tol && x1 + y1 > eq_tol)
      return NotR0Form{NotR0Case::OddII, G, 0};
    return std::nullopt;
  }

  if (C.form != Sym2Form::PlusMinus)
    throw std::invalid_argument("even-order form detection applies to PLUS_MINUS");
  for (int alpha : {+1, -1}) {
    if (std::abs(y1 - alpha * x1) <= eq_tol && x1 * (x2 - alpha * y2) > eq_tol)
      return NotR0Form{NotR0Case::EvenI, G, alpha};
    if (std::abs(y2 - alpha * x2) <= eq_tol && x2 * (x1 - alpha * y1) > eq_tol)
      return NotR0Form{NotR0Case::EvenII, G, alpha};
  }
  return std::nullopt;
}

}  // namespace tcq
