#pragma once

#include "tcq/decomp.hpp"
#include "tcq/tcp.hpp"
#include "tcq/tensor.hpp"

#include <json.hpp>

#include <map>
#include <optional>
#include <string>
#include <vector>

// Tensor-class verdicts with machine-checkable witnesses: positive and
// nonnegative entry scans, the duplicated-slice Q-criterion, the
// nonnegativity/zero-diagonal Q rules, S- and R0-decisions for n = 2, the
// rank-one four-way equivalence report, and the Sym=2 Q/R0 pipeline.

namespace tcq {

using json = nlohmann::json;

enum class Truth { Yes, No, Unknown };

inline const char* to_string(Truth t) {
  switch (t) {
    case Truth::Yes: return "Yes";
    case Truth::No: return "No";
    case Truth::Unknown: return "Unknown";
  }
  return "?";
}

struct Verdict {
  Truth value = Truth::Unknown;
  std::string method;
  json witness;  // null for Unknown

  static Verdict yes(std::string method, json witness) {
    return {Truth::Yes, std::move(method), std::move(witness)};
  }
  static Verdict no(std::string method, json witness) {
    return {Truth::No, std::move(method), std::move(witness)};
  }
  static Verdict unknown(std::string method = "") {
    return {Truth::Unknown, std::move(method), json()};
  }
};

namespace detail {

inline json vec_to_json(const Vector& v) {
  json a = json::array();
  for (int i = 0; i < v.size(); ++i) a.push_back(v[i]);
  return a;
}

inline json index_to_json(const std::vector<int>& idx) {
  json a = json::array();
  for (int i : idx) a.push_back(i + 1);  // report 1-based multi-indices
  return a;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Entrywise classes

inline Verdict is_positive(const DenseTensor& A) {
  std::vector<int> idx;
  for (std::int64_t f = 0; f < A.entries.size(); ++f) {
    if (A.entries[f] <= 0.0) {
      A.unflatten(f, idx);
      return Verdict::no("entry-scan", {{"index", detail::index_to_json(idx)},
                                        {"entry", A.entries[f]}});
    }
  }
  return Verdict::yes("entry-scan", {{"min_entry", A.entries.minCoeff()}});
}

inline Verdict is_nonnegative(const DenseTensor& A) {
  std::vector<int> idx;
  for (std::int64_t f = 0; f < A.entries.size(); ++f) {
    if (A.entries[f] < 0.0) {
      A.unflatten(f, idx);
      return Verdict::no("entry-scan", {{"index", detail::index_to_json(idx)},
                                        {"entry", A.entries[f]}});
    }
  }
  return Verdict::yes("entry-scan", {{"min_entry", A.entries.minCoeff()}});
}

// ---------------------------------------------------------------------------
// Q via the duplicated-slice criterion

namespace detail {

/// Leading slices i and j coincide: a_{i i2...im} = a_{j i2...im} for all
/// trailing multi-indices.
inline bool slices_equal(const DenseTensor& A, int i, int j) {
  const std::int64_t block = DenseTensor::num_entries(A.order, A.dim) / A.dim;
  const double thr = tol::kAbs * (1.0 + A.max_abs());
  for (std::int64_t t = 0; t < block; ++t)
    if (std::abs(A.entries[i * block + t] - A.entries[j * block + t]) > thr)
      return false;
  return true;
}

inline Verdict slice_criterion_rec(const DenseTensor& A, std::vector<int> labels,
                                   std::map<std::vector<int>, Verdict>& memo) {
  if (auto it = memo.find(labels); it != memo.end()) return it->second;
  Verdict v;
  if (A.dim == 1) {
    if (A.entries[0] > 0.0)
      v = Verdict::yes("positive-scalar", {{"entry", A.entries[0]}});
    else
      v = Verdict::no("nonpositive-scalar",
                      {{"entry", A.entries[0]}, {"q", json::array({-1.0})}});
  } else {
    v = Verdict::unknown("slice-criterion");
    for (int i = 0; i < A.dim && v.value != Truth::Yes; ++i) {
      for (int j = i + 1; j < A.dim && v.value != Truth::Yes; ++j) {
        if (!slices_equal(A, i, j)) continue;
        std::vector<int> keep_i, keep_j, lab_i, lab_j;
        for (int t = 0; t < A.dim; ++t) {
          if (t != i) {
            keep_i.push_back(t);
            lab_i.push_back(labels[t]);
          }
          if (t != j) {
            keep_j.push_back(t);
            lab_j.push_back(labels[t]);
          }
        }
        const Verdict sub_i =
            slice_criterion_rec(principal_subtensor(A, keep_i), lab_i, memo);
        const Verdict sub_j =
            slice_criterion_rec(principal_subtensor(A, keep_j), lab_j, memo);
        if (sub_i.value == Truth::Yes && sub_j.value == Truth::Yes) {
          v = Verdict::yes("slice-criterion",
                           {{"pair", json::array({labels[i] + 1, labels[j] + 1})},
                            {"sub_without_first", sub_i.witness},
                            {"sub_without_second", sub_j.witness}});
        }
      }
    }
  }
  memo.emplace(std::move(labels), v);
  return v;
}

}  // namespace detail

/// Sufficient criterion for Q: some pair of equal leading slices whose two
/// principal subtensors are recursively certified. Yes or Unknown for n >= 2;
/// the n = 1 base case is decided both ways.
inline Verdict q_by_slice_criterion(const DenseTensor& A) {
  std::vector<int> labels(A.dim);
  for (int i = 0; i < A.dim; ++i) labels[i] = i;
  std::map<std::vector<int>, Verdict> memo;
  return detail::slice_criterion_rec(A, std::move(labels), memo);
}

/// Positive => Q; nonnegative with all diagonal entries positive => Q;
/// nonnegative with a zero diagonal entry => not Q, certified by
/// q = e - 2 e^(i): every off-support slack is >= 1, forcing u = t e^(i),
/// whose own slack is a_{i...i} t^{m-1} - 1 = -1 < 0.
inline Verdict q_by_nonnegativity(const DenseTensor& A) {
  if (is_positive(A).value == Truth::Yes)
    return Verdict::yes("positive-entries", json::object());
  if (is_nonnegative(A).value != Truth::Yes) return Verdict::unknown();
  const Vector diag = diagonal(A);
  for (int i = 0; i < A.dim; ++i) {
    if (diag[i] <= 0.0) {
      Vector q = Vector::Ones(A.dim);
      q[i] = -1.0;
      return Verdict::no("nonnegative-zero-diagonal",
                         {{"diagonal_index", i + 1}, {"q", detail::vec_to_json(q)}});
    }
  }
  return Verdict::yes("nonnegative-positive-diagonal",
                      {{"diagonal", detail::vec_to_json(diag)}});
}

// ---------------------------------------------------------------------------
// S-tensors, n = 2

/// Decide whether some w > 0 has A w^{m-1} > 0. By homogeneity it suffices to
/// inspect the simplex u = (theta, 1-theta), theta in (0,1). The two
/// component polynomials have constant sign between their real roots, so
/// testing a midpoint of every subinterval of the root partition is a
/// certified decision.
inline Verdict is_s_tensor_n2(const DenseTensor& A) {
  if (A.dim != 2) throw std::invalid_argument("is_s_tensor_n2: dim must be 2");
  const HomogeneousMap2 H(A);
  const auto p1 = H.theta_poly(0);
  const auto p2 = H.theta_poly(1);
  const auto r1 = real_roots(p1);
  const auto r2 = real_roots(p2);
  if (r1.identically_zero || r2.identically_zero)
    return Verdict::no("component-identically-zero", json::object());

  std::vector<double> cuts{0.0, 1.0};
  for (double r : r1.roots)
    if (r > 0.0 && r < 1.0) cuts.push_back(r);
  for (double r : r2.roots)
    if (r > 0.0 && r < 1.0) cuts.push_back(r);
  std::sort(cuts.begin(), cuts.end());
  for (std::size_t k = 0; k + 1 < cuts.size(); ++k) {
    if (cuts[k + 1] - cuts[k] <= 1e-14) continue;
    const double theta = 0.5 * (cuts[k] + cuts[k + 1]);
    if (poly_eval(p1, theta) > 0.0 && poly_eval(p2, theta) > 0.0) {
      Vector w(2);
      w << theta, 1.0 - theta;
      return Verdict::yes("simplex-sign-partition",
                          {{"w", detail::vec_to_json(w)},
                           {"value", detail::vec_to_json(eval_poly_map(A, w))}});
    }
  }
  return Verdict::no("simplex-sign-partition", json::object());
}

// ---------------------------------------------------------------------------
// R0 for n <= 2

inline Verdict is_r0_n2(const DenseTensor& A, const SolveOptions& opts = {}) {
  if (A.dim == 1) {
    // nonzero u = t needs a t^{m-1} >= 0 and a t^m = 0, so exactly a = 0
    if (A.entries[0] != 0.0)
      return Verdict::yes("scalar-nonzero-diagonal", {{"entry", A.entries[0]}});
    return Verdict::no("scalar-zero", {{"u", json::array({1.0})}});
  }
  const SolveOutcome rays = solve_tcp_zero_n2(A, opts);
  for (const auto& s : rays.solutions)
    if (!s.support.empty())
      return Verdict::no("homogeneous-ray", {{"u", detail::vec_to_json(s.u)}});
  return Verdict::yes("homogeneous-search-empty", json::object());
}

// ---------------------------------------------------------------------------
// Rank-one four-way equivalence

struct RankOneEquivalence {
  Verdict positive, s, r0, q;
  bool all_decided = false;
  bool agree = false;  // all four verdicts decided and identical
};

/// Independently computed verdicts {positive, S, R0, Q} for A = [w]^{(x)m}.
/// S and R0 use generator sign analysis ((Au^{m-1})_i = w_i (w.u)^{m-1}):
/// R0 fails exactly when some u >= 0, u != 0 has w.u = 0, i.e. when w has a
/// zero or mixed-sign component; the no-solution witness is supported on a
/// mixed-sign pair (u_i = |w_j|, u_j = |w_i|) or is e^(i) at a zero
/// component. Q falls back to the probe q = -e, certified by the exhaustive
/// rank-one solver, whenever the nonnegativity rules do not fire.
inline RankOneEquivalence rank_one_equivalence(const Vector& w, int m,
                                               const SolveOptions& opts = {}) {
  if (w.isZero(0.0)) throw std::invalid_argument("rank_one_equivalence: zero w");
  const int n = static_cast<int>(w.size());
  const DenseTensor A = sym_rank_one(w, m);
  RankOneEquivalence r;
  r.positive = is_positive(A);

  // S: need all w_i (w.u)^{m-1} > 0 for some u > 0
  {
    const bool odd_m = m % 2 == 1;
    if (!is_unisigned(w)) {
      r.s = Verdict::no("generator-not-unisigned", json::object());
    } else if ((w.array() > 0.0).all()) {
      Vector u = Vector::Ones(n);
      r.s = Verdict::yes("generator-positive",
                         {{"w", detail::vec_to_json(u)},
                          {"value", detail::vec_to_json(eval_poly_map(A, u))}});
    } else if (odd_m) {
      // w < 0, (w.u)^{m-1} > 0 for u > 0, so every component is negative
      r.s = Verdict::no("generator-negative-odd-order", json::object());
    } else {
      Vector u = Vector::Ones(n);
      r.s = Verdict::yes("generator-negative-even-order",
                         {{"w", detail::vec_to_json(u)},
                          {"value", detail::vec_to_json(eval_poly_map(A, u))}});
    }
  }

  // R0: nonzero solutions of TCP(A,0) are exactly the u >= 0 with w.u = 0
  {
    int zero_at = -1, pos_at = -1, neg_at = -1;
    for (int i = 0; i < n; ++i) {
      if (w[i] == 0.0) zero_at = i;
      else if (w[i] > 0.0) pos_at = i;
      else neg_at = i;
    }
    if (zero_at >= 0) {
      Vector u = Vector::Zero(n);
      u[zero_at] = 1.0;
      r.r0 = Verdict::no("zero-component-ray", {{"u", detail::vec_to_json(u)}});
    } else if (pos_at >= 0 && neg_at >= 0) {
      Vector u = Vector::Zero(n);
      u[pos_at] = std::abs(w[neg_at]);
      u[neg_at] = std::abs(w[pos_at]);
      r.r0 = Verdict::no("mixed-sign-ray", {{"u", detail::vec_to_json(u)}});
    } else {
      r.r0 = Verdict::yes("unisigned-no-kernel-ray", json::object());
    }
  }

  // Q: nonnegativity rules, then the q = -e probe with exhaustive refutation
  r.q = q_by_nonnegativity(A);
  if (r.q.value == Truth::Unknown) {
    const Vector probe = -Vector::Ones(n);
    const SolveOutcome res = solve_tcp_rank_one(1.0, w, m, probe, opts);
    if (res.exhaustive && res.solutions.empty())
      r.q = Verdict::no("unsolvable-probe", {{"q", detail::vec_to_json(probe)}});
    else if (!res.solutions.empty())
      r.q = Verdict::unknown("probe-solvable");
  }

  r.all_decided = r.positive.value != Truth::Unknown && r.s.value != Truth::Unknown &&
                  r.r0.value != Truth::Unknown && r.q.value != Truth::Unknown;
  r.agree = r.all_decided && r.positive.value == r.s.value &&
            r.s.value == r.r0.value && r.r0.value == r.q.value;
  return r;
}

// ---------------------------------------------------------------------------
// Sym=2 pipeline (n = 2)

struct PipelineResult {
  Verdict q, r0;
  bool theorem_consistent = false;  // never (Q = Yes and R0 = No)
};

/// Q and R0 verdicts for a canonical two-term decomposition. R0 comes from
/// the exhaustive homogeneous ray search. Q is decided by, in order: the
/// nonnegativity rules on the materialized tensor, the positive-definite
/// even PLUS_PLUS case, the all-negative MINUS_MINUS refutation, the
/// structural witness q (certified by the exhaustive decomposed solver), and
/// finally a probe set of q's (all solvable leaves Q undecided).
inline PipelineResult q_implies_r0_pipeline(const CanonicalSym2& C,
                                            const SolveOptions& opts = {}) {
  if (C.x.size() != 2)
    throw std::invalid_argument("q_implies_r0_pipeline: n must be 2");
  const SymOuterDecomp D = C.decomp();
  const DenseTensor A = materialize(D);
  PipelineResult out;

  // R0 by exhaustive ray search on the decomposition (exact for two
  // independent terms)
  const SolveOutcome rays = solve_tcp_zero_n2(D, opts);
  out.r0 = Verdict::yes("homogeneous-search-empty", json::object());
  for (const auto& s : rays.solutions)
    if (!s.support.empty()) {
      out.r0 = Verdict::no("homogeneous-ray", {{"u", detail::vec_to_json(s.u)}});
      break;
    }

  auto certify_empty = [&](const Vector& q) {
    const SolveOutcome res = solve_tcp_decomp_exact(D, q, opts);
    return res.exhaustive && res.solutions.empty();
  };

  out.q = q_by_nonnegativity(A);
  if (out.q.value == Truth::Unknown) {
    if (C.order % 2 == 0 && C.form == Sym2Form::PlusPlus) {
      out.q = Verdict::yes("positive-definite", json::object());
    } else if (C.form == Sym2Form::MinusMinus) {
      Vector q(2);
      q << -1.0, -1.0;
      if (certify_empty(q))
        out.q = Verdict::no("negative-sum-form", {{"q", detail::vec_to_json(q)}});
    }
  }
  if (out.q.value == Truth::Unknown) {
    if (const auto qw = find_q_without_solution(C); qw && certify_empty(*qw))
      out.q = Verdict::no("structural-witness", {{"q", detail::vec_to_json(*qw)}});
  }
  if (out.q.value == Truth::Unknown) {
    const double probes[][2] = {{1, 1},   {1, -1},  {-1, 1},  {-1, -1},
                                {-1, -2}, {-2, -1}, {-1, -10}, {-10, -1}};
    bool all_solvable = true;
    for (const auto& p : probes) {
      Vector q(2);
      q << p[0], p[1];
      const SolveOutcome res = solve_tcp_decomp_exact(D, q, opts);
      if (res.solutions.empty()) {
        all_solvable = false;
        if (res.exhaustive) {
          out.q = Verdict::no("unsolvable-probe", {{"q", detail::vec_to_json(q)}});
          break;
        }
      }
    }
    if (out.q.value == Truth::Unknown && all_solvable)
      out.q = Verdict::unknown("probe-set-solvable");
  }

  out.theorem_consistent = !(out.q.value == Truth::Yes && out.r0.value == Truth::No);
  return out;
}

// ---------------------------------------------------------------------------
// Whole-tensor report for the CLI

struct ClassReport {
  Verdict positive, nonnegative, s, r0, q;
  json metadata = json::object();
};

/// Classify a dense or decomposed input: entrywise classes always; S and R0
/// for n <= 2; Q through the slice criterion, the nonnegativity rules, the
/// rank-one equivalence, or the Sym=2 pipeline, else Unknown.
inline ClassReport classify_tensor(const TensorDoc& T, const SolveOptions& opts = {}) {
  const DenseTensor A =
      std::holds_alternative<DenseTensor>(T)
          ? std::get<DenseTensor>(T)
          : materialize(std::get<SymOuterDecomp>(T));
  ClassReport rep;
  rep.positive = is_positive(A);
  rep.nonnegative = is_nonnegative(A);

  if (A.dim == 1) {
    rep.s = A.entries[0] > 0.0
                ? Verdict::yes("scalar-positive", {{"w", json::array({1.0})}})
                : Verdict::no("scalar-nonpositive", json::object());
    rep.r0 = is_r0_n2(A, opts);
  } else if (A.dim == 2) {
    rep.s = is_s_tensor_n2(A);
    if (const auto* D = std::get_if<SymOuterDecomp>(&T); D && D->terms.size() <= 2) {
      // exact decomposed ray search
      rep.r0 = Verdict::yes("homogeneous-search-empty", json::object());
      for (const auto& s : solve_tcp_zero_n2(*D, opts).solutions)
        if (!s.support.empty()) {
          rep.r0 = Verdict::no("homogeneous-ray", {{"u", detail::vec_to_json(s.u)}});
          break;
        }
    } else {
      rep.r0 = is_r0_n2(A, opts);
    }
  } else {
    rep.s = Verdict::unknown();
    rep.r0 = Verdict::unknown();
  }

  // Q: cheap sufficient rules first
  rep.q = q_by_slice_criterion(A);
  if (rep.q.value == Truth::Unknown) {
    const Verdict nn = q_by_nonnegativity(A);
    if (nn.value != Truth::Unknown) rep.q = nn;
  }
  if (const auto gen = extract_generator(A)) {
    rep.metadata["rank_one_generator"] = detail::vec_to_json(gen->w);
    if (rep.q.value == Truth::Unknown) {
      const RankOneEquivalence eq = rank_one_equivalence(gen->w, A.order, opts);
      if (eq.q.value != Truth::Unknown) rep.q = eq.q;
    }
  }
  if (const auto* D = std::get_if<SymOuterDecomp>(&T);
      D && D->terms.size() == 2 && D->dim == 2 &&
      check_linear_independence(D->terms[0].w, D->terms[1].w)) {
    const CanonicalSym2 C = canonicalize_sym2(*D);
    rep.metadata["canonical_form"] = {{"form", to_string(C.form)},
                                      {"x", detail::vec_to_json(C.x)},
                                      {"y", detail::vec_to_json(C.y)}};
    const PipelineResult pr = q_implies_r0_pipeline(C, opts);
    if (rep.q.value == Truth::Unknown && pr.q.value != Truth::Unknown) rep.q = pr.q;
    if (rep.r0.value == Truth::Unknown && pr.r0.value != Truth::Unknown)
      rep.r0 = pr.r0;
  }
  return rep;
}

}  // namespace tcq
