#pragma once

#include "tcq/classify.hpp"
#include "tcq/decomp.hpp"
#include "tcq/json_io.hpp"
#include "tcq/tcp.hpp"
#include "tcq/tensor.hpp"

#include <cstdint>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

// Seeded randomized property campaigns shared by `tcq proptest` and the test
// suite. Every suite is deterministic in (seed, cases) and reports failures
// with a reproducer (instance JSON plus the case index).

namespace tcq {

struct CampaignResult {
  std::string name;
  int cases = 0;
  int failures = 0;
  std::vector<std::string> reproducers;  // at most a handful, for debugging

  void fail(int case_index, const std::string& detail) {
    ++failures;
    if (reproducers.size() < 5) {
      std::ostringstream os;
      os << "case " << case_index << ": " << detail;
      reproducers.push_back(os.str());
    }
  }
};

namespace rnd {

using Rng = std::mt19937_64;

inline double entry(Rng& g) {
  return std::uniform_real_distribution<double>(-3.0, 3.0)(g);
}

inline double nonzero_entry(Rng& g) {
  for (;;) {
    const double v = entry(g);
    if (std::abs(v) > 0.1) return v;
  }
}

inline Vector vec(Rng& g, int n) {
  Vector v(n);
  for (int i = 0; i < n; ++i) v[i] = entry(g);
  return v;
}

inline Vector nonzero_vec(Rng& g, int n) {
  for (;;) {
    Vector v = vec(g, n);
    if (v.cwiseAbs().maxCoeff() > 0.1) return v;
  }
}

inline int pick(Rng& g, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(g);
}

inline DenseTensor dense(Rng& g, int m, int n) {
  DenseTensor A(m, n);
  for (std::int64_t f = 0; f < A.entries.size(); ++f) A.entries[f] = entry(g);
  return A;
}

inline DenseTensor dense_int(Rng& g, int m, int n) {
  DenseTensor A(m, n);
  for (std::int64_t f = 0; f < A.entries.size(); ++f)
    A.entries[f] = static_cast<double>(pick(g, -3, 3));
  return A;
}

inline SymOuterDecomp decomp(Rng& g, int m, int n, int k) {
  SymOuterDecomp D;
  D.order = m;
  D.dim = n;
  for (int j = 0; j < k; ++j) {
    SymOuterDecomp::Term t;
    t.mu = nonzero_entry(g);
    t.w = nonzero_vec(g, n);
    D.terms.push_back(std::move(t));
  }
  return D;
}

/// Random canonical two-term form for n = 2 with generators in general
/// position; about half of the draws plant one of the structural equalities
/// (y1 = -x1 for odd order, y1 = a*x1 or y2 = a*x2 for even order).
inline CanonicalSym2 canonical_sym2(Rng& g, bool odd_order) {
  for (;;) {
    CanonicalSym2 c;
    c.order = odd_order ? 3 + 2 * pick(g, 0, 1) : 4 + 2 * pick(g, 0, 1);
    c.form = odd_order ? Sym2Form::PlusPlus : Sym2Form::PlusMinus;
    c.x = nonzero_vec(g, 2);
    c.y = nonzero_vec(g, 2);
    if (pick(g, 0, 1)) {
      const int alpha = odd_order ? -1 : (pick(g, 0, 1) ? 1 : -1);
      if (pick(g, 0, 1))
        c.y[0] = alpha * c.x[0];
      else if (!odd_order)
        c.y[1] = alpha * c.x[1];
      else
        c.y[1] = -c.x[1];
    }
    if (check_linear_independence(c.x, c.y)) return c;
  }
}

}  // namespace rnd

// ---------------------------------------------------------------------------
// Suites

inline CampaignResult campaign_evaluation_consistency(std::uint64_t seed, int cases) {
  CampaignResult res{"evaluation-consistency", cases, 0, {}};
  rnd::Rng g(seed);
  for (int c = 0; c < cases; ++c) {
    const int m = rnd::pick(g, 2, 5);
    const int n = rnd::pick(g, 1, 3);
    const SymOuterDecomp D = rnd::decomp(g, m, n, rnd::pick(g, 1, 3));
    const Vector u = rnd::vec(g, n);
    const Vector a = eval_poly_map(D, u);
    const Vector b = eval_poly_map(materialize(D), u);
    const double scale = 1.0 + a.cwiseAbs().maxCoeff() + b.cwiseAbs().maxCoeff();
    if ((a - b).cwiseAbs().maxCoeff() > 1e-9 * scale)
      res.fail(c, tensor_to_json(TensorDoc(D)).dump());
  }
  return res;
}

inline CampaignResult campaign_homogeneity(std::uint64_t seed, int cases) {
  CampaignResult res{"homogeneity", cases, 0, {}};
  rnd::Rng g(seed);
  for (int c = 0; c < cases; ++c) {
    const int m = rnd::pick(g, 2, 4);
    const int n = rnd::pick(g, 1, 3);
    const DenseTensor A = rnd::dense(g, m, n);
    const Vector u = rnd::vec(g, n);
    const double ts[] = {0.5, 2.0, 10.0};
    const Vector base = eval_poly_map(A, u);
    for (double t : ts) {
      const Vector lhs = eval_poly_map(A, (t * u).eval());
      const Vector rhs = std::pow(t, m - 1) * base;
      const double scale = 1.0 + lhs.cwiseAbs().maxCoeff() + rhs.cwiseAbs().maxCoeff();
      if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-9 * scale)
        res.fail(c, tensor_to_json(TensorDoc(A)).dump());
    }
  }
  return res;
}

inline CampaignResult campaign_map_permutation_covariance(std::uint64_t seed,
                                                          int cases) {
  CampaignResult res{"map-permutation-covariance", cases, 0, {}};
  rnd::Rng g(seed);
  for (int c = 0; c < cases; ++c) {
    const int m = rnd::pick(g, 2, 5);
    const int n = rnd::pick(g, 2, 3);
    const SymOuterDecomp D = rnd::decomp(g, m, n, rnd::pick(g, 1, 3));
    std::vector<int> pm(n);
    for (int i = 0; i < n; ++i) pm[i] = i;
    std::shuffle(pm.begin(), pm.end(), g);
    const Permutation P(pm);
    const Vector u = rnd::vec(g, n);
    const Vector lhs = P.apply(eval_poly_map(D, u));
    const Vector rhs = eval_poly_map(permute_decomp(D, P), P.apply(u));
    const double scale = 1.0 + lhs.cwiseAbs().maxCoeff();
    if ((lhs - rhs).cwiseAbs().maxCoeff() > 1e-9 * scale)
      res.fail(c, tensor_to_json(TensorDoc(D)).dump());
  }
  return res;
}

inline CampaignResult campaign_generator_round_trip(std::uint64_t seed, int cases) {
  CampaignResult res{"generator-round-trip", cases, 0, {}};
  rnd::Rng g(seed);
  for (int c = 0; c < cases; ++c) {
    const int m = rnd::pick(g, 2, 6);
    const int n = rnd::pick(g, 1, 4);
    Vector w = rnd::nonzero_vec(g, n);
    if (rnd::pick(g, 0, 3) == 0) w[rnd::pick(g, 0, n - 1)] = 0.0;
    if (w.isZero(0.0)) continue;
    const auto got = extract_generator(sym_rank_one(w, m));
    if (!got) {
      res.fail(c, "extract_generator rejected a rank-one symmetric tensor");
      continue;
    }
    Vector expect = w;
    if (m % 2 == 0) {
      for (int i = 0; i < n; ++i) {
        if (expect[i] != 0.0) {
          if (expect[i] < 0.0) expect = -expect;
          break;
        }
      }
    }
    if ((got->w - expect).cwiseAbs().maxCoeff() >
        1e-9 * (1.0 + expect.cwiseAbs().maxCoeff()))
      res.fail(c, "recovered generator deviates: " +
                      detail::vec_to_json(got->w).dump() + " vs " +
                      detail::vec_to_json(expect).dump());
  }
  return res;
}

inline CampaignResult campaign_generator_proposition(std::uint64_t seed, int cases) {
  CampaignResult res{"generator-proposition", cases, 0, {}};
  rnd::Rng g(seed);
  for (int c = 0; c < cases; ++c) {
    const int m = rnd::pick(g, 2, 5);
    const int n = rnd::pick(g, 1, 4);
    Vector w = rnd::nonzero_vec(g, n);
    if (rnd::pick(g, 0, 3) == 0) w[rnd::pick(g, 0, n - 1)] = 0.0;
    if (w.isZero(0.0)) continue;
    if (!check_generator_proposition(w, m).holds)
      res.fail(c, "proposition violated for w = " + detail::vec_to_json(w).dump());
  }
  return res;
}

inline CampaignResult campaign_four_way_equivalence(std::uint64_t seed, int cases) {
  CampaignResult res{"four-way-equivalence", cases, 0, {}};
  rnd::Rng g(seed);
  for (int c = 0; c < cases; ++c) {
    const int m = rnd::pick(g, 3, 4);
    const int n = rnd::pick(g, 2, 3);
    Vector w(n);
    for (int i = 0; i < n; ++i) w[i] = rnd::nonzero_entry(g);
    if (rnd::pick(g, 0, 4) == 0) w[rnd::pick(g, 0, n - 1)] = 0.0;
    const RankOneEquivalence eq = rank_one_equivalence(w, m);
    if (n == 2 && !eq.all_decided) {
      res.fail(c, "undecided verdict for n=2, w = " + detail::vec_to_json(w).dump());
      continue;
    }
    if (eq.all_decided && !eq.agree)
      res.fail(c, "verdicts disagree for m = " + std::to_string(m) +
                      ", w = " + detail::vec_to_json(w).dump() +
                      " (positive=" + to_string(eq.positive.value) +
                      " S=" + to_string(eq.s.value) +
                      " R0=" + to_string(eq.r0.value) +
                      " Q=" + to_string(eq.q.value) + ")");
  }
  return res;
}

inline CampaignResult campaign_structural_soundness(std::uint64_t seed, int cases) {
  CampaignResult res{"structural-soundness", cases, 0, {}};
  rnd::Rng g(seed);
  for (int c = 0; c < cases; ++c) {
    const CanonicalSym2 C = rnd::canonical_sym2(g, rnd::pick(g, 0, 1) == 1);
    const auto form = detect_not_r0_form(C);
    const SolveOutcome rays = solve_tcp_zero_n2(C.decomp());
    bool has_ray = false, singleton = true;
    for (const auto& s : rays.solutions) {
      if (s.support.empty()) continue;
      has_ray = true;
      if (s.support.size() != 1) singleton = false;
    }
    const std::string inst = tensor_to_json(TensorDoc(C.decomp())).dump();
    if (form.has_value() != has_ray)
      res.fail(c, std::string(form ? "form fired without ray" : "ray without form") +
                      ": " + inst);
    else if (has_ray && !singleton)
      res.fail(c, "nonzero ray without singleton support: " + inst);
  }
  return res;
}

inline CampaignResult campaign_q_implies_r0(std::uint64_t seed, int cases) {
  CampaignResult res{"q-implies-r0", cases, 0, {}};
  rnd::Rng g(seed);
  for (int c = 0; c < cases; ++c) {
    const bool odd = rnd::pick(g, 0, 1) == 1;
    CanonicalSym2 C = rnd::canonical_sym2(g, odd);
    if (!odd && rnd::pick(g, 0, 3) == 0)
      C.form = rnd::pick(g, 0, 1) ? Sym2Form::PlusPlus : Sym2Form::MinusMinus;
    const PipelineResult pr = q_implies_r0_pipeline(C);
    const std::string inst = tensor_to_json(TensorDoc(C.decomp())).dump();
    if (!pr.theorem_consistent) {
      res.fail(c, "(Q=Yes, R0=No) labeled: " + inst);
      continue;
    }
    // when a structural not-R0 form fires, both refutations must land
    if ((C.form == Sym2Form::PlusPlus && C.order % 2 == 1) ||
        C.form == Sym2Form::PlusMinus) {
      if (detect_not_r0_form(C)) {
        if (pr.r0.value != Truth::No)
          res.fail(c, "form fired but R0 != No: " + inst);
        else if (pr.q.value != Truth::No)
          res.fail(c, "form fired but Q != No: " + inst);
      }
    }
  }
  return res;
}

inline CampaignResult campaign_solution_permutation_covariance(std::uint64_t seed,
                                                               int cases) {
  CampaignResult res{"solution-permutation-covariance", cases, 0, {}};
  rnd::Rng g(seed);
  const Permutation P = Permutation::swap2();
  for (int c = 0; c < cases; ++c) {
    const int m = rnd::pick(g, 2, 5);
    const int k = rnd::pick(g, 1, 2);
    SymOuterDecomp D;
    do {
      D = rnd::decomp(g, m, 2, k);
    } while (k == 2 && !check_linear_independence(D.terms[0].w, D.terms[1].w));
    const Vector q = rnd::vec(g, 2);
    const SolveOutcome a = solve_tcp_decomp_exact(D, q);
    const SolveOutcome b = solve_tcp_decomp_exact(permute_decomp(D, P), P.apply(q));
    auto matched = [](const std::vector<TcpSolution>& set, const Vector& u) {
      for (const auto& s : set) {
        const double scale = 1.0 + u.cwiseAbs().maxCoeff();
        if ((s.u - u).cwiseAbs().maxCoeff() <= 1e-8 * scale) return true;
      }
      return false;
    };
    bool ok = true;
    for (const auto& s : a.solutions)
      if (!matched(b.solutions, P.apply(s.u))) ok = false;
    for (const auto& s : b.solutions)
      if (!matched(a.solutions, P.apply(s.u))) ok = false;
    if (!ok)
      res.fail(c, "solution sets do not correspond under the swap: " +
                      tensor_to_json(TensorDoc(D)).dump() +
                      ", q = " + detail::vec_to_json(q).dump());
  }
  return res;
}

// ---------------------------------------------------------------------------
// Registry

inline const std::vector<std::string>& campaign_names() {
  static const std::vector<std::string> names = {
      "evaluation-consistency",
      "homogeneity",
      "map-permutation-covariance",
      "generator-round-trip",
      "generator-proposition",
      "four-way-equivalence",
      "structural-soundness",
      "q-implies-r0",
      "solution-permutation-covariance",
  };
  return names;
}

inline CampaignResult run_campaign(const std::string& name, std::uint64_t seed,
                                   int cases) {
  if (name == "evaluation-consistency")
    return campaign_evaluation_consistency(seed, cases);
  if (name == "homogeneity") return campaign_homogeneity(seed, cases);
  if (name == "map-permutation-covariance")
    return campaign_map_permutation_covariance(seed, cases);
  if (name == "generator-round-trip") return campaign_generator_round_trip(seed, cases);
  if (name == "generator-proposition")
    return campaign_generator_proposition(seed, cases);
  if (name == "four-way-equivalence") return campaign_four_way_equivalence(seed, cases);
  if (name == "structural-soundness") return campaign_structural_soundness(seed, cases);
  if (name == "q-implies-r0") return campaign_q_implies_r0(seed, cases);
  if (name == "solution-permutation-covariance")
    return campaign_solution_permutation_covariance(seed, cases);
  throw std::invalid_argument("unknown campaign: " + name);
}

}  // namespace tcq
