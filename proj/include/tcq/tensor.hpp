#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

// Dense order-m dimension-n tensors, symmetric outer-product decompositions,
// and the degree-(m-1) polynomial map u -> A u^{m-1}.

namespace tcq {

using Vector = Eigen::VectorXd;

namespace tol {
inline constexpr double kAbs = 1e-9;
inline constexpr double kRel = 1e-9;
inline constexpr double kAccept = 1e-8;   // solution residual acceptance
inline constexpr double kDedup = 1e-6;    // merge radius for solver output
inline constexpr double kIndep = 1e-12;   // singular value ratio for independence
}  // namespace tol

inline bool approx_equal(double a, double b, double scale = 1.0) {
  return std::abs(a - b) <= tol::kAbs + tol::kRel * std::abs(scale);
}

/// Order-m, dimension-n real tensor with flat row-major entry storage.
/// The first index varies slowest: flat(i1,...,im) = ((i1*n + i2)*n + ...)*n + im,
/// indices 0-based internally.
struct DenseTensor {
  int order = 0;
  int dim = 0;
  Vector entries;

  DenseTensor() = default;
  DenseTensor(int m, int n) : order(m), dim(n) {
    if (m < 2) throw std::invalid_argument("tensor order must be >= 2");
    if (n < 1) throw std::invalid_argument("tensor dimension must be >= 1");
    entries = Vector::Zero(num_entries(m, n));
  }

  static std::int64_t num_entries(int m, int n) {
    std::int64_t c = 1;
    for (int j = 0; j < m; ++j) c *= n;
    return c;
  }

  std::int64_t flat(const std::vector<int>& idx) const {
    if (static_cast<int>(idx.size()) != order)
      throw std::invalid_argument("multi-index length mismatch");
    std::int64_t f = 0;
    for (int i : idx) {
      if (i < 0 || i >= dim) throw std::out_of_range("multi-index out of range");
      f = f * dim + i;
    }
    return f;
  }

  double operator()(const std::vector<int>& idx) const { return entries[flat(idx)]; }
  double& operator()(const std::vector<int>& idx) { return entries[flat(idx)]; }

  void unflatten(std::int64_t f, std::vector<int>& idx) const {
    idx.resize(order);
    for (int p = order - 1; p >= 0; --p) {
      idx[p] = static_cast<int>(f % dim);
      f /= dim;
    }
  }

  bool all_finite() const { return entries.allFinite(); }

  double max_abs() const {
    return entries.size() ? entries.cwiseAbs().maxCoeff() : 0.0;
  }
};

/// Visit every multi-index of the given length over {0,...,dim-1} in row-major
/// order (last position fastest).
template <class F>
void for_each_index(int length, int dim, F&& f) {
  std::vector<int> idx(length, 0);
  for (;;) {
    f(const_cast<const std::vector<int>&>(idx));
    int p = length - 1;
    while (p >= 0 && ++idx[p] == dim) {
      idx[p] = 0;
      --p;
    }
    if (p < 0) break;
  }
}

/// Signed sum of scaled symmetric rank-one terms: sum_j mu_j [w_j]^{(x)m}.
struct SymOuterDecomp {
  struct Term {
    double mu = 0.0;
    Vector w;
  };

  int order = 0;
  int dim = 0;
  std::vector<Term> terms;

  SymOuterDecomp() = default;
  SymOuterDecomp(int m, int n, std::vector<Term> ts)
      : order(m), dim(n), terms(std::move(ts)) {
    validate();
  }

  void validate() const {
    if (order < 2) throw std::invalid_argument("decomposition order must be >= 2");
    if (dim < 1) throw std::invalid_argument("decomposition dimension must be >= 1");
    for (const auto& t : terms) {
      if (t.mu == 0.0 || !std::isfinite(t.mu))
        throw std::invalid_argument("coefficient must be nonzero and finite");
      if (t.w.size() != dim) throw std::invalid_argument("generator length mismatch");
      if (t.w.isZero(0.0)) throw std::invalid_argument("generator must be nonzero");
    }
  }
};

/// Bijection on {0,...,n-1}; apply(v)[i] = v[map[i]].
struct Permutation {
  std::vector<int> map;

  explicit Permutation(std::vector<int> p) : map(std::move(p)) {
    std::vector<char> seen(map.size(), 0);
    for (int i : map) {
      if (i < 0 || i >= static_cast<int>(map.size()) || seen[i])
        throw std::invalid_argument("permutation is not a bijection");
      seen[i] = 1;
    }
  }

  static Permutation identity(int n) {
    std::vector<int> p(n);
    for (int i = 0; i < n; ++i) p[i] = i;
    return Permutation(std::move(p));
  }

  static Permutation swap2() { return Permutation({1, 0}); }

  int size() const { return static_cast<int>(map.size()); }

  Vector apply(const Vector& v) const {
    if (v.size() != size()) throw std::invalid_argument("permutation size mismatch");
    Vector out(v.size());
    for (int i = 0; i < size(); ++i) out[i] = v[map[i]];
    return out;
  }

  Permutation inverse() const {
    std::vector<int> inv(map.size());
    for (int i = 0; i < size(); ++i) inv[map[i]] = i;
    return Permutation(std::move(inv));
  }
};

// ---------------------------------------------------------------------------
// Polynomial map evaluation

/// (A u^{m-1})_i = sum over i2..im of a_{i i2...im} u_{i2}...u_{im}.
inline Vector eval_poly_map(const DenseTensor& A, const Vector& u) {
  if (u.size() != A.dim) throw std::invalid_argument("eval: vector length mismatch");
  Vector out = Vector::Zero(A.dim);
  const int d = A.order - 1;
  const std::int64_t block = DenseTensor::num_entries(A.order, A.dim) / A.dim;
  for (int i = 0; i < A.dim; ++i) {
    double acc = 0.0;
    std::int64_t base = static_cast<std::int64_t>(i) * block;
    std::int64_t t = 0;
    for_each_index(d, A.dim, [&](const std::vector<int>& idx) {
      double prod = A.entries[base + t];
      for (int p = 0; p < d; ++p) prod *= u[idx[p]];
      acc += prod;
      ++t;
    });
    out[i] = acc;
  }
  return out;
}

/// Decomposed evaluation: sum_j mu_j w_j ((w_j . u))^{m-1}, k*n work per term.
inline Vector eval_poly_map(const SymOuterDecomp& D, const Vector& u) {
  if (u.size() != D.dim) throw std::invalid_argument("eval: vector length mismatch");
  Vector out = Vector::Zero(D.dim);
  for (const auto& t : D.terms) {
    const double s = std::pow(t.w.dot(u), D.order - 1);
    out += (t.mu * s) * t.w;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Constructors

/// General outer product x1 (x) x2 (x) ... (x) xm.
inline DenseTensor outer_rank_one(const std::vector<Vector>& xs) {
  if (xs.size() < 2) throw std::invalid_argument("outer product needs >= 2 vectors");
  const int n = static_cast<int>(xs.front().size());
  for (const auto& x : xs) {
    if (x.size() != n) throw std::invalid_argument("outer product: length mismatch");
    if (x.isZero(0.0)) throw std::invalid_argument("outer product: zero vector");
  }
  const int m = static_cast<int>(xs.size());
  DenseTensor A(m, n);
  std::int64_t f = 0;
  for_each_index(m, n, [&](const std::vector<int>& idx) {
    double prod = 1.0;
    for (int p = 0; p < m; ++p) prod *= xs[p][idx[p]];
    A.entries[f++] = prod;
  });
  return A;
}

/// Symmetric rank-one tensor [w]^{(x)m}: entries w_{i1}...w_{im}.
inline DenseTensor sym_rank_one(const Vector& w, int m) {
  if (w.isZero(0.0)) throw std::invalid_argument("sym_rank_one: zero generator");
  return outer_rank_one(std::vector<Vector>(m, w));
}

/// Entrywise sum of the decomposition's scaled rank-one terms.
inline DenseTensor materialize(const SymOuterDecomp& D) {
  D.validate();
  DenseTensor A(D.order, D.dim);
  for (const auto& t : D.terms) {
    std::int64_t f = 0;
    for_each_index(D.order, D.dim, [&](const std::vector<int>& idx) {
      double prod = t.mu;
      for (int p = 0; p < D.order; ++p) prod *= t.w[idx[p]];
      A.entries[f++] += prod;
    });
  }
  return A;
}

/// Replace every generator by its permuted image; coefficients unchanged.
inline SymOuterDecomp permute_decomp(const SymOuterDecomp& D, const Permutation& P) {
  if (P.size() != D.dim) throw std::invalid_argument("permutation dimension mismatch");
  SymOuterDecomp out = D;
  for (auto& t : out.terms) t.w = P.apply(t.w);
  return out;
}

// ---------------------------------------------------------------------------
// Structure queries

/// Max deviation of any entry from the entry at its sorted (canonical)
/// multi-index. Zero iff the tensor is symmetric.
inline double symmetry_deviation(const DenseTensor& A) {
  double dev = 0.0;
  std::vector<int> idx, sorted;
  for (std::int64_t f = 0; f < A.entries.size(); ++f) {
    A.unflatten(f, idx);
    sorted = idx;
    std::sort(sorted.begin(), sorted.end());
    dev = std::max(dev, std::abs(A.entries[f] - A.entries[A.flat(sorted)]));
  }
  return dev;
}

inline bool is_symmetric(const DenseTensor& A, double tolerance = tol::kAbs) {
  return symmetry_deviation(A) <= tolerance * (1.0 + A.max_abs());
}

/// Restriction of all indices to `keep` (0-based, relabeled in increasing order).
inline DenseTensor principal_subtensor(const DenseTensor& A, std::vector<int> keep) {
  if (keep.empty()) throw std::invalid_argument("principal_subtensor: empty index set");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  for (int i : keep)
    if (i < 0 || i >= A.dim) throw std::out_of_range("principal_subtensor: bad index");
  DenseTensor S(A.order, static_cast<int>(keep.size()));
  std::int64_t f = 0;
  std::vector<int> full(A.order);
  for_each_index(A.order, S.dim, [&](const std::vector<int>& idx) {
    for (int p = 0; p < A.order; ++p) full[p] = keep[idx[p]];
    S.entries[f++] = A(full);
  });
  return S;
}

/// Vector of diagonal entries a_{ii...i}.
inline Vector diagonal(const DenseTensor& A) {
  Vector d(A.dim);
  std::vector<int> idx(A.order);
  for (int i = 0; i < A.dim; ++i) {
    std::fill(idx.begin(), idx.end(), i);
    d[i] = A(idx);
  }
  return d;
}

inline Vector diagonal(const SymOuterDecomp& D) {
  Vector d = Vector::Zero(D.dim);
  for (const auto& t : D.terms)
    for (int i = 0; i < D.dim; ++i) d[i] += t.mu * std::pow(t.w[i], D.order);
  return d;
}

}  // namespace tcq
