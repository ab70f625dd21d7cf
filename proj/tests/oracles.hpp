#pragma once

// Independent reference implementations used only by the tests. They avoid the
// library's own sign and elimination code paths on purpose.

#include <algorithm>
#include <random>
#include <vector>

#include "deforma/artinian.hpp"
#include "deforma/combinatorics.hpp"
#include "deforma/graded.hpp"
#include "deforma/linfty.hpp"
#include "deforma/transfer.hpp"

namespace oracle {

using deforma::Complex;
using deforma::GradedSpace;
using deforma::Matrix;
using deforma::Permutation;
using deforma::Rational;

/// Sorts the word back to the identity with adjacent swaps, multiplying the
/// graded sign of every swap.
inline int koszul_by_bubble_sort(const Permutation& perm, const std::vector<int>& degrees) {
  std::vector<std::size_t> word(perm);
  int sign = 1;
  bool swapped = true;
  while (swapped) {
    swapped = false;
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
      if (word[i] > word[i + 1]) {
        if ((degrees[word[i]] * degrees[word[i + 1]]) % 2 != 0) sign = -sign;
        std::swap(word[i], word[i + 1]);
        swapped = true;
      }
    }
  }
  return sign;
}

inline int sign_by_cycles(const Permutation& perm) {
  std::vector<bool> seen(perm.size(), false);
  int sign = 1;
  for (std::size_t i = 0; i < perm.size(); ++i) {
    if (seen[i]) continue;
    std::size_t len = 0;
    for (std::size_t j = i; !seen[j]; j = perm[j]) {
      seen[j] = true;
      ++len;
    }
    if (len % 2 == 0) sign = -sign;
  }
  return sign;
}

inline std::vector<Permutation> unshuffles_by_filter(std::size_t p, std::size_t q) {
  std::vector<Permutation> out;
  Permutation s(p + q);
  for (std::size_t i = 0; i < s.size(); ++i) s[i] = i;
  do {
    bool ok = true;
    for (std::size_t i = 0; i + 1 < p; ++i) ok = ok && s[i] < s[i + 1];
    for (std::size_t i = p; i + 1 < p + q; ++i) ok = ok && s[i] < s[i + 1];
    if (ok) out.push_back(s);
  } while (std::next_permutation(s.begin(), s.end()));
  return out;
}

/// Rank by dense Gaussian elimination on a copied array.
inline std::size_t dense_rank(std::vector<std::vector<Rational>> a) {
  std::size_t r = 0;
  const std::size_t rows = a.size();
  const std::size_t cols = rows ? a[0].size() : 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv][c] == 0) ++piv;
    if (piv == rows) continue;
    std::swap(a[piv], a[r]);
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c] / a[r][c];
      for (std::size_t j = c; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    ++r;
  }
  return r;
}

inline std::vector<std::vector<Rational>> dense(const Matrix& m) {
  std::vector<std::vector<Rational>> a(m.rows(), std::vector<Rational>(m.cols(), Rational(0)));
  for (std::size_t j = 0; j < m.cols(); ++j) {
    for (const auto& [i, v] : m.column(j)) a[i][j] = v;
  }
  return a;
}

/// dim H^deg by dim ker - dim im using dense ranks of the degree blocks.
inline std::size_t betti(const Complex& c, int deg) {
  const auto& v = c.space;
  auto block_rank = [&](int from) -> std::size_t {
    const std::size_t ns = v.dim(from), nt = v.dim(from + 1);
    if (ns == 0 || nt == 0) return 0;
    std::vector<std::vector<Rational>> a(nt, std::vector<Rational>(ns, Rational(0)));
    for (std::size_t j = 0; j < ns; ++j) {
      for (const auto& [i, x] : c.differential.column(v.offset(from) + j)) a[i - v.offset(from + 1)][j] = x;
    }
    return dense_rank(a);
  };
  return v.dim(deg) - block_rank(deg) - block_rank(deg - 1);
}

inline Rational small_rational(std::mt19937& rng) {
  std::uniform_int_distribution<int> num(-3, 3), den(1, 2);
  Rational r(num(rng), den(rng));
  r.canonicalize();
  return r;
}

/// Random complex: a standard form with paired basis vectors, conjugated by a
/// random degree-preserving triangular change of basis.
inline Complex random_complex(std::mt19937& rng, std::size_t dim, int dmin, int dmax) {
  std::uniform_int_distribution<int> deg(dmin, dmax);
  std::vector<std::pair<int, std::string>> elems;
  for (std::size_t i = 0; i < dim; ++i) elems.emplace_back(deg(rng), "e" + std::to_string(i));
  GradedSpace v = deforma::make_space(elems);
  const std::size_t n = v.dim();
  Matrix d(n, n);
  std::vector<bool> used(n, false);
  std::bernoulli_distribution coin(0.6);
  for (std::size_t i = 0; i < n; ++i) {
    if (used[i]) continue;
    for (std::size_t j = 0; j < n; ++j) {
      if (!used[j] && j != i && v.degree(j) == v.degree(i) + 1 && coin(rng)) {
        d.set(j, i, 1);
        used[i] = used[j] = true;
        break;
      }
    }
  }
  Matrix p = Matrix::identity(n), pinv = Matrix::identity(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (v.degree(i) == v.degree(j)) {
        Matrix e = Matrix::identity(n), einv = Matrix::identity(n);
        const Rational c = small_rational(rng);
        e.set(i, j, c);
        einv.set(i, j, -c);
        p = e * p;
        pinv = pinv * einv;
      }
    }
  }
  return Complex(v, p * d * pinv);
}

}  // namespace oracle

namespace oracle {

/// Random element of V^degree ⊗ m_A with small integer coefficients.
inline deforma::ExtVec random_ext(const deforma::GradedSpace& v, int degree, const deforma::ArtinianAlgebra& a,
                                  std::mt19937_64& rng, int bound = 2) {
  deforma::ExtVec x;
  std::uniform_int_distribution<int> coef(-bound, bound);
  for (std::size_t k = 1; k < a.dim(); ++k) {
    for (deforma::Index i = 0; i < v.dim(); ++i) {
      if (v.degree(i) == degree) {
        const int c = coef(rng);
        if (c) x[k].add(i, c);
      }
    }
  }
  deforma::ext_normalize(x);
  return x;
}

}  // namespace oracle

namespace oracle {

/// Literal arity-3 tree sum: π( q_3(ιc_0, ιc_1, ιc_2)
///   + Σ_{σ ∈ S(2,1)} ε(σ) q_2(h q_2(ιc_σ0, ιc_σ1), ιc_σ2) ).
inline deforma::SparseVec tree_sum_arity3(const deforma::LInftyStructure& l, const deforma::Contraction& c,
                                          const deforma::Tuple& t) {
  using deforma::SparseVec;
  auto q = [&](const std::vector<const SparseVec*>& args) {
    return l.q(static_cast<unsigned>(args.size()), args);
  };
  std::vector<int> degs;
  for (deforma::Index i : t) degs.push_back(c.h.degree(i) - 1);
  std::vector<SparseVec> in;
  for (deforma::Index i : t) in.push_back(c.inclusion.column(i));
  SparseVec acc = q({&in[0], &in[1], &in[2]});
  for (const auto& s : unshuffles_by_filter(2, 1)) {
    const SparseVec inner = c.homotopy.apply(q({&in[s[0]], &in[s[1]]}));
    acc.axpy(koszul_by_bubble_sort(s, degs), q({&inner, &in[s[2]]}));
  }
  return c.projection.apply(acc);
}

}  // namespace oracle
