#include "deforma/samples.hpp"

#include <algorithm>

namespace deforma {

namespace {

DGLA lie(const std::vector<std::string>& labels) {
  return DGLA(Complex::zero_differential(GradedSpace({{0, labels}})));
}

SparseVec vec(std::initializer_list<std::pair<Index, int>> entries) {
  SparseVec v;
  for (const auto& [i, c] : entries) v.add(i, c);
  return v;
}

}  // namespace

DGLA sl2_span() {
  DGLA g = lie({"A", "B"});
  g.set_bracket(1, 0, vec({{0, 2}}));
  return g;
}

DGLA sl2() {
  DGLA g = lie({"E", "H", "F"});
  g.set_bracket(1, 0, vec({{0, 2}}));
  g.set_bracket(1, 2, vec({{2, -2}}));
  g.set_bracket(0, 2, vec({{1, 1}}));
  return g;
}

DGLA two_dim_nonabelian() {
  DGLA g = lie({"x", "y"});
  g.set_bracket(0, 1, vec({{1, 1}}));
  return g;
}

DGLA heisenberg() {
  DGLA g = lie({"a", "b", "c"});
  g.set_bracket(0, 1, vec({{2, 1}}));
  return g;
}

DGLA transfer_witness_dgla() {
  GradedSpace v({{0, {"a", "b"}}, {1, {"c", "e"}}});
  Matrix d(4, 4);
  d.set(2, 1, 1);
  DGLA g{Complex(v, d)};
  g.set_bracket(0, 3, vec({{2, 1}, {3, 1}}));
  g.set_bracket(1, 2, vec({{2, 1}}));
  g.set_bracket(1, 3, vec({{3, 1}}));
  return g;
}

CDGA exterior_cdga(int degree) {
  CDGA a;
  a.complex = Complex::zero_differential(make_space({{0, "1"}, {degree, "e"}}));
  const Index one = a.space().index_of("1"), e = a.space().index_of("e");
  a.unit = one;
  a.set_product(one, one, SparseVec::unit(one));
  a.set_product(one, e, SparseVec::unit(e));
  if (degree % 2 == 0) a.set_product(e, e, {});
  return a;
}

CDGA dual_numbers() {
  CDGA a;
  a.complex = Complex::zero_differential(GradedSpace({{0, {"1", "eps"}}}));
  a.unit = 0;
  a.set_product(0, 0, SparseVec::unit(0));
  a.set_product(0, 1, SparseVec::unit(1));
  return a;
}

CDGA polynomial_forms(unsigned k) {
  std::vector<std::string> zero, one;
  for (unsigned a = 0; a <= k; ++a) zero.push_back(a == 0 ? "1" : "s^" + std::to_string(a));
  for (unsigned a = 0; a < k; ++a) one.push_back(a == 0 ? "ds" : "s^" + std::to_string(a) + "ds");
  GradedSpace v({{0, zero}, {1, one}});
  const Index off = v.offset(1);
  Matrix d(v.dim(), v.dim());
  for (unsigned a = 1; a <= k; ++a) d.set(off + a - 1, a, a);
  CDGA out;
  out.complex = Complex(v, d);
  out.unit = 0;
  for (unsigned a = 0; a <= k; ++a) {
    for (unsigned b = a; b <= k; ++b) {
      if (a + b <= k) out.set_product(a, b, SparseVec::unit(a + b));
      else out.set_product(a, b, {});
    }
    for (unsigned b = 0; b < k; ++b) {
      if (a + b < k) out.set_product(a, off + b, SparseVec::unit(off + a + b));
      else out.set_product(a, off + b, {});
    }
  }
  return out;
}

Rational random_small(std::mt19937_64& rng, int bound) {
  std::uniform_int_distribution<int> dist(-bound, bound);
  return dist(rng);
}

BasisChange random_basis_change(const GradedSpace& v, std::mt19937_64& rng) {
  // Per degree: a random permutation times a unitriangular matrix with a
  // nonzero diagonal scaling.
  const std::size_t n = v.dim();
  Matrix p(n, n);
  std::uniform_int_distribution<int> scale(1, 3), sgn(0, 1);
  for (int deg : v.support()) {
    const Index off = v.offset(deg);
    const std::size_t m = v.dim(deg);
    std::vector<Index> perm(m);
    for (std::size_t i = 0; i < m; ++i) perm[i] = i;
    std::shuffle(perm.begin(), perm.end(), rng);
    for (std::size_t j = 0; j < m; ++j) {
      const Rational diag = Rational(scale(rng) * (sgn(rng) ? 1 : -1));
      p.set(off + perm[j], off + j, diag);
      for (std::size_t i = j + 1; i < m; ++i) p.add(off + perm[i], off + j, random_small(rng, 2));
    }
  }
  Matrix pinv(n, n);
  for (Index j = 0; j < n; ++j) {
    auto x = solve(p, SparseVec::unit(j));
    if (!x) throw Error("random_basis_change: singular matrix");
    pinv.set_column(j, *x);
  }
  return {p, pinv};
}

namespace {

DGLAMorphism identity_of(const DGLA& g) { return {g, g, Matrix::identity(g.dim())}; }

DGLAMorphism sl2_span_into_gl2() {
  HomDGLA gl2 = hom_dgla(Complex::zero_differential(GradedSpace({{0, {"v1", "v2"}}})));
  Matrix a(2, 2), b(2, 2);
  a.set(0, 1, 1);
  b.set(0, 0, 1);
  b.set(1, 1, -1);
  Matrix chi(gl2.dgla.dim(), 2);
  chi.set_column(0, gl2.element(a));
  chi.set_column(1, gl2.element(b));
  return {sl2_span(), gl2.dgla, chi};
}

DGLAMorphism unit_into_tensor(const DGLA& g, const CDGA& a) {
  TensorDGLA t = tensor(g, a);
  Matrix chi(t.dgla.dim(), g.dim());
  for (Index i = 0; i < g.dim(); ++i) chi.set(t.index.at({i, a.unit}), i, 1);
  return {g, t.dgla, chi};
}

DGLAMorphism augmentation(const DGLA& g, const CDGA& a) {
  TensorDGLA t = tensor(g, a);
  Matrix chi(g.dim(), t.dgla.dim());
  for (Index i = 0; i < g.dim(); ++i) chi.set(i, t.index.at({i, a.unit}), 1);
  return {t.dgla, g, chi};
}

DGLAMorphism hom_conjugation(const Complex& v, const Matrix& g, const Matrix& ginv) {
  HomDGLA h = hom_dgla(v);
  Matrix chi(h.dgla.dim(), h.dgla.dim());
  for (Index k = 0; k < h.dgla.dim(); ++k) {
    chi.set_column(k, h.element(g * h.matrix(SparseVec::unit(k)) * ginv));
  }
  return {h.dgla, h.dgla, chi};
}

DGLAMorphism dual_number_rescaling(const Rational& c) {
  TensorDGLA t = tensor(two_dim_nonabelian(), dual_numbers());
  Matrix chi(t.dgla.dim(), t.dgla.dim());
  for (Index k = 0; k < t.dgla.dim(); ++k) chi.set(k, k, t.factors[k].second == 1 ? c : Rational(1));
  return {t.dgla, t.dgla, chi};
}

DGLAMorphism unit_into_hom(const Complex& v) {
  HomDGLA h = hom_dgla(v);
  DGLA k(Complex::zero_differential(GradedSpace({{0, {"u"}}})));
  Matrix chi(h.dgla.dim(), 1);
  chi.set_column(0, h.element(Matrix::identity(v.space.dim())));
  return {k, h.dgla, chi};
}

Complex acyclic_pair() {
  GradedSpace v({{0, {"a"}}, {1, {"b"}}});
  Matrix d(2, 2);
  d.set(1, 0, 1);
  return Complex(v, d);
}

DGLAMorphism conjugated(const DGLAMorphism& f, std::mt19937_64& rng) {
  const BasisChange p = random_basis_change(f.source.space(), rng);
  const BasisChange q = random_basis_change(f.target.space(), rng);
  return {conjugate(f.source, p.p, p.pinv), conjugate(f.target, q.p, q.pinv), q.p * f.map * p.pinv};
}

SampleMorphism pick(std::size_t which, std::mt19937_64& rng) {
  switch (which) {
    case 0:
      return {"identity of Hom(acyclic pair)", identity_of(hom_dgla(acyclic_pair()).dgla)};
    case 1:
      return {"span(A,B) into gl(2)", sl2_span_into_gl2()};
    case 2:
      return {"g into g⊗Λ(e), |e|=1", unit_into_tensor(two_dim_nonabelian(), exterior_cdga(1))};
    case 3:
      return {"augmentation g⊗Λ(u) → g, |u|=-1", augmentation(two_dim_nonabelian(), exterior_cdga(-1))};
    case 4: {
      Complex v = Complex::zero_differential(GradedSpace({{0, {"v0"}}, {1, {"v1"}}}));
      Matrix g(2, 2), ginv(2, 2);
      const Rational a = Rational(1 + static_cast<int>(rng() % 3)), b = Rational(-1 - static_cast<int>(rng() % 2));
      g.set(0, 0, a);
      g.set(1, 1, b);
      ginv.set(0, 0, 1 / a);
      ginv.set(1, 1, 1 / b);
      return {"automorphism of Hom(K ⊕ K[-1])", hom_conjugation(v, g, ginv)};
    }
    case 5: {
      Rational c = random_small(rng, 3);
      if (c == 0) c = 2;
      return {"g⊗K[ε] with ε ↦ cε", dual_number_rescaling(c)};
    }
    case 6:
      return {"identity of span(A,B)", identity_of(sl2_span())};
    default:
      return {"K into Hom(acyclic pair)", unit_into_hom(acyclic_pair())};
  }
}

}  // namespace

SampleMorphism random_dgla_morphism(std::mt19937_64& rng) {
  SampleMorphism s = pick(rng() % 8, rng);
  s.chi = conjugated(s.chi, rng);
  return s;
}

SampleMorphism random_injective_morphism(std::mt19937_64& rng) {
  // Pool members that are injective and injective in cohomology.
  static const std::size_t injective[] = {0, 1, 2, 4, 5, 6};
  SampleMorphism s = pick(injective[rng() % 6], rng);
  s.chi = conjugated(s.chi, rng);
  return s;
}

}  // namespace deforma
