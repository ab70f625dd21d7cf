#include <doctest.h>

#include <random>

#include "deforma/cone.hpp"
#include "deforma/samples.hpp"
#include "deforma/simplicial.hpp"
#include "oracles.hpp"

using namespace deforma;

namespace {

DGLA field() { return DGLA(Complex::zero_differential(GradedSpace({{0, {"k"}}}))); }

// Iterated integral over {t_i ≥ 0, Σ t_i ≤ 1}, innermost variable last, with
// polynomials stored densely.
using Poly = std::map<Exponents, Rational>;

Poly poly_mul(const Poly& a, const Poly& b) {
  Poly out;
  for (const auto& [ea, ca] : a)
    for (const auto& [eb, cb] : b) {
      Exponents e = ea;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
      out[e] += ca * cb;
    }
  return out;
}

Rational iterated_integral(Poly p, unsigned n) {
  for (unsigned v = n; v-- > 0;) {
    // ∫_0^{1 - t_1 - ... - t_v} dt_{v+1}
    Poly upper;
    Exponents e0(n, 0);
    upper[e0] = 1;
    for (unsigned i = 0; i < v; ++i) {
      Exponents e(n, 0);
      e[i] = 1;
      upper[e] = -1;
    }
    Poly next;
    for (const auto& [e, c] : p) {
      const unsigned a = e[v];
      Exponents rest = e;
      rest[v] = 0;
      Poly term;
      term[rest] = c / Rational(a + 1);
      for (unsigned k = 0; k <= a; ++k) term = poly_mul(term, upper);
      for (const auto& [f, d] : term) next[f] += d;
    }
    p = next;
  }
  Rational s = 0;
  for (const auto& [e, c] : p) s += c;
  return s;
}

PolyForm random_form(std::mt19937& rng, unsigned n, unsigned p) {
  const auto keys = apl_basis(n, p);
  PolyForm f(n);
  for (int t = 0; t < 4; ++t) f.add(keys[rng() % keys.size()], oracle::small_rational(rng));
  return f;
}

SemicosimplicialObject constant_k_line() {
  SemicosimplicialObject s;
  s.levels = {field(), field()};
  s.cofaces = {{}, {Matrix::identity(1), Matrix::identity(1)}};
  return s;
}

// All identities on a basis of Tot_TW up to polynomial degree p.
void check_tw_identities(const ThomWhitney& tw, unsigned p) {
  const Complex& c = tw.tot().complex;
  std::vector<int> degs = c.space.support();
  if (degs.empty()) return;
  for (int deg = degs.front() - 1; deg <= degs.back(); ++deg) {
    const auto basis = tw.basis(deg, p);
    for (const TWElement& x : basis) {
      REQUIRE(tw.check_compatible(x).ok());
      const TWElement dx = tw.d(x);
      CHECK(tw.check_compatible(dx).ok());
      CHECK(tw.integrate(dx) == c.differential.apply(tw.integrate(x)));
      const TWElement hx = tw.homotopy(x);
      CHECK(tw.check_compatible(hx).ok());
      TWElement lhs = tw.whitney(tw.integrate(x));
      tw.axpy(lhs, -1, x);
      TWElement rhs = tw.homotopy(dx);
      tw.axpy(rhs, 1, tw.d(hx));
      CHECK_MESSAGE(tw.equal(lhs, rhs), tw.to_string(x));
    }
  }
  for (Index i = 0; i < c.space.dim(); ++i) {
    const SparseVec e = SparseVec::unit(i);
    const TWElement ex = tw.whitney(e);
    CHECK(tw.check_compatible(ex).ok());
    CHECK(tw.integrate(ex) == e);
    CHECK(tw.equal(tw.d(ex), tw.whitney(c.differential.apply(e))));
  }
}

Matrix induced_level(const GradedSpace& src, const GradedSpace& tgt, const DGLA& l, const DGLA& m, const Matrix& chi) {
  Matrix out(tgt.dim(), src.dim());
  for (Index i = 0; i < src.dim(); ++i) {
    const std::string& lab = src.label(i);
    const std::size_t dot = lab.rfind('.');
    const std::string simplex = lab.substr(0, dot);
    const Index x = l.space().index_of(lab.substr(dot + 1));
    for (const auto& [y, c] : chi.column(x)) out.add(tgt.index_of(simplex + "." + m.space().label(y)), i, c);
  }
  return out;
}

}  // namespace

TEST_CASE("simplex integrals") {
  CHECK(integrate(PolyForm::differential(1, 1)) == 1);
  CHECK(integrate(PolyForm::variable(1, 1) * PolyForm::differential(1, 1)) == Rational(1, 2));
  CHECK(integrate(PolyForm::variable(2, 1) * PolyForm::differential(2, 1)) == 0);
  for (unsigned n = 1; n <= 3; ++n) {
    const std::uint32_t top = (1u << n) - 1;
    for (const auto& key : apl_basis(n, 4)) {
      if (key.second != top) continue;
      Poly p;
      p[key.first] = 1;
      CHECK(integrate(PolyForm::monomial(n, key.first, key.second)) == iterated_integral(p, n));
    }
  }
}

TEST_CASE("face maps") {
  CHECK(apl_face(1, PolyForm::variable(1, 1)).is_zero());
  CHECK(apl_face(0, PolyForm::variable(1, 1)) == PolyForm::constant(0, 1));
  CHECK_THROWS_AS(apl_face(3, PolyForm::variable(2, 1)), InputError);
  std::mt19937 rng(3);
  for (int trial = 0; trial < 60; ++trial) {
    const unsigned n = 1 + trial % 3;
    const PolyForm f = random_form(rng, n, 3);
    CHECK(f.d().d().is_zero());
    for (unsigned k = 0; k <= n; ++k) CHECK(apl_face(k, f.d()) == apl_face(k, f).d());
    // Stokes: ∫ dω = Σ (-1)^k ∫ δ^k ω
    Rational boundary = 0;
    for (unsigned k = 0; k <= n; ++k) boundary += (k % 2 == 0 ? 1 : -1) * integrate(apl_face(k, f));
    CHECK(integrate(f.d()) == boundary);
  }
}

TEST_CASE("Whitney forms and the Dupont contraction") {
  for (unsigned k = 0; k <= 3; ++k) {
    std::vector<unsigned> all;
    for (unsigned v = 0; v <= k; ++v) all.push_back(v);
    CHECK(integrate(whitney_form(k, all)) == 1);
  }
  CHECK(dupont(PolyForm::constant(1, 5), 1).is_zero());
  for (unsigned n = 1; n <= 3; ++n) {
    for (const auto& key : apl_basis(n, 3)) {
      const PolyForm w = PolyForm::monomial(n, key.first, key.second);
      CHECK(dupont(w.d(), n) + dupont(w, n).d() == w - whitney_projection(w, n));
    }
  }
}

TEST_CASE("semicosimplicial checks") {
  CHECK(check_semicosimplicial(constant_object(sl2(), true)).ok());
  std::mt19937_64 rng(2);
  for (int t = 0; t < 5; ++t) CHECK(check_semicosimplicial(chi_delta(random_dgla_morphism(rng).chi)).ok());
  SemicosimplicialObject s = cech_diagram(constant_cover(heisenberg(), 3, true));
  CHECK(check_semicosimplicial(s).ok());
  CHECK(s.truncation() == 2);
  SemicosimplicialObject bad = s;
  bad.cofaces[2][1] = 2 * bad.cofaces[2][1];
  const Report r = check_semicosimplicial(bad);
  CHECK_FALSE(r.ok());
  CHECK_THROWS_AS(tot(bad), InputError);

  CechData missing = constant_cover(field(), 2, false);
  missing.restrictions.erase(missing.restrictions.begin());
  CHECK_THROWS_AS(cech_diagram(missing), InputError);
  CHECK(cech_diagram(constant_cover(sl2(), 1, true)).levels.size() == 1);
}

TEST_CASE("Tot of χ^Δ is the mapping cone") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 6; ++t) {
    const SampleMorphism s = random_dgla_morphism(rng);
    INFO(s.name);
    const TotData d = tot(chi_delta(s.chi));
    const ConeData c = build_cone(s.chi, 2);
    CHECK(d.complex.space == c.space());
    CHECK(d.complex.differential == c.complex().differential);
  }
  const DGLA g = sl2();
  const TotData single = tot(constant_object(g, true));
  CHECK(single.complex.space.dim() == g.dim());
  const TotData two = tot(cech_diagram(constant_cover(g, 2, true)));
  const auto h = cohomology_dims(two.complex);
  CHECK(h.at(0) == g.dim());
  CHECK(oracle::betti(two.complex, 1) == 0);
  const TotData pt = tot(cech_diagram(constant_cover(field(), 3, false)));
  CHECK(oracle::betti(pt.complex, 0) == 1);
  CHECK(oracle::betti(pt.complex, 1) == 0);
  CHECK(oracle::betti(pt.complex, 2) == 0);
}

TEST_CASE("Thom-Whitney totalization of a constant line") {
  const ThomWhitney tw(constant_k_line());
  const auto basis = tw.basis(0, 3);
  // c plus a cubic x(t) with x(0) = x(1) = c: five unknowns, two conditions.
  CHECK(basis.size() == 3);
  for (const auto& x : basis) {
    const Rational c = x.levels[0].count(0) ? integrate(x.levels[0].at(0)) : Rational(0);
    const PolyForm x1 = x.levels[1].count(0) ? x.levels[1].at(0) : PolyForm(1);
    std::vector<PolyForm> at0{PolyForm(0)}, at1{PolyForm::constant(0, 1)};
    CHECK(integrate(x1.pullback(at0)) == c);
    CHECK(integrate(x1.pullback(at1)) == c);
  }
  check_tw_identities(tw, 3);
  const ThomWhitney single(constant_object(sl2(), true));
  CHECK(single.basis(0, 3).size() == 3);
  check_tw_identities(single, 3);
}

TEST_CASE("Whitney and Dupont identities up to level 3") {
  check_tw_identities(ThomWhitney(cech_diagram(constant_cover(field(), 4, false))), 3);
  check_tw_identities(ThomWhitney(cech_diagram(constant_cover(heisenberg(), 3, true))), 3);
  std::mt19937_64 rng(21);
  for (int t = 0; t < 3; ++t) {
    const SampleMorphism s = random_dgla_morphism(rng);
    INFO(s.name);
    check_tw_identities(ThomWhitney(chi_delta(s.chi)), 3);
  }
  // A level with a nonzero differential, on a three-set cover.
  const DGLA acyclic = hom_dgla(Complex(GradedSpace({{0, {"x"}}, {1, {"y"}}}), [] {
                         Matrix d(2, 2);
                         d.set(1, 0, 1);
                         return d;
                       }())).dgla;
  check_tw_identities(ThomWhitney(cech_diagram(constant_cover(acyclic, 3, true))), 2);
}

TEST_CASE("brackets of compatible sequences are compatible") {
  const ThomWhitney tw(cech_diagram(constant_cover(sl2(), 3, true)));
  std::mt19937 rng(4);
  const auto b0 = tw.basis(0, 2);
  const auto b1 = tw.basis(1, 2);
  REQUIRE(!b0.empty());
  REQUIRE(!b1.empty());
  for (int t = 0; t < 20; ++t) {
    const TWElement& x = b0[rng() % b0.size()];
    const TWElement& y = (t % 2 ? b1 : b0)[rng() % (t % 2 ? b1.size() : b0.size())];
    const TWElement xy = tw.bracket(x, y);
    CHECK(tw.check_compatible(xy).ok());
    // d is a derivation
    TWElement lhs = tw.d(xy);
    TWElement rhs = tw.bracket(tw.d(x), y);
    tw.axpy(rhs, tw.degree(x) % 2 == 0 ? 1 : -1, tw.bracket(x, tw.d(y)));
    CHECK(tw.equal(lhs, rhs));
  }
}

TEST_CASE("tensoring with the constant sequence 1") {
  const CechData gc = constant_cover(sl2(), 3, true);
  const CechData kc = constant_cover(field(), 3, false);
  const ThomWhitney g(cech_diagram(gc));
  const ThomWhitney k(cech_diagram(kc));
  SparseVec ones;
  const GradedSpace& k0 = k.object().levels[0].space();
  for (Index i = 0; i < k0.dim(); ++i) ones.add(k.tot().index[0][i], 1);
  const TWElement one = k.whitney(ones);
  for (std::size_t n = 0; n < one.levels.size(); ++n)
    for (const auto& [i, f] : one.levels[n]) CHECK(f == PolyForm::constant(static_cast<unsigned>(n), 1));
  auto simplex = [](const std::string& label) { return label.substr(0, label.rfind('.')); };
  auto phi = [&](unsigned n, Index i, Index j) {
    const std::string& a = g.object().levels[n].space().label(i);
    const std::string& b = k.object().levels[n].space().label(j);
    return simplex(a) == simplex(b) ? SparseVec::unit(i) : SparseVec();
  };
  for (const auto& x : g.basis(1, 2)) {
    const TWElement y = tw_tensor_phi(g, x, k, one, phi);
    CHECK(g.equal(y, x));
  }
  std::mt19937 rng(9);
  const auto kb = k.basis(0, 2);
  const auto gb = g.basis(0, 1);
  for (int t = 0; t < 10; ++t) {
    const TWElement y = tw_tensor_phi(g, gb[rng() % gb.size()], k, kb[rng() % kb.size()], phi);
    CHECK(g.check_compatible(y).ok());
  }
}

TEST_CASE("naturality of I, E and h") {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 4; ++t) {
    const SampleMorphism s = random_dgla_morphism(rng);
    INFO(s.name);
    SemicosimplicialMorphism f;
    f.source = cech_diagram(constant_cover(s.chi.source, 3, true));
    f.target = cech_diagram(constant_cover(s.chi.target, 3, true));
    for (unsigned n = 0; n < f.source.levels.size(); ++n)
      f.maps.push_back(induced_level(f.source.levels[n].space(), f.target.levels[n].space(), s.chi.source,
                                     s.chi.target, s.chi.map));
    REQUIRE(check_semicosimplicial_morphism(f).ok());
    const ThomWhitney a(f.source), b(f.target);
    const Matrix tf = tot_map(f);
    for (int deg = -1; deg <= 2; ++deg) {
      for (const auto& x : a.basis(deg, 2)) {
        const TWElement fx = tw_map(f, x);
        CHECK(b.integrate(fx) == tf.apply(a.integrate(x)));
        CHECK(b.equal(b.homotopy(fx), tw_map(f, a.homotopy(x))));
      }
    }
    for (Index i = 0; i < a.tot().complex.space.dim(); ++i)
      CHECK(b.equal(b.whitney(tf.column(i)), tw_map(f, a.whitney(SparseVec::unit(i)))));
  }
}
