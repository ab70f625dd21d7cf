#include <doctest.h>

#include <random>

#include "deforma/combinatorics.hpp"
#include "deforma/graded.hpp"
#include "oracles.hpp"

using namespace deforma;

TEST_CASE("rational parsing and serialization") {
  CHECK(parse_rational("6/4") == Rational(3, 2));
  CHECK(parse_rational(" -3 ") == Rational(-3));
  CHECK(to_string(Rational(5)) == "5/1");
  CHECK(to_string(parse_rational("-2/6")) == "-1/3");
  CHECK_THROWS(parse_rational("1/0"));
  CHECK_THROWS(parse_rational("1/-2"));
  CHECK_THROWS(parse_rational("x"));
  CHECK(Rational(1, 2) + Rational(1, 3) == Rational(5, 6));
}

TEST_CASE("koszul sign small cases") {
  CHECK(koszul_sign({0, 1, 2}, {1, 1, 0}) == 1);
  CHECK(koszul_sign({1, 0}, {1, 1}) == -1);
  CHECK(koszul_sign({1, 0}, {0, 1}) == 1);
  CHECK(koszul_sign({1, 0}, {2, 3}) == 1);
  CHECK_THROWS(koszul_sign({0, 1}, {1}));
}

TEST_CASE("koszul sign agrees with adjacent transposition factorization on S4") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> deg(-2, 3);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> d(4);
    for (auto& x : d) x = deg(rng);
    for (const auto& p : permutations(4)) {
      CHECK(koszul_sign(p, d) == oracle::koszul_by_bubble_sort(p, d));
      CHECK(antisymmetric_koszul_sign(p, d) == oracle::koszul_by_bubble_sort(p, d) * oracle::sign_by_cycles(p));
    }
    // cocycle: rearranging by tau then by sigma
    for (const auto& s : permutations(4)) {
      for (const auto& t : permutations(4)) {
        Permutation st(4);
        for (std::size_t i = 0; i < 4; ++i) st[i] = t[s[i]];
        std::vector<int> dt(4);
        for (std::size_t i = 0; i < 4; ++i) dt[i] = d[t[i]];
        CHECK(koszul_sign(st, d) == koszul_sign(t, d) * koszul_sign(s, dt));
      }
    }
  }
}

TEST_CASE("unshuffles match brute force filtering") {
  CHECK(unshuffles(1, 1).size() == 2);
  CHECK(unshuffles(2, 1).size() == 3);
  CHECK(unshuffles(0, 3) == std::vector<Permutation>{{0, 1, 2}});
  for (std::size_t p = 0; p <= 6; ++p) {
    for (std::size_t q = 0; q <= 6; ++q) {
      CHECK(Rational(static_cast<long>(unshuffles(p, q).size())) == binomial(p + q, p));
    }
  }
  for (std::size_t p = 0; p <= 3; ++p) {
    for (std::size_t q = 0; q <= 3; ++q) {
      auto a = unshuffles(p, q);
      auto b = oracle::unshuffles_by_filter(p, q);
      std::sort(a.begin(), a.end());
      CHECK(a == b);
    }
  }
}

TEST_CASE("bernoulli numbers satisfy the recurrence") {
  CHECK(bernoulli(0) == 1);
  CHECK(bernoulli(1) == Rational(-1, 2));
  CHECK(bernoulli(2) == Rational(1, 6));
  CHECK(bernoulli(3) == 0);
  CHECK(bernoulli(12) == Rational(-691, 2730));
  for (unsigned n = 1; n <= 20; ++n) {
    Rational s = 0;
    for (unsigned k = 0; k <= n; ++k) s += binomial(n + 1, k) * bernoulli(k);
    CHECK(s == 0);
    if (n >= 3 && n % 2 == 1) CHECK(bernoulli(n) == 0);
  }
}

TEST_CASE("set partitions are counted by Bell numbers") {
  const std::size_t bell[] = {1, 1, 2, 5, 15, 52, 203};
  for (std::size_t n = 0; n <= 6; ++n) CHECK(set_partitions(n).size() == bell[n]);
  for (const auto& p : set_partitions(4)) {
    for (std::size_t b = 1; b < p.size(); ++b) CHECK(p[b - 1].front() < p[b].front());
  }
}

TEST_CASE("sparse elimination") {
  Matrix m(3, 3);
  m.set(0, 0, 1);
  m.set(1, 1, 2);
  m.set(0, 2, 1);
  m.set(1, 2, 2);
  CHECK(rank(m) == 2);
  auto k = kernel(m);
  REQUIRE(k.size() == 1);
  CHECK(m.apply(k[0]).empty());
  SparseVec b;
  b.set(0, 3);
  b.set(1, 4);
  auto x = solve(m, b);
  REQUIRE(x);
  CHECK(m.apply(*x) == b);
  b.set(2, 1);
  CHECK(!solve(m, b));
}

TEST_CASE("shift") {
  GradedSpace v({{0, {"a"}}, {1, {"b"}}});
  Matrix d(2, 2);
  d.set(1, 0, 1);
  Complex c(v, d);
  CHECK(shift(c, 0).space == v);
  Complex s = shift(c, 1);
  CHECK(s.space.degree(0) == -1);
  CHECK(s.differential.get(1, 0) == -1);
  Complex back = shift(s, -1);
  CHECK(back.space == v);
  CHECK(back.differential == d);
  GradedSpace p({{0, {"x"}}});
  CHECK(shift(Complex::zero_differential(p), 1).space.support() == std::vector<int>{-1});
}

TEST_CASE("cohomology splitting identities") {
  GradedSpace v({{0, {"a", "b"}}, {1, {"c"}}});
  auto z = cohomology_splitting(Complex::zero_differential(v));
  CHECK(z.cohomology.dim() == 3);
  CHECK(z.homotopy.is_zero());
  CHECK(z.inclusion == Matrix::identity(3));

  GradedSpace w({{0, {"u"}}, {1, {"v"}}});
  Matrix d(2, 2);
  d.set(1, 0, 1);
  auto acyclic = cohomology_splitting(Complex(w, d));
  CHECK(acyclic.cohomology.dim() == 0);
  CHECK(acyclic.homotopy.get(0, 1) == -1);
  CHECK(acyclic.verify().empty());

  std::mt19937 rng(11);
  for (int trial = 0; trial < 40; ++trial) {
    Complex c = oracle::random_complex(rng, 4, -1, 2);
    for (auto order : {PivotOrder::Forward, PivotOrder::Reverse}) {
      auto s = cohomology_splitting(c, order);
      CHECK(s.verify().empty());
      for (int deg = -2; deg <= 3; ++deg) {
        CHECK(s.cohomology.dim(deg) == oracle::betti(c, deg));
      }
    }
  }
}

TEST_CASE("injectivity in cohomology") {
  GradedSpace a({{0, {"a"}}});
  GradedSpace b({{0, {"b0", "b1"}}, {1, {"b2"}}});
  Matrix db(3, 3);
  db.set(2, 1, 1);
  Complex cb(b, db);
  Matrix f(3, 1);
  f.set(0, 0, 1);
  CHECK(injective_in_cohomology(Complex::zero_differential(a), cb, f));
  CHECK(!injective_in_cohomology(Complex::zero_differential(a), cb, Matrix(3, 1)));
}
