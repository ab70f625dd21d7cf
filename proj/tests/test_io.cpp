#include <doctest.h>

#include "deforma/io.hpp"
#include "deforma/samples.hpp"

using namespace deforma;
using io::Json;

namespace {

std::string error_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST_CASE("rationals") {
  CHECK(io::rational_from("3/6", "") == Rational(1, 2));
  CHECK(io::rational_from("-4", "") == -4);
  CHECK(io::rational_from(7, "") == 7);
  CHECK(io::rational_to(Rational(-2, 3)) == "-2/3");
  CHECK(io::rational_to(Rational(5)) == "5/1");
  for (const char* s : {"", "1/0", "x", "1.5", "/2", "1e3"}) CHECK_THROWS_AS(io::rational_from(s, "/q"), InputError);
}

TEST_CASE("round trips") {
  SUBCASE("DGLA") {
    const DGLA l = tensor(sl2(), exterior_cdga(1)).dgla;
    const DGLA back = io::dgla_from(io::dgla_to(l), "");
    CHECK(back.space() == l.space());
    CHECK(back.differential() == l.differential());
    CHECK(back.structure_constants() == l.structure_constants());
  }
  SUBCASE("L∞ with higher brackets") {
    const ConeData c = build_cone(sl2_identity(), 4);
    REQUIRE(c.brackets.max_arity() == 3);
    const LInftyStructure back = io::linfty_from(io::linfty_to(c.brackets), "", 4);
    CHECK(back.space() == c.space());
    for (unsigned k = 1; k <= 3; ++k) CHECK(back.find_bracket(k)->entries() == c.brackets.find_bracket(k)->entries());
    CHECK(check_linfty(back, 4).ok());
  }
  SUBCASE("semicosimplicial") {
    const SemicosimplicialObject s = cech_diagram(constant_cover(two_dim_nonabelian(), 3, true), 2);
    const SemicosimplicialObject back = io::semicosimplicial_from(io::semicosimplicial_to(s), "");
    REQUIRE(back.levels.size() == 3);
    CHECK(back.lie);
    for (unsigned n = 1; n < 3; ++n)
      for (unsigned k = 0; k <= n; ++k) CHECK(back.coface(n, k) == s.coface(n, k));
    CHECK(tot(back).complex.differential == tot(s).complex.differential);
  }
  SUBCASE("cover") {
    const ToricCover c = io::cover_from(io::cover_to(p2_cover()), "");
    CHECK(c.dimension == 2);
    CHECK(c.charts.size() == 3);
    CHECK(c.charts[2].exponents == p2_cover().charts[2].exponents);
    CHECK(io::cover_from(Json{{"builtin", "torus3"}}, "").dimension == 3);
  }
  SUBCASE("Artinian coefficients") {
    const ArtinianAlgebra a = ArtinianAlgebra::parse("k[t1,t2]/(t1^2, t2^2)");
    const GradedSpace v = sl2().space();
    ExtVec x{{*a.find({1, 0}), SparseVec::unit(0)}, {*a.find({1, 1}), SparseVec::unit(2, Rational(-1, 3))}};
    CHECK(io::ext_from(io::ext_to(x, v, a), v, a, "") == x);
  }
}

TEST_CASE("errors carry locations") {
  const Json sl = io::dgla_to(sl2());
  Json j = sl;
  j["bracket"][1]["out"] = Json{{"Q", "1"}};
  CHECK(error_of([&] { io::dgla_from(j, ""); }) == "/bracket/1/out: unknown basis label \"Q\"");
  j = sl;
  j["components"]["x"] = Json::array();
  CHECK(error_of([&] { io::dgla_from(j, ""); }).starts_with("/components/x:"));
  j = sl;
  j["differential"]["blocks"]["0"] = Json::array({Json::array({"1"})});
  CHECK(error_of([&] { io::dgla_from(j, ""); }).starts_with("/differential/blocks/0:"));
  Json s = io::semicosimplicial_to(cech_diagram(constant_cover(sl2(), 2, true), 1));
  s["cofaces"][1].erase(1);
  CHECK(error_of([&] { io::semicosimplicial_from(s, ""); }) == "/cofaces/1: expected 2 cofaces");
  Json c = io::cover_to(p1_cover());
  c["charts"][1]["coordinates"][0]["monomial"] = Json::array({2});
  CHECK(error_of([&] { io::cover_from(c, ""); }).starts_with("/charts:"));
  CHECK(error_of([&] { io::parse("{\"a\": [1,}", "x.json"); }).starts_with("x.json: malformed JSON at byte"));
  Json l{{"components", {{"1", {"a"}}}}, {"brackets", {{{"arity", 2}, {"terms", {{{"in", {"a", "a"}}, {"out", {{"a", "1"}}}}}}}}}};
  CHECK(error_of([&] { io::linfty_from(l, "", 3); }).starts_with("/brackets/0/terms/0/out:"));
}
