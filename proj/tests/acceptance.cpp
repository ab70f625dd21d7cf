// Acceptance suite: one line per criterion. The report file carries only the
// mathematical outcome so that reruns can be compared byte for byte; timings go
// to stdout.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "deforma/cartan.hpp"
#include "deforma/cone.hpp"
#include "deforma/deformation.hpp"
#include "deforma/samples.hpp"
#include "deforma/toric.hpp"
#include "oracles.hpp"

using namespace deforma;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

class Tally {
 public:
  void expect(bool cond, const std::string& what) {
    ++checks_;
    if (!cond && first_.empty()) first_ = what;
    failed_ += !cond;
  }
  Outcome outcome(const std::string& detail) const {
    std::ostringstream os;
    os << detail << "; " << checks_ - failed_ << "/" << checks_ << " checks exact";
    if (!first_.empty()) os << "; first failure: " << first_;
    return {failed_ == 0 && checks_ > 0, os.str()};
  }

 private:
  std::size_t checks_ = 0, failed_ = 0;
  std::string first_;
};

std::string first(const Report& r) { return r.failures.empty() ? std::string() : r.failures.front(); }

std::string dims_string(const std::map<int, std::size_t>& m) {
  std::ostringstream os;
  os << "{";
  for (auto it = m.begin(); it != m.end(); ++it) os << (it == m.begin() ? "" : ",") << it->first << ":" << it->second;
  return os.str() + "}";
}

bool small_side(const DGLA& l) {
  if (l.dim() > 4) return false;
  for (int d : l.space().support())
    if (d < -1 || d > 2) return false;
  return true;
}

Outcome cone_validity() {
  Tally t;
  std::mt19937_64 rng(1);
  std::ostringstream names;
  for (int k = 0; k < 5; ++k) {
    const SampleMorphism s = random_dgla_morphism(rng);
    names << (k ? "," : "") << s.name;
    t.expect(small_side(s.chi.source) && small_side(s.chi.target), s.name + ": size or degree bound");
    const ConeData c = build_cone(s.chi, 4);
    const Report r = check_linfty(c.brackets, 4);
    t.expect(r.ok(), s.name + ": " + first(r));
  }
  return t.outcome("morphisms " + names.str() + ", arities 1-4");
}

Outcome sl2_example() {
  Tally t;
  const Sl2Report r = sl2_failure_witness(4);
  t.expect(r.jacobiator.nonzero, "mu2 Jacobiator vanishes");
  t.expect(r.completed.ok(), first(r.completed));
  return t.outcome("witness " + r.jacobiator.description);
}

Outcome transfer() {
  Tally t;
  std::mt19937 rng(21);
  std::mt19937_64 rng64(21);
  std::size_t coefficients = 0, nonzero = 0;
  for (int trial = 0; trial < 5; ++trial) {
    LInftyStructure l;
    if (trial < 2) {
      const DGLA g = transfer_witness_dgla();
      const BasisChange b = random_basis_change(g.space(), rng64);
      l = dgla_to_linfty(conjugate(g, b.p, b.pinv), 4);
    } else if (trial == 2) {
      l = dgla_to_linfty(hom_dgla(oracle::random_complex(rng, 3, -1, 1)).dgla, 4);
    } else {
      l = build_cone(random_dgla_morphism(rng64).chi, 4).brackets;
    }
    l.set_cutoff(4);
    const CohomologySplitting s = cohomology_splitting(Complex(l.space(), l.q1()));
    const Contraction c = contraction_from_splitting(s);
    const TransferResult r = homotopy_transfer(l, c, 4);
    const Report a = check_linfty(r.transferred, 4);
    t.expect(a.ok(), "transferred: " + first(a));
    const Report m = check_linfty_morphism(r.inclusion, 3);
    t.expect(m.ok(), "inclusion: " + first(m));
    for (const auto& tup : symmetric_basis(c.h, 3)) {
      const SparseVec expected = oracle::tree_sum_arity3(l, c, tup);
      t.expect(r.transferred.q(tup) == expected, "tree-sum mismatch");
      coefficients += c.h.dim();
      nonzero += !expected.empty();
    }
  }
  return t.outcome("5 inputs, " + std::to_string(coefficients) + " arity-3 coefficients compared, " +
                   std::to_string(nonzero) + " nonzero outputs");
}

DGLA field() { return DGLA(Complex::zero_differential(GradedSpace({{0, {"k"}}}))); }

void tw_identities(Tally& t, const ThomWhitney& tw, unsigned p, std::size_t& elements) {
  const Complex& c = tw.tot().complex;
  const std::vector<int> degs = c.space.support();
  for (int deg = degs.front() - 1; deg <= degs.back(); ++deg) {
    for (const TWElement& x : tw.basis(deg, p)) {
      ++elements;
      const TWElement dx = tw.d(x);
      const TWElement hx = tw.homotopy(x);
      t.expect(tw.check_compatible(hx).ok(), "h leaves Tot_TW");
      TWElement lhs = tw.whitney(tw.integrate(x));
      tw.axpy(lhs, -1, x);
      TWElement rhs = tw.homotopy(dx);
      tw.axpy(rhs, 1, tw.d(hx));
      t.expect(tw.equal(lhs, rhs), "EI - Id != hd + dh at " + tw.to_string(x));
    }
  }
  for (Index i = 0; i < c.space.dim(); ++i) {
    const SparseVec e = SparseVec::unit(i);
    t.expect(tw.integrate(tw.whitney(e)) == e, "IE != Id");
  }
}

Matrix induced_level(const GradedSpace& src, const GradedSpace& tgt, const DGLAMorphism& chi) {
  Matrix out(tgt.dim(), src.dim());
  for (Index i = 0; i < src.dim(); ++i) {
    const std::string& lab = src.label(i);
    const std::size_t dot = lab.rfind('.');
    const std::string simplex = lab.substr(0, dot);
    const Index x = chi.source.space().index_of(lab.substr(dot + 1));
    for (const auto& [y, c] : chi.map.column(x)) out.add(tgt.index_of(simplex + "." + chi.target.space().label(y)), i, c);
  }
  return out;
}

Outcome whitney() {
  Tally t;
  std::size_t elements = 0;
  tw_identities(t, ThomWhitney(cech_diagram(constant_cover(field(), 4, false))), 3, elements);
  tw_identities(t, ThomWhitney(cech_diagram(constant_cover(heisenberg(), 3, true))), 3, elements);
  std::mt19937_64 rng(17);
  tw_identities(t, ThomWhitney(chi_delta(random_dgla_morphism(rng).chi)), 3, elements);
  std::size_t natural = 0;
  for (int k = 0; k < 2; ++k) {
    const SampleMorphism s = random_dgla_morphism(rng);
    SemicosimplicialMorphism f;
    f.source = cech_diagram(constant_cover(s.chi.source, 3, true));
    f.target = cech_diagram(constant_cover(s.chi.target, 3, true));
    for (unsigned n = 0; n < f.source.levels.size(); ++n)
      f.maps.push_back(induced_level(f.source.levels[n].space(), f.target.levels[n].space(), s.chi));
    t.expect(check_semicosimplicial_morphism(f).ok(), s.name + ": not a morphism");
    const ThomWhitney a(f.source), b(f.target);
    const Matrix tf = tot_map(f);
    for (int deg = -1; deg <= 2; ++deg) {
      for (const auto& x : a.basis(deg, 2)) {
        const TWElement fx = tw_map(f, x);
        t.expect(b.integrate(fx) == tf.apply(a.integrate(x)), s.name + ": I not natural");
        t.expect(b.equal(b.homotopy(fx), tw_map(f, a.homotopy(x))), s.name + ": h not natural");
        ++natural;
      }
    }
    for (Index i = 0; i < a.tot().complex.space.dim(); ++i)
      t.expect(b.equal(b.whitney(tf.column(i)), tw_map(f, a.whitney(SparseVec::unit(i)))), s.name + ": E not natural");
  }
  return t.outcome("N <= 3, p <= 3, " + std::to_string(elements) + " basis elements, " + std::to_string(natural) +
                   " naturality elements");
}

Outcome theorem52() {
  Tally t;
  const SemicosimplicialObject g = cech_diagram(constant_cover(sl2(), 3, true), 2);
  const Theorem52Report r = theorem52_compare(g, ArtinianAlgebra::truncated(4), 200, 52);
  t.expect(r.samples == 200, "sample count");
  t.expect(r.ok(), r.witnesses.empty() ? "disagreement" : r.witnesses.front());
  // q3 only contributes from weight 4 of the ring on; over t^5 it is needed
  TotTilde tilde(g);
  const LInftyStructure full = tilde.structure(4, 1);
  LInftyStructure no3(full.space(), 4);
  for (unsigned k : {1u, 2u, 4u})
    for (const auto& [tup, v] : full.find_bracket(k)->entries()) no3.bracket(k).set(tup, v);
  const ArtinianAlgebra t5 = ArtinianAlgebra::truncated(5);
  std::mt19937_64 rng(5);
  int with = 0, without = 0;
  for (int s = 0; s < 10; ++s) {
    const ExtVec gamma = level_to_tot(tilde.tot(), 1, random_cocycle(g, t5, rng));
    with += check_mc_linfty(full, t5, gamma);
    without += check_mc_linfty(no3, t5, gamma);
  }
  t.expect(with == 10, "t^5 cocycle not MC");
  t.expect(without < 10, "q3 never needed over t^5");
  std::ostringstream os;
  os << "sl2 on 3 opens, t^4: " << r.samples << " samples, " << r.cocycles << " cocycles, " << r.mc << " MC, "
     << r.disagreements << " disagreements; t^5: " << with << "/10 MC with q3, " << without << "/10 without";
  return t.outcome(os.str());
}

Outcome cartan() {
  Tally t;
  const ChartCartanReport p1 = check_toric_cartan(p1_cover(), 2);
  const ChartCartanReport p2 = check_toric_cartan(p2_cover(), 1);
  t.expect(p1.report.ok(), "P1: " + first(p1.report));
  t.expect(p2.report.ok(), "P2: " + first(p2.report));
  // Torus fields keep weights, so their contraction on box-truncated forms is exact.
  std::size_t extended = 0;
  for (const ToricCover& c : {p1_cover(), p2_cover()}) {
    const SemicosimplicialContraction sc = contraction_pairing(cech_theta(c, 0), cech_omega(c, -1, 1));
    const Report levels = check_semicosimplicial_contraction(sc, true);
    t.expect(levels.ok(), c.name + " levelwise: " + first(levels));
    for (const ContractionPairing& p : sc.levels) {
      const InducedCartan ic = induced_cartan(p);
      for (const CDGA& a : {exterior_cdga(1), polynomial_forms(1)}) {
        const CartanReport r = check_cartan(tensor_extend_cartan(ic.cartan, a).cartan);
        t.expect(r.report.ok(), c.name + " tensor: " + first(r.report));
        ++extended;
      }
    }
    const TWContraction tw(sc);
    std::vector<TWElement> xs, zs;
    for (int deg = -1; deg <= 0; ++deg)
      for (auto& e : tw.lie().basis(deg, 1)) xs.push_back(e);
    for (int deg = 0; deg <= static_cast<int>(2 * c.dimension); ++deg)
      for (auto& e : tw.complex().basis(deg, 1)) zs.push_back(e);
    const Report r = tw.check(xs, zs);
    t.expect(r.ok(), c.name + " Thom-Whitney: " + first(r));
    extended += xs.size() * zs.size();
  }
  return t.outcome("chart triples P1 " + std::to_string(p1.triples) + ", P2 " + std::to_string(p2.triples) +
                   "; extensions " + std::to_string(extended));
}

Outcome cohomology() {
  Tally t;
  std::ostringstream os;
  auto expect = [&](const std::string& name, const CohomologyTable& c, std::map<int, std::size_t> want) {
    t.expect(c.stable, name + " not box-stable");
    t.expect(c.dims == want, name + " = " + dims_string(c.dims));
    os << name << " " << dims_string(c.dims) << (c.stable ? " stable; " : " unstable; ");
  };
  const ToricCover p1 = p1_cover(), p2 = p2_cover();
  expect("P1 Theta", toric_cohomology(p1, SheafKind::Theta, 0, 1), {{0, 3}});
  expect("P1 O", toric_cohomology(p1, SheafKind::Forms, 0, 1), {{0, 1}});
  expect("P1 Omega1", toric_cohomology(p1, SheafKind::Forms, 1, 1), {{1, 1}});
  expect("P1 deRham", toric_cohomology(p1, SheafKind::Forms, -1, 1), {{0, 1}, {2, 1}});
  expect("P2 Theta", toric_cohomology(p2, SheafKind::Theta, 0, 1), {{0, 8}});
  return t.outcome(os.str() + "boxes 1 and 2");
}

Outcome hodge() {
  Tally t;
  const HodgeReport r = hodge_injectivity_check(p1_cover(), 1);
  t.expect(r.injective, "H(Omega^1) -> H_DR not injective");
  t.expect(r.quotient_injective, "H(O) -> H(Omega*/Omega^1) not injective");
  return t.outcome("P1: H(Omega^1) " + dims_string(r.top) + " into H_DR " + dims_string(r.de_rham));
}

Outcome certificates() {
  Tally t;
  std::mt19937_64 rng(34);
  std::ostringstream names;
  for (int k = 0; k < 5; ++k) {
    const SampleMorphism s = random_injective_morphism(rng);
    names << (k ? "," : "") << s.name;
    const Prop34Data p = prop34_construct(s.chi, build_cone(s.chi, 4));
    t.expect(p.certificate.verdict == Verdict::Yes, s.name + ": prop34 " + p.certificate.reason);
    const Certificate c = lemma_113_certify(p.morphism, p.certificate);
    t.expect(c.verdict == Verdict::Yes, s.name + ": " + c.reason);
  }
  const Certificate no = certify_quasi_abelian(dgla_to_linfty(sl2()), 4);
  t.expect(no.verdict == Verdict::No, "sl2: " + to_string(no.verdict));
  return t.outcome("YES on " + names.str() + "; sl2 " + to_string(no.verdict));
}

Outcome rigidity() {
  Tally t;
  const ToricObject th = cech_theta(p1_cover(), 3);
  t.expect(check_box_lie(th, 1).ok(), "box 3 not exact for weight 1");
  const ArtinianAlgebra a = ArtinianAlgebra::truncated(3);
  std::mt19937_64 rng(10);
  int trivialized = 0;
  for (int k = 0; k < 30; ++k) {
    const ExtVec x = random_box_element(th, 1, a, 1, rng);
    t.expect(z1sc_check(th.object, a, x), "sample is not a cocycle");
    const GaugeResult g = h1sc_equiv(th.object, a, x, ExtVec{});
    t.expect(g.equivalent, g.reason);
    if (g.equivalent) {
      t.expect(gauge_sc(th.object, a, g.witness, x).empty(), "witness does not trivialize");
      ++trivialized;
    }
  }
  return t.outcome("P1 over t^3: " + std::to_string(trivialized) + "/30 cocycles gauge-trivial");
}

Outcome obstructions() {
  Tally t;
  std::mt19937_64 rng(63);
  const std::vector<ArtinianAlgebra> algebras{ArtinianAlgebra::truncated(3), ArtinianAlgebra::truncated(4),
                                              ArtinianAlgebra::parse("k[t1,t2]/(t1^2, t2^2)")};
  std::size_t instances = 0, defects = 0;
  for (int trial = 0; trial < 25; ++trial) {
    const SampleMorphism s = random_injective_morphism(rng);
    const ConeData cone = build_cone(s.chi, 3);
    const Prop34Data p34 = prop34_construct(s.chi, cone);
    t.expect(p34.certificate.verdict == Verdict::Yes, s.name + ": target not certified");
    const TransferResult mm = minimal_model(cone.brackets, 3);
    const LInftyMorphism id = identity_morphism(cone.brackets);
    const Complex acyclic(make_space({{0, "u0"}, {1, "u1"}, {1, "w1"}, {2, "w2"}}), [] {
      Matrix d(4, 4);
      d.set(1, 0, 1);
      d.set(3, 2, 1);
      return d;
    }());
    const DGLA end = hom_dgla(acyclic).dgla;
    const BasisChange bc = random_basis_change(end.space(), rng);
    const LInftyStructure v = dgla_to_linfty(conjugate(end, bc.p, bc.pinv), 3);
    const LInftyMorphism zero = linear_morphism(v, cone.brackets, Matrix(cone.space().dim(), v.space().dim()));
    for (const LInftyMorphism* g : {&p34.morphism, &mm.inclusion, &id, &zero}) {
      const ArtinianAlgebra& a = algebras[(trial + instances) % algebras.size()];
      const SmallExtension e = small_extension(a, a.dim() - 1);
      const auto x = random_mc(g->source, e.b, rng);
      t.expect(x.has_value(), s.name + ": no MC element over B");
      if (!x) continue;
      const ObstructionReport r = obstruction_kernel_check(*g, p34.certificate, e, *x);
      t.expect(r.ok() && r.pushed.empty(), s.name + ": obstruction survives");
      defects += !r.defect.empty();
      ++instances;
    }
  }
  return t.outcome(std::to_string(instances) + " instances, " + std::to_string(defects) +
                   " nonzero obstruction cocycles, all pushed to zero");
}

struct Criterion {
  int number;
  double budget;
  std::function<Outcome()> run;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, 60, cone_validity}, {2, 5, sl2_example},   {3, 60, transfer},   {4, 30, whitney},
      {5, 120, theorem52},    {6, 60, cartan},       {7, 60, cohomology}, {8, 10, hodge},
      {9, 30, certificates},  {10, 60, rigidity},    {11, 60, obstructions}};
  return all;
}

std::string line(int n, const Outcome& o) {
  return "criterion " + std::to_string(n) + ": " + (o.pass ? "PASS" : "FAIL") + "  " + o.detail;
}

Outcome guarded(const Criterion& c) {
  try {
    return c.run();
  } catch (const std::exception& e) {
    return {false, std::string("exception: ") + e.what()};
  }
}

}  // namespace

int main(int argc, char** argv) {
  std::string report_path;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::string(argv[i]) == "--report") report_path = argv[i + 1];

  std::string report;
  bool all = true;
  for (const Criterion& c : criteria()) {
    const auto start = std::chrono::steady_clock::now();
    const Outcome o = guarded(c);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_budget = secs <= c.budget;
    all = all && o.pass && in_budget;
    report += line(c.number, o) + "\n";
    char timing[96];
    std::snprintf(timing, sizeof timing, "  (%.2f s, budget %.0f s%s)", secs, c.budget, in_budget ? "" : ", OVER");
    std::cout << line(c.number, o) << timing << std::endl;
  }

  std::string rerun;
  for (const Criterion& c : criteria()) rerun += line(c.number, guarded(c)) + "\n";
  const Outcome det{rerun == report, "second run of criteria 1-11 " +
                                         std::string(rerun == report ? "byte-identical" : "differs") + " (" +
                                         std::to_string(report.size()) + " bytes)"};
  all = all && det.pass;
  report += line(12, det) + "\n";
  std::cout << line(12, det) << std::endl;

  if (!report_path.empty()) {
    std::ofstream out(report_path, std::ios::binary);
    out << report;
  }
  return all ? 0 : 1;
}
