#include "deforma/transfer.hpp"

#include <algorithm>
#include <set>
#include <sstream>

namespace deforma {

namespace {

struct TableSource {
  using Element = SparseVec;
  const LInftyStructure& l;
  const Contraction& c;

  SparseVec zero() const { return {}; }
  void axpy(SparseVec& y, const Rational& a, const SparseVec& x) const { y.axpy(a, x); }
  bool is_zero(const SparseVec& x) const { return x.empty(); }
  unsigned max_arity() const { return l.max_arity(); }
  SparseVec q(unsigned k, const std::vector<const SparseVec*>& args) const { return l.q(k, args); }
  SparseVec homotopy(const SparseVec& x) const { return c.homotopy.apply(x); }
  SparseVec project(const SparseVec& x) const { return c.projection.apply(x); }
  SparseVec include(Index i) const { return c.inclusion.column(i); }
};

std::set<int> shifted_support(const GradedSpace& v) {
  std::set<int> s;
  for (int d : v.support()) s.insert(d - 1);
  return s;
}

}  // namespace

Contraction contraction_from_splitting(const CohomologySplitting& s) {
  return Contraction{s.cohomology, s.projection, s.inclusion, s.homotopy};
}

std::string check_contraction(const LInftyStructure& l, const Contraction& c) {
  const GradedSpace& v = l.space();
  try {
    require_degree(v, c.h, 0, c.projection, "projection");
    require_degree(c.h, v, 0, c.inclusion, "inclusion");
    require_degree(v, v, -1, c.homotopy, "homotopy");
  } catch (const InputError& e) {
    return e.what();
  }
  const Matrix q1 = l.q1();
  const Matrix lhs = c.homotopy * q1 + q1 * c.homotopy;
  const Matrix rhs = c.inclusion * c.projection - Matrix::identity(v.dim());
  if (!(lhs == rhs)) {
    for (Index j = 0; j < v.dim(); ++j) {
      if (!(lhs.column(j) == rhs.column(j))) return "h q1 + q1 h != ιπ - Id at " + v.label(j);
    }
  }
  if (!(c.projection * c.inclusion == Matrix::identity(c.h.dim()))) return "π ι != Id";
  return {};
}

TransferResult homotopy_transfer(const LInftyStructure& l, const Contraction& c, unsigned cutoff) {
  if (auto w = check_contraction(l, c); !w.empty()) throw Error("homotopy transfer rejected: " + w);
  TableSource src{l, c};
  MerkulovTransfer<TableSource> engine(src, c.h);
  LInftyStructure out(c.h, cutoff);
  LInftyMorphism inc{out, l, cutoff, {}};
  const auto h_support = shifted_support(c.h);
  const auto v_support = shifted_support(l.space());
  for (unsigned n = 1; n <= cutoff; ++n) {
    for (const auto& t : symmetric_basis(c.h, n)) {
      int deg = 0;
      for (Index i : t) deg += c.h.degree(i) - 1;
      if (h_support.count(deg + 1)) {
        SparseVec b = engine.bracket(t);
        if (!b.empty()) out.bracket(n).set(t, std::move(b));
      }
      if (v_support.count(deg)) {
        const SparseVec& f = engine.f(t);
        if (!f.empty()) inc.component(n).set(t, f);
      }
    }
  }
  inc.source = out;
  return {std::move(out), std::move(inc)};
}

TransferResult minimal_model(const LInftyStructure& l, unsigned cutoff, PivotOrder order) {
  const CohomologySplitting s = cohomology_splitting(Complex(l.space(), l.q1()), order);
  return homotopy_transfer(l, contraction_from_splitting(s), cutoff);
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Yes:
      return "YES";
    case Verdict::No:
      return "NO";
    default:
      return "UNKNOWN";
  }
}

namespace {

std::string tuple_labels(const GradedSpace& v, const Tuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? ", " : "") + v.label(t[i]);
  return s + ")";
}

}  // namespace

Certificate certify_quasi_abelian(const LInftyStructure& l, unsigned cutoff) {
  cutoff = std::max(cutoff, 2u);
  const CohomologySplitting s = cohomology_splitting(Complex(l.space(), l.q1()));
  const Contraction c = contraction_from_splitting(s);
  const TransferResult m = homotopy_transfer(l, c, cutoff);
  const GradedSpace& h = m.transferred.space();
  Certificate cert;
  if (const SymmetricTable* q2 = m.transferred.find_bracket(2)) {
    const auto& [in, out] = *q2->entries().begin();
    cert.verdict = Verdict::No;
    cert.reason = "binary bracket on cohomology is nonzero at " + tuple_labels(h, in);
    return cert;
  }
  if (m.transferred.max_arity() >= 2) {
    cert.reason = "higher transferred brackets are nonzero (arity " + std::to_string(m.transferred.max_arity()) +
                  "); they are not quasi-isomorphism invariants";
    return cert;
  }
  if (h.dim() == 0) {
    cert.verdict = Verdict::Yes;
    cert.reason = "acyclic: the minimal model is zero";
    return cert;
  }
  if (l.max_arity() <= 1) {
    cert.verdict = Verdict::Yes;
    cert.reason = "abelian";
    return cert;
  }
  // If every source bracket vanishes on ι(H), every P_n vanishes by induction.
  bool annihilated = true;
  for (unsigned k = 2; k <= l.max_arity() && annihilated; ++k) {
    if (!l.find_bracket(k)) continue;
    for (const auto& t : symmetric_basis(h, k)) {
      std::vector<SparseVec> imgs;
      for (Index i : t) imgs.push_back(c.inclusion.column(i));
      Args args;
      for (const auto& x : imgs) args.push_back(&x);
      if (!l.q(k, args).empty()) {
        annihilated = false;
        break;
      }
    }
  }
  if (annihilated) {
    cert.verdict = Verdict::Yes;
    cert.reason = "every bracket vanishes on the image of cohomology";
    return cert;
  }
  // Degree feasibility: a bracket of arity k on H[1] has degree Σ s_i + 1.
  int lo = 0, hi = 0;
  bool first = true;
  for (int d : h.support()) {
    lo = first ? d - 1 : std::min(lo, d - 1);
    hi = first ? d - 1 : std::max(hi, d - 1);
    first = false;
  }
  std::optional<unsigned> bound;
  if (lo >= 1) bound = static_cast<unsigned>(hi);      // arity >= max D vanishes
  if (hi <= -1) bound = static_cast<unsigned>(2 - lo);  // arity > 1 - min D vanishes
  if (bound && cutoff + 1 >= *bound) {
    cert.verdict = Verdict::Yes;
    cert.reason = "brackets vanish up to arity " + std::to_string(cutoff) + " and vanish for degree reasons from arity " +
                  std::to_string(*bound);
    return cert;
  }
  cert.reason = "brackets vanish up to arity " + std::to_string(cutoff) + " but no bound forces vanishing beyond";
  return cert;
}

bool injective_in_cohomology(const LInftyMorphism& f) {
  return injective_in_cohomology(Complex(f.source.space(), f.source.q1()), Complex(f.target.space(), f.target.q1()),
                                 f.f1());
}

Certificate lemma_113_certify(const LInftyMorphism& f, const Certificate& target) {
  if (target.verdict != Verdict::Yes) throw Error("lemma_113_certify: target is not certified quasi-abelian");
  const Report r = check_linfty_morphism(f);
  if (!r.ok()) throw Error("lemma_113_certify: not an L∞ morphism: " + r.failures.front());
  if (!injective_in_cohomology(f)) throw Error("lemma_113_certify: f_1 is not injective in cohomology");
  Certificate c;
  c.verdict = Verdict::Yes;
  c.reason = "injective in cohomology into a quasi-abelian algebra";
  c.chain = target.chain;
  c.chain.push_back("target: " + target.reason);
  c.chain.push_back("morphism checked up to arity " + std::to_string(f.cutoff));
  return c;
}

}  // namespace deforma
