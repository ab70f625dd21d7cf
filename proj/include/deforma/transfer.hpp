#pragma once

// Homotopy transfer of L∞ structures along a contraction (π, ι, h) with
// h q_1 + q_1 h = ιπ - Id, via the Merkulov recursion
//   P_n(c_1..c_n) = Σ_{partitions into k ≥ 2 blocks} ε q_k(f(B_1), ..., f(B_k)),
//   f_1 = ι,  f_n = h P_n,  transferred bracket = π P_n.
// The recursion is generic over the source so that Thom-Whitney algebras can
// be transferred without being tabulated.

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "deforma/combinatorics.hpp"
#include "deforma/linfty.hpp"

namespace deforma {

/// Source concept:
///   using Element;
///   Element zero() const;
///   void axpy(Element& y, const Rational& c, const Element& x) const;
///   bool is_zero(const Element& x) const;
///   unsigned max_arity() const;
///   Element q(unsigned k, const std::vector<const Element*>& args) const;
///   Element homotopy(const Element& x) const;
///   SparseVec project(const Element& x) const;
///   Element include(Index i) const;
template <class Source>
class MerkulovTransfer {
 public:
  using Element = typename Source::Element;

  /// `h` is the graded space of the target (degrees unshifted).
  MerkulovTransfer(const Source& src, const GradedSpace& h) : src_(src), degrees_(h.dim()) {
    for (Index i = 0; i < h.dim(); ++i) degrees_[i] = h.degree(i) - 1;
  }

  /// P_n on a sorted basis tuple of H.
  Element p(const Tuple& c) {
    Element out = src_.zero();
    const std::size_t n = c.size();
    if (n < 2) return out;
    std::vector<int> degs(n);
    for (std::size_t i = 0; i < n; ++i) degs[i] = degrees_[c[i]];
    for (const auto& part : partitions(n)) {
      const unsigned k = static_cast<unsigned>(part.size());
      if (k < 2 || k > src_.max_arity()) continue;
      std::vector<const Element*> args;
      bool zero = false;
      for (const auto& block : part) {
        Tuple sub;
        for (std::size_t b : block) sub.push_back(c[b]);
        const Element& fb = f(sub);
        if (src_.is_zero(fb)) {
          zero = true;
          break;
        }
        args.push_back(&fb);
      }
      if (zero) continue;
      Element term = src_.q(k, args);
      src_.axpy(out, koszul_sign(concatenate(part), degs), term);
    }
    return out;
  }

  /// Components of ι∞.
  const Element& f(const Tuple& c) {
    auto it = f_cache_.find(c);
    if (it != f_cache_.end()) return it->second;
    Element v = c.size() == 1 ? src_.include(c[0]) : src_.homotopy(p(c));
    return f_cache_.emplace(c, std::move(v)).first->second;
  }

  /// Transferred bracket on a sorted basis tuple.
  SparseVec bracket(const Tuple& c) {
    if (c.size() == 1) {
      const Element& i = f(c);
      return src_.project(src_.q(1, {&i}));
    }
    return src_.project(p(c));
  }

  /// Coefficient of P_n, exposed for tests.
  const Source& source() const { return src_; }

 private:
  const std::vector<Partition>& partitions(std::size_t n) {
    auto it = partitions_.find(n);
    if (it == partitions_.end()) it = partitions_.emplace(n, set_partitions(n)).first;
    return it->second;
  }

  const Source& src_;
  std::vector<int> degrees_;
  std::map<Tuple, Element> f_cache_;
  std::map<std::size_t, std::vector<Partition>> partitions_;
};

/// Explicit contraction data on a tabulated L∞ algebra.
struct Contraction {
  GradedSpace h;
  Matrix projection;  // H x V
  Matrix inclusion;   // V x H
  Matrix homotopy;    // V x V, degree -1, h q_1 + q_1 h = ιπ - Id
};

/// The contraction determined by a cohomology splitting of (V, d = -q_1).
Contraction contraction_from_splitting(const CohomologySplitting& s);

/// Empty when h q_1 + q_1 h = ιπ - Id and the degree constraints hold,
/// otherwise a witness.
std::string check_contraction(const LInftyStructure& l, const Contraction& c);

struct TransferResult {
  LInftyStructure transferred;
  LInftyMorphism inclusion;  // ι∞ : transferred → source
};

/// Throws Error with a witness when the homotopy identity fails.
TransferResult homotopy_transfer(const LInftyStructure& l, const Contraction& c, unsigned cutoff);

/// Transfer to H(V, q_1) along the deterministic splitting.
TransferResult minimal_model(const LInftyStructure& l, unsigned cutoff,
                             PivotOrder order = PivotOrder::Forward);

enum class Verdict { Yes, No, Unknown };
std::string to_string(Verdict v);

struct Certificate {
  Verdict verdict = Verdict::Unknown;
  std::string reason;
  std::vector<std::string> chain;  // witnesses accumulated by lemma_113_certify
};

/// YES when the minimal model is provably abelian, NO when the binary
/// cohomology bracket is nonzero, UNKNOWN otherwise.
Certificate certify_quasi_abelian(const LInftyStructure& l, unsigned cutoff = 5);

/// YES for the source of f when f is an L∞ morphism into a YES-certified
/// target and f_1 is injective in cohomology. Throws Error otherwise.
Certificate lemma_113_certify(const LInftyMorphism& f, const Certificate& target);

/// Whether f_1 is injective on H(q_1).
bool injective_in_cohomology(const LInftyMorphism& f);

}  // namespace deforma
