#pragma once

// L∞ structures as families of graded symmetric brackets q_k on V[1], checked
// through the coefficients of Q∘Q on the reduced symmetric coalgebra.

#include <functional>
#include <map>
#include <vector>

#include "deforma/artinian.hpp"
#include "deforma/dgla.hpp"
#include "deforma/graded.hpp"
#include "deforma/report.hpp"

namespace deforma {

using Tuple = std::vector<Index>;
using Args = std::vector<const SparseVec*>;

/// A graded symmetric multilinear map on V[1], stored on sorted index tuples.
/// Shifted degrees are |v| - 1 where |v| is the degree in the graded space.
class SymmetricTable {
 public:
  SymmetricTable() = default;
  /// Takes the degrees of the space on which the inputs live (unshifted).
  explicit SymmetricTable(const GradedSpace& v);

  /// Sorts the inputs and returns the Koszul sign of the sort; 0 when an odd
  /// element repeats (the product vanishes).
  int canonicalize(Tuple& inputs) const;
  void set(Tuple inputs, SparseVec out);
  void add(Tuple inputs, const SparseVec& out);
  SparseVec at(Tuple inputs) const;
  SparseVec eval(const Args& args) const;
  bool empty() const { return entries_.empty(); }
  const std::map<Tuple, SparseVec>& entries() const { return entries_; }

 private:
  std::vector<int> shifted_;
  std::map<Tuple, SparseVec> entries_;
};

/// Shifted degree |v|-1 for each basis index of a tuple.
std::vector<int> shifted_degrees(const GradedSpace& v, const Tuple& t);

/// All sorted basis tuples of length n that are nonzero in ⊙^n(V[1]).
std::vector<Tuple> symmetric_basis(const GradedSpace& v, unsigned n);

class LInftyStructure {
 public:
  LInftyStructure() = default;
  LInftyStructure(GradedSpace v, unsigned cutoff);

  const GradedSpace& space() const { return space_; }
  unsigned cutoff() const { return cutoff_; }
  void set_cutoff(unsigned c) { cutoff_ = c; }
  /// Largest arity with a nonzero bracket.
  unsigned max_arity() const;

  SymmetricTable& bracket(unsigned k);
  const SymmetricTable* find_bracket(unsigned k) const;
  SparseVec q(const Tuple& inputs) const;
  SparseVec q(unsigned k, const Args& args) const;
  /// q_1 as a matrix on V.
  Matrix q1() const;
  bool is_abelian() const { return max_arity() <= 1; }

 private:
  GradedSpace space_;
  unsigned cutoff_ = 5;
  std::map<unsigned, SymmetricTable> brackets_;
};

/// Corestriction of Q∘Q to V[1] on a basis tuple: the arity-m generalized
/// Jacobi expression Σ_k Σ_{σ∈S(k,m-k)} ε(σ) q_{m-k+1}(q_k(v_σ...), v_σ...).
SparseVec jacobi_expression(const LInftyStructure& l, const Tuple& inputs);
/// Components of Q on ⊙^n(V[1]) → ⊙(V[1]) applied to a basis tuple; each term
/// is (output vector, remaining inputs) with its sign folded in.
struct CodifferentialTerm {
  unsigned k;
  SparseVec value;
  Tuple rest;
};
std::vector<CodifferentialTerm> codifferential_coefficients(const LInftyStructure& l, const Tuple& inputs);

Report check_linfty(const LInftyStructure& l);
Report check_linfty(const LInftyStructure& l, unsigned max_arity);

/// q_1 = -d, q_2(v,w) = (-1)^{|v|}[v,w], higher brackets zero.
LInftyStructure dgla_to_linfty(const DGLA& l, unsigned cutoff = 5);

struct LInftyMorphism {
  LInftyStructure source;
  LInftyStructure target;
  unsigned cutoff = 5;
  std::map<unsigned, SymmetricTable> taylor;  // on source indices, values in target

  SymmetricTable& component(unsigned n);
  SparseVec f(const Tuple& inputs) const;
  SparseVec f(unsigned n, const Args& args) const;
  Matrix f1() const;
};

LInftyMorphism identity_morphism(const LInftyStructure& l);
/// Linear morphism with f_1 = m.
LInftyMorphism linear_morphism(const LInftyStructure& s, const LInftyStructure& t, const Matrix& m);

/// Compares the corestrictions of F∘Q_V and Q_W∘F up to the cutoff.
Report check_linfty_morphism(const LInftyMorphism& f);
Report check_linfty_morphism(const LInftyMorphism& f, unsigned max_arity);

/// Σ_j q_j(γ^{⊙j})/j! for γ ∈ V^1 ⊗ m_A.
ExtVec mc_defect_linfty(const LInftyStructure& l, const ArtinianAlgebra& a, const ExtVec& gamma);
bool check_mc_linfty(const LInftyStructure& l, const ArtinianAlgebra& a, const ExtVec& gamma);
/// Σ_n f_n(γ^{⊙n})/n!
ExtVec push_mc(const LInftyMorphism& f, const ArtinianAlgebra& a, const ExtVec& gamma);

/// Symmetric power sums Σ_j c_j q_j(γ,...,γ) for an arbitrary multilinear family.
ExtVec exponential_sum(const ArtinianAlgebra& a, const ExtVec& gamma, unsigned max_arity,
                       const std::function<SparseVec(unsigned, const Args&)>& q);

}  // namespace deforma
