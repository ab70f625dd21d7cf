#pragma once

// Differential graded Lie algebras with sparse structure constants, the
// endomorphism DGLA of a complex, Maurer-Cartan elements and the gauge action.

#include <map>
#include <utility>
#include <vector>

#include "deforma/artinian.hpp"
#include "deforma/graded.hpp"
#include "deforma/report.hpp"

namespace deforma {

class DGLA {
 public:
  DGLA() = default;
  explicit DGLA(Complex c) : complex_(std::move(c)), rows_(complex_.space.dim()) {}

  /// Sets [e_i, e_j] = v and [e_j, e_i] by graded skew-symmetry.
  void set_bracket(Index i, Index j, const SparseVec& v);
  /// Sets only the ordered entry; used by parsers so that check_dgla can see
  /// inconsistent input.
  void set_ordered(Index i, Index j, const SparseVec& v);
  bool has_ordered(Index i, Index j) const;

  const Complex& complex() const { return complex_; }
  const GradedSpace& space() const { return complex_.space; }
  std::size_t dim() const { return complex_.space.dim(); }
  int degree(Index i) const { return complex_.space.degree(i); }

  SparseVec bracket(Index i, Index j) const;
  SparseVec bracket(const SparseVec& x, const SparseVec& y) const;
  SparseVec d(const SparseVec& x) const { return complex_.differential.apply(x); }
  const Matrix& differential() const { return complex_.differential; }
  /// Nonzero ordered structure constants.
  std::vector<std::pair<std::pair<Index, Index>, SparseVec>> structure_constants() const;
  bool is_abelian() const;

 private:
  Complex complex_;
  std::vector<std::map<Index, SparseVec>> rows_;
};

/// Axioms with basis witnesses: degree of the bracket, skew-symmetry, Jacobi, Leibniz.
Report check_dgla(const DGLA& l);

struct DGLAMorphism {
  DGLA source;
  DGLA target;
  Matrix map;  // target.dim() x source.dim(), degree 0
};

Report check_dgla_morphism(const DGLAMorphism& f);

/// Hom*(V,V) with [f,g] = fg - (-1)^{|f||g|} gf and d f = [d_V, f].
struct HomDGLA {
  Complex v;
  DGLA dgla;
  std::vector<std::pair<Index, Index>> entry;  // basis element -> (row, column) of V
  std::map<std::pair<Index, Index>, Index> position;

  /// Coordinates of a homogeneous endomorphism given as a matrix on V.
  SparseVec element(const Matrix& m) const;
  Matrix matrix(const SparseVec& x) const;
};

HomDGLA hom_dgla(const Complex& v);

/// dx + ½[x,x] = 0 for x ∈ L^1 ⊗ m_A. Throws InputError on degree mismatch.
bool check_mc_dgla(const DGLA& l, const ArtinianAlgebra& a, const ExtVec& x);
ExtVec mc_defect_dgla(const DGLA& l, const ArtinianAlgebra& a, const ExtVec& x);

/// e^a ∗ x = x + Σ_n [a,-]^n/(n+1)! ([a,x] - da). Rejects non-MC x.
ExtVec gauge_act(const DGLA& l, const ArtinianAlgebra& a, const ExtVec& g, const ExtVec& x);

/// Graded commutative algebra with differential, given by structure constants.
struct CDGA {
  Complex complex;
  std::map<std::pair<Index, Index>, SparseVec> product;  // both orders stored
  Index unit = 0;

  const GradedSpace& space() const { return complex.space; }
  SparseVec multiply(Index a, Index b) const;
  SparseVec multiply(const SparseVec& x, const SparseVec& y) const;
  /// Sets ab and ba = (-1)^{|a||b|} ab.
  void set_product(Index a, Index b, const SparseVec& v);
};

/// Unit, graded commutativity, associativity and the Leibniz rule.
Report check_cdga(const CDGA& a);
CDGA ground_field_cdga();

/// L ⊗ A with d(x⊗a) = dx⊗a + (-1)^{|x|} x⊗da and
/// [x⊗a, y⊗b] = (-1)^{|a||y|} [x,y]⊗ab. Basis index of x_i⊗a_j is returned by `index`.
struct TensorDGLA {
  DGLA dgla;
  std::vector<std::pair<Index, Index>> factors;  // basis element -> (i, j)
  std::map<std::pair<Index, Index>, Index> index;
};
TensorDGLA tensor(const DGLA& l, const CDGA& a);

/// Sub-DGLA spanned by homogeneous vectors; the columns of `inclusion` are the
/// spanning vectors. Throws InputError when the span is not closed under d and
/// the bracket.
struct SubDGLA {
  DGLA dgla;
  Matrix inclusion;
};
SubDGLA subalgebra(const DGLA& m, const std::vector<SparseVec>& basis, const std::vector<std::string>& labels);

/// Isomorphic copy transported along the change of basis p (with inverse pinv).
DGLA conjugate(const DGLA& l, const Matrix& p, const Matrix& pinv);

ExtVec ext_bracket(const DGLA& l, const ArtinianAlgebra& a, const ExtVec& x, const ExtVec& y);

/// Throws InputError unless every coefficient lies in m_A and has the given degree.
void require_ext(const GradedSpace& v, const ExtVec& x, int degree, const std::string& what);

}  // namespace deforma
