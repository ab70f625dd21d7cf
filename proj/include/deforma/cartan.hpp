#pragma once

// Cartan homotopies i: L → M (degree -1) with l = d_M i + i d_L,
//   i_{[a,b]} = [i_a, l_b],  [i_a, i_b] = 0,
// contractions L × V → V, their extensions to L ⊗ A and to Thom-Whitney
// totalizations, the linear L∞ morphism (l, i) into a cone, and obstruction
// classes of small extensions.

#include <optional>
#include <random>

#include "deforma/cone.hpp"
#include "deforma/simplicial.hpp"

namespace deforma {

struct CartanHomotopy {
  DGLA source;
  DGLA target;
  Matrix i;  // target x source, degree -1

  /// l = d_M i + i d_L as a degree-0 map.
  Matrix l() const;
};

struct CartanReport {
  Report report;
  Matrix l;
};

/// Both identities on all basis pairs, the degree of i, and that l is a DGLA morphism.
CartanReport check_cartan(const CartanHomotopy& c);

/// ĩ(x⊗a) = i_x⊗a on L⊗A → M⊗A, so that l̃(x⊗a) = l_x⊗a.
struct TensorCartan {
  CartanHomotopy cartan;
  TensorDGLA source;
  TensorDGLA target;
};
TensorCartan tensor_extend_cartan(const CartanHomotopy& c, const CDGA& a);

/// Composition with DGLA morphisms: i' = g ∘ i ∘ f.
CartanHomotopy compose_cartan(const DGLAMorphism& g, const CartanHomotopy& c, const DGLAMorphism& f);

/// Bilinear pairing L × V → V of degree -1, stored on basis pairs.
struct ContractionPairing {
  DGLA l;
  Complex v;
  std::map<std::pair<Index, Index>, SparseVec> table;

  SparseVec apply(Index a, Index x) const;
  SparseVec apply(const SparseVec& a, const SparseVec& x) const;
};

struct InducedCartan {
  HomDGLA hom;
  CartanHomotopy cartan;  // L → Hom*(V, V), i_a(v) = a⌟v
};
InducedCartan induced_cartan(const ContractionPairing& p);
/// Empty report when the induced map is a Cartan homotopy.
Report check_contraction(const ContractionPairing& p);

/// Vector fields span(∂x, x∂x) contracting the de Rham complex of K[x] cut
/// at polynomial degree p: labels "x^k" and "x^k.dx", ∂x ⌟ x^k dx = x^k.
ContractionPairing line_contraction(unsigned p);

/// Levelwise contractions of a semicosimplicial DGLA on a semicosimplicial
/// complex with ∂_k(a⌟v) = ∂_k a ⌟ ∂_k v.
struct SemicosimplicialContraction {
  SemicosimplicialObject lie;
  SemicosimplicialObject complex;
  std::vector<ContractionPairing> levels;
};
/// Structure, degrees and coface compatibility; with `levelwise` also the
/// Cartan identities on every level.
Report check_semicosimplicial_contraction(const SemicosimplicialContraction& c, bool levelwise = true);

/// The extension to Tot_TW(L) × Tot_TW(V) → Tot_TW(V):
/// (a⊗ω)⌟(v⊗η) = (-1)^{|ω||v|} (a⌟v)⊗ωη.
class TWContraction {
 public:
  /// Throws InputError with a witness when the pairings do not commute with
  /// the cofaces; the levelwise identities are left to `check`.
  explicit TWContraction(SemicosimplicialContraction c);

  const ThomWhitney& lie() const { return lie_; }
  const ThomWhitney& complex() const { return complex_; }
  TWElement contract(const TWElement& x, const TWElement& y) const;
  /// l_x(z) = d(x⌟z) + (-1)^{|x|} x⌟dz + (dx)⌟z
  TWElement lie_derivative(const TWElement& x, const TWElement& z) const;

  /// Both Cartan identities on the given elements, plus compatibility of outputs.
  Report check(const std::vector<TWElement>& xs, const std::vector<TWElement>& zs) const;

 private:
  SemicosimplicialContraction data_;
  ThomWhitney lie_;
  ThomWhitney complex_;
};

/// Φ(a) = (φ(a), i_a) ∈ cone(χ) with χφ = l, as a linear L∞ morphism from L.
/// Throws InputError when l(L) is not contained in χ(N).
struct PhiMorphism {
  ConeData cone;
  Matrix phi;  // N x L
  LInftyMorphism morphism;
};
PhiMorphism build_phi_morphism(const CartanHomotopy& c, const DGLAMorphism& chi, unsigned cutoff = 4);

/// 0 → K·m → A → B → 0 for a monomial m of A annihilated by m_A.
struct SmallExtension {
  ArtinianAlgebra a;
  ArtinianAlgebra b;
  std::size_t kernel = 0;              // m as a basis index of A
  std::vector<std::size_t> b_to_a;     // basis of B inside A
};
SmallExtension small_extension(const ArtinianAlgebra& a, std::size_t socle);

/// Set-theoretic lift of an element over B to A.
ExtVec lift_to(const SmallExtension& e, const ExtVec& x);

struct ObstructionReport {
  SparseVec defect;        // coefficient of m in Σ q_j(x̃^j)/j!, a cocycle in V^2
  bool cocycle = false;
  SparseVec v_class;       // in H^2(V)
  SparseVec pushed;        // H^2(g)(class) in H^2(W)
  SparseVec target_class;  // class of the obstruction of g_*(x) in W
  bool contradiction = false;  // nonzero pushed class with a YES-certified target
  bool ok() const { return cocycle && !contradiction && pushed == target_class; }
};

/// Obstruction to lifting x ∈ MC_V(B) to A, pushed along g. Throws InputError
/// unless x is MC over B.
ObstructionReport obstruction_kernel_check(const LInftyMorphism& g, const Certificate& w, const SmallExtension& e,
                                           const ExtVec& x);

/// Random MC element over A built weight by weight, or nothing when some
/// weight is obstructed.
std::optional<ExtVec> random_mc(const LInftyStructure& l, const ArtinianAlgebra& a, std::mt19937_64& rng,
                                int bound = 2);

}  // namespace deforma
