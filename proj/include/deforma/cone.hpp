#pragma once

// The L∞ structure on the mapping cone Tot(χ^Δ)^i = L^i ⊕ M^{i-1} of a DGLA
// morphism χ: L → M. With q_k the symmetric brackets on the shifted cone:
//   q_1 = -μ_1,  μ_1(l,m) = (dl, χ(l) - dm),
//   q_2(x,y) = (-1)^{|x|} μ_2(x,y),
//   μ_2 = ([l_1,l_2], ½[m_1,χ(l_2)] + (-1)^{|l_1|}/2 [χ(l_1),m_2]),
//   q_n(m_1,...,m_{n-1},l) = s_n (-1)^{Σ|m_i|} B_{n-1}/(n-1)!
//                             Σ_σ ε(σ) [m_σ(1),[...,[m_σ(n-1), χ(l)]...]]   (n ≥ 3),
// where |m_i| is the degree in M and ε is the Koszul sign on those degrees.
// The signs s_n are calibrated by QQ = 0 (see SIGNS.md).

#include <optional>
#include <vector>

#include "deforma/dgla.hpp"
#include "deforma/linfty.hpp"
#include "deforma/transfer.hpp"

namespace deforma {

struct ConeData {
  DGLAMorphism chi;
  LInftyStructure brackets;
  std::vector<Index> l_index;  // L basis -> cone basis
  std::vector<Index> m_index;  // M basis -> cone basis

  const GradedSpace& space() const { return brackets.space(); }
  Complex complex() const { return Complex(brackets.space(), -1 * brackets.q1()); }
};

/// Cone space with labels "0:<l>" and "1:<m>", in the order used by Tot.
GradedSpace cone_space(const GradedSpace& l, const GradedSpace& m, std::vector<Index>* l_index,
                       std::vector<Index>* m_index);

ConeData build_cone(const DGLAMorphism& chi, unsigned cutoff = 5);

/// Sign s_n of the arity-n cone bracket (n ≥ 3), calibrated by QQ = 0.
int cone_sign(unsigned n);

/// The nested sum Σ_σ ε(σ)[m_σ(1),[...,χ(l)]] for cone basis elements given as
/// (m_1, ..., m_{n-1}, l); zero unless exactly one input comes from L.
SparseVec cone_nested_sum(const ConeData& c, const Tuple& inputs);

struct JacobiatorWitness {
  bool nonzero = false;
  Tuple inputs;
  SparseVec value;
  std::string description;
};

/// Jacobiator of μ_2 alone on the cone: the arity-3 coefficient of QQ when only
/// q_1 and q_2 are kept.
JacobiatorWitness mu2_jacobiator(const ConeData& c);

/// span(A, B) ⊂ sl(2) with [B, A] = 2A and the identity morphism on it.
DGLAMorphism sl2_identity();

struct Sl2Report {
  ConeData cone;
  JacobiatorWitness jacobiator;
  Report completed;  // check_linfty of the μ_3-completed structure
};
Sl2Report sl2_failure_witness(unsigned cutoff = 4);

struct Prop34Data {
  Matrix retraction;                 // π: M → L, a chain map with π χ = Id
  std::vector<SparseVec> complement; // basis of V = ker π
  GradedSpace h;                     // cohomology of V[-1]
  Matrix f;                          // H → cone, h ↦ (0, g(h))
  LInftyMorphism morphism;           // f as a linear L∞ morphism from abelian H
  Certificate certificate;
};

/// Requires χ injective and injective in cohomology; throws Error with a rank
/// witness otherwise.
Prop34Data prop34_construct(const DGLAMorphism& chi, const ConeData& cone);

struct Example35Data {
  std::vector<SparseVec> complement;  // V with W = U ⊕ V
  SubDGLA stabilizer;                 // {f | f(U) ⊂ U}
  HomDGLA hom;                        // Hom*(W,W)
  std::vector<SparseVec> k;           // basis of K = {f | f(W) ⊂ V, f(V) = 0}
  DGLAMorphism chi;                   // stabilizer → Hom*(W,W)
};

Example35Data example35_complement(const Complex& w, const std::vector<SparseVec>& u);

}  // namespace deforma
