#pragma once

// Deformation functors over local Artinian algebras: Baker-Campbell-Hausdorff
// products, nonabelian Čech cocycles Z¹_sc and their gauge relation, and the
// L∞ algebra Tot~ obtained by transferring Tot_TW onto Tot along (I, E, h).

#include <memory>
#include <optional>
#include <random>
#include <string>

#include "deforma/simplicial.hpp"
#include "deforma/transfer.hpp"

namespace deforma {

/// log(e^x e^y) by Dynkin's formula, keeping nested brackets of length ≤ max_length
/// (default: nilpotency of m_A minus one, which is exact). x, y ∈ g^0 ⊗ m_A.
ExtVec bch(const DGLA& g, const ArtinianAlgebra& a, const ExtVec& x, const ExtVec& y,
           std::optional<unsigned> max_length = std::nullopt);

/// log(e^{∂_0 x} e^{-∂_1 x} e^{∂_2 x}) ∈ g_2 ⊗ m_A for x ∈ g_1^0 ⊗ m_A.
ExtVec z1sc_log(const SemicosimplicialObject& g, const ArtinianAlgebra& a, const ExtVec& x);
bool z1sc_check(const SemicosimplicialObject& g, const ArtinianAlgebra& a, const ExtVec& x);

/// log(e^{-∂_1 a} e^x e^{∂_0 a}) for a ∈ g_0^0 ⊗ m_A.
ExtVec gauge_sc(const SemicosimplicialObject& g, const ArtinianAlgebra& a, const ExtVec& gauge, const ExtVec& x);

struct GaugeResult {
  bool equivalent = false;
  ExtVec witness;        // a with e^{-∂_1 a} e^x e^{∂_0 a} = e^y
  unsigned order = 0;    // weight at which the linearized equation had no solution
  std::string reason;
};

/// Order-by-order search for a gauge witness. At each weight the linear
/// equation (∂_0 - ∂_1) a_w = rhs is solved with the deterministic solver; a
/// failure is reported with its weight.
GaugeResult h1sc_equiv(const SemicosimplicialObject& g, const ArtinianAlgebra& a, const ExtVec& x, const ExtVec& y);

/// Random element of Z¹_sc built weight by weight: a random weight-w part is
/// corrected by a solution of the linearized cocycle equation.
ExtVec random_cocycle(const SemicosimplicialObject& g, const ArtinianAlgebra& a, std::mt19937_64& rng, int bound = 2);
/// Random element of g_1^0 ⊗ m_A.
ExtVec random_level_element(const SemicosimplicialObject& g, unsigned level, const ArtinianAlgebra& a,
                            std::mt19937_64& rng, int bound = 2);

/// Tot_TW ⊗ A, keyed by basis monomial of A.
using TWExt = std::map<std::size_t, TWElement>;

/// Tot_TW as a source for homotopy transfer: q_1 = -d, q_2 = (-1)^{|x|}[x,y],
/// contraction (π, ι, h) = (I, E, -h_Dupont).
class TWSource {
 public:
  using Element = TWElement;
  explicit TWSource(const ThomWhitney& tw) : tw_(tw) {}

  Element zero() const { return tw_.zero(); }
  void axpy(Element& y, const Rational& c, const Element& x) const { tw_.axpy(y, c, x); }
  bool is_zero(const Element& x) const { return tw_.is_zero(x); }
  unsigned max_arity() const { return 2; }
  Element q(unsigned k, const std::vector<const Element*>& args) const;
  Element homotopy(const Element& x) const;
  SparseVec project(const Element& x) const { return tw_.integrate(x); }
  Element include(Index i) const { return tw_.whitney(SparseVec::unit(i)); }

 private:
  const ThomWhitney& tw_;
};

/// Tot~(g^Δ): the L∞ structure on Tot transferred from Tot_TW, with the
/// L∞ quasi-isomorphism E∞ into Tot_TW.
class TotTilde {
 public:
  explicit TotTilde(SemicosimplicialObject g);
  TotTilde(const TotTilde&) = delete;
  TotTilde& operator=(const TotTilde&) = delete;

  const ThomWhitney& tw() const { return *tw_; }
  const TotData& tot() const { return tw_->tot(); }
  const GradedSpace& space() const { return tw_->tot().complex.space; }

  SparseVec bracket(const Tuple& sorted);
  const TWElement& e_infinity(const Tuple& sorted);

  /// Tabulated brackets of arity ≤ cutoff; restricted to tuples of basis
  /// elements of one degree when `degree` is given (enough for MC equations).
  LInftyStructure structure(unsigned cutoff, std::optional<int> degree = std::nullopt);

  /// Σ_n E∞_n(γ^{⊙n})/n! for γ ∈ Tot^1 ⊗ m_A.
  TWExt push_mc(const ArtinianAlgebra& a, const ExtVec& gamma);
  /// dΓ + ½[Γ, Γ] in Tot_TW ⊗ A.
  TWExt tw_mc_defect(const ArtinianAlgebra& a, const TWExt& x) const;

 private:
  std::unique_ptr<ThomWhitney> tw_;
  std::unique_ptr<TWSource> source_;
  std::unique_ptr<MerkulovTransfer<TWSource>> transfer_;
};

/// x ∈ g_1 ⊗ m_A viewed in Tot^1 ⊗ m_A, scaled by `sign`.
ExtVec level_to_tot(const TotData& t, unsigned level, const ExtVec& x, int sign = 1);

struct Theorem52Report {
  std::size_t samples = 0;
  std::size_t cocycles = 0;       // elements in Z¹_sc
  std::size_t mc = 0;             // MC elements of Tot~ under the identification
  std::size_t disagreements = 0;
  int identification = 1;         // x ↦ identification · x
  std::vector<std::string> witnesses;
  bool ok() const { return disagreements == 0; }
};

/// Compares MC_{Tot~}(A) with Z¹_sc(exp g^Δ)(A) elementwise on `samples`
/// seeded elements: random cocycles, cocycles perturbed in one weight and
/// arbitrary elements, in rotation.
Theorem52Report theorem52_compare(const SemicosimplicialObject& g, const ArtinianAlgebra& a, std::size_t samples,
                                  std::uint64_t seed, int identification = 1);

}  // namespace deforma
