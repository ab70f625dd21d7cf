#pragma once

// Covers of toric varieties by affine charts whose coordinates are Laurent
// monomials in torus coordinates z_1..z_d. Every section space is a subspace of
// the corresponding torus space, graded by the weight m ∈ Z^d:
//   vector fields  z^m θ_i       (θ_i = z_i ∂/∂z_i)
//   forms          z^m dlog z_I  (I ⊂ {1..d})
// so restrictions are inclusions and Čech differentials preserve weights.
// Sections are truncated to weights in the box [-B, B]^d; brackets and
// contractions leaving the box are dropped, which is exact on inputs whose
// combined weights stay inside.

#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "deforma/cartan.hpp"
#include "deforma/simplicial.hpp"
#include "deforma/transfer.hpp"

namespace deforma {

using Weight = std::vector<int>;

/// Affine chart with coordinates u_k = z^{a_k}; the matrix (a_k) is unimodular.
struct Chart {
  std::string name;
  std::vector<std::string> coordinates;
  std::vector<Weight> exponents;
  std::vector<bool> invertible;
};

struct ToricCover {
  std::string name;
  unsigned dimension = 0;
  std::vector<Chart> charts;
};

ToricCover projective_cover(unsigned n);  // standard charts of P^n
ToricCover p1_cover();
ToricCover p2_cover();
ToricCover torus_cover(unsigned d);
ToricCover affine_line_cover();

/// Chart of U_S = ∩_{s∈S} U_s: the chart of min S with the coordinates that
/// become units inverted. Throws InputError when the intersection is not of
/// that form.
Chart intersection_chart(const ToricCover& c, const std::vector<unsigned>& s);
/// Unimodularity and the intersection charts of all index sets.
void validate_cover(const ToricCover& c);

/// Torus element: (weight, θ index or form mask) → coefficient.
using TorusKey = std::pair<Weight, std::uint32_t>;
using TorusElement = std::map<TorusKey, Rational>;

TorusElement torus_bracket(const TorusElement& x, const TorusElement& y);
TorusElement torus_d(const TorusElement& form);
TorusElement torus_contract(const TorusElement& field, const TorusElement& form);
/// l_ξ ω = d(ξ⌟ω) + ξ⌟dω
TorusElement torus_lie(const TorusElement& field, const TorusElement& form);

enum class SheafKind { Theta, Forms };

/// Box-truncated sections on one chart: vector fields, or forms with degree in
/// [lo, hi] placed in de Rham degree (or in degree 0 when `graded` is false).
class ChartSections {
 public:
  ChartSections(const ToricCover& cover, const Chart& chart, SheafKind kind, int lo, int hi, int box, bool graded);

  std::size_t dim() const { return elements_.size(); }
  const TorusElement& element(Index i) const { return elements_.at(i); }
  const Weight& weight(Index i) const { return weights_.at(i); }
  const GradedSpace& space() const { return space_; }
  /// Coordinates of a torus element, dropping the parts whose weight leaves the
  /// box; throws Error when the rest is not a section.
  SparseVec express(const TorusElement& x) const;
  bool in_box(const Weight& m) const;
  /// The de Rham differential (zero for vector fields and ungraded forms).
  Matrix differential() const;
  /// Bracket of basis vector fields, truncated to the box.
  SparseVec bracket(Index i, Index j) const;
  DGLA dgla() const;

 private:
  SheafKind kind_;
  bool graded_;
  int box_;
  unsigned dim_;
  std::vector<TorusElement> elements_;
  std::vector<Weight> weights_;
  GradedSpace space_;
  // weight → (torus key position, basis indices) for solving
  struct Slice {
    std::vector<Index> ids;
    Eliminator elim;
  };
  std::map<Weight, Slice> by_weight_;
};

/// Semicosimplicial Čech object of truncated sections, with the torus data of
/// every basis element.
struct ToricObject {
  ToricCover cover;
  SheafKind kind = SheafKind::Theta;
  int box = 0;
  SemicosimplicialObject object;
  std::vector<std::vector<std::vector<unsigned>>> opens;  // (level, index) → S
  std::vector<std::vector<TorusElement>> torus;          // (level, index) → element
  std::vector<std::vector<Weight>> weights;
  std::map<std::vector<unsigned>, ChartSections> sections;
  std::vector<std::map<std::vector<unsigned>, std::vector<Index>>> local;  // S → level indices

  /// Largest |m_i| over the weights of a basis element.
  int weight_norm(unsigned level, Index i) const;
};

/// Vector fields. The levels carry the box-truncated brackets, but `lie` is
/// false: the truncation is a Lie algebra only on inputs staying in the box
/// (see check_box_lie).
ToricObject cech_theta(const ToricCover& c, int box);
/// p-forms in degree 0 (p ≥ 0), or the full de Rham complex (p < 0).
ToricObject cech_omega(const ToricCover& c, int p, int box);
/// Forms of degree lo..hi in their de Rham degrees; with hi < dimension this is
/// the quotient Ω*/Ω^{>hi}.
ToricObject cech_forms(const ToricCover& c, int lo, int hi, int box);

/// Jacobi and coface compatibility of the brackets on basis elements of weight
/// norm ≤ inner, which is exact when 3·inner ≤ box.
Report check_box_lie(const ToricObject& theta, int inner);

struct CohomologyTable {
  std::map<int, std::size_t> dims;
  std::map<int, std::size_t> next;  // at box + 1
  bool stable = false;
};
CohomologyTable toric_cohomology(const ToricCover& c, SheafKind kind, int p, int box);

struct HodgeReport {
  std::map<int, std::size_t> top;       // H(Ω^n)
  std::map<int, std::size_t> de_rham;   // H(Ω*)
  std::map<int, std::size_t> sub;       // H(Ω^{n-1})
  std::map<int, std::size_t> quotient;  // H(Ω*/Ω^n)
  bool injective = false;               // H(Ω^n) → H(Ω*)
  bool quotient_injective = false;      // H(Ω^{n-1}) → H(Ω*/Ω^n)
  bool higher_vanish = false;           // no Čech cohomology above degree 0
  std::vector<std::string> notes;
  bool ok() const { return injective && quotient_injective; }
};
HodgeReport hodge_injectivity_check(const ToricCover& c, int box);

/// Chartwise ξ⌟ω of Θ on Ω*, as a semicosimplicial contraction (outputs
/// leaving the box are dropped).
SemicosimplicialContraction contraction_pairing(const ToricObject& theta, const ToricObject& forms);

/// Both Cartan identities on every chart and intersection, evaluated exactly on
/// all basis pairs and forms of weight norm ≤ box, plus the filtration
/// properties i_ξ(Ω^p) ⊂ Ω^{p-1}, l_ξ(Ω^p) ⊂ Ω^p.
struct ChartCartanReport {
  Report report;
  std::size_t triples = 0;
};
ChartCartanReport check_toric_cartan(const ToricCover& c, int box);

/// Contraction map H*(Θ) → Hom*(H*(Ω^n), H*(Ω^{n-1})) through the Čech cup
/// product (ξ∪ω)_{s_0..s_{p+q}} = ξ_{s_0..s_p} ⌟ ω_{s_p..s_{p+q}}.
struct ContractionMapReport {
  std::size_t source_dim = 0;
  std::size_t rank = 0;
  std::vector<SparseVec> kernel;        // in the H*(Θ) basis
  std::vector<std::string> kernel_labels;
  bool cocycles = true;                 // cup products of cocycles were cocycles
  bool injective() const { return kernel.empty(); }
};
ContractionMapReport contraction_map(const ToricCover& c, int box);

struct BttReport {
  std::string cover;
  int box = 0;
  CohomologyTable theta;
  HodgeReport hodge;
  bool tw_consistent = false;        // IE = Id on Tot(Θ)
  bool tw_contraction = false;       // Cartan identities on Tot_TW, exact sub-box
  ChartCartanReport cartan;
  ContractionMapReport contraction;
  bool h0_bracket_nonzero = false;   // binary bracket on H^0(Θ)
  bool phi_valid = false;            // (l, i) is an L∞ morphism
  bool phi_injective = false;
  std::size_t phi_kernel = 0;
  Certificate cone_certificate;
  Certificate model;                 // for the torus Lie algebra acting on the invariant part
  Certificate verdict;               // for Tot_TW(Θ)
  bool unobstructed = false;         // H^2(Θ) = 0
  std::vector<std::string> notes;
  /// Every machinery check passed (the verdict itself may be NO or UNKNOWN).
  bool ok() const;
};

/// The assembled chain: cohomology of Θ and Ω, Hodge injectivity, Tot_TW(Θ)
/// with I, E and the extended contraction, the contraction map and its kernel,
/// and on the torus-invariant part V of Tot(Ω*) the DGLAs L ⊂ M = Hom*(V, V),
/// the cone of L → M with its complement certificate, and the (l, i) morphism
/// from the torus Lie algebra, certified through H-injectivity when it holds.
BttReport btt_pipeline(const ToricCover& c, int box);

/// Random element of level ⊗ m_A using only basis elements of weight norm ≤ inner.
ExtVec random_box_element(const ToricObject& t, unsigned level, const ArtinianAlgebra& a, int inner,
                          std::mt19937_64& rng, int bound = 2);

}  // namespace deforma
