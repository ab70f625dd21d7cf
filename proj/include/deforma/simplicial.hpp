#pragma once

// Semicosimplicial complexes and DGLAs truncated at a level N, their total
// complex Tot and the Thom-Whitney totalization Tot_TW with the maps
//   I: Tot_TW → Tot (integration),  E: Tot → Tot_TW (Whitney forms),
//   h: Tot_TW → Tot_TW (Dupont),     IE = Id,  EI - Id = hd + dh.

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <vector>

#include "deforma/apl.hpp"
#include "deforma/dgla.hpp"
#include "deforma/report.hpp"

namespace deforma {

struct SemicosimplicialObject {
  std::vector<DGLA> levels;                  // n = 0..N
  std::vector<std::vector<Matrix>> cofaces;  // cofaces[n][k]: level n-1 → level n, k = 0..n (cofaces[0] empty)
  bool lie = false;                          // whether cofaces must preserve brackets

  unsigned truncation() const { return static_cast<unsigned>(levels.size()) - 1; }
  const Matrix& coface(unsigned n, unsigned k) const { return cofaces.at(n).at(k); }
};

/// Cosimplicial identities ∂_l∂_k = ∂_{k+1}∂_l (l ≤ k), chain maps, brackets.
Report check_semicosimplicial(const SemicosimplicialObject& s);

/// Single-level object.
SemicosimplicialObject constant_object(const DGLA& l, bool lie);
/// χ^Δ: L ⇉ M → 0 with ∂_0 = χ, ∂_1 = 0.
SemicosimplicialObject chi_delta(const DGLAMorphism& chi);

struct TotData {
  Complex complex;
  std::vector<std::vector<Index>> index;  // (level, basis) → Tot basis, labels "n:<label>"
};

/// Tot^i = ⊕_n level_n^{i-n}, with differential (-1)^n d_n + Σ_k (-1)^k ∂_k.
/// Throws InputError for an invalid object.
TotData tot(const SemicosimplicialObject& s);

struct SemicosimplicialMorphism {
  SemicosimplicialObject source;
  SemicosimplicialObject target;
  std::vector<Matrix> maps;  // level n of source → level n of target
};
Report check_semicosimplicial_morphism(const SemicosimplicialMorphism& f);
Matrix tot_map(const SemicosimplicialMorphism& f);

/// Čech diagram of a cover by `opens` open sets. `sections` is keyed by the
/// nonempty intersections (increasing index lists); `restrictions` by
/// (S, T) with S ⊂ T and |T| = |S| + 1. Level labels are "U<i_0>,...,<i_n>.<label>".
struct CechData {
  unsigned opens = 0;
  std::map<std::vector<unsigned>, DGLA> sections;
  std::map<std::pair<std::vector<unsigned>, std::vector<unsigned>>, Matrix> restrictions;
  bool lie = false;
};
SemicosimplicialObject cech_diagram(const CechData& cover, unsigned max_level = 1000);
/// Constant sheaf with value l on a cover whose intersections are all nonempty.
CechData constant_cover(const DGLA& l, unsigned opens, bool lie);

/// x_n ∈ level_n ⊗ (A_PL)_n, stored as basis index → form.
using TWComponent = std::map<Index, PolyForm>;
struct TWElement {
  std::vector<TWComponent> levels;
};

class ThomWhitney {
 public:
  /// Throws InputError for an invalid object.
  explicit ThomWhitney(SemicosimplicialObject s);

  const SemicosimplicialObject& object() const { return s_; }
  const TotData& tot() const { return tot_; }
  unsigned truncation() const { return s_.truncation(); }

  TWElement zero() const;
  void axpy(TWElement& y, const Rational& c, const TWElement& x) const;
  bool is_zero(const TWElement& x) const;
  bool equal(const TWElement& a, const TWElement& b) const;
  /// Total degree |v| + form degree of a homogeneous element.
  int degree(const TWElement& x) const;

  /// Empty report when (Id⊗δ^k)x_n = (∂_k⊗Id)x_{n-1} for all 0 ≤ k ≤ n.
  Report check_compatible(const TWElement& x) const;

  /// d(v⊗ω) = dv⊗ω + (-1)^{|v|} v⊗dω
  TWElement d(const TWElement& x) const;
  /// [v⊗ω, w⊗η] = (-1)^{|ω||w|} [v,w]⊗ωη
  TWElement bracket(const TWElement& x, const TWElement& y) const;

  /// I(v⊗ω) = (-1)^{n|v|} (∫_{Δ_n} ω) v at level n.
  SparseVec integrate(const TWElement& x) const;
  /// E(v) = (-1)^{k|v|} Σ_S ∂_S v ⊗ ω_S for v at level k.
  TWElement whitney(const SparseVec& x) const;
  /// Dupont homotopy with EI - Id = hd + dh.
  TWElement homotopy(const TWElement& x) const;

  /// Basis of the compatible sequences of the given total degree whose
  /// coefficients have polynomial degree ≤ p.
  std::vector<TWElement> basis(int degree, unsigned p) const;

  std::string to_string(const TWElement& x) const;

 private:
  const Matrix& composite(unsigned k, unsigned n, const std::vector<unsigned>& face) const;

  SemicosimplicialObject s_;
  TotData tot_;
  mutable std::map<std::tuple<unsigned, unsigned, std::vector<unsigned>>, Matrix> composites_;
};

/// Levelwise image under a semicosimplicial morphism.
TWElement tw_map(const SemicosimplicialMorphism& f, const TWElement& x);

/// Bilinear map of semicosimplicial objects φ_n: V_n × W_n → U_n applied
/// levelwise: φ(v⊗ω, w⊗η) = (-1)^{|ω||w|} φ_n(v,w)⊗ωη.
TWElement tw_tensor_phi(const ThomWhitney& v, const TWElement& x, const ThomWhitney& w, const TWElement& y,
                        const std::function<SparseVec(unsigned, Index, Index)>& phi);

}  // namespace deforma
