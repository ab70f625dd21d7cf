#pragma once

// Polynomial differential forms. A PolyForm lives in Q[x_1..x_m] ⊗ Λ(dx_1..dx_m);
// on the standard simplex Δ_n the variables are the barycentric coordinates
// t_1..t_n, with t_0 = 1 - Σ t_i and dt_0 = -Σ dt_i eliminated.

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "deforma/artinian.hpp"
#include "deforma/rational.hpp"

namespace deforma {

class PolyForm {
 public:
  /// Monomial x^a dx_I with I encoded as a bit mask (bit i ↔ dx_{i+1}).
  using Key = std::pair<Exponents, std::uint32_t>;

  PolyForm() = default;
  explicit PolyForm(unsigned vars) : vars_(vars) {}

  static PolyForm constant(unsigned vars, const Rational& c);
  /// x_i (1-based, as t_i on a simplex).
  static PolyForm variable(unsigned vars, unsigned i);
  static PolyForm differential(unsigned vars, unsigned i);
  static PolyForm monomial(unsigned vars, Exponents a, std::uint32_t mask, const Rational& c = 1);

  unsigned vars() const { return vars_; }
  const std::map<Key, Rational>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  /// Form degree of a homogeneous form; throws on mixed degrees.
  int degree() const;
  unsigned polynomial_degree() const;

  void add(const Key& k, const Rational& c);
  PolyForm& axpy(const Rational& c, const PolyForm& x);
  PolyForm& operator+=(const PolyForm& x) { return axpy(1, x); }
  PolyForm& operator-=(const PolyForm& x) { return axpy(-1, x); }
  PolyForm& operator*=(const Rational& c);

  friend PolyForm operator+(PolyForm a, const PolyForm& b) { return a += b; }
  friend PolyForm operator-(PolyForm a, const PolyForm& b) { return a -= b; }
  friend PolyForm operator*(const Rational& c, PolyForm a) { return a *= c; }
  friend bool operator==(const PolyForm& a, const PolyForm& b) { return a.vars_ == b.vars_ && a.terms_ == b.terms_; }
  friend bool operator<(const PolyForm& a, const PolyForm& b) { return a.terms_ < b.terms_; }

  /// Wedge product.
  friend PolyForm operator*(const PolyForm& a, const PolyForm& b);
  PolyForm d() const;

  /// Pullback along x_i ↦ images[i-1] (0-forms in another set of variables).
  PolyForm pullback(const std::vector<PolyForm>& images) const;

  std::string to_string() const;

 private:
  unsigned vars_ = 0;
  std::map<Key, Rational> terms_;
};

/// t_i on Δ_n for 0 ≤ i ≤ n, including t_0 = 1 - Σ t_i.
PolyForm simplex_coordinate(unsigned n, unsigned i);
PolyForm simplex_differential(unsigned n, unsigned i);

/// δ^k: (A_PL)_n → (A_PL)_{n-1}, restriction to the face opposite vertex k.
PolyForm apl_face(unsigned k, const PolyForm& form);

/// ∫_{Δ_n}, with dt_1∧...∧dt_n integrating to 1/n!.
Rational integrate(const PolyForm& form);

/// Whitney elementary form ω_S on Δ_n, S increasing vertex list of size k+1:
/// k! Σ_j (-1)^j t_{s_j} dt_{s_0}∧...(omit j)...∧dt_{s_k}.
PolyForm whitney_form(unsigned n, const std::vector<unsigned>& s);

/// Restriction of a form on Δ_n to the face spanned by the vertices in s.
PolyForm restrict_to_face(const PolyForm& form, unsigned n, const std::vector<unsigned>& s);

/// Σ_S ω_S ∫_{Δ_S} ω|_S on a single simplex.
PolyForm whitney_projection(const PolyForm& form, unsigned n);

/// Cone homotopy towards vertex j: d h_j + h_j d = id - ev_j.
PolyForm cone_homotopy(const PolyForm& form, unsigned n, unsigned j);

/// Dupont's contraction s: d s + s d = id - Σ_S ω_S ∫_S.
PolyForm dupont(const PolyForm& form, unsigned n);

/// Basis monomials of (A_PL)_n with polynomial degree ≤ p, in a fixed order.
std::vector<PolyForm::Key> apl_basis(unsigned n, unsigned p);

}  // namespace deforma
