#pragma once

// Local Artinian algebras k[t_1..t_m]/I with I a monomial ideal, and vectors
// with coefficients in them.

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "deforma/sparse.hpp"

namespace deforma {

using Exponents = std::vector<unsigned>;

class ArtinianAlgebra {
 public:
  ArtinianAlgebra() = default;
  /// Every variable needs a pure power among the generators, otherwise the
  /// quotient is infinite-dimensional and InputError is raised.
  ArtinianAlgebra(std::vector<std::string> variables, std::vector<Exponents> ideal);

  /// "k[t1,t2]/(t1^2, t1*t2, t2^3)" or the shorthand "t^4" for k[t]/(t^4).
  static ArtinianAlgebra parse(std::string_view text);
  /// k[t]/(t^n)
  static ArtinianAlgebra truncated(unsigned n, const std::string& variable = "t");

  /// Basis monomials ordered by total degree, then lexicographically; index 0 is 1.
  std::size_t dim() const { return basis_.size(); }
  const Exponents& monomial(std::size_t i) const { return basis_.at(i); }
  unsigned weight(std::size_t i) const;
  std::optional<std::size_t> find(const Exponents& e) const;
  /// Basis index of the product, or nothing when it lies in the ideal.
  std::optional<std::size_t> product(std::size_t a, std::size_t b) const { return table_.at(a).at(b); }
  /// Smallest N with m_A^N = 0.
  unsigned nilpotency() const { return nilpotency_; }
  const std::vector<std::string>& variables() const { return variables_; }
  std::string name(std::size_t i) const;
  std::optional<std::size_t> find_name(std::string_view name) const;
  std::string spec() const;

  friend bool operator==(const ArtinianAlgebra& a, const ArtinianAlgebra& b) {
    return a.variables_ == b.variables_ && a.basis_ == b.basis_;
  }

 private:
  std::vector<std::string> variables_;
  std::vector<Exponents> ideal_;
  std::vector<Exponents> basis_;
  std::map<Exponents, std::size_t> lookup_;
  std::vector<std::vector<std::optional<std::size_t>>> table_;
  unsigned nilpotency_ = 1;
};

/// Element of V ⊗ A: coefficient vector per basis monomial of A.
using ExtVec = std::map<std::size_t, SparseVec>;

void ext_axpy(ExtVec& y, const Rational& c, const ExtVec& x);
ExtVec ext_scale(const Rational& c, const ExtVec& x);
ExtVec ext_sum(const ExtVec& a, const ExtVec& b);
ExtVec ext_diff(const ExtVec& a, const ExtVec& b);
bool ext_is_zero(const ExtVec& x);
void ext_normalize(ExtVec& x);
/// Applies a linear map coefficientwise.
ExtVec ext_apply(const Matrix& m, const ExtVec& x);
ExtVec ext_map(const ExtVec& x, const std::function<SparseVec(const SparseVec&)>& f);
/// Whether every coefficient lies in the maximal ideal.
bool in_maximal_ideal(const ExtVec& x);
/// Keeps the monomials of weight < n.
ExtVec truncate_weight(const ArtinianAlgebra& a, const ExtVec& x, unsigned n);
/// Part of exact weight n.
ExtVec weight_part(const ArtinianAlgebra& a, const ExtVec& x, unsigned n);

/// Extension of a multilinear map on V (A is concentrated in degree 0, so no
/// signs arise): f(x_1⊗a_1, ..., x_k⊗a_k) = f(x_1, ..., x_k)⊗a_1...a_k.
ExtVec ext_multilinear(const ArtinianAlgebra& a, const std::vector<const ExtVec*>& args,
                       const std::function<SparseVec(const std::vector<const SparseVec*>&)>& f);

}  // namespace deforma
