#pragma once

// Finite-dimensional Z-graded vector spaces over Q, graded maps, complexes and
// deterministic cohomology splittings.

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "deforma/sparse.hpp"

namespace deforma {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised for malformed or inconsistent input (exit code 2 at the CLI).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Basis of a graded space. Basis elements are ordered by degree and, inside a
/// degree, by insertion order; the global position is the Index used by every
/// vector and matrix on this space. Labels are unique across the whole space.
class GradedSpace {
 public:
  GradedSpace() = default;
  explicit GradedSpace(const std::map<int, std::vector<std::string>>& components);

  std::size_t dim() const { return degrees_.size(); }
  std::size_t dim(int degree) const;
  int degree(Index i) const { return degrees_.at(i); }
  const std::string& label(Index i) const { return labels_.at(i); }
  /// First global index of the given degree (== dim() past the end).
  Index offset(int degree) const;
  std::vector<int> support() const;
  std::optional<Index> find(const std::string& label) const;
  Index index_of(const std::string& label) const;
  std::map<int, std::vector<std::string>> components() const;

  /// V[n]: the element of degree d in V has degree d - n in V[n].
  GradedSpace shifted(int n) const;

  friend bool operator==(const GradedSpace& a, const GradedSpace& b) {
    return a.degrees_ == b.degrees_ && a.labels_ == b.labels_;
  }

 private:
  std::vector<int> degrees_;
  std::vector<std::string> labels_;
  std::map<std::string, Index> lookup_;
};

/// Assembles a graded space from (degree, label) pairs in any order; the
/// resulting index of each pair is returned through `positions`.
GradedSpace make_space(const std::vector<std::pair<int, std::string>>& elements,
                       std::vector<Index>* positions = nullptr);

/// Linear map of fixed degree between graded spaces.
struct GradedMap {
  GradedSpace source;
  GradedSpace target;
  int degree = 0;
  Matrix matrix;  // target.dim() x source.dim()

  GradedMap() = default;
  GradedMap(GradedSpace src, GradedSpace tgt, int deg, Matrix m);

  static GradedMap zero(const GradedSpace& src, const GradedSpace& tgt, int deg);
  static GradedMap identity(const GradedSpace& v);

  /// Block from source degree d to target degree d + degree, as a dense array.
  std::vector<std::vector<Rational>> block(int source_degree) const;
  SparseVec apply(const SparseVec& x) const { return matrix.apply(x); }
};

/// Composition g∘f; degrees add.
GradedMap compose(const GradedMap& g, const GradedMap& f);

/// Throws InputError unless every nonzero entry of m maps degree d to d + deg.
void require_degree(const GradedSpace& src, const GradedSpace& tgt, int deg, const Matrix& m,
                    const std::string& what);

struct Complex {
  GradedSpace space;
  Matrix differential;  // degree +1, square zero

  Complex() = default;
  /// Validates degree and d∘d = 0.
  Complex(GradedSpace v, Matrix d);

  static Complex zero_differential(const GradedSpace& v);
};

/// V[n]^i = V^{n+i}, d_{V[n]} = (-1)^n d_V.
Complex shift(const Complex& c, int n);

/// Per-degree dimension of H^*(C).
std::map<int, std::size_t> cohomology_dims(const Complex& c);

enum class PivotOrder { Forward, Reverse };

/// Homotopy retract of a complex onto its cohomology.
///   π∘ι = id_H,  ι∘π - id = h∘d + d∘h,  d∘ι = 0,
/// with side conditions h∘h = 0, h∘ι = 0, π∘h = 0.
struct CohomologySplitting {
  Complex complex;
  GradedSpace cohomology;  // labels "h<degree>_<k>"
  Matrix projection;       // H x C
  Matrix inclusion;        // C x H
  Matrix homotopy;         // C x C, degree -1

  /// Empty string when all identities hold, otherwise a description of the first failure.
  std::string verify() const;
};

/// Deterministic splitting by Gaussian elimination. Forward pivots on the
/// lowest index; Reverse processes basis vectors in the opposite order, giving an
/// independent second splitting used for invariance checks.
CohomologySplitting cohomology_splitting(const Complex& c, PivotOrder order = PivotOrder::Forward);

/// Whether the chain map f: A -> B (degree 0) is injective on cohomology.
bool injective_in_cohomology(const Complex& a, const Complex& b, const Matrix& f);

/// Given homogeneous vectors spanning a subcomplex S of C with H(S) → H(C)
/// injective, returns homogeneous vectors spanning a subcomplex V with
/// C = S ⊕ V. Returns nothing when the cohomology map is not injective; throws
/// InputError when S is not a subcomplex.
struct ComplementData {
  std::vector<SparseVec> complement;   // basis of V
  std::vector<SparseVec> cohomology;   // cocycles of V representing a basis of H(V)
};
std::optional<ComplementData> complement_subcomplex(const Complex& c, const std::vector<SparseVec>& sub);

/// Coordinates of the class of a cocycle in the splitting's cohomology basis.
SparseVec cohomology_class(const CohomologySplitting& s, const SparseVec& cocycle);

}  // namespace deforma
