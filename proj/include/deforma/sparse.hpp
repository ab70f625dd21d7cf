#pragma once

// Sparse exact vectors and column-sparse matrices over Q.

#include <cstddef>
#include <map>
#include <optional>
#include <vector>

#include "deforma/rational.hpp"

namespace deforma {

using Index = std::size_t;

class SparseVec {
 public:
  using Map = std::map<Index, Rational>;
  using const_iterator = Map::const_iterator;

  SparseVec() = default;

  static SparseVec unit(Index i, const Rational& c = 1) {
    SparseVec v;
    v.add(i, c);
    return v;
  }

  Rational get(Index i) const {
    auto it = entries_.find(i);
    return it == entries_.end() ? Rational(0) : it->second;
  }

  /// entries_[i] += c, dropping the entry when it cancels.
  void add(Index i, const Rational& c);
  void set(Index i, const Rational& c);
  /// this += c * x
  void axpy(const Rational& c, const SparseVec& x);

  SparseVec& operator+=(const SparseVec& x) {
    axpy(1, x);
    return *this;
  }
  SparseVec& operator-=(const SparseVec& x) {
    axpy(-1, x);
    return *this;
  }
  SparseVec& operator*=(const Rational& c);

  bool empty() const { return entries_.empty(); }
  std::size_t nnz() const { return entries_.size(); }
  Index leading() const { return entries_.begin()->first; }
  const_iterator begin() const { return entries_.begin(); }
  const_iterator end() const { return entries_.end(); }
  const Map& entries() const { return entries_; }

  friend bool operator==(const SparseVec& a, const SparseVec& b) { return a.entries_ == b.entries_; }
  friend SparseVec operator+(SparseVec a, const SparseVec& b) { return a += b; }
  friend SparseVec operator-(SparseVec a, const SparseVec& b) { return a -= b; }
  friend SparseVec operator*(const Rational& c, SparseVec a) { return a *= c; }

 private:
  Map entries_;
};

/// Column-sparse matrix; column j is the image of the j-th source basis vector.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols) : rows_(rows), columns_(cols) {}

  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return columns_.size(); }

  const SparseVec& column(std::size_t j) const { return columns_.at(j); }
  void set_column(std::size_t j, SparseVec v) { columns_.at(j) = std::move(v); }
  Rational get(std::size_t r, std::size_t c) const { return columns_.at(c).get(r); }
  void set(std::size_t r, std::size_t c, const Rational& v) { columns_.at(c).set(r, v); }
  void add(std::size_t r, std::size_t c, const Rational& v) { columns_.at(c).add(r, v); }

  SparseVec apply(const SparseVec& x) const;
  bool is_zero() const;
  Matrix transpose() const;

  Matrix& operator+=(const Matrix& o);
  Matrix& operator-=(const Matrix& o);
  Matrix& operator*=(const Rational& c);

  friend Matrix operator*(const Matrix& a, const Matrix& b);
  friend Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
  friend Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
  friend Matrix operator*(const Rational& c, Matrix a) { return a *= c; }
  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.columns_ == b.columns_;
  }

 private:
  std::size_t rows_ = 0;
  std::vector<SparseVec> columns_;
};

/// Incremental Gaussian elimination with deterministic lowest-index pivoting.
/// Every inserted vector receives an id (0, 1, 2, ...) whether or not it is
/// independent; combinations are reported in terms of these ids.
class Eliminator {
 public:
  struct Reduction {
    SparseVec residual;     // v - sum combo_j * inserted_j
    SparseVec combination;  // over inserted ids
  };

  /// Returns std::nullopt when v is independent of the previous insertions,
  /// otherwise the linear relation (over ids, including the new one) it satisfies.
  std::optional<SparseVec> insert(const SparseVec& v);

  Reduction reduce(const SparseVec& v) const;
  bool in_span(const SparseVec& v) const { return reduce(v).residual.empty(); }
  /// Coefficients c with v = sum c_j inserted_j, if v lies in the span.
  std::optional<SparseVec> express(const SparseVec& v) const;

  std::size_t rank() const { return rows_.size(); }
  std::size_t inserted() const { return inserted_; }
  const std::vector<Index>& independent_ids() const { return independent_; }

 private:
  struct Row {
    SparseVec vec;
    SparseVec combo;
  };
  std::map<Index, Row> rows_;  // keyed by pivot
  std::vector<Index> independent_;
  std::size_t inserted_ = 0;
};

std::size_t rank(const Matrix& m);
/// Deterministic kernel basis (relations among columns in column order).
std::vector<SparseVec> kernel(const Matrix& m);
/// A solution x of m x = b, if one exists.
std::optional<SparseVec> solve(const Matrix& m, const SparseVec& b);

}  // namespace deforma
