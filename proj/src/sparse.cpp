#include "deforma/sparse.hpp"

#include <stdexcept>

namespace deforma {

void SparseVec::add(Index i, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = entries_.try_emplace(i, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) entries_.erase(it);
  }
}

void SparseVec::set(Index i, const Rational& c) {
  if (c == 0) {
    entries_.erase(i);
  } else {
    entries_[i] = c;
  }
}

void SparseVec::axpy(const Rational& c, const SparseVec& x) {
  if (c == 0) return;
  if (&x == this) {
    *this *= (c + 1);
    return;
  }
  for (const auto& [i, v] : x.entries_) add(i, c * v);
}

SparseVec& SparseVec::operator*=(const Rational& c) {
  if (c == 0) {
    entries_.clear();
  } else {
    for (auto& [i, v] : entries_) v *= c;
  }
  return *this;
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m.set(i, i, 1);
  return m;
}

SparseVec Matrix::apply(const SparseVec& x) const {
  SparseVec out;
  for (const auto& [j, c] : x) {
    if (j >= columns_.size()) throw std::out_of_range("Matrix::apply: index out of range");
    out.axpy(c, columns_[j]);
  }
  return out;
}

bool Matrix::is_zero() const {
  for (const auto& c : columns_) {
    if (!c.empty()) return false;
  }
  return true;
}

Matrix Matrix::transpose() const {
  Matrix t(cols(), rows());
  for (std::size_t j = 0; j < columns_.size(); ++j) {
    for (const auto& [i, v] : columns_[j]) t.set(j, i, v);
  }
  return t;
}

Matrix& Matrix::operator+=(const Matrix& o) {
  if (rows_ != o.rows_ || cols() != o.cols()) throw std::invalid_argument("Matrix shape mismatch");
  for (std::size_t j = 0; j < columns_.size(); ++j) columns_[j] += o.columns_[j];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
  if (rows_ != o.rows_ || cols() != o.cols()) throw std::invalid_argument("Matrix shape mismatch");
  for (std::size_t j = 0; j < columns_.size(); ++j) columns_[j] -= o.columns_[j];
  return *this;
}

Matrix& Matrix::operator*=(const Rational& c) {
  for (auto& col : columns_) col *= c;
  return *this;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("Matrix product shape mismatch");
  Matrix out(a.rows(), b.cols());
  for (std::size_t j = 0; j < b.cols(); ++j) out.columns_[j] = a.apply(b.columns_[j]);
  return out;
}

Eliminator::Reduction Eliminator::reduce(const SparseVec& v) const {
  Reduction r{v, {}};
  // Rows are keyed by their lowest index, so sweeping pivots in increasing
  // order never reintroduces an entry below the current pivot.
  for (const auto& [pivot, row] : rows_) {
    if (r.residual.empty() || r.residual.entries().rbegin()->first < pivot) break;
    const Rational c = r.residual.get(pivot);
    if (c == 0) continue;
    const Rational f = c / row.vec.get(pivot);
    r.residual.axpy(-f, row.vec);
    r.combination.axpy(f, row.combo);
  }
  return r;
}

std::optional<SparseVec> Eliminator::insert(const SparseVec& v) {
  const Index id = inserted_++;
  Reduction r = reduce(v);
  if (r.residual.empty()) {
    SparseVec relation = r.combination;
    relation *= -1;
    relation.add(id, 1);
    return relation;
  }
  SparseVec combo = r.combination;
  combo *= -1;
  combo.add(id, 1);
  // residual = v - sum f_k rows_k = inserted_id - combination
  const Index pivot = r.residual.leading();
  rows_.emplace(pivot, Row{std::move(r.residual), std::move(combo)});
  independent_.push_back(id);
  return std::nullopt;
}

std::optional<SparseVec> Eliminator::express(const SparseVec& v) const {
  Reduction r = reduce(v);
  if (!r.residual.empty()) return std::nullopt;
  return r.combination;
}

std::size_t rank(const Matrix& m) {
  Eliminator e;
  for (std::size_t j = 0; j < m.cols(); ++j) e.insert(m.column(j));
  return e.rank();
}

std::vector<SparseVec> kernel(const Matrix& m) {
  Eliminator e;
  std::vector<SparseVec> out;
  for (std::size_t j = 0; j < m.cols(); ++j) {
    if (auto rel = e.insert(m.column(j))) out.push_back(std::move(*rel));
  }
  return out;
}

std::optional<SparseVec> solve(const Matrix& m, const SparseVec& b) {
  Eliminator e;
  for (std::size_t j = 0; j < m.cols(); ++j) e.insert(m.column(j));
  return e.express(b);
}

}  // namespace deforma
