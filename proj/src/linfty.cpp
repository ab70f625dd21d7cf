#include "deforma/linfty.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

#include "deforma/combinatorics.hpp"

namespace deforma {

SymmetricTable::SymmetricTable(const GradedSpace& v) : shifted_(v.dim()) {
  for (Index i = 0; i < v.dim(); ++i) shifted_[i] = v.degree(i) - 1;
}

int SymmetricTable::canonicalize(Tuple& inputs) const {
  Permutation p(inputs.size());
  std::iota(p.begin(), p.end(), 0);
  std::stable_sort(p.begin(), p.end(), [&](std::size_t a, std::size_t b) { return inputs[a] < inputs[b]; });
  std::vector<int> degs(inputs.size());
  for (std::size_t i = 0; i < inputs.size(); ++i) degs[i] = shifted_.at(inputs[i]);
  const int sign = koszul_sign(p, degs);
  Tuple sorted(inputs.size());
  for (std::size_t i = 0; i < p.size(); ++i) sorted[i] = inputs[p[i]];
  inputs = std::move(sorted);
  for (std::size_t i = 0; i + 1 < inputs.size(); ++i) {
    if (inputs[i] == inputs[i + 1] && shifted_[inputs[i]] % 2 != 0) return 0;
  }
  return sign;
}

void SymmetricTable::set(Tuple inputs, SparseVec out) {
  const int s = canonicalize(inputs);
  if (s == 0) {
    if (!out.empty()) throw InputError("nonzero value on a repeated odd input");
    return;
  }
  out *= s;
  if (out.empty()) {
    entries_.erase(inputs);
  } else {
    entries_[std::move(inputs)] = std::move(out);
  }
}

void SymmetricTable::add(Tuple inputs, const SparseVec& out) {
  const int s = canonicalize(inputs);
  if (s == 0) {
    if (!out.empty()) throw InputError("nonzero value on a repeated odd input");
    return;
  }
  SparseVec& slot = entries_[inputs];
  slot.axpy(s, out);
  if (slot.empty()) entries_.erase(inputs);
}

SparseVec SymmetricTable::at(Tuple inputs) const {
  const int s = canonicalize(inputs);
  if (s == 0) return {};
  auto it = entries_.find(inputs);
  if (it == entries_.end()) return {};
  return static_cast<Rational>(s) * it->second;
}

SparseVec SymmetricTable::eval(const Args& args) const {
  SparseVec out;
  if (entries_.empty()) return out;
  Tuple t(args.size());
  auto rec = [&](auto&& self, std::size_t i, const Rational& coef) -> void {
    if (i == args.size()) {
      out.axpy(coef, at(t));
      return;
    }
    for (const auto& [idx, c] : *args[i]) {
      t[i] = idx;
      self(self, i + 1, coef * c);
    }
  };
  rec(rec, 0, Rational(1));
  return out;
}

std::vector<int> shifted_degrees(const GradedSpace& v, const Tuple& t) {
  std::vector<int> d(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) d[i] = v.degree(t[i]) - 1;
  return d;
}

std::vector<Tuple> symmetric_basis(const GradedSpace& v, unsigned n) {
  std::vector<Tuple> out;
  Tuple t(n);
  auto rec = [&](auto&& self, unsigned i, Index start) -> void {
    if (i == n) {
      out.push_back(t);
      return;
    }
    for (Index k = start; k < v.dim(); ++k) {
      if (i > 0 && k == t[i - 1] && (v.degree(k) - 1) % 2 != 0) continue;
      t[i] = k;
      self(self, i + 1, k);
    }
  };
  rec(rec, 0, 0);
  return out;
}

LInftyStructure::LInftyStructure(GradedSpace v, unsigned cutoff) : space_(std::move(v)), cutoff_(cutoff) {}

unsigned LInftyStructure::max_arity() const {
  unsigned m = 0;
  for (const auto& [k, t] : brackets_) {
    if (!t.empty()) m = std::max(m, k);
  }
  return m;
}

SymmetricTable& LInftyStructure::bracket(unsigned k) {
  auto it = brackets_.find(k);
  if (it == brackets_.end()) it = brackets_.emplace(k, SymmetricTable(space_)).first;
  return it->second;
}

const SymmetricTable* LInftyStructure::find_bracket(unsigned k) const {
  auto it = brackets_.find(k);
  if (it == brackets_.end() || it->second.empty()) return nullptr;
  return &it->second;
}

SparseVec LInftyStructure::q(const Tuple& inputs) const {
  const SymmetricTable* t = find_bracket(static_cast<unsigned>(inputs.size()));
  return t ? t->at(inputs) : SparseVec();
}

SparseVec LInftyStructure::q(unsigned k, const Args& args) const {
  const SymmetricTable* t = find_bracket(k);
  return t ? t->eval(args) : SparseVec();
}

Matrix LInftyStructure::q1() const {
  Matrix m(space_.dim(), space_.dim());
  for (Index i = 0; i < space_.dim(); ++i) m.set_column(i, q(Tuple{i}));
  return m;
}

namespace {

std::string describe(const GradedSpace& v, const Tuple& t) {
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < t.size(); ++i) os << (i ? ", " : "") << v.label(t[i]);
  os << ")";
  return os.str();
}

Tuple pick(const Tuple& t, const Permutation& p, std::size_t from, std::size_t to) {
  Tuple out;
  for (std::size_t i = from; i < to; ++i) out.push_back(t[p[i]]);
  return out;
}

}  // namespace

std::vector<CodifferentialTerm> codifferential_coefficients(const LInftyStructure& l, const Tuple& inputs) {
  std::vector<CodifferentialTerm> out;
  const std::size_t m = inputs.size();
  const auto degs = shifted_degrees(l.space(), inputs);
  for (std::size_t k = 1; k <= m; ++k) {
    if (!l.find_bracket(static_cast<unsigned>(k))) continue;
    for (const auto& s : unshuffles(k, m - k)) {
      SparseVec v = l.q(pick(inputs, s, 0, k));
      if (v.empty()) continue;
      v *= koszul_sign(s, degs);
      out.push_back({static_cast<unsigned>(k), std::move(v), pick(inputs, s, k, m)});
    }
  }
  return out;
}

SparseVec jacobi_expression(const LInftyStructure& l, const Tuple& inputs) {
  SparseVec out;
  const std::size_t m = inputs.size();
  for (const auto& term : codifferential_coefficients(l, inputs)) {
    const unsigned outer = static_cast<unsigned>(m - term.k + 1);
    if (!l.find_bracket(outer)) continue;
    std::vector<SparseVec> rest;
    for (Index r : term.rest) rest.push_back(SparseVec::unit(r));
    Args args{&term.value};
    for (const auto& r : rest) args.push_back(&r);
    out += l.q(outer, args);
  }
  return out;
}

Report check_linfty(const LInftyStructure& l) { return check_linfty(l, l.cutoff()); }

Report check_linfty(const LInftyStructure& l, unsigned max_arity) {
  Report r;
  const GradedSpace& v = l.space();
  for (unsigned k = 1; k <= l.max_arity(); ++k) {
    const SymmetricTable* t = l.find_bracket(k);
    if (!t) continue;
    for (const auto& [in, out] : t->entries()) {
      int deg = 1;
      for (Index i : in) deg += v.degree(i) - 1;
      for (const auto& [o, c] : out) {
        if (v.degree(o) - 1 != deg) {
          r.fail("q_" + std::to_string(k) + " has wrong degree at " + describe(v, in));
          break;
        }
      }
    }
  }
  if (!r.ok()) return r;
  const unsigned top = std::min(max_arity, l.cutoff());
  for (unsigned m = 1; m <= top && !r.full(); ++m) {
    for (const auto& t : symmetric_basis(v, m)) {
      if (!jacobi_expression(l, t).empty()) {
        r.fail("QQ != 0 in arity " + std::to_string(m) + " at " + describe(v, t));
        if (r.full()) break;
      }
    }
    if (!r.ok()) break;
  }
  return r;
}

LInftyStructure dgla_to_linfty(const DGLA& l, unsigned cutoff) {
  LInftyStructure out(l.space(), cutoff);
  const GradedSpace& v = l.space();
  for (Index i = 0; i < v.dim(); ++i) {
    SparseVec d = l.d(SparseVec::unit(i));
    d *= -1;
    if (!d.empty()) out.bracket(1).set({i}, d);
  }
  for (const auto& [ij, val] : l.structure_constants()) {
    const auto [i, j] = ij;
    if (i > j) continue;
    SparseVec w = val;
    w *= sign_pow(v.degree(i));
    out.bracket(2).set({i, j}, w);
  }
  return out;
}

SymmetricTable& LInftyMorphism::component(unsigned n) {
  auto it = taylor.find(n);
  if (it == taylor.end()) it = taylor.emplace(n, SymmetricTable(source.space())).first;
  return it->second;
}

SparseVec LInftyMorphism::f(const Tuple& inputs) const {
  auto it = taylor.find(static_cast<unsigned>(inputs.size()));
  return it == taylor.end() ? SparseVec() : it->second.at(inputs);
}

SparseVec LInftyMorphism::f(unsigned n, const Args& args) const {
  auto it = taylor.find(n);
  return it == taylor.end() ? SparseVec() : it->second.eval(args);
}

Matrix LInftyMorphism::f1() const {
  Matrix m(target.space().dim(), source.space().dim());
  for (Index i = 0; i < source.space().dim(); ++i) m.set_column(i, f(Tuple{i}));
  return m;
}

LInftyMorphism identity_morphism(const LInftyStructure& l) {
  return linear_morphism(l, l, Matrix::identity(l.space().dim()));
}

LInftyMorphism linear_morphism(const LInftyStructure& s, const LInftyStructure& t, const Matrix& m) {
  require_degree(s.space(), t.space(), 0, m, "linear morphism");
  LInftyMorphism f{s, t, std::min(s.cutoff(), t.cutoff()), {}};
  for (Index i = 0; i < s.space().dim(); ++i) {
    if (!m.column(i).empty()) f.component(1).set({i}, m.column(i));
  }
  return f;
}

Report check_linfty_morphism(const LInftyMorphism& f) { return check_linfty_morphism(f, f.cutoff); }

Report check_linfty_morphism(const LInftyMorphism& f, unsigned max_arity) {
  Report r;
  const GradedSpace& v = f.source.space();
  const GradedSpace& w = f.target.space();
  for (const auto& [n, t] : f.taylor) {
    for (const auto& [in, out] : t.entries()) {
      int deg = 0;
      for (Index i : in) deg += v.degree(i) - 1;
      for (const auto& [o, c] : out) {
        if (w.degree(o) - 1 != deg) {
          r.fail("f_" + std::to_string(n) + " has wrong degree at " + describe(v, in));
          break;
        }
      }
    }
  }
  if (!r.ok()) return r;
  const unsigned top = std::min(max_arity, f.cutoff);
  for (unsigned m = 1; m <= top && !r.full(); ++m) {
    for (const auto& t : symmetric_basis(v, m)) {
      SparseVec diff;
      for (const auto& term : codifferential_coefficients(f.source, t)) {
        std::vector<SparseVec> rest;
        for (Index x : term.rest) rest.push_back(SparseVec::unit(x));
        Args args{&term.value};
        for (const auto& x : rest) args.push_back(&x);
        diff += f.f(static_cast<unsigned>(args.size()), args);
      }
      const auto degs = shifted_degrees(v, t);
      for (const auto& part : set_partitions(m)) {
        const unsigned j = static_cast<unsigned>(part.size());
        if (!f.target.find_bracket(j)) continue;
        std::vector<SparseVec> images;
        bool zero = false;
        for (const auto& block : part) {
          Tuple sub;
          for (std::size_t b : block) sub.push_back(t[b]);
          images.push_back(f.f(sub));
          if (images.back().empty()) {
            zero = true;
            break;
          }
        }
        if (zero) continue;
        Args args;
        for (const auto& x : images) args.push_back(&x);
        diff.axpy(-koszul_sign(concatenate(part), degs), f.target.q(j, args));
      }
      if (!diff.empty()) {
        r.fail("F∘Q != Q∘F in arity " + std::to_string(m) + " at " + describe(v, t));
        if (r.full()) break;
      }
    }
    if (!r.ok()) break;
  }
  return r;
}

ExtVec exponential_sum(const ArtinianAlgebra& a, const ExtVec& gamma, unsigned max_arity,
                       const std::function<SparseVec(unsigned, const Args&)>& q) {
  ExtVec out;
  const unsigned top = std::min(max_arity, a.nilpotency() - 1);
  for (unsigned j = 1; j <= top; ++j) {
    std::vector<const ExtVec*> args(j, &gamma);
    ExtVec term = ext_multilinear(a, args, [&](const Args& v) { return q(j, v); });
    ext_axpy(out, 1 / factorial(j), term);
  }
  return out;
}

ExtVec mc_defect_linfty(const LInftyStructure& l, const ArtinianAlgebra& a, const ExtVec& gamma) {
  require_ext(l.space(), gamma, 1, "MC element");
  return exponential_sum(a, gamma, l.max_arity(), [&](unsigned j, const Args& v) { return l.q(j, v); });
}

bool check_mc_linfty(const LInftyStructure& l, const ArtinianAlgebra& a, const ExtVec& gamma) {
  return ext_is_zero(mc_defect_linfty(l, a, gamma));
}

ExtVec push_mc(const LInftyMorphism& f, const ArtinianAlgebra& a, const ExtVec& gamma) {
  require_ext(f.source.space(), gamma, 1, "MC element");
  unsigned top = 0;
  for (const auto& [n, t] : f.taylor) {
    if (!t.empty()) top = std::max(top, n);
  }
  return exponential_sum(a, gamma, top, [&](unsigned j, const Args& v) { return f.f(j, v); });
}

}  // namespace deforma
