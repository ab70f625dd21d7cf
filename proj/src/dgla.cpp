#include "deforma/dgla.hpp"

#include <sstream>

namespace deforma {

void DGLA::set_ordered(Index i, Index j, const SparseVec& v) {
  if (v.empty()) {
    rows_.at(i).erase(j);
  } else {
    rows_.at(i)[j] = v;
  }
}

void DGLA::set_bracket(Index i, Index j, const SparseVec& v) {
  set_ordered(i, j, v);
  set_ordered(j, i, static_cast<Rational>(-sign_pow(degree(i) * degree(j))) * v);
}

bool DGLA::has_ordered(Index i, Index j) const { return rows_.at(i).count(j) != 0; }

SparseVec DGLA::bracket(Index i, Index j) const {
  const auto& row = rows_.at(i);
  auto it = row.find(j);
  return it == row.end() ? SparseVec() : it->second;
}

SparseVec DGLA::bracket(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [i, a] : x) {
    const auto& row = rows_.at(i);
    if (row.empty()) continue;
    for (const auto& [j, b] : y) {
      auto it = row.find(j);
      if (it != row.end()) out.axpy(a * b, it->second);
    }
  }
  return out;
}

std::vector<std::pair<std::pair<Index, Index>, SparseVec>> DGLA::structure_constants() const {
  std::vector<std::pair<std::pair<Index, Index>, SparseVec>> out;
  for (Index i = 0; i < rows_.size(); ++i) {
    for (const auto& [j, v] : rows_[i]) out.push_back({{i, j}, v});
  }
  return out;
}

bool DGLA::is_abelian() const {
  for (const auto& r : rows_) {
    if (!r.empty()) return false;
  }
  return true;
}

namespace {

std::string triple(const GradedSpace& v, std::initializer_list<Index> ids) {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (Index i : ids) {
    os << (first ? "" : ", ") << v.label(i);
    first = false;
  }
  os << ")";
  return os.str();
}

}  // namespace

Report check_dgla(const DGLA& l) {
  Report r;
  const GradedSpace& v = l.space();
  const std::size_t n = l.dim();
  std::vector<SparseVec> units(n);
  for (Index i = 0; i < n; ++i) units[i] = SparseVec::unit(i);

  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      const SparseVec b = l.bracket(i, j);
      for (const auto& [k, c] : b) {
        if (v.degree(k) != v.degree(i) + v.degree(j)) {
          r.fail("bracket degree violated at " + triple(v, {i, j}));
          break;
        }
      }
      if (i <= j) {
        SparseVec skew = b;
        skew.axpy(sign_pow(v.degree(i) * v.degree(j)), l.bracket(j, i));
        if (!skew.empty()) r.fail("skew-symmetry violated at " + triple(v, {i, j}));
      }
      SparseVec leib = l.d(b);
      leib -= l.bracket(l.d(units[i]), units[j]);
      leib.axpy(-sign_pow(v.degree(i)), l.bracket(units[i], l.d(units[j])));
      if (!leib.empty()) r.fail("Leibniz violated at " + triple(v, {i, j}));
    }
  }
  if (l.is_abelian()) return r;
  for (Index a = 0; a < n && !r.full(); ++a) {
    for (Index b = 0; b < n; ++b) {
      const SparseVec ab = l.bracket(a, b);
      for (Index c = 0; c < n; ++c) {
        SparseVec jac = l.bracket(units[a], l.bracket(b, c));
        jac -= l.bracket(ab, units[c]);
        jac.axpy(-sign_pow(v.degree(a) * v.degree(b)), l.bracket(units[b], l.bracket(a, c)));
        if (!jac.empty()) r.fail("Jacobi violated at " + triple(v, {a, b, c}));
      }
    }
  }
  return r;
}

Report check_dgla_morphism(const DGLAMorphism& f) {
  Report r;
  const GradedSpace& s = f.source.space();
  const GradedSpace& t = f.target.space();
  try {
    require_degree(s, t, 0, f.map, "morphism");
  } catch (const InputError& e) {
    r.fail(e.what());
    return r;
  }
  if (!(f.map * f.source.differential() == f.target.differential() * f.map)) {
    for (Index i = 0; i < s.dim(); ++i) {
      const SparseVec e = SparseVec::unit(i);
      if (!(f.map.apply(f.source.d(e)) == f.target.d(f.map.apply(e)))) {
        r.fail("does not commute with differentials at (" + s.label(i) + ")");
      }
    }
  }
  for (Index i = 0; i < s.dim(); ++i) {
    for (Index j = 0; j < s.dim(); ++j) {
      const SparseVec lhs = f.map.apply(f.source.bracket(i, j));
      const SparseVec rhs = f.target.bracket(f.map.column(i), f.map.column(j));
      if (!(lhs == rhs)) r.fail("does not commute with brackets at (" + s.label(i) + ", " + s.label(j) + ")");
    }
  }
  return r;
}

SparseVec HomDGLA::element(const Matrix& m) const {
  SparseVec x;
  for (Index j = 0; j < m.cols(); ++j) {
    for (const auto& [i, c] : m.column(j)) {
      auto it = position.find({i, j});
      if (it == position.end()) throw InputError("endomorphism entry outside Hom(V,V)");
      x.add(it->second, c);
    }
  }
  return x;
}

Matrix HomDGLA::matrix(const SparseVec& x) const {
  const std::size_t n = v.space.dim();
  Matrix m(n, n);
  for (const auto& [k, c] : x) m.add(entry[k].first, entry[k].second, c);
  return m;
}

HomDGLA hom_dgla(const Complex& v) {
  const GradedSpace& s = v.space;
  const std::size_t n = s.dim();
  std::vector<std::pair<int, std::string>> elems;
  std::vector<std::pair<Index, Index>> raw;
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      elems.emplace_back(s.degree(i) - s.degree(j), "hom(" + s.label(i) + "," + s.label(j) + ")");
      raw.emplace_back(i, j);
    }
  }
  std::vector<Index> pos;
  GradedSpace h = make_space(elems, &pos);
  HomDGLA out;
  out.v = v;
  out.entry.resize(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    out.entry[pos[k]] = raw[k];
    out.position[raw[k]] = pos[k];
  }
  const std::size_t m = h.dim();
  // d f = d_V f - (-1)^{|f|} f d_V
  Matrix d(m, m);
  for (Index k = 0; k < m; ++k) {
    const auto [i, j] = out.entry[k];
    const int deg = h.degree(k);
    for (const auto& [r, c] : v.differential.column(i)) d.add(out.position.at({r, j}), k, c);
    for (Index q = 0; q < n; ++q) {
      const Rational c = v.differential.get(j, q);
      if (c != 0) d.add(out.position.at({i, q}), k, -sign_pow(deg) * c);
    }
  }
  out.dgla = DGLA(Complex(h, d));
  for (Index a = 0; a < m; ++a) {
    for (Index b = 0; b < m; ++b) {
      const auto [i, j] = out.entry[a];
      const auto [k, l] = out.entry[b];
      SparseVec val;
      if (j == k) val.add(out.position.at({i, l}), 1);
      if (l == i) val.add(out.position.at({k, j}), -sign_pow(h.degree(a) * h.degree(b)));
      out.dgla.set_ordered(a, b, val);
    }
  }
  return out;
}

void require_ext(const GradedSpace& v, const ExtVec& x, int degree, const std::string& what) {
  if (!in_maximal_ideal(x)) throw InputError(what + ": coefficient outside the maximal ideal");
  for (const auto& [k, vec] : x) {
    for (const auto& [i, c] : vec) {
      if (i >= v.dim()) throw InputError(what + ": index out of range");
      if (v.degree(i) != degree) {
        throw InputError(what + ": component " + v.label(i) + " has degree " + std::to_string(v.degree(i)) +
                         ", expected " + std::to_string(degree));
      }
    }
  }
}

ExtVec ext_bracket(const DGLA& l, const ArtinianAlgebra& a, const ExtVec& x, const ExtVec& y) {
  return ext_multilinear(a, {&x, &y}, [&](const std::vector<const SparseVec*>& v) { return l.bracket(*v[0], *v[1]); });
}

ExtVec mc_defect_dgla(const DGLA& l, const ArtinianAlgebra& a, const ExtVec& x) {
  ExtVec out = ext_apply(l.differential(), x);
  ext_axpy(out, Rational(1, 2), ext_bracket(l, a, x, x));
  return out;
}

bool check_mc_dgla(const DGLA& l, const ArtinianAlgebra& a, const ExtVec& x) {
  require_ext(l.space(), x, 1, "MC element");
  return ext_is_zero(mc_defect_dgla(l, a, x));
}

ExtVec gauge_act(const DGLA& l, const ArtinianAlgebra& a, const ExtVec& g, const ExtVec& x) {
  require_ext(l.space(), g, 0, "gauge element");
  if (!check_mc_dgla(l, a, x)) throw InputError("gauge_act: input is not a Maurer-Cartan element");
  ExtVec term = ext_diff(ext_bracket(l, a, g, x), ext_apply(l.differential(), g));
  ExtVec out = x;
  for (unsigned n = 0; !ext_is_zero(term); ++n) {
    ext_axpy(out, 1 / factorial(n + 1), term);
    term = ext_bracket(l, a, g, term);
  }
  return out;
}

}  // namespace deforma

namespace deforma {

SparseVec CDGA::multiply(Index a, Index b) const {
  auto it = product.find({a, b});
  return it == product.end() ? SparseVec() : it->second;
}

SparseVec CDGA::multiply(const SparseVec& x, const SparseVec& y) const {
  SparseVec out;
  for (const auto& [i, a] : x) {
    for (const auto& [j, b] : y) {
      auto it = product.find({i, j});
      if (it != product.end()) out.axpy(a * b, it->second);
    }
  }
  return out;
}

void CDGA::set_product(Index a, Index b, const SparseVec& v) {
  const GradedSpace& s = space();
  if (v.empty()) {
    product.erase({a, b});
    product.erase({b, a});
    return;
  }
  product[{a, b}] = v;
  product[{b, a}] = static_cast<Rational>(sign_pow(s.degree(a) * s.degree(b))) * v;
}

Report check_cdga(const CDGA& a) {
  Report r;
  const GradedSpace& s = a.space();
  const std::size_t n = s.dim();
  auto lbl = [&](std::initializer_list<Index> ids) {
    std::string out = "(";
    bool first = true;
    for (Index i : ids) {
      out += (first ? "" : ", ") + s.label(i);
      first = false;
    }
    return out + ")";
  };
  if (a.unit >= n || !a.complex.differential.column(a.unit).empty()) r.fail("unit is not a closed basis element");
  for (Index i = 0; i < n; ++i) {
    const SparseVec e = SparseVec::unit(i);
    if (!(a.multiply(a.unit, i) == e) || !(a.multiply(i, a.unit) == e)) r.fail("unit law fails at " + lbl({i}));
    for (Index j = 0; j < n; ++j) {
      const SparseVec ij = a.multiply(i, j);
      for (const auto& [k, c] : ij) {
        if (s.degree(k) != s.degree(i) + s.degree(j)) r.fail("product degree violated at " + lbl({i, j}));
      }
      SparseVec comm = ij;
      comm.axpy(-sign_pow(s.degree(i) * s.degree(j)), a.multiply(j, i));
      if (!comm.empty()) r.fail("graded commutativity fails at " + lbl({i, j}));
      SparseVec leib = a.complex.differential.apply(ij);
      leib -= a.multiply(a.complex.differential.column(i), SparseVec::unit(j));
      leib.axpy(-sign_pow(s.degree(i)), a.multiply(SparseVec::unit(i), a.complex.differential.column(j)));
      if (!leib.empty()) r.fail("Leibniz rule fails at " + lbl({i, j}));
      for (Index k = 0; k < n; ++k) {
        if (!(a.multiply(ij, SparseVec::unit(k)) == a.multiply(SparseVec::unit(i), a.multiply(j, k)))) {
          r.fail("associativity fails at " + lbl({i, j, k}));
        }
      }
    }
  }
  return r;
}

CDGA ground_field_cdga() {
  CDGA a{Complex::zero_differential(GradedSpace({{0, {"1"}}})), {}, 0};
  a.set_product(0, 0, SparseVec::unit(0));
  return a;
}

TensorDGLA tensor(const DGLA& l, const CDGA& a) {
  const GradedSpace& ls = l.space();
  const GradedSpace& as = a.space();
  std::vector<std::pair<int, std::string>> elems;
  std::vector<std::pair<Index, Index>> raw;
  for (Index i = 0; i < ls.dim(); ++i) {
    for (Index j = 0; j < as.dim(); ++j) {
      elems.emplace_back(ls.degree(i) + as.degree(j), ls.label(i) + "⊗" + as.label(j));
      raw.emplace_back(i, j);
    }
  }
  std::vector<Index> pos;
  GradedSpace v = make_space(elems, &pos);
  TensorDGLA out;
  out.factors.resize(raw.size());
  for (std::size_t k = 0; k < raw.size(); ++k) {
    out.factors[pos[k]] = raw[k];
    out.index[raw[k]] = pos[k];
  }
  Matrix d(v.dim(), v.dim());
  for (Index k = 0; k < v.dim(); ++k) {
    const auto [i, j] = out.factors[k];
    for (const auto& [i2, c] : l.differential().column(i)) d.add(out.index.at({i2, j}), k, c);
    for (const auto& [j2, c] : a.complex.differential.column(j)) {
      d.add(out.index.at({i, j2}), k, sign_pow(ls.degree(i)) * c);
    }
  }
  out.dgla = DGLA(Complex(v, d));
  for (Index p = 0; p < v.dim(); ++p) {
    for (Index q = 0; q < v.dim(); ++q) {
      const auto [x, aa] = out.factors[p];
      const auto [y, bb] = out.factors[q];
      const SparseVec xy = l.bracket(x, y);
      if (xy.empty()) continue;
      const SparseVec ab = a.multiply(aa, bb);
      if (ab.empty()) continue;
      SparseVec val;
      const int sign = sign_pow(as.degree(aa) * ls.degree(y));
      for (const auto& [u, cu] : xy) {
        for (const auto& [w, cw] : ab) val.add(out.index.at({u, w}), sign * cu * cw);
      }
      out.dgla.set_ordered(p, q, val);
    }
  }
  return out;
}

DGLA conjugate(const DGLA& l, const Matrix& p, const Matrix& pinv) {
  const GradedSpace& v = l.space();
  require_degree(v, v, 0, p, "change of basis");
  DGLA out(Complex(v, p * l.differential() * pinv));
  const std::size_t n = v.dim();
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < n; ++j) {
      out.set_ordered(i, j, p.apply(l.bracket(pinv.column(i), pinv.column(j))));
    }
  }
  return out;
}

}  // namespace deforma

namespace deforma {

SubDGLA subalgebra(const DGLA& m, const std::vector<SparseVec>& basis, const std::vector<std::string>& labels) {
  if (basis.size() != labels.size()) throw InputError("subalgebra: label count mismatch");
  const GradedSpace& v = m.space();
  std::vector<std::pair<int, std::string>> elems;
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (basis[k].empty()) throw InputError("subalgebra: zero basis vector");
    const int d = v.degree(basis[k].leading());
    for (const auto& [i, c] : basis[k]) {
      if (v.degree(i) != d) throw InputError("subalgebra: basis vector is not homogeneous");
    }
    elems.emplace_back(d, labels[k]);
  }
  std::vector<Index> pos;
  GradedSpace s = make_space(elems, &pos);
  Matrix inc(v.dim(), s.dim());
  for (std::size_t k = 0; k < basis.size(); ++k) inc.set_column(pos[k], basis[k]);
  Eliminator e;
  for (Index j = 0; j < s.dim(); ++j) {
    if (e.insert(inc.column(j))) throw InputError("subalgebra: basis is linearly dependent");
  }
  auto coords = [&](const SparseVec& x, const std::string& what) {
    auto c = e.express(x);
    if (!c) throw InputError("subalgebra: not closed under " + what);
    return *c;
  };
  Matrix d(s.dim(), s.dim());
  for (Index j = 0; j < s.dim(); ++j) d.set_column(j, coords(m.d(inc.column(j)), "the differential"));
  SubDGLA out{DGLA(Complex(s, d)), inc};
  for (Index i = 0; i < s.dim(); ++i) {
    for (Index j = 0; j < s.dim(); ++j) {
      out.dgla.set_ordered(i, j, coords(m.bracket(inc.column(i), inc.column(j)), "the bracket"));
    }
  }
  return out;
}

}  // namespace deforma
