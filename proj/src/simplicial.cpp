#include "deforma/simplicial.hpp"

#include <bit>
#include <sstream>

namespace deforma {

namespace {

bool preserves_structure(const DGLA& src, const DGLA& tgt, const Matrix& m, bool lie, Report& r,
                         const std::string& what) {
  DGLAMorphism f{src, tgt, m};
  Report sub = check_dgla_morphism(f);
  for (const auto& w : sub.failures) {
    if (!lie && w.find("brackets") != std::string::npos) continue;
    r.fail(what + ": " + w);
  }
  return r.ok();
}

int form_degree(std::uint32_t mask) { return std::popcount(mask); }

}  // namespace

Report check_semicosimplicial(const SemicosimplicialObject& s) {
  Report r;
  if (s.levels.empty()) {
    r.fail("no levels");
    return r;
  }
  const unsigned N = s.truncation();
  if (s.cofaces.size() != N + 1) {
    r.fail("expected coface lists for levels 0.." + std::to_string(N));
    return r;
  }
  for (unsigned n = 0; n <= N; ++n) {
    if (s.lie) r.merge(check_dgla(s.levels[n]), "level " + std::to_string(n) + ": ");
    const std::size_t expect = n == 0 ? 0 : n + 1;
    if (s.cofaces[n].size() != expect) {
      r.fail("level " + std::to_string(n) + " has " + std::to_string(s.cofaces[n].size()) + " cofaces, expected " +
             std::to_string(expect));
      return r;
    }
    for (unsigned k = 0; n > 0 && k <= n; ++k) {
      preserves_structure(s.levels[n - 1], s.levels[n], s.cofaces[n][k], s.lie, r,
                          "coface d" + std::to_string(k) + " into level " + std::to_string(n));
    }
  }
  if (!r.ok()) return r;
  // ∂_l ∂_k = ∂_{k+1} ∂_l for l ≤ k, as maps level n-1 → level n+1.
  for (unsigned n = 1; n + 1 <= N; ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      for (unsigned l = 0; l <= k; ++l) {
        const Matrix lhs = s.cofaces[n + 1][l] * s.cofaces[n][k];
        const Matrix rhs = s.cofaces[n + 1][k + 1] * s.cofaces[n][l];
        if (!(lhs == rhs)) {
          for (Index j = 0; j < lhs.cols(); ++j) {
            if (!(lhs.column(j) == rhs.column(j))) {
              r.fail("d" + std::to_string(l) + " d" + std::to_string(k) + " != d" + std::to_string(k + 1) + " d" +
                     std::to_string(l) + " on " + s.levels[n - 1].space().label(j) + " (level " +
                     std::to_string(n - 1) + ")");
              break;
            }
          }
        }
      }
    }
  }
  return r;
}

SemicosimplicialObject constant_object(const DGLA& l, bool lie) {
  SemicosimplicialObject s;
  s.levels = {l};
  s.cofaces = {{}};
  s.lie = lie;
  return s;
}

SemicosimplicialObject chi_delta(const DGLAMorphism& chi) {
  SemicosimplicialObject s;
  s.levels = {chi.source, chi.target};
  s.cofaces = {{}, {chi.map, Matrix(chi.target.dim(), chi.source.dim())}};
  s.lie = true;
  return s;
}

TotData tot(const SemicosimplicialObject& s) {
  const Report r = check_semicosimplicial(s);
  if (!r.ok()) throw InputError("invalid semicosimplicial object: " + r.failures.front());
  std::vector<std::pair<int, std::string>> elems;
  for (unsigned n = 0; n < s.levels.size(); ++n) {
    const GradedSpace& v = s.levels[n].space();
    for (Index i = 0; i < v.dim(); ++i) elems.emplace_back(v.degree(i) + static_cast<int>(n), std::to_string(n) + ":" + v.label(i));
  }
  std::vector<Index> pos;
  GradedSpace space = make_space(elems, &pos);
  TotData out;
  out.index.resize(s.levels.size());
  std::size_t at = 0;
  for (unsigned n = 0; n < s.levels.size(); ++n)
    for (Index i = 0; i < s.levels[n].dim(); ++i) out.index[n].push_back(pos[at++]);

  Matrix d(space.dim(), space.dim());
  for (unsigned n = 0; n < s.levels.size(); ++n) {
    const DGLA& lv = s.levels[n];
    const int sn = n % 2 == 0 ? 1 : -1;
    for (Index i = 0; i < lv.dim(); ++i) {
      const Index col = out.index[n][i];
      for (const auto& [j, c] : lv.differential().column(i)) d.add(out.index[n][j], col, sn * c);
      if (n + 1 >= s.levels.size()) continue;
      for (unsigned k = 0; k <= n + 1; ++k) {
        const int sk = k % 2 == 0 ? 1 : -1;
        for (const auto& [j, c] : s.cofaces[n + 1][k].column(i)) d.add(out.index[n + 1][j], col, sk * c);
      }
    }
  }
  out.complex = Complex(std::move(space), std::move(d));
  return out;
}

Report check_semicosimplicial_morphism(const SemicosimplicialMorphism& f) {
  Report r;
  if (f.source.levels.size() != f.target.levels.size() || f.maps.size() != f.source.levels.size()) {
    r.fail("level counts differ");
    return r;
  }
  const bool lie = f.source.lie && f.target.lie;
  for (unsigned n = 0; n < f.maps.size(); ++n) {
    preserves_structure(f.source.levels[n], f.target.levels[n], f.maps[n], lie, r, "level " + std::to_string(n));
    for (unsigned k = 0; n > 0 && k <= n; ++k) {
      if (!(f.maps[n] * f.source.coface(n, k) == f.target.coface(n, k) * f.maps[n - 1]))
        r.fail("does not commute with d" + std::to_string(k) + " into level " + std::to_string(n));
    }
  }
  return r;
}

Matrix tot_map(const SemicosimplicialMorphism& f) {
  const TotData a = tot(f.source);
  const TotData b = tot(f.target);
  Matrix m(b.complex.space.dim(), a.complex.space.dim());
  for (unsigned n = 0; n < f.maps.size(); ++n)
    for (Index i = 0; i < f.maps[n].cols(); ++i)
      for (const auto& [j, c] : f.maps[n].column(i)) m.add(b.index[n][j], a.index[n][i], c);
  return m;
}

namespace {

std::string simplex_name(const std::vector<unsigned>& s) {
  std::string out = "U";
  for (std::size_t i = 0; i < s.size(); ++i) out += (i ? "," : "") + std::to_string(s[i]);
  return out;
}

std::vector<std::vector<unsigned>> subsets_of_size(unsigned n, unsigned k) {
  std::vector<std::vector<unsigned>> out;
  std::vector<unsigned> cur;
  std::function<void(unsigned)> rec = [&](unsigned start) {
    if (cur.size() == k) {
      out.push_back(cur);
      return;
    }
    for (unsigned i = start; i < n; ++i) {
      cur.push_back(i);
      rec(i + 1);
      cur.pop_back();
    }
  };
  rec(0);
  return out;
}

}  // namespace

SemicosimplicialObject cech_diagram(const CechData& cover, unsigned max_level) {
  if (cover.opens == 0) throw InputError("cover has no open sets");
  SemicosimplicialObject s;
  s.lie = cover.lie;
  const unsigned top = std::min(cover.opens - 1, max_level);
  // Per level: the simplices present and the offset of each inside the level.
  std::vector<std::vector<std::vector<unsigned>>> simplices(top + 1);
  std::vector<std::map<std::vector<unsigned>, std::vector<Index>>> local(top + 1);
  for (unsigned n = 0; n <= top; ++n) {
    std::vector<std::pair<int, std::string>> elems;
    for (const auto& t : subsets_of_size(cover.opens, n + 1)) {
      auto it = cover.sections.find(t);
      if (it == cover.sections.end()) continue;
      simplices[n].push_back(t);
      const GradedSpace& v = it->second.space();
      for (Index i = 0; i < v.dim(); ++i) elems.emplace_back(v.degree(i), simplex_name(t) + "." + v.label(i));
    }
    std::vector<Index> pos;
    GradedSpace space = make_space(elems, &pos);
    std::size_t at = 0;
    for (const auto& t : simplices[n]) {
      auto& idx = local[n][t];
      for (Index i = 0; i < cover.sections.at(t).dim(); ++i) idx.push_back(pos[at++]);
    }
    Matrix d(space.dim(), space.dim());
    for (const auto& t : simplices[n]) {
      const DGLA& g = cover.sections.at(t);
      const auto& idx = local[n][t];
      for (Index i = 0; i < g.dim(); ++i)
        for (const auto& [j, c] : g.differential().column(i)) d.add(idx[j], idx[i], c);
    }
    DGLA level{Complex(std::move(space), std::move(d))};
    for (const auto& t : simplices[n]) {
      const DGLA& g = cover.sections.at(t);
      const auto& idx = local[n][t];
      for (const auto& [ij, v] : g.structure_constants()) {
        SparseVec w;
        for (const auto& [k, c] : v) w.add(idx[k], c);
        level.set_ordered(idx[ij.first], idx[ij.second], w);
      }
    }
    s.levels.push_back(std::move(level));
  }
  s.cofaces.resize(top + 1);
  for (unsigned n = 1; n <= top; ++n) {
    for (unsigned h = 0; h <= n; ++h) {
      Matrix m(s.levels[n].dim(), s.levels[n - 1].dim());
      for (const auto& t : simplices[n]) {
        std::vector<unsigned> face = t;
        face.erase(face.begin() + h);
        auto src = local[n - 1].find(face);
        if (src == local[n - 1].end()) throw InputError(simplex_name(t) + " is present but its face " + simplex_name(face) + " is not");
        auto rit = cover.restrictions.find({face, t});
        if (rit == cover.restrictions.end())
          throw InputError("missing restriction " + simplex_name(face) + " -> " + simplex_name(t));
        const Matrix& rho = rit->second;
        const auto& out_idx = local[n][t];
        if (rho.rows() != out_idx.size() || rho.cols() != src->second.size())
          throw InputError("restriction " + simplex_name(face) + " -> " + simplex_name(t) + " has the wrong shape");
        for (Index i = 0; i < rho.cols(); ++i)
          for (const auto& [j, c] : rho.column(i)) m.add(out_idx[j], src->second[i], c);
      }
      s.cofaces[n].push_back(std::move(m));
    }
  }
  return s;
}

CechData constant_cover(const DGLA& l, unsigned opens, bool lie) {
  CechData c;
  c.opens = opens;
  c.lie = lie;
  for (unsigned k = 1; k <= opens; ++k) {
    for (const auto& t : subsets_of_size(opens, k)) {
      c.sections[t] = l;
      if (k == 1) continue;
      for (std::size_t h = 0; h < t.size(); ++h) {
        std::vector<unsigned> face = t;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(h));
        c.restrictions[{face, t}] = Matrix::identity(l.dim());
      }
    }
  }
  return c;
}

ThomWhitney::ThomWhitney(SemicosimplicialObject s) : s_(std::move(s)), tot_(deforma::tot(s_)) {}

TWElement ThomWhitney::zero() const {
  TWElement x;
  x.levels.resize(s_.levels.size());
  return x;
}

void ThomWhitney::axpy(TWElement& y, const Rational& c, const TWElement& x) const {
  if (y.levels.size() < x.levels.size()) y.levels.resize(x.levels.size());
  for (std::size_t n = 0; n < x.levels.size(); ++n) {
    for (const auto& [i, f] : x.levels[n]) {
      auto [it, inserted] = y.levels[n].try_emplace(i, PolyForm(static_cast<unsigned>(n)));
      it->second.axpy(c, f);
      if (it->second.is_zero()) y.levels[n].erase(it);
    }
  }
}

bool ThomWhitney::is_zero(const TWElement& x) const {
  for (const auto& lv : x.levels)
    for (const auto& [i, f] : lv)
      if (!f.is_zero()) return false;
  return true;
}

bool ThomWhitney::equal(const TWElement& a, const TWElement& b) const {
  TWElement diff = a;
  axpy(diff, -1, b);
  return is_zero(diff);
}

int ThomWhitney::degree(const TWElement& x) const {
  std::optional<int> deg;
  for (std::size_t n = 0; n < x.levels.size(); ++n) {
    for (const auto& [i, f] : x.levels[n]) {
      if (f.is_zero()) continue;
      const int d = s_.levels[n].degree(i) + f.degree();
      if (deg && *deg != d) throw Error("Thom-Whitney element is not homogeneous");
      deg = d;
    }
  }
  return deg.value_or(0);
}

Report ThomWhitney::check_compatible(const TWElement& x) const {
  Report r;
  const unsigned N = truncation();
  for (unsigned n = 1; n <= N && n < x.levels.size(); ++n) {
    for (unsigned k = 0; k <= n; ++k) {
      TWComponent lhs, rhs;
      auto acc = [](TWComponent& c, Index i, const PolyForm& f) {
        auto [it, ins] = c.try_emplace(i, PolyForm(f.vars()));
        it->second += f;
        if (it->second.is_zero()) c.erase(it);
      };
      for (const auto& [i, f] : x.levels[n]) acc(lhs, i, apl_face(k, f));
      for (const auto& [i, f] : x.levels[n - 1])
        for (const auto& [j, c] : s_.coface(n, k).column(i)) acc(rhs, j, c * f);
      if (!(lhs == rhs)) {
        r.fail("compatibility fails for face " + std::to_string(k) + " at level " + std::to_string(n));
      }
    }
  }
  return r;
}

TWElement ThomWhitney::d(const TWElement& x) const {
  TWElement out = zero();
  for (std::size_t n = 0; n < x.levels.size(); ++n) {
    const DGLA& lv = s_.levels[n];
    TWElement part = zero();
    for (const auto& [i, f] : x.levels[n]) {
      for (const auto& [j, c] : lv.differential().column(i)) {
        auto [it, ins] = part.levels[n].try_emplace(j, PolyForm(static_cast<unsigned>(n)));
        it->second.axpy(c, f);
      }
      auto [it, ins] = part.levels[n].try_emplace(i, PolyForm(static_cast<unsigned>(n)));
      it->second.axpy(lv.degree(i) % 2 == 0 ? 1 : -1, f.d());
    }
    axpy(out, 1, part);
  }
  return out;
}

TWElement ThomWhitney::bracket(const TWElement& x, const TWElement& y) const {
  return tw_tensor_phi(*this, x, *this, y,
                       [this](unsigned n, Index i, Index j) { return s_.levels[n].bracket(i, j); });
}

SparseVec ThomWhitney::integrate(const TWElement& x) const {
  SparseVec out;
  for (std::size_t n = 0; n < x.levels.size() && n < tot_.index.size(); ++n) {
    for (const auto& [i, f] : x.levels[n]) {
      const Rational v = deforma::integrate(f);
      if (v == 0) continue;
      const int sign = (static_cast<long long>(n) * s_.levels[n].degree(i)) % 2 == 0 ? 1 : -1;
      out.add(tot_.index[n][i], sign * v);
    }
  }
  return out;
}

const Matrix& ThomWhitney::composite(unsigned k, unsigned n, const std::vector<unsigned>& face) const {
  auto key = std::make_tuple(k, n, face);
  auto it = composites_.find(key);
  if (it != composites_.end()) return it->second;
  Matrix m = Matrix::identity(s_.levels[k].dim());
  unsigned level = k;
  for (unsigned v = 0; v <= n; ++v) {
    if (std::find(face.begin(), face.end(), v) != face.end()) continue;
    ++level;
    m = s_.coface(level, v) * m;
  }
  return composites_.emplace(key, std::move(m)).first->second;
}

TWElement ThomWhitney::whitney(const SparseVec& x) const {
  // Tot index → (level, local index)
  std::map<Index, std::pair<unsigned, Index>> where;
  for (unsigned n = 0; n < tot_.index.size(); ++n)
    for (Index i = 0; i < tot_.index[n].size(); ++i) where[tot_.index[n][i]] = {n, i};
  TWElement out = zero();
  const unsigned N = truncation();
  for (const auto& [t, c] : x) {
    const auto [k, i] = where.at(t);
    const int sign = (static_cast<long long>(k) * s_.levels[k].degree(i)) % 2 == 0 ? 1 : -1;
    for (unsigned n = k; n <= N; ++n) {
      for (const auto& face : subsets_of_size(n + 1, k + 1)) {
        const SparseVec img = composite(k, n, face).column(i);
        if (img.empty()) continue;
        const PolyForm w = whitney_form(n, face);
        for (const auto& [j, a] : img) {
          auto [it, ins] = out.levels[n].try_emplace(j, PolyForm(n));
          it->second.axpy(sign * c * a, w);
          if (it->second.is_zero()) out.levels[n].erase(it);
        }
      }
    }
  }
  return out;
}

TWElement ThomWhitney::homotopy(const TWElement& x) const {
  TWElement out = zero();
  for (std::size_t n = 0; n < x.levels.size(); ++n) {
    for (const auto& [i, f] : x.levels[n]) {
      PolyForm s = dupont(f, static_cast<unsigned>(n));
      if (s.is_zero()) continue;
      s *= s_.levels[n].degree(i) % 2 == 0 ? -1 : 1;
      out.levels[n].emplace(i, std::move(s));
    }
  }
  return out;
}

std::vector<TWElement> ThomWhitney::basis(int degree, unsigned p) const {
  struct Unknown {
    unsigned n;
    Index i;
    PolyForm::Key key;
  };
  std::vector<Unknown> unknowns;
  const unsigned N = truncation();
  for (unsigned n = 0; n <= N; ++n) {
    const std::vector<PolyForm::Key> forms = apl_basis(n, p);
    for (Index i = 0; i < s_.levels[n].dim(); ++i) {
      const int need = degree - s_.levels[n].degree(i);
      if (need < 0 || need > static_cast<int>(n)) continue;
      for (const auto& k : forms)
        if (form_degree(k.second) == need) unknowns.push_back({n, i, k});
    }
  }
  // Rows: (level n, face k, basis index, monomial on Δ_{n-1}).
  std::map<std::tuple<unsigned, unsigned, Index, PolyForm::Key>, Index> rows;
  auto row = [&](unsigned n, unsigned k, Index j, const PolyForm::Key& key) {
    auto [it, ins] = rows.try_emplace({n, k, j, key}, rows.size());
    return it->second;
  };
  std::vector<SparseVec> cols;
  for (const auto& u : unknowns) {
    SparseVec col;
    const PolyForm mono = PolyForm::monomial(u.n, u.key.first, u.key.second);
    if (u.n >= 1) {
      for (unsigned k = 0; k <= u.n; ++k) {
        const PolyForm face = apl_face(k, mono);
        for (const auto& [key, c] : face.terms()) col.add(row(u.n, k, u.i, key), c);
      }
    }
    if (u.n + 1 <= N) {
      for (unsigned k = 0; k <= u.n + 1; ++k)
        for (const auto& [j, c] : s_.coface(u.n + 1, k).column(u.i)) col.add(row(u.n + 1, k, j, u.key), -c);
    }
    cols.push_back(std::move(col));
  }
  Matrix m(rows.size(), cols.size());
  for (Index j = 0; j < cols.size(); ++j) m.set_column(j, std::move(cols[j]));
  std::vector<TWElement> out;
  for (const auto& rel : kernel(m)) {
    TWElement x = zero();
    for (const auto& [j, c] : rel) {
      const Unknown& u = unknowns[j];
      auto [it, ins] = x.levels[u.n].try_emplace(u.i, PolyForm(u.n));
      it->second.add(u.key, c);
    }
    out.push_back(std::move(x));
  }
  return out;
}

std::string ThomWhitney::to_string(const TWElement& x) const {
  std::ostringstream os;
  bool first = true;
  for (std::size_t n = 0; n < x.levels.size(); ++n) {
    for (const auto& [i, f] : x.levels[n]) {
      if (!first) os << " + ";
      first = false;
      os << "[" << n << ":" << s_.levels[n].space().label(i) << "](" << f.to_string() << ")";
    }
  }
  return first ? "0" : os.str();
}

TWElement tw_map(const SemicosimplicialMorphism& f, const TWElement& x) {
  TWElement out;
  out.levels.resize(f.target.levels.size());
  for (std::size_t n = 0; n < x.levels.size(); ++n) {
    for (const auto& [i, form] : x.levels[n]) {
      for (const auto& [j, c] : f.maps[n].column(i)) {
        auto [it, ins] = out.levels[n].try_emplace(j, PolyForm(static_cast<unsigned>(n)));
        it->second.axpy(c, form);
        if (it->second.is_zero()) out.levels[n].erase(it);
      }
    }
  }
  return out;
}

TWElement tw_tensor_phi(const ThomWhitney& v, const TWElement& x, const ThomWhitney& w, const TWElement& y,
                        const std::function<SparseVec(unsigned, Index, Index)>& phi) {
  TWElement out;
  const std::size_t levels = std::min(x.levels.size(), y.levels.size());
  out.levels.resize(std::max(v.object().levels.size(), w.object().levels.size()));
  for (std::size_t n = 0; n < levels; ++n) {
    for (const auto& [i, a] : x.levels[n]) {
      const int fa = a.degree();
      for (const auto& [j, b] : y.levels[n]) {
        const SparseVec img = phi(static_cast<unsigned>(n), i, j);
        if (img.empty()) continue;
        PolyForm ab = a * b;
        if (ab.is_zero()) continue;
        if ((static_cast<long long>(fa) * w.object().levels[n].degree(j)) % 2 != 0) ab *= -1;
        for (const auto& [k, c] : img) {
          auto [it, ins] = out.levels[n].try_emplace(k, PolyForm(static_cast<unsigned>(n)));
          it->second.axpy(c, ab);
          if (it->second.is_zero()) out.levels[n].erase(it);
        }
      }
    }
  }
  return out;
}

}  // namespace deforma
