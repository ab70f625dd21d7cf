#include "deforma/cartan.hpp"

#include <sstream>

#include "deforma/samples.hpp"

namespace deforma {

namespace {

int parity(long long n) { return n % 2 == 0 ? 1 : -1; }

std::string show(const GradedSpace& v, const SparseVec& x) {
  std::ostringstream os;
  bool first = true;
  for (const auto& [i, c] : x) {
    os << (first ? "" : " + ") << c.get_str() << "*" << v.label(i);
    first = false;
  }
  return first ? "0" : os.str();
}

}  // namespace

Matrix CartanHomotopy::l() const { return target.differential() * i + i * source.differential(); }

CartanReport check_cartan(const CartanHomotopy& c) {
  CartanReport out;
  Report& r = out.report;
  if (c.i.rows() != c.target.dim() || c.i.cols() != c.source.dim()) {
    r.fail("i has the wrong shape");
    return out;
  }
  for (Index a = 0; a < c.source.dim(); ++a) {
    for (const auto& [m, v] : c.i.column(a)) {
      if (c.target.degree(m) != c.source.degree(a) - 1)
        r.fail("i(" + c.source.space().label(a) + ") has a component " + c.target.space().label(m) +
               " of the wrong degree");
    }
  }
  if (!r.ok()) return out;
  out.l = c.l();
  const Matrix& l = out.l;
  const std::size_t n = c.source.dim();
  for (Index a = 0; a < n && !r.full(); ++a) {
    for (Index b = 0; b < n && !r.full(); ++b) {
      const std::string pair = "(" + c.source.space().label(a) + ", " + c.source.space().label(b) + ")";
      const SparseVec lhs = c.i.apply(c.source.bracket(a, b));
      const SparseVec rhs = c.target.bracket(c.i.column(a), l.column(b));
      if (!(lhs == rhs))
        r.fail("i_[a,b] != [i_a, l_b] on " + pair + ": " + show(c.target.space(), lhs) + " vs " +
               show(c.target.space(), rhs));
      if (b >= a) {
        const SparseVec ii = c.target.bracket(c.i.column(a), c.i.column(b));
        if (!ii.empty()) r.fail("[i_a, i_b] = " + show(c.target.space(), ii) + " on " + pair);
      }
    }
  }
  r.merge(check_dgla_morphism({c.source, c.target, l}), "l: ");
  return out;
}

TensorCartan tensor_extend_cartan(const CartanHomotopy& c, const CDGA& a) {
  Report cdga = check_cdga(a);
  if (!cdga.ok()) throw InputError("tensor_extend_cartan: " + cdga.failures.front());
  TensorCartan out{{}, tensor(c.source, a), tensor(c.target, a)};
  Matrix i(out.target.dgla.dim(), out.source.dgla.dim());
  for (Index s = 0; s < out.source.factors.size(); ++s) {
    const auto [x, e] = out.source.factors[s];
    for (const auto& [m, v] : c.i.column(x)) i.add(out.target.index.at({m, e}), s, v);
  }
  out.cartan = {out.source.dgla, out.target.dgla, std::move(i)};
  return out;
}

CartanHomotopy compose_cartan(const DGLAMorphism& g, const CartanHomotopy& c, const DGLAMorphism& f) {
  if (f.map.rows() != c.source.dim() || g.map.cols() != c.target.dim())
    throw InputError("compose_cartan: dimension mismatch");
  return {f.source, g.target, g.map * c.i * f.map};
}

SparseVec ContractionPairing::apply(Index a, Index x) const {
  auto it = table.find({a, x});
  return it == table.end() ? SparseVec{} : it->second;
}

SparseVec ContractionPairing::apply(const SparseVec& a, const SparseVec& x) const {
  SparseVec out;
  for (const auto& [i, c] : a)
    for (const auto& [j, d] : x) {
      auto it = table.find({i, j});
      if (it != table.end()) out.axpy(c * d, it->second);
    }
  return out;
}

InducedCartan induced_cartan(const ContractionPairing& p) {
  InducedCartan out{hom_dgla(p.v), {}};
  Matrix i(out.hom.dgla.dim(), p.l.dim());
  const std::size_t n = p.v.space.dim();
  for (Index a = 0; a < p.l.dim(); ++a) {
    Matrix m(n, n);
    for (Index x = 0; x < n; ++x) m.set_column(x, p.apply(a, x));
    i.set_column(a, out.hom.element(m));
  }
  out.cartan = {p.l, out.hom.dgla, std::move(i)};
  return out;
}

ContractionPairing line_contraction(unsigned p) {
  if (p == 0) throw InputError("line_contraction: polynomial degree must be positive");
  std::vector<std::pair<int, std::string>> forms;
  for (unsigned k = 0; k <= p; ++k) forms.emplace_back(0, "x^" + std::to_string(k));
  for (unsigned k = 0; k < p; ++k) forms.emplace_back(1, "x^" + std::to_string(k) + ".dx");
  const GradedSpace v = make_space(forms);
  Matrix d(v.dim(), v.dim());
  for (unsigned k = 1; k <= p; ++k)
    d.set(v.index_of("x^" + std::to_string(k - 1) + ".dx"), v.index_of("x^" + std::to_string(k)), k);
  DGLA l(Complex::zero_differential(make_space({{0, "d/dx"}, {0, "x.d/dx"}})));
  l.set_bracket(1, 0, SparseVec::unit(0, -1));
  ContractionPairing out{l, Complex(v, d), {}};
  for (unsigned k = 0; k < p; ++k) {
    const Index w = v.index_of("x^" + std::to_string(k) + ".dx");
    out.table[{0, w}] = SparseVec::unit(v.index_of("x^" + std::to_string(k)));
    out.table[{1, w}] = SparseVec::unit(v.index_of("x^" + std::to_string(k + 1)));
  }
  return out;
}

Report check_contraction(const ContractionPairing& p) {
  Report r;
  for (const auto& [key, v] : p.table) {
    const auto [a, x] = key;
    if (a >= p.l.dim() || x >= p.v.space.dim()) {
      r.fail("pairing index out of range");
      continue;
    }
    const int deg = p.l.degree(a) + p.v.space.degree(x) - 1;
    for (const auto& [k, c] : v) {
      if (k >= p.v.space.dim() || p.v.space.degree(k) != deg)
        r.fail(p.l.space().label(a) + " ⌟ " + p.v.space.label(x) + " has a component of the wrong degree");
    }
  }
  if (!r.ok()) return r;
  r.merge(check_cartan(induced_cartan(p).cartan).report);
  return r;
}

Report check_semicosimplicial_contraction(const SemicosimplicialContraction& c, bool levelwise) {
  Report r;
  const std::size_t levels = c.lie.levels.size();
  if (c.complex.levels.size() != levels || c.levels.size() != levels) {
    r.fail("the Lie object, the complex and the pairings have different truncations");
    return r;
  }
  r.merge(check_semicosimplicial(c.lie), "Lie object: ");
  r.merge(check_semicosimplicial(c.complex), "complex: ");
  if (!r.ok()) return r;
  for (std::size_t n = 0; n < levels; ++n) {
    const ContractionPairing& p = c.levels[n];
    if (p.l.dim() != c.lie.levels[n].dim() || p.v.space.dim() != c.complex.levels[n].dim()) {
      r.fail("level " + std::to_string(n) + ": pairing does not match the objects");
      continue;
    }
    if (levelwise) {
      r.merge(check_contraction(p), "level " + std::to_string(n) + ": ");
      continue;
    }
    for (const auto& [key, v] : p.table)
      for (const auto& [k, x] : v)
        if (p.v.space.degree(k) != p.l.degree(key.first) + p.v.space.degree(key.second) - 1)
          r.fail("level " + std::to_string(n) + ": pairing of the wrong degree");
  }
  if (!r.ok()) return r;
  for (unsigned n = 1; n < levels; ++n) {
    const ContractionPairing& lo = c.levels[n - 1];
    const ContractionPairing& hi = c.levels[n];
    for (unsigned k = 0; k <= n && !r.full(); ++k) {
      const Matrix& dl = c.lie.coface(n, k);
      const Matrix& dv = c.complex.coface(n, k);
      for (Index a = 0; a < lo.l.dim(); ++a)
        for (Index x = 0; x < lo.v.space.dim(); ++x) {
          const SparseVec lhs = dv.apply(lo.apply(a, x));
          const SparseVec rhs = hi.apply(dl.column(a), dv.column(x));
          if (!(lhs == rhs))
            r.fail("coface " + std::to_string(k) + " at level " + std::to_string(n) + " does not commute with " +
                   lo.l.space().label(a) + " ⌟ " + lo.v.space.label(x));
        }
    }
  }
  return r;
}

namespace {

const SemicosimplicialContraction& validated(const SemicosimplicialContraction& c) {
  Report r = check_semicosimplicial_contraction(c, false);
  if (!r.ok()) throw InputError("semicosimplicial contraction: " + r.failures.front());
  return c;
}

}  // namespace

TWContraction::TWContraction(SemicosimplicialContraction c)
    : data_(validated(c)), lie_(data_.lie), complex_(data_.complex) {}

TWElement TWContraction::contract(const TWElement& x, const TWElement& y) const {
  return tw_tensor_phi(lie_, x, complex_, y,
                       [this](unsigned n, Index i, Index j) { return data_.levels[n].apply(i, j); });
}

TWElement TWContraction::lie_derivative(const TWElement& x, const TWElement& z) const {
  TWElement out = complex_.d(contract(x, z));
  complex_.axpy(out, parity(lie_.degree(x)), contract(x, complex_.d(z)));
  complex_.axpy(out, 1, contract(lie_.d(x), z));
  return out;
}

Report TWContraction::check(const std::vector<TWElement>& xs, const std::vector<TWElement>& zs) const {
  Report r;
  for (std::size_t p = 0; p < xs.size() && !r.full(); ++p) {
    const TWElement& x = xs[p];
    if (lie_.is_zero(x)) continue;
    const int dx = lie_.degree(x);
    for (const TWElement& z : zs) {
      if (complex_.is_zero(z)) continue;
      const TWElement xz = contract(x, z);
      if (!complex_.check_compatible(xz).ok()) r.fail("x⌟z is not a compatible sequence for x #" + std::to_string(p));
    }
    for (std::size_t q = 0; q < xs.size() && !r.full(); ++q) {
      const TWElement& y = xs[q];
      if (lie_.is_zero(y)) continue;
      const int dy = lie_.degree(y);
      const TWElement xy = lie_.bracket(x, y);
      for (const TWElement& z : zs) {
        if (complex_.is_zero(z)) continue;
        TWElement lhs = contract(xy, z);
        TWElement rhs = contract(x, lie_derivative(y, z));
        complex_.axpy(rhs, -parity(static_cast<long long>(dx - 1) * dy), lie_derivative(y, contract(x, z)));
        if (!complex_.equal(lhs, rhs)) r.fail("i_[x,y] != [i_x, l_y] on pair #" + std::to_string(p) + ", #" + std::to_string(q));
        TWElement ii = contract(x, contract(y, z));
        complex_.axpy(ii, -parity(static_cast<long long>(dx - 1) * (dy - 1)), contract(y, contract(x, z)));
        if (!complex_.is_zero(ii)) r.fail("[i_x, i_y] != 0 on pair #" + std::to_string(p) + ", #" + std::to_string(q));
      }
    }
  }
  return r;
}

PhiMorphism build_phi_morphism(const CartanHomotopy& c, const DGLAMorphism& chi, unsigned cutoff) {
  if (chi.map.rows() != c.target.dim()) throw InputError("build_phi_morphism: χ does not land in the target of i");
  const Matrix l = c.l();
  Matrix phi(chi.source.dim(), c.source.dim());
  for (Index a = 0; a < c.source.dim(); ++a) {
    auto s = solve(chi.map, l.column(a));
    if (!s) throw InputError("build_phi_morphism: l(" + c.source.space().label(a) + ") is not in the image of χ");
    phi.set_column(a, *s);
  }
  PhiMorphism out{build_cone(chi, cutoff), phi, {}};
  Matrix f(out.cone.space().dim(), c.source.dim());
  for (Index a = 0; a < c.source.dim(); ++a) {
    for (const auto& [n, v] : phi.column(a)) f.add(out.cone.l_index[n], a, v);
    for (const auto& [m, v] : c.i.column(a)) f.add(out.cone.m_index[m], a, v);
  }
  out.morphism = linear_morphism(dgla_to_linfty(c.source, cutoff), out.cone.brackets, f);
  return out;
}

SmallExtension small_extension(const ArtinianAlgebra& a, std::size_t socle) {
  if (socle == 0 || socle >= a.dim()) throw InputError("small_extension: the kernel must be a monomial of m_A");
  for (std::size_t j = 1; j < a.dim(); ++j) {
    if (a.weight(j) == 1 && a.product(j, socle))
      throw InputError("small_extension: " + a.name(socle) + " is not annihilated by " + a.name(j));
  }
  // Minimal generators of the ideal of A are the monomials one step outside its basis.
  std::vector<Exponents> ideal{a.monomial(socle)};
  const std::size_t vars = a.variables().size();
  for (std::size_t i = 0; i < a.dim(); ++i)
    for (std::size_t v = 0; v < vars; ++v) {
      Exponents e = a.monomial(i);
      ++e[v];
      if (!a.find(e)) ideal.push_back(e);
    }
  SmallExtension out{a, ArtinianAlgebra(a.variables(), ideal), socle, {}};
  for (std::size_t i = 0; i < out.b.dim(); ++i) out.b_to_a.push_back(*a.find(out.b.monomial(i)));
  return out;
}

ExtVec lift_to(const SmallExtension& e, const ExtVec& x) {
  ExtVec out;
  for (const auto& [k, v] : x) {
    if (k >= e.b_to_a.size()) throw InputError("lift: monomial index out of range");
    out[e.b_to_a[k]] = v;
  }
  return out;
}

namespace {

SparseVec kernel_part(const SmallExtension& e, const ExtVec& defect, const std::string& what) {
  SparseVec out;
  for (const auto& [k, v] : defect) {
    if (v.empty()) continue;
    if (k != e.kernel) throw Error(what + ": defect outside the kernel of the extension");
    out = v;
  }
  return out;
}

}  // namespace

ObstructionReport obstruction_kernel_check(const LInftyMorphism& g, const Certificate& w, const SmallExtension& e,
                                           const ExtVec& x) {
  const LInftyStructure& v = g.source;
  require_ext(v.space(), x, 1, "obstruction input");
  if (!check_mc_linfty(v, e.b, x)) throw InputError("obstruction: x is not Maurer-Cartan over " + e.b.spec());
  ObstructionReport out;
  const ExtVec lift = lift_to(e, x);
  out.defect = kernel_part(e, mc_defect_linfty(v, e.a, lift), "source");
  const Matrix qv = v.q1();
  out.cocycle = qv.apply(out.defect).empty();
  const CohomologySplitting sv = cohomology_splitting(Complex(v.space(), -1 * qv));
  const CohomologySplitting sw = cohomology_splitting(Complex(g.target.space(), -1 * g.target.q1()));
  out.v_class = cohomology_class(sv, out.defect);
  out.pushed = cohomology_class(sw, g.f1().apply(out.defect));
  const ExtVec pushed_lift = push_mc(g, e.a, lift);
  out.target_class = cohomology_class(sw, kernel_part(e, mc_defect_linfty(g.target, e.a, pushed_lift), "target"));
  out.contradiction = w.verdict == Verdict::Yes && !out.pushed.empty();
  return out;
}

std::optional<ExtVec> random_mc(const LInftyStructure& l, const ArtinianAlgebra& a, std::mt19937_64& rng, int bound) {
  const GradedSpace& v = l.space();
  const Index lo = v.offset(1), hi = v.offset(2);
  const Matrix q1 = l.q1();
  Matrix block(v.dim(), hi - lo);
  for (Index j = lo; j < hi; ++j) block.set_column(j - lo, q1.column(j));
  const std::vector<SparseVec> cocycles = kernel(block);
  auto widen = [&](const SparseVec& s) {
    SparseVec out;
    for (const auto& [j, c] : s) out.add(j + lo, c);
    return out;
  };
  ExtVec x;
  for (unsigned w = 1; w < a.nilpotency(); ++w) {
    const ExtVec defect = weight_part(a, mc_defect_linfty(l, a, x), w);
    for (std::size_t m = 1; m < a.dim(); ++m) {
      if (a.weight(m) != w) continue;
      SparseVec rhs;
      auto it = defect.find(m);
      if (it != defect.end()) rhs = -1 * it->second;
      auto s = solve(block, rhs);
      if (!s) return std::nullopt;
      SparseVec xm = widen(*s);
      for (const auto& k : cocycles) xm.axpy(random_small(rng, bound), widen(k));
      if (!xm.empty()) x[m] = xm;
    }
  }
  return x;
}

}  // namespace deforma
