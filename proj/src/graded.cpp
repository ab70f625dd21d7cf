#include "deforma/graded.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace deforma {

GradedSpace::GradedSpace(const std::map<int, std::vector<std::string>>& components) {
  for (const auto& [deg, labels] : components) {
    for (const auto& l : labels) {
      if (!lookup_.emplace(l, labels_.size()).second) {
        throw InputError("duplicate basis label '" + l + "'");
      }
      degrees_.push_back(deg);
      labels_.push_back(l);
    }
  }
}

std::size_t GradedSpace::dim(int degree) const {
  return static_cast<std::size_t>(std::count(degrees_.begin(), degrees_.end(), degree));
}

Index GradedSpace::offset(int degree) const {
  return static_cast<Index>(std::lower_bound(degrees_.begin(), degrees_.end(), degree) - degrees_.begin());
}

std::vector<int> GradedSpace::support() const {
  std::vector<int> out;
  for (int d : degrees_) {
    if (out.empty() || out.back() != d) out.push_back(d);
  }
  return out;
}

std::optional<Index> GradedSpace::find(const std::string& label) const {
  auto it = lookup_.find(label);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

Index GradedSpace::index_of(const std::string& label) const {
  auto i = find(label);
  if (!i) throw InputError("unknown basis label '" + label + "'");
  return *i;
}

std::map<int, std::vector<std::string>> GradedSpace::components() const {
  std::map<int, std::vector<std::string>> out;
  for (Index i = 0; i < dim(); ++i) out[degrees_[i]].push_back(labels_[i]);
  return out;
}

GradedSpace GradedSpace::shifted(int n) const {
  std::map<int, std::vector<std::string>> comps;
  for (const auto& [d, labels] : components()) comps[d - n] = labels;
  return GradedSpace(comps);
}

GradedSpace make_space(const std::vector<std::pair<int, std::string>>& elements, std::vector<Index>* positions) {
  std::map<int, std::vector<std::string>> comps;
  for (const auto& [d, l] : elements) comps[d].push_back(l);
  GradedSpace v(comps);
  if (positions) {
    positions->clear();
    for (const auto& [d, l] : elements) positions->push_back(v.index_of(l));
  }
  return v;
}

void require_degree(const GradedSpace& src, const GradedSpace& tgt, int deg, const Matrix& m,
                    const std::string& what) {
  if (m.rows() != tgt.dim() || m.cols() != src.dim()) {
    throw InputError(what + ": matrix shape does not match the graded spaces");
  }
  for (Index j = 0; j < m.cols(); ++j) {
    for (const auto& [i, c] : m.column(j)) {
      if (tgt.degree(i) != src.degree(j) + deg) {
        throw InputError(what + ": entry (" + tgt.label(i) + ", " + src.label(j) + ") violates degree " +
                         std::to_string(deg));
      }
    }
  }
}

GradedMap::GradedMap(GradedSpace src, GradedSpace tgt, int deg, Matrix m)
    : source(std::move(src)), target(std::move(tgt)), degree(deg), matrix(std::move(m)) {
  require_degree(source, target, degree, matrix, "graded map");
}

GradedMap GradedMap::zero(const GradedSpace& src, const GradedSpace& tgt, int deg) {
  return GradedMap(src, tgt, deg, Matrix(tgt.dim(), src.dim()));
}

GradedMap GradedMap::identity(const GradedSpace& v) { return GradedMap(v, v, 0, Matrix::identity(v.dim())); }

std::vector<std::vector<Rational>> GradedMap::block(int source_degree) const {
  const Index s0 = source.offset(source_degree);
  const std::size_t ns = source.dim(source_degree);
  const Index t0 = target.offset(source_degree + degree);
  const std::size_t nt = target.dim(source_degree + degree);
  std::vector<std::vector<Rational>> out(nt, std::vector<Rational>(ns, Rational(0)));
  for (std::size_t j = 0; j < ns; ++j) {
    for (const auto& [i, c] : matrix.column(s0 + j)) out[i - t0][j] = c;
  }
  return out;
}

GradedMap compose(const GradedMap& g, const GradedMap& f) {
  if (!(g.source == f.target)) throw InputError("compose: incompatible spaces");
  return GradedMap(f.source, g.target, f.degree + g.degree, g.matrix * f.matrix);
}

Complex::Complex(GradedSpace v, Matrix d) : space(std::move(v)), differential(std::move(d)) {
  require_degree(space, space, 1, differential, "differential");
  if (!(differential * differential).is_zero()) throw InputError("differential does not square to zero");
}

Complex Complex::zero_differential(const GradedSpace& v) { return Complex(v, Matrix(v.dim(), v.dim())); }

Complex shift(const Complex& c, int n) {
  Matrix d = c.differential;
  if (n % 2 != 0) d *= -1;
  // Shifting relabels degrees only; global positions are unchanged.
  return Complex(c.space.shifted(n), std::move(d));
}

std::map<int, std::size_t> cohomology_dims(const Complex& c) {
  std::map<int, std::size_t> out;
  const CohomologySplitting s = cohomology_splitting(c);
  for (int d : c.space.support()) out[d] = s.cohomology.dim(d);
  return out;
}

namespace {

CohomologySplitting forward_splitting(const Complex& c) {
  const GradedSpace& v = c.space;
  const Matrix& d = c.differential;
  const std::size_t n = v.dim();

  std::vector<std::pair<int, std::string>> h_elems;
  std::vector<SparseVec> h_vectors;
  Matrix homotopy(n, n);

  std::vector<SparseVec> prev_complement;  // K_{i-1}
  int prev_degree = 0;
  bool have_prev = false;

  struct PendingProjection {
    Index source;
    std::vector<std::pair<std::size_t, Rational>> coords;  // (global H position, coefficient)
  };
  std::vector<PendingProjection> pending;

  for (int deg : v.support()) {
    const Index off = v.offset(deg);
    const std::size_t nd = v.dim(deg);
    const bool adjacent = have_prev && prev_degree == deg - 1;

    std::vector<SparseVec> boundary;
    std::vector<SparseVec> boundary_pre;
    if (adjacent) {
      for (const auto& k : prev_complement) {
        SparseVec b = d.apply(k);
        if (!b.empty()) {
          boundary.push_back(std::move(b));
          boundary_pre.push_back(k);
        }
      }
    }

    Eliminator cols;
    std::vector<SparseVec> cycles;
    for (std::size_t j = 0; j < nd; ++j) {
      if (auto rel = cols.insert(d.column(off + j))) {
        SparseVec z;
        for (const auto& [local, coef] : *rel) z.add(off + local, coef);
        cycles.push_back(std::move(z));
      }
    }

    Eliminator hsel;
    for (const auto& b : boundary) hsel.insert(b);
    std::vector<SparseVec> homology;
    for (const auto& z : cycles) {
      if (!hsel.insert(z)) homology.push_back(z);
    }

    Eliminator ksel;
    for (const auto& z : cycles) ksel.insert(z);
    std::vector<SparseVec> complement;
    for (std::size_t j = 0; j < nd; ++j) {
      SparseVec e = SparseVec::unit(off + j);
      if (!ksel.insert(e)) complement.push_back(std::move(e));
    }

    Eliminator decomp;
    for (const auto& b : boundary) decomp.insert(b);
    for (const auto& hv : homology) decomp.insert(hv);
    for (const auto& k : complement) decomp.insert(k);
    if (decomp.rank() != nd) throw Error("cohomology_splitting: inconsistent decomposition");

    const std::size_t h_base = h_vectors.size();
    for (std::size_t k = 0; k < homology.size(); ++k) {
      h_elems.emplace_back(deg, "h" + std::to_string(deg) + "_" + std::to_string(k));
      h_vectors.push_back(homology[k]);
    }

    const std::size_t nb = boundary.size();
    const std::size_t nh = homology.size();
    for (std::size_t j = 0; j < nd; ++j) {
      const auto coords = decomp.express(SparseVec::unit(off + j));
      PendingProjection p{off + j, {}};
      SparseVec hcol;
      for (const auto& [id, coef] : *coords) {
        if (id < nb) {
          hcol.axpy(-coef, boundary_pre[id]);
        } else if (id < nb + nh) {
          p.coords.emplace_back(h_base + (id - nb), coef);
        }
      }
      homotopy.set_column(off + j, std::move(hcol));
      pending.push_back(std::move(p));
    }

    prev_complement = std::move(complement);
    prev_degree = deg;
    have_prev = true;
  }

  GradedSpace hspace = make_space(h_elems);
  // make_space keeps degree order and insertion order, which matches h_vectors.
  Matrix projection(hspace.dim(), n);
  Matrix inclusion(n, hspace.dim());
  for (std::size_t k = 0; k < h_vectors.size(); ++k) inclusion.set_column(k, h_vectors[k]);
  for (const auto& p : pending) {
    for (const auto& [hpos, coef] : p.coords) projection.add(hpos, p.source, coef);
  }
  return CohomologySplitting{c, std::move(hspace), std::move(projection), std::move(inclusion), std::move(homotopy)};
}

Matrix permutation_matrix(const std::vector<Index>& perm) {
  // column j -> row perm[j]
  Matrix p(perm.size(), perm.size());
  for (Index j = 0; j < perm.size(); ++j) p.set(perm[j], j, 1);
  return p;
}

}  // namespace

CohomologySplitting cohomology_splitting(const Complex& c, PivotOrder order) {
  if (order == PivotOrder::Forward) return forward_splitting(c);
  // Reverse the basis order inside each degree, split, and conjugate back.
  const GradedSpace& v = c.space;
  std::vector<Index> perm(v.dim());
  std::map<int, std::vector<std::string>> comps = v.components();
  for (auto& [deg, labels] : comps) std::reverse(labels.begin(), labels.end());
  GradedSpace rv(comps);
  for (Index i = 0; i < v.dim(); ++i) perm[i] = rv.index_of(v.label(i));
  const Matrix p = permutation_matrix(perm);    // V -> RV
  const Matrix pinv = p.transpose();            // RV -> V
  Complex rc(rv, p * c.differential * pinv);
  CohomologySplitting s = forward_splitting(rc);
  return CohomologySplitting{c, s.cohomology, s.projection * p, pinv * s.inclusion, pinv * s.homotopy * p};
}

std::string CohomologySplitting::verify() const {
  const Matrix& d = complex.differential;
  const std::size_t nh = cohomology.dim();
  if (!(projection * inclusion == Matrix::identity(nh))) return "pi∘iota != id";
  if (!(d * inclusion).is_zero()) return "d∘iota != 0";
  Matrix lhs = inclusion * projection - Matrix::identity(complex.space.dim());
  Matrix rhs = homotopy * d + d * homotopy;
  if (!(lhs == rhs)) return "iota∘pi - id != h∘d + d∘h";
  if (!(homotopy * homotopy).is_zero()) return "h∘h != 0";
  if (!(homotopy * inclusion).is_zero()) return "h∘iota != 0";
  if (!(projection * homotopy).is_zero()) return "pi∘h != 0";
  require_degree(complex.space, cohomology, 0, projection, "projection");
  require_degree(cohomology, complex.space, 0, inclusion, "inclusion");
  require_degree(complex.space, complex.space, -1, homotopy, "homotopy");
  return {};
}

bool injective_in_cohomology(const Complex& a, const Complex& b, const Matrix& f) {
  const CohomologySplitting s = cohomology_splitting(a);
  Eliminator e;
  for (Index j = 0; j < b.differential.cols(); ++j) e.insert(b.differential.column(j));
  const std::size_t base = e.rank();
  for (Index k = 0; k < s.inclusion.cols(); ++k) e.insert(f.apply(s.inclusion.column(k)));
  return e.rank() - base == s.cohomology.dim();
}

SparseVec cohomology_class(const CohomologySplitting& s, const SparseVec& cocycle) {
  return s.projection.apply(cocycle);
}

}  // namespace deforma

namespace deforma {

namespace {

int vector_degree(const GradedSpace& v, const SparseVec& x) {
  if (x.empty()) throw InputError("zero vector where a homogeneous basis vector is required");
  const int d = v.degree(x.leading());
  for (const auto& [i, c] : x) {
    if (v.degree(i) != d) throw InputError("vector is not homogeneous");
  }
  return d;
}

}  // namespace

std::optional<ComplementData> complement_subcomplex(const Complex& c, const std::vector<SparseVec>& sub) {
  const GradedSpace& v = c.space;
  const Matrix& d = c.differential;
  std::map<int, std::vector<SparseVec>> s_by_deg;
  for (const auto& x : sub) s_by_deg[vector_degree(v, x)].push_back(x);

  Eliminator all_s;
  for (const auto& x : sub) {
    if (all_s.insert(x)) throw InputError("subcomplex basis is linearly dependent");
  }
  for (const auto& x : sub) {
    if (!all_s.in_span(d.apply(x))) throw InputError("the subspace is not closed under the differential");
  }

  ComplementData out;
  std::vector<SparseVec> prev_k_s, prev_k_v;
  int prev_deg = 0;
  bool have_prev = false;
  for (int deg : v.support()) {
    const Index off = v.offset(deg);
    const std::size_t nd = v.dim(deg);
    const auto& s = s_by_deg[deg];
    const bool adjacent = have_prev && prev_deg == deg - 1;

    // cycles and complement inside S
    Eliminator se;
    std::vector<SparseVec> z_s;
    for (const auto& x : s) {
      if (auto rel = se.insert(d.apply(x))) {
        SparseVec z;
        for (const auto& [k, coef] : *rel) z.axpy(coef, s[k]);
        z_s.push_back(std::move(z));
      }
    }
    Eliminator zk;
    for (const auto& z : z_s) zk.insert(z);
    std::vector<SparseVec> k_s;
    for (const auto& x : s) {
      if (!zk.insert(x)) k_s.push_back(x);
    }
    std::vector<SparseVec> b_s, b_v;
    if (adjacent) {
      for (const auto& k : prev_k_s) b_s.push_back(d.apply(k));
      for (const auto& k : prev_k_v) b_v.push_back(d.apply(k));
    }
    Eliminator hs;
    for (const auto& b : b_s) hs.insert(b);
    std::vector<SparseVec> h_s;
    for (const auto& z : z_s) {
      if (!hs.insert(z)) h_s.push_back(z);
    }

    // cycles of C in this degree
    Eliminator ce;
    std::vector<SparseVec> z_m;
    for (std::size_t j = 0; j < nd; ++j) {
      if (auto rel = ce.insert(d.column(off + j))) {
        SparseVec z;
        for (const auto& [k, coef] : *rel) z.add(off + k, coef);
        z_m.push_back(std::move(z));
      }
    }
    Eliminator km;
    for (const auto& z : z_m) km.insert(z);
    for (const auto& k : k_s) {
      if (km.insert(k)) throw Error("complement_subcomplex: inconsistent cycle decomposition");
    }
    std::vector<SparseVec> k_v;
    for (std::size_t j = 0; j < nd; ++j) {
      SparseVec e = SparseVec::unit(off + j);
      if (!km.insert(e)) k_v.push_back(std::move(e));
    }
    Eliminator hm;
    for (const auto& b : b_s) hm.insert(b);
    for (const auto& b : b_v) hm.insert(b);
    for (const auto& h : h_s) {
      if (hm.insert(h)) return std::nullopt;
    }
    std::vector<SparseVec> h_v;
    for (const auto& z : z_m) {
      if (!hm.insert(z)) h_v.push_back(z);
    }
    for (const auto& x : k_v) out.complement.push_back(x);
    for (const auto& x : b_v) out.complement.push_back(x);
    for (const auto& x : h_v) {
      out.complement.push_back(x);
      out.cohomology.push_back(x);
    }
    prev_k_s = std::move(k_s);
    prev_k_v = std::move(k_v);
    prev_deg = deg;
    have_prev = true;
  }
  return out;
}

}  // namespace deforma
