#include "deforma/deformation.hpp"

#include <functional>

#include "deforma/samples.hpp"

namespace deforma {

namespace {

// Degree-0 coordinates of the level, used when solving linear equations.
Matrix degree_zero_columns(const Matrix& m, const GradedSpace& src, std::vector<Index>* cols) {
  cols->clear();
  for (Index j = 0; j < src.dim(); ++j)
    if (src.degree(j) == 0) cols->push_back(j);
  Matrix out(m.rows(), cols->size());
  for (Index k = 0; k < cols->size(); ++k) out.set_column(k, m.column((*cols)[k]));
  return out;
}

}  // namespace

ExtVec bch(const DGLA& g, const ArtinianAlgebra& a, const ExtVec& x, const ExtVec& y,
           std::optional<unsigned> max_length) {
  require_ext(g.space(), x, 0, "bch argument");
  require_ext(g.space(), y, 0, "bch argument");
  const unsigned top = max_length.value_or(a.nilpotency() - 1);
  std::map<std::vector<int>, ExtVec> nested;
  std::function<const ExtVec&(const std::vector<int>&)> word = [&](const std::vector<int>& w) -> const ExtVec& {
    auto it = nested.find(w);
    if (it != nested.end()) return it->second;
    ExtVec v;
    const ExtVec& head = w.front() == 0 ? x : y;
    if (w.size() == 1) {
      v = head;
    } else {
      const std::vector<int> rest(w.begin() + 1, w.end());
      const ExtVec& tail = word(rest);
      v = ext_bracket(g, a, head, tail);
    }
    return nested.emplace(w, std::move(v)).first->second;
  };
  ExtVec out;
  // Dynkin: Σ_n (-1)^{n-1}/n Σ [X^{r_1}Y^{s_1}...X^{r_n}Y^{s_n}] / ((Σ r_i+s_i) Π r_i! s_i!)
  std::vector<std::pair<unsigned, unsigned>> blocks;
  std::function<void(unsigned)> rec = [&](unsigned used) {
    if (!blocks.empty()) {
      const unsigned n = static_cast<unsigned>(blocks.size());
      Rational c = Rational(n % 2 == 1 ? 1 : -1, n) / Rational(used);
      std::vector<int> w;
      for (const auto& [r, s] : blocks) {
        c /= factorial(r) * factorial(s);
        w.insert(w.end(), r, 0);
        w.insert(w.end(), s, 1);
      }
      ext_axpy(out, c, word(w));
    }
    for (unsigned len = 1; used + len <= top; ++len) {
      for (unsigned r = 0; r <= len; ++r) {
        blocks.emplace_back(r, len - r);
        rec(used + len);
        blocks.pop_back();
      }
    }
  };
  rec(0);
  ext_normalize(out);
  return out;
}

ExtVec z1sc_log(const SemicosimplicialObject& g, const ArtinianAlgebra& a, const ExtVec& x) {
  if (g.truncation() < 1) throw InputError("Z1_sc needs level 1");
  require_ext(g.levels[1].space(), x, 0, "cocycle element");
  if (g.truncation() < 2) return {};
  const DGLA& l2 = g.levels[2];
  const ExtVec d0 = ext_apply(g.coface(2, 0), x);
  const ExtVec d1 = ext_scale(-1, ext_apply(g.coface(2, 1), x));
  const ExtVec d2 = ext_apply(g.coface(2, 2), x);
  return bch(l2, a, bch(l2, a, d0, d1), d2);
}

bool z1sc_check(const SemicosimplicialObject& g, const ArtinianAlgebra& a, const ExtVec& x) {
  return ext_is_zero(z1sc_log(g, a, x));
}

ExtVec gauge_sc(const SemicosimplicialObject& g, const ArtinianAlgebra& a, const ExtVec& gauge, const ExtVec& x) {
  require_ext(g.levels[0].space(), gauge, 0, "gauge element");
  const DGLA& l1 = g.levels[1];
  const ExtVec m1 = ext_scale(-1, ext_apply(g.coface(1, 1), gauge));
  const ExtVec p0 = ext_apply(g.coface(1, 0), gauge);
  return bch(l1, a, bch(l1, a, m1, x), p0);
}

GaugeResult h1sc_equiv(const SemicosimplicialObject& g, const ArtinianAlgebra& a, const ExtVec& x, const ExtVec& y) {
  if (g.truncation() < 1) throw InputError("H1_sc needs level 1");
  GaugeResult r;
  std::vector<Index> cols;
  const Matrix delta = degree_zero_columns(g.coface(1, 0) - g.coface(1, 1), g.levels[0].space(), &cols);
  ExtVec gauge;
  for (unsigned w = 1; w < a.nilpotency(); ++w) {
    const ExtVec defect = ext_diff(gauge_sc(g, a, gauge, x), y);
    const ExtVec part = weight_part(a, defect, w);
    for (const auto& [mono, rhs] : part) {
      const auto sol = solve(delta, (-1) * rhs);
      if (!sol) {
        r.order = w;
        r.reason = "linearized gauge equation has no solution at weight " + std::to_string(w) + " (monomial " +
                   a.name(mono) + ")";
        return r;
      }
      SparseVec lifted;
      for (const auto& [k, c] : *sol) lifted.add(cols[k], c);
      ext_axpy(gauge, 1, ExtVec{{mono, lifted}});
    }
  }
  if (!ext_is_zero(ext_diff(gauge_sc(g, a, gauge, x), y))) {
    r.reason = "gauge equation not satisfied after all weights";
    return r;
  }
  r.equivalent = true;
  r.witness = gauge;
  return r;
}

ExtVec random_level_element(const SemicosimplicialObject& g, unsigned level, const ArtinianAlgebra& a,
                            std::mt19937_64& rng, int bound) {
  const GradedSpace& v = g.levels.at(level).space();
  ExtVec x;
  for (std::size_t m = 1; m < a.dim(); ++m) {
    SparseVec c;
    for (Index i = v.offset(0); i < v.offset(0) + v.dim(0); ++i) c.add(i, random_small(rng, bound));
    if (!c.empty()) x[m] = c;
  }
  return x;
}

ExtVec random_cocycle(const SemicosimplicialObject& g, const ArtinianAlgebra& a, std::mt19937_64& rng, int bound) {
  ExtVec x;
  if (g.truncation() < 1) throw InputError("Z1_sc needs level 1");
  const ExtVec draw = random_level_element(g, 1, a, rng, bound);
  if (g.truncation() < 2) return draw;
  std::vector<Index> cols;
  const Matrix delta =
      degree_zero_columns(g.coface(2, 0) - g.coface(2, 1) + g.coface(2, 2), g.levels[1].space(), &cols);
  for (unsigned w = 1; w < a.nilpotency(); ++w) {
    ext_axpy(x, 1, weight_part(a, draw, w));
    const ExtVec part = weight_part(a, z1sc_log(g, a, x), w);
    for (const auto& [mono, rhs] : part) {
      const auto sol = solve(delta, rhs);
      if (!sol) throw Error("cocycle cannot be extended at weight " + std::to_string(w));
      SparseVec lifted;
      for (const auto& [k, c] : *sol) lifted.add(cols[k], -c);
      ext_axpy(x, 1, ExtVec{{mono, lifted}});
    }
  }
  return x;
}

TWElement TWSource::q(unsigned k, const std::vector<const Element*>& args) const {
  if (k == 1) {
    TWElement out = tw_.zero();
    tw_.axpy(out, -1, tw_.d(*args[0]));
    return out;
  }
  if (k == 2) {
    TWElement out = tw_.bracket(*args[0], *args[1]);
    if (tw_.degree(*args[0]) % 2 != 0) {
      TWElement neg = tw_.zero();
      tw_.axpy(neg, -1, out);
      return neg;
    }
    return out;
  }
  return tw_.zero();
}

TWElement TWSource::homotopy(const Element& x) const {
  TWElement out = tw_.zero();
  tw_.axpy(out, -1, tw_.homotopy(x));
  return out;
}

TotTilde::TotTilde(SemicosimplicialObject g)
    : tw_(std::make_unique<ThomWhitney>(std::move(g))),
      source_(std::make_unique<TWSource>(*tw_)),
      transfer_(std::make_unique<MerkulovTransfer<TWSource>>(*source_, tw_->tot().complex.space)) {}

SparseVec TotTilde::bracket(const Tuple& sorted) { return transfer_->bracket(sorted); }

const TWElement& TotTilde::e_infinity(const Tuple& sorted) { return transfer_->f(sorted); }

LInftyStructure TotTilde::structure(unsigned cutoff, std::optional<int> degree) {
  const GradedSpace& v = space();
  LInftyStructure l(v, cutoff);
  GradedSpace domain = v;
  std::vector<Index> lift;
  if (degree) {
    std::vector<std::pair<int, std::string>> elems;
    for (Index i = v.offset(*degree); i < v.offset(*degree) + v.dim(*degree); ++i) {
      elems.emplace_back(*degree, v.label(i));
      lift.push_back(i);
    }
    domain = make_space(elems);
  } else {
    for (Index i = 0; i < v.dim(); ++i) lift.push_back(i);
  }
  for (unsigned k = 1; k <= cutoff; ++k) {
    for (const Tuple& t : symmetric_basis(domain, k)) {
      Tuple u;
      for (Index i : t) u.push_back(lift[i]);
      SparseVec out = bracket(u);
      if (!out.empty()) l.bracket(k).set(u, std::move(out));
    }
  }
  return l;
}

TWExt TotTilde::push_mc(const ArtinianAlgebra& a, const ExtVec& gamma) {
  require_ext(space(), gamma, 1, "MC element");
  struct Entry {
    std::size_t mono;
    Index i;
    Rational c;
  };
  std::vector<Entry> entries;
  for (const auto& [m, v] : gamma)
    for (const auto& [i, c] : v) entries.push_back({m, i, c});
  TWExt out;
  const unsigned top = a.nilpotency() - 1;
  std::vector<std::size_t> pick;
  std::function<void(std::size_t mono, const Rational& c)> rec = [&](std::size_t mono, const Rational& c) {
    if (!pick.empty()) {
      Tuple t;
      for (std::size_t p : pick) t.push_back(entries[p].i);
      std::sort(t.begin(), t.end());
      const TWElement& f = e_infinity(t);
      auto [it, ins] = out.try_emplace(mono, tw_->zero());
      tw_->axpy(it->second, c / factorial(static_cast<unsigned>(pick.size())), f);
    }
    if (pick.size() == top) return;
    for (std::size_t p = 0; p < entries.size(); ++p) {
      const auto prod = a.product(mono, entries[p].mono);
      if (!prod) continue;
      pick.push_back(p);
      rec(*prod, c * entries[p].c);
      pick.pop_back();
    }
  };
  rec(0, 1);
  for (auto it = out.begin(); it != out.end();) it = tw_->is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

TWExt TotTilde::tw_mc_defect(const ArtinianAlgebra& a, const TWExt& x) const {
  TWExt out;
  auto acc = [&](std::size_t m, const Rational& c, const TWElement& v) {
    auto [it, ins] = out.try_emplace(m, tw_->zero());
    tw_->axpy(it->second, c, v);
  };
  for (const auto& [m, v] : x) acc(m, 1, tw_->d(v));
  for (const auto& [m1, v1] : x)
    for (const auto& [m2, v2] : x) {
      const auto prod = a.product(m1, m2);
      if (prod) acc(*prod, Rational(1, 2), tw_->bracket(v1, v2));
    }
  for (auto it = out.begin(); it != out.end();) it = tw_->is_zero(it->second) ? out.erase(it) : std::next(it);
  return out;
}

ExtVec level_to_tot(const TotData& t, unsigned level, const ExtVec& x, int sign) {
  ExtVec out;
  for (const auto& [m, v] : x) {
    SparseVec w;
    for (const auto& [i, c] : v) w.add(t.index.at(level).at(i), sign * c);
    if (!w.empty()) out[m] = w;
  }
  return out;
}

Theorem52Report theorem52_compare(const SemicosimplicialObject& g, const ArtinianAlgebra& a, std::size_t samples,
                                  std::uint64_t seed, int identification) {
  Theorem52Report r;
  r.identification = identification;
  TotTilde tilde(g);
  const LInftyStructure l = tilde.structure(a.nilpotency() - 1, 1);
  std::mt19937_64 rng(seed);
  for (std::size_t s = 0; s < samples; ++s) {
    ExtVec x;
    switch (s % 3) {
      case 0:
        x = random_cocycle(g, a, rng);
        break;
      case 1: {
        x = random_cocycle(g, a, rng);
        const unsigned w = 1 + static_cast<unsigned>(rng() % (a.nilpotency() - 1));
        ext_axpy(x, 1, weight_part(a, random_level_element(g, 1, a, rng, 1), w));
        break;
      }
      default:
        x = random_level_element(g, 1, a, rng);
    }
    if (s == 0) x.clear();
    const bool z = z1sc_check(g, a, x);
    const bool m = check_mc_linfty(l, a, level_to_tot(tilde.tot(), 1, x, identification));
    ++r.samples;
    r.cocycles += z;
    r.mc += m;
    if (z != m) {
      ++r.disagreements;
      if (r.witnesses.size() < 4)
        r.witnesses.push_back("sample " + std::to_string(s) + ": Z1_sc " + (z ? "yes" : "no") + ", MC " + (m ? "yes" : "no"));
    }
  }
  return r;
}

}  // namespace deforma
