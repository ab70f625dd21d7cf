#include "deforma/apl.hpp"

#include <bit>
#include <sstream>

#include "deforma/graded.hpp"

namespace deforma {

namespace {

// Sign of dx_I ∧ dx_J relative to dx_{I∪J}; 0 when they overlap.
int wedge_sign(std::uint32_t a, std::uint32_t b) {
  if (a & b) return 0;
  int swaps = 0;
  for (std::uint32_t rest = b; rest; rest &= rest - 1) {
    const unsigned j = std::countr_zero(rest);
    swaps += std::popcount(a >> (j + 1));
  }
  return (swaps % 2 == 0) ? 1 : -1;
}

}  // namespace

PolyForm PolyForm::constant(unsigned vars, const Rational& c) {
  PolyForm f(vars);
  f.add({Exponents(vars, 0), 0}, c);
  return f;
}

PolyForm PolyForm::variable(unsigned vars, unsigned i) {
  Exponents e(vars, 0);
  e.at(i - 1) = 1;
  return monomial(vars, e, 0);
}

PolyForm PolyForm::differential(unsigned vars, unsigned i) {
  if (i == 0 || i > vars) throw Error("differential index out of range");
  return monomial(vars, Exponents(vars, 0), 1u << (i - 1));
}

PolyForm PolyForm::monomial(unsigned vars, Exponents a, std::uint32_t mask, const Rational& c) {
  PolyForm f(vars);
  f.add({std::move(a), mask}, c);
  return f;
}

int PolyForm::degree() const {
  if (terms_.empty()) return 0;
  const int d = std::popcount(terms_.begin()->first.second);
  for (const auto& [k, c] : terms_)
    if (std::popcount(k.second) != d) throw Error("form is not homogeneous");
  return d;
}

unsigned PolyForm::polynomial_degree() const {
  unsigned best = 0;
  for (const auto& [k, c] : terms_) {
    unsigned s = 0;
    for (unsigned a : k.first) s += a;
    best = std::max(best, s);
  }
  return best;
}

void PolyForm::add(const Key& k, const Rational& c) {
  if (c == 0) return;
  auto [it, inserted] = terms_.try_emplace(k, c);
  if (!inserted) {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PolyForm& PolyForm::axpy(const Rational& c, const PolyForm& x) {
  if (terms_.empty() && vars_ == 0) vars_ = x.vars_;
  if (c == 0) return *this;
  for (const auto& [k, v] : x.terms_) add(k, c * v);
  return *this;
}

PolyForm& PolyForm::operator*=(const Rational& c) {
  if (c == 0) {
    terms_.clear();
    return *this;
  }
  for (auto& [k, v] : terms_) v *= c;
  return *this;
}

PolyForm operator*(const PolyForm& a, const PolyForm& b) {
  PolyForm out(std::max(a.vars_, b.vars_));
  for (const auto& [ka, ca] : a.terms_) {
    for (const auto& [kb, cb] : b.terms_) {
      const int s = wedge_sign(ka.second, kb.second);
      if (s == 0) continue;
      Exponents e = ka.first;
      for (std::size_t i = 0; i < e.size(); ++i) e[i] += kb.first[i];
      out.add({std::move(e), ka.second | kb.second}, s * ca * cb);
    }
  }
  return out;
}

PolyForm PolyForm::d() const {
  PolyForm out(vars_);
  for (const auto& [k, c] : terms_) {
    for (unsigned i = 0; i < vars_; ++i) {
      if (k.first[i] == 0 || (k.second >> i & 1u)) continue;
      Exponents e = k.first;
      const unsigned a = e[i]--;
      // dx_i ∧ dx_I
      out.add({std::move(e), k.second | (1u << i)}, wedge_sign(1u << i, k.second) * c * a);
    }
  }
  return out;
}

PolyForm PolyForm::pullback(const std::vector<PolyForm>& images) const {
  if (images.size() != vars_) throw Error("pullback needs one image per variable");
  const unsigned target = images.empty() ? 0 : images.front().vars();
  std::vector<PolyForm> diffs;
  for (const auto& im : images) diffs.push_back(im.d());
  PolyForm out(target);
  std::map<std::pair<unsigned, unsigned>, PolyForm> powers;
  auto power = [&](unsigned i, unsigned a) -> const PolyForm& {
    for (unsigned b = 0; b <= a; ++b) {
      if (powers.count({i, b})) continue;
      powers.emplace(std::make_pair(i, b), b == 0 ? PolyForm::constant(target, 1) : powers.at({i, b - 1}) * images[i]);
    }
    return powers.at({i, a});
  };
  for (const auto& [k, c] : terms_) {
    PolyForm term = PolyForm::constant(target, c);
    for (unsigned i = 0; i < vars_ && !term.is_zero(); ++i)
      if (k.first[i]) term = term * power(i, k.first[i]);
    for (unsigned i = 0; i < vars_ && !term.is_zero(); ++i)
      if (k.second >> i & 1u) term = term * diffs[i];
    out += term;
  }
  return out;
}

std::string PolyForm::to_string() const {
  if (terms_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (const auto& [k, c] : terms_) {
    if (!first) os << " + ";
    first = false;
    os << to_short_string(c);
    for (unsigned i = 0; i < k.first.size(); ++i) {
      if (k.first[i] == 1) os << "*t" << i + 1;
      else if (k.first[i] > 1) os << "*t" << i + 1 << "^" << k.first[i];
    }
    for (unsigned i = 0; i < vars_; ++i)
      if (k.second >> i & 1u) os << "*dt" << i + 1;
  }
  return os.str();
}

PolyForm simplex_coordinate(unsigned n, unsigned i) {
  if (i > n) throw Error("vertex out of range");
  if (i > 0) return PolyForm::variable(n, i);
  PolyForm t0 = PolyForm::constant(n, 1);
  for (unsigned j = 1; j <= n; ++j) t0 -= PolyForm::variable(n, j);
  return t0;
}

PolyForm simplex_differential(unsigned n, unsigned i) { return simplex_coordinate(n, i).d(); }

PolyForm apl_face(unsigned k, const PolyForm& form) {
  const unsigned n = form.vars();
  if (n == 0 || k > n) throw InputError("face index out of range");
  // t_i ↦ t_i (i < k), 0 (i = k), t_{i-1} (i > k), in barycentric coordinates of Δ_{n-1}.
  std::vector<PolyForm> images;
  for (unsigned i = 1; i <= n; ++i) {
    if (i < k) images.push_back(simplex_coordinate(n - 1, i));
    else if (i == k) images.push_back(PolyForm(n - 1));
    else images.push_back(simplex_coordinate(n - 1, i - 1));
  }
  return form.pullback(images);
}

Rational integrate(const PolyForm& form) {
  const unsigned n = form.vars();
  const std::uint32_t top = n == 0 ? 0 : (n == 32 ? ~0u : (1u << n) - 1);
  Rational sum = 0;
  for (const auto& [k, c] : form.terms()) {
    if (k.second != top) continue;
    Rational num = 1;
    unsigned total = n;
    for (unsigned a : k.first) {
      num *= factorial(a);
      total += a;
    }
    sum += c * num / factorial(total);
  }
  return sum;
}

PolyForm whitney_form(unsigned n, const std::vector<unsigned>& s) {
  const unsigned k = static_cast<unsigned>(s.size()) - 1;
  PolyForm out(n);
  for (unsigned j = 0; j <= k; ++j) {
    PolyForm term = simplex_coordinate(n, s[j]);
    for (unsigned i = 0; i <= k; ++i)
      if (i != j) term = term * simplex_differential(n, s[i]);
    out.axpy(j % 2 == 0 ? 1 : -1, term);
  }
  return factorial(k) * out;
}

PolyForm restrict_to_face(const PolyForm& form, unsigned n, const std::vector<unsigned>& s) {
  PolyForm f = form;
  // Remove the missing vertices from the top down so earlier indices stay valid.
  for (unsigned v = n + 1; v-- > 0;) {
    if (std::find(s.begin(), s.end(), v) == s.end()) f = apl_face(v, f);
  }
  return f;
}

namespace {

std::vector<std::vector<unsigned>> vertex_subsets(unsigned n) {
  std::vector<std::vector<unsigned>> out;
  for (std::uint32_t m = 1; m < (1u << (n + 1)); ++m) {
    std::vector<unsigned> s;
    for (unsigned v = 0; v <= n; ++v)
      if (m >> v & 1u) s.push_back(v);
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace

PolyForm whitney_projection(const PolyForm& form, unsigned n) {
  PolyForm out(n);
  for (const auto& s : vertex_subsets(n)) {
    const Rational c = integrate(restrict_to_face(form, n, s));
    if (c != 0) out.axpy(c, whitney_form(n, s));
  }
  return out;
}

PolyForm cone_homotopy(const PolyForm& form, unsigned n, unsigned j) {
  // φ(u, x) = u x + (1 - u) e_j on [0,1] × Δ_n; u is the last variable.
  std::vector<PolyForm> images;
  const PolyForm u = PolyForm::variable(n + 1, n + 1);
  const PolyForm one = PolyForm::constant(n + 1, 1);
  for (unsigned i = 1; i <= n; ++i) {
    PolyForm im = u * PolyForm::variable(n + 1, i);
    if (i == j) im += one - u;
    images.push_back(std::move(im));
  }
  const PolyForm pulled = form.pullback(images);
  const std::uint32_t du = 1u << n;
  PolyForm out(n);
  for (const auto& [k, c] : pulled.terms()) {
    if (!(k.second & du)) continue;
    // x^a u^b dx_I ∧ du, integrated over u after moving du to the front.
    const std::uint32_t rest = k.second & ~du;
    const int sign = std::popcount(rest) % 2 == 0 ? 1 : -1;
    Exponents a(k.first.begin(), k.first.begin() + n);
    out.add({std::move(a), rest}, sign * c / Rational(k.first[n] + 1));
  }
  return out;
}

PolyForm dupont(const PolyForm& form, unsigned n) {
  // s = Σ_{|S| ≤ n} (-1)^{|S|-1} ω_S ∧ h_{s_k} ... h_{s_0}
  PolyForm out(n);
  for (const auto& s : vertex_subsets(n)) {
    if (s.size() > n) continue;
    PolyForm inner = form;
    for (unsigned v : s) {
      inner = cone_homotopy(inner, n, v);
      if (inner.is_zero()) break;
    }
    if (inner.is_zero()) continue;
    out.axpy(s.size() % 2 == 1 ? 1 : -1, whitney_form(n, s) * inner);
  }
  return out;
}

std::vector<PolyForm::Key> apl_basis(unsigned n, unsigned p) {
  std::vector<PolyForm::Key> out;
  std::vector<Exponents> monomials{Exponents(n, 0)};
  for (unsigned deg = 1; deg <= p; ++deg) {
    std::vector<Exponents> next;
    std::function<void(unsigned, unsigned, Exponents&)> rec = [&](unsigned i, unsigned left, Exponents& e) {
      if (i + 1 == n) {
        e[i] = left;
        next.push_back(e);
        return;
      }
      for (unsigned a = left + 1; a-- > 0;) {
        e[i] = a;
        rec(i + 1, left - a, e);
      }
    };
    if (n > 0) {
      Exponents e(n, 0);
      rec(0, deg, e);
    }
    monomials.insert(monomials.end(), next.begin(), next.end());
  }
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask)
    for (const auto& m : monomials) out.push_back({m, mask});
  return out;
}

}  // namespace deforma
