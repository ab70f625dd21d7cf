#include "deforma/artinian.hpp"

#include <algorithm>
#include <cctype>
#include <numeric>
#include <sstream>

#include "deforma/graded.hpp"

namespace deforma {

namespace {

bool divides(const Exponents& g, const Exponents& m) {
  for (std::size_t i = 0; i < g.size(); ++i) {
    if (g[i] > m[i]) return false;
  }
  return true;
}

std::string trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

unsigned parse_unsigned(const std::string& s, std::string_view context) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); })) {
    throw InputError("ring '" + std::string(context) + "': bad exponent '" + s + "'");
  }
  return static_cast<unsigned>(std::stoul(s));
}

Exponents parse_monomial(const std::string& text, const std::vector<std::string>& vars, std::string_view context) {
  Exponents e(vars.size(), 0);
  for (const auto& factor : split(text, '*')) {
    const auto caret = factor.find('^');
    const std::string var = trim(factor.substr(0, caret));
    const unsigned power = caret == std::string::npos ? 1 : parse_unsigned(trim(factor.substr(caret + 1)), context);
    auto it = std::find(vars.begin(), vars.end(), var);
    if (it == vars.end()) throw InputError("ring '" + std::string(context) + "': unknown variable '" + var + "'");
    e[static_cast<std::size_t>(it - vars.begin())] += power;
  }
  return e;
}

}  // namespace

ArtinianAlgebra::ArtinianAlgebra(std::vector<std::string> variables, std::vector<Exponents> ideal)
    : variables_(std::move(variables)), ideal_(std::move(ideal)) {
  const std::size_t m = variables_.size();
  std::vector<unsigned> bound(m, 0);
  for (const auto& g : ideal_) {
    if (g.size() != m) throw InputError("ideal generator has the wrong number of exponents");
    if (std::all_of(g.begin(), g.end(), [](unsigned x) { return x == 0; })) {
      throw InputError("the ideal contains 1");
    }
    std::size_t nonzero = 0, where = 0;
    for (std::size_t i = 0; i < m; ++i) {
      if (g[i] != 0) {
        ++nonzero;
        where = i;
      }
    }
    if (nonzero == 1 && (bound[where] == 0 || g[where] < bound[where])) bound[where] = g[where];
  }
  for (std::size_t i = 0; i < m; ++i) {
    if (bound[i] == 0) throw InputError("variable '" + variables_[i] + "' is not nilpotent in the quotient");
  }
  auto in_ideal = [&](const Exponents& e) {
    return std::any_of(ideal_.begin(), ideal_.end(), [&](const Exponents& g) { return divides(g, e); });
  };
  Exponents e(m, 0);
  auto rec = [&](auto&& self, std::size_t i) -> void {
    if (i == m) {
      if (!in_ideal(e)) basis_.push_back(e);
      return;
    }
    for (unsigned k = 0; k < bound[i]; ++k) {
      e[i] = k;
      self(self, i + 1);
    }
    e[i] = 0;
  };
  rec(rec, 0);
  std::stable_sort(basis_.begin(), basis_.end(), [](const Exponents& a, const Exponents& b) {
    const unsigned wa = std::accumulate(a.begin(), a.end(), 0u), wb = std::accumulate(b.begin(), b.end(), 0u);
    if (wa != wb) return wa < wb;
    return a > b;
  });
  for (std::size_t i = 0; i < basis_.size(); ++i) lookup_.emplace(basis_[i], i);
  table_.assign(basis_.size(), std::vector<std::optional<std::size_t>>(basis_.size()));
  for (std::size_t a = 0; a < basis_.size(); ++a) {
    for (std::size_t b = 0; b < basis_.size(); ++b) {
      Exponents p(m);
      for (std::size_t i = 0; i < m; ++i) p[i] = basis_[a][i] + basis_[b][i];
      auto it = lookup_.find(p);
      if (it != lookup_.end()) table_[a][b] = it->second;
    }
  }
  unsigned top = 0;
  for (std::size_t i = 0; i < basis_.size(); ++i) top = std::max(top, weight(i));
  nilpotency_ = top + 1;
}

ArtinianAlgebra ArtinianAlgebra::truncated(unsigned n, const std::string& variable) {
  if (n == 0) throw InputError("k[t]/(t^0) is the zero ring");
  return ArtinianAlgebra({variable}, {Exponents{n}});
}

ArtinianAlgebra ArtinianAlgebra::parse(std::string_view text) {
  const std::string s = trim(text);
  if (s.rfind("k[", 0) != 0) {
    // shorthand "t^n"
    const auto caret = s.find('^');
    if (caret == std::string::npos) throw InputError("ring '" + s + "': expected 'k[...]/(...)' or 'v^n'");
    const std::string var = trim(s.substr(0, caret));
    if (var.empty()) throw InputError("ring '" + s + "': missing variable");
    return truncated(parse_unsigned(trim(s.substr(caret + 1)), s), var);
  }
  const auto close = s.find(']');
  if (close == std::string::npos) throw InputError("ring '" + s + "': missing ']'");
  std::vector<std::string> vars = split(std::string_view(s).substr(2, close - 2), ',');
  for (const auto& v : vars) {
    if (v.empty()) throw InputError("ring '" + s + "': empty variable name");
  }
  std::string rest = trim(std::string_view(s).substr(close + 1));
  if (rest.size() < 3 || rest[0] != '/' || trim(rest.substr(1)).front() != '(' || rest.back() != ')') {
    throw InputError("ring '" + s + "': expected '/(generators)'");
  }
  rest = trim(rest.substr(1));
  std::vector<Exponents> gens;
  for (const auto& g : split(std::string_view(rest).substr(1, rest.size() - 2), ',')) {
    gens.push_back(parse_monomial(g, vars, s));
  }
  return ArtinianAlgebra(vars, gens);
}

unsigned ArtinianAlgebra::weight(std::size_t i) const {
  const auto& e = basis_.at(i);
  return std::accumulate(e.begin(), e.end(), 0u);
}

std::optional<std::size_t> ArtinianAlgebra::find(const Exponents& e) const {
  auto it = lookup_.find(e);
  if (it == lookup_.end()) return std::nullopt;
  return it->second;
}

std::string ArtinianAlgebra::name(std::size_t i) const {
  const auto& e = basis_.at(i);
  std::string out;
  for (std::size_t v = 0; v < e.size(); ++v) {
    if (e[v] == 0) continue;
    if (!out.empty()) out += "*";
    out += variables_[v];
    if (e[v] > 1) out += "^" + std::to_string(e[v]);
  }
  return out.empty() ? "1" : out;
}

std::optional<std::size_t> ArtinianAlgebra::find_name(std::string_view text) const {
  const std::string s = trim(text);
  if (s == "1") return 0;
  try {
    return find(parse_monomial(s, variables_, s));
  } catch (const InputError&) {
    return std::nullopt;
  }
}

std::string ArtinianAlgebra::spec() const {
  std::ostringstream os;
  os << "k[";
  for (std::size_t i = 0; i < variables_.size(); ++i) os << (i ? "," : "") << variables_[i];
  os << "]/(";
  for (std::size_t g = 0; g < ideal_.size(); ++g) {
    if (g) os << ", ";
    bool first = true;
    for (std::size_t v = 0; v < ideal_[g].size(); ++v) {
      if (ideal_[g][v] == 0) continue;
      if (!first) os << "*";
      first = false;
      os << variables_[v];
      if (ideal_[g][v] > 1) os << "^" << ideal_[g][v];
    }
  }
  os << ")";
  return os.str();
}

void ext_normalize(ExtVec& x) {
  for (auto it = x.begin(); it != x.end();) {
    it = it->second.empty() ? x.erase(it) : std::next(it);
  }
}

void ext_axpy(ExtVec& y, const Rational& c, const ExtVec& x) {
  if (c == 0) return;
  if (&x == &y) {
    for (auto& [k, v] : y) v *= (c + 1);
    ext_normalize(y);
    return;
  }
  for (const auto& [k, v] : x) y[k].axpy(c, v);
  ext_normalize(y);
}

ExtVec ext_scale(const Rational& c, const ExtVec& x) {
  ExtVec y;
  ext_axpy(y, c, x);
  return y;
}

ExtVec ext_sum(const ExtVec& a, const ExtVec& b) {
  ExtVec y = a;
  ext_axpy(y, 1, b);
  return y;
}

ExtVec ext_diff(const ExtVec& a, const ExtVec& b) {
  ExtVec y = a;
  ext_axpy(y, -1, b);
  return y;
}

bool ext_is_zero(const ExtVec& x) {
  return std::all_of(x.begin(), x.end(), [](const auto& kv) { return kv.second.empty(); });
}

ExtVec ext_apply(const Matrix& m, const ExtVec& x) {
  ExtVec y;
  for (const auto& [k, v] : x) {
    SparseVec w = m.apply(v);
    if (!w.empty()) y.emplace(k, std::move(w));
  }
  return y;
}

ExtVec ext_map(const ExtVec& x, const std::function<SparseVec(const SparseVec&)>& f) {
  ExtVec y;
  for (const auto& [k, v] : x) {
    SparseVec w = f(v);
    if (!w.empty()) y.emplace(k, std::move(w));
  }
  return y;
}

bool in_maximal_ideal(const ExtVec& x) {
  auto it = x.find(0);
  return it == x.end() || it->second.empty();
}

ExtVec truncate_weight(const ArtinianAlgebra& a, const ExtVec& x, unsigned n) {
  ExtVec y;
  for (const auto& [k, v] : x) {
    if (a.weight(k) < n && !v.empty()) y.emplace(k, v);
  }
  return y;
}

ExtVec weight_part(const ArtinianAlgebra& a, const ExtVec& x, unsigned n) {
  ExtVec y;
  for (const auto& [k, v] : x) {
    if (a.weight(k) == n && !v.empty()) y.emplace(k, v);
  }
  return y;
}

ExtVec ext_multilinear(const ArtinianAlgebra& a, const std::vector<const ExtVec*>& args,
                       const std::function<SparseVec(const std::vector<const SparseVec*>&)>& f) {
  ExtVec out;
  std::vector<const SparseVec*> current(args.size(), nullptr);
  auto rec = [&](auto&& self, std::size_t i, std::size_t mono) -> void {
    if (i == args.size()) {
      SparseVec v = f(current);
      if (!v.empty()) out[mono] += v;
      return;
    }
    for (const auto& [k, v] : *args[i]) {
      auto p = a.product(mono, k);
      if (!p || v.empty()) continue;
      current[i] = &v;
      self(self, i + 1, *p);
    }
  };
  rec(rec, 0, 0);
  ext_normalize(out);
  return out;
}

}  // namespace deforma
