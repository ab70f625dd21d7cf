#include "deforma/io.hpp"

#include <fstream>
#include <sstream>

namespace deforma::io {

namespace {

std::string child(const std::string& at, const std::string& key) { return at + "/" + key; }
std::string child(const std::string& at, std::size_t i) { return at + "/" + std::to_string(i); }

[[noreturn]] void bad(const std::string& at, const std::string& what) {
  throw InputError((at.empty() ? std::string("/") : at) + ": " + what);
}

const Json& field(const Json& j, const std::string& key, const std::string& at) {
  if (!j.is_object()) bad(at, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) bad(at, "missing \"" + key + "\"");
  return *it;
}

const Json& array_field(const Json& j, const std::string& key, const std::string& at) {
  const Json& a = field(j, key, at);
  if (!a.is_array()) bad(child(at, key), "expected an array");
  return a;
}

std::string string_from(const Json& j, const std::string& at) {
  if (!j.is_string()) bad(at, "expected a string");
  return j.get<std::string>();
}

int int_from(const Json& j, const std::string& at) {
  if (!j.is_number_integer()) bad(at, "expected an integer");
  return j.get<int>();
}

int degree_key(const std::string& key, const std::string& at) {
  try {
    std::size_t used = 0;
    const int d = std::stoi(key, &used);
    if (used == key.size()) return d;
  } catch (const std::exception&) {
  }
  bad(at, "degree key \"" + key + "\" is not an integer");
}

Index label_index(const GradedSpace& v, const Json& j, const std::string& at) {
  const std::string label = string_from(j, at);
  auto i = v.find(label);
  if (!i) bad(at, "unknown basis label \"" + label + "\"");
  return *i;
}

}  // namespace

Json parse(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw InputError(source + ": malformed JSON at byte " + std::to_string(e.byte) + ": " + e.what());
  }
}

Json read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError(path + ": cannot open");
  std::ostringstream s;
  s << in.rdbuf();
  return parse(s.str(), path);
}

Rational rational_from(const Json& j, const std::string& at) {
  if (j.is_number_integer()) return Rational(j.get<long>());
  const std::string s = string_from(j, at);
  Rational q;
  const bool valid = !s.empty() && s.find_first_not_of("0123456789-/") == std::string::npos &&
                     s.find('/') != 0 && q.set_str(s, 10) == 0 && q.get_den() != 0;
  if (!valid) bad(at, "\"" + s + "\" is not a rational");
  q.canonicalize();
  return q;
}

std::string rational_to(const Rational& q) { return q.get_num().get_str() + "/" + q.get_den().get_str(); }

GradedSpace space_from(const Json& j, const std::string& at) {
  const Json& comps = field(j, "components", at);
  if (!comps.is_object()) bad(child(at, "components"), "expected an object");
  std::map<int, std::vector<std::string>> out;
  for (const auto& [key, labels] : comps.items()) {
    const std::string where = child(child(at, "components"), key);
    if (!labels.is_array()) bad(where, "expected an array of labels");
    auto& dst = out[degree_key(key, where)];
    for (std::size_t i = 0; i < labels.size(); ++i) dst.push_back(string_from(labels[i], child(where, i)));
  }
  try {
    return GradedSpace(out);
  } catch (const Error& e) {
    bad(child(at, "components"), e.what());
  }
}

Json space_to(const GradedSpace& v) {
  Json comps = Json::object();
  for (const auto& [d, labels] : v.components()) comps[std::to_string(d)] = labels;
  return Json{{"components", comps}};
}

SparseVec vector_from(const Json& j, const GradedSpace& v, const std::string& at) {
  if (!j.is_object()) bad(at, "expected an object {label: rational}");
  SparseVec out;
  for (const auto& [label, c] : j.items()) {
    auto i = v.find(label);
    if (!i) bad(at, "unknown basis label \"" + label + "\"");
    out.add(*i, rational_from(c, child(at, label)));
  }
  return out;
}

Json vector_to(const SparseVec& x, const GradedSpace& v) {
  Json out = Json::object();
  for (const auto& [i, c] : x) out[v.label(i)] = rational_to(c);
  return out;
}

Matrix map_from(const Json& j, const GradedSpace& src, const GradedSpace& tgt, int degree, const std::string& at) {
  if (j.contains("degree") && int_from(j["degree"], child(at, "degree")) != degree)
    bad(child(at, "degree"), "expected degree " + std::to_string(degree));
  Matrix m(tgt.dim(), src.dim());
  const Json& blocks = field(j, "blocks", at);
  if (!blocks.is_object()) bad(child(at, "blocks"), "expected an object");
  for (const auto& [key, rows] : blocks.items()) {
    const std::string where = child(child(at, "blocks"), key);
    const int d = degree_key(key, where);
    const std::size_t nr = tgt.dim(d + degree), nc = src.dim(d);
    if (!rows.is_array() || rows.size() != nr)
      bad(where, "expected " + std::to_string(nr) + " rows for target degree " + std::to_string(d + degree));
    for (std::size_t r = 0; r < nr; ++r) {
      if (!rows[r].is_array() || rows[r].size() != nc)
        bad(child(where, r), "expected " + std::to_string(nc) + " entries");
      for (std::size_t c = 0; c < nc; ++c) {
        const Rational q = rational_from(rows[r][c], child(child(where, r), c));
        if (q != 0) m.set(tgt.offset(d + degree) + r, src.offset(d) + c, q);
      }
    }
  }
  return m;
}

Json map_to(const Matrix& m, const GradedSpace& src, const GradedSpace& tgt, int degree) {
  Json blocks = Json::object();
  for (int d : src.support()) {
    const std::size_t nr = tgt.dim(d + degree), nc = src.dim(d);
    if (nr == 0) continue;
    Json rows = Json::array();
    bool nonzero = false;
    for (std::size_t r = 0; r < nr; ++r) {
      Json row = Json::array();
      for (std::size_t c = 0; c < nc; ++c) {
        const Rational q = m.get(tgt.offset(d + degree) + r, src.offset(d) + c);
        nonzero = nonzero || q != 0;
        row.push_back(rational_to(q));
      }
      rows.push_back(row);
    }
    if (nonzero) blocks[std::to_string(d)] = rows;
  }
  return Json{{"degree", degree}, {"blocks", blocks}};
}

Complex complex_from(const Json& j, const std::string& at) {
  const GradedSpace v = space_from(j, at);
  Matrix d(v.dim(), v.dim());
  if (j.contains("differential")) d = map_from(j["differential"], v, v, 1, child(at, "differential"));
  if (!(d * d).is_zero()) bad(child(at, "differential"), "d² ≠ 0");
  return Complex(v, d);
}

Json complex_to(const Complex& c) {
  Json out = space_to(c.space);
  out["differential"] = map_to(c.differential, c.space, c.space, 1);
  return out;
}

DGLA dgla_from(const Json& j, const std::string& at) {
  DGLA l(complex_from(j, at));
  if (!j.contains("bracket")) return l;
  const Json& terms = array_field(j, "bracket", at);
  for (std::size_t t = 0; t < terms.size(); ++t) {
    const std::string where = child(child(at, "bracket"), t);
    const Index a = label_index(l.space(), field(terms[t], "i", where), child(where, "i"));
    const Index b = label_index(l.space(), field(terms[t], "j", where), child(where, "j"));
    const SparseVec out = vector_from(field(terms[t], "out", where), l.space(), child(where, "out"));
    try {
      l.set_bracket(a, b, out);
    } catch (const Error& e) {
      bad(where, e.what());
    }
  }
  return l;
}

Json dgla_to(const DGLA& l) {
  Json out = complex_to(l.complex());
  Json terms = Json::array();
  for (const auto& [ij, v] : l.structure_constants())
    if (ij.first <= ij.second)
      terms.push_back(
        {{"i", l.space().label(ij.first)}, {"j", l.space().label(ij.second)}, {"out", vector_to(v, l.space())}});
  out["bracket"] = terms;
  return out;
}

DGLAMorphism morphism_from(const Json& j, const std::string& at) {
  DGLAMorphism f{dgla_from(field(j, "source", at), child(at, "source")),
                 dgla_from(field(j, "target", at), child(at, "target")), {}};
  f.map = map_from(field(j, "map", at), f.source.space(), f.target.space(), 0, child(at, "map"));
  return f;
}

LInftyStructure linfty_from(const Json& j, const std::string& at, unsigned cutoff) {
  if (j.contains("bracket")) return dgla_to_linfty(dgla_from(j, at), cutoff);
  if (j.contains("cutoff")) cutoff = static_cast<unsigned>(int_from(j["cutoff"], child(at, "cutoff")));
  LInftyStructure l(space_from(j, at), cutoff);
  const GradedSpace& v = l.space();
  if (!j.contains("brackets")) return l;
  const Json& brackets = array_field(j, "brackets", at);
  for (std::size_t b = 0; b < brackets.size(); ++b) {
    const std::string where = child(child(at, "brackets"), b);
    const int k = int_from(field(brackets[b], "arity", where), child(where, "arity"));
    if (k < 1) bad(child(where, "arity"), "arity must be positive");
    const Json& terms = array_field(brackets[b], "terms", where);
    SymmetricTable& table = l.bracket(static_cast<unsigned>(k));
    for (std::size_t t = 0; t < terms.size(); ++t) {
      const std::string tw = child(child(where, "terms"), t);
      const Json& in = array_field(terms[t], "in", tw);
      if (in.size() != static_cast<std::size_t>(k)) bad(child(tw, "in"), "expected " + std::to_string(k) + " labels");
      Tuple inputs;
      int deg = 1;
      for (std::size_t p = 0; p < in.size(); ++p) {
        inputs.push_back(label_index(v, in[p], child(child(tw, "in"), p)));
        deg += v.degree(inputs.back()) - 1;
      }
      const SparseVec out = vector_from(field(terms[t], "out", tw), v, child(tw, "out"));
      for (const auto& [i, c] : out)
        if (v.degree(i) - 1 != deg) bad(child(tw, "out"), "output " + v.label(i) + " has the wrong degree");
      Tuple sorted = inputs;
      if (table.canonicalize(sorted) == 0) bad(child(tw, "in"), "repeated odd input");
      table.set(inputs, out);
    }
  }
  return l;
}

Json table_to(const SymmetricTable& t, const GradedSpace& in, const GradedSpace& out) {
  Json terms = Json::array();
  for (const auto& [tuple, v] : t.entries()) {
    if (v.empty()) continue;
    Json labels = Json::array();
    for (Index i : tuple) labels.push_back(in.label(i));
    terms.push_back({{"in", labels}, {"out", vector_to(v, out)}});
  }
  return terms;
}

Json linfty_to(const LInftyStructure& l) {
  Json out = space_to(l.space());
  out["cutoff"] = l.cutoff();
  Json brackets = Json::array();
  for (unsigned k = 1; k <= l.max_arity(); ++k) {
    const SymmetricTable* t = l.find_bracket(k);
    if (!t || t->empty()) continue;
    brackets.push_back({{"arity", k}, {"terms", table_to(*t, l.space(), l.space())}});
  }
  out["brackets"] = brackets;
  return out;
}

SemicosimplicialObject semicosimplicial_from(const Json& j, const std::string& at) {
  SemicosimplicialObject s;
  const Json& levels = array_field(j, "levels", at);
  if (levels.empty()) bad(child(at, "levels"), "no levels");
  for (std::size_t n = 0; n < levels.size(); ++n) s.levels.push_back(dgla_from(levels[n], child(child(at, "levels"), n)));
  if (j.contains("lie")) {
    if (!j["lie"].is_boolean()) bad(child(at, "lie"), "expected a boolean");
    s.lie = j["lie"].get<bool>();
  }
  const Json& cofaces = array_field(j, "cofaces", at);
  // the empty list for level 0 may be omitted
  const std::size_t skip = cofaces.size() + 1 == levels.size() ? 1 : 0;
  if (cofaces.size() + skip != levels.size())
    bad(child(at, "cofaces"), "expected one list of cofaces per level");
  s.cofaces.resize(levels.size());
  for (std::size_t n = 1; n < levels.size(); ++n) {
    const std::string where = child(child(at, "cofaces"), n - skip);
    const Json& maps = cofaces[n - skip];
    if (!maps.is_array() || maps.size() != n + 1) bad(where, "expected " + std::to_string(n + 1) + " cofaces");
    for (std::size_t k = 0; k <= n; ++k)
      s.cofaces[n].push_back(map_from(maps[k], s.levels[n - 1].space(), s.levels[n].space(), 0, child(where, k)));
  }
  return s;
}

Json semicosimplicial_to(const SemicosimplicialObject& s) {
  Json levels = Json::array(), cofaces = Json::array();
  for (std::size_t n = 0; n < s.levels.size(); ++n) {
    levels.push_back(dgla_to(s.levels[n]));
    Json maps = Json::array();
    if (n > 0)
      for (const Matrix& m : s.cofaces[n]) maps.push_back(map_to(m, s.levels[n - 1].space(), s.levels[n].space(), 0));
    cofaces.push_back(maps);
  }
  return Json{{"levels", levels}, {"cofaces", cofaces}, {"lie", s.lie}};
}

ExtVec ext_from(const Json& j, const GradedSpace& v, const ArtinianAlgebra& a, const std::string& at) {
  if (!j.is_object()) bad(at, "expected an object {monomial: vector}");
  ExtVec out;
  for (const auto& [mono, vec] : j.items()) {
    auto m = a.find_name(mono);
    if (!m) bad(at, "\"" + mono + "\" is not a basis monomial of " + a.spec());
    SparseVec x = vector_from(vec, v, child(at, mono));
    if (!x.empty()) out[*m] += x;
  }
  ext_normalize(out);
  return out;
}

Json ext_to(const ExtVec& x, const GradedSpace& v, const ArtinianAlgebra& a) {
  Json out = Json::object();
  for (const auto& [m, vec] : x)
    if (!vec.empty()) out[a.name(m)] = vector_to(vec, v);
  return out;
}

CartanHomotopy cartan_from(const Json& j, const std::string& at) {
  CartanHomotopy c{dgla_from(field(j, "source", at), child(at, "source")),
                   dgla_from(field(j, "target", at), child(at, "target")), {}};
  c.i = map_from(field(j, "i", at), c.source.space(), c.target.space(), -1, child(at, "i"));
  return c;
}

ToricCover cover_from(const Json& j, const std::string& at) {
  if (j.contains("builtin")) {
    const std::string name = string_from(j["builtin"], child(at, "builtin"));
    if (name == "P1") return p1_cover();
    if (name == "P2") return p2_cover();
    if (name == "A1") return affine_line_cover();
    if (name.rfind("torus", 0) == 0) {
      try {
        const int d = std::stoi(name.substr(5));
        if (d >= 1 && d <= 4) return torus_cover(static_cast<unsigned>(d));
      } catch (const std::exception&) {
      }
    }
    bad(child(at, "builtin"), "unknown cover \"" + name + "\"");
  }
  ToricCover c;
  c.name = j.contains("name") ? string_from(j["name"], child(at, "name")) : "cover";
  const Json& vars = array_field(j, "variables", at);
  c.dimension = static_cast<unsigned>(vars.size());
  if (c.dimension == 0 || c.dimension > 4) bad(child(at, "variables"), "expected 1 to 4 torus variables");
  const Json& charts = array_field(j, "charts", at);
  for (std::size_t k = 0; k < charts.size(); ++k) {
    const std::string where = child(child(at, "charts"), k);
    Chart ch;
    ch.name = charts[k].contains("name") ? string_from(charts[k]["name"], child(where, "name")) : "U" + std::to_string(k);
    const Json& coords = array_field(charts[k], "coordinates", where);
    if (coords.size() != c.dimension) bad(child(where, "coordinates"), "expected one coordinate per torus variable");
    for (std::size_t q = 0; q < coords.size(); ++q) {
      const std::string cw = child(child(where, "coordinates"), q);
      ch.coordinates.push_back(string_from(field(coords[q], "name", cw), child(cw, "name")));
      const Json& mono = array_field(coords[q], "monomial", cw);
      if (mono.size() != c.dimension) bad(child(cw, "monomial"), "expected " + std::to_string(c.dimension) + " exponents");
      Weight w;
      for (std::size_t i = 0; i < mono.size(); ++i) w.push_back(int_from(mono[i], child(child(cw, "monomial"), i)));
      ch.exponents.push_back(w);
      bool inv = false;
      if (coords[q].contains("invertible")) {
        if (!coords[q]["invertible"].is_boolean()) bad(child(cw, "invertible"), "expected a boolean");
        inv = coords[q]["invertible"].get<bool>();
      }
      ch.invertible.push_back(inv);
    }
    c.charts.push_back(std::move(ch));
  }
  try {
    validate_cover(c);
  } catch (const InputError& e) {
    bad(child(at, "charts"), e.what());
  }
  return c;
}

Json cover_to(const ToricCover& c) {
  Json vars = Json::array();
  for (unsigned i = 0; i < c.dimension; ++i) vars.push_back("z" + std::to_string(i + 1));
  Json charts = Json::array();
  for (const Chart& ch : c.charts) {
    Json coords = Json::array();
    for (std::size_t q = 0; q < ch.coordinates.size(); ++q)
      coords.push_back({{"name", ch.coordinates[q]}, {"monomial", ch.exponents[q]}, {"invertible", bool(ch.invertible[q])}});
    charts.push_back({{"name", ch.name}, {"coordinates", coords}});
  }
  return Json{{"name", c.name}, {"variables", vars}, {"charts", charts}};
}

Json report_to(const Report& r) { return Json{{"ok", r.ok()}, {"failures", r.failures}}; }

Json certificate_to(const Certificate& c) {
  return Json{{"verdict", to_string(c.verdict)}, {"reason", c.reason}, {"chain", c.chain}};
}

}  // namespace deforma::io
