#pragma once

// JSON encodings. Rationals are "p/q" strings, basis elements are referred to
// by label, and linear maps are dense blocks per source degree:
//   space   {"components": {"<degree>": [labels]}}
//   map     {"degree": d, "blocks": {"<degree>": [[rows of target degree+d]]}}
//   vector  {label: "p/q"}
// Parse errors are InputError with a JSON pointer to the offending value.

#include <json.hpp>
#include <string>

#include "deforma/cartan.hpp"
#include "deforma/cone.hpp"
#include "deforma/simplicial.hpp"
#include "deforma/toric.hpp"

namespace deforma::io {

using Json = nlohmann::ordered_json;

/// Parses text, reporting the byte offset of syntax errors.
Json parse(const std::string& text, const std::string& source);
Json read_file(const std::string& path);

Rational rational_from(const Json& j, const std::string& at);
std::string rational_to(const Rational& q);

GradedSpace space_from(const Json& j, const std::string& at);
Json space_to(const GradedSpace& v);

SparseVec vector_from(const Json& j, const GradedSpace& v, const std::string& at);
Json vector_to(const SparseVec& x, const GradedSpace& v);

Matrix map_from(const Json& j, const GradedSpace& src, const GradedSpace& tgt, int degree, const std::string& at);
Json map_to(const Matrix& m, const GradedSpace& src, const GradedSpace& tgt, int degree);

/// {"components", "differential"}; a missing differential is zero.
Complex complex_from(const Json& j, const std::string& at);
Json complex_to(const Complex& c);

/// complex + {"bracket": [{"i", "j", "out"}]}
DGLA dgla_from(const Json& j, const std::string& at);
Json dgla_to(const DGLA& l);

/// {"source", "target", "map"}
DGLAMorphism morphism_from(const Json& j, const std::string& at);

/// {"components", "cutoff", "brackets": [{"arity", "terms": [{"in", "out"}]}]};
/// with a "bracket" key instead it is read as a DGLA and converted.
LInftyStructure linfty_from(const Json& j, const std::string& at, unsigned cutoff);
Json linfty_to(const LInftyStructure& l);
Json table_to(const SymmetricTable& t, const GradedSpace& in, const GradedSpace& out);

/// {"levels": [dgla], "cofaces": [[], [map, map], ...], "lie": bool}
SemicosimplicialObject semicosimplicial_from(const Json& j, const std::string& at);
Json semicosimplicial_to(const SemicosimplicialObject& s);

/// {"<monomial>": vector}
ExtVec ext_from(const Json& j, const GradedSpace& v, const ArtinianAlgebra& a, const std::string& at);
Json ext_to(const ExtVec& x, const GradedSpace& v, const ArtinianAlgebra& a);

/// {"source": dgla, "target": dgla, "i": map of degree -1}
CartanHomotopy cartan_from(const Json& j, const std::string& at);

/// {"name", "variables": [z...], "charts": [{"name", "coordinates": [{"name",
/// "monomial": [exponents], "invertible": bool}]}]}, or {"builtin": "P1" |
/// "P2" | "A1" | "torus<d>"}.
ToricCover cover_from(const Json& j, const std::string& at);
Json cover_to(const ToricCover& c);

Json report_to(const Report& r);
Json certificate_to(const Certificate& c);

}  // namespace deforma::io
