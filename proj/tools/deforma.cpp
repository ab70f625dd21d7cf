// deforma: batch front-end. Every subcommand prints a prose report; with --out
// it also writes report.json, report.txt and manifest.json into that directory.
// Exit status: 0 all checks pass, 1 a mathematical check failed, 2 bad input.

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>

#include "deforma/deformation.hpp"
#include "deforma/io.hpp"

using namespace deforma;
using io::Json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct Options {
  std::string input;
  std::string chi;
  std::string cover;
  std::string sheaf = "theta";
  std::string ring = "t^3";
  std::string extension;
  std::string out;
  unsigned cutoff = 4;
  int box = 2;
  std::uint64_t seed = 1;
  std::size_t samples = 40;
};

struct Outcome {
  Json report = Json::object();
  std::vector<std::string> text;
  Json verdicts = Json::object();
  bool ok = true;

  void check(const std::string& name, bool pass, const std::string& detail = "") {
    report["checks"][name] = pass;
    text.push_back((pass ? "PASS  " : "FAIL  ") + name + (detail.empty() ? "" : "  (" + detail + ")"));
    ok = ok && pass;
  }
  void line(const std::string& s) { text.push_back(s); }
  void failures(const Report& r) {
    for (const auto& f : r.failures) text.push_back("      " + f);
  }
};

std::string dims_string(const std::map<int, std::size_t>& d) {
  std::ostringstream s;
  s << "{";
  bool first = true;
  for (const auto& [k, v] : d) {
    s << (first ? "" : ", ") << k << ": " << v;
    first = false;
  }
  s << "}";
  return s.str();
}

Json dims_json(const std::map<int, std::size_t>& d) {
  Json out = Json::object();
  for (const auto& [k, v] : d) out[std::to_string(k)] = v;
  return out;
}

std::string sha256_hex(const std::string& bytes) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned len = 0;
  EVP_Digest(bytes.data(), bytes.size(), md, &len, EVP_sha256(), nullptr);
  std::ostringstream s;
  for (unsigned i = 0; i < len; ++i) s << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return s.str();
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

const Json& member(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) throw InputError("/: missing \"" + key + "\"");
  return j[key];
}

std::string required(const std::string& path, const std::string& what) {
  if (path.empty()) throw InputError("missing " + what);
  return path;
}

// ---- algebra ---------------------------------------------------------------

Outcome check_linfty_cmd(const Options& o) {
  const LInftyStructure l = io::linfty_from(io::read_file(required(o.input, "input file")), "", o.cutoff);
  Outcome r;
  const Report rep = check_linfty(l, o.cutoff);
  r.report["dimension"] = l.space().dim();
  r.report["max_arity"] = l.max_arity();
  r.report["validity"] = io::report_to(rep);
  r.line("L∞ algebra of dimension " + std::to_string(l.space().dim()) + ", brackets up to arity " +
         std::to_string(l.max_arity()));
  r.check("QQ = 0 up to arity " + std::to_string(o.cutoff), rep.ok());
  r.failures(rep);
  return r;
}

Outcome check_dgla_cmd(const Options& o) {
  const DGLA l = io::dgla_from(io::read_file(required(o.input, "input file")), "");
  Outcome r;
  const Report rep = check_dgla(l);
  r.report["dimension"] = l.dim();
  r.report["cohomology"] = dims_json(cohomology_dims(l.complex()));
  r.report["validity"] = io::report_to(rep);
  r.line("cohomology " + dims_string(cohomology_dims(l.complex())));
  r.check("DGLA axioms", rep.ok());
  r.failures(rep);
  return r;
}

Outcome transfer_cmd(const Options& o, bool minimal) {
  const Json j = io::read_file(required(o.input, "input file"));
  const LInftyStructure l = io::linfty_from(j.contains("algebra") ? j["algebra"] : j, j.contains("algebra") ? "/algebra" : "",
                                            o.cutoff);
  Outcome r;
  TransferResult t;
  if (!minimal && j.contains("contraction")) {
    const Json& c = j["contraction"];
    Contraction k;
    k.h = io::space_from(member(c, "h"), "/contraction/h");
    k.projection = io::map_from(member(c, "projection"), l.space(), k.h, 0, "/contraction/projection");
    k.inclusion = io::map_from(member(c, "inclusion"), k.h, l.space(), 0, "/contraction/inclusion");
    k.homotopy = io::map_from(member(c, "homotopy"), l.space(), l.space(), -1, "/contraction/homotopy");
    const std::string bad = check_contraction(l, k);
    if (!bad.empty()) throw InputError("/contraction: " + bad);
    t = homotopy_transfer(l, k, o.cutoff);
  } else {
    t = minimal_model(l, o.cutoff);
  }
  const Report a = check_linfty(t.transferred, o.cutoff);
  const Report m = check_linfty_morphism(t.inclusion, std::min(o.cutoff, 3u));
  r.report["transferred"] = io::linfty_to(t.transferred);
  r.report["transferred_validity"] = io::report_to(a);
  r.report["inclusion_validity"] = io::report_to(m);
  r.line("transferred space of dimension " + std::to_string(t.transferred.space().dim()) + ", brackets up to arity " +
         std::to_string(t.transferred.max_arity()));
  r.check("transferred QQ = 0 up to arity " + std::to_string(o.cutoff), a.ok());
  r.failures(a);
  r.check("ι∞ is an L∞ morphism up to arity " + std::to_string(std::min(o.cutoff, 3u)), m.ok());
  r.failures(m);
  if (minimal) {
    const Certificate c = certify_quasi_abelian(l, o.cutoff);
    r.report["certificate"] = io::certificate_to(c);
    r.verdicts["quasi_abelian"] = to_string(c.verdict);
    r.line("quasi-abelian: " + to_string(c.verdict) + " (" + c.reason + ")");
  }
  return r;
}

Outcome certify_cmd(const Options& o) {
  const LInftyStructure l = io::linfty_from(io::read_file(required(o.input, "input file")), "", o.cutoff);
  Outcome r;
  const Report rep = check_linfty(l, o.cutoff);
  r.check("input QQ = 0", rep.ok());
  r.failures(rep);
  const Certificate c = certify_quasi_abelian(l, o.cutoff);
  r.report["certificate"] = io::certificate_to(c);
  r.verdicts["quasi_abelian"] = to_string(c.verdict);
  r.line("quasi-abelian: " + to_string(c.verdict));
  r.line("  " + c.reason);
  for (const auto& w : c.chain) r.line("  " + w);
  return r;
}

Outcome cone_cmd(const Options& o) {
  const std::string path = o.chi.empty() ? o.input : o.chi;
  const DGLAMorphism chi = io::morphism_from(io::read_file(required(path, "--chi file")), "");
  Outcome r;
  const Report f = check_dgla_morphism(chi);
  r.check("χ is a DGLA morphism", f.ok());
  r.failures(f);
  if (!f.ok()) return r;
  const ConeData cone = build_cone(chi, o.cutoff);
  const JacobiatorWitness jac = mu2_jacobiator(cone);
  const Report v = check_linfty(cone.brackets, o.cutoff);
  Json w = {{"nonzero", jac.nonzero}, {"description", jac.description}};
  if (jac.nonzero) {
    Json in = Json::array();
    for (Index i : jac.inputs) in.push_back(cone.space().label(i));
    w["inputs"] = in;
    w["value"] = io::vector_to(jac.value, cone.space());
  }
  r.report["jacobiator"] = w;
  r.report["structure"] = io::linfty_to(cone.brackets);
  r.report["validity"] = io::report_to(v);
  r.line("cone of dimension " + std::to_string(cone.space().dim()) + ", brackets up to arity " +
         std::to_string(cone.brackets.max_arity()));
  r.line(jac.nonzero ? "Jacobiator of μ2 is nonzero: " + jac.description : "Jacobiator of μ2 vanishes");
  r.check("completed structure QQ = 0 up to arity " + std::to_string(o.cutoff), v.ok());
  r.failures(v);
  return r;
}

// ---- semicosimplicial ------------------------------------------------------

Outcome tot_cmd(const Options& o) {
  const SemicosimplicialObject s = io::semicosimplicial_from(io::read_file(required(o.input, "input file")), "");
  Outcome r;
  const Report rep = check_semicosimplicial(s);
  r.check("semicosimplicial identities", rep.ok());
  r.failures(rep);
  if (!rep.ok()) return r;
  const TotData t = tot(s);
  r.report["tot"] = io::complex_to(t.complex);
  r.report["cohomology"] = dims_json(cohomology_dims(t.complex));
  r.line("Tot of dimension " + std::to_string(t.complex.space.dim()) + ", cohomology " +
         dims_string(cohomology_dims(t.complex)));
  return r;
}

Outcome whitney_cmd(const Options& o, bool full) {
  const SemicosimplicialObject s = io::semicosimplicial_from(io::read_file(required(o.input, "input file")), "");
  Outcome r;
  const ThomWhitney tw(s);
  const Complex& c = tw.tot().complex;
  bool compatible = true, ie = true, chain = true;
  for (Index i = 0; i < c.space.dim(); ++i) {
    const SparseVec e = SparseVec::unit(i);
    const TWElement x = tw.whitney(e);
    compatible = compatible && tw.check_compatible(x).ok();
    ie = ie && tw.integrate(x) == e;
    chain = chain && tw.equal(tw.d(x), tw.whitney(c.differential.apply(e)));
  }
  r.report["tot_dimension"] = c.space.dim();
  r.check("E(v) is compatible for every basis v", compatible);
  r.check("IE = Id", ie);
  r.check("dE = Ed", chain);
  if (!full) return r;
  // Homotopy identity and brackets on Tot_TW basis elements of polynomial degree ≤ 1.
  std::size_t tested = 0;
  bool homotopy = true, closed = true, leibniz = true;
  std::vector<TWElement> basis;
  for (int deg : c.space.support())
    for (auto& x : tw.basis(deg, 1)) basis.push_back(std::move(x));
  for (const auto& x : basis) {
    ++tested;
    TWElement lhs = tw.whitney(tw.integrate(x));
    tw.axpy(lhs, -1, x);
    TWElement rhs = tw.homotopy(tw.d(x));
    tw.axpy(rhs, 1, tw.d(tw.homotopy(x)));
    homotopy = homotopy && tw.equal(lhs, rhs);
  }
  const std::size_t pairs = std::min<std::size_t>(basis.size(), 12);
  for (std::size_t a = 0; a < pairs; ++a)
    for (std::size_t b = a; b < pairs; ++b) {
      const TWElement br = tw.bracket(basis[a], basis[b]);
      closed = closed && tw.check_compatible(br).ok();
      TWElement lhs = tw.d(br);
      TWElement rhs = tw.bracket(tw.d(basis[a]), basis[b]);
      const int sign = tw.degree(basis[a]) % 2 == 0 ? 1 : -1;
      tw.axpy(rhs, sign, tw.bracket(basis[a], tw.d(basis[b])));
      leibniz = leibniz && tw.equal(lhs, rhs);
    }
  r.report["tw_basis_tested"] = tested;
  r.check("EI - Id = hd + dh on " + std::to_string(tested) + " Tot_TW basis elements", homotopy);
  r.check("brackets of compatible elements are compatible", closed);
  r.check("d is a derivation of the bracket", leibniz);
  return r;
}

// ---- Maurer-Cartan ---------------------------------------------------------

Outcome mc_cmd(const Options& o) {
  const Json j = io::read_file(required(o.input, "input file"));
  const ArtinianAlgebra a = ArtinianAlgebra::parse(o.ring);
  const LInftyStructure l = io::linfty_from(member(j, "algebra"), "/algebra", o.cutoff);
  const ExtVec x = io::ext_from(member(j, "element"), l.space(), a, "/element");
  Outcome r;
  const ExtVec defect = mc_defect_linfty(l, a, x);
  r.report["ring"] = a.spec();
  r.report["defect"] = io::ext_to(defect, l.space(), a);
  r.check("Maurer-Cartan over " + a.spec(), ext_is_zero(defect));
  return r;
}

Outcome z1sc_cmd(const Options& o) {
  const Json j = io::read_file(required(o.input, "input file"));
  const ArtinianAlgebra a = ArtinianAlgebra::parse(o.ring);
  const SemicosimplicialObject g = io::semicosimplicial_from(member(j, "object"), "/object");
  if (g.levels.size() < 2) throw InputError("/object: needs levels 0 and 1");
  const ExtVec x = io::ext_from(member(j, "element"), g.levels[1].space(), a, "/element");
  Outcome r;
  const ExtVec log = z1sc_log(g, a, x);
  r.report["ring"] = a.spec();
  if (g.levels.size() > 2) r.report["cocycle_defect"] = io::ext_to(log, g.levels[2].space(), a);
  r.check("e^{∂0 x} e^{-∂1 x} e^{∂2 x} = 1 over " + a.spec(), z1sc_check(g, a, x));
  return r;
}

Outcome h1sc_cmd(const Options& o) {
  const Json j = io::read_file(required(o.input, "input file"));
  const ArtinianAlgebra a = ArtinianAlgebra::parse(o.ring);
  const SemicosimplicialObject g = io::semicosimplicial_from(member(j, "object"), "/object");
  if (g.levels.size() < 2) throw InputError("/object: needs levels 0 and 1");
  const ExtVec x = io::ext_from(member(j, "x"), g.levels[1].space(), a, "/x");
  const ExtVec y = j.contains("y") ? io::ext_from(j["y"], g.levels[1].space(), a, "/y") : ExtVec{};
  Outcome r;
  r.check("x is a cocycle", z1sc_check(g, a, x));
  r.check("y is a cocycle", z1sc_check(g, a, y));
  if (!r.ok) return r;
  const GaugeResult res = h1sc_equiv(g, a, x, y);
  r.report["equivalent"] = res.equivalent;
  r.verdicts["gauge_equivalent"] = res.equivalent ? "YES" : "NO";
  if (res.equivalent) {
    r.report["witness"] = io::ext_to(res.witness, g.levels[0].space(), a);
    r.line("gauge equivalent; witness found");
  } else {
    r.report["order"] = res.order;
    r.report["reason"] = res.reason;
    r.line("no gauge witness at weight " + std::to_string(res.order) + ": " + res.reason);
  }
  return r;
}

Outcome compare52_cmd(const Options& o) {
  const SemicosimplicialObject g = io::semicosimplicial_from(io::read_file(required(o.input, "input file")), "");
  const ArtinianAlgebra a = ArtinianAlgebra::parse(o.ring);
  Outcome r;
  const Theorem52Report t = theorem52_compare(g, a, o.samples, o.seed);
  r.report["ring"] = a.spec();
  r.report["samples"] = t.samples;
  r.report["cocycles"] = t.cocycles;
  r.report["mc"] = t.mc;
  r.report["disagreements"] = t.disagreements;
  r.report["witnesses"] = t.witnesses;
  r.line(std::to_string(t.samples) + " samples over " + a.spec() + ": " + std::to_string(t.cocycles) +
         " cocycles, " + std::to_string(t.mc) + " MC elements of Tot~");
  r.check("MC(Tot~) = Z¹_sc elementwise", t.ok(), std::to_string(t.disagreements) + " disagreements");
  for (const auto& w : t.witnesses) r.line("      " + w);
  return r;
}

// ---- Cartan and obstructions -----------------------------------------------

Outcome cartan_cmd(const Options& o) {
  Outcome r;
  if (!o.cover.empty()) {
    const ToricCover c = io::cover_from(io::read_file(o.cover), "");
    const ChartCartanReport rep = check_toric_cartan(c, o.box);
    r.report["triples"] = rep.triples;
    r.report["validity"] = io::report_to(rep.report);
    r.check("Cartan identities on every chart of " + c.name, rep.report.ok(),
            std::to_string(rep.triples) + " triples");
    r.failures(rep.report);
    return r;
  }
  const CartanHomotopy c = io::cartan_from(io::read_file(required(o.input, "input file")), "");
  const CartanReport rep = check_cartan(c);
  r.report["l"] = io::map_to(rep.l, c.source.space(), c.target.space(), 0);
  r.report["validity"] = io::report_to(rep.report);
  r.check("i_[a,b] = [i_a, l_b] and [i_a, i_b] = 0", rep.report.ok());
  r.failures(rep.report);
  return r;
}

Outcome phi_cmd(const Options& o) {
  const Json j = io::read_file(required(o.input, "input file"));
  const CartanHomotopy c = io::cartan_from(member(j, "cartan"), "/cartan");
  const DGLAMorphism chi = io::morphism_from(member(j, "chi"), "/chi");
  Outcome r;
  const PhiMorphism phi = build_phi_morphism(c, chi, o.cutoff);
  const Report v = check_linfty_morphism(phi.morphism, std::min(o.cutoff, 3u));
  r.report["f1"] = io::map_to(phi.morphism.f1(), phi.morphism.source.space(), phi.morphism.target.space(), 0);
  r.report["validity"] = io::report_to(v);
  r.check("(l, i) is an L∞ morphism into the cone", v.ok());
  r.failures(v);
  const bool inj = injective_in_cohomology(phi.morphism);
  r.report["injective_in_cohomology"] = inj;
  r.line(std::string("injective in cohomology: ") + (inj ? "yes" : "no"));
  return r;
}

Outcome obstruction_cmd(const Options& o) {
  const Json j = io::read_file(required(o.input, "input file"));
  const std::string ext = required(o.extension, "--extension A-to-B");
  const auto sep = ext.find("-to-");
  if (sep == std::string::npos) throw InputError("--extension: expected 'A-to-B'");
  const ArtinianAlgebra a = ArtinianAlgebra::parse(ext.substr(0, sep));
  const ArtinianAlgebra b = ArtinianAlgebra::parse(ext.substr(sep + 4));
  std::optional<SmallExtension> e;
  for (std::size_t m = 1; m < a.dim() && !e; ++m) {
    try {
      SmallExtension cand = small_extension(a, m);
      bool same = cand.b.variables() == b.variables() && cand.b.dim() == b.dim();
      for (std::size_t i = 0; same && i < b.dim(); ++i) same = cand.b.find(b.monomial(i)).has_value();
      if (same) e = std::move(cand);
    } catch (const InputError&) {
    }
  }
  if (!e) throw InputError("--extension: " + b.spec() + " is not " + a.spec() + " modulo a socle monomial");
  const LInftyStructure v = io::linfty_from(member(j, "algebra"), "/algebra", o.cutoff);
  const ExtVec x = io::ext_from(member(j, "element"), v.space(), e->b, "/element");
  const LInftyMorphism g = identity_morphism(v);
  const Certificate w = certify_quasi_abelian(v, o.cutoff);
  Outcome r;
  const ObstructionReport rep = obstruction_kernel_check(g, w, *e, x);
  r.report["extension"] = a.spec() + " -> " + e->b.spec();
  r.report["kernel_monomial"] = a.name(e->kernel);
  r.report["defect"] = io::vector_to(rep.defect, v.space());
  r.report["class"] = io::vector_to(rep.v_class, cohomology_splitting(Complex(v.space(), -1 * v.q1())).cohomology);
  r.report["certificate"] = io::certificate_to(w);
  r.verdicts["obstructed"] = rep.v_class.empty() ? "NO" : "YES";
  r.line("kernel monomial " + a.name(e->kernel) + ", obstruction class " + (rep.v_class.empty() ? "zero" : "nonzero"));
  r.check("defect is a cocycle", rep.cocycle);
  r.check("no obstruction survives into a quasi-abelian target", !rep.contradiction);
  return r;
}

// ---- toric -----------------------------------------------------------------

Outcome cech_cmd(const Options& o) {
  const ToricCover c = io::cover_from(io::read_file(required(o.cover.empty() ? o.input : o.cover, "--cover")), "");
  SheafKind kind = SheafKind::Theta;
  int p = 0;
  if (o.sheaf == "theta") {
  } else if (o.sheaf == "omega" || o.sheaf == "derham") {
    kind = SheafKind::Forms;
    p = -1;
  } else if (o.sheaf.rfind("omega", 0) == 0) {
    kind = SheafKind::Forms;
    try {
      p = std::stoi(o.sheaf.substr(5));
    } catch (const std::exception&) {
      throw InputError("--sheaf: expected theta, omega<p> or derham");
    }
    if (p < 0 || p > static_cast<int>(c.dimension)) throw InputError("--sheaf: form degree out of range");
  } else {
    throw InputError("--sheaf: expected theta, omega<p> or derham");
  }
  Outcome r;
  const CohomologyTable t = toric_cohomology(c, kind, p, o.box);
  r.report["cover"] = io::cover_to(c);
  r.report["sheaf"] = o.sheaf;
  r.report["box"] = o.box;
  r.report["cohomology"] = dims_json(t.dims);
  r.report["cohomology_next_box"] = dims_json(t.next);
  r.line("H*(" + c.name + ", " + o.sheaf + ") at box " + std::to_string(o.box) + ": " + dims_string(t.dims));
  r.line("at box " + std::to_string(o.box + 1) + ": " + dims_string(t.next));
  r.report["stable"] = t.stable;
  r.line(std::string("stable under enlarging the box: ") + (t.stable ? "yes" : "no"));
  if (kind == SheafKind::Theta) {
    const int inner = o.box / 3;
    const Report lie = check_box_lie(cech_theta(c, 3 * inner), inner);
    r.check("truncated brackets are exact on weights ≤ " + std::to_string(inner), lie.ok());
    r.failures(lie);
  }
  return r;
}

Outcome btt_cmd(const Options& o) {
  const ToricCover c = io::cover_from(io::read_file(required(o.cover.empty() ? o.input : o.cover, "--cover")), "");
  const BttReport b = btt_pipeline(c, o.box);
  Outcome r;
  r.report["cover"] = io::cover_to(c);
  r.report["box"] = o.box;
  r.report["theta_cohomology"] = dims_json(b.theta.dims);
  r.report["theta_stable"] = b.theta.stable;
  r.report["hodge"] = {{"top", dims_json(b.hodge.top)},
                       {"de_rham", dims_json(b.hodge.de_rham)},
                       {"injective", b.hodge.injective},
                       {"quotient_injective", b.hodge.quotient_injective},
                       {"higher_vanish", b.hodge.higher_vanish}};
  r.report["contraction_map"] = {{"source_dim", b.contraction.source_dim},
                                 {"rank", b.contraction.rank},
                                 {"kernel", b.contraction.kernel_labels}};
  r.report["h0_bracket_nonzero"] = b.h0_bracket_nonzero;
  r.report["phi_injective"] = b.phi_injective;
  r.report["phi_kernel"] = b.phi_kernel;
  r.report["cone_certificate"] = io::certificate_to(b.cone_certificate);
  r.report["model_certificate"] = io::certificate_to(b.model);
  r.report["verdict"] = io::certificate_to(b.verdict);
  r.report["unobstructed"] = b.unobstructed;
  r.report["notes"] = b.notes;
  r.verdicts["quasi_abelian"] = to_string(b.verdict.verdict);
  r.verdicts["unobstructed"] = b.unobstructed ? "YES" : "UNKNOWN";

  r.line("cover " + c.name + ", box " + std::to_string(o.box));
  r.line("H*(Θ) " + dims_string(b.theta.dims) + (b.theta.stable ? " (stable)" : " (changes with the box)"));
  r.line("H*(Ω^n) " + dims_string(b.hodge.top) + ", H*(Ω*) " + dims_string(b.hodge.de_rham));
  r.line("Hodge injectivity: " + std::string(b.hodge.ok() ? "holds" : "fails"));
  r.line("contraction map rank " + std::to_string(b.contraction.rank) + " of " +
         std::to_string(b.contraction.source_dim));
  for (const auto& k : b.contraction.kernel_labels) r.line("  kernel: " + k);
  r.check("IE = Id on Tot(Θ)", b.tw_consistent);
  r.check("Cartan identities on Tot_TW (exact sub-box)", b.tw_contraction);
  r.check("Cartan identities on every chart", b.cartan.report.ok(), std::to_string(b.cartan.triples) + " triples");
  r.failures(b.cartan.report);
  r.check("cup products of cocycles are cocycles", b.contraction.cocycles);
  r.check("(l, i) is an L∞ morphism on the torus-invariant model", b.phi_valid);
  r.line("(l, i) injective in cohomology: " + std::string(b.phi_injective ? "yes" : "no (kernel " +
                                                          std::to_string(b.phi_kernel) + ")"));
  r.line("cone certificate: " + to_string(b.cone_certificate.verdict) + " (" + b.cone_certificate.reason + ")");
  r.line("invariant model: " + to_string(b.model.verdict) + " (" + b.model.reason + ")");
  r.line("Tot_TW(Θ) quasi-abelian: " + to_string(b.verdict.verdict) + " (" + b.verdict.reason + ")");
  r.line(std::string("unobstructed: ") + (b.unobstructed ? "yes, H^2(Θ) = 0" : "not decided"));
  for (const auto& n : b.notes) r.line("note: " + n);
  r.ok = r.ok && b.ok();
  return r;
}

// ---- driver ----------------------------------------------------------------

std::string render_text(const std::string& command, const Outcome& r) {
  std::ostringstream s;
  s << "deforma " << command << "\n";
  for (const auto& l : r.text) s << l << "\n";
  for (const auto& [k, v] : r.verdicts.items()) s << "verdict " << k << ": " << v.get<std::string>() << "\n";
  s << (r.ok ? "all checks passed" : "some checks failed") << "\n";
  return s.str();
}

void write_outputs(const Options& o, const std::string& command, const std::vector<std::string>& argv,
                   const Outcome& r, double elapsed) {
  namespace fs = std::filesystem;
  fs::create_directories(o.out);
  Json report = r.report;
  report["command"] = command;
  report["ok"] = r.ok;
  report["verdicts"] = r.verdicts;
  const std::string json_text = report.dump(2) + "\n";
  const std::string prose = render_text(command, r);
  std::ofstream(fs::path(o.out) / "report.json", std::ios::binary) << json_text;
  std::ofstream(fs::path(o.out) / "report.txt", std::ios::binary) << prose;
  Json inputs = Json::array();
  for (const std::string* p : {&o.input, &o.chi, &o.cover})
    if (!p->empty()) inputs.push_back({{"path", *p}, {"sha256", sha256_hex(slurp(*p))}});
  Json manifest = {{"command", argv},
                   {"tool_version", kVersion},
                   {"inputs", inputs},
                   {"cutoff", o.cutoff},
                   {"box", o.box},
                   {"ring", o.ring},
                   {"seed", o.seed},
                   {"elapsed_seconds", elapsed},
                   {"verdicts", r.verdicts},
                   {"ok", r.ok},
                   {"report_sha256", sha256_hex(json_text)},
                   {"text_sha256", sha256_hex(prose)}};
  std::ofstream(fs::path(o.out) / "manifest.json", std::ios::binary) << manifest.dump(2) << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact deformation theory toolkit"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);
  Options o;

  using Run = std::function<Outcome(const Options&)>;
  std::vector<std::pair<CLI::App*, Run>> commands;
  auto add = [&](const std::string& name, const std::string& help, Run run) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("input", o.input, "input JSON file");
    sub->add_option("--cutoff", o.cutoff, "largest bracket arity")->check(CLI::Range(1u, 8u));
    sub->add_option("--box", o.box, "weight box for toric truncations")->check(CLI::Range(0, 12));
    sub->add_option("--ring", o.ring, "Artinian ring, e.g. \"t^4\" or \"k[t1,t2]/(t1^2, t1*t2, t2^3)\"");
    sub->add_option("--seed", o.seed, "seed for randomized suites");
    sub->add_option("--out", o.out, "directory for report.json, report.txt and manifest.json");
    commands.emplace_back(sub, std::move(run));
    return sub;
  };
  add("check-linfty", "check QQ = 0 on an L∞ algebra or DGLA", check_linfty_cmd);
  add("check-dgla", "check the DGLA axioms", check_dgla_cmd);
  add("check-cartan", "check a Cartan homotopy, or the identities on a toric cover", cartan_cmd)
      ->add_option("--cover", o.cover, "toric cover JSON");
  add("phi-morphism", "the L∞ morphism (l, i) into a cone", phi_cmd);
  add("transfer", "homotopy transfer along a contraction", [](const Options& x) { return transfer_cmd(x, false); });
  add("minimal-model", "transfer to cohomology", [](const Options& x) { return transfer_cmd(x, true); });
  add("certify-qa", "certify quasi-abelianity", certify_cmd);
  add("cone", "L∞ structure on the cone of a DGLA morphism", cone_cmd)->add_option("--chi", o.chi, "morphism JSON");
  add("tot", "total complex of a semicosimplicial DGLA", tot_cmd);
  add("tot-tw", "Thom-Whitney totalization checks", [](const Options& x) { return whitney_cmd(x, true); });
  add("whitney-check", "Whitney map checks", [](const Options& x) { return whitney_cmd(x, false); });
  add("mc-check", "Maurer-Cartan equation over an Artinian ring", mc_cmd);
  add("z1sc", "nonabelian Čech cocycle condition", z1sc_cmd);
  add("h1sc", "gauge equivalence of Čech cocycles", h1sc_cmd);
  add("compare-52", "compare MC(Tot~) with Z¹_sc on random samples", compare52_cmd)
      ->add_option("--samples", o.samples, "number of samples");
  add("cech", "Čech cohomology of a toric cover", cech_cmd)->add_option("--cover", o.cover, "cover JSON");
  app.get_subcommand("cech")->add_option("--sheaf", o.sheaf, "theta, omega<p> or derham");
  add("btt", "the quasi-abelianity pipeline on a toric cover", btt_cmd)->add_option("--cover", o.cover, "cover JSON");
  add("obstruction", "obstruction classes along a small extension", obstruction_cmd)
      ->add_option("--extension", o.extension, "A-to-B, e.g. \"t^3-to-t^2\"");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  for (const auto& [sub, run] : commands) {
    if (!sub->parsed()) continue;
    const std::string command = sub->get_name();
    std::vector<std::string> args(argv, argv + argc);
    const auto start = std::chrono::steady_clock::now();
    try {
      const Outcome r = run(o);
      const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
      std::cout << render_text(command, r);
      if (!o.out.empty()) write_outputs(o, command, args, r, elapsed);
      return r.ok ? 0 : 1;
    } catch (const InputError& e) {
      std::cerr << "input error: " << e.what() << "\n";
      return 2;
    } catch (const Error& e) {
      std::cerr << "check failed: " << e.what() << "\n";
      return 1;
    }
  }
  return 2;
}
