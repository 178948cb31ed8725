#include "coisocalc/cli.hpp"

#include "coisocalc/linf.hpp"
#include "coisocalc/mcdeform.hpp"
#include "coisocalc/totcech.hpp"

#include <yaml-cpp/yaml.h>

#include <filesystem>
#include <set>

namespace coisocalc::cli {

namespace {

std::string locate(int line, int column, const std::string& msg) {
  if (line <= 0) return msg;
  return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg;
}

[[noreturn]] void fail(const YAML::Node& node, const std::string& msg) {
  const YAML::Mark m = node.Mark();
  if (m.is_null()) throw ManifestError(0, 0, msg);
  throw ManifestError(m.line + 1, m.column + 1, msg);
}

[[noreturn]] void fail_at(const YAML::Mark& m, const std::string& msg) {
  if (m.is_null()) throw ManifestError(0, 0, msg);
  throw ManifestError(m.line + 1, m.column + 1, msg);
}

int read_int(const YAML::Node& node, const std::string& what, int lo, std::optional<int> hi = std::nullopt) {
  if (!node.IsScalar()) fail(node, what + " must be an integer");
  int v = 0;
  try {
    v = node.as<int>();
  } catch (const YAML::Exception&) {
    fail(node, what + " must be an integer");
  }
  if (v < lo || (hi && v > *hi)) {
    std::string range = hi ? " in [" + std::to_string(lo) + ", " + std::to_string(*hi) + "]" : " >= " + std::to_string(lo);
    fail(node, what + " must be" + range);
  }
  return v;
}

Poly read_poly(const YAML::Node& node, int n) {
  if (!node.IsScalar()) fail(node, "coeff must be a polynomial string");
  const std::string text = node.Scalar();
  try {
    return Poly::parse(text, n);
  } catch (const PolyParseError& e) {
    const YAML::Mark m = node.Mark();
    const int quoted = node.Tag() == "!" ? 1 : 0;
    std::string msg = e.what();
    if (msg.rfind("column ", 0) == 0 && msg.find(": ") != std::string::npos) msg = msg.substr(msg.find(": ") + 2);
    throw ManifestError(m.line + 1, m.column + 1 + quoted + e.column() - 1, "bad polynomial: " + msg);
  } catch (const std::exception& e) {
    fail(node, e.what());
  }
}

/// Entries {indices, coeff}; exterior degree fixed when exact_degree is set.
template <class Tag>
Multi<Tag> read_entries(const YAML::Node& list, int n, std::optional<int> exact_degree) {
  if (!list.IsSequence()) fail(list, "expected a list of {indices, coeff} entries");
  Multi<Tag> out(n);
  std::set<MIdx> seen;
  for (const auto& entry : list) {
    if (!entry.IsMap()) fail(entry, "entry must be a mapping with indices and coeff");
    for (const auto& kv : entry) {
      const std::string key = kv.first.Scalar();
      if (key != "indices" && key != "coeff") fail(kv.first, "unknown entry key '" + key + "'");
    }
    const YAML::Node idx = entry["indices"];
    const YAML::Node coeff = entry["coeff"];
    if (!idx) fail(entry, "entry is missing indices");
    if (!coeff) fail(entry, "entry is missing coeff");
    if (!idx.IsSequence()) fail(idx, "indices must be a list");
    MIdx ix;
    for (const auto& i : idx) ix.push_back(read_int(i, "index", 1, n));
    if (exact_degree && static_cast<int>(ix.size()) != *exact_degree)
      fail(idx, "expected " + std::to_string(*exact_degree) + " indices");
    MIdx sorted = ix;
    const int sign = sort_with_sign(sorted);
    if (sign == 0) fail(idx, "repeated index");
    if (!seen.insert(sorted).second) {
      std::string s;
      for (int i : sorted) s += (s.empty() ? "" : ",") + std::to_string(i);
      fail(idx, "duplicate indices (" + s + ")");
    }
    Poly f = read_poly(coeff, n);
    out.add(sorted, sign > 0 ? f : -f);
  }
  return out;
}

template <class Tag>
nlohmann::json entries_json(const Multi<Tag>& m) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [idx, f] : m.components()) out.push_back({{"indices", idx}, {"coeff", f.str()}});
  return out;
}

nlohmann::json rat_vec_json(const Vec& v) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& r : v) out.push_back(rat_str(r));
  return out;
}

std::filesystem::path resolve(const Manifest& m, const std::string& base_dir) {
  if (!m.fixture) throw UsageError("this command needs a fixture path in the manifest");
  std::filesystem::path p(*m.fixture);
  return p.is_absolute() ? p : std::filesystem::path(base_dir) / p;
}

int require(const std::optional<int>& v, const char* what) {
  if (!v) throw UsageError(std::string("this command needs ") + what);
  return *v;
}

const std::vector<Form>& require_forms(const Manifest& m) {
  if (!m.forms || m.forms->empty()) throw UsageError("this command needs a non-empty forms list");
  return *m.forms;
}

std::vector<Form> default_span(const CoisoSetup& s) {
  std::vector<Form> out;
  for (int i = 1; i <= s.n; ++i) out.push_back(form_function(Poly::var(s.n, i)));
  for (int i = 1; i <= s.n; ++i) out.push_back(coord_form(s.n, i));
  return out;
}

nlohmann::json slice_json(const SliceBasis& b) {
  nlohmann::json basis = nlohmann::json::array();
  for (const auto& v : b.basis) basis.push_back(entries_json(v.lift()));
  return {{"dimension", b.dimension()},
          {"coeff_degree", b.coeff_degree},
          {"source_dim", b.source_dim},
          {"truncated", b.truncated},
          {"basis", basis}};
}

nlohmann::json cohomology_json(const ComplexCohomology& c) {
  return {{"lo", c.lo}, {"dims", c.dims}, {"h", c.h}};
}

std::vector<Vec> unit_basis(int dim) {
  std::vector<Vec> out;
  for (int i = 0; i < dim; ++i) {
    Vec v(dim);
    v[i] = 1;
    out.push_back(v);
  }
  return out;
}

std::vector<MultiMap<Vec>> maps_of(const std::vector<SymMap>& qs) {
  std::vector<MultiMap<Vec>> out;
  for (const auto& q : qs) out.push_back(q.as_map());
  return out;
}

nlohmann::json run_inner(const std::string& cmd, const Manifest& m, const std::string& base_dir,
                         nlohmann::json& provenance) {
  if (cmd == "check-poisson") {
    return {{"result", is_poisson(m.setup().pi)}};
  }
  if (cmd == "check-coisotropic") {
    const CoisoSetup s = m.setup();
    const bool r = is_coisotropic(s);
    const CoisotropyWitness w = coisotropy_characterizations(s);
    const bool agree = w.bivector_test == r && w.koszul_closed == r && w.h_closed == r && w.anchor_maps_ideal == r;
    if (!agree) throw InvariantError("coisotropy characterizations disagree");
    return {{"result", r},
            {"characterizations",
             {{"bivector", w.bivector_test}, {"koszul", w.koszul_closed}, {"h", w.h_closed}, {"anchor", w.anchor_maps_ideal}}}};
  }
  if (cmd == "lp-differential") {
    const CoisoSetup s = m.setup();
    if (!m.multivector) throw UsageError("this command needs a multivector");
    const PVF image = lichnerowicz(s, *m.multivector);
    const bool square_zero = lichnerowicz(s, image).is_zero();
    const bool poisson = is_poisson(s.pi);
    if (poisson && !square_zero) throw InvariantError("d_pi squared is nonzero for a Poisson bivector");
    return {{"image", entries_json(image)}, {"square_zero", square_zero}, {"poisson", poisson}};
  }
  if (cmd == "anchor") {
    const CoisoSetup s = m.setup();
    nlohmann::json images = nlohmann::json::array();
    for (const auto& f : require_forms(m)) images.push_back(entries_json(anchor(s, f)));
    return {{"images", images}};
  }
  if (cmd == "koszul") {
    const CoisoSetup s = m.setup();
    const auto& fs = require_forms(m);
    nlohmann::json pairs = nlohmann::json::array();
    for (size_t i = 0; i < fs.size(); ++i)
      for (size_t j = i; j < fs.size(); ++j)
        pairs.push_back({{"i", i}, {"j", j}, {"bracket", entries_json(koszul(s, fs[i], fs[j]))}});
    return {{"pairs", pairs}};
  }
  if (cmd == "h-check") {
    const CoisoSetup s = m.setup();
    const std::vector<Form> span = m.forms ? *m.forms : default_span(s);
    const DglaCarrier<Form> C = koszul_carrier(s);
    const AbelianityReport rep = check_abelianity(C, span);
    std::vector<std::vector<Form>> pairs, triples;
    for (const auto& a : span)
      for (const auto& b : span) {
        pairs.push_back({a, b});
        for (const auto& c : span) triples.push_back({a, b, c});
      }
    const auto nr = nr_identity_failure(C, pairs, triples);
    nlohmann::json out = {{"result", rep.ok && !nr},
                          {"conditions", rep.ok},
                          {"nr_identities", !nr},
                          {"pairs", rep.pairs},
                          {"triples", rep.triples},
                          {"span_size", span.size()}};
    if (!rep.ok) out["failure"] = rep.failure;
    if (nr) out["nr_failure"] = *nr;
    return out;
  }
  if (cmd == "t1" || cmd == "obstructions") {
    const CoisoSetup s = m.setup();
    const int d = require(m.degree, "a coefficient degree (--degree)");
    provenance["degree"] = d;
    if (m.cap) provenance["cap"] = *m.cap;
    return slice_json(cmd == "t1" ? t1_basis(s, d, m.cap) : obstruction_space_basis(s, d, m.cap));
  }
  if (cmd == "mc-extend") {
    const CoisoSetup s = m.setup();
    const int order = require(m.order, "an Artin order (--order)");
    if (order < 2) throw UsageError("the Artin order must be at least 2");
    if (!m.first_order) throw UsageError("this command needs a first_order normal vector field");
    provenance["order"] = order;
    const EmbeddedExtendResult r = mc_extend_to(s, NormalPVF(s.p, *m.first_order), order);
    if (r.extended && !series_is_zero(PvfArena(s.n, s.pi), coisotropy_residual(s, r.nu)))
      throw InvariantError("extended deformation is not coisotropic");
    nlohmann::json nu = nlohmann::json::array();
    for (int k = 1; k < r.nu.order(); ++k) nu.push_back(entries_json(r.nu[k]));
    nlohmann::json out = {{"extended", r.extended}, {"order", r.order}, {"truncated", r.truncated}, {"nu", nu}};
    if (!r.extended) {
      out["obstruction"] = entries_json(r.obstruction.lift());
      out["obstruction_cocycle"] = r.obstruction_cocycle;
    }
    return out;
  }
  if (cmd == "derived-brackets" || cmd == "linf-verify") {
    const SplitGLA S = SplitGLA::load(resolve(m, base_dir).string());
    const int arity = m.arity.value_or(cmd == "derived-brackets" ? 3 : 4);
    if (arity < 1) throw UsageError("arity must be positive");
    provenance["arity"] = arity;
    const std::vector<SymMap> qs = derived_brackets(S, arity);
    if (cmd == "derived-brackets") {
      std::vector<std::string> a_labels;
      for (int i : S.a_indices()) a_labels.push_back(S.labels.empty() ? "e" + std::to_string(i) : S.labels[i]);
      nlohmann::json brackets = nlohmann::json::array();
      for (const auto& q : qs) {
        nlohmann::json table = nlohmann::json::array();
        for (const auto& [key, v] : q.table) {
          if (is_zero(v)) continue;
          std::vector<std::string> in;
          for (int i : key) in.push_back(a_labels[i]);
          table.push_back({{"inputs", in}, {"value", rat_vec_json(v)}});
        }
        brackets.push_back({{"arity", q.arity}, {"degree", q.degree}, {"nonzero", table}});
      }
      return {{"a_labels", a_labels}, {"a_degrees", S.a_degrees()}, {"brackets", brackets}};
    }
    const std::vector<int> adeg = S.a_degrees();
    const LinfReport rep = linf_check(vec_ops(adeg), maps_of(qs), arity, unit_basis(static_cast<int>(adeg.size())));
    const FinDGLA M = S.dgla();
    auto [q1, q2] = decalage(M);
    const bool axioms = !M.axiom_failure().has_value();
    const bool dec = linf_check(vec_ops(q1.vdeg), maps_of({q1, q2}), 3, unit_basis(M.dim())).ok;
    if (axioms != dec) throw InvariantError("decalage cross-check disagrees with the DGLA axioms");
    nlohmann::json out = {{"result", rep.ok},
                          {"relations", rep.relations},
                          {"decalage", {{"axioms_hold", axioms}, {"linf_holds", dec}}}};
    if (!rep.ok) out["failure"] = rep.failure;
    return out;
  }
  if (cmd == "tot-verify") {
    const ScsDGLA S = ScsDGLA::load(resolve(m, base_dir).string());
    const int bound = m.degree.value_or(2);
    provenance["degree"] = bound;
    const TotVerifyReport r = verify_tot(S, bound);
    return {{"result", r.ok()},
            {"chain_map", r.chain_map},
            {"inclusion", r.inclusion},
            {"agree", r.agree},
            {"checked", r.checked},
            {"tot", cohomology_json(r.tot)},
            {"cech", cohomology_json(r.cech)}};
  }
  throw UsageError("unknown command '" + cmd + "'");
}

}  // namespace

ManifestError::ManifestError(int line, int column, const std::string& msg)
    : std::runtime_error(locate(line, column, msg)), line_(line), column_(column), msg_(msg) {}

CoisoSetup Manifest::setup() const {
  if (!n) throw UsageError("this command needs the chart dimension n");
  return CoisoSetup(*n, codim, poisson);
}

bool Manifest::operator==(const Manifest& o) const {
  return n == o.n && codim == o.codim && poisson == o.poisson && degree == o.degree && order == o.order &&
         arity == o.arity && cap == o.cap && multivector == o.multivector && forms == o.forms &&
         first_order == o.first_order && fixture == o.fixture;
}

Manifest parse_manifest(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    fail_at(e.mark, e.msg);
  }
  Manifest m;
  if (root.IsNull()) throw ManifestError(1, 1, "empty manifest");
  if (!root.IsMap()) fail(root, "manifest must be a mapping");
  static const std::set<std::string> known = {"n",     "codim", "poisson",     "degree", "order", "arity",
                                              "cap",   "forms", "multivector", "first_order", "fixture"};
  for (const auto& kv : root) {
    if (!kv.first.IsScalar() || !known.count(kv.first.Scalar())) fail(kv.first, "unknown manifest key");
  }
  if (root["n"]) m.n = read_int(root["n"], "n", 1);
  auto need_n = [&](const char* key) {
    if (!m.n) fail(root[key], std::string(key) + " requires the chart dimension n");
    return *m.n;
  };
  if (root["codim"]) m.codim = read_int(root["codim"], "codim", 0, need_n("codim"));
  m.poisson = PVF(m.n.value_or(0));
  if (root["poisson"]) m.poisson = read_entries<PvfTag>(root["poisson"], need_n("poisson"), 2);
  if (root["degree"]) m.degree = read_int(root["degree"], "degree", 0);
  if (root["order"]) m.order = read_int(root["order"], "order", 2);
  if (root["arity"]) m.arity = read_int(root["arity"], "arity", 1);
  if (root["cap"]) m.cap = read_int(root["cap"], "cap", 0);
  if (root["multivector"]) m.multivector = read_entries<PvfTag>(root["multivector"], need_n("multivector"), std::nullopt);
  if (root["first_order"]) m.first_order = read_entries<PvfTag>(root["first_order"], need_n("first_order"), 1);
  if (root["forms"]) {
    const YAML::Node fs = root["forms"];
    const int n = need_n("forms");
    if (!fs.IsSequence()) fail(fs, "forms must be a list of forms");
    m.forms.emplace();
    for (const auto& f : fs) m.forms->push_back(read_entries<FormTag>(f, n, std::nullopt));
  }
  if (root["fixture"]) {
    const YAML::Node f = root["fixture"];
    if (!f.IsScalar() || f.Scalar().empty()) fail(f, "fixture must be a path");
    m.fixture = f.Scalar();
  }
  return m;
}

nlohmann::json manifest_json(const Manifest& m) {
  nlohmann::json j = nlohmann::json::object();
  if (m.n) {
    j["n"] = *m.n;
    j["codim"] = m.codim;
    j["poisson"] = entries_json(m.poisson);
  }
  if (m.degree) j["degree"] = *m.degree;
  if (m.order) j["order"] = *m.order;
  if (m.arity) j["arity"] = *m.arity;
  if (m.cap) j["cap"] = *m.cap;
  if (m.multivector) j["multivector"] = entries_json(*m.multivector);
  if (m.first_order) j["first_order"] = entries_json(*m.first_order);
  if (m.forms) {
    j["forms"] = nlohmann::json::array();
    for (const auto& f : *m.forms) j["forms"].push_back(entries_json(f));
  }
  if (m.fixture) j["fixture"] = *m.fixture;
  return j;
}

std::string serialize(const Manifest& m) { return manifest_json(m).dump(2) + "\n"; }

const std::vector<std::string>& commands() {
  static const std::vector<std::string> c = {"check-poisson", "check-coisotropic", "lp-differential", "anchor",
                                             "koszul",        "h-check",           "t1",              "obstructions",
                                             "mc-extend",     "derived-brackets",  "linf-verify",     "tot-verify"};
  return c;
}

nlohmann::json run(const std::string& command, const Manifest& m, const std::string& base_dir) {
  nlohmann::json provenance = {{"library", "coisocalc"}, {"version", kVersion}};
  nlohmann::json results = run_inner(command, m, base_dir, provenance);
  return {{"task", command}, {"inputs", manifest_json(m)}, {"results", results}, {"provenance", provenance}};
}

std::string render(const nlohmann::json& report) { return report.dump(2) + "\n"; }

}  // namespace coisocalc::cli
