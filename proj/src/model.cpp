#include "lh/model.hpp"

#include <fstream>
#include <sstream>

namespace lh {

namespace {

std::string join(const std::vector<std::string>& v, const std::string& sep) {
  std::string out;
  for (size_t i = 0; i < v.size(); ++i) out += (i ? sep : "") + v[i];
  return out;
}

std::vector<std::string> split(const std::string& s, char c) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : s) {
    if (ch == c) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += ch;
    }
  }
  out.push_back(cur);
  return out;
}

// Errors raised while reading one entity carry its JSON path.
struct Ctx {
  std::string path;
  Ctx operator/(const std::string& k) const { return {path + "/" + k}; }
  [[noreturn]] void fail(const std::string& msg) const { throw SchemaError({path + ": " + msg}); }
};

const json& member(const Ctx& c, const json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) c.fail("missing field '" + key + "'");
  return j.at(key);
}

std::string get_string(const Ctx& c, const json& j) {
  if (!j.is_string()) c.fail("expected a string");
  return j.get<std::string>();
}

Scalar get_rational(const Ctx& c, const json& j) {
  if (!j.is_string()) c.fail("rationals must be given as strings \"p/q\"");
  try {
    return parse_scalar(j.get<std::string>());
  } catch (const Error& e) {
    c.fail(e.what());
  }
}

int label_index(const Ctx& c, const SpacePtr& S, const std::string& label) {
  if (!S->has(label)) c.fail("unknown label '" + label + "' in space " + S->name());
  return S->index(label);
}

Vector get_vector(const Ctx& c, const SpacePtr& S, const json& j) {
  if (!j.is_object()) c.fail("expected an object {label: rational}");
  Vector v(S);
  for (auto& [k, val] : j.items()) {
    Scalar q = get_rational(c / k, val);
    if (q != 0) v.add(label_index(c / k, S, k), q);
  }
  return v;
}

GradedMultilinearMap get_map(const Ctx& c, const SpacePtr& src, const SpacePtr& tgt, int arity,
                             int degree, const json& j) {
  if (!j.is_object()) c.fail("expected an object {\"a,b\": vector}");
  GradedMultilinearMap m(src, tgt, arity, degree);
  for (auto& [k, val] : j.items()) {
    Ctx ck = c / k;
    auto parts = split(k, ',');
    if (static_cast<int>(parts.size()) != arity)
      ck.fail("expected " + std::to_string(arity) + " comma-separated labels");
    std::vector<int> t;
    for (auto& p : parts) t.push_back(label_index(ck, src, p));
    Vector v = get_vector(ck, tgt, val);
    if (v.is_zero()) continue;
    try {
      m.add(t, v);
    } catch (const Error& e) {
      ck.fail(e.what());
    }
  }
  return m;
}

int get_arity(const Ctx& c, const std::string& k) {
  try {
    size_t pos = 0;
    int a = std::stoi(k, &pos);
    if (pos != k.size() || a < 1) throw std::invalid_argument(k);
    return a;
  } catch (const std::exception&) {
    c.fail("arity keys must be positive integers");
  }
}

TensorPoly get_tensor(const Ctx& c, const SpacePtr& U, const json& j) {
  if (!j.is_object()) c.fail("expected an object {\"a|b\": rational}");
  TensorPoly x(U);
  for (auto& [k, val] : j.items()) {
    Word w;
    for (auto& p : split(k, '|')) w.push_back(label_index(c / k, U, p));
    x.add(w, get_rational(c / k, val));
  }
  return x;
}

TPoly get_tpoly(const Ctx& c, const SpacePtr& U, const json& j) {
  if (!j.is_array()) c.fail("expected a list of tensors indexed by the power of t");
  TPoly p;
  for (size_t k = 0; k < j.size(); ++k) p.push_back(get_tensor(c / std::to_string(k), U, j[k]));
  while (!p.empty() && p.back().is_zero()) p.pop_back();
  return p;
}

std::map<int, TPoly> get_generator_images(const Ctx& c, const SpacePtr& src, const SpacePtr& tgt,
                                          const json& j, bool polynomial) {
  if (!j.is_object()) c.fail("expected an object keyed by generators");
  std::map<int, TPoly> out;
  for (auto& [k, val] : j.items()) {
    int g = label_index(c / k, src, k);
    out[g] = polynomial ? get_tpoly(c / k, tgt, val) : TPoly{get_tensor(c / k, tgt, val)};
  }
  return out;
}

template <class F>
void each_entity(const json& doc, const std::string& section, std::vector<std::string>& errors,
                 F&& f) {
  if (!doc.contains(section)) return;
  const json& s = doc.at(section);
  Ctx c{"/" + section};
  if (!s.is_object()) {
    errors.push_back(c.path + ": expected an object keyed by name");
    return;
  }
  for (auto& [name, val] : s.items()) {
    try {
      f(c / name, name, val);
    } catch (const SchemaError& e) {
      for (auto& m : e.messages()) errors.push_back(m);
    } catch (const Error& e) {
      errors.push_back((c / name).path + ": " + e.what());
    }
  }
}

SpacePtr lookup_space(const Ctx& c, const Model& m, const json& j) {
  std::string s = get_string(c, j);
  auto it = m.spaces.find(s);
  if (it == m.spaces.end()) c.fail("unknown space '" + s + "'");
  return it->second;
}

std::string line_of(const std::string& text, size_t byte) {
  size_t line = 1, col = 1;
  for (size_t i = 0; i < byte && i < text.size(); ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return "line " + std::to_string(line) + ", column " + std::to_string(col);
}

}  // namespace

SchemaError::SchemaError(std::vector<std::string> msgs)
    : Error(msgs.empty() ? "schema error" : join(msgs, "; ")), msgs_(std::move(msgs)) {}

AlgebraPtr Model::algebra(const std::string& name) const {
  auto it = algebras.find(name);
  if (it == algebras.end()) throw SchemaError({"unknown algebra '" + name + "'"});
  return it->second;
}

std::shared_ptr<const InftyMorphism> Model::morphism(const std::string& name) const {
  auto it = morphisms.find(name);
  if (it == morphisms.end()) throw SchemaError({"unknown morphism '" + name + "'"});
  return it->second;
}

const Homotopy2Term& Model::homotopy(const std::string& name) const {
  auto it = homotopies.find(name);
  if (it == homotopies.end()) throw SchemaError({"unknown homotopy '" + name + "'"});
  return it->second;
}

const LInftyEntry& Model::linfty_algebra(const std::string& name) const {
  auto it = linfty.find(name);
  if (it == linfty.end()) throw SchemaError({"unknown L-infinity algebra '" + name + "'"});
  return it->second;
}

const Concordance& Model::concordance(const std::string& name) const {
  auto it = concordances.find(name);
  if (it == concordances.end()) throw SchemaError({"unknown concordance '" + name + "'"});
  return it->second;
}

Model parse_model(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw SchemaError({line_of(text, e.byte) + ": " + e.what()});
  }
  if (!doc.is_object()) throw SchemaError({"/: the model must be a JSON object"});
  static const std::vector<std::string> known{"spaces", "algebras", "morphisms", "homotopies",
                                              "dgzas", "concordances", "description"};
  std::vector<std::string> errors;
  for (auto& [k, v] : doc.items())
    if (std::find(known.begin(), known.end(), k) == known.end())
      errors.push_back("/" + k + ": unknown section");
  Model m;

  each_entity(doc, "spaces", errors, [&](const Ctx& c, const std::string& name, const json& j) {
    if (!j.is_object()) c.fail("expected an object {label: degree}");
    std::vector<std::pair<std::string, int>> basis;
    for (auto& [label, d] : j.items()) {
      if (!d.is_number_integer()) (c / label).fail("degrees must be integers");
      if (label.empty() || label.find_first_of(",|*+- ") != std::string::npos)
        (c / label).fail("labels may not be empty or contain , | * + - or spaces");
      basis.emplace_back(label, d.get<int>());
    }
    m.spaces[name] = make_space(name, basis);
  });

  each_entity(doc, "algebras", errors, [&](const Ctx& c, const std::string& name, const json& j) {
    std::string kind = get_string(c / "kind", member(c, j, "kind"));
    SpacePtr V = lookup_space(c / "space", m, member(c, j, "space"));
    std::map<int, GradedMultilinearMap> ops;
    if (j.contains("operations")) {
      const json& o = j.at("operations");
      if (!o.is_object()) (c / "operations").fail("expected an object keyed by arity");
      for (auto& [k, val] : o.items()) {
        Ctx ck = c / "operations" / k;
        int a = get_arity(ck, k);
        int degree = kind == "l-infinity" && j.value("grading", "homological") == "cohomological"
                         ? 2 - a
                         : a - 2;
        ops.emplace(a, get_map(ck, V, V, a, degree, val));
      }
    }
    if (kind == "l-infinity") {
      Convention conv = parse_convention(j.value("convention", "lada-stasheff"));
      std::string gr = j.value("grading", "homological");
      if (gr != "homological" && gr != "cohomological") (c / "grading").fail("unknown grading");
      int nil = j.value("nilpotencyBound", 8);
      if (nil < 1) (c / "nilpotencyBound").fail("must be positive");
      auto L = std::make_shared<ExplicitLInfty>(
          V, ops, conv, gr == "homological" ? Grading::Homological : Grading::Cohomological, nil);
      m.linfty[name] = LInftyEntry{L, V};
    } else if (kind == "leibniz-infinity" || kind == "2-term") {
      auto A = std::make_shared<LeibnizInftyAlgebra>(name, V, ops);
      if (kind == "2-term" && !A->is_two_term())
        c.fail("a 2-term algebra needs degrees in {0, 1} and no operations beyond arity 3");
      m.algebras[name] = A;
    } else {
      (c / "kind").fail("kind must be leibniz-infinity, 2-term or l-infinity");
    }
  });

  each_entity(doc, "morphisms", errors, [&](const Ctx& c, const std::string& name, const json& j) {
    std::string s = get_string(c / "source", member(c, j, "source"));
    std::string t = get_string(c / "target", member(c, j, "target"));
    if (!m.algebras.count(s)) (c / "source").fail("unknown algebra '" + s + "'");
    if (!m.algebras.count(t)) (c / "target").fail("unknown algebra '" + t + "'");
    auto f = std::make_shared<InftyMorphism>();
    f->source = m.algebras.at(s);
    f->target = m.algebras.at(t);
    const json& comps = member(c, j, "components");
    if (!comps.is_object()) (c / "components").fail("expected an object keyed by arity");
    for (auto& [k, val] : comps.items()) {
      Ctx ck = c / "components" / k;
      int a = get_arity(ck, k);
      f->phi.emplace(a, get_map(ck, f->source->V, f->target->V, a, a - 1, val));
    }
    m.morphisms[name] = f;
  });

  each_entity(doc, "homotopies", errors, [&](const Ctx& c, const std::string& name, const json& j) {
    std::string from = get_string(c / "from", member(c, j, "from"));
    std::string to = get_string(c / "to", member(c, j, "to"));
    if (!m.morphisms.count(from)) (c / "from").fail("unknown morphism '" + from + "'");
    if (!m.morphisms.count(to)) (c / "to").fail("unknown morphism '" + to + "'");
    auto f = m.morphisms.at(from), g = m.morphisms.at(to);
    if (f->source != g->source || f->target != g->target)
      c.fail("homotopy between morphisms with different source or target");
    GradedMultilinearMap theta =
        get_map(c / "theta", f->source->V, f->target->V, 1, 1, member(c, j, "theta"));
    m.homotopies.emplace(name, Homotopy2Term{f, g, theta});
  });

  each_entity(doc, "dgzas", errors, [&](const Ctx& c, const std::string& name, const json& j) {
    auto D = std::make_shared<DGZA>();
    D->name = name;
    D->U = lookup_space(c / "generators", m, member(c, j, "generators"));
    D->N = j.value("truncation", 3);
    if (D->N < 1) (c / "truncation").fail("must be positive");
    if (j.contains("d")) {
      const json& d = j.at("d");
      if (!d.is_object()) (c / "d").fail("expected an object keyed by generators");
      for (auto& [k, val] : d.items()) {
        int g = label_index(c / "d" / k, D->U, k);
        TensorPoly x = get_tensor(c / "d" / k, D->U, val);
        for (auto& [w, q] : x.terms)
          if (word_degree(*D->U, w) != D->U->degree(g) - 1)
            (c / "d" / k).fail("d must have degree -1");
        D->dgen[g] = x;
      }
    }
    m.dgzas[name] = D;
  });

  each_entity(doc, "concordances", errors, [&](const Ctx& c, const std::string& name,
                                                const json& j) {
    std::string s = get_string(c / "source", member(c, j, "source"));
    std::string t = get_string(c / "target", member(c, j, "target"));
    if (!m.dgzas.count(s)) (c / "source").fail("unknown dgza '" + s + "'");
    if (!m.dgzas.count(t)) (c / "target").fail("unknown dgza '" + t + "'");
    DGZAPtr S = m.dgzas.at(s), T = m.dgzas.at(t);
    auto phi = extend_morphism(S, T, get_generator_images(c / "phi", S->U, T->U,
                                                          member(c, j, "phi"), true));
    std::map<int, TPoly> rho_gen;
    if (j.contains("rho")) rho_gen = get_generator_images(c / "rho", S->U, T->U, j.at("rho"), true);
    auto rho = extend_derivation(phi, rho_gen);
    auto p = extend_morphism(S, T, get_generator_images(c / "p", S->U, T->U, member(c, j, "p"), false));
    auto q = extend_morphism(S, T, get_generator_images(c / "q", S->U, T->U, member(c, j, "q"), false));
    m.concordances.emplace(name, Concordance{phi, rho, p, q});
  });

  if (!errors.empty()) throw SchemaError(errors);
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SchemaError({path + ": cannot read file"});
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_model(ss.str());
}

Vector parse_label_expr(const SpacePtr& S, const std::string& expr) {
  std::string s;
  for (char ch : expr)
    if (ch != ' ') s += ch;
  Vector v(S);
  if (s.empty() || s == "0") return v;
  size_t i = 0;
  while (i < s.size()) {
    int sign = 1;
    if (s[i] == '+' || s[i] == '-') {
      sign = s[i] == '-' ? -1 : 1;
      ++i;
    }
    size_t j = i;
    while (j < s.size() && s[j] != '+' && s[j] != '-') ++j;
    std::string term = s.substr(i, j - i);
    if (term.empty()) throw SchemaError({"malformed expression '" + expr + "'"});
    Scalar c = 1;
    std::string label = term;
    auto star = term.find('*');
    if (star != std::string::npos) {
      try {
        c = parse_scalar(term.substr(0, star));
      } catch (const Error& e) {
        throw SchemaError({"malformed expression '" + expr + "': " + e.what()});
      }
      label = term.substr(star + 1);
    }
    if (!S->has(label)) throw SchemaError({"unknown label '" + label + "' in '" + expr + "'"});
    v.add(S->index(label), sign * c);
    i = j;
  }
  Vector out(S);
  for (auto& [k, c] : v.terms())
    if (c != 0) out.add(k, c);
  return out;
}

json to_json(const Vector& v) {
  json j = json::object();
  for (auto& [i, c] : v.terms()) j[v.space()->label(i)] = to_string(c);
  return j;
}

json to_json(const GradedMultilinearMap& m) {
  json j = json::object();
  for (auto& [t, v] : m.coeffs()) {
    if (v.is_zero()) continue;
    std::vector<std::string> labels;
    for (int a : t) labels.push_back(m.source()->label(a));
    j[join(labels, ",")] = to_json(v);
  }
  return j;
}

json to_json(const InftyMorphism& f) {
  json j = json::object();
  for (auto& [k, m] : f.phi)
    if (!m.is_zero()) j[std::to_string(k)] = to_json(m);
  return j;
}

json to_json(const FormValued& x) {
  json j = json::object();
  for (auto& [l, f] : x.comps) j[x.space->label(l)] = f.str();
  return j;
}

json to_json(const Report& r) {
  json j;
  j["pass"] = r.pass;
  j["checked"] = r.checked;
  json ids = json::object();
  for (auto& [k, v] : r.identities) ids[k] = v;
  j["identities"] = ids;
  json fs = json::array();
  for (auto& f : r.failures)
    fs.push_back({{"identity", f.identity}, {"tuple", f.tuple}, {"lhs", f.lhs}, {"rhs", f.rhs}});
  j["failures"] = fs;
  return j;
}

json space_to_json(const GradedVectorSpace& S) {
  json j = json::object();
  for (auto& [l, d] : S.basis()) j[l] = d;
  return j;
}

json algebra_to_json(const LeibnizInftyAlgebra& A, const std::string& kind) {
  json ops = json::object();
  for (auto& [k, m] : A.l)
    if (!m.is_zero()) ops[std::to_string(k)] = to_json(m);
  return {{"kind", kind}, {"space", A.V->name()}, {"operations", ops}};
}

json morphism_to_json(const InftyMorphism& f) {
  return {{"source", f.source->name}, {"target", f.target->name}, {"components", to_json(f)}};
}

json homotopy_to_json(const Homotopy2Term& h, const std::string& from, const std::string& to) {
  return {{"from", from}, {"to", to}, {"theta", to_json(h.theta)}};
}

std::string report_text(const std::string& title, const Report& r) {
  std::ostringstream os;
  os << title << ": " << (r.pass ? "PASS" : "FAIL") << " (" << r.checked << " checks)\n";
  for (auto& [k, v] : r.identities) os << "  " << (v ? "[ok]   " : "[FAIL] ") << k << "\n";
  for (auto& f : r.failures) {
    os << "  counterexample " << f.identity;
    if (!f.tuple.empty()) os << " at (" << join(f.tuple, ", ") << ")";
    os << ": " << f.lhs << " != " << f.rhs << "\n";
  }
  return os.str();
}

}  // namespace lh
