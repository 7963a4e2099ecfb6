// lhc: command line front end over JSON model documents.
// Exit status: 0 all checks pass, 1 some identity fails, 2 usage or schema error.

#include <functional>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lh/forms.hpp"
#include "lh/lei2.hpp"
#include "lh/leibniz.hpp"
#include "lh/linfty.hpp"
#include "lh/model.hpp"

namespace {

using namespace lh;

struct Outcome {
  std::string title;
  Report report;
  json result = json::object();
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Options {
  std::string model_path;
  bool as_json = false;
  int arity = 4;
  int truncation = 3;
  std::string algebra, morphism, homotopy, concordance, first, second, compose_with;
  bool vertical = false, horizontal = false, via_kan = false;
  std::vector<int> order{2, 0, 1};
  int pad = 0;
  int vertex = 0;
  std::string alpha, r, t = "1";
  unsigned seed = 1;
  int count = 70;
};

// A failing identity is recorded as a report entry instead of aborting.
void check_equal(Report& r, const std::string& name, const std::string& lhs, const std::string& rhs,
                 bool equal, std::vector<std::string> at = {}) {
  ++r.checked;
  r.note(name);
  if (!equal) r.fail({name, std::move(at), lhs, rhs});
}

std::string map_str(const GradedMultilinearMap& m) { return to_json(m).dump(); }

json theta_json(const Homotopy2Term& h) { return to_json(h.theta); }

Report guarded(const std::string& name, const std::function<Report()>& f) {
  try {
    return f();
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    Report r;
    ++r.checked;
    r.fail({name, {}, e.what(), "no exception"});
    return r;
  }
}

const Model& need_model(const std::optional<Model>& m) {
  if (!m) throw UsageError("this command needs a model file");
  return *m;
}

std::string need(const std::string& v, const std::string& flag) {
  if (v.empty()) throw UsageError("missing " + flag);
  return v;
}

// "id:A" is the identity morphism of A.
std::shared_ptr<const InftyMorphism> morphism_ref(const Model& m, const std::string& name) {
  if (name.rfind("id:", 0) == 0)
    return std::make_shared<const InftyMorphism>(InftyMorphism::identity(m.algebra(name.substr(3))));
  return m.morphism(name);
}

// "id:f" is the zero homotopy f => f; "id:A" the zero homotopy on the identity of A.
Homotopy2Term homotopy_ref(const Model& m, const std::string& name) {
  if (name.rfind("id:", 0) == 0) {
    const std::string x = name.substr(3);
    auto f = m.algebras.count(x) ? morphism_ref(m, name) : m.morphism(x);
    return Homotopy2Term{f, f, GradedMultilinearMap(f->source->V, f->target->V, 1, 1)};
  }
  return m.homotopy(name);
}

std::optional<Lei2Ptr> lei2_of(const AlgebraPtr& A) {
  if (!A->is_two_term()) return std::nullopt;
  try {
    return std::make_shared<const Leibniz2Algebra>(to_lei2(*A));
  } catch (const Error&) {
    return std::nullopt;
  }
}

Outcome check_algebra(const Model& m, const Options& o) {
  const std::string name = need(o.algebra, "--algebra");
  Outcome out{"check-algebra " + name, {}, {}};
  if (m.linfty.count(name)) {
    const auto& L = *m.linfty_algebra(name).algebra;
    out.report = check_linfty_jacobi(L, o.arity);
    out.result["kind"] = "l-infinity";
    out.result["convention"] = to_string(L.convention());
    return out;
  }
  AlgebraPtr A = m.algebra(name);
  out.result["kind"] = A->is_two_term() ? "2-term" : "leibniz-infinity";
  out.report = check_jacobi(*A, o.arity);
  out.report.merge(check_codifferential(*A, o.arity));
  if (A->is_two_term()) {
    out.report.merge(check_2term_axioms(*A));
    if (auto B = lei2_of(A)) out.report.merge(check_jacobiator(**B));
  }
  return out;
}

Outcome check_morphism_cmd(const Model& m, const Options& o) {
  const std::string name = need(o.morphism, "--morphism");
  auto f = morphism_ref(m, name);
  Outcome out{"check-morphism " + name, {}, {}};
  out.report = check_morphism(*f, o.arity);
  out.report.merge(check_morphism_chain_map(*f, o.arity));
  out.report.merge(guarded("maurer-cartan", [&] {
    ConvolutionAlgebra L(f->source, f->target, o.truncation);
    return morphism_mc_roundtrip(L, *f);
  }));
  auto S = lei2_of(f->source), T = lei2_of(f->target);
  if (S && T)
    out.report.merge(guarded("morphism-diagram",
                             [&] { return check_morphism_diagram(to_lei2(*f, *S, *T)); }));
  return out;
}

Outcome compose_morphisms_cmd(const Model& m, const Options& o) {
  auto f = morphism_ref(m, need(o.first, "--first"));
  auto g = morphism_ref(m, need(o.second, "--second"));
  Outcome out{"compose-morphisms " + o.first + " " + o.second, {}, {}};
  if (f->target->name != g->source->name)
    throw UsageError("morphisms are not composable: " + f->target->name + " != " + g->source->name);
  InftyMorphism h = compose_morphisms(*f, *g, o.arity);
  out.report = check_morphism(h, o.arity);
  auto S = lei2_of(f->source), M = lei2_of(f->target), T = lei2_of(g->target);
  if (S && M && T) {
    // Composition of the Leibniz 2-algebra functors must agree with the infinity composite.
    Leibniz2Morphism F = compose(to_lei2(*f, *S, *M), to_lei2(*g, *M, *T));
    Leibniz2Morphism H = to_lei2(h, *S, *T);
    check_equal(out.report, "lei2-composition", map_str(F.f1) + " " + map_str(F.f2),
                map_str(H.f1) + " " + map_str(H.f2), F.f1 == H.f1 && F.f2 == H.f2);
  }
  out.result["morphism"] = morphism_to_json(h);
  return out;
}

Outcome check_homotopy_cmd(const Model& m, const Options& o) {
  const std::string name = need(o.homotopy, "--homotopy");
  Homotopy2Term h = homotopy_ref(m, name);
  Outcome out{"check-homotopy " + name, {}, {}};
  out.report = homotopy_check(h);
  auto S = lei2_of(h.f->source), T = lei2_of(h.f->target);
  if (S && T)
    out.report.merge(guarded("2-morphism-diagram",
                             [&] { return check_2morphism_diagram(to_lei2(h, *S, *T)); }));
  return out;
}

Outcome compose_homotopies_cmd(const Model& m, const Options& o) {
  if (o.vertical == o.horizontal) throw UsageError("pass exactly one of --vertical, --horizontal");
  Homotopy2Term a = homotopy_ref(m, need(o.first, "--first"));
  Homotopy2Term b = homotopy_ref(m, need(o.second, "--second"));
  Outcome out{std::string("compose-homotopies ") + (o.vertical ? "vertical " : "horizontal ") +
                  o.first + " " + o.second,
              {}, {}};
  if (o.vertical) {
    Homotopy2Term sum = vertical_compose(a, b);
    out.report = homotopy_check(sum);
    if (o.via_kan) {
      out.report.merge(guarded("kan=sum", [&] {
        ConvolutionAlgebra L(a.f->source, a.f->target, o.truncation);
        Homotopy2Term k = vertical_compose_via_kan(L, a, b, HornExtension{o.order, o.pad});
        Report r;
        check_equal(r, "kan=sum", map_str(k.theta), map_str(sum.theta), k.theta == sum.theta);
        return r;
      }));
    }
    out.result["theta"] = theta_json(sum);
    return out;
  }
  out.report = guarded("horizontal-agreement", [&] {
    Homotopy2Term c = horizontal_compose(a, b);
    Report r = homotopy_check(c);
    r.note("horizontal-agreement");
    out.result["source"] = to_json(*c.f);
    out.result["target"] = to_json(*c.g);
    out.result["theta"] = theta_json(c);
    return r;
  });
  return out;
}

Outcome project_homotopy_cmd(const Model& m, const Options& o) {
  const std::string name = need(o.homotopy, "--homotopy");
  Homotopy2Term h = homotopy_ref(m, name);
  Outcome out{"project-homotopy " + name + " vertex " + std::to_string(o.vertex), {}, {}};
  out.report = guarded("project-lift", [&] {
    ConvolutionAlgebra L(h.f->source, h.f->target, o.truncation);
    Homotopy2Term p = homotopy_project(L, homotopy_lift(L, h, o.vertex), o.vertex, h.f, h.g);
    Report r;
    check_equal(r, "project-lift", map_str(p.theta), map_str(h.theta), p.theta == h.theta);
    out.result["theta"] = theta_json(p);
    return r;
  });
  return out;
}

Outcome lift_homotopy_cmd(const Model& m, const Options& o) {
  const std::string name = need(o.homotopy, "--homotopy");
  Homotopy2Term h = homotopy_ref(m, name);
  Outcome out{"lift-homotopy " + name + " vertex " + std::to_string(o.vertex), {}, {}};
  out.report = guarded("lift", [&] {
    ConvolutionAlgebra L(h.f->source, h.f->target, o.truncation);
    FormValued a = homotopy_lift(L, h, o.vertex);
    Report r;
    FormValued res = extended_mc_residual(L, a);
    check_equal(r, "maurer-cartan", res.str(), "0", res.is_zero());
    Vector mf = morphism_to_mc(L, *h.f), mg = morphism_to_mc(L, *h.g);
    Vector e0 = evaluate_vertex(a, 0), e1 = evaluate_vertex(a, 1);
    check_equal(r, "endpoint(0)", e0.str(), mf.str(), e0 == mf);
    check_equal(r, "endpoint(1)", e1.str(), mg.str(), e1 == mg);
    if (o.vertex == 0) {
      FormValued beta = FormValued::tensor(homotopy_to_conv(L, h.theta), PolyForm::coord(1, 1));
      beta.space = L.space();
      beta.n = 1;
      FormValued c = homotopy_closed_form(L, mf, beta);
      check_equal(r, "closed-form", c.str(), a.str(), c == a);
    }
    out.result["alpha"] = to_json(a);
    return r;
  });
  return out;
}

Outcome kan_fill_cmd(const Model& m, const Options& o) {
  Homotopy2Term a = homotopy_ref(m, need(o.first, "--first"));
  Homotopy2Term b = homotopy_ref(m, need(o.second, "--second"));
  Outcome out{"kan-fill " + o.first + " " + o.second, {}, {}};
  out.report = guarded("kan-fill", [&] {
    ConvolutionAlgebra L(a.f->source, a.f->target, o.truncation);
    FormValued a01 = homotopy_lift(L, a, 1), a12 = homotopy_lift(L, b, 0), filler;
    FormValued edge = horn_fill2(L, a01, a12, HornExtension{o.order, o.pad}, &filler);
    Report r;
    FormValued res = extended_mc_residual(L, filler);
    check_equal(r, "filler.maurer-cartan", res.str(), "0", res.is_zero());
    FormValued r01 = restrict_edge(filler, 2), r12 = restrict_edge(filler, 0);
    check_equal(r, "filler.edge01", r01.str(), a01.str(), r01 == a01);
    check_equal(r, "filler.edge12", r12.str(), a12.str(), r12 == a12);
    Vector mf = morphism_to_mc(L, *a.f), mh = morphism_to_mc(L, *b.g);
    Vector e0 = evaluate_vertex(edge, 0), e1 = evaluate_vertex(edge, 1);
    check_equal(r, "edge02.endpoint(0)", e0.str(), mf.str(), e0 == mf);
    check_equal(r, "edge02.endpoint(1)", e1.str(), mh.str(), e1 == mh);
    Homotopy2Term p = homotopy_project(L, edge, 0, a.f, b.g);
    GradedMultilinearMap sum = a.theta + b.theta;
    check_equal(r, "kan=sum", map_str(p.theta), map_str(sum), p.theta == sum);
    out.result["edge02"] = to_json(edge);
    out.result["theta"] = theta_json(p);
    return r;
  });
  return out;
}

Outcome gauge_flow_cmd(const Model& m, const Options& o) {
  const std::string name = need(o.algebra, "--algebra");
  const LInftyEntry& e = m.linfty_algebra(name);
  const LInftyAlgebra& g = *e.algebra;
  Vector alpha = parse_label_expr(e.space, need(o.alpha, "--alpha"));
  Vector r = parse_label_expr(e.space, need(o.r, "--r"));
  Scalar t;
  try {
    t = parse_scalar(o.t);
  } catch (const Error& err) {
    throw UsageError(std::string("--t: ") + err.what());
  }
  Outcome out{"gauge-flow " + name, {}, {}};
  out.report = guarded("gauge-flow", [&] {
    Report rep;
    Vector res = mc_residual(g, alpha);
    check_equal(rep, "maurer-cartan(alpha)", res.str(), "0", res.is_zero());
    VecPoly a = gauge_flow_poly(g, alpha, r);
    VecPoly mc = mc_residual_poly(g, a);
    check_equal(rep, "maurer-cartan(alpha(t))", std::to_string(mc.size()) + " nonzero coefficients",
                "0", poly_is_zero(mc));
    VecPoly lhs = poly_derivative(a), rhs = gauge_field_poly(g, r, a);
    VecPoly diff = lhs;
    diff.resize(std::max(lhs.size(), rhs.size()), Vector(e.space));
    for (size_t k = 0; k < rhs.size(); ++k) diff[k] -= rhs[k];
    check_equal(rep, "flow-equation", "d/dt alpha(t)", "V_r(alpha(t))", poly_is_zero(diff));
    // alpha(1) - alpha = sum_{k >= 1} e^k / k!
    std::vector<Vector> series = gauge_flow_series(g, alpha, r);
    Vector tail(e.space);
    Scalar fact = 1;
    for (size_t k = 1; k < series.size(); ++k) {
      fact *= Scalar(static_cast<long>(k));
      Vector term = series[k];
      term *= Scalar(1) / fact;
      tail += term;
    }
    Vector end = gauge_flow(g, alpha, r, Scalar(1)) - alpha;
    check_equal(rep, "endpoint", end.str(), tail.str(), end == tail);
    FormValued q = quillen_from_gauge(g, alpha, r);
    FormValued qres = extended_mc_residual(g, q);
    check_equal(rep, "quillen-homotopy", qres.str(), "0", qres.is_zero());
    json coeffs = json::array();
    for (auto& v : a) coeffs.push_back(to_json(v));
    out.result["alpha(t)"] = coeffs;
    out.result["t"] = to_string(t);
    out.result["alpha_at_t"] = to_json(gauge_flow(g, alpha, r, t));
    out.result["quillen"] = to_json(q);
    return rep;
  });
  return out;
}

Outcome forms_selftest_cmd(const Options& o) {
  Outcome out{"forms-selftest", {}, {}};
  std::mt19937 rng(o.seed);
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k < o.count; ++k) out.report.merge(check_contraction_identities(random_form(rng, n, 4)));
  out.result["forms"] = 3 * o.count;
  out.result["seed"] = o.seed;
  return out;
}

Outcome check_concordance_cmd(const Model& m, const Options& o) {
  const std::string name = need(o.concordance, "--concordance");
  const Concordance& c = m.concordance(name);
  Outcome out{"check-concordance " + name, {}, {}};
  out.report = concordance_check(c);
  if (!o.compose_with.empty()) {
    const Concordance& c2 = m.concordance(o.compose_with);
    out.title += " then " + o.compose_with;
    out.report.merge(guarded("composite", [&] {
      Concordance h = concordance_hcompose(c, c2);
      Report r = concordance_check(h);
      ZinMap p = compose(c.p, c2.p), q = compose(c.q, c2.q);
      check_equal(r, "composite.endpoints", "p,q of the composite", "composed endpoints",
                  p.table == h.p.table && q.table == h.q.table);
      return r;
    }));
  }
  return out;
}

void emit(const Outcome& out, bool as_json) {
  if (as_json) {
    json j{{"title", out.title}, {"report", to_json(out.report)}};
    if (!out.result.empty()) j["result"] = out.result;
    std::cout << j.dump(2) << "\n";
    return;
  }
  std::cout << report_text(out.title, out.report);
  for (auto& [k, v] : out.result.items()) std::cout << "  " << k << " = " << v.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact checks for Leibniz-infinity algebras, their morphisms and homotopies"};
  app.require_subcommand(1);
  app.fallthrough();
  Options o;
  app.add_flag("--json", o.as_json, "emit the report as JSON");

  auto with_model = [&](CLI::App* c) {
    c->add_option("model", o.model_path, "model file (JSON)")->required();
    c->add_option("--truncation", o.truncation, "word length of the convolution algebra")
        ->check(CLI::Range(1, 6));
    return c;
  };
  auto horn = [&](CLI::App* c) {
    c->add_option("--order", o.order, "vertex order of the Renshaw extension")->delimiter(',')->expected(3);
    c->add_option("--pad", o.pad, "padding vertex of the Renshaw extension")->check(CLI::Range(0, 1));
  };

  auto* ca = with_model(app.add_subcommand("check-algebra", "Jacobi, codifferential and 2-term checks"));
  ca->add_option("--algebra", o.algebra)->required();
  ca->add_option("--arity", o.arity)->check(CLI::Range(1, 6));

  auto* cm = with_model(app.add_subcommand("check-morphism", "morphism identities and MC dictionary"));
  cm->add_option("--morphism", o.morphism)->required();
  cm->add_option("--arity", o.arity)->check(CLI::Range(1, 6));

  auto* co = with_model(app.add_subcommand("compose-morphisms", "second o first"));
  co->add_option("--first", o.first)->required();
  co->add_option("--second", o.second)->required();
  co->add_option("--arity", o.arity)->check(CLI::Range(1, 6));

  auto* ch = with_model(app.add_subcommand("check-homotopy", "homotopy relations and 2-morphism diagram"));
  ch->add_option("--homotopy", o.homotopy)->required();

  auto* cc = with_model(app.add_subcommand("compose-homotopies", "vertical or horizontal composite"));
  cc->add_flag("--vertical", o.vertical);
  cc->add_flag("--horizontal", o.horizontal);
  cc->add_flag("--via-kan", o.via_kan, "also compose through the horn filler and compare");
  cc->add_option("--first", o.first)->required();
  cc->add_option("--second", o.second)->required();
  horn(cc);

  auto* ph = with_model(app.add_subcommand("project-homotopy", "project the lift of a homotopy back"));
  ph->add_option("--homotopy", o.homotopy)->required();
  ph->add_option("--vertex", o.vertex)->check(CLI::Range(0, 1));

  auto* lh_ = with_model(app.add_subcommand("lift-homotopy", "lift a homotopy to an MC element on the interval"));
  lh_->add_option("--homotopy", o.homotopy)->required();
  lh_->add_option("--vertex", o.vertex)->check(CLI::Range(0, 1));

  auto* gf = with_model(app.add_subcommand("gauge-flow", "gauge flow of an MC element"));
  gf->add_option("--algebra", o.algebra)->required();
  gf->add_option("--alpha", o.alpha, "MC element, e.g. \"a - 1/2*b\"")->required();
  gf->add_option("--r", o.r, "degree 0 generator")->required();
  gf->add_option("--t", o.t, "rational time");

  auto* kf = with_model(app.add_subcommand("kan-fill", "fill the horn of two composable homotopies"));
  kf->add_option("--first", o.first)->required();
  kf->add_option("--second", o.second)->required();
  horn(kf);

  auto* fs = app.add_subcommand("forms-selftest", "contraction identities on random forms");
  fs->add_option("--seed", o.seed);
  fs->add_option("--count", o.count, "forms per dimension")->check(CLI::Range(1, 100000));

  auto* cn = with_model(app.add_subcommand("check-concordance", "concordance relations"));
  cn->add_option("--concordance", o.concordance)->required();
  cn->add_option("--compose", o.compose_with, "also compose with a second concordance");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    std::optional<Model> model;
    if (!o.model_path.empty()) model = load_model(o.model_path);
    const std::string cmd = app.get_subcommands().front()->get_name();
    Outcome out;
    if (cmd == "forms-selftest") out = forms_selftest_cmd(o);
    else {
      const Model& m = need_model(model);
      if (cmd == "check-algebra") out = check_algebra(m, o);
      else if (cmd == "check-morphism") out = check_morphism_cmd(m, o);
      else if (cmd == "compose-morphisms") out = compose_morphisms_cmd(m, o);
      else if (cmd == "check-homotopy") out = check_homotopy_cmd(m, o);
      else if (cmd == "compose-homotopies") out = compose_homotopies_cmd(m, o);
      else if (cmd == "project-homotopy") out = project_homotopy_cmd(m, o);
      else if (cmd == "lift-homotopy") out = lift_homotopy_cmd(m, o);
      else if (cmd == "gauge-flow") out = gauge_flow_cmd(m, o);
      else if (cmd == "kan-fill") out = kan_fill_cmd(m, o);
      else out = check_concordance_cmd(m, o);
    }
    emit(out, o.as_json);
    return out.report.pass ? 0 : 1;
  } catch (const SchemaError& e) {
    for (auto& msg : e.messages()) std::cerr << "schema error: " << msg << "\n";
    return 2;
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 2;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
