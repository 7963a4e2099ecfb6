#include "lh/lei2.hpp"

namespace lh {

namespace {

std::vector<int> objects(const SpacePtr& V) {
  std::vector<int> out;
  for (int i = 0; i < V->dim(); ++i)
    if (V->degree(i) == 0) out.push_back(i);
  return out;
}

std::vector<std::string> labels(const SpacePtr& V, std::initializer_list<int> t) {
  std::vector<std::string> out;
  for (int a : t) out.push_back(V->label(a));
  return out;
}

std::string arrow_str(const Arrow& a) { return "(" + a.source.str() + ", " + a.body.str() + ")"; }

void compare_arrows(Report& r, const std::string& name, std::vector<std::string> tuple,
                    const Arrow& lhs, const Arrow& rhs) {
  ++r.checked;
  r.note(name);
  if (!(lhs == rhs)) r.fail({name, std::move(tuple), arrow_str(lhs), arrow_str(rhs)});
}

GradedMultilinearMap linear_compose(const GradedMultilinearMap& A, const GradedMultilinearMap& B) {
  GradedMultilinearMap out(B.source(), A.target(), B.arity(), A.degree() + B.degree());
  for (auto& [t, v] : B.coeffs()) {
    Vector w = eval_map(A, {v});
    if (!w.is_zero()) out.set(t, w);
  }
  return out;
}

GradedMultilinearMap get(const std::map<int, GradedMultilinearMap>& m, int k, const SpacePtr& src,
                         const SpacePtr& tgt, int degree) {
  auto it = m.find(k);
  return it == m.end() ? GradedMultilinearMap(src, tgt, k, degree) : it->second;
}

}  // namespace

Vector Leibniz2Algebra::target(const Arrow& a) const { return a.source + eval_map(t, {a.body}); }

Arrow Leibniz2Algebra::identity(const Vector& x) const { return {x, Vector(V)}; }

Arrow Leibniz2Algebra::compose(const Arrow& a, const Arrow& b) const {
  if (target(a) != b.source) throw Error("arrows are not composable");
  return {a.source, a.body + b.body};
}

Arrow Leibniz2Algebra::add(const Arrow& a, const Arrow& b) const {
  return {a.source + b.source, a.body + b.body};
}

Vector Leibniz2Algebra::bracket_objects(const Vector& x, const Vector& y) const {
  return eval_map(bracket, {x, y});
}

Arrow Leibniz2Algebra::bracket_arrows(const Arrow& a, const Arrow& b) const {
  Vector body = eval_map(bracket, {a.source, b.body}) + eval_map(bracket, {a.body, b.source}) +
                eval_map(bracket, {a.body, eval_map(t, {b.body})});
  return {bracket_objects(a.source, b.source), body};
}

Arrow Leibniz2Algebra::J(const Vector& x, const Vector& y, const Vector& z) const {
  return {bracket_objects(x, bracket_objects(y, z)), -eval_map(jacobiator, {x, y, z})};
}

Leibniz2Algebra to_lei2(const LeibnizInftyAlgebra& A) {
  if (!A.is_two_term()) throw Error("to_lei2: " + A.name + " is not a 2-term algebra");
  Report r = check_2term_axioms(A);
  for (const char* n : {"2term(a)", "2term(b)", "2term(c)", "2term(d)"})
    if (!r.passed(n)) throw Error(std::string("to_lei2: relation ") + n + " fails");
  return Leibniz2Algebra{A.name, A.V, get(A.l, 1, A.V, A.V, -1), get(A.l, 2, A.V, A.V, 0),
                         get(A.l, 3, A.V, A.V, 1)};
}

LeibnizInftyAlgebra from_lei2(const Leibniz2Algebra& B) {
  std::map<int, GradedMultilinearMap> l;
  if (!B.t.is_zero()) l.emplace(1, B.t);
  if (!B.bracket.is_zero()) l.emplace(2, B.bracket);
  if (!B.jacobiator.is_zero()) l.emplace(3, B.jacobiator);
  return LeibnizInftyAlgebra(B.name, B.V, std::move(l));
}

Arrow compose_path(const Leibniz2Algebra& B, const Vector& start, const std::vector<Arrow>& steps) {
  Arrow total = B.identity(start);
  for (auto& s : steps) {
    Arrow padded = B.add(s, B.identity(B.target(total) - s.source));
    total = B.compose(total, padded);
  }
  return total;
}

Report check_jacobiator(const Leibniz2Algebra& B) {
  Report r;
  r.note("jacobiator");
  const auto& V = B.V;
  auto X = objects(V);
  auto br = [&](const Vector& a, const Vector& b) { return B.bracket_objects(a, b); };
  auto id = [&](const Vector& a) { return B.identity(a); };
  for (int iw : X)
    for (int ix : X)
      for (int iy : X)
        for (int iz : X) {
          Vector w = Vector::basis(V, iw), x = Vector::basis(V, ix), y = Vector::basis(V, iy),
                 z = Vector::basis(V, iz);
          Vector start = br(w, br(x, br(y, z)));
          Arrow left = compose_path(
              B, start,
              {B.bracket_arrows(id(w), B.J(x, y, z)),
               B.add(B.J(w, br(x, y), z), B.J(w, y, br(x, z))),
               B.bracket_arrows(id(y), B.J(w, x, z)), B.bracket_arrows(B.J(w, x, y), id(z))});
          Arrow right = compose_path(
              B, start,
              {B.J(w, x, br(y, z)), B.bracket_arrows(id(x), B.J(w, y, z)),
               B.add(B.add(B.J(br(w, x), y, z), B.J(x, br(w, y), z)), B.J(x, y, br(w, z)))});
          compare_arrows(r, "jacobiator", labels(V, {iw, ix, iy, iz}), left, right);
        }
  return r;
}

Arrow Leibniz2Morphism::apply(const Arrow& a) const {
  return {eval_map(f1, {a.source}), eval_map(f1, {a.body})};
}

Arrow Leibniz2Morphism::F(const Vector& x, const Vector& y) const {
  return {target->bracket_objects(eval_map(f1, {x}), eval_map(f1, {y})), eval_map(f2, {x, y})};
}

Leibniz2Morphism to_lei2(const InftyMorphism& f, Lei2Ptr source, Lei2Ptr target) {
  if (f.source->name != source->name || f.target->name != target->name)
    throw Error("to_lei2: morphism does not match the given algebras");
  return Leibniz2Morphism{std::move(source), std::move(target),
                          get(f.phi, 1, f.source->V, f.target->V, 0),
                          get(f.phi, 2, f.source->V, f.target->V, 1)};
}

Report check_morphism_diagram(const Leibniz2Morphism& M) {
  Report r;
  r.note("morphism-diagram");
  const auto& A = *M.source;
  const auto& B = *M.target;
  const auto& V = A.V;
  auto f = [&](const Vector& a) { return eval_map(M.f1, {a}); };
  auto br = [&](const Vector& a, const Vector& b) { return A.bracket_objects(a, b); };
  auto id = [&](const Vector& a) { return B.identity(a); };
  auto X = objects(V);
  for (int ix : X)
    for (int iy : X)
      for (int iz : X) {
        Vector x = Vector::basis(V, ix), y = Vector::basis(V, iy), z = Vector::basis(V, iz);
        Vector start = B.bracket_objects(f(x), B.bracket_objects(f(y), f(z)));
        Arrow left = compose_path(
            B, start,
            {B.J(f(x), f(y), f(z)), B.bracket_arrows(M.F(x, y), id(f(z))),
             B.bracket_arrows(id(f(y)), M.F(x, z)), M.F(br(x, y), z), M.F(y, br(x, z))});
        Arrow right = compose_path(B, start,
                                   {B.bracket_arrows(id(f(x)), M.F(y, z)), M.F(x, br(y, z)),
                                    M.apply(A.J(x, y, z))});
        compare_arrows(r, "morphism-diagram", labels(V, {ix, iy, iz}), left, right);
      }
  return r;
}

Leibniz2Morphism compose(const Leibniz2Morphism& F, const Leibniz2Morphism& G) {
  if (F.target->name != G.source->name) throw Error("Leibniz 2-morphisms are not composable");
  GradedMultilinearMap f1 = linear_compose(G.f1, F.f1);
  GradedMultilinearMap f2 = linear_compose(G.f1, F.f2);
  const auto& V = F.source->V;
  for (int a : objects(V))
    for (int b : objects(V)) {
      Vector x = eval_map(F.f1, {Vector::basis(V, a)}), y = eval_map(F.f1, {Vector::basis(V, b)});
      Vector v = eval_map(G.f2, {x, y});
      if (!v.is_zero()) f2.add(std::vector<int>{a, b}, v);
    }
  return Leibniz2Morphism{F.source, G.target, f1, f2};
}

Arrow Leibniz2Transformation::component(const Vector& x) const {
  return {eval_map(F->f1, {x}), eval_map(theta, {x})};
}

Leibniz2Transformation to_lei2(const Homotopy2Term& h, Lei2Ptr source, Lei2Ptr target) {
  auto F = std::make_shared<Leibniz2Morphism>(to_lei2(*h.f, source, target));
  auto G = std::make_shared<Leibniz2Morphism>(to_lei2(*h.g, source, target));
  return Leibniz2Transformation{F, G, h.theta};
}

Report check_2morphism_diagram(const Leibniz2Transformation& T) {
  Report r;
  r.note("2-morphism-diagram");
  const auto& A = *T.F->source;
  const auto& B = *T.F->target;
  const auto& V = A.V;
  auto X = objects(V);
  for (int ix : X)
    for (int iy : X) {
      Vector x = Vector::basis(V, ix), y = Vector::basis(V, iy);
      Arrow Fxy = T.F->F(x, y);
      Vector start = Fxy.source;
      Arrow left = compose_path(B, start, {Fxy, T.component(A.bracket_objects(x, y))});
      Arrow right = compose_path(
          B, start, {B.bracket_arrows(T.component(x), T.component(y)), T.G->F(x, y)});
      compare_arrows(r, "2-morphism-diagram", labels(V, {ix, iy}), left, right);
      // Components must land on g_1 x.
      ++r.checked;
      Vector gx = eval_map(T.G->f1, {x});
      if (B.target(T.component(x)) != gx)
        r.fail({"2-morphism-diagram", labels(V, {ix}), B.target(T.component(x)).str(), gx.str()});
    }
  return r;
}

Leibniz2Transformation vertical_compose(const Leibniz2Transformation& theta,
                                        const Leibniz2Transformation& tau) {
  if (!(theta.G->f1 == tau.F->f1) || !(theta.G->f2 == tau.F->f2))
    throw Error("2-morphisms are not vertically composable");
  return Leibniz2Transformation{theta.F, tau.G, theta.theta + tau.theta};
}

Leibniz2Transformation horizontal_compose(const Leibniz2Transformation& theta,
                                          const Leibniz2Transformation& tau) {
  if (theta.F->target->name != tau.F->source->name)
    throw Error("2-morphisms are not horizontally composable");
  // tau_{G x} o F'(theta_x) versus G'(theta_x) o tau_{F x}, bodies only.
  GradedMultilinearMap a = linear_compose(tau.F->f1, theta.theta) +
                           linear_compose(tau.theta, theta.G->f1);
  GradedMultilinearMap b = linear_compose(tau.theta, theta.F->f1) +
                           linear_compose(tau.G->f1, theta.theta);
  if (!(a == b)) throw Error("horizontal composite: the two whiskerings disagree");
  auto F = std::make_shared<Leibniz2Morphism>(compose(*theta.F, *tau.F));
  auto G = std::make_shared<Leibniz2Morphism>(compose(*theta.G, *tau.G));
  return Leibniz2Transformation{F, G, a};
}

}  // namespace lh
