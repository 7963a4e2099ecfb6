#include "lh/linfty.hpp"

#include <algorithm>

namespace lh {

namespace {

Scalar factorial(int n) {
  Scalar f = 1;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

// calls fn on every tuple (c_0..c_{k-1}) with 0 <= c_a < sizes[a]
template <class Fn>
void for_each_tuple(const std::vector<int>& sizes, Fn&& fn) {
  for (int s : sizes)
    if (s == 0) return;
  std::vector<int> c(sizes.size(), 0);
  while (true) {
    fn(c);
    int p = static_cast<int>(c.size()) - 1;
    while (p >= 0 && ++c[p] == sizes[p]) c[p--] = 0;
    if (p < 0) return;
  }
}

void require_mc_degree(const LInftyAlgebra& g, const Vector& a, const char* what) {
  if (!a.is_zero() && (!a.homogeneous() || a.degree() != g.mc_degree()))
    throw Error(std::string(what) + " must be homogeneous of degree " +
                std::to_string(g.mc_degree()));
}

BracketOps<Vector> vector_ops(const LInftyAlgebra& g) {
  BracketOps<Vector> ops;
  ops.bracket = [&g](int k, const std::vector<Vector>& a) { return g.bracket(k, a); };
  ops.degree = [](const Vector& v) { return v.degree(); };
  ops.is_zero = [](const Vector& v) { return v.is_zero(); };
  ops.str = [](const Vector& v) { return v.str(); };
  ops.zero = [&g]() { return Vector(g.space()); };
  return ops;
}

}  // namespace

int convention_sign(Convention c, int k) {
  return c == Convention::LadaStasheff ? parity_sign(long(k) * (k - 1) / 2) : 1;
}

std::string to_string(Convention c) {
  return c == Convention::LadaStasheff ? "lada-stasheff" : "getzler";
}

Convention parse_convention(const std::string& s) {
  if (s == "lada-stasheff" || s == "LadaStasheff") return Convention::LadaStasheff;
  if (s == "getzler" || s == "Getzler") return Convention::Getzler;
  throw Error("unknown convention '" + s + "'");
}

Vector LInftyAlgebra::bracket(int k, const std::vector<Vector>& args) const {
  Vector out(space());
  if (static_cast<int>(args.size()) != k) throw Error("bracket arity mismatch");
  if (k < 1 || k > max_arity()) return out;
  std::vector<std::vector<Vector>> parts;
  std::vector<int> sizes;
  for (auto& a : args) {
    if (a.is_zero()) return out;
    if (a.space() && a.space() != space() && a.space()->name() != space()->name())
      throw Error("bracket argument lives in the wrong space");
    std::vector<Vector> comps;
    for (auto& [d, v] : a.by_degree()) comps.push_back(v);
    sizes.push_back(static_cast<int>(comps.size()));
    parts.push_back(std::move(comps));
  }
  for_each_tuple(sizes, [&](const std::vector<int>& c) {
    std::vector<Vector> hom;
    for (size_t a = 0; a < c.size(); ++a) hom.push_back(parts[a][c[a]]);
    out += bracket_homogeneous(k, hom);
  });
  return out;
}

Vector LInftyAlgebra::getzler_bracket(int k, const std::vector<Vector>& args) const {
  Vector v = bracket(k, args);
  if (convention_sign(conv_, k) < 0) v *= -1;
  return v;
}

ExplicitLInfty::ExplicitLInfty(SpacePtr g, std::map<int, GradedMultilinearMap> l, Convention c,
                               Grading gr, int nilpotency)
    : LInftyAlgebra(c, gr, nilpotency), g_(std::move(g)), l_(std::move(l)) {
  for (auto& [k, m] : l_) {
    if (m.arity() != k) throw Error("bracket stored under the wrong arity");
    if (m.degree() != gsign() * (k - 2))
      throw Error("bracket l_" + std::to_string(k) + " has degree " + std::to_string(m.degree()));
    if (m.source()->name() != g_->name() || m.target()->name() != g_->name())
      throw Error("bracket l_" + std::to_string(k) + " is not an operation on the algebra");
  }
}

Vector ExplicitLInfty::bracket_homogeneous(int k, const std::vector<Vector>& args) const {
  auto it = l_.find(k);
  if (it == l_.end()) return Vector(g_);
  return eval_map(it->second, args);
}

Report check_linfty_jacobi(const LInftyAlgebra& g, int max_n) {
  std::vector<Vector> basis;
  for (int i = 0; i < g.space()->dim(); ++i) basis.push_back(Vector::basis(g.space(), i));
  return check_linfty_jacobi(g, basis, max_n);
}

Report check_linfty_jacobi(const LInftyAlgebra& g, const std::vector<Vector>& samples, int max_n) {
  return jacobi_generic(vector_ops(g), samples, max_n, g.max_arity(), g.convention());
}

Report check_antisymmetry(const LInftyAlgebra& g, const std::vector<Vector>& samples) {
  Report rep;
  const int S = static_cast<int>(samples.size());
  for (int k = 2; k <= g.max_arity(); ++k) {
    std::string name = "antisymmetry(" + std::to_string(k) + ")";
    rep.note(name);
    std::vector<int> sizes(k, S);
    for_each_tuple(sizes, [&](const std::vector<int>& c) {
      std::vector<Vector> args;
      for (int a : c) args.push_back(samples[a]);
      Vector base = g.bracket(k, args);
      for (int p = 0; p + 1 < k; ++p) {
        std::vector<Vector> sw = args;
        std::swap(sw[p], sw[p + 1]);
        int e = parity_sign(long(args[p].degree()) * args[p + 1].degree());
        Vector other = g.bracket(k, sw);
        ++rep.checked;
        if (base != Scalar(-e) * other) {
          Failure f{name, {}, base.str(), (Scalar(-e) * other).str()};
          for (auto& a : args) f.tuple.push_back(a.str());
          rep.fail(std::move(f));
        }
      }
    });
  }
  return rep;
}

Vector mc_residual(const LInftyAlgebra& g, const Vector& alpha) {
  require_mc_degree(g, alpha, "MC candidate");
  Vector out(g.space());
  for (int i = 1; i <= g.max_arity(); ++i) {
    std::vector<Vector> args(i, alpha);
    out += (Scalar(convention_sign(g.convention(), i)) / factorial(i)) * g.bracket(i, args);
  }
  return out;
}

ExplicitLInfty twist_brackets(const ExplicitLInfty& g, const Vector& alpha) {
  if (!mc_residual(g, alpha).is_zero()) throw Error("twisting element is not Maurer-Cartan");
  const SpacePtr& V = g.space();
  const int M = g.max_arity();
  std::map<int, GradedMultilinearMap> tw;
  for (int k = 1; k <= M; ++k) {
    GradedMultilinearMap m(V, V, k, g.gsign() * (k - 2));
    std::vector<int> sizes(k, V->dim());
    for_each_tuple(sizes, [&](const std::vector<int>& c) {
      Vector val(V);
      for (int j = 0; j + k <= M; ++j) {
        std::vector<Vector> args(j, alpha);
        for (int a : c) args.push_back(Vector::basis(V, a));
        val += (Scalar(1) / factorial(j)) * g.getzler_bracket(j + k, args);
      }
      if (convention_sign(g.convention(), k) < 0) val *= -1;
      if (!val.is_zero()) m.set(c, val);
    });
    if (!m.is_zero()) tw.emplace(k, m);
  }
  return ExplicitLInfty(V, tw, g.convention(), g.grading(), g.nilpotency());
}

Vector gauge_field(const LInftyAlgebra& g, const Vector& r, const Vector& alpha) {
  if (!r.is_zero() && (!r.homogeneous() || r.degree() != 0))
    throw Error("gauge generator must have degree 0");
  require_mc_degree(g, alpha, "gauge field argument");
  Vector out(g.space());
  for (int k = 0; k + 1 <= g.max_arity(); ++k) {
    std::vector<Vector> args(k, alpha);
    args.push_back(r);
    out -= (Scalar(1) / factorial(k)) * g.getzler_bracket(k + 1, args);
  }
  return out;
}

VecPoly poly_derivative(const VecPoly& p) {
  VecPoly d;
  for (size_t k = 1; k < p.size(); ++k) d.push_back(Scalar(int(k)) * p[k]);
  return d;
}

Vector poly_eval(const VecPoly& p, const Scalar& t) {
  Vector out;
  Scalar tk = 1;
  for (auto& c : p) {
    out += tk * c;
    tk *= t;
  }
  return out;
}

bool poly_is_zero(const VecPoly& p) {
  return std::all_of(p.begin(), p.end(), [](const Vector& v) { return v.is_zero(); });
}

namespace {

// sum over k of coef(k) * l^G_{k+extra.size()}(p^k, extra...) as a polynomial
VecPoly expand_brackets(const LInftyAlgebra& g, const VecPoly& p, const std::vector<Vector>& extra,
                        const std::function<Scalar(int)>& coef) {
  VecPoly out;
  const int E = static_cast<int>(extra.size());
  for (int k = 0; k + E <= g.max_arity(); ++k) {
    if (k + E == 0) continue;
    Scalar c = coef(k);
    if (c == 0) continue;
    std::vector<int> sizes(k, static_cast<int>(p.size()));
    auto body = [&](const std::vector<int>& pw) {
      std::vector<Vector> args;
      int deg = 0;
      for (int e : pw) {
        args.push_back(p[e]);
        deg += e;
      }
      for (auto& x : extra) args.push_back(x);
      Vector v = g.getzler_bracket(k + E, args);
      if (v.is_zero()) return;
      if (static_cast<int>(out.size()) <= deg) out.resize(deg + 1, Vector(g.space()));
      out[deg] += c * v;
    };
    if (k == 0) body({});
    else for_each_tuple(sizes, body);
  }
  return out;
}

}  // namespace

VecPoly mc_residual_poly(const LInftyAlgebra& g, const VecPoly& alpha) {
  for (auto& c : alpha) require_mc_degree(g, c, "MC polynomial coefficient");
  return expand_brackets(g, alpha, {}, [](int k) -> Scalar { return Scalar(1) / factorial(k); });
}

VecPoly gauge_field_poly(const LInftyAlgebra& g, const Vector& r, const VecPoly& alpha) {
  return expand_brackets(g, alpha, {r}, [](int k) -> Scalar { return Scalar(-1) / factorial(k); });
}

std::vector<Vector> gauge_flow_series(const LInftyAlgebra& g, const Vector& alpha, const Vector& r) {
  if (!mc_residual(g, alpha).is_zero()) throw Error("gauge flow needs a Maurer-Cartan start");
  if (!r.is_zero() && (!r.homogeneous() || r.degree() != 0))
    throw Error("gauge generator must have degree 0");
  const int K = g.nilpotency() + 2;
  std::vector<Vector> e{alpha};
  e[0] = alpha.space() ? alpha : Vector(g.space());
  for (int i = 0; i < K; ++i) {
    // e^{i+1} = -sum_n 1/n! sum_{k_1+..+k_n=i} i!/(k_1!..k_n!) l^G_{n+1}(e^{k_1},..,e^{k_n}, r)
    Vector next(g.space());
    for (int n = 0; n + 1 <= g.max_arity(); ++n) {
      if (n == 0) {
        if (i == 0) next -= g.getzler_bracket(1, {r});
        continue;
      }
      std::vector<int> sizes(n, i + 1);
      for_each_tuple(sizes, [&](const std::vector<int>& ks) {
        int sum = 0;
        Scalar w = factorial(i) / factorial(n);
        std::vector<Vector> args;
        for (int k : ks) {
          sum += k;
          w /= factorial(k);
          args.push_back(e[k]);
        }
        if (sum != i) return;
        args.push_back(r);
        next -= w * g.getzler_bracket(n + 1, args);
      });
    }
    e.push_back(next);
  }
  if (!e[K].is_zero() || !e[K - 1].is_zero())
    throw Error("gauge flow does not terminate within the nilpotency bound");
  while (e.size() > 1 && e.back().is_zero()) e.pop_back();
  return e;
}

VecPoly gauge_flow_poly(const LInftyAlgebra& g, const Vector& alpha, const Vector& r) {
  VecPoly p = gauge_flow_series(g, alpha, r);
  for (size_t k = 0; k < p.size(); ++k) p[k] *= Scalar(1) / factorial(static_cast<int>(k));
  return p;
}

Vector gauge_flow(const LInftyAlgebra& g, const Vector& alpha, const Vector& r, const Scalar& t) {
  Vector v = poly_eval(gauge_flow_poly(g, alpha, r), t);
  return v.space() ? v : Vector(g.space());
}

// ---------------------------------------------------------------------------
// g (x) Omega(Delta^n)

FormValued FormValued::tensor(const Vector& v, const PolyForm& a) {
  FormValued x(v.space(), a.dim());
  for (auto& [i, c] : v.terms()) x.add(i, c * a);
  return x;
}

FormValued FormValued::constant(const Vector& v, int n) {
  return tensor(v, PolyForm::constant(n, 1));
}

void FormValued::add(int label, const PolyForm& a) {
  if (a.is_zero()) return;
  auto [it, fresh] = comps.try_emplace(label, a);
  if (!fresh) {
    it->second += a;
    if (it->second.is_zero()) comps.erase(it);
  }
}

FormValued& FormValued::operator+=(const FormValued& o) {
  if (!space) { space = o.space; n = o.n; }
  for (auto& [i, a] : o.comps) add(i, a);
  return *this;
}

FormValued& FormValued::operator-=(const FormValued& o) {
  if (!space) { space = o.space; n = o.n; }
  for (auto& [i, a] : o.comps) add(i, -a);
  return *this;
}

FormValued& FormValued::operator*=(const Scalar& a) {
  if (a == 0) { comps.clear(); return *this; }
  for (auto& [i, f] : comps) f *= a;
  return *this;
}

bool FormValued::operator==(const FormValued& o) const { return comps == o.comps; }

std::map<FormKey, Vector> FormValued::by_monomial() const {
  std::map<FormKey, Vector> m;
  for (auto& [i, f] : comps)
    for (auto& [k, c] : f.terms()) {
      auto it = m.try_emplace(k, Vector(space)).first;
      it->second.add(i, c);
    }
  return m;
}

FormValued FormValued::from_monomials(const SpacePtr& s, int n, const std::map<FormKey, Vector>& m) {
  FormValued x(s, n);
  for (auto& [k, v] : m)
    for (auto& [i, c] : v.terms()) {
      auto it = x.comps.try_emplace(i, PolyForm(n)).first;
      it->second.add(k, c);
    }
  for (auto it = x.comps.begin(); it != x.comps.end();)
    it = it->second.is_zero() ? x.comps.erase(it) : std::next(it);
  return x;
}

int FormValued::degree(int gsign) const {
  bool first = true;
  int d = 0;
  for (auto& [i, f] : comps)
    for (auto& [k, c] : f.terms()) {
      int e = space->degree(i) - gsign * popcount(k.dts);
      if (first) { d = e; first = false; }
      else if (e != d) throw Error("form-valued element is not homogeneous");
    }
  if (first) throw Error("degree of the zero element");
  return d;
}

std::string FormValued::str() const {
  if (comps.empty()) return "0";
  std::string out;
  for (auto& [i, f] : comps) {
    if (!out.empty()) out += " ; ";
    out += space->label(i) + ": " + f.str();
  }
  return out;
}

Vector evaluate_vertex(const FormValued& x, int i) {
  Vector v(x.space);
  for (auto& [l, f] : x.comps) v.add(l, evaluate_vertex(f, i));
  return v;
}

FormValued pullback(const OrderMap& f, const FormValued& x) {
  FormValued y(x.space, f.m);
  for (auto& [l, a] : x.comps) y.add(l, pullback(f, a));
  return y;
}

FormValued contraction_h(const FormValued& x, int i) {
  FormValued y(x.space, x.n);
  for (auto& [l, a] : x.comps) {
    PolyForm h = contraction_h(a, i);
    if (x.space->degree(l) % 2 != 0) h *= -1;
    y.add(l, h);
  }
  return y;
}

FormValued restrict_edge(const FormValued& x, int opposite) {
  return pullback(face_map(2, opposite), x);
}

namespace {

struct MonoTerm {
  FormKey key;
  int q;
  int vdeg;
  Vector v;
};

std::vector<MonoTerm> mono_terms(const FormValued& x) {
  std::vector<MonoTerm> out;
  for (auto& [k, v] : x.by_monomial())
    for (auto& [d, part] : v.by_degree()) out.push_back({k, popcount(k.dts), d, part});
  return out;
}

}  // namespace

FormValued tensor_bracket(const LInftyAlgebra& g, int k, const std::vector<FormValued>& args) {
  if (static_cast<int>(args.size()) != k) throw Error("bracket arity mismatch");
  int n = 0;
  for (auto& a : args)
    if (!a.is_zero()) n = a.n;
  FormValued out(g.space(), n);
  if (k < 1 || k > g.max_arity()) return out;
  for (auto& a : args)
    if (a.is_zero()) return out;
  if (k == 1) {
    std::map<FormKey, Vector> acc;
    for (auto& t : mono_terms(args[0])) {
      Vector l1 = g.bracket(1, {t.v});
      if (!l1.is_zero()) acc.try_emplace(t.key, Vector(g.space())).first->second += l1;
    }
    out = FormValued::from_monomials(g.space(), n, acc);
    for (auto& [l, f] : args[0].comps) {
      PolyForm df = derham_d(f);
      if (g.space()->degree(l) % 2 != 0) df *= -1;
      out.add(l, df);
    }
    return out;
  }
  std::vector<std::vector<MonoTerm>> terms;
  std::vector<int> sizes;
  for (auto& a : args) {
    terms.push_back(mono_terms(a));
    sizes.push_back(static_cast<int>(terms.back().size()));
  }
  std::map<FormKey, Vector> acc;
  for_each_tuple(sizes, [&](const std::vector<int>& c) {
    FormKey key{std::vector<int>(n, 0), 0}, tmp;
    int sign = 1, Q = 0;
    std::vector<Vector> vs;
    for (int b = 0; b < k; ++b) {
      const MonoTerm& t = terms[b][c[b]];
      int s = wedge_keys(key, t.key, tmp);
      if (s == 0) return;
      sign *= s * parity_sign(long(Q) * t.vdeg);
      Q += t.q;
      key = tmp;
      vs.push_back(t.v);
    }
    Vector v = g.bracket(k, vs);
    if (v.is_zero()) return;
    acc.try_emplace(key, Vector(g.space())).first->second += Scalar(sign) * v;
  });
  return FormValued::from_monomials(g.space(), n, acc);
}

FormValued extended_mc_residual(const LInftyAlgebra& g, const FormValued& alpha) {
  FormValued out(g.space(), alpha.n);
  for (int i = 1; i <= g.max_arity(); ++i) {
    std::vector<FormValued> args(i, alpha);
    out += (Scalar(convention_sign(g.convention(), i)) / factorial(i)) * tensor_bracket(g, i, args);
  }
  return out;
}

Report check_tensor_jacobi(const LInftyAlgebra& g, const std::vector<FormValued>& samples, int max_n) {
  BracketOps<FormValued> ops;
  ops.bracket = [&g](int k, const std::vector<FormValued>& a) { return tensor_bracket(g, k, a); };
  ops.degree = [&g](const FormValued& x) { return x.degree(g.gsign()); };
  ops.is_zero = [](const FormValued& x) { return x.is_zero(); };
  ops.str = [](const FormValued& x) { return x.str(); };
  int n = samples.empty() ? 0 : samples[0].n;
  ops.zero = [&g, n]() { return FormValued(g.space(), n); };
  return jacobi_generic(ops, samples, max_n, g.max_arity(), g.convention());
}

std::pair<Vector, FormValued> b_forward(const LInftyAlgebra& g, const FormValued& alpha, int i) {
  if (i < 0 || i > alpha.n) throw Error("vertex out of range");
  if (!extended_mc_residual(g, alpha).is_zero())
    throw Error("b_forward needs an element of MC_n");
  Vector mu = evaluate_vertex(alpha, i);
  FormValued nu = tensor_bracket(g, 1, {contraction_h(alpha, i)});
  if (!mu.space()) mu = Vector(g.space());
  return {mu, nu};
}

FormValued b_inverse(const LInftyAlgebra& g, const Vector& mu, const FormValued& beta, int i,
                     int* iterations) {
  const int n = beta.n;
  if (i < 0 || i > n) throw Error("vertex out of range");
  if (!mc_residual(g, mu).is_zero()) throw Error("b_inverse needs a Maurer-Cartan vertex value");
  if (!beta.is_zero() && beta.degree(g.gsign()) != 0) throw Error("beta must have degree 0");
  if (!evaluate_vertex(beta, i).is_zero()) throw Error("beta must vanish at the chosen vertex");
  FormValued a0 = FormValued::constant(mu, n);
  a0.space = g.space();
  a0.n = n;
  a0 += tensor_bracket(g, 1, {beta});
  FormValued a = a0;
  const int limit = (g.nilpotency() + 2) * (n + 1) + 2;
  for (int it = 1; it <= limit; ++it) {
    FormValued R(g.space(), n);
    for (int j = 2; j <= g.max_arity(); ++j) {
      std::vector<FormValued> args(j, a);
      R += (Scalar(convention_sign(g.convention(), j)) / factorial(j)) * tensor_bracket(g, j, args);
    }
    FormValued next = a0 - contraction_h(R, i);
    if (next == a) {
      if (iterations) *iterations = it;
      return a;
    }
    a = std::move(next);
  }
  throw Error("b_inverse iteration does not stabilise within the nilpotency bound");
}

FormValued horn_fill2(const LInftyAlgebra& g, const FormValued& alpha01, const FormValued& alpha12,
                      const HornExtension& ext, FormValued* filler) {
  if (alpha01.n != 1 || alpha12.n != 1) throw Error("horn edges must live on Delta^1");
  Vector mu = evaluate_vertex(alpha01, 1);
  if (mu != evaluate_vertex(alpha12, 0)) throw Error("horn edges do not share their middle vertex");
  FormValued b2 = contraction_h(alpha01, 1);  // on edge 01, vanishes at vertex 1
  FormValued b0 = contraction_h(alpha12, 0);  // on edge 12, vanishes at vertex 1
  Vector start = evaluate_vertex(b2, 0), end = evaluate_vertex(b0, 1);
  PolyForm t = PolyForm::coord(1, 1), one_minus_t = PolyForm::coord(1, 0);
  FormValued b1 = FormValued::tensor(start, one_minus_t) + FormValued::tensor(end, t);
  std::vector<int> labels;
  for (auto* x : {&b0, &b1, &b2})
    for (auto& [l, f] : x->comps) labels.push_back(l);
  std::sort(labels.begin(), labels.end());
  labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
  FormValued beta(g.space(), 2);
  auto comp = [](const FormValued& x, int l) {
    auto it = x.comps.find(l);
    return it == x.comps.end() ? PolyForm(1) : it->second;
  };
  for (int l : labels)
    beta.add(l, renshaw_extend2(comp(b0, l), comp(b1, l), comp(b2, l), ext.order, ext.pad));
  FormValued a = b_inverse(g, mu.space() ? mu : Vector(g.space()), beta, 1);
  if (filler) *filler = a;
  return restrict_edge(a, 1);
}

FormValued quillen_from_gauge(const LInftyAlgebra& g, const Vector& alpha, const Vector& r) {
  VecPoly p = gauge_flow_poly(g, alpha, r);
  FormValued out(g.space(), 1);
  for (size_t k = 0; k < p.size(); ++k)
    out += FormValued::tensor(p[k], PolyForm::monomial(1, {static_cast<int>(k)}, 0, 1));
  out -= FormValued::tensor(r, PolyForm::monomial(1, {0}, 1, 1));
  return out;
}

}  // namespace lh
