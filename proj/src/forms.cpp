#include "lh/forms.hpp"

#include <algorithm>
#include <sstream>

namespace lh {

int popcount(unsigned m) { return __builtin_popcount(m); }

namespace {

FormKey zero_key(int n) { return FormKey{std::vector<int>(n, 0), 0}; }

std::vector<int> mask_indices(unsigned m) {
  std::vector<int> r;
  for (int k = 0; m >> k; ++k)
    if (m >> k & 1u) r.push_back(k + 1);
  return r;
}

PolyForm power(const PolyForm& x, int e) {
  PolyForm r = PolyForm::constant(x.dim(), 1);
  for (int i = 0; i < e; ++i) r = wedge(r, x);
  return r;
}

// 0-forms y_1..y_n with y_i = sum over image^{-1}(i) of the source coordinates
std::vector<PolyForm> linear_images(const std::vector<int>& image, int m, int n) {
  std::vector<PolyForm> ys(n, PolyForm(m));
  for (int j = 0; j <= m; ++j)
    if (image[j] > 0) ys[image[j] - 1] += PolyForm::coord(m, j);
  return ys;
}

PolyForm h0(const PolyForm& w) {
  PolyForm r(w.dim());
  for (auto& [k, c] : w.terms()) {
    if (k.dts == 0) continue;
    int deg = 0;
    for (int e : k.exps) deg += e;
    auto I = mask_indices(k.dts);
    Scalar f = c / Scalar(deg + static_cast<int>(I.size()));
    for (size_t p = 0; p < I.size(); ++p) {
      FormKey nk = k;
      nk.exps[I[p] - 1] += 1;
      nk.dts &= ~(1u << (I[p] - 1));
      r.add(nk, p % 2 == 0 ? f : Scalar(-f));
    }
  }
  return r;
}

// Extension from edge 01 of Delta^2 projecting from vertex 2.
PolyForm renshaw_std(const PolyForm& b, int pad) {
  int N = 0;
  for (auto& [k, c] : b.terms()) N = std::max(N, k.exps[0] + 2 * popcount(k.dts));
  N += pad;
  PolyForm t1 = PolyForm::coord(2, 1);
  PolyForm u = PolyForm::constant(2, 1) - PolyForm::coord(2, 2);
  PolyForm ds = wedge(u, derham_d(t1)) + wedge(t1, derham_d(PolyForm::coord(2, 2)));
  PolyForm g(2);
  for (auto& [k, c] : b.terms()) {
    int a = k.exps[0];
    PolyForm term = wedge(power(t1, a), power(u, N - a - 2 * popcount(k.dts)));
    if (k.dts) term = wedge(term, ds);
    g += c * term;
  }
  return g;
}

}  // namespace

PolyForm PolyForm::constant(int n, const Scalar& c) {
  PolyForm r(n);
  r.add(zero_key(n), c);
  return r;
}

PolyForm PolyForm::coord(int n, int i) {
  PolyForm r(n);
  if (i < 0 || i > n) throw Error("coordinate index out of range");
  if (i > 0) {
    FormKey k = zero_key(n);
    k.exps[i - 1] = 1;
    r.add(k, 1);
    return r;
  }
  r.add(zero_key(n), 1);
  for (int j = 1; j <= n; ++j) {
    FormKey k = zero_key(n);
    k.exps[j - 1] = 1;
    r.add(k, -1);
  }
  return r;
}

PolyForm PolyForm::monomial(int n, const std::vector<int>& exps, unsigned dts, const Scalar& c) {
  if (static_cast<int>(exps.size()) != n) throw Error("exponent vector has wrong length");
  if (dts >> n) throw Error("dt index out of range");
  PolyForm r(n);
  r.add(FormKey{exps, dts}, c);
  return r;
}

void PolyForm::add(const FormKey& k, const Scalar& c) {
  if (c == 0) return;
  auto [it, fresh] = terms_.try_emplace(k, c);
  if (fresh) {
    it->second.canonicalize();
  } else {
    it->second += c;
    if (it->second == 0) terms_.erase(it);
  }
}

PolyForm& PolyForm::operator+=(const PolyForm& o) {
  if (n_ != o.n_ && !o.is_zero()) {
    if (is_zero()) n_ = o.n_;
    else throw Error("adding forms on simplices of different dimension");
  }
  for (auto& [k, c] : o.terms_) add(k, c);
  return *this;
}

PolyForm& PolyForm::operator-=(const PolyForm& o) {
  if (n_ != o.n_ && !o.is_zero()) {
    if (is_zero()) n_ = o.n_;
    else throw Error("adding forms on simplices of different dimension");
  }
  for (auto& [k, c] : o.terms_) add(k, -c);
  return *this;
}

PolyForm& PolyForm::operator*=(const Scalar& a) {
  if (a == 0) { terms_.clear(); return *this; }
  for (auto& [k, c] : terms_) c *= a;
  return *this;
}

PolyForm PolyForm::part(int q) const {
  PolyForm r(n_);
  for (auto& [k, c] : terms_)
    if (popcount(k.dts) == q) r.terms_.emplace(k, c);
  return r;
}

int PolyForm::poly_degree() const {
  int d = -1;
  for (auto& [k, c] : terms_) {
    int s = 0;
    for (int e : k.exps) s += e;
    d = std::max(d, s);
  }
  return d;
}

std::string PolyForm::str() const {
  if (terms_.empty()) return "0";
  std::string out;
  for (auto& [k, c] : terms_) {
    if (!out.empty()) out += " + ";
    out += to_string(c);
    std::string f;
    for (int i = 0; i < n_; ++i) {
      if (k.exps[i] == 0) continue;
      if (!f.empty()) f += ' ';
      f += "t" + std::to_string(i + 1);
      if (k.exps[i] > 1) f += "^" + std::to_string(k.exps[i]);
    }
    if (k.dts) {
      if (!f.empty()) f += ' ';
      f += "dt{";
      auto I = mask_indices(k.dts);
      for (size_t p = 0; p < I.size(); ++p) f += (p ? "," : "") + std::to_string(I[p]);
      f += "}";
    }
    if (!f.empty()) out += " * " + f;
  }
  return out;
}

int wedge_keys(const FormKey& a, const FormKey& b, FormKey& out) {
  if (a.dts & b.dts) return 0;
  int inv = 0;
  for (int k = 0; a.dts >> k; ++k)
    if (a.dts >> k & 1u) inv += popcount(b.dts & ((1u << k) - 1));
  out.exps = a.exps;
  for (size_t i = 0; i < out.exps.size(); ++i) out.exps[i] += b.exps[i];
  out.dts = a.dts | b.dts;
  return parity_sign(inv);
}

PolyForm wedge(const PolyForm& a, const PolyForm& b) {
  if (a.dim() != b.dim() && !a.is_zero() && !b.is_zero())
    throw Error("wedge of forms on simplices of different dimension");
  PolyForm r(std::max(a.dim(), b.dim()));
  FormKey k;
  for (auto& [ka, ca] : a.terms())
    for (auto& [kb, cb] : b.terms()) {
      int s = wedge_keys(ka, kb, k);
      if (s) r.add(k, s * ca * cb);
    }
  return r;
}

PolyForm derham_d(const PolyForm& w) {
  PolyForm r(w.dim());
  for (auto& [k, c] : w.terms())
    for (int i = 0; i < w.dim(); ++i) {
      unsigned bit = 1u << i;
      if (k.exps[i] == 0 || (k.dts & bit)) continue;
      FormKey nk = k;
      nk.exps[i] -= 1;
      nk.dts |= bit;
      // dt_i moves to the front, then past the dt_j with j < i
      int s = parity_sign(popcount(k.dts & (bit - 1)));
      r.add(nk, s * c * k.exps[i]);
    }
  return r;
}

OrderMap face_map(int n, int i) {
  if (i < 0 || i > n || n < 1) throw Error("bad face index");
  OrderMap f{n - 1, n, {}};
  for (int j = 0; j <= n; ++j)
    if (j != i) f.image.push_back(j);
  return f;
}

OrderMap degeneracy_map(int n, int i) {
  if (i < 0 || i > n) throw Error("bad degeneracy index");
  OrderMap f{n + 1, n, {}};
  for (int j = 0; j <= n + 1; ++j) f.image.push_back(j <= i ? j : j - 1);
  return f;
}

OrderMap compose(const OrderMap& g, const OrderMap& f) {
  if (f.n != g.m) throw Error("order maps do not compose");
  OrderMap r{f.m, g.n, {}};
  for (int j : f.image) r.image.push_back(g.image[j]);
  return r;
}

PolyForm substitute(const PolyForm& w, const std::vector<PolyForm>& images, int m) {
  if (static_cast<int>(images.size()) != w.dim()) throw Error("substitution arity mismatch");
  std::vector<PolyForm> dimg;
  for (auto& y : images) dimg.push_back(derham_d(y));
  // cache powers per variable
  std::vector<std::vector<PolyForm>> pw(images.size());
  PolyForm r(m);
  for (auto& [k, c] : w.terms()) {
    PolyForm t = PolyForm::constant(m, c);
    for (size_t i = 0; i < images.size(); ++i) {
      auto& cache = pw[i];
      if (cache.empty()) cache.push_back(PolyForm::constant(m, 1));
      while (static_cast<int>(cache.size()) <= k.exps[i]) cache.push_back(wedge(cache.back(), images[i]));
      if (k.exps[i]) t = wedge(t, cache[k.exps[i]]);
    }
    for (int j : mask_indices(k.dts)) t = wedge(t, dimg[j - 1]);
    r += t;
  }
  return r;
}

PolyForm pullback(const OrderMap& f, const PolyForm& w) {
  if (f.n != w.dim() || static_cast<int>(f.image.size()) != f.m + 1)
    throw Error("order map does not match form dimension");
  return substitute(w, linear_images(f.image, f.m, f.n), f.m);
}

PolyForm vertex_permutation_pullback(const PolyForm& w, const std::vector<int>& perm) {
  int n = w.dim();
  if (static_cast<int>(perm.size()) != n + 1) throw Error("vertex permutation has wrong size");
  return substitute(w, linear_images(perm, n, n), n);
}

Scalar evaluate_vertex(const PolyForm& w, int i) {
  if (w.is_zero()) return 0;
  if (i < 0 || i > w.dim()) throw Error("vertex out of range");
  Scalar v = 0;
  for (auto& [k, c] : w.terms()) {
    if (k.dts) continue;
    bool ok = true;
    for (int j = 0; j < w.dim() && ok; ++j)
      if (k.exps[j] && j + 1 != i) ok = false;
    if (ok) v += c;
  }
  return v;
}

PolyForm contraction_h(const PolyForm& w, int i) {
  int n = w.dim();
  if (i < 0 || i > n) throw Error("vertex out of range");
  if (i == 0) return h0(w);
  std::vector<int> P(n + 1);
  for (int j = 0; j <= n; ++j) P[j] = j;
  std::swap(P[0], P[i]);
  return vertex_permutation_pullback(h0(vertex_permutation_pullback(w, P)), P);
}

PolyForm restrict_edge(const PolyForm& w, int opposite) {
  if (w.dim() != 2) throw Error("edge restriction needs a form on Delta^2");
  return pullback(face_map(2, opposite), w);
}

PolyForm renshaw_extend2(const PolyForm& b0, const PolyForm& b1, const PolyForm& b2,
                         const std::vector<int>& order, int pad) {
  const PolyForm* data[3] = {&b0, &b1, &b2};
  for (auto* b : data)
    if (b->dim() != 1 && !b->is_zero()) throw Error("edge data must live on Delta^1");
  // edge opposite v has vertices (a, b), a < b, matching 0 and 1 of Delta^1
  auto value_at = [&](int edge, int vert) {
    int a = edge == 0 ? 1 : 0;
    return evaluate_vertex(*data[edge], vert == a ? 0 : 1);
  };
  for (int x = 0; x < 3; ++x) {
    int e1 = (x + 1) % 3, e2 = (x + 2) % 3;  // the two edges through x
    if (value_at(e1, x) != value_at(e2, x))
      throw Error("edge data disagree at vertex " + std::to_string(x));
  }
  std::vector<int> seen = order;
  std::sort(seen.begin(), seen.end());
  if (seen != std::vector<int>{0, 1, 2}) throw Error("edge order must permute {0,1,2}");
  // A sends the standard configuration (vertex 2, edge 01) to (vertex v, edge opposite v)
  static const std::vector<int> Ainv[3] = {{2, 0, 1}, {0, 2, 1}, {0, 1, 2}};
  PolyForm g(2);
  for (int v : order) {
    PolyForm res = *data[v] - restrict_edge(g, v);
    if (res.is_zero()) continue;
    g += vertex_permutation_pullback(renshaw_std(res, pad), Ainv[v]);
  }
  return g;
}

PolyForm random_form(std::mt19937& rng, int n, int max_degree, int terms) {
  std::uniform_int_distribution<int> expo(0, max_degree), num(-3, 3), den(1, 3);
  std::uniform_int_distribution<unsigned> mask(0, (1u << n) - 1);
  PolyForm r(n);
  for (int t = 0; t < terms; ++t) {
    std::vector<int> e(n);
    for (auto& x : e) x = expo(rng);
    Scalar q(num(rng), den(rng));
    q.canonicalize();
    r.add(FormKey{e, mask(rng)}, q);
  }
  return r;
}

Report check_contraction_identities(const PolyForm& w) {
  Report r;
  const int n = w.dim();
  auto check = [&](const std::string& name, const std::string& at, const PolyForm& lhs,
                   const PolyForm& rhs) {
    ++r.checked;
    r.note(name);
    if (lhs != rhs) r.fail({name, {at, w.str()}, lhs.str(), rhs.str()});
  };
  for (int i = 0; i <= n; ++i) {
    std::string at = "n=" + std::to_string(n) + " i=" + std::to_string(i);
    PolyForm h = contraction_h(w, i);
    PolyForm eps = PolyForm::constant(n, evaluate_vertex(w.part(0), i));
    check("dh+hd=id-eps", at, derham_d(h) + contraction_h(derham_d(w), i), w - eps);
    check("eps.h=0", at, PolyForm::constant(n, evaluate_vertex(h.part(0), i)), PolyForm(n));
    for (int j = 0; j <= n; ++j)
      check("hh+hh=0", at + " j=" + std::to_string(j),
            contraction_h(h, j) + contraction_h(contraction_h(w, j), i), PolyForm(n));
  }
  return r;
}

PolyForm parse_form(const std::string& s, int n) {
  PolyForm r(n);
  std::string body = s;
  auto trim = [](std::string x) {
    size_t a = x.find_first_not_of(" \t"), b = x.find_last_not_of(" \t");
    return a == std::string::npos ? std::string() : x.substr(a, b - a + 1);
  };
  body = trim(body);
  if (body.empty()) throw Error("empty form string");
  if (body == "0") return r;
  size_t pos = 0;
  while (pos <= body.size()) {
    size_t nx = body.find(" + ", pos);
    std::string term = trim(body.substr(pos, nx == std::string::npos ? std::string::npos : nx - pos));
    pos = nx == std::string::npos ? body.size() + 1 : nx + 3;
    if (term.empty()) throw Error("empty term in form string");
    std::istringstream in(term);
    std::vector<std::string> toks;
    for (std::string t; in >> t;) toks.push_back(t);
    Scalar c = 1;
    size_t i = 0;
    try {
      c = parse_scalar(toks[0]);
      i = 1;
      if (i < toks.size()) {
        if (toks[i] != "*") throw Error("expected '*' after coefficient in '" + term + "'");
        ++i;
        if (i == toks.size()) throw Error("dangling '*' in '" + term + "'");
      }
    } catch (const Error& e) {
      if (i == 1) throw;
    }
    PolyForm t = PolyForm::constant(n, c);
    for (; i < toks.size(); ++i) {
      const std::string& f = toks[i];
      if (f.rfind("dt{", 0) == 0 && f.back() == '}') {
        std::string inner = f.substr(3, f.size() - 4);
        std::istringstream li(inner);
        for (std::string x; std::getline(li, x, ',');) {
          int k = 0;
          try { k = std::stoi(x); } catch (...) { throw Error("bad dt index in '" + f + "'"); }
          if (k < 1 || k > n) throw Error("dt index out of range in '" + f + "'");
          t = wedge(t, derham_d(PolyForm::coord(n, k)));
        }
      } else if (f.size() >= 2 && f[0] == 't') {
        size_t caret = f.find('^');
        int k = 0, e = 1;
        try {
          k = std::stoi(f.substr(1, caret == std::string::npos ? std::string::npos : caret - 1));
          if (caret != std::string::npos) e = std::stoi(f.substr(caret + 1));
        } catch (...) { throw Error("bad factor '" + f + "'"); }
        if (k < 1 || k > n || e < 0) throw Error("factor out of range '" + f + "'");
        t = wedge(t, power(PolyForm::coord(n, k), e));
      } else {
        throw Error("unrecognised factor '" + f + "'");
      }
    }
    r += t;
  }
  return r;
}

}  // namespace lh
