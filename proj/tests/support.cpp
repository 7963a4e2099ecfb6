#include "support.hpp"

#include <sys/wait.h>

#include <array>
#include <cstdio>

namespace lh::testing {

namespace {

using Matrix = std::vector<std::vector<Scalar>>;

// Gauss-Jordan inverse; the input is known to be invertible.
Matrix invert(Matrix a) {
  const size_t n = a.size();
  Matrix inv(n, std::vector<Scalar>(n, 0));
  for (size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (size_t c = 0; c < n; ++c) {
    size_t p = c;
    while (a[p][c] == 0) ++p;
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Scalar d = a[c][c];
    for (size_t j = 0; j < n; ++j) {
      a[c][j] /= d;
      inv[c][j] /= d;
    }
    for (size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Scalar m = a[r][c];
      for (size_t j = 0; j < n; ++j) {
        a[r][j] -= m * a[c][j];
        inv[r][j] -= m * inv[c][j];
      }
    }
  }
  return inv;
}

// Basis of the kernel of a (rows x cols) matrix.
std::vector<std::vector<Scalar>> kernel(Matrix a, size_t cols) {
  std::vector<int> pivot_col;
  size_t row = 0;
  for (size_t c = 0; c < cols && row < a.size(); ++c) {
    size_t p = row;
    while (p < a.size() && a[p][c] == 0) ++p;
    if (p == a.size()) continue;
    std::swap(a[p], a[row]);
    Scalar d = a[row][c];
    for (auto& x : a[row]) x /= d;
    for (size_t r = 0; r < a.size(); ++r) {
      if (r == row || a[r][c] == 0) continue;
      Scalar m = a[r][c];
      for (size_t j = 0; j < cols; ++j) a[r][j] -= m * a[row][j];
    }
    pivot_col.push_back(static_cast<int>(c));
    ++row;
  }
  std::vector<std::vector<Scalar>> out;
  for (size_t f = 0; f < cols; ++f) {
    if (std::find(pivot_col.begin(), pivot_col.end(), static_cast<int>(f)) != pivot_col.end())
      continue;
    std::vector<Scalar> v(cols, 0);
    v[f] = 1;
    for (size_t r = 0; r < pivot_col.size(); ++r) v[pivot_col[r]] = -a[r][f];
    out.push_back(v);
  }
  return out;
}

std::vector<int> of_degree(const SpacePtr& S, int d) {
  std::vector<int> out;
  for (int i = 0; i < S->dim(); ++i)
    if (S->degree(i) == d) out.push_back(i);
  return out;
}

template <class F>
void tuples(int dim, int n, F&& f) {
  if (dim == 0) return;
  std::vector<int> idx(n, 0);
  while (true) {
    f(idx);
    int p = n - 1;
    while (p >= 0 && ++idx[p] == dim) idx[p--] = 0;
    if (p < 0) return;
  }
}

std::map<int, GradedMultilinearMap> only_nonzero(std::map<int, GradedMultilinearMap> m) {
  for (auto it = m.begin(); it != m.end();)
    it = it->second.is_zero() ? m.erase(it) : std::next(it);
  return m;
}

}  // namespace

Scalar Rng::scalar() {
  Scalar q(uniform(-2, 2), coin(5) ? 2 : 1);
  q.canonicalize();
  return q;
}

Scalar Rng::nonzero() {
  Scalar q;
  do q = scalar();
  while (q == 0);
  return q;
}

Vector random_vector(Rng& rng, const SpacePtr& S, int d, int density) {
  Vector v(S);
  for (int i : of_degree(S, d))
    if (rng.coin(density)) v.add(i, rng.nonzero());
  return v;
}

GradedMultilinearMap random_map(Rng& rng, const SpacePtr& src, const SpacePtr& tgt, int arity,
                                int degree, int density) {
  GradedMultilinearMap m(src, tgt, arity, degree);
  tuples(src->dim(), arity, [&](const std::vector<int>& t) {
    int d = degree;
    for (int a : t) d += src->degree(a);
    Vector v = random_vector(rng, tgt, d, density);
    if (!v.is_zero()) m.set(t, v);
  });
  return m;
}

AlgebraPtr random_seed_2term(Rng& rng, const std::string& name, int dimC, int dimZ, int dim1) {
  std::vector<std::pair<std::string, int>> basis;
  for (int i = 1; i <= dimC; ++i) basis.emplace_back("c" + std::to_string(i), 0);
  for (int i = 1; i <= dimZ; ++i) basis.emplace_back("z" + std::to_string(i), 0);
  for (int i = 1; i <= dim1; ++i) basis.emplace_back("h" + std::to_string(i), 1);
  SpacePtr V = make_space(name, basis);
  auto C = [&](int i) { return i; };
  auto Z = [&](int i) { return dimC + i; };
  auto H = [&](int i) { return dimC + dimZ + i; };
  GradedMultilinearMap l1(V, V, 1, -1), l2(V, V, 2, 0), l3(V, V, 3, 1);
  Matrix mat(dimZ, std::vector<Scalar>(dim1, 0));
  for (int h = 0; h < dim1; ++h) {
    Vector v(V);
    for (int z = 0; z < dimZ; ++z)
      if (rng.coin()) {
        mat[z][h] = rng.nonzero();
        v.add(Z(z), mat[z][h]);
      }
    if (!v.is_zero()) l1.set(std::vector<int>{H(h)}, v);
  }
  for (int a = 0; a < dimC; ++a)
    for (int b = 0; b < dimC; ++b) {
      Vector v(V);
      for (int z = 0; z < dimZ; ++z)
        if (rng.coin()) v.add(Z(z), rng.nonzero());
      if (!v.is_zero()) l2.set(std::vector<int>{C(a), C(b)}, v);
    }
  auto ker = kernel(mat, dim1);
  if (!ker.empty())
    tuples(dimC, 3, [&](const std::vector<int>& t) {
      Vector v(V);
      for (auto& k : ker) {
        if (!rng.coin()) continue;
        Scalar c = rng.nonzero();
        for (int h = 0; h < dim1; ++h)
          if (k[h] != 0) v.add(H(h), c * k[h]);
      }
      if (!v.is_zero()) l3.set(std::vector<int>{C(t[0]), C(t[1]), C(t[2])}, v);
    });
  return std::make_shared<LeibnizInftyAlgebra>(name, V,
                                               only_nonzero({{1, l1}, {2, l2}, {3, l3}}));
}

std::pair<GradedMultilinearMap, GradedMultilinearMap> random_iso_data(Rng& rng, const SpacePtr& V,
                                                                      const SpacePtr& W) {
  GradedMultilinearMap f1(V, W, 1, 0);
  for (int d : {0, 1}) {
    auto src = of_degree(V, d), tgt = of_degree(W, d);
    if (src.size() != tgt.size()) throw Error("random_iso_data: dimension mismatch");
    const size_t n = src.size();
    // Unit lower triangular times a random permutation, with random scaling of the diagonal.
    std::vector<size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng.gen);
    for (size_t i = 0; i < n; ++i) {
      Vector v(W);
      v.add(tgt[perm[i]], rng.coin(3) ? Scalar(-1) : Scalar(1));
      for (size_t j = 0; j < i; ++j)
        if (rng.coin()) v.add(tgt[perm[j]], rng.scalar());
      f1.set(std::vector<int>{src[i]}, v);
    }
  }
  GradedMultilinearMap f2(V, W, 2, 1);
  for (int x : of_degree(V, 0))
    for (int y : of_degree(V, 0)) {
      Vector v = random_vector(rng, W, 1);
      if (!v.is_zero()) f2.set(std::vector<int>{x, y}, v);
    }
  return {f1, f2};
}

InftyMorphism pushforward(const AlgebraPtr& A, const GradedMultilinearMap& f1,
                          const GradedMultilinearMap& f2, const std::string& name) {
  const SpacePtr& V = A->V;
  const SpacePtr& W = f1.target();
  // f_1^{-1} degree by degree.
  GradedMultilinearMap inv(W, V, 1, 0);
  for (int d : {0, 1}) {
    auto src = of_degree(V, d), tgt = of_degree(W, d);
    Matrix m(tgt.size(), std::vector<Scalar>(src.size(), 0));
    for (size_t j = 0; j < src.size(); ++j) {
      Vector v = f1.at({src[j]});
      for (size_t i = 0; i < tgt.size(); ++i) m[i][j] = v.coeff(tgt[i]);
    }
    Matrix mi = invert(m);
    for (size_t i = 0; i < tgt.size(); ++i) {
      Vector v(V);
      for (size_t j = 0; j < src.size(); ++j)
        if (mi[j][i] != 0) v.add(src[j], mi[j][i]);
      inv.set(std::vector<int>{tgt[i]}, v);
    }
  }
  auto F1 = [&](const Vector& x) { return eval_map(f1, {x}); };
  auto F2 = [&](const Vector& x, const Vector& y) { return eval_map(f2, {x, y}); };
  auto pre = [&](int i) { return eval_map(inv, {Vector::basis(W, i)}); };
  auto l = [&](int i, std::vector<Vector> a) { return A->op(i, a); };
  GradedMultilinearMap m1(W, W, 1, -1), m2(W, W, 2, 0), m3(W, W, 3, 1);
  auto X = of_degree(W, 0), H = of_degree(W, 1);
  for (int h : H) m1.set(std::vector<int>{h}, F1(l(1, {pre(h)})));
  auto M1 = [&](const Vector& x) { return eval_map(m1, {x}); };
  for (int a : X)
    for (int b : X) {
      Vector x = pre(a), y = pre(b);
      m2.set(std::vector<int>{a, b}, F1(l(2, {x, y})) - M1(F2(x, y)));
    }
  for (int a : X)
    for (int h : H) {
      Vector x = pre(a), k = pre(h);
      m2.set(std::vector<int>{a, h}, F1(l(2, {x, k})) - F2(x, l(1, {k})));
      m2.set(std::vector<int>{h, a}, F1(l(2, {k, x})) - F2(l(1, {k}), x));
    }
  auto M2 = [&](const Vector& x, const Vector& y) { return eval_map(m2, {x, y}); };
  for (int a : X)
    for (int b : X)
      for (int c : X) {
        Vector x = pre(a), y = pre(b), z = pre(c);
        m3.set(std::vector<int>{a, b, c},
               F1(l(3, {x, y, z})) + F2(l(2, {x, y}), z) - F2(x, l(2, {y, z})) +
                   F2(y, l(2, {x, z})) + M2(F2(x, y), F1(z)) - M2(F1(x), F2(y, z)) +
                   M2(F1(y), F2(x, z)));
      }
  auto B = std::make_shared<LeibnizInftyAlgebra>(name, W,
                                                 only_nonzero({{1, m1}, {2, m2}, {3, m3}}));
  return InftyMorphism{A, B, only_nonzero({{1, f1}, {2, f2}})};
}

InftyMorphism random_morphism_from(Rng& rng, const AlgebraPtr& A, const std::string& name) {
  std::vector<std::pair<std::string, int>> basis;
  for (auto& [lab, d] : A->V->basis()) basis.emplace_back(lab + "'", d);
  SpacePtr W = make_space(name, basis);
  auto [f1, f2] = random_iso_data(rng, A->V, W);
  return pushforward(A, f1, f2, name);
}

AlgebraPtr random_2term(Rng& rng, const std::string& name, int dimC, int dimZ, int dim1) {
  AlgebraPtr seed = random_seed_2term(rng, name + "_seed", dimC, dimZ, dim1);
  std::vector<std::pair<std::string, int>> basis;
  for (int i = 1; i <= dimC + dimZ; ++i) basis.emplace_back("x" + std::to_string(i), 0);
  for (int i = 1; i <= dim1; ++i) basis.emplace_back("h" + std::to_string(i), 1);
  SpacePtr W = make_space(name, basis);
  auto [f1, f2] = random_iso_data(rng, seed->V, W);
  return pushforward(seed, f1, f2, name).target;
}

Homotopy2Term homotopy_with(const std::shared_ptr<const InftyMorphism>& f,
                            const GradedMultilinearMap& theta) {
  const auto& A = *f->source;
  const auto& B = *f->target;
  const SpacePtr& V = A.V;
  const SpacePtr& W = B.V;
  auto th = [&](const Vector& x) { return eval_map(theta, {x}); };
  GradedMultilinearMap g1(V, W, 1, 0), g2(V, W, 2, 1);
  for (int i = 0; i < V->dim(); ++i) {
    Vector x = Vector::basis(V, i);
    Vector d = V->degree(i) == 0 ? B.op(1, {th(x)}) : th(A.op(1, {x}));
    g1.set(std::vector<int>{i}, f->component(1, {x}) + d);
  }
  for (int a : A.basis_of_degree(0))
    for (int b : A.basis_of_degree(0)) {
      Vector x = Vector::basis(V, a), y = Vector::basis(V, b);
      Vector gy = eval_map(g1, {y});
      g2.set(std::vector<int>{a, b}, f->component(2, {x, y}) + th(A.op(2, {x, y})) -
                                         B.op(2, {f->component(1, {x}), th(y)}) -
                                         B.op(2, {th(x), gy}));
    }
  auto g = std::make_shared<InftyMorphism>(
      InftyMorphism{f->source, f->target, only_nonzero({{1, g1}, {2, g2}})});
  return Homotopy2Term{f, g, theta};
}

Homotopy2Term random_homotopy(Rng& rng, const std::shared_ptr<const InftyMorphism>& f) {
  return homotopy_with(f, random_map(rng, f->source->V, f->target->V, 1, 1));
}

AlgebraPtr perturb_algebra(Rng& rng, const AlgebraPtr& A, int k) {
  const SpacePtr& V = A->V;
  std::vector<std::pair<std::vector<int>, int>> slots;
  tuples(V->dim(), k, [&](const std::vector<int>& t) {
    int d = k - 2;
    for (int a : t) d += V->degree(a);
    for (int b : of_degree(V, d)) slots.emplace_back(t, b);
  });
  if (slots.empty()) throw Error("perturb_algebra: nothing to perturb");
  auto [t, b] = slots[rng.uniform(0, static_cast<int>(slots.size()) - 1)];
  auto l = A->l;
  auto it = l.try_emplace(k, V, V, k, k - 2).first;
  it->second.add(t, Vector::basis(V, b));
  return std::make_shared<LeibnizInftyAlgebra>(A->name, V, only_nonzero(l));
}

AlgebraPtr perturb_l3_in_kernel(Rng& rng, const AlgebraPtr& A) {
  const SpacePtr& V = A->V;
  auto v0 = of_degree(V, 0), v1 = of_degree(V, 1);
  if (v0.empty() || v1.empty()) return nullptr;
  Matrix mat(v0.size(), std::vector<Scalar>(v1.size(), 0));
  if (A->l.count(1))
    for (size_t h = 0; h < v1.size(); ++h) {
      Vector img = A->l.at(1).at({v1[h]});
      for (size_t r = 0; r < v0.size(); ++r) mat[r][h] = img.coeff(v0[r]);
    }
  auto ker = kernel(mat, v1.size());
  // functionals on V_0 killing im l_1, so the change is invisible to the mixed relation
  Matrix tr(v1.size(), std::vector<Scalar>(v0.size(), 0));
  for (size_t r = 0; r < v0.size(); ++r)
    for (size_t h = 0; h < v1.size(); ++h) tr[h][r] = mat[r][h];
  auto ann = kernel(tr, v0.size());
  if (ker.empty() || ann.empty()) return nullptr;
  const auto& k = ker[rng.uniform(0, static_cast<int>(ker.size()) - 1)];
  const auto& phi = ann[rng.uniform(0, static_cast<int>(ann.size()) - 1)];
  Vector v(V);
  Scalar c = rng.nonzero();
  for (size_t h = 0; h < v1.size(); ++h)
    if (k[h] != 0) v.add(v1[h], c * k[h]);
  auto l = A->l;
  auto it = l.try_emplace(3, V, V, 3, 1).first;
  for (size_t a = 0; a < v0.size(); ++a)
    for (size_t b = 0; b < v0.size(); ++b)
      for (size_t d = 0; d < v0.size(); ++d) {
        Scalar w = phi[a] * phi[b] * phi[d];
        if (w != 0) it->second.add({v0[a], v0[b], v0[d]}, w * v);
      }
  return std::make_shared<LeibnizInftyAlgebra>(A->name, V, only_nonzero(l));
}

InftyMorphism perturb_morphism(Rng& rng, const InftyMorphism& f, int k) {
  const SpacePtr& V = f.source->V;
  const SpacePtr& W = f.target->V;
  std::vector<std::pair<std::vector<int>, int>> slots;
  tuples(V->dim(), k, [&](const std::vector<int>& t) {
    int d = k - 1;
    for (int a : t) d += V->degree(a);
    for (int b : of_degree(W, d)) slots.emplace_back(t, b);
  });
  if (slots.empty()) throw Error("perturb_morphism: nothing to perturb");
  auto [t, b] = slots[rng.uniform(0, static_cast<int>(slots.size()) - 1)];
  InftyMorphism out = f;
  auto it = out.phi.try_emplace(k, V, W, k, k - 1).first;
  it->second.add(t, Vector::basis(W, b));
  out.phi = only_nonzero(out.phi);
  return out;
}

FormValued random_beta(Rng& rng, const LInftyAlgebra& g, int n, int i, int labels) {
  const auto& S = g.space();
  std::vector<int> pool;
  for (int l = 0; l < S->dim(); ++l) {
    int q = g.gsign() * S->degree(l);  // form degree that makes v (x) w of total degree 0
    if (q >= 0 && q <= n) pool.push_back(l);
  }
  FormValued beta(S, n);
  if (pool.empty()) return beta;
  for (int k = 0; k < labels; ++k) {
    int l = pool[rng.uniform(0, static_cast<int>(pool.size()) - 1)];
    int q = g.gsign() * S->degree(l);
    PolyForm w = random_form(rng.gen, n, 2, 3).part(q);
    if (q == 0) w -= PolyForm::constant(n, evaluate_vertex(w, i));
    beta.add(l, w);
  }
  return beta;
}

CommandResult run_command(const std::string& cmd) {
  CommandResult r;
  FILE* p = popen(cmd.c_str(), "r");
  if (!p) return r;
  std::array<char, 4096> buf;
  size_t n;
  while ((n = fread(buf.data(), 1, buf.size(), p)) > 0) r.out.append(buf.data(), n);
  int st = pclose(p);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

}  // namespace lh::testing
