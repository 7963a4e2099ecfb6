#include "lh/leibniz.hpp"

#include <algorithm>
#include <numeric>

namespace lh {

namespace {

std::vector<std::string> labels_of(const GradedVectorSpace& V, const std::vector<int>& tuple) {
  std::vector<std::string> out;
  for (int a : tuple) out.push_back(V.label(a));
  return out;
}

// Every tuple of basis indices of length n.
template <class F>
void for_each_tuple(int dim, int n, F&& f) {
  if (dim == 0) return;
  std::vector<int> idx(n, 0);
  while (true) {
    f(idx);
    int p = n - 1;
    while (p >= 0 && ++idx[p] == dim) idx[p--] = 0;
    if (p < 0) return;
  }
}

void compare(Report& r, const std::string& name, std::vector<std::string> tuple, const Vector& lhs,
             const Vector& rhs) {
  ++r.checked;
  r.note(name);
  if (lhs != rhs) r.fail({name, std::move(tuple), lhs.str(), rhs.str()});
}

Vector retag(const Vector& v, const SpacePtr& S) {
  Vector out(S);
  for (auto& [i, c] : v.terms()) out.add(i, c);
  return out;
}

bool same_maps(const std::map<int, GradedMultilinearMap>& a,
               const std::map<int, GradedMultilinearMap>& b) {
  auto zero = [](const std::map<int, GradedMultilinearMap>& m, int k) {
    auto it = m.find(k);
    return it == m.end() || it->second.is_zero();
  };
  for (auto& [k, f] : a) {
    auto it = b.find(k);
    if (it == b.end() ? !f.is_zero() : !(f == it->second)) return false;
  }
  for (auto& [k, f] : b)
    if (!a.count(k) && !zero(b, k)) return false;
  return true;
}

bool same_morphism(const InftyMorphism& a, const InftyMorphism& b) {
  return a.source->name == b.source->name && a.target->name == b.target->name &&
         same_maps(a.phi, b.phi);
}

// Linear map A o B for arity-1 maps.
GradedMultilinearMap compose_linear(const GradedMultilinearMap& A, const GradedMultilinearMap& B) {
  GradedMultilinearMap out(B.source(), A.target(), 1, A.degree() + B.degree());
  for (auto& [t, v] : B.coeffs()) {
    Vector w = eval_map(A, {v});
    if (!w.is_zero()) out.set(t, w);
  }
  return out;
}

const GradedMultilinearMap& require_map(const std::map<int, GradedMultilinearMap>& m, int k,
                                        const char* what) {
  auto it = m.find(k);
  if (it == m.end()) throw Error(std::string("missing component: ") + what);
  return it->second;
}

}  // namespace

// ---------------------------------------------------------------------------
// Algebras

LeibnizInftyAlgebra::LeibnizInftyAlgebra(std::string n, SpacePtr v,
                                         std::map<int, GradedMultilinearMap> ops)
    : name(std::move(n)), V(std::move(v)), l(std::move(ops)) {
  if (!V) throw Error("algebra " + name + ": missing space");
  for (auto& [i, m] : l) {
    if (i < 1) throw Error("algebra " + name + ": arity must be positive");
    if (m.arity() != i || m.degree() != i - 2)
      throw Error("algebra " + name + ": l_" + std::to_string(i) + " must have arity " +
                  std::to_string(i) + " and degree " + std::to_string(i - 2));
    if (m.source()->name() != V->name() || m.target()->name() != V->name())
      throw Error("algebra " + name + ": l_" + std::to_string(i) + " acts on the wrong space");
  }
  sV = suspend(V, 1);
}

Vector LeibnizInftyAlgebra::op(int i, const std::vector<Vector>& args) const {
  auto it = l.find(i);
  if (it == l.end()) return Vector(V);
  return eval_map(it->second, args);
}

Coderivation LeibnizInftyAlgebra::coderivation(int N) const {
  Coderivation D{sV, {}, -1, N};
  for (auto& [i, m] : l)
    if (i <= N) D.parts.emplace(i, transport(m, sV, sV, 1));
  return D;
}

bool LeibnizInftyAlgebra::is_two_term() const {
  for (auto& [lab, d] : V->basis())
    if (d != 0 && d != 1) return false;
  for (auto& [i, m] : l)
    if (i > 3 && !m.is_zero()) return false;
  return true;
}

std::vector<int> LeibnizInftyAlgebra::basis_of_degree(int d) const {
  std::vector<int> out;
  for (int i = 0; i < V->dim(); ++i)
    if (V->degree(i) == d) out.push_back(i);
  return out;
}

Vector jacobi_residual(const LeibnizInftyAlgebra& A, const std::vector<int>& v) {
  const SpacePtr& V = A.V;
  const int n = static_cast<int>(v.size());
  Vector out(V);
  for (int j = 1; j <= n; ++j) {
    int i = n + 1 - j;
    if (!A.l.count(i) || !A.l.count(j)) continue;
    const auto& li = A.l.at(i);
    const auto& lj = A.l.at(j);
    for (int k = j; k <= n; ++k) {
      std::vector<int> degs;
      for (int a = 0; a < k - 1; ++a) degs.push_back(V->degree(v[a]));
      for (auto& s : shuffles(k - j, j - 1)) {
        long pre = 0;
        std::vector<Vector> outer;
        for (int a = 0; a < k - j; ++a) {
          pre += V->degree(v[s(a)]);
          outer.push_back(Vector::basis(V, v[s(a)]));
        }
        std::vector<int> inner;
        for (int a = k - j; a < k - 1; ++a) inner.push_back(v[s(a)]);
        inner.push_back(v[k - 1]);
        Vector x = lj.at(inner);
        if (x.is_zero()) continue;
        outer.push_back(x);
        for (int a = k; a < n; ++a) outer.push_back(Vector::basis(V, v[a]));
        int sg = parity_sign(long(n - k + 1) * (j - 1)) * parity_sign(long(j) * pre) *
                 koszul_sign(s, degs) * s.sign();
        out += Scalar(sg) * eval_map(li, outer);
      }
    }
  }
  return out;
}

Report check_jacobi(const LeibnizInftyAlgebra& A, int up_to_arity) {
  Report r;
  for (int n = 1; n <= up_to_arity; ++n) {
    std::string name = "jacobi(" + std::to_string(n) + ")";
    r.note(name);
    for_each_tuple(A.V->dim(), n, [&](const std::vector<int>& t) {
      ++r.checked;
      Vector res = jacobi_residual(A, t);
      if (!res.is_zero()) r.fail({name, labels_of(*A.V, t), res.str(), "0"});
    });
  }
  return r;
}

Report check_codifferential(const LeibnizInftyAlgebra& A, int N) {
  return coderivation_square_check(A.coderivation(N));
}

Report check_2term_axioms(const LeibnizInftyAlgebra& A) {
  if (!A.is_two_term()) throw Error("algebra " + A.name + " is not 2-term");
  Report r;
  const auto& V = A.V;
  auto L = [&](int i, std::vector<Vector> a) { return A.op(i, a); };
  auto e = [&](int i) { return Vector::basis(V, i); };
  auto X = A.basis_of_degree(0), H = A.basis_of_degree(1);
  for (const char* n : {"2term(a)", "2term(b)", "2term(c)", "2term(d)", "2term(e)"}) r.note(n);
  for (int x : X)
    for (int h : H) {
      compare(r, "2term(a)", labels_of(*V, {x, h}), L(1, {L(2, {e(x), e(h)})}),
              L(2, {e(x), L(1, {e(h)})}));
      compare(r, "2term(a)", labels_of(*V, {h, x}), L(1, {L(2, {e(h), e(x)})}),
              L(2, {L(1, {e(h)}), e(x)}));
    }
  for (int h : H)
    for (int k : H)
      compare(r, "2term(b)", labels_of(*V, {h, k}), L(2, {L(1, {e(h)}), e(k)}),
              L(2, {e(h), L(1, {e(k)})}));
  for (int x : X)
    for (int y : X)
      for (int z : X) {
        auto ex = e(x), ey = e(y), ez = e(z);
        compare(r, "2term(c)", labels_of(*V, {x, y, z}), L(1, {L(3, {ex, ey, ez})}),
                L(2, {ex, L(2, {ey, ez})}) - L(2, {ey, L(2, {ex, ez})}) -
                    L(2, {L(2, {ex, ey}), ez}));
      }
  // (d): l_3 with one argument in V_1 versus the corresponding Leibniz defect.
  for (int x : X)
    for (int y : X)
      for (int h : H) {
        auto ex = e(x), ey = e(y), eh = e(h);
        std::vector<std::string> tx = labels_of(*V, {x, y, h});
        compare(r, "2term(d)", tx, L(3, {ex, ey, L(1, {eh})}),
                L(2, {ex, L(2, {ey, eh})}) - L(2, {ey, L(2, {ex, eh})}) -
                    L(2, {L(2, {ex, ey}), eh}));
        compare(r, "2term(d)", labels_of(*V, {x, h, y}), L(3, {ex, L(1, {eh}), ey}),
                L(2, {ex, L(2, {eh, ey})}) - L(2, {eh, L(2, {ex, ey})}) -
                    L(2, {L(2, {ex, eh}), ey}));
        compare(r, "2term(d)", labels_of(*V, {h, x, y}), L(3, {L(1, {eh}), ex, ey}),
                L(2, {eh, L(2, {ex, ey})}) - L(2, {ex, L(2, {eh, ey})}) -
                    L(2, {L(2, {eh, ex}), ey}));
      }
  for (int w : X)
    for (int x : X)
      for (int y : X)
        for (int z : X) {
          auto ew = e(w), ex = e(x), ey = e(y), ez = e(z);
          Vector sum = L(2, {L(3, {ew, ex, ey}), ez}) + L(2, {ew, L(3, {ex, ey, ez})}) -
                       L(2, {ex, L(3, {ew, ey, ez})}) + L(2, {ey, L(3, {ew, ex, ez})}) -
                       L(3, {L(2, {ew, ex}), ey, ez}) + L(3, {ew, L(2, {ex, ey}), ez}) -
                       L(3, {ex, L(2, {ew, ey}), ez}) - L(3, {ew, ex, L(2, {ey, ez})}) +
                       L(3, {ew, ey, L(2, {ex, ez})}) - L(3, {ex, ey, L(2, {ew, ez})});
          compare(r, "2term(e)", labels_of(*V, {w, x, y, z}), sum, Vector(V));
        }
  return r;
}

// ---------------------------------------------------------------------------
// Morphisms

Vector InftyMorphism::component(int i, const std::vector<Vector>& args) const {
  auto it = phi.find(i);
  if (it == phi.end()) return Vector(target->V);
  return eval_map(it->second, args);
}

CoalgebraMorphism InftyMorphism::coalgebra(int N) const {
  CoalgebraMorphism F{source->suspended(), target->suspended(), {}, N};
  for (auto& [i, m] : phi)
    if (i <= N) F.parts.emplace(i, transport(m, source->suspended(), target->suspended(), 1));
  return F;
}

InftyMorphism InftyMorphism::identity(const AlgebraPtr& A) {
  GradedMultilinearMap id(A->V, A->V, 1, 0);
  for (int i = 0; i < A->V->dim(); ++i) id.set(std::vector<int>{i}, Vector::basis(A->V, i));
  return InftyMorphism{A, A, {{1, id}}};
}

Vector morphism_residual(const InftyMorphism& f, const std::vector<int>& v) {
  const SpacePtr& V = f.source->V;
  const SpacePtr& W = f.target->V;
  const auto& l = f.source->l;
  const auto& m = f.target->l;
  const auto& F = f.phi;
  const int n = static_cast<int>(v.size());
  Vector lhs(W), rhs(W);
  std::vector<int> degs;
  for (int a : v) degs.push_back(V->degree(a));
  std::vector<int> ks;
  auto rec = [&](auto&& self, int rem) -> void {
    if (rem == 0) {
      int i = static_cast<int>(ks.size());
      if (!m.count(i)) return;
      long e = long(i) * (i - 1) / 2;
      for (int r = 0; r < i - 1; ++r) e += long(i - 1 - r) * ks[r];
      for (auto& s : filtered_shuffles(ks)) {
        long e2 = 0, run = 0;
        int pos = 0;
        std::vector<Vector> args;
        bool zero = false;
        for (int r = 0; r < i && !zero; ++r) {
          if (r >= 1) e2 += long(ks[r] - 1) * run;
          std::vector<int> t;
          for (int a = 0; a < ks[r]; ++a, ++pos) {
            t.push_back(v[s(pos)]);
            run += V->degree(v[s(pos)]);
          }
          auto it = F.find(ks[r]);
          Vector x = it == F.end() ? Vector(W) : it->second.at(t);
          if (x.is_zero()) zero = true;
          args.push_back(std::move(x));
        }
        if (zero) continue;
        int sg = parity_sign(e) * parity_sign(e2) * koszul_sign(s, degs) * s.sign();
        lhs += Scalar(sg) * eval_map(m.at(i), args);
      }
      return;
    }
    for (int k = 1; k <= rem; ++k) {
      ks.push_back(k);
      self(self, rem - k);
      ks.pop_back();
    }
  };
  rec(rec, n);
  for (int j = 1; j <= n; ++j) {
    int i = n + 1 - j;
    if (!F.count(i) || !l.count(j)) continue;
    for (int k = j; k <= n; ++k) {
      std::vector<int> kd(degs.begin(), degs.begin() + (k - 1));
      for (auto& s : shuffles(k - j, j - 1)) {
        long pre = 0;
        std::vector<Vector> outer;
        for (int a = 0; a < k - j; ++a) {
          pre += V->degree(v[s(a)]);
          outer.push_back(Vector::basis(V, v[s(a)]));
        }
        std::vector<int> inner;
        for (int a = k - j; a < k - 1; ++a) inner.push_back(v[s(a)]);
        inner.push_back(v[k - 1]);
        Vector x = l.at(j).at(inner);
        if (x.is_zero()) continue;
        outer.push_back(x);
        for (int a = k; a < n; ++a) outer.push_back(Vector::basis(V, v[a]));
        int sg = parity_sign(long(k) + long(n - k + 1) * j) * parity_sign(long(j) * pre) *
                 koszul_sign(s, kd) * s.sign();
        rhs += Scalar(sg) * eval_map(F.at(i), outer);
      }
    }
  }
  return lhs - rhs;
}

Report check_morphism(const InftyMorphism& f, int up_to_arity) {
  Report r;
  for (int n = 1; n <= up_to_arity; ++n) {
    std::string name = "morphism(n=" + std::to_string(n) + ")";
    r.note(name);
    for_each_tuple(f.source->V->dim(), n, [&](const std::vector<int>& t) {
      ++r.checked;
      Vector res = morphism_residual(f, t);
      if (!res.is_zero()) r.fail({name, labels_of(*f.source->V, t), res.str(), "0"});
    });
  }
  if (f.source->is_two_term() && f.target->is_two_term()) {
    bool two = true;
    for (auto& [k, m] : f.phi)
      if (k > 2 && !m.is_zero()) two = false;
    if (two) r.merge(check_2term_morphism(f));
  }
  return r;
}

Report check_morphism_chain_map(const InftyMorphism& f, int N) {
  return check_chain_map(f.coalgebra(N), f.source->coderivation(N), f.target->coderivation(N));
}

Report check_2term_morphism(const InftyMorphism& f) {
  const auto& A = *f.source;
  const auto& B = *f.target;
  if (!A.is_two_term() || !B.is_two_term()) throw Error("morphism is not between 2-term algebras");
  Report r;
  const auto& V = A.V;
  auto e = [&](int i) { return Vector::basis(V, i); };
  auto l = [&](int i, std::vector<Vector> a) { return A.op(i, a); };
  auto m = [&](int i, std::vector<Vector> a) { return B.op(i, a); };
  auto f1 = [&](const Vector& x) { return f.component(1, {x}); };
  auto f2 = [&](const Vector& x, const Vector& y) { return f.component(2, {x, y}); };
  auto X = A.basis_of_degree(0), H = A.basis_of_degree(1);
  for (const char* n : {"morphism(a)", "morphism(b)", "morphism(c)", "morphism(d)"}) r.note(n);
  for (int h : H) compare(r, "morphism(a)", labels_of(*V, {h}), m(1, {f1(e(h))}), f1(l(1, {e(h)})));
  for (int x : X)
    for (int y : X)
      compare(r, "morphism(b)", labels_of(*V, {x, y}),
              m(2, {f1(e(x)), f1(e(y))}) + m(1, {f2(e(x), e(y))}), f1(l(2, {e(x), e(y)})));
  for (int x : X)
    for (int h : H) {
      compare(r, "morphism(c)", labels_of(*V, {x, h}), m(2, {f1(e(x)), f1(e(h))}),
              f1(l(2, {e(x), e(h)})) - f2(e(x), l(1, {e(h)})));
      compare(r, "morphism(c)", labels_of(*V, {h, x}), m(2, {f1(e(h)), f1(e(x))}),
              f1(l(2, {e(h), e(x)})) - f2(l(1, {e(h)}), e(x)));
    }
  for (int x : X)
    for (int y : X)
      for (int z : X) {
        auto ex = e(x), ey = e(y), ez = e(z);
        Vector lhs = m(3, {f1(ex), f1(ey), f1(ez)}) - m(2, {f2(ex, ey), f1(ez)}) +
                     m(2, {f1(ex), f2(ey, ez)}) - m(2, {f1(ey), f2(ex, ez)});
        Vector rhs = f1(l(3, {ex, ey, ez})) + f2(l(2, {ex, ey}), ez) - f2(ex, l(2, {ey, ez})) +
                     f2(ey, l(2, {ex, ez}));
        compare(r, "morphism(d)", labels_of(*V, {x, y, z}), lhs, rhs);
      }
  return r;
}

InftyMorphism compose_morphisms(const InftyMorphism& phi, const InftyMorphism& psi, int up_to_arity) {
  if (phi.target->name != psi.source->name)
    throw Error("compose: target of the first morphism is not the source of the second");
  CoalgebraMorphism C = compose(phi.coalgebra(up_to_arity), psi.coalgebra(up_to_arity));
  InftyMorphism out{phi.source, psi.target, {}};
  for (auto& [k, D] : C.parts) {
    GradedMultilinearMap F = transport_back(D, phi.source->V, psi.target->V, 1);
    if (!F.is_zero()) out.phi.emplace(k, F);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Convolution algebra

ConvolutionAlgebra::ConvolutionAlgebra(AlgebraPtr V, AlgebraPtr W, int N)
    : LInftyAlgebra(Convention::LadaStasheff, Grading::Homological, N + 2),
      V_(std::move(V)),
      W_(std::move(W)),
      N_(N) {
  sV_ = V_->suspended();
  sW_ = W_->suspended();
  D_ = V_->coderivation(N_);
  words_ = all_words(*sV_, N_);
  std::vector<std::pair<std::string, int>> basis;
  const auto& Wv = *W_->V;
  for (size_t a = 0; a < words_.size(); ++a) {
    word_index_[words_[a]] = static_cast<int>(a);
    std::string w = "[";
    for (size_t b = 0; b < words_[a].size(); ++b)
      w += (b ? "|" : "") + sV_->label(words_[a][b]);
    w += "]>";
    int wd = word_degree(*sV_, words_[a]);
    for (int j = 0; j < Wv.dim(); ++j) {
      index_[{static_cast<int>(a), j}] = static_cast<int>(key_.size());
      key_.emplace_back(static_cast<int>(a), j);
      basis.emplace_back(w + Wv.label(j), Wv.degree(j) - wd);
    }
  }
  L_ = make_space("L(" + V_->name + "," + W_->name + ")", std::move(basis));
}

int ConvolutionAlgebra::index(const Word& w, int wlabel) const {
  auto it = word_index_.find(w);
  if (it == word_index_.end()) throw Error("convolution element beyond the truncation length");
  return index_.at({it->second, wlabel});
}

std::map<Word, Vector> ConvolutionAlgebra::decode(const Vector& f) const {
  std::map<Word, Vector> out;
  for (auto& [i, c] : f.terms()) {
    auto [a, j] = key_[i];
    auto it = out.try_emplace(words_[a], W_->V).first;
    it->second.add(j, c);
  }
  return out;
}

Vector ConvolutionAlgebra::encode(const std::map<Word, Vector>& values) const {
  Vector out(L_);
  for (auto& [w, v] : values)
    for (auto& [j, c] : v.terms()) out.add(index(w, j), c);
  return out;
}

const std::vector<IteratedTerm>& ConvolutionAlgebra::coproduct(int word, int p) const {
  auto key = std::make_pair(word, p);
  auto it = coproducts_.find(key);
  if (it == coproducts_.end())
    it = coproducts_.emplace(key, iterated_coproduct(*sV_, words_[word], p)).first;
  return it->second;
}

const TensorPoly& ConvolutionAlgebra::differential(int word) const {
  auto it = differentials_.find(word);
  if (it == differentials_.end())
    it = differentials_.emplace(word, coderivation_extend(D_, words_[word])).first;
  return it->second;
}

Vector ConvolutionAlgebra::bracket_homogeneous(int k, const std::vector<Vector>& args) const {
  Vector out(L_);
  std::vector<std::map<Word, Vector>> vals;
  std::vector<int> degs;
  for (auto& a : args) {
    if (a.is_zero()) return out;
    vals.push_back(decode(a));
    degs.push_back(a.degree());
  }
  const auto& Wv = *W_->V;
  std::map<Word, Vector> res;
  auto accumulate = [&](const Word& u, const Vector& v) {
    if (v.is_zero()) return;
    auto it = res.try_emplace(u, W_->V).first;
    it->second += v;
  };
  const int out_deg = std::accumulate(degs.begin(), degs.end(), 0) + k - 2;
  std::vector<bool> degree_ok;  // indexed by word: some W degree matches
  auto word_fits = [&](int a) {
    int wd = word_degree(*sV_, words_[a]);
    for (int j = 0; j < Wv.dim(); ++j)
      if (Wv.degree(j) - wd == out_deg) return true;
    return false;
  };
  if (k == 1) {
    const auto& f = vals[0];
    if (W_->l.count(1))
      for (auto& [u, v] : f) accumulate(u, W_->op(1, {v}));
    const Scalar sg = parity_sign(degs[0]);
    for (size_t a = 0; a < words_.size(); ++a) {
      if (!word_fits(static_cast<int>(a))) continue;
      Vector acc(W_->V);
      for (auto& [u, c] : differential(static_cast<int>(a)).terms) {
        auto it = f.find(u);
        if (it != f.end()) acc += c * it->second;
      }
      if (!acc.is_zero()) accumulate(words_[a], sg * acc);
    }
  } else {
    if (!W_->l.count(k)) return out;
    const auto& mk = W_->l.at(k);
    Permutation s = Permutation::identity(k);
    std::vector<Permutation> perms;
    do perms.push_back(s);
    while (std::next_permutation(s.image.begin(), s.image.end()));
    for (size_t a = 0; a < words_.size(); ++a) {
      if (static_cast<int>(words_[a].size()) < k || !word_fits(static_cast<int>(a))) continue;
      Vector acc(W_->V);
      const auto& terms = coproduct(static_cast<int>(a), k);
      for (auto& sigma : perms) {
        const int es = koszul_sign(sigma, degs) * sigma.sign();
        for (auto& t : terms) {
          std::vector<Vector> in;
          long e = 0, prefix = 0;
          bool zero = false;
          for (int b = 0; b < k && !zero; ++b) {
            const auto& fb = vals[sigma(b)];
            auto it = fb.find(t.parts[b]);
            if (it == fb.end()) {
              zero = true;
              break;
            }
            e += long(degs[sigma(b)]) * prefix;
            prefix += word_degree(*sV_, t.parts[b]);
            in.push_back(it->second);
          }
          if (zero) continue;
          acc += Scalar(es * parity_sign(e)) * t.coeff * eval_map(mk, in);
        }
      }
      accumulate(words_[a], acc);
    }
  }
  return encode(res);
}

Vector morphism_to_mc(const ConvolutionAlgebra& L, const InftyMorphism& f) {
  if (f.source->name != L.source()->name || f.target->name != L.target()->name)
    throw Error("morphism does not match the convolution algebra");
  std::map<Word, Vector> vals;
  for (auto& [k, m] : f.phi) {
    if (m.is_zero()) continue;
    if (k > L.truncation()) throw Error("morphism component beyond the truncation length");
    GradedMultilinearMap D = transport(m, L.source()->suspended(), L.target()->suspended(), 1);
    for (auto& [t, v] : D.coeffs()) vals[t] = retag(v, L.target()->V);
  }
  return L.encode(vals);
}

InftyMorphism mc_to_morphism(const ConvolutionAlgebra& L, const Vector& alpha) {
  const auto& sV = L.source()->suspended();
  const auto& sW = L.target()->suspended();
  std::map<int, GradedMultilinearMap> D;
  for (auto& [w, v] : L.decode(alpha)) {
    int k = static_cast<int>(w.size());
    auto it = D.try_emplace(k, sV, sW, k, 0).first;
    it->second.set(w, retag(v, sW));
  }
  InftyMorphism out{L.source(), L.target(), {}};
  for (auto& [k, m] : D) out.phi.emplace(k, transport_back(m, L.source()->V, L.target()->V, 1));
  return out;
}

Report morphism_mc_roundtrip(const ConvolutionAlgebra& L, const InftyMorphism& f) {
  Report r;
  Vector alpha = morphism_to_mc(L, f);
  Vector res = mc_residual(L, alpha);
  Report morph = check_morphism(f, L.truncation());
  r.merge(morph);
  r.note("maurer-cartan");
  ++r.checked;
  if (!res.is_zero()) r.fail({"maurer-cartan", {}, res.str(), "0"});
  r.note("mc<=>morphism");
  ++r.checked;
  if (res.is_zero() != morph.pass)
    r.fail({"mc<=>morphism", {}, res.is_zero() ? "MC" : "not MC",
            morph.pass ? "morphism" : "not a morphism"});
  r.note("reconstruction");
  ++r.checked;
  InftyMorphism back = mc_to_morphism(L, alpha);
  if (!same_maps(back.phi, f.phi)) r.fail({"reconstruction", {}, "differs", "original"});
  return r;
}

// ---------------------------------------------------------------------------
// 2-term homotopies

Report homotopy_check(const Homotopy2Term& h) {
  const auto& f = *h.f;
  const auto& g = *h.g;
  if (f.source->name != g.source->name || f.target->name != g.target->name)
    throw Error("homotopy between morphisms with different source or target");
  const auto& A = *f.source;
  const auto& B = *f.target;
  if (!A.is_two_term() || !B.is_two_term()) throw Error("homotopies need 2-term algebras");
  Report r;
  const auto& V = A.V;
  auto e = [&](int i) { return Vector::basis(V, i); };
  auto l = [&](int i, std::vector<Vector> a) { return A.op(i, a); };
  auto m = [&](int i, std::vector<Vector> a) { return B.op(i, a); };
  auto th = [&](const Vector& x) { return h.apply(x); };
  auto X = A.basis_of_degree(0), H = A.basis_of_degree(1);
  for (const char* n : {"homotopy(a)", "homotopy(b)", "homotopy(c)"}) r.note(n);
  for (int x : X)
    compare(r, "homotopy(a)", labels_of(*V, {x}), g.component(1, {e(x)}) - f.component(1, {e(x)}),
            m(1, {th(e(x))}));
  for (int k : H)
    compare(r, "homotopy(b)", labels_of(*V, {k}), g.component(1, {e(k)}) - f.component(1, {e(k)}),
            th(l(1, {e(k)})));
  for (int x : X)
    for (int y : X) {
      auto ex = e(x), ey = e(y);
      compare(r, "homotopy(c)", labels_of(*V, {x, y}),
              g.component(2, {ex, ey}) - f.component(2, {ex, ey}),
              th(l(2, {ex, ey})) - m(2, {f.component(1, {ex}), th(ey)}) -
                  m(2, {th(ex), g.component(1, {ey})}));
    }
  return r;
}

Vector homotopy_to_conv(const ConvolutionAlgebra& L, const GradedMultilinearMap& theta) {
  std::map<Word, Vector> vals;
  for (auto& [t, v] : theta.coeffs())
    if (!v.is_zero()) vals[t] = v;
  return L.encode(vals);
}

GradedMultilinearMap conv_to_homotopy(const ConvolutionAlgebra& L, const Vector& beta) {
  const auto& V = L.source()->V;
  GradedMultilinearMap theta(V, L.target()->V, 1, 1);
  for (auto& [w, v] : L.decode(beta)) {
    if (w.size() != 1 || V->degree(w[0]) != 0)
      throw Error("homotopy parameter has components outside sV_0 -> W_1");
    theta.set(w, v);
  }
  return theta;
}

Homotopy2Term homotopy_project(const ConvolutionAlgebra& L, const FormValued& alpha, int i,
                               std::shared_ptr<const InftyMorphism> f,
                               std::shared_ptr<const InftyMorphism> g) {
  if (alpha.n != 1) throw Error("homotopy_project expects an element over Delta^1");
  if (!extended_mc_residual(L, alpha).is_zero())
    throw Error("homotopy_project: input is not Maurer-Cartan");
  if (evaluate_vertex(alpha, 0) != morphism_to_mc(L, *f) ||
      evaluate_vertex(alpha, 1) != morphism_to_mc(L, *g))
    throw Error("homotopy_project: endpoints do not match the given morphisms");
  FormValued beta = contraction_h(alpha, i);
  Vector diff = evaluate_vertex(beta, 1) - evaluate_vertex(beta, 0);
  return Homotopy2Term{std::move(f), std::move(g), conv_to_homotopy(L, diff)};
}

FormValued homotopy_lift(const ConvolutionAlgebra& L, const Homotopy2Term& h, int i) {
  if (i != 0 && i != 1) throw Error("vertex must be 0 or 1");
  if (!homotopy_check(h).pass) throw Error("homotopy_lift: invalid homotopy");
  Vector B = homotopy_to_conv(L, h.theta);
  Vector mu = morphism_to_mc(L, i == 0 ? *h.f : *h.g);
  // beta(i) = 0, beta(1-i) = (-1)^i theta s^{-1}, linear in between.
  FormValued beta = i == 0 ? FormValued::tensor(B, PolyForm::coord(1, 1))
                           : FormValued::tensor(-B, PolyForm::coord(1, 0));
  beta.space = L.space();
  beta.n = 1;
  return b_inverse(L, mu, beta, i);
}

FormValued homotopy_closed_form(const ConvolutionAlgebra& L, const Vector& mu,
                                const FormValued& beta) {
  FormValued m = FormValued::constant(mu, 1);
  m.space = L.space();
  FormValued delta_beta(L.space(), 1);
  for (auto& [key, v] : beta.by_monomial()) {
    Vector dv = L.bracket(1, {v});
    FormValued piece = FormValued::from_monomials(L.space(), 1, {{key, dv}});
    delta_beta += piece;
  }
  // Brackets in Getzler's convention, l^G_2 = -l_2.
  const Scalar g2 = convention_sign(L.convention(), 2);
  FormValued out = m + tensor_bracket(L, 1, {beta});
  out += g2 * tensor_bracket(L, 2, {m, beta});
  out += (g2 / 2) * tensor_bracket(L, 2, {delta_beta, beta});
  return out;
}

Homotopy2Term vertical_compose(const Homotopy2Term& theta, const Homotopy2Term& tau) {
  if (!same_morphism(*theta.g, *tau.f))
    throw Error("vertical composition: target of the first homotopy is not the source of the second");
  return Homotopy2Term{theta.f, tau.g, theta.theta + tau.theta};
}

Homotopy2Term vertical_compose_via_kan(const ConvolutionAlgebra& L, const Homotopy2Term& theta,
                                       const Homotopy2Term& tau, const HornExtension& ext) {
  if (!same_morphism(*theta.g, *tau.f))
    throw Error("vertical composition: target of the first homotopy is not the source of the second");
  FormValued a01 = homotopy_lift(L, theta, 1);
  FormValued a12 = homotopy_lift(L, tau, 0);
  FormValued edge = horn_fill2(L, a01, a12, ext);
  return homotopy_project(L, edge, 0, theta.f, tau.g);
}

Homotopy2Term horizontal_compose(const Homotopy2Term& theta, const Homotopy2Term& tau) {
  const auto& f = *theta.f;
  const auto& g = *theta.g;
  const auto& f2 = *tau.f;
  const auto& g2 = *tau.g;
  if (f.target->name != f2.source->name)
    throw Error("horizontal composition: homotopies are not composable");
  const auto& f1 = require_map(f.phi, 1, "f_1");
  const auto& g1 = require_map(g.phi, 1, "g_1");
  const auto& fp1 = require_map(f2.phi, 1, "f'_1");
  const auto& gp1 = require_map(g2.phi, 1, "g'_1");
  GradedMultilinearMap a = compose_linear(gp1, theta.theta) + compose_linear(tau.theta, f1);
  GradedMultilinearMap b = compose_linear(fp1, theta.theta) + compose_linear(tau.theta, g1);
  if (!(a == b)) throw Error("horizontal composition: the two composite formulas disagree");
  auto fc = std::make_shared<InftyMorphism>(compose_morphisms(f, f2, 2));
  auto gc = std::make_shared<InftyMorphism>(compose_morphisms(g, g2, 2));
  return Homotopy2Term{fc, gc, a};
}

// ---------------------------------------------------------------------------
// Concordances

namespace {

void tpoly_add(TPoly& a, const TPoly& b, const Scalar& c = 1) {
  if (a.size() < b.size()) a.resize(b.size());
  for (size_t k = 0; k < b.size(); ++k) {
    if (b[k].is_zero()) continue;
    if (!a[k].space) a[k].space = b[k].space;
    a[k] += b[k] * c;
  }
}

void tpoly_trim(TPoly& a) {
  while (!a.empty() && a.back().is_zero()) a.pop_back();
}

TPoly tpoly_mul(const TPoly& a, const TPoly& b, int N) {
  TPoly out;
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) {
      if (a[i].is_zero() || b[j].is_zero()) continue;
      TensorPoly p = zin_product_trunc(a[i], b[j], N);
      if (p.is_zero()) continue;
      if (out.size() < i + j + 1) out.resize(i + j + 1);
      if (!out[i + j].space) out[i + j].space = p.space;
      out[i + j] += p;
    }
  tpoly_trim(out);
  return out;
}

TPoly tpoly_derivative(const TPoly& a) {
  TPoly out;
  for (size_t k = 1; k < a.size(); ++k) out.push_back(a[k] * Scalar(static_cast<long>(k)));
  tpoly_trim(out);
  return out;
}

TensorPoly tpoly_eval(const TPoly& a, const Scalar& t, const SpacePtr& S) {
  TensorPoly out(S);
  Scalar p = 1;
  for (auto& c : a) {
    out += c * p;
    p *= t;
  }
  return out;
}

TPoly tpoly_map(const TPoly& a, const std::function<TensorPoly(const TensorPoly&)>& f) {
  TPoly out;
  for (auto& c : a) out.push_back(f(c));
  tpoly_trim(out);
  return out;
}

std::string tpoly_str(const TPoly& a) {
  std::string s;
  for (size_t k = 0; k < a.size(); ++k) {
    if (a[k].is_zero()) continue;
    if (!s.empty()) s += " + ";
    s += "t^" + std::to_string(k) + "*(" + a[k].str() + ")";
  }
  return s.empty() ? "0" : s;
}

TensorPoly single(const SpacePtr& S, const Word& w) {
  TensorPoly x(S);
  x.add(w, 1);
  return x;
}

void compare_tpoly(Report& r, const std::string& name, const std::string& word, TPoly a, TPoly b) {
  tpoly_trim(a);
  tpoly_trim(b);
  ++r.checked;
  r.note(name);
  bool eq = a.size() == b.size();
  for (size_t k = 0; eq && k < a.size(); ++k) eq = a[k] == b[k];
  if (!eq) r.fail({name, {word}, tpoly_str(a), tpoly_str(b)});
}

}  // namespace

TensorPoly zin_product_trunc(const TensorPoly& a, const TensorPoly& b, int N) {
  TensorPoly out(a.space ? a.space : b.space);
  for (auto& [u, c] : a.terms)
    for (auto& [v, e] : b.terms) {
      if (static_cast<int>(u.size() + v.size()) > N) continue;
      TensorPoly p = zin_product(out.space, u, v, N);
      out += p * (c * e);
    }
  return out;
}

TensorPoly DGZA::d(const TensorPoly& x) const {
  TensorPoly out(U);
  for (auto& [w, c] : x.terms) {
    // (v_1..v_n) = (v_1..v_{n-1}).v_n, so d is a derivation along the left nesting.
    TensorPoly acc(U);
    for (size_t k = 0; k < w.size(); ++k) {
      // d acting on letter k: ((v_1..v_{k-1}) . d v_k) . v_{k+1} ... with sign of the prefix.
      auto it = dgen.find(w[k]);
      if (it == dgen.end() || it->second.is_zero()) continue;
      Word pre(w.begin(), w.begin() + k);
      TensorPoly cur(U);
      if (pre.empty())
        cur = it->second;
      else
        cur = zin_product_trunc(single(U, pre), it->second, N);
      for (size_t r = k + 1; r < w.size(); ++r) cur = zin_product_trunc(cur, single(U, {w[r]}), N);
      acc += cur * Scalar(parity_sign(pre.empty() ? 0 : word_degree(*U, pre)));
    }
    out += acc * c;
  }
  return out;
}

TPoly ZinMap::apply(const TensorPoly& x) const {
  TPoly out;
  for (auto& [w, c] : x.terms) {
    auto it = table.find(w);
    if (it == table.end()) continue;
    tpoly_add(out, it->second, c);
  }
  tpoly_trim(out);
  return out;
}

ZinMap extend_morphism(const DGZAPtr& src, const DGZAPtr& tgt, const std::map<int, TPoly>& gen) {
  ZinMap out{src, tgt, {}};
  for (auto& w : all_words(*src->U, src->N)) {
    auto it = gen.find(w.back());
    TPoly last = it == gen.end() ? TPoly{} : it->second;
    if (w.size() == 1) {
      tpoly_trim(last);
      out.table[w] = last;
    } else {
      Word pre(w.begin(), w.end() - 1);
      out.table[w] = tpoly_mul(out.table.at(pre), last, tgt->N);
    }
  }
  return out;
}

ZinMap extend_derivation(const ZinMap& phi, const std::map<int, TPoly>& gen) {
  ZinMap out{phi.src, phi.tgt, {}};
  const auto& U = *phi.src->U;
  const int N = phi.tgt->N;
  for (auto& w : all_words(U, phi.src->N)) {
    auto it = gen.find(w.back());
    TPoly last = it == gen.end() ? TPoly{} : it->second;
    if (w.size() == 1) {
      tpoly_trim(last);
      out.table[w] = last;
      continue;
    }
    Word pre(w.begin(), w.end() - 1);
    TPoly val = tpoly_mul(out.table.at(pre), phi.table.at({w.back()}), N);
    tpoly_add(val, tpoly_mul(phi.table.at(pre), last, N), parity_sign(word_degree(U, pre)));
    tpoly_trim(val);
    out.table[w] = val;
  }
  return out;
}

Report concordance_check(const Concordance& c) {
  Report r;
  const auto& src = *c.phi.src;
  const auto& tgt = *c.phi.tgt;
  const auto& U = src.U;
  const int N = src.N;
  auto dt = [&](const TPoly& p) {
    return tpoly_map(p, [&](const TensorPoly& x) { return tgt.d(x); });
  };
  auto words = all_words(*U, N);
  for (auto& w : words) {
    std::string ws = word_str(*U, w);
    TensorPoly x = single(U, w);
    TPoly phw = c.phi.apply(x);
    // phi(t) commutes with d.
    compare_tpoly(r, "concordance.chain", ws, dt(phw), c.phi.apply(src.d(x)));
    // d_t phi = d rho + rho d.
    TPoly rhs = dt(c.rho.apply(x));
    tpoly_add(rhs, c.rho.apply(src.d(x)));
    compare_tpoly(r, "concordance.flow", ws, tpoly_derivative(phw), rhs);
    compare_tpoly(r, "concordance.endpoints", ws + "@0",
                  TPoly{tpoly_eval(phw, 0, tgt.U)}, TPoly{tpoly_eval(c.p.apply(x), 0, tgt.U)});
    compare_tpoly(r, "concordance.endpoints", ws + "@1",
                  TPoly{tpoly_eval(phw, 1, tgt.U)}, TPoly{tpoly_eval(c.q.apply(x), 0, tgt.U)});
  }
  for (auto& u : words)
    for (auto& v : words) {
      if (static_cast<int>(u.size() + v.size()) > N) continue;
      std::string ws = word_str(*U, u) + "." + word_str(*U, v);
      TensorPoly uv = zin_product(U, u, v, N);
      TPoly pu = c.phi.apply(single(U, u)), pv = c.phi.apply(single(U, v));
      compare_tpoly(r, "concordance.multiplicative", ws, c.phi.apply(uv),
                    tpoly_mul(pu, pv, tgt.N));
      TPoly rhs = tpoly_mul(c.rho.apply(single(U, u)), pv, tgt.N);
      tpoly_add(rhs, tpoly_mul(pu, c.rho.apply(single(U, v)), tgt.N),
                parity_sign(word_degree(*U, u)));
      compare_tpoly(r, "concordance.derivation", ws, c.rho.apply(uv), rhs);
    }
  return r;
}

ZinMap compose(const ZinMap& first, const ZinMap& second) {
  if (first.tgt->name != second.src->name) throw Error("concordance maps are not composable");
  ZinMap out{first.src, second.tgt, {}};
  for (auto& [w, p] : first.table) {
    TPoly val;
    for (size_t k = 0; k < p.size(); ++k) {
      TPoly img = second.apply(p[k]);
      TPoly shifted(k);
      for (auto& x : shifted) x = TensorPoly(second.tgt->U);
      shifted.insert(shifted.end(), img.begin(), img.end());
      tpoly_add(val, shifted);
    }
    tpoly_trim(val);
    out.table[w] = val;
  }
  return out;
}

Concordance concordance_hcompose(const Concordance& c, const Concordance& c2) {
  if (c.phi.tgt->name != c2.phi.src->name)
    throw Error("concordances are not composable");
  ZinMap rho = compose(c.rho, c2.phi);
  ZinMap other = compose(c.phi, c2.rho);
  for (auto& [w, p] : other.table) {
    tpoly_add(rho.table[w], p);
    tpoly_trim(rho.table[w]);
  }
  return Concordance{compose(c.phi, c2.phi), rho, compose(c.p, c2.p), compose(c.q, c2.q)};
}

}  // namespace lh
