#ifndef LH_LINFTY_HPP
#define LH_LINFTY_HPP

// L-infinity algebras, Maurer-Cartan calculus, gauge flows and the simplicial
// MC sets MC_n = MC(g (x) Omega(Delta^n)) with Getzler's bijections B_n^i.

#include <functional>
#include <map>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "lh/forms.hpp"
#include "lh/gla.hpp"
#include "lh/report.hpp"

namespace lh {

enum class Convention { LadaStasheff, Getzler };
enum class Grading { Homological, Cohomological };

/// l^G_k = convention_sign(LS, k) l^LS_k; 1 for Getzler.
int convention_sign(Convention c, int k);
std::string to_string(Convention c);
Convention parse_convention(const std::string& s);

class LInftyAlgebra {
 public:
  LInftyAlgebra(Convention c, Grading g, int nilpotency)
      : conv_(c), grading_(g), nil_(nilpotency) {}
  virtual ~LInftyAlgebra() = default;

  virtual const SpacePtr& space() const = 0;
  virtual int max_arity() const = 0;

  /// l_k in the native convention; arguments may be inhomogeneous.
  Vector bracket(int k, const std::vector<Vector>& args) const;
  /// Same bracket translated to Getzler's convention.
  Vector getzler_bracket(int k, const std::vector<Vector>& args) const;

  Convention convention() const { return conv_; }
  Grading grading() const { return grading_; }
  int nilpotency() const { return nil_; }
  /// +1 homological, -1 cohomological: l_k has degree gsign*(k-2), MC elements -gsign.
  int gsign() const { return grading_ == Grading::Homological ? 1 : -1; }
  int mc_degree() const { return -gsign(); }

 protected:
  virtual Vector bracket_homogeneous(int k, const std::vector<Vector>& args) const = 0;

 private:
  Convention conv_;
  Grading grading_;
  int nil_;
};

class ExplicitLInfty : public LInftyAlgebra {
 public:
  ExplicitLInfty(SpacePtr g, std::map<int, GradedMultilinearMap> l,
                 Convention c = Convention::LadaStasheff, Grading gr = Grading::Homological,
                 int nilpotency = 8);
  const SpacePtr& space() const override { return g_; }
  int max_arity() const override { return l_.empty() ? 0 : l_.rbegin()->first; }
  const std::map<int, GradedMultilinearMap>& brackets() const { return l_; }

 protected:
  Vector bracket_homogeneous(int k, const std::vector<Vector>& args) const override;

 private:
  SpacePtr g_;
  std::map<int, GradedMultilinearMap> l_;
};

/// Generic higher Jacobi check on sample elements (all n-tuples, n <= max_n).
template <class E>
struct BracketOps {
  std::function<E(int, const std::vector<E>&)> bracket;  // native convention
  std::function<int(const E&)> degree;
  std::function<bool(const E&)> is_zero;
  std::function<std::string(const E&)> str;
  std::function<E()> zero;
};

/// Higher Jacobi identities: sum over i+j=n+1 and unshuffles of c(i,j) chi(sigma)
/// l_j(l_i(..), ..), with c = (-1)^{i(j-1)} (Lada-Stasheff) or (-1)^i (Getzler).
template <class E>
Report jacobi_generic(const BracketOps<E>& ops, const std::vector<E>& samples, int max_n,
                      int max_arity, Convention conv) {
  Report rep;
  const int S = static_cast<int>(samples.size());
  if (S == 0) return rep;
  for (int n = 1; n <= max_n; ++n) {
    const std::string name = "Jacobi(" + std::to_string(n) + ")";
    rep.note(name);
    std::vector<std::vector<Permutation>> sh(n + 1);
    for (int i = 1; i <= n; ++i) sh[i] = shuffles(i, n - i);
    std::vector<int> idx(n, 0);
    while (true) {
      std::vector<int> degs;
      for (int a : idx) degs.push_back(ops.degree(samples[a]));
      E total = ops.zero();
      for (int i = 1; i <= n; ++i) {
        int j = n + 1 - i;
        if (i > max_arity || j > max_arity) continue;
        int c = conv == Convention::LadaStasheff ? parity_sign(long(i) * (j - 1)) : parity_sign(i);
        for (auto& s : sh[i]) {
          std::vector<E> inner;
          for (int a = 0; a < i; ++a) inner.push_back(samples[idx[s(a)]]);
          E in = ops.bracket(i, inner);
          if (ops.is_zero(in)) continue;
          std::vector<E> outer{in};
          for (int a = i; a < n; ++a) outer.push_back(samples[idx[s(a)]]);
          int sg = c * s.sign() * koszul_sign(s, degs);
          E val = ops.bracket(j, outer);
          val *= Scalar(sg);
          total += val;
        }
      }
      ++rep.checked;
      if (!ops.is_zero(total)) {
        Failure f{name, {}, ops.str(total), "0"};
        for (int a : idx) f.tuple.push_back(ops.str(samples[a]));
        rep.fail(std::move(f));
      }
      int p = n - 1;
      while (p >= 0 && ++idx[p] == S) idx[p--] = 0;
      if (p < 0) break;
    }
  }
  return rep;
}

/// All basis tuples up to arity max_n.
Report check_linfty_jacobi(const LInftyAlgebra& g, int max_n);
Report check_linfty_jacobi(const LInftyAlgebra& g, const std::vector<Vector>& samples, int max_n);
Report check_antisymmetry(const LInftyAlgebra& g, const std::vector<Vector>& samples);

Vector mc_residual(const LInftyAlgebra& g, const Vector& alpha);
/// Twisted brackets as explicit structure constants; throws unless alpha is MC.
ExplicitLInfty twist_brackets(const ExplicitLInfty& g, const Vector& alpha);

/// V_r(alpha) = -l_1^alpha(r) = -sum_k 1/k! l^G_{k+1}(alpha^k, r).
Vector gauge_field(const LInftyAlgebra& g, const Vector& r, const Vector& alpha);

/// Polynomials in t with vector coefficients (index = power of t).
using VecPoly = std::vector<Vector>;
VecPoly poly_derivative(const VecPoly& p);
Vector poly_eval(const VecPoly& p, const Scalar& t);
bool poly_is_zero(const VecPoly& p);
VecPoly mc_residual_poly(const LInftyAlgebra& g, const VecPoly& alpha);
VecPoly gauge_field_poly(const LInftyAlgebra& g, const Vector& r, const VecPoly& alpha);

/// e^0 = alpha, e^1, ..., e^K (trailing zeros dropped).
std::vector<Vector> gauge_flow_series(const LInftyAlgebra& g, const Vector& alpha, const Vector& r);
/// alpha(t) = sum_k t^k/k! e^k as a polynomial.
VecPoly gauge_flow_poly(const LInftyAlgebra& g, const Vector& alpha, const Vector& r);
Vector gauge_flow(const LInftyAlgebra& g, const Vector& alpha, const Vector& r, const Scalar& t);

/// Element of g (x) Omega(Delta^n): basis index of g -> polynomial form.
struct FormValued {
  int n = 0;
  SpacePtr space;
  std::map<int, PolyForm> comps;

  FormValued() = default;
  FormValued(SpacePtr s, int dim) : n(dim), space(std::move(s)) {}
  static FormValued tensor(const Vector& v, const PolyForm& a);
  static FormValued constant(const Vector& v, int n);

  void add(int label, const PolyForm& a);
  FormValued& operator+=(const FormValued& o);
  FormValued& operator-=(const FormValued& o);
  FormValued& operator*=(const Scalar& a);
  FormValued operator+(const FormValued& o) const { FormValued r = *this; r += o; return r; }
  FormValued operator-(const FormValued& o) const { FormValued r = *this; r -= o; return r; }
  FormValued operator-() const { FormValued r = *this; r *= -1; return r; }
  friend FormValued operator*(const Scalar& a, FormValued x) { x *= a; return x; }
  bool operator==(const FormValued& o) const;
  bool is_zero() const { return comps.empty(); }

  /// Coefficient vectors of each form monomial.
  std::map<FormKey, Vector> by_monomial() const;
  static FormValued from_monomials(const SpacePtr& s, int n, const std::map<FormKey, Vector>& m);
  /// Total degree |v| - gsign * q of a homogeneous element; throws otherwise.
  int degree(int gsign = 1) const;
  std::string str() const;
};

Vector evaluate_vertex(const FormValued& x, int i);
FormValued pullback(const OrderMap& f, const FormValued& x);
/// h(v (x) a) = (-1)^{|v|} v (x) h^i(a), so that {l_1 (x) 1 + 1 (x) d, h} = id - eps^i.
FormValued contraction_h(const FormValued& x, int i);
/// Restriction of a form on Delta^2 to the edge opposite a vertex.
FormValued restrict_edge(const FormValued& x, int opposite);

/// Brackets of g (x) Omega(Delta^n) in the native convention of g.
FormValued tensor_bracket(const LInftyAlgebra& g, int k, const std::vector<FormValued>& args);
FormValued extended_mc_residual(const LInftyAlgebra& g, const FormValued& alpha);
Report check_tensor_jacobi(const LInftyAlgebra& g, const std::vector<FormValued>& samples, int max_n);

/// B_n^i(alpha) = (eps^i alpha, (delta + d) h^i alpha).
std::pair<Vector, FormValued> b_forward(const LInftyAlgebra& g, const FormValued& alpha, int i);
/// Stabilised fixed point of alpha = mu + (delta + d) beta - h^i R(alpha).
FormValued b_inverse(const LInftyAlgebra& g, const Vector& mu, const FormValued& beta, int i,
                     int* iterations = nullptr);

/// How the horn data is extended over Delta^2.
struct HornExtension {
  std::vector<int> order{2, 0, 1};
  int pad = 0;
};
/// Fill the horn (alpha01, alpha12) and return the filler's restriction to edge 02.
FormValued horn_fill2(const LInftyAlgebra& g, const FormValued& alpha01, const FormValued& alpha12,
                      const HornExtension& ext = {}, FormValued* filler = nullptr);

/// gamma(t) (x) 1 + rho (x) dt with gamma the gauge flow; rho = -r in our sign conventions.
FormValued quillen_from_gauge(const LInftyAlgebra& g, const Vector& alpha, const Vector& r);

}  // namespace lh

#endif
