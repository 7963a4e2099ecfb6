#ifndef LH_FORMS_HPP
#define LH_FORMS_HPP

// Polynomial differential forms on the standard simplex Delta^n in the affine
// coordinates t_1..t_n (t_0 = 1 - sum t_i eliminated).

#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "lh/gla.hpp"
#include "lh/report.hpp"

namespace lh {

struct FormKey {
  std::vector<int> exps;  // exponents of t_1..t_n
  unsigned dts = 0;       // bit k-1 set <=> dt_k present (sorted wedge)
  bool operator<(const FormKey& o) const {
    return dts != o.dts ? dts < o.dts : exps < o.exps;
  }
  bool operator==(const FormKey& o) const { return dts == o.dts && exps == o.exps; }
};

int popcount(unsigned m);

class PolyForm {
 public:
  PolyForm() = default;
  explicit PolyForm(int n) : n_(n) {}

  static PolyForm constant(int n, const Scalar& c);
  /// Barycentric coordinate t_i, 0 <= i <= n.
  static PolyForm coord(int n, int i);
  static PolyForm monomial(int n, const std::vector<int>& exps, unsigned dts, const Scalar& c);

  int dim() const { return n_; }
  const std::map<FormKey, Scalar>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  void add(const FormKey& k, const Scalar& c);

  PolyForm& operator+=(const PolyForm& o);
  PolyForm& operator-=(const PolyForm& o);
  PolyForm& operator*=(const Scalar& a);
  PolyForm operator+(const PolyForm& o) const { PolyForm r = *this; r += o; return r; }
  PolyForm operator-(const PolyForm& o) const { PolyForm r = *this; r -= o; return r; }
  PolyForm operator-() const { PolyForm r = *this; r *= -1; return r; }
  friend PolyForm operator*(const Scalar& a, PolyForm w) { w *= a; return w; }
  bool operator==(const PolyForm& o) const { return n_ == o.n_ && terms_ == o.terms_; }
  bool operator!=(const PolyForm& o) const { return !(*this == o); }

  /// Component of form degree q.
  PolyForm part(int q) const;
  /// Largest total polynomial degree among the terms (-1 for zero).
  int poly_degree() const;
  std::string str() const;

 private:
  int n_ = 0;
  std::map<FormKey, Scalar> terms_;
};

PolyForm derham_d(const PolyForm& w);
PolyForm wedge(const PolyForm& a, const PolyForm& b);
/// Sign and key of a single monomial product; sign 0 when dt's collide.
int wedge_keys(const FormKey& a, const FormKey& b, FormKey& out);

/// Order-respecting map [m] -> [n] given by its image list.
struct OrderMap {
  int m = 0, n = 0;
  std::vector<int> image;
};
OrderMap face_map(int n, int i);        // delta_n^i : [n-1] -> [n], omits i
OrderMap degeneracy_map(int n, int i);  // sigma_n^i : [n+1] -> [n], repeats i
OrderMap compose(const OrderMap& g, const OrderMap& f);  // g o f

/// Substitution homomorphism: t_k -> images[k-1] (0-forms on Delta^m), dt_k -> d(images[k-1]).
PolyForm substitute(const PolyForm& w, const std::vector<PolyForm>& images, int m);
PolyForm pullback(const OrderMap& f, const PolyForm& w);
/// Pullback along the affine automorphism sending vertex e_j to e_{perm[j]}.
PolyForm vertex_permutation_pullback(const PolyForm& w, const std::vector<int>& perm);

Scalar evaluate_vertex(const PolyForm& w, int i);
/// Getzler's contraction h_n^i (integration along u -> u t + (1-u) e_i).
PolyForm contraction_h(const PolyForm& w, int i);

/// Polynomial form on Delta^2 restricting to b0 on edge 12, b1 on edge 02 and b2 on edge 01.
/// `order` lists the vertices projected from, one per step (default: 2, 0, 1);
/// `pad` raises the homogenising degree, giving a different extension.
PolyForm renshaw_extend2(const PolyForm& b0, const PolyForm& b1, const PolyForm& b2,
                         const std::vector<int>& order = {2, 0, 1}, int pad = 0);
/// Restriction to the edge opposite vertex i (edge 12 for i = 0, 02 for i = 1, 01 for i = 2).
PolyForm restrict_edge(const PolyForm& w, int opposite);

/// Random form with a few monomials of coefficient degree <= max_degree.
PolyForm random_form(std::mt19937& rng, int n, int max_degree, int terms = 4);
/// {d, h^i} = id - eps^i, {h^i, h^j} = 0 and eps^i h^i = 0 for all vertices i, j.
Report check_contraction_identities(const PolyForm& w);

/// "c * t1^a t2^b dt{I}" serialization and its inverse.
PolyForm parse_form(const std::string& s, int n);

}  // namespace lh

#endif
