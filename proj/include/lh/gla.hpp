#ifndef LH_GLA_HPP
#define LH_GLA_HPP

// Graded linear algebra over Q: spaces with labelled homogeneous bases,
// finitely supported vectors, permutations/shuffles with Koszul signs and
// multilinear maps given by structure constants.

#include <gmpxx.h>

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lh {

using Scalar = mpq_class;

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parse "p/q" or "p" into a canonical rational. Throws Error on junk or q = 0.
Scalar parse_scalar(const std::string& s);
std::string to_string(const Scalar& q);

inline int parity_sign(long e) { return (e % 2 == 0) ? 1 : -1; }

class GradedVectorSpace {
 public:
  GradedVectorSpace() = default;
  GradedVectorSpace(std::string name, std::vector<std::pair<std::string, int>> basis);

  const std::string& name() const { return name_; }
  int dim() const { return static_cast<int>(basis_.size()); }
  const std::string& label(int i) const { return basis_.at(i).first; }
  int degree(int i) const { return basis_.at(i).second; }
  int index(const std::string& label) const;  // throws on unknown label
  bool has(const std::string& label) const { return index_.count(label) != 0; }
  const std::vector<std::pair<std::string, int>>& basis() const { return basis_; }

 private:
  std::string name_;
  std::vector<std::pair<std::string, int>> basis_;
  std::map<std::string, int> index_;
};

using SpacePtr = std::shared_ptr<const GradedVectorSpace>;

SpacePtr make_space(std::string name, std::vector<std::pair<std::string, int>> basis);

/// Finitely supported vector; coefficients keyed by basis index.
class Vector {
 public:
  Vector() = default;
  explicit Vector(SpacePtr space) : space_(std::move(space)) {}
  static Vector basis(SpacePtr space, int i, Scalar c = 1);
  static Vector basis(SpacePtr space, const std::string& label, Scalar c = 1);

  const SpacePtr& space() const { return space_; }
  const std::map<int, Scalar>& terms() const { return c_; }
  Scalar coeff(int i) const;
  Scalar coeff(const std::string& label) const;
  bool is_zero() const { return c_.empty(); }

  void add(int i, const Scalar& c);
  Vector& operator+=(const Vector& o);
  Vector& operator-=(const Vector& o);
  Vector& operator*=(const Scalar& a);
  Vector operator+(const Vector& o) const { Vector r = *this; r += o; return r; }
  Vector operator-(const Vector& o) const { Vector r = *this; r -= o; return r; }
  Vector operator-() const { Vector r = *this; r *= -1; return r; }
  friend Vector operator*(const Scalar& a, Vector v) { v *= a; return v; }
  bool operator==(const Vector& o) const { return c_ == o.c_; }
  bool operator!=(const Vector& o) const { return !(*this == o); }

  /// True if all supported labels share one degree (zero counts as homogeneous).
  bool homogeneous() const;
  /// Degree of a nonzero homogeneous vector; throws otherwise.
  int degree() const;
  /// Split into homogeneous components.
  std::map<int, Vector> by_degree() const;

  std::string str() const;

 private:
  SpacePtr space_;
  std::map<int, Scalar> c_;
};

/// Permutation of {0..n-1}; image[k] is sigma(k+1)-1 in 1-based notation.
struct Permutation {
  std::vector<int> image;

  int size() const { return static_cast<int>(image.size()); }
  int operator()(int k) const { return image[k]; }
  Permutation inverse() const;
  Permutation compose(const Permutation& tau) const;  // (this o tau)(k) = this(tau(k))
  int sign() const;
  static Permutation identity(int n);
  bool operator==(const Permutation& o) const { return image == o.image; }
  bool operator<(const Permutation& o) const { return image < o.image; }
};

/// Sh(p,q): increasing on positions [0,p) and [p,p+q).
std::vector<Permutation> shuffles(int p, int q);
/// Sh(k1,...,ki), unfiltered.
std::vector<Permutation> multi_shuffles(const std::vector<int>& k);
/// Block-end images increasing as well.
std::vector<Permutation> filtered_shuffles(const std::vector<int>& k);

/// Koszul sign eps(sigma) defined by x_{sigma(1)}...x_{sigma(n)} = eps * x_1...x_n in
/// the free graded commutative algebra; degrees[i] is the degree of x_{i+1}.
int koszul_sign(const Permutation& sigma, const std::vector<int>& degrees);

/// Arity-p map V^{(x)p} -> W of fixed degree, stored by basis tuples.
class GradedMultilinearMap {
 public:
  GradedMultilinearMap() = default;
  GradedMultilinearMap(SpacePtr source, SpacePtr target, int arity, int degree);

  const SpacePtr& source() const { return src_; }
  const SpacePtr& target() const { return tgt_; }
  int arity() const { return arity_; }
  int degree() const { return degree_; }
  const std::map<std::vector<int>, Vector>& coeffs() const { return coeffs_; }

  /// Set the value on a basis tuple; rejects degree-violating values.
  void set(const std::vector<int>& args, const Vector& value);
  void set(const std::vector<std::string>& args, const Vector& value);
  void add(const std::vector<int>& args, const Vector& value);
  Vector at(const std::vector<int>& args) const;
  bool is_zero() const { return coeffs_.empty(); }

  GradedMultilinearMap operator+(const GradedMultilinearMap& o) const;
  GradedMultilinearMap operator-(const GradedMultilinearMap& o) const;
  GradedMultilinearMap scaled(const Scalar& a) const;
  bool operator==(const GradedMultilinearMap& o) const { return coeffs_ == o.coeffs_; }

 private:
  SpacePtr src_, tgt_;
  int arity_ = 1;
  int degree_ = 0;
  std::map<std::vector<int>, Vector> coeffs_;
};

/// Multilinear extension of the structure constants (no signs: scalars are even).
Vector eval_map(const GradedMultilinearMap& F, const std::vector<Vector>& args);

/// Copy of V with every degree shifted by `shift`; labels unchanged.
SpacePtr suspend(const SpacePtr& V, int shift);

/// Transport F : V^p -> W to D = s^k o F o (s^k)^{(x)p, -1} on the k-fold suspensions,
/// i.e. F = s^{-k} D (s^k)^{(x)p} -- for k = 1 this is l_i = s^{-1} D_i s^i.
GradedMultilinearMap transport(const GradedMultilinearMap& F, const SpacePtr& sV,
                               const SpacePtr& sW, int shift);
/// Inverse of transport: recover F from D on the suspended spaces.
GradedMultilinearMap transport_back(const GradedMultilinearMap& D, const SpacePtr& V,
                                    const SpacePtr& W, int shift);

}  // namespace lh

#endif
