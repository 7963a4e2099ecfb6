#ifndef LH_ZINBIEL_HPP
#define LH_ZINBIEL_HPP

// Free Zinbiel algebra / cofree Zinbiel coalgebra on the reduced tensor module,
// truncated at a declared word length.

#include <array>
#include <map>
#include <vector>

#include "lh/gla.hpp"
#include "lh/report.hpp"

namespace lh {

using Word = std::vector<int>;  // letters are basis indices of one space

int word_degree(const GradedVectorSpace& V, const Word& w);
std::string word_str(const GradedVectorSpace& V, const Word& w);

struct TensorPoly {
  SpacePtr space;
  std::map<Word, Scalar> terms;

  TensorPoly() = default;
  explicit TensorPoly(SpacePtr s) : space(std::move(s)) {}
  void add(const Word& w, const Scalar& c);
  TensorPoly& operator+=(const TensorPoly& o);
  TensorPoly& operator-=(const TensorPoly& o);
  TensorPoly operator*(const Scalar& a) const;
  bool is_zero() const { return terms.empty(); }
  bool operator==(const TensorPoly& o) const { return terms == o.terms; }
  std::string str() const;
};

/// Elements of T(V)^{(x)2} and T(V)^{(x)3}.
using Tensor2 = std::map<std::array<Word, 2>, Scalar>;
using Tensor3 = std::map<std::array<Word, 3>, Scalar>;

/// All words of length 1..N over the basis of V, in length-lexicographic order.
std::vector<Word> all_words(const GradedVectorSpace& V, int N);

/// (v_1..v_p).(v_{p+1}..v_{p+q}); throws Error when p+q exceeds N.
TensorPoly zin_product(const SpacePtr& V, const Word& w1, const Word& w2, int N);
TensorPoly zin_product(const TensorPoly& a, const TensorPoly& b, int N);

struct CoproductTerm {
  Word left, right;
  Scalar coeff;
};
std::vector<CoproductTerm> zin_coproduct(const GradedVectorSpace& V, const Word& w);

struct IteratedTerm {
  std::vector<Word> parts;
  Scalar coeff;
};
/// Left-iterated coproduct (Delta (x) id^{p-2}) ... (Delta (x) id) Delta; p = 1 gives w.
std::vector<IteratedTerm> iterated_coproduct(const GradedVectorSpace& V, const Word& w, int p);

/// A coderivation of Zin^c(V) given by its corestrictions D_i : V^{(x)i} -> V.
struct Coderivation {
  SpacePtr space;
  std::map<int, GradedMultilinearMap> parts;  // keyed by arity
  int degree = -1;
  int N = 4;
};

TensorPoly coderivation_extend(const Coderivation& D, const Word& w);
TensorPoly coderivation_apply(const Coderivation& D, const TensorPoly& x);

/// Compare Delta D(w) with (D (x) id + id (x) D) Delta(w) on every word of length <= N.
Report coderivation_compatibility(const Coderivation& D);

/// D o D = 0 on all basis words up to the truncation length.
Report coderivation_square_check(const Coderivation& D);

/// u.(v.w) = (u.v).w + (-1)^{|u||v|} (v.u).w on the given triples.
Report check_zinbiel_relation(const SpacePtr& V, const std::vector<std::array<Word, 3>>& samples,
                              int N);
/// (id (x) Delta)Delta = (Delta (x) id)Delta + (tau (x) id)(Delta (x) id)Delta on all words <= N.
Report check_cozinbiel_relation(const SpacePtr& V, int N);

/// Coalgebra map F : Zin^c(V) -> Zin^c(W) coextending the degree-0 corestrictions f_k.
struct CoalgebraMorphism {
  SpacePtr source, target;
  std::map<int, GradedMultilinearMap> parts;  // f_k : V^{(x)k} -> W, degree 0
  int N = 4;
};

TensorPoly coextend(const CoalgebraMorphism& F, const Word& w);
TensorPoly coextend_apply(const CoalgebraMorphism& F, const TensorPoly& x);
/// Corestrictions of G o F up to length N.
CoalgebraMorphism compose(const CoalgebraMorphism& F, const CoalgebraMorphism& G);
/// Delta F = (F (x) F) Delta on all words of length <= N.
Report check_coalgebra_morphism(const CoalgebraMorphism& F);
/// D_W F = F D_V on all words of length <= N.
Report check_chain_map(const CoalgebraMorphism& F, const Coderivation& DV, const Coderivation& DW);

Tensor2 apply_coproduct(const TensorPoly& x);

}  // namespace lh

#endif
