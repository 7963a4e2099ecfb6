#ifndef LH_LEIBNIZ_HPP
#define LH_LEIBNIZ_HPP

// Leibniz-infinity algebras and their infinity morphisms, the convolution
// L-infinity algebra Hom(Zin^c(sV), W), 2-term homotopies and concordances.

#include <algorithm>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "lh/gla.hpp"
#include "lh/linfty.hpp"
#include "lh/report.hpp"
#include "lh/zinbiel.hpp"

namespace lh {

struct LeibnizInftyAlgebra {
  std::string name;
  SpacePtr V;
  std::map<int, GradedMultilinearMap> l;  // l_i of degree i - 2

  LeibnizInftyAlgebra() = default;
  LeibnizInftyAlgebra(std::string n, SpacePtr v, std::map<int, GradedMultilinearMap> ops);
  int max_arity() const { return l.empty() ? 0 : l.rbegin()->first; }
  Vector op(int i, const std::vector<Vector>& args) const;
  /// Coderivation D on Zin^c(sV) with l_i = s^{-1} D_i s^{(x)i}.
  Coderivation coderivation(int N) const;
  /// Degrees concentrated in {0, 1} with l_i = 0 for i > 3.
  bool is_two_term() const;
  std::vector<int> basis_of_degree(int d) const;
  const SpacePtr& suspended() const { return sV; }

 private:
  SpacePtr sV;
};
using AlgebraPtr = std::shared_ptr<const LeibnizInftyAlgebra>;

/// Left side of the higher Jacobi identity on one basis tuple.
Vector jacobi_residual(const LeibnizInftyAlgebra& A, const std::vector<int>& tuple);
Report check_jacobi(const LeibnizInftyAlgebra& A, int up_to_arity);
/// D o D = 0 on all words of length <= N.
Report check_codifferential(const LeibnizInftyAlgebra& A, int N);
/// Relations (a)-(e) of a 2-term Leibniz-infinity algebra, named "2term(a)" ...
Report check_2term_axioms(const LeibnizInftyAlgebra& A);

struct InftyMorphism {
  AlgebraPtr source, target;
  std::map<int, GradedMultilinearMap> phi;  // phi_i of degree i - 1

  Vector component(int i, const std::vector<Vector>& args) const;
  CoalgebraMorphism coalgebra(int N) const;
  static InftyMorphism identity(const AlgebraPtr& A);
};

Vector morphism_residual(const InftyMorphism& f, const std::vector<int>& tuple);
/// Morphism identity on all basis tuples up to the arity; 2-term pairs also get "morphism(a)"-"(d)".
Report check_morphism(const InftyMorphism& f, int up_to_arity);
Report check_morphism_chain_map(const InftyMorphism& f, int N);
Report check_2term_morphism(const InftyMorphism& f);
/// psi o phi via the coalgebra picture, truncated at the arity bound.
InftyMorphism compose_morphisms(const InftyMorphism& phi, const InftyMorphism& psi, int up_to_arity);

/// Convolution L-infinity algebra L(V, W) = Hom(Zin^c(sV), W) on words of length <= N.
/// Basis element "[x|y]>w" is the map sending the word sx.sy to w.
class ConvolutionAlgebra : public LInftyAlgebra {
 public:
  ConvolutionAlgebra(AlgebraPtr V, AlgebraPtr W, int N = 3);
  const SpacePtr& space() const override { return L_; }
  int max_arity() const override { return std::max(1, W_->max_arity()); }
  const AlgebraPtr& source() const { return V_; }
  const AlgebraPtr& target() const { return W_; }
  int truncation() const { return N_; }

  int index(const Word& w, int wlabel) const;
  const Word& word_of(int i) const { return words_[key_[i].first]; }
  int wlabel_of(int i) const { return key_[i].second; }
  /// Values of f on every word of its support.
  std::map<Word, Vector> decode(const Vector& f) const;
  Vector encode(const std::map<Word, Vector>& values) const;

 protected:
  Vector bracket_homogeneous(int k, const std::vector<Vector>& args) const override;

 private:
  AlgebraPtr V_, W_;
  int N_;
  SpacePtr sV_, sW_, L_;
  Coderivation D_;
  std::vector<Word> words_;
  std::map<Word, int> word_index_;
  std::vector<std::pair<int, int>> key_;  // basis index -> (word index, W label)
  std::map<std::pair<int, int>, int> index_;
  mutable std::map<std::pair<int, int>, std::vector<IteratedTerm>> coproducts_;
  mutable std::map<int, TensorPoly> differentials_;
  const std::vector<IteratedTerm>& coproduct(int word, int p) const;
  const TensorPoly& differential(int word) const;
};

/// alpha(phi)_k = s^{-1} o (corestriction of the coalgebra map): an element of degree -1.
Vector morphism_to_mc(const ConvolutionAlgebra& L, const InftyMorphism& f);
InftyMorphism mc_to_morphism(const ConvolutionAlgebra& L, const Vector& alpha);
/// mc_residual(alpha(phi)) = 0 <=> morphism identity, and the reconstruction round trip.
Report morphism_mc_roundtrip(const ConvolutionAlgebra& L, const InftyMorphism& f);

/// 2-term infinity homotopy theta_1 : f => g, theta_1 : V_0 -> W_1 of degree 1.
struct Homotopy2Term {
  std::shared_ptr<const InftyMorphism> f, g;
  GradedMultilinearMap theta;  // arity 1, degree 1

  Vector apply(const Vector& x) const { return eval_map(theta, {x}); }
};

Report homotopy_check(const Homotopy2Term& h);
/// beta = theta_1 s^{-1} as an element of L_0.
Vector homotopy_to_conv(const ConvolutionAlgebra& L, const GradedMultilinearMap& theta);
GradedMultilinearMap conv_to_homotopy(const ConvolutionAlgebra& L, const Vector& beta);

/// S_1^i: theta_1 = (beta(1) - beta(0)) s with beta = h^i alpha.
Homotopy2Term homotopy_project(const ConvolutionAlgebra& L, const FormValued& alpha, int i,
                               std::shared_ptr<const InftyMorphism> f,
                               std::shared_ptr<const InftyMorphism> g);
FormValued homotopy_lift(const ConvolutionAlgebra& L, const Homotopy2Term& h, int i);
/// Closed form mu + (delta + d) beta + L_2(mu, beta) + 1/2 L_2(delta beta, beta) of the
/// vertex-0 lift, brackets in Getzler's convention.
FormValued homotopy_closed_form(const ConvolutionAlgebra& L, const Vector& mu, const FormValued& beta);

Homotopy2Term vertical_compose(const Homotopy2Term& theta, const Homotopy2Term& tau);
/// Kan path: project(horn_fill2(lift(theta, 1), lift(tau, 0)), 0).
Homotopy2Term vertical_compose_via_kan(const ConvolutionAlgebra& L, const Homotopy2Term& theta,
                                       const Homotopy2Term& tau, const HornExtension& ext = {});
/// g'_1 theta_1 + tau_1 f_1; throws if f'_1 theta_1 + tau_1 g_1 differs.
Homotopy2Term horizontal_compose(const Homotopy2Term& theta, const Homotopy2Term& tau);

// ---------------------------------------------------------------------------
// Concordances between morphisms of quasi-free DG Zinbiel algebras (dual picture).

/// t-polynomial with tensor coefficients (index = power of t).
using TPoly = std::vector<TensorPoly>;

struct DGZA {
  std::string name;
  SpacePtr U;                       // generators
  std::map<int, TensorPoly> dgen;   // d on generators, degree -1
  int N = 3;                        // words longer than N are discarded
  TensorPoly d(const TensorPoly& x) const;
};
using DGZAPtr = std::shared_ptr<const DGZA>;

/// Product in Zin(U) dropping words longer than N.
TensorPoly zin_product_trunc(const TensorPoly& a, const TensorPoly& b, int N);

/// Map Zin(src) -> Zin(tgt) tabulated on every word of length <= N.
struct ZinMap {
  DGZAPtr src, tgt;
  std::map<Word, TPoly> table;
  TPoly apply(const TensorPoly& x) const;
};

/// Multiplicative extension of generator images (a DGA morphism when it commutes with d).
ZinMap extend_morphism(const DGZAPtr& src, const DGZAPtr& tgt, const std::map<int, TPoly>& gen);
/// phi-Leibniz extension rho(w.w') = rho(w).phi(w') + (-1)^{|w|} phi(w).rho(w').
ZinMap extend_derivation(const ZinMap& phi, const std::map<int, TPoly>& gen);

struct Concordance {
  ZinMap phi, rho;
  ZinMap p, q;
};

Report concordance_check(const Concordance& c);
/// (phi' o phi, phi' o rho + rho' o phi) for c : Zin(A) -> Zin(B), c' : Zin(B) -> Zin(C).
Concordance concordance_hcompose(const Concordance& c, const Concordance& c2);
ZinMap compose(const ZinMap& first, const ZinMap& second);

}  // namespace lh

#endif
