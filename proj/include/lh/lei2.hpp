#ifndef LH_LEI2_HPP
#define LH_LEI2_HPP

// Leibniz 2-algebras as linear categories: objects V_0, an arrow x -> x + l_1 h is the
// pair (x, h). Coherence diagrams are evaluated as composite arrows.

#include <memory>
#include <string>
#include <vector>

#include "lh/leibniz.hpp"

namespace lh {

struct Arrow {
  Vector source;  // in V_0
  Vector body;    // in V_1
  bool operator==(const Arrow& o) const { return source == o.source && body == o.body; }
};

struct Leibniz2Algebra {
  std::string name;
  SpacePtr V;                     // objects V_0, arrow bodies V_1
  GradedMultilinearMap t;         // target shift, V_1 -> V_0
  GradedMultilinearMap bracket;   // on objects and arrows
  GradedMultilinearMap jacobiator;  // J_{x,y,z} has body -jacobiator(x, y, z)

  Vector target(const Arrow& a) const;
  Arrow identity(const Vector& x) const;
  /// b o a; throws unless target(a) = source(b).
  Arrow compose(const Arrow& a, const Arrow& b) const;
  Arrow add(const Arrow& a, const Arrow& b) const;
  /// Bracket functor on arrows.
  Arrow bracket_arrows(const Arrow& a, const Arrow& b) const;
  Vector bracket_objects(const Vector& x, const Vector& y) const;
  /// J_{x,y,z} : [x,[y,z]] -> [[x,y],z] + [y,[x,z]].
  Arrow J(const Vector& x, const Vector& y, const Vector& z) const;
};
using Lei2Ptr = std::shared_ptr<const Leibniz2Algebra>;

/// Throws unless A is a valid 2-term algebra.
Leibniz2Algebra to_lei2(const LeibnizInftyAlgebra& A);
LeibnizInftyAlgebra from_lei2(const Leibniz2Algebra& B);

/// Composite of a path: every step is padded by identities so that it starts where the
/// previous one ended.
Arrow compose_path(const Leibniz2Algebra& B, const Vector& start, const std::vector<Arrow>& steps);

/// Both paths of the Jacobiator coherence on every basis 4-tuple of V_0.
Report check_jacobiator(const Leibniz2Algebra& B);

struct Leibniz2Morphism {
  Lei2Ptr source, target;
  GradedMultilinearMap f1;  // functor on objects and arrow bodies
  GradedMultilinearMap f2;  // F_{x,y} : [f1 x, f1 y] -> f1 [x,y] has body f2(x, y)

  Arrow apply(const Arrow& a) const;
  Arrow F(const Vector& x, const Vector& y) const;
};

Leibniz2Morphism to_lei2(const InftyMorphism& f, Lei2Ptr source, Lei2Ptr target);
Report check_morphism_diagram(const Leibniz2Morphism& F);
/// (F' o F)_{x,y} = F'(F_{x,y}) o F'_{f1 x, f1 y}.
Leibniz2Morphism compose(const Leibniz2Morphism& F, const Leibniz2Morphism& G);

/// 2-morphism F => G with components theta_x : f1 x -> g1 x.
struct Leibniz2Transformation {
  std::shared_ptr<const Leibniz2Morphism> F, G;
  GradedMultilinearMap theta;

  Arrow component(const Vector& x) const;
};

Leibniz2Transformation to_lei2(const Homotopy2Term& h, Lei2Ptr source, Lei2Ptr target);
/// Naturality square G_{x,y} o [theta_x, theta_y] = theta_{[x,y]} o F_{x,y}.
Report check_2morphism_diagram(const Leibniz2Transformation& T);

/// Componentwise composite tau_x o theta_x.
Leibniz2Transformation vertical_compose(const Leibniz2Transformation& theta,
                                        const Leibniz2Transformation& tau);
/// Whiskered composite tau_{G x} o F'(theta_x); throws if G'(theta_x) o tau_{F x} differs.
Leibniz2Transformation horizontal_compose(const Leibniz2Transformation& theta,
                                          const Leibniz2Transformation& tau);

}  // namespace lh

#endif
