#ifndef LH_TESTS_SUPPORT_HPP
#define LH_TESTS_SUPPORT_HPP

// Random 2-term data shared by the unit and acceptance tests.

#include <algorithm>
#include <numeric>
#include <random>
#include <string>

#include "lh/leibniz.hpp"

namespace lh::testing {

struct Rng {
  std::mt19937 gen;
  explicit Rng(unsigned seed) : gen(seed) {}
  int uniform(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }
  bool coin(int one_in = 2) { return uniform(0, one_in - 1) == 0; }
  /// Small rational: integers in [-2, 2], occasionally halves.
  Scalar scalar();
  Scalar nonzero();
};

/// Random vector of degree d (may be zero).
Vector random_vector(Rng& rng, const SpacePtr& S, int d, int density = 2);
/// Random map of the given arity/degree on all basis tuples.
GradedMultilinearMap random_map(Rng& rng, const SpacePtr& src, const SpacePtr& tgt, int arity,
                                int degree, int density = 2);

/// V_0 = C + Z, V_1; l_2 : C x C -> Z, l_1 : V_1 -> Z, l_3 : C^3 -> ker l_1.
AlgebraPtr random_seed_2term(Rng& rng, const std::string& name, int dimC, int dimZ, int dim1);

/// Transport of A along (f_1, f_2) with f_1 invertible; returns the morphism A -> B.
InftyMorphism pushforward(const AlgebraPtr& A, const GradedMultilinearMap& f1,
                          const GradedMultilinearMap& f2, const std::string& name);
/// Invertible degree-preserving f_1 and random f_2 on V_0 x V_0.
std::pair<GradedMultilinearMap, GradedMultilinearMap> random_iso_data(Rng& rng, const SpacePtr& V,
                                                                      const SpacePtr& W);
/// Random 2-term algebra: a random seed transported along a random isomorphism.
AlgebraPtr random_2term(Rng& rng, const std::string& name, int dimC = 1, int dimZ = 1,
                        int dim1 = 1);
/// Random isomorphism out of A (the target is a new algebra).
InftyMorphism random_morphism_from(Rng& rng, const AlgebraPtr& A, const std::string& name);

/// g determined by f and a random theta through the homotopy relations.
Homotopy2Term random_homotopy(Rng& rng, const std::shared_ptr<const InftyMorphism>& f);
/// Homotopy from f to the morphism defined by theta.
Homotopy2Term homotopy_with(const std::shared_ptr<const InftyMorphism>& f,
                            const GradedMultilinearMap& theta);

/// Random degree-0 element of g (x) Omega(Delta^n) vanishing at vertex i, supported on a few labels.
FormValued random_beta(Rng& rng, const LInftyAlgebra& g, int n, int i, int labels = 3);

struct CommandResult {
  int status = -1;
  std::string out;  // standard output only
};
/// Run a shell command, capturing standard output and the exit status.
CommandResult run_command(const std::string& cmd);

/// Copy of A with one structure constant of l_k changed by +1 on a basis tuple.
AlgebraPtr perturb_algebra(Rng& rng, const AlgebraPtr& A, int k);
/// Copy of A with l_3 changed by phi(x)phi(y)phi(z) k, k in ker l_1 and phi vanishing on
/// im l_1; this leaves the first four 2-term relations intact. nullptr if no such k, phi.
AlgebraPtr perturb_l3_in_kernel(Rng& rng, const AlgebraPtr& A);
InftyMorphism perturb_morphism(Rng& rng, const InftyMorphism& f, int k);

}  // namespace lh::testing

#endif
