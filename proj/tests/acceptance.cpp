// Acceptance suite: one PASS/FAIL line per criterion; exit status 1 if any fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "lh/forms.hpp"
#include "lh/lei2.hpp"
#include "lh/leibniz.hpp"
#include "lh/linfty.hpp"
#include "lh/model.hpp"
#include "support.hpp"

using namespace lh;
using lh::testing::Rng;
using MorphismPtr = std::shared_ptr<const InftyMorphism>;

namespace {

std::string fixture(const std::string& name) { return std::string(LH_FIXTURE_DIR) + "/" + name; }

struct Verdict {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok && pass) detail << "first failure: " << what << "; ";
    pass = pass && ok;
  }
};

Vector sum_of_series(const std::vector<Vector>& e, const SpacePtr& S) {
  Vector tail(S);
  Scalar fact = 1;
  for (size_t k = 1; k < e.size(); ++k) {
    fact *= Scalar(static_cast<long>(k));
    tail += (Scalar(1) / fact) * e[k];
  }
  return tail;
}

// 1. Contraction identities.
void contraction(Verdict& v) {
  std::mt19937 rng(2024);
  int forms = 0;
  long checks = 0;
  for (int n = 1; n <= 3; ++n)
    for (int k = 0; k < 70; ++k) {
      Report r = check_contraction_identities(random_form(rng, n, 4, 5));
      v.require(r.pass, "n=" + std::to_string(n) + " form " + std::to_string(k));
      ++forms;
      checks += r.checked;
    }
  v.detail << forms << " forms, " << checks << " identities";
}

// 2. Jacobi <=> 2-term relations <=> D^2 = 0 at word length 4.
void encodings(Verdict& v) {
  Rng rng(101);
  int structures = 0, flipped = 0;
  for (int k = 0; k < 60; ++k) {
    int dimC = rng.uniform(1, 2), dimZ = rng.uniform(1, 3 - dimC), dim1 = rng.uniform(1, 3);
    auto A = lh::testing::random_2term(rng, "A", dimC, dimZ, dim1);
    bool j = check_jacobi(*A, 4).pass, t = check_2term_axioms(*A).pass, d = check_codifferential(*A, 4).pass;
    v.require(j && t && d, "valid structure " + std::to_string(k));
    ++structures;
    // paired perturbation: retry until one constant change breaks the structure
    for (int tries = 0; tries < 10; ++tries) {
      auto P = lh::testing::perturb_algebra(rng, A, rng.uniform(1, 3));
      bool pj = check_jacobi(*P, 4).pass, pt = check_2term_axioms(*P).pass,
           pd = check_codifferential(*P, 4).pass;
      v.require(pj == pt && pt == pd, "perturbation of structure " + std::to_string(k));
      if (!pj && !pt && !pd) {
        ++flipped;
        break;
      }
    }
  }
  v.require(flipped >= 50, "fewer than 50 flipping perturbations");
  v.detail << structures << " structures, " << flipped << " perturbations flipping all three verdicts";
}

// 3. MC(alpha(phi)) <=> morphism identities.
void mc_dictionary(Verdict& v) {
  Rng rng(202);
  int valid = 0, perturbed = 0, broken = 0;
  for (int k = 0; k < 55; ++k) {
    auto A = lh::testing::random_2term(rng, "A", rng.uniform(1, 2), 1, rng.uniform(1, 2));
    auto f = lh::testing::random_morphism_from(rng, A, "B");
    ConvolutionAlgebra L(A, f.target, 3);
    bool mc = mc_residual(L, morphism_to_mc(L, f)).is_zero();
    v.require(mc && check_morphism(f, 4).pass && morphism_mc_roundtrip(L, f).pass,
              "valid morphism " + std::to_string(k));
    ++valid;
    auto g = lh::testing::perturb_morphism(rng, f, rng.uniform(1, 2));
    bool gm = check_morphism(g, 4).pass, g2 = check_2term_morphism(g).pass;
    bool gmc = mc_residual(L, morphism_to_mc(L, g)).is_zero();
    v.require(gm == gmc && g2 == gmc, "perturbed morphism " + std::to_string(k));
    ++perturbed;
    broken += !gmc;
  }
  v.detail << valid << " valid and " << perturbed << " perturbed morphisms (" << broken
           << " not Maurer-Cartan)";
}

// 4. Getzler's bijection.
void bijection(Verdict& v) {
  Rng rng(303);
  int pairs[3] = {0, 0, 0}, closed = 0;
  for (int k = 0; k < 55; ++k) {
    auto A = lh::testing::random_2term(rng, "A", rng.uniform(1, 2), 1, 1);
    MorphismPtr f = std::make_shared<InftyMorphism>(lh::testing::random_morphism_from(rng, A, "B"));
    ConvolutionAlgebra L(A, f->target, 3);
    Vector mu = morphism_to_mc(L, *f);
    for (int n = 1; n <= 2; ++n) {
      int i = rng.uniform(0, n);
      FormValued beta = lh::testing::random_beta(rng, L, n, i);
      FormValued a = b_inverse(L, mu, beta, i);
      v.require(extended_mc_residual(L, a).is_zero(), "MC residual of b_inverse");
      auto [m, nu] = b_forward(L, a, i);
      v.require(m == mu && nu == tensor_bracket(L, 1, {beta}), "b_forward o b_inverse");
      v.require(b_inverse(L, m, contraction_h(a, i), i) == a, "b_inverse o b_forward");
      ++pairs[n];
    }
    Homotopy2Term h = lh::testing::random_homotopy(rng, f);
    FormValued beta = FormValued::tensor(homotopy_to_conv(L, h.theta), PolyForm::coord(1, 1));
    beta.space = L.space();
    beta.n = 1;
    FormValued lift = b_inverse(L, morphism_to_mc(L, *h.f), beta, 0);
    v.require(homotopy_closed_form(L, morphism_to_mc(L, *h.f), beta) == lift, "closed form");
    v.require(extended_mc_residual(L, lift).is_zero(), "MC residual of the lift");
    ++closed;
  }
  v.detail << pairs[1] << " pairs on Delta^1, " << pairs[2] << " on Delta^2, " << closed
           << " closed-form comparisons";
}

// 5. Gauge flows in nilpotent algebras.
void gauge(Verdict& v) {
  Model m = load_model(fixture("scenario.json"));
  const auto& entry = m.linfty_algebra("G");
  const LInftyAlgebra& g = *entry.algebra;
  const auto& S = entry.space;
  v.require(g.nilpotency() <= 4, "nilpotency bound");
  int flows = 0;
  for (int x = -3; x <= 3; ++x)
    for (Scalar s : {Scalar(1), Scalar(1, 2), Scalar(-2)}) {
      // MC elements x a + x^2/2 c
      Vector alpha = Vector::basis(S, "a", x) + Vector::basis(S, "c", Scalar(x * x, 2));
      Vector r = Vector::basis(S, "r", s);
      v.require(mc_residual(g, alpha).is_zero(), "MC start point");
      VecPoly p = gauge_flow_poly(g, alpha, r);
      v.require(poly_is_zero(mc_residual_poly(g, p)), "MC residual of alpha(t)");
      VecPoly lhs = poly_derivative(p), rhs = gauge_field_poly(g, r, p);
      lhs.resize(std::max(lhs.size(), rhs.size()), Vector(S));
      rhs.resize(lhs.size(), Vector(S));
      bool ode = true;
      for (size_t k = 0; k < lhs.size(); ++k) ode = ode && lhs[k] == rhs[k];
      v.require(ode, "flow equation");
      auto e = gauge_flow_series(g, alpha, r);
      v.require(e.size() <= 5, "series terminates within the nilpotency bound");
      Vector end = gauge_flow(g, alpha, r, 1);
      v.require(end - alpha == sum_of_series(e, S), "endpoint relation");
      v.require(mc_residual(g, end).is_zero(), "endpoint is MC");
      FormValued q = quillen_from_gauge(g, alpha, r);
      FormValued res = extended_mc_residual(g, q);
      v.require(res.is_zero(), "Quillen homotopy");
      ++flows;
    }
  v.detail << flows << " flows (MC polynomial, ODE, endpoint, Quillen both components)";
}

// 6. Homotopy calculus.
void homotopies(Verdict& v) {
  Rng rng(606);
  int fixtures = 0;
  for (int k = 0; k < 20; ++k) {
    auto A = lh::testing::random_2term(rng, "A", rng.uniform(1, 2), 1, 1);
    MorphismPtr f = std::make_shared<InftyMorphism>(lh::testing::random_morphism_from(rng, A, "B"));
    ConvolutionAlgebra L(A, f->target, 3);
    Homotopy2Term th = lh::testing::random_homotopy(rng, f);
    Homotopy2Term ta = lh::testing::random_homotopy(rng, th.g);
    for (int i = 0; i <= 1; ++i)
      v.require(homotopy_project(L, homotopy_lift(L, th, i), i, th.f, th.g).theta == th.theta,
                "project o lift");
    GradedMultilinearMap sum = th.theta + ta.theta;
    v.require(vertical_compose_via_kan(L, th, ta, HornExtension{{2, 0, 1}, 0}).theta == sum,
              "Kan composite, first extension");
    v.require(vertical_compose_via_kan(L, th, ta, HornExtension{{0, 1, 2}, 1}).theta == sum,
              "Kan composite, second extension");
    MorphismPtr fp =
        std::make_shared<InftyMorphism>(lh::testing::random_morphism_from(rng, f->target, "C"));
    Homotopy2Term tp = lh::testing::random_homotopy(rng, fp);
    try {
      Homotopy2Term c = horizontal_compose(th, tp);  // throws if the two expressions differ
      v.require(homotopy_check(c).pass, "horizontal composite is a homotopy");
    } catch (const Error& e) {
      v.require(false, e.what());
    }
    ++fixtures;
  }
  Model grid = load_model(fixture("grid.json"));
  const auto &th = grid.homotopy("theta"), &ta = grid.homotopy("tau");
  const auto &thp = grid.homotopy("theta2"), &tap = grid.homotopy("tau2");
  Homotopy2Term a = horizontal_compose(vertical_compose(th, ta), vertical_compose(thp, tap));
  Homotopy2Term b = vertical_compose(horizontal_compose(th, thp), horizontal_compose(ta, tap));
  v.require(a.theta == b.theta, "interchange law on the grid");
  v.detail << fixtures << " fixtures (lift/project, Kan under two extensions, horizontal), 2x2 interchange";
}

// 7. Categorified diagrams vs. the 2-term relations.
void diagrams(Verdict& v) {
  Rng rng(707);
  int jac = 0, mor = 0, two = 0, flips[3] = {0, 0, 0};
  while (jac < 30) {
    auto A = lh::testing::random_2term(rng, "A", 2, 1, 2);
    auto P = lh::testing::perturb_l3_in_kernel(rng, A);
    if (!P) continue;
    Report r = check_2term_axioms(*P);
    bool abcd = r.passed("2term(a)") && r.passed("2term(b)") && r.passed("2term(c)") && r.passed("2term(d)");
    v.require(abcd, "kernel perturbation keeps the first relations");
    bool j = check_jacobiator(to_lei2(*P)).pass;
    v.require(j == r.passed("2term(e)"), "Jacobiator <=> last algebra relation");
    flips[0] += !j;
    ++jac;
  }
  while (mor < 30) {
    auto S = lh::testing::random_2term(rng, "S");
    auto f = lh::testing::random_morphism_from(rng, S, "T");
    auto LS = std::make_shared<const Leibniz2Algebra>(to_lei2(*S));
    auto LT = std::make_shared<const Leibniz2Algebra>(to_lei2(*f.target));
    auto g = lh::testing::perturb_morphism(rng, f, 2);
    bool d = check_2term_morphism(g).passed("morphism(d)");
    bool diagram = check_morphism_diagram(to_lei2(g, LS, LT)).pass;
    v.require(diagram == d, "morphism diagram <=> last morphism relation");
    flips[1] += !diagram;
    ++mor;
  }
  while (two < 30) {
    auto A = lh::testing::random_2term(rng, "A");
    MorphismPtr f = std::make_shared<InftyMorphism>(lh::testing::random_morphism_from(rng, A, "B"));
    auto LA = std::make_shared<const Leibniz2Algebra>(to_lei2(*A));
    auto LB = std::make_shared<const Leibniz2Algebra>(to_lei2(*f->target));
    Homotopy2Term h = lh::testing::random_homotopy(rng, f);
    auto c0 = A->basis_of_degree(0);
    auto w1 = f->target->basis_of_degree(1);
    h.theta.add({c0[rng.uniform(0, static_cast<int>(c0.size()) - 1)]},
                Vector::basis(f->target->V, w1[rng.uniform(0, static_cast<int>(w1.size()) - 1)]));
    bool c = homotopy_check(h).passed("homotopy(c)");
    bool diagram = check_2morphism_diagram(to_lei2(h, LA, LB)).pass;
    v.require(diagram == c, "2-morphism diagram <=> last homotopy relation");
    flips[2] += !diagram;
    ++two;
  }
  v.require(flips[0] > 0 && flips[1] > 0 && flips[2] > 0, "some perturbation must break each diagram");
  v.detail << jac << "/" << mor << "/" << two << " perturbations; diagrams broken " << flips[0] << "/"
           << flips[1] << "/" << flips[2] << ", always together with the matching relation";
}

// 8. Command line end to end.
void cli(Verdict& v) {
  const std::string model = fixture("scenario.json");
  const std::vector<std::string> commands{
      "check-algebra " + model + " --algebra A",
      "check-algebra " + model + " --algebra B",
      "check-algebra " + model + " --algebra G",
      "check-morphism " + model + " --morphism f",
      "check-morphism " + model + " --morphism g",
      "check-morphism " + model + " --morphism h",
      "compose-morphisms " + model + " --first f --second id:B",
      "check-homotopy " + model + " --homotopy theta",
      "check-homotopy " + model + " --homotopy tau",
      "compose-homotopies " + model + " --vertical --first theta --second tau",
      "compose-homotopies " + model + " --vertical --via-kan --first theta --second tau",
      "compose-homotopies " + model + " --horizontal --first theta --second id:B",
      "project-homotopy " + model + " --homotopy theta --vertex 0",
      "project-homotopy " + model + " --homotopy tau --vertex 1",
      "lift-homotopy " + model + " --homotopy theta --vertex 0",
      "lift-homotopy " + model + " --homotopy tau --vertex 1",
      "gauge-flow " + model + " --algebra G --alpha \"2*a + 2*c\" --r r --t 1/2",
      "kan-fill " + model + " --first theta --second tau",
      "forms-selftest --seed 3 --count 70",
      "check-concordance " + model + " --concordance c --compose c2",
  };
  int runs = 0;
  for (const auto& c : commands)
    for (const std::string fmt : {"", " --json"}) {
      const std::string cmd = std::string(LH_CLI_PATH) + " " + c + fmt + " 2>&1";
      auto first = lh::testing::run_command(cmd), second = lh::testing::run_command(cmd);
      v.require(first.status == 0, c + fmt + " exits with " + std::to_string(first.status));
      v.require(second.status == 0 && first.out == second.out, c + fmt + " is not deterministic");
      runs += 2;
    }
  v.detail << commands.size() << " commands, " << runs << " runs, byte-identical reports";
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<void(Verdict&)>>> criteria{
      {"contraction identities", contraction},
      {"encoding equivalence", encodings},
      {"morphism/MC dictionary", mc_dictionary},
      {"Getzler bijection", bijection},
      {"gauge flow", gauge},
      {"homotopy calculus", homotopies},
      {"categorified diagrams", diagrams},
      {"CLI end to end", cli},
  };
  bool all = true;
  int index = 0;
  for (auto& [name, run] : criteria) {
    Verdict v;
    auto t0 = std::chrono::steady_clock::now();
    try {
      run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << (v.pass ? "[PASS] " : "[FAIL] ") << ++index << ". " << name << ": " << v.detail.str()
              << " (" << static_cast<int>(secs * 1000) << " ms)" << std::endl;
    all = all && v.pass;
  }
  return all ? 0 : 1;
}
