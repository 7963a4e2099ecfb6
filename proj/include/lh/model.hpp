#ifndef LH_MODEL_HPP
#define LH_MODEL_HPP

// JSON model documents (spaces, algebras, morphisms, homotopies, concordances)
// and report serialization shared by the command line front end.

#include <map>
#include <memory>
#include <string>
#include <vector>

#include <json.hpp>

#include "lh/leibniz.hpp"
#include "lh/linfty.hpp"
#include "lh/report.hpp"

namespace lh {

using json = nlohmann::ordered_json;

/// Invalid model document; every message carries a JSON path or a line number.
class SchemaError : public Error {
 public:
  explicit SchemaError(std::vector<std::string> msgs);
  const std::vector<std::string>& messages() const { return msgs_; }

 private:
  std::vector<std::string> msgs_;
};

struct LInftyEntry {
  std::shared_ptr<ExplicitLInfty> algebra;
  SpacePtr space;
};

struct Model {
  std::map<std::string, SpacePtr> spaces;
  std::map<std::string, AlgebraPtr> algebras;  // Leibniz-infinity and 2-term
  std::map<std::string, LInftyEntry> linfty;
  std::map<std::string, std::shared_ptr<const InftyMorphism>> morphisms;
  std::map<std::string, Homotopy2Term> homotopies;
  std::map<std::string, DGZAPtr> dgzas;
  std::map<std::string, Concordance> concordances;

  AlgebraPtr algebra(const std::string& name) const;
  std::shared_ptr<const InftyMorphism> morphism(const std::string& name) const;
  const Homotopy2Term& homotopy(const std::string& name) const;
  const LInftyEntry& linfty_algebra(const std::string& name) const;
  const Concordance& concordance(const std::string& name) const;
};

Model parse_model(const std::string& text);
Model load_model(const std::string& path);

/// "1/2*a - b + 3*c" over the labels of S.
Vector parse_label_expr(const SpacePtr& S, const std::string& expr);

json to_json(const Vector& v);
json to_json(const GradedMultilinearMap& m);
json to_json(const InftyMorphism& f);
json to_json(const FormValued& x);
json to_json(const Report& r);

/// Model fragments, the inverse of parsing.
json algebra_to_json(const LeibnizInftyAlgebra& A, const std::string& kind);
json space_to_json(const GradedVectorSpace& S);
json morphism_to_json(const InftyMorphism& f);
json homotopy_to_json(const Homotopy2Term& h, const std::string& from, const std::string& to);

std::string report_text(const std::string& title, const Report& r);

}  // namespace lh

#endif
