#ifndef LH_REPORT_HPP
#define LH_REPORT_HPP

#include <map>
#include <string>
#include <vector>

namespace lh {

struct Failure {
  std::string identity;
  std::vector<std::string> tuple;
  std::string lhs, rhs;
};

/// Outcome of an identity check. `identities` records every named identity that was
/// evaluated together with its verdict; `failures` keeps the first few counterexamples.
struct Report {
  bool pass = true;
  long checked = 0;
  std::map<std::string, bool> identities;
  std::vector<Failure> failures;

  void note(const std::string& identity) { identities.try_emplace(identity, true); }
  void fail(Failure f) {
    pass = false;
    identities[f.identity] = false;
    if (failures.size() < 8) failures.push_back(std::move(f));
  }
  bool passed(const std::string& identity) const {
    auto it = identities.find(identity);
    return it == identities.end() || it->second;
  }
  void merge(const Report& o) {
    pass = pass && o.pass;
    checked += o.checked;
    for (auto& [k, v] : o.identities) {
      auto [it, fresh] = identities.try_emplace(k, v);
      if (!fresh) it->second = it->second && v;
    }
    for (auto& f : o.failures)
      if (failures.size() < 8) failures.push_back(f);
  }
};

}  // namespace lh

#endif
