#include "lh/gla.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace lh {

Scalar parse_scalar(const std::string& s) {
  auto ok_int = [](const std::string& t) {
    if (t.empty()) return false;
    size_t i = (t[0] == '-' || t[0] == '+') ? 1 : 0;
    if (i == t.size()) return false;
    for (; i < t.size(); ++i)
      if (t[i] < '0' || t[i] > '9') return false;
    return true;
  };
  auto slash = s.find('/');
  std::string num = s.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : s.substr(slash + 1);
  if (!ok_int(num) || !ok_int(den) || den[0] == '-' || den[0] == '+')
    throw Error("malformed rational '" + s + "'");
  if (num[0] == '+') num = num.substr(1);
  mpz_class n(num), d(den);
  if (d == 0) throw Error("zero denominator in rational '" + s + "'");
  Scalar q(n, d);
  q.canonicalize();
  return q;
}

std::string to_string(const Scalar& q) { return q.get_str(); }

GradedVectorSpace::GradedVectorSpace(std::string name,
                                     std::vector<std::pair<std::string, int>> basis)
    : name_(std::move(name)), basis_(std::move(basis)) {
  for (int i = 0; i < dim(); ++i) {
    if (!index_.emplace(basis_[i].first, i).second)
      throw Error("duplicate label '" + basis_[i].first + "' in space " + name_);
  }
}

int GradedVectorSpace::index(const std::string& label) const {
  auto it = index_.find(label);
  if (it == index_.end()) throw Error("unknown label '" + label + "' in space " + name_);
  return it->second;
}

SpacePtr make_space(std::string name, std::vector<std::pair<std::string, int>> basis) {
  return std::make_shared<const GradedVectorSpace>(std::move(name), std::move(basis));
}

// ---------------------------------------------------------------- Vector

Vector Vector::basis(SpacePtr space, int i, Scalar c) {
  Vector v(std::move(space));
  v.add(i, c);
  return v;
}

Vector Vector::basis(SpacePtr space, const std::string& label, Scalar c) {
  int i = space->index(label);
  return basis(std::move(space), i, std::move(c));
}

Scalar Vector::coeff(int i) const {
  auto it = c_.find(i);
  return it == c_.end() ? Scalar(0) : it->second;
}

Scalar Vector::coeff(const std::string& label) const { return coeff(space_->index(label)); }

void Vector::add(int i, const Scalar& c) {
  Scalar q = c;  // callers may hand in e.g. Scalar(4, 2)
  q.canonicalize();
  if (q == 0) return;
  auto [it, fresh] = c_.try_emplace(i, q);
  if (!fresh) {
    it->second += q;
    if (it->second == 0) c_.erase(it);
  }
}

Vector& Vector::operator+=(const Vector& o) {
  if (!space_) space_ = o.space_;
  for (auto& [i, c] : o.c_) add(i, c);
  return *this;
}

Vector& Vector::operator-=(const Vector& o) {
  if (!space_) space_ = o.space_;
  for (auto& [i, c] : o.c_) add(i, -c);
  return *this;
}

Vector& Vector::operator*=(const Scalar& a) {
  if (a == 0) {
    c_.clear();
    return *this;
  }
  for (auto& kv : c_) kv.second *= a;
  return *this;
}

bool Vector::homogeneous() const {
  if (c_.empty()) return true;
  int d = space_->degree(c_.begin()->first);
  for (auto& kv : c_)
    if (space_->degree(kv.first) != d) return false;
  return true;
}

int Vector::degree() const {
  if (c_.empty() || !homogeneous()) throw Error("degree of a zero or inhomogeneous vector");
  return space_->degree(c_.begin()->first);
}

std::map<int, Vector> Vector::by_degree() const {
  std::map<int, Vector> out;
  for (auto& [i, c] : c_) {
    auto [it, _] = out.try_emplace(space_->degree(i), Vector(space_));
    it->second.add(i, c);
  }
  return out;
}

std::string Vector::str() const {
  if (c_.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [i, c] : c_) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str() << "*" << space_->label(i);
  }
  return os.str();
}

// ---------------------------------------------------------------- Permutation

Permutation Permutation::identity(int n) {
  Permutation p;
  p.image.resize(n);
  std::iota(p.image.begin(), p.image.end(), 0);
  return p;
}

Permutation Permutation::inverse() const {
  Permutation p;
  p.image.resize(image.size());
  for (int k = 0; k < size(); ++k) p.image[image[k]] = k;
  return p;
}

Permutation Permutation::compose(const Permutation& tau) const {
  Permutation p;
  p.image.resize(image.size());
  for (int k = 0; k < size(); ++k) p.image[k] = image[tau.image[k]];
  return p;
}

int Permutation::sign() const {
  int inv = 0;
  for (int a = 0; a < size(); ++a)
    for (int b = a + 1; b < size(); ++b)
      if (image[a] > image[b]) ++inv;
  return parity_sign(inv);
}

std::vector<Permutation> multi_shuffles(const std::vector<int>& k) {
  int n = std::accumulate(k.begin(), k.end(), 0);
  std::vector<Permutation> out;
  // block[v] = which block the value v is taken by; enumerate all assignments
  std::vector<int> remaining(k.begin(), k.end());
  std::vector<int> block(n);
  auto rec = [&](auto&& self, int v) -> void {
    if (v == n) {
      Permutation p;
      p.image.resize(n);
      std::vector<int> offs(k.size(), 0);
      for (size_t b = 1; b < k.size(); ++b) offs[b] = offs[b - 1] + k[b - 1];
      std::vector<int> fill = offs;
      for (int x = 0; x < n; ++x) p.image[fill[block[x]]++] = x;
      out.push_back(std::move(p));
      return;
    }
    for (size_t b = 0; b < k.size(); ++b) {
      if (remaining[b] == 0) continue;
      --remaining[b];
      block[v] = static_cast<int>(b);
      self(self, v + 1);
      ++remaining[b];
    }
  };
  rec(rec, 0);
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Permutation> shuffles(int p, int q) {
  if (p == 0 || q == 0) return {Permutation::identity(p + q)};
  return multi_shuffles({p, q});
}

std::vector<Permutation> filtered_shuffles(const std::vector<int>& k) {
  std::vector<Permutation> out;
  for (auto& s : multi_shuffles(k)) {
    bool ok = true;
    int end = -1, prev = -1;
    for (int b : k) {
      end += b;
      if (s.image[end] <= prev) {
        ok = false;
        break;
      }
      prev = s.image[end];
    }
    if (ok) out.push_back(s);
  }
  return out;
}

int koszul_sign(const Permutation& sigma, const std::vector<int>& degrees) {
  if (static_cast<int>(degrees.size()) != sigma.size())
    throw Error("koszul_sign: degree list does not match permutation size");
  long e = 0;
  for (int a = 0; a < sigma.size(); ++a)
    for (int b = a + 1; b < sigma.size(); ++b)
      if (sigma(a) > sigma(b)) e += static_cast<long>(degrees[sigma(a)]) * degrees[sigma(b)];
  return parity_sign(e);
}

// ---------------------------------------------------------------- maps

GradedMultilinearMap::GradedMultilinearMap(SpacePtr source, SpacePtr target, int arity,
                                           int degree)
    : src_(std::move(source)), tgt_(std::move(target)), arity_(arity), degree_(degree) {
  if (arity < 1) throw Error("multilinear map arity must be >= 1");
}

void GradedMultilinearMap::set(const std::vector<int>& args, const Vector& value) {
  if (static_cast<int>(args.size()) != arity_) throw Error("structure constant arity mismatch");
  int d = degree_;
  for (int a : args) d += src_->degree(a);
  for (auto& [i, c] : value.terms())
    if (tgt_->degree(i) != d)
      throw Error("degree violation: value " + value.str() + " on tuple of degree " +
                  std::to_string(d - degree_) + " for map of degree " + std::to_string(degree_));
  Vector v(tgt_);
  v += value;
  if (v.is_zero())
    coeffs_.erase(args);
  else
    coeffs_[args] = std::move(v);
}

void GradedMultilinearMap::set(const std::vector<std::string>& args, const Vector& value) {
  std::vector<int> idx;
  for (auto& a : args) idx.push_back(src_->index(a));
  set(idx, value);
}

void GradedMultilinearMap::add(const std::vector<int>& args, const Vector& value) {
  set(args, at(args) + value);
}

Vector GradedMultilinearMap::at(const std::vector<int>& args) const {
  auto it = coeffs_.find(args);
  return it == coeffs_.end() ? Vector(tgt_) : it->second;
}

GradedMultilinearMap GradedMultilinearMap::operator+(const GradedMultilinearMap& o) const {
  GradedMultilinearMap r = *this;
  for (auto& [k, v] : o.coeffs_) r.add(k, v);
  return r;
}

GradedMultilinearMap GradedMultilinearMap::operator-(const GradedMultilinearMap& o) const {
  return *this + o.scaled(-1);
}

GradedMultilinearMap GradedMultilinearMap::scaled(const Scalar& a) const {
  GradedMultilinearMap r(src_, tgt_, arity_, degree_);
  if (a == 0) return r;
  for (auto& [k, v] : coeffs_) r.coeffs_[k] = a * v;
  return r;
}

Vector eval_map(const GradedMultilinearMap& F, const std::vector<Vector>& args) {
  if (static_cast<int>(args.size()) != F.arity()) throw Error("eval_map: arity mismatch");
  for (auto& a : args)
    if (a.space() && a.space() != F.source() && a.space()->name() != F.source()->name())
      throw Error("eval_map: argument lives in the wrong space");
  Vector out(F.target());
  for (auto& a : args)
    if (a.is_zero()) return out;
  // iterate over the stored tuples when that is cheaper than the argument supports
  size_t prod = 1;
  for (auto& a : args) prod *= a.terms().size();
  if (prod > F.coeffs().size()) {
    for (auto& [tuple, val] : F.coeffs()) {
      Scalar c = 1;
      for (int k = 0; k < F.arity() && c != 0; ++k) c *= args[k].coeff(tuple[k]);
      if (c != 0) out += c * val;
    }
    return out;
  }
  std::vector<int> tuple(F.arity());
  auto rec = [&](auto&& self, int k, const Scalar& c) -> void {
    if (k == F.arity()) {
      auto it = F.coeffs().find(tuple);
      if (it != F.coeffs().end()) out += c * it->second;
      return;
    }
    for (auto& [i, a] : args[k].terms()) {
      tuple[k] = i;
      self(self, k + 1, c * a);
    }
  };
  rec(rec, 0, Scalar(1));
  return out;
}

SpacePtr suspend(const SpacePtr& V, int shift) {
  auto b = V->basis();
  for (auto& [l, d] : b) d += shift;
  std::string nm = shift == 0 ? V->name() : "s^" + std::to_string(shift) + "(" + V->name() + ")";
  return make_space(nm, b);
}

namespace {
// sign of (s^k)^{(x)p}(v_1...v_p) = sign * s^k v_1 ... s^k v_p
int suspension_sign(const SpacePtr& V, const std::vector<int>& tuple, int k) {
  long e = 0;
  int p = static_cast<int>(tuple.size());
  for (int j = 0; j < p; ++j) e += static_cast<long>(V->degree(tuple[j])) * (p - 1 - j);
  return parity_sign(e * k);
}
}  // namespace

GradedMultilinearMap transport(const GradedMultilinearMap& F, const SpacePtr& sV,
                               const SpacePtr& sW, int shift) {
  int p = F.arity();
  GradedMultilinearMap D(sV, sW, p, F.degree() + shift - p * shift);
  for (auto& [tuple, val] : F.coeffs()) {
    Vector w(sW);
    for (auto& [i, c] : val.terms()) w.add(i, c);
    D.set(tuple, suspension_sign(F.source(), tuple, shift) * w);
  }
  return D;
}

GradedMultilinearMap transport_back(const GradedMultilinearMap& D, const SpacePtr& V,
                                    const SpacePtr& W, int shift) {
  int p = D.arity();
  GradedMultilinearMap F(V, W, p, D.degree() - shift + p * shift);
  for (auto& [tuple, val] : D.coeffs()) {
    Vector w(W);
    for (auto& [i, c] : val.terms()) w.add(i, c);
    F.set(tuple, suspension_sign(V, tuple, shift) * w);
  }
  return F;
}

}  // namespace lh
