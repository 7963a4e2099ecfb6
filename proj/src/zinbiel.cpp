#include "lh/zinbiel.hpp"

#include <sstream>

namespace lh {

int word_degree(const GradedVectorSpace& V, const Word& w) {
  int d = 0;
  for (int a : w) d += V.degree(a);
  return d;
}

std::string word_str(const GradedVectorSpace& V, const Word& w) {
  std::string s;
  for (size_t k = 0; k < w.size(); ++k) {
    if (k) s += "|";
    s += V.label(w[k]);
  }
  return "[" + s + "]";
}

void TensorPoly::add(const Word& w, const Scalar& c) {
  if (c == 0) return;
  auto [it, fresh] = terms.try_emplace(w, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) terms.erase(it);
  }
}

TensorPoly& TensorPoly::operator+=(const TensorPoly& o) {
  if (!space) space = o.space;
  for (auto& [w, c] : o.terms) add(w, c);
  return *this;
}

TensorPoly& TensorPoly::operator-=(const TensorPoly& o) {
  if (!space) space = o.space;
  for (auto& [w, c] : o.terms) add(w, -c);
  return *this;
}

TensorPoly TensorPoly::operator*(const Scalar& a) const {
  TensorPoly r(space);
  if (a == 0) return r;
  for (auto& [w, c] : terms) r.terms[w] = a * c;
  return r;
}

std::string TensorPoly::str() const {
  if (terms.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (auto& [w, c] : terms) {
    if (!first) os << " + ";
    first = false;
    os << c.get_str() << "*" << word_str(*space, w);
  }
  return os.str();
}

namespace {
void add2(Tensor2& t, const Word& a, const Word& b, const Scalar& c) {
  if (c == 0) return;
  auto [it, fresh] = t.try_emplace({a, b}, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}
void add3(Tensor3& t, const Word& a, const Word& b, const Word& d, const Scalar& c) {
  if (c == 0) return;
  auto [it, fresh] = t.try_emplace({a, b, d}, c);
  if (!fresh) {
    it->second += c;
    if (it->second == 0) t.erase(it);
  }
}
std::vector<int> letter_degrees(const GradedVectorSpace& V, const Word& w, size_t n) {
  std::vector<int> d(n);
  for (size_t k = 0; k < n; ++k) d[k] = V.degree(w[k]);
  return d;
}
}  // namespace

std::vector<Word> all_words(const GradedVectorSpace& V, int N) {
  std::vector<Word> out;
  std::vector<Word> layer{{}};
  for (int len = 1; len <= N; ++len) {
    std::vector<Word> next;
    for (auto& w : layer)
      for (int a = 0; a < V.dim(); ++a) {
        Word x = w;
        x.push_back(a);
        next.push_back(x);
      }
    out.insert(out.end(), next.begin(), next.end());
    layer.swap(next);
  }
  return out;
}

TensorPoly zin_product(const SpacePtr& V, const Word& w1, const Word& w2, int N) {
  int p = static_cast<int>(w1.size()), q = static_cast<int>(w2.size());
  if (p + q > N) throw Error("zin_product: truncation overflow (length " +
                             std::to_string(p + q) + " > " + std::to_string(N) + ")");
  Word all = w1;
  all.insert(all.end(), w2.begin(), w2.end());
  auto degs = letter_degrees(*V, all, p + q - 1);
  TensorPoly out(V);
  for (auto& s : shuffles(p, q - 1)) {
    auto si = s.inverse();
    Word w(p + q);
    for (int j = 0; j < p + q - 1; ++j) w[j] = all[si(j)];
    w[p + q - 1] = all[p + q - 1];
    out.add(w, koszul_sign(si, degs));
  }
  return out;
}

TensorPoly zin_product(const TensorPoly& a, const TensorPoly& b, int N) {
  TensorPoly out(a.space ? a.space : b.space);
  for (auto& [u, cu] : a.terms)
    for (auto& [v, cv] : b.terms) {
      auto t = zin_product(out.space, u, v, N);
      out += t * (cu * cv);
    }
  return out;
}

std::vector<CoproductTerm> zin_coproduct(const GradedVectorSpace& V, const Word& w) {
  std::vector<CoproductTerm> out;
  int p = static_cast<int>(w.size());
  if (p < 2) return out;
  auto degs = letter_degrees(V, w, p - 1);
  for (int k = 1; k <= p - 1; ++k)
    for (auto& s : shuffles(k, p - k - 1)) {
      CoproductTerm t;
      for (int a = 0; a < k; ++a) t.left.push_back(w[s(a)]);
      for (int a = k; a < p - 1; ++a) t.right.push_back(w[s(a)]);
      t.right.push_back(w[p - 1]);
      t.coeff = koszul_sign(s, degs);
      out.push_back(std::move(t));
    }
  return out;
}

Tensor2 apply_coproduct(const TensorPoly& x) {
  Tensor2 out;
  for (auto& [w, c] : x.terms)
    for (auto& t : zin_coproduct(*x.space, w)) add2(out, t.left, t.right, c * t.coeff);
  return out;
}

std::vector<IteratedTerm> iterated_coproduct(const GradedVectorSpace& V, const Word& w, int p) {
  std::vector<IteratedTerm> cur{{{w}, Scalar(1)}};
  for (int step = 1; step < p; ++step) {
    std::map<std::vector<Word>, Scalar> acc;
    for (auto& t : cur)
      for (auto& c : zin_coproduct(V, t.parts[0])) {
        std::vector<Word> parts{c.left, c.right};
        parts.insert(parts.end(), t.parts.begin() + 1, t.parts.end());
        acc[parts] += t.coeff * c.coeff;
      }
    cur.clear();
    for (auto& [parts, c] : acc)
      if (c != 0) cur.push_back({parts, c});
  }
  return cur;
}

// ---------------------------------------------------------------- coderivations

namespace {
// Insert the vector value at position `pos` of the word prefix+[.]+suffix.
void splice(TensorPoly& out, const Word& prefix, const Vector& value, const Word& suffix,
            const Scalar& c) {
  for (auto& [i, a] : value.terms()) {
    Word w = prefix;
    w.push_back(i);
    w.insert(w.end(), suffix.begin(), suffix.end());
    out.add(w, c * a);
  }
}
}  // namespace

TensorPoly coderivation_extend(const Coderivation& D, const Word& w) {
  const auto& V = *D.space;
  int n = static_cast<int>(w.size());
  if (n > D.N) throw Error("coderivation_extend: truncation overflow");
  TensorPoly out(D.space);
  for (auto& [j, Dj] : D.parts) {
    if (j > n) continue;
    for (int k = j; k <= n; ++k) {
      // letters 0..k-2 are shuffled, letter k-1 closes the D_j block
      auto degs = letter_degrees(V, w, k - 1);
      Word suffix(w.begin() + k, w.end());
      for (auto& s : shuffles(k - j, j - 1)) {
        Word prefix, args;
        long pre_deg = 0;
        for (int a = 0; a < k - j; ++a) {
          prefix.push_back(w[s(a)]);
          pre_deg += V.degree(w[s(a)]);
        }
        for (int a = k - j; a < k - 1; ++a) args.push_back(w[s(a)]);
        args.push_back(w[k - 1]);
        Vector val = Dj.at(args);
        if (val.is_zero()) continue;
        int sg = koszul_sign(s, degs) * parity_sign(pre_deg * D.degree);
        splice(out, prefix, val, suffix, sg);
      }
    }
  }
  return out;
}

TensorPoly coderivation_apply(const Coderivation& D, const TensorPoly& x) {
  TensorPoly out(D.space);
  for (auto& [w, c] : x.terms) out += coderivation_extend(D, w) * c;
  return out;
}

Report coderivation_compatibility(const Coderivation& D) {
  Report r;
  const auto& V = *D.space;
  for (auto& w : all_words(V, D.N)) {
    TensorPoly single(D.space);
    single.add(w, 1);
    Tensor2 lhs = apply_coproduct(coderivation_extend(D, w));
    Tensor2 rhs;
    for (auto& t : zin_coproduct(V, w)) {
      for (auto& [u, c] : coderivation_extend(D, t.left).terms) add2(rhs, u, t.right, t.coeff * c);
      int sg = parity_sign(static_cast<long>(word_degree(V, t.left)) * D.degree);
      for (auto& [u, c] : coderivation_extend(D, t.right).terms)
        add2(rhs, t.left, u, t.coeff * c * sg);
    }
    ++r.checked;
    r.note("coderivation");
    if (lhs != rhs) r.fail({"coderivation", {word_str(V, w)}, "", ""});
  }
  return r;
}

Report coderivation_square_check(const Coderivation& D) {
  Report r;
  r.note("D^2=0");
  for (auto& w : all_words(*D.space, D.N)) {
    ++r.checked;
    TensorPoly dd = coderivation_apply(D, coderivation_extend(D, w));
    if (!dd.is_zero()) r.fail({"D^2=0", {word_str(*D.space, w)}, dd.str(), "0"});
  }
  return r;
}

Report check_zinbiel_relation(const SpacePtr& V, const std::vector<std::array<Word, 3>>& samples,
                              int N) {
  Report r;
  r.note("zinbiel");
  for (auto& [u, v, w] : samples) {
    TensorPoly U(V), Vv(V), W(V);
    U.add(u, 1);
    Vv.add(v, 1);
    W.add(w, 1);
    TensorPoly lhs = zin_product(U, zin_product(Vv, W, N), N);
    TensorPoly rhs = zin_product(zin_product(U, Vv, N), W, N);
    int sg = parity_sign(static_cast<long>(word_degree(*V, u)) * word_degree(*V, v));
    rhs += zin_product(zin_product(Vv, U, N), W, N) * sg;
    ++r.checked;
    if (lhs != rhs)
      r.fail({"zinbiel", {word_str(*V, u), word_str(*V, v), word_str(*V, w)}, lhs.str(),
              rhs.str()});
  }
  return r;
}

Report check_cozinbiel_relation(const SpacePtr& V, int N) {
  Report r;
  r.note("co-zinbiel");
  for (auto& w : all_words(*V, N)) {
    Tensor3 lhs, rhs;
    for (auto& t : zin_coproduct(*V, w)) {
      for (auto& t2 : zin_coproduct(*V, t.right)) add3(lhs, t.left, t2.left, t2.right, t.coeff * t2.coeff);
      for (auto& t2 : zin_coproduct(*V, t.left)) {
        Scalar c = t.coeff * t2.coeff;
        add3(rhs, t2.left, t2.right, t.right, c);
        int sg = parity_sign(static_cast<long>(word_degree(*V, t2.left)) * word_degree(*V, t2.right));
        add3(rhs, t2.right, t2.left, t.right, c * sg);
      }
    }
    ++r.checked;
    if (lhs != rhs) r.fail({"co-zinbiel", {word_str(*V, w)}, "", ""});
  }
  return r;
}

// ---------------------------------------------------------------- coalgebra maps

TensorPoly coextend(const CoalgebraMorphism& F, const Word& w) {
  TensorPoly out(F.target);
  int n = static_cast<int>(w.size());
  if (n > F.N) throw Error("coextend: truncation overflow");
  for (int p = 1; p <= n; ++p) {
    for (auto& t : iterated_coproduct(*F.source, w, p)) {
      // product of f(part_k), expanded into words
      std::map<Word, Scalar> acc{{Word{}, t.coeff}};
      for (auto& part : t.parts) {
        auto it = F.parts.find(static_cast<int>(part.size()));
        if (it == F.parts.end()) {
          acc.clear();
          break;
        }
        Vector val = it->second.at(part);
        std::map<Word, Scalar> next;
        for (auto& [u, c] : acc)
          for (auto& [i, a] : val.terms()) {
            Word x = u;
            x.push_back(i);
            next[x] += c * a;
          }
        acc.swap(next);
        if (acc.empty()) break;
      }
      for (auto& [u, c] : acc) out.add(u, c);
    }
  }
  return out;
}

TensorPoly coextend_apply(const CoalgebraMorphism& F, const TensorPoly& x) {
  TensorPoly out(F.target);
  for (auto& [w, c] : x.terms) out += coextend(F, w) * c;
  return out;
}

CoalgebraMorphism compose(const CoalgebraMorphism& F, const CoalgebraMorphism& G) {
  if (F.target->name() != G.source->name()) throw Error("compose: space mismatch");
  CoalgebraMorphism H{F.source, G.target, {}, std::min(F.N, G.N)};
  for (int k = 1; k <= H.N; ++k) H.parts.emplace(k, GradedMultilinearMap(F.source, G.target, k, 0));
  for (auto& w : all_words(*F.source, H.N)) {
    TensorPoly fw = coextend(F, w);
    Vector acc(G.target);
    for (auto& [u, c] : fw.terms) {
      auto it = G.parts.find(static_cast<int>(u.size()));
      if (it != G.parts.end()) acc += c * it->second.at(u);
    }
    if (!acc.is_zero()) H.parts.at(static_cast<int>(w.size())).set(w, acc);
  }
  return H;
}

Report check_coalgebra_morphism(const CoalgebraMorphism& F) {
  Report r;
  r.note("coalgebra-morphism");
  for (auto& w : all_words(*F.source, F.N)) {
    Tensor2 lhs = apply_coproduct(coextend(F, w));
    Tensor2 rhs;
    for (auto& t : zin_coproduct(*F.source, w))
      for (auto& [a, ca] : coextend(F, t.left).terms)
        for (auto& [b, cb] : coextend(F, t.right).terms) add2(rhs, a, b, t.coeff * ca * cb);
    ++r.checked;
    if (lhs != rhs) r.fail({"coalgebra-morphism", {word_str(*F.source, w)}, "", ""});
  }
  return r;
}

Report check_chain_map(const CoalgebraMorphism& F, const Coderivation& DV,
                       const Coderivation& DW) {
  Report r;
  r.note("chain-map");
  for (auto& w : all_words(*F.source, F.N)) {
    TensorPoly lhs = coderivation_apply(DW, coextend(F, w));
    TensorPoly rhs = coextend_apply(F, coderivation_extend(DV, w));
    ++r.checked;
    if (lhs != rhs) r.fail({"chain-map", {word_str(*F.source, w)}, lhs.str(), rhs.str()});
  }
  return r;
}

}  // namespace lh
