#include "edl/classfn.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <unordered_set>
#include <numeric>

#include "edl/error.hpp"

namespace edl {

// ---- classes ----

ClassTablePtr ClassTable::build(const Group& G, unsigned N, std::uint64_t budget) {
  if (G.order() > budget) throw Error(ErrorCode::BudgetExceeded, "group too large for a class table");
  return build(G, G.elements(), N, budget);
}

ClassTablePtr ClassTable::build(const Group& G, std::vector<Mat> elems, unsigned N, std::uint64_t budget) {
  if (elems.size() > budget) throw Error(ErrorCode::BudgetExceeded, "group too large for a class table");
  auto t = std::shared_ptr<ClassTable>(new ClassTable(G));
  t->elems_ = std::move(elems);
  t->index_.reserve(t->elems_.size() * 2);
  for (std::size_t i = 0; i < t->elems_.size(); ++i) t->index_.emplace(G.key(t->elems_[i]), static_cast<std::uint32_t>(i));
  t->gens_ = extract_generators(G, t->elems_);
  std::vector<Mat> ginv;
  for (const auto& g : t->gens_) ginv.push_back(G.inv(g));

  constexpr std::uint32_t kNone = ~0u;
  t->class_of_elem_.assign(t->elems_.size(), kNone);
  std::vector<std::uint32_t> stack;
  std::uint64_t lcm = 1;
  for (std::size_t i = 0; i < t->elems_.size(); ++i) {
    if (t->class_of_elem_[i] != kNone) continue;
    auto c = static_cast<std::uint32_t>(t->classes_.size());
    t->members_.emplace_back();
    t->class_of_elem_[i] = c;
    stack.push_back(static_cast<std::uint32_t>(i));
    while (!stack.empty()) {
      std::uint32_t x = stack.back();
      stack.pop_back();
      t->members_[c].push_back(x);
      for (std::size_t k = 0; k < t->gens_.size(); ++k) {
        Mat y = G.mul(t->gens_[k], G.mul(t->elems_[x], ginv[k]));
        auto it = t->index_.find(G.key(y));
        if (it == t->index_.end()) throw Error(ErrorCode::InvalidArgument, "element list is not a group");
        if (t->class_of_elem_[it->second] == kNone) {
          t->class_of_elem_[it->second] = c;
          stack.push_back(it->second);
        }
      }
    }
    std::sort(t->members_[c].begin(), t->members_[c].end());
    const Mat& rep = t->elems_[t->members_[c].front()];
    std::uint64_t o = G.element_order(rep);
    lcm = std::lcm(lcm, o);
    t->classes_.push_back({rep, t->members_[c].size(), o});
    if (G.is_identity(rep)) t->id_class_ = c;
  }
  if (N == 0) N = static_cast<unsigned>(lcm);
  if (N % lcm) throw Error(ErrorCode::InvalidArgument, "cyclotomic order must be a multiple of the exponent");
  t->N_ = N;
  t->K_ = CycloField::get(N);
  return t;
}

std::optional<std::size_t> ClassTable::element_index(const Mat& g) const {
  auto it = index_.find(G_.key(g));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ClassTable::class_of(const Mat& g) const {
  auto i = element_index(g);
  if (!i) throw Error(ErrorCode::InvalidArgument, "element " + G_.str(g) + " not in the group");
  return class_of_elem_[*i];
}

std::size_t ClassTable::power_class(std::size_t c, long long k) const { return class_of(G_.pow(classes_[c].rep, k)); }

// ---- class functions ----

ClassFunction::ClassFunction(ClassTablePtr t, std::vector<Cyclo> values, std::string label)
    : t_(std::move(t)), v_(std::move(values)), label_(std::move(label)) {
  if (v_.size() != t_->size()) throw Error(ErrorCode::ParameterMismatch, "class function length mismatch");
}

ClassFunction ClassFunction::constant(ClassTablePtr t, long long c) {
  std::vector<Cyclo> v(t->size(), Cyclo(t->field(), c));
  return ClassFunction(std::move(t), std::move(v));
}

ClassFunction ClassFunction::from_function(ClassTablePtr t, const std::function<Cyclo(const Mat&)>& f) {
  std::vector<Cyclo> v;
  for (const auto& c : t->classes()) v.push_back(f(c.rep));
  return ClassFunction(std::move(t), std::move(v));
}

namespace {

void same_table(const ClassFunction& a, const ClassFunction& b) {
  if (a.table_ptr() != b.table_ptr()) throw Error(ErrorCode::ParameterMismatch, "class functions on different tables");
}

}  // namespace

ClassFunction ClassFunction::operator+(const ClassFunction& o) const {
  same_table(*this, o);
  ClassFunction s = *this;
  for (std::size_t i = 0; i < v_.size(); ++i) s.v_[i] = v_[i] + o.v_[i];
  s.label_.clear();
  return s;
}

ClassFunction ClassFunction::operator-(const ClassFunction& o) const {
  same_table(*this, o);
  ClassFunction s = *this;
  for (std::size_t i = 0; i < v_.size(); ++i) s.v_[i] = v_[i] - o.v_[i];
  s.label_.clear();
  return s;
}

ClassFunction ClassFunction::operator*(const ClassFunction& o) const {
  same_table(*this, o);
  ClassFunction s = *this;
  for (std::size_t i = 0; i < v_.size(); ++i) s.v_[i] = v_[i] * o.v_[i];
  s.label_.clear();
  return s;
}

ClassFunction ClassFunction::operator*(long long k) const {
  ClassFunction s = *this;
  for (auto& x : s.v_) x = x * k;
  return s;
}

ClassFunction ClassFunction::conj() const {
  ClassFunction s = *this;
  for (auto& x : s.v_) x = x.conj();
  return s;
}

Rational inner_product(const ClassFunction& a, const ClassFunction& b) {
  same_table(a, b);
  const ClassTable& t = a.table();
  Cyclo s(t.field());
  for (std::size_t c = 0; c < t.size(); ++c) s += (a[c] * b[c].conj()) * static_cast<long long>(t[c].size);
  return Rational(s.to_integer(), static_cast<long long>(t.order()));
}

ClassFunction restrict_to(const ClassFunction& chi, const ClassTablePtr& H) {
  if (H->exponent() != chi.table().exponent())
    throw Error(ErrorCode::ParameterMismatch, "restriction needs a shared cyclotomic order");
  std::vector<Cyclo> v;
  for (const auto& c : H->classes()) v.push_back(chi.at(c.rep));
  return ClassFunction(H, std::move(v));
}

ClassFunction induce(const ClassFunction& chi, const ClassTablePtr& G) {
  const ClassTable& H = chi.table();
  if (H.exponent() != G->exponent()) throw Error(ErrorCode::ParameterMismatch, "induction needs a shared cyclotomic order");
  if (G->order() % H.order()) throw Error(ErrorCode::InvalidArgument, "subgroup order does not divide group order");
  auto index = static_cast<long long>(G->order() / H.order());
  std::vector<Cyclo> acc(G->size(), Cyclo(G->field()));
  for (std::size_t d = 0; d < H.size(); ++d) acc[G->class_of(H[d].rep)] += chi[d] * static_cast<long long>(H[d].size);
  for (std::size_t c = 0; c < G->size(); ++c) acc[c] = (acc[c] * index).div_exact(static_cast<long long>((*G)[c].size));
  return ClassFunction(G, std::move(acc));
}

ClassFunction permutation_character(const ClassTablePtr& G, const std::vector<Mat>& H) {
  const Group& g = G->group();
  std::unordered_set<MatKey, MatKeyHash> hk;
  for (const auto& h : H) hk.insert(g.key(h));
  std::vector<char> covered(G->order(), 0);
  std::vector<Mat> transversal;
  for (std::size_t i = 0; i < G->order(); ++i) {
    if (covered[i]) continue;
    const Mat& x = G->elements()[i];
    transversal.push_back(x);
    for (const auto& h : H) covered[*G->element_index(g.mul(x, h))] = 1;
  }
  std::vector<Cyclo> v;
  for (const auto& c : G->classes()) {
    long long n = 0;
    for (const auto& x : transversal)
      if (hk.count(g.key(g.mul(g.inv(x), g.mul(c.rep, x))))) ++n;
    v.emplace_back(G->field(), n);
  }
  return ClassFunction(G, std::move(v));
}

ClassFunction inflate(const ClassFunction& chi, const ClassTablePtr& G, const std::function<Mat(const Mat&)>& proj) {
  std::vector<Cyclo> v;
  for (const auto& c : G->classes()) v.push_back(chi.at(proj(c.rep)).lift(G->field()));
  return ClassFunction(G, std::move(v), chi.label());
}

std::vector<long long> decompose(const ClassFunction& chi, const std::vector<ClassFunction>& basis) {
  std::vector<long long> out;
  for (const auto& b : basis) {
    Rational r = inner_product(chi, b);
    if (r.denominator() != 1) throw Error(ErrorCode::NonIntegral, "multiplicity " + rational_str(r) + " is not an integer");
    out.push_back(r.numerator());
  }
  return out;
}

TableCheck check_table(const std::vector<ClassFunction>& chars, int threads) {
  TableCheck r;
  if (chars.empty()) return r;
  const ClassTable& t = chars.front().table();
  r.complete = chars.size() == t.size();
  for (const auto& c : chars) {
    auto d = c.degree();
    r.sum_dim2 += static_cast<std::uint64_t>(d * d);
  }
  std::vector<ClassFunction> conj;
  for (const auto& c : chars) conj.push_back(c.conj());
  std::atomic<bool> rows{true};
  parallel_for(chars.size(), threads, [&](std::size_t i) {
    for (std::size_t j = i; j < chars.size(); ++j) {
      Cyclo s(t.field());
      for (std::size_t c = 0; c < t.size(); ++c) s += (chars[i][c] * conj[j][c]) * static_cast<long long>(t[c].size);
      long long want = i == j ? static_cast<long long>(t.order()) : 0;
      if (!s.is_integer() || s.to_integer() != want) rows = false;
    }
  });
  r.rows_orthonormal = rows;
  std::atomic<bool> cols{true};
  if (r.complete) {
    parallel_for(t.size(), threads, [&](std::size_t a) {
      for (std::size_t b = a; b < t.size(); ++b) {
        Cyclo s(t.field());
        for (std::size_t k = 0; k < chars.size(); ++k) s += chars[k][a] * conj[k][b];
        long long want = a == b ? static_cast<long long>(t.order() / t[a].size) : 0;
        if (!s.is_integer() || s.to_integer() != want) cols = false;
      }
    });
  }
  r.columns_orthogonal = r.complete && cols;
  return r;
}

// ---- modular character table ----

namespace {

using u64 = std::uint64_t;

u64 powmod(u64 a, u64 e, u64 P) {
  u64 r = 1;
  a %= P;
  while (e) {
    if (e & 1) r = r * a % P;
    a = a * a % P;
    e >>= 1;
  }
  return r;
}

u64 invmod(u64 a, u64 P) { return powmod(a, P - 2, P); }

// Row-reduced basis (rows) of the nullspace of A (n x n).
std::vector<std::vector<u64>> nullspace(std::vector<std::vector<u64>> A, u64 P) {
  std::size_t n = A.size(), m = A.empty() ? 0 : A[0].size();
  std::vector<int> pivcol;
  std::size_t row = 0;
  for (std::size_t c = 0; c < m && row < n; ++c) {
    std::size_t piv = row;
    while (piv < n && A[piv][c] == 0) ++piv;
    if (piv == n) continue;
    std::swap(A[piv], A[row]);
    u64 iv = invmod(A[row][c], P);
    for (auto& x : A[row]) x = x * iv % P;
    for (std::size_t r = 0; r < n; ++r)
      if (r != row && A[r][c]) {
        u64 f = A[r][c];
        for (std::size_t k = 0; k < m; ++k) A[r][k] = (A[r][k] + (P - f) * A[row][k]) % P;
      }
    pivcol.push_back(static_cast<int>(c));
    ++row;
  }
  std::vector<char> is_piv(m, 0);
  for (int c : pivcol) is_piv[c] = 1;
  std::vector<std::vector<u64>> out;
  for (std::size_t f = 0; f < m; ++f) {
    if (is_piv[f]) continue;
    std::vector<u64> v(m, 0);
    v[f] = 1;
    for (std::size_t r = 0; r < pivcol.size(); ++r) v[pivcol[r]] = (P - A[r][f]) % P;
    out.push_back(std::move(v));
  }
  return out;
}

// Reduced echelon basis of the span of `rows`, with pivot columns.
struct Space {
  std::vector<std::vector<u64>> rows;
  std::vector<std::size_t> piv;
};

Space echelon(std::vector<std::vector<u64>> A, u64 P) {
  Space s;
  std::size_t m = A.empty() ? 0 : A[0].size();
  std::size_t row = 0;
  for (std::size_t c = 0; c < m && row < A.size(); ++c) {
    std::size_t p = row;
    while (p < A.size() && A[p][c] == 0) ++p;
    if (p == A.size()) continue;
    std::swap(A[p], A[row]);
    u64 iv = invmod(A[row][c], P);
    for (auto& x : A[row]) x = x * iv % P;
    for (std::size_t r = 0; r < A.size(); ++r)
      if (r != row && A[r][c]) {
        u64 f = A[r][c];
        for (std::size_t k = 0; k < m; ++k) A[r][k] = (A[r][k] + (P - f) * A[row][k]) % P;
      }
    s.piv.push_back(c);
    ++row;
  }
  A.resize(row);
  s.rows = std::move(A);
  return s;
}

// Characteristic polynomial (low degree first) by Faddeev-LeVerrier; needs P > n.
std::vector<u64> charpoly(const std::vector<std::vector<u64>>& A, u64 P) {
  std::size_t n = A.size();
  std::vector<u64> c(n + 1, 0);
  c[n] = 1;
  std::vector<std::vector<u64>> Mk(n, std::vector<u64>(n, 0));
  for (std::size_t k = 1; k <= n; ++k) {
    std::vector<std::vector<u64>> T(n, std::vector<u64>(n, 0));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) {
        if (!A[i][l]) continue;
        for (std::size_t j = 0; j < n; ++j) T[i][j] = (T[i][j] + A[i][l] * Mk[l][j]) % P;
      }
    for (std::size_t i = 0; i < n; ++i) T[i][i] = (T[i][i] + c[n - k + 1]) % P;
    Mk = std::move(T);
    u64 tr = 0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t l = 0; l < n; ++l) tr = (tr + A[i][l] * Mk[l][i]) % P;
    c[n - k] = (P - tr * invmod(k % P, P) % P) % P;
  }
  return c;
}

}  // namespace

std::vector<ClassFunction> character_table(const ClassTablePtr& tp) {
  const ClassTable& t = *tp;
  const Group& G = t.group();
  const std::size_t h = t.size();
  const u64 order = t.order();
  const unsigned N = t.exponent();
  u64 P = (2 * order / N + 1) * N + 1;
  while (!is_prime(P)) P += N;

  // a[j][k][l] = #{x in C_j : x^-1 g_l in C_k}; M_j v = omega_j v on central characters
  std::vector<std::vector<std::vector<u64>>> M(h, std::vector<std::vector<u64>>(h, std::vector<u64>(h, 0)));
  for (std::size_t j = 0; j < h; ++j)
    for (std::size_t l = 0; l < h; ++l)
      for (auto xi : t.members(j)) {
        std::size_t k = t.class_of(G.mul(G.inv(t.elements()[xi]), t[l].rep));
        M[j][k][l] += 1;
      }

  std::vector<Space> spaces;
  {
    std::vector<std::vector<u64>> id(h, std::vector<u64>(h, 0));
    for (std::size_t i = 0; i < h; ++i) id[i][i] = 1;
    spaces.push_back(echelon(id, P));
  }
  for (std::size_t j = 0; j < h; ++j) {
    std::vector<Space> next;
    for (auto& V : spaces) {
      std::size_t d = V.rows.size();
      if (d == 1) {
        next.push_back(std::move(V));
        continue;
      }
      // matrix of M_j (acting on column vectors) on V: image of basis row b is M_j b, whose
      // coordinates are its entries at the pivot columns
      std::vector<std::vector<u64>> A(d, std::vector<u64>(d, 0));  // A[r][c]: coordinate r of image of b_c
      std::vector<std::vector<u64>> img(d, std::vector<u64>(h, 0));
      for (std::size_t c = 0; c < d; ++c) {
        for (std::size_t k = 0; k < h; ++k) {
          u64 s = 0;
          for (std::size_t l = 0; l < h; ++l) s = (s + M[j][k][l] * V.rows[c][l]) % P;
          img[c][k] = s;
        }
        for (std::size_t r = 0; r < d; ++r) A[r][c] = img[c][V.piv[r]];
      }
      auto cp = charpoly(A, P);
      std::size_t found = 0;
      for (u64 x = 0; x < P && found < d; ++x) {
        u64 ev = 0;
        for (std::size_t i = cp.size(); i-- > 0;) ev = (ev * x + cp[i]) % P;
        if (ev) continue;
        auto B = A;
        for (std::size_t r = 0; r < d; ++r) B[r][r] = (B[r][r] + P - x) % P;
        auto ns = nullspace(B, P);
        if (ns.empty()) continue;
        std::vector<std::vector<u64>> vecs;
        for (const auto& coord : ns) {
          std::vector<u64> v(h, 0);
          for (std::size_t r = 0; r < d; ++r)
            for (std::size_t k = 0; k < h; ++k) v[k] = (v[k] + coord[r] * V.rows[r][k]) % P;
          vecs.push_back(std::move(v));
        }
        found += vecs.size();
        next.push_back(echelon(std::move(vecs), P));
      }
      if (found != d) throw Error(ErrorCode::CheckFailed, "class algebra not split modulo P");
    }
    spaces = std::move(next);
  }
  if (spaces.size() != h) throw Error(ErrorCode::CheckFailed, "simultaneous eigenspaces are not all lines");

  // primitive N-th root of unity modulo P standing for zeta_N
  u64 gen = 2;
  auto pf = prime_factors(P - 1);
  while (true) {
    bool ok = true;
    for (auto f : pf)
      if (powmod(gen, (P - 1) / f, P) == 1) ok = false;
    if (ok) break;
    ++gen;
  }
  u64 omega = powmod(gen, (P - 1) / N, P);

  std::vector<ClassFunction> out;
  const std::size_t id = t.identity_class();
  for (const auto& V : spaces) {
    std::vector<u64> w = V.rows[0];
    u64 s = invmod(w[id], P);
    for (auto& x : w) x = x * s % P;
    u64 denom = 0;
    for (std::size_t l = 0; l < h; ++l)
      denom = (denom + w[l] * w[t.inverse_class(l)] % P * invmod(t[l].size % P, P)) % P;
    u64 d2 = order % P * invmod(denom, P) % P;
    auto d = static_cast<u64>(std::llround(std::sqrt(static_cast<double>(d2))));
    if (d * d != d2) throw Error(ErrorCode::CheckFailed, "character degree is not an integer");
    std::vector<u64> val(h);
    for (std::size_t l = 0; l < h; ++l) val[l] = w[l] * (d % P) % P * invmod(t[l].size % P, P) % P;
    std::vector<Cyclo> vals;
    for (std::size_t l = 0; l < h; ++l) {
      u64 o = t[l].order;
      u64 zo = powmod(omega, N / o, P);
      std::vector<u64> pv(o);
      for (u64 k = 0; k < o; ++k) pv[k] = val[t.power_class(l, static_cast<long long>(k))];
      std::vector<long long> counts(N, 0);
      u64 oinv = invmod(o % P, P);
      for (u64 e = 0; e < o; ++e) {
        u64 mu = 0;
        for (u64 k = 0; k < o; ++k) mu = (mu + pv[k] * powmod(zo, (o - (k * e) % o) % o, P)) % P;
        mu = mu * oinv % P;
        if (mu > d) throw Error(ErrorCode::CheckFailed, "eigenvalue multiplicity out of range");
        counts[e * (N / o)] += static_cast<long long>(mu);
      }
      vals.push_back(Cyclo::from_exponent_counts(t.field(), counts));
    }
    out.emplace_back(tp, std::move(vals));
  }
  std::sort(out.begin(), out.end(), [](const ClassFunction& a, const ClassFunction& b) { return a.degree() < b.degree(); });
  return out;
}

}  // namespace edl
