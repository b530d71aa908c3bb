#include "edl/mat.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "edl/error.hpp"

namespace edl {

const char* group_name(GroupKind k) { return k == GroupKind::GL ? "GL" : "SL"; }

GroupKind parse_group(const std::string& s) {
  if (s == "GL" || s == "GL2" || s == "gl" || s == "gl2") return GroupKind::GL;
  if (s == "SL" || s == "SL2" || s == "sl" || s == "sl2") return GroupKind::SL;
  throw Error(ErrorCode::InvalidArgument, "unknown group " + s);
}

Group::Group(GroupKind kind, RingPtr ring, int n) : kind_(kind), ring_(std::move(ring)), n_(n) {
  if (!ring_) throw Error(ErrorCode::InvalidArgument, "null ring");
  if (n < 1 || n > kMaxN) throw Error(ErrorCode::InvalidArgument, "matrix size out of range");
  long double bits = static_cast<long double>(n * n * ring_->r()) * std::log2(static_cast<long double>(field().order()));
  key_fits_ = bits < 127.5L;
}

std::string Group::name() const {
  return std::string(group_name(kind_)) + std::to_string(n_) + "(F_" + std::to_string(field().order()) +
         "[z]/z^" + std::to_string(r()) + (ring_->e() > 1 ? ", e=" + std::to_string(ring_->e()) : "") + ")";
}

Mat Group::zero() const {
  Mat m;
  m.n = n_;
  return m;
}

Mat Group::identity() const { return scalar(ring_->one()); }

Mat Group::scalar(const RingElem& a) const {
  Mat m = zero();
  for (int i = 0; i < n_; ++i) m.at(i, i) = a;
  return m;
}

Mat Group::diag(const std::vector<RingElem>& d) const {
  if (static_cast<int>(d.size()) != n_) throw Error(ErrorCode::InvalidArgument, "diag size mismatch");
  Mat m = zero();
  for (int i = 0; i < n_; ++i) m.at(i, i) = d[i];
  return m;
}

Mat Group::from_rows(const std::vector<std::vector<RingElem>>& rows) const {
  if (static_cast<int>(rows.size()) != n_) throw Error(ErrorCode::InvalidArgument, "row count mismatch");
  Mat m = zero();
  for (int i = 0; i < n_; ++i) {
    if (static_cast<int>(rows[i].size()) != n_) throw Error(ErrorCode::InvalidArgument, "column count mismatch");
    for (int j = 0; j < n_; ++j) m.at(i, j) = ring_->truncate(rows[i][j], r());
  }
  return m;
}

Mat Group::elementary(int i, int j, const RingElem& x) const {
  Mat m = identity();
  m.at(i, j) = ring_->add(m.at(i, j), x);
  return m;
}

Mat Group::weyl() const {
  Mat m = zero();
  for (int i = 0; i < n_; ++i) m.at(i, n_ - 1 - i) = ring_->one();
  if (n_ == 2) m.at(1, 0) = ring_->neg(ring_->one());
  if (n_ == 3) m.at(1, 1) = ring_->neg(ring_->one());
  return m;
}

Mat Group::add(const Mat& a, const Mat& b) const {
  Mat m = zero();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(i, j) = ring_->add(a.at(i, j), b.at(i, j));
  return m;
}

Mat Group::sub(const Mat& a, const Mat& b) const {
  Mat m = zero();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(i, j) = ring_->sub(a.at(i, j), b.at(i, j));
  return m;
}

Mat Group::mul(const Mat& a, const Mat& b) const {
  Mat m = zero();
  const Ring& R = *ring_;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      RingElem s = R.mul(a.at(i, 0), b.at(0, j));
      for (int k = 1; k < n_; ++k) s = R.add(s, R.mul(a.at(i, k), b.at(k, j)));
      m.at(i, j) = s;
    }
  return m;
}

Mat Group::mul_scalar(const Mat& a, const RingElem& x) const {
  Mat m = zero();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(i, j) = ring_->mul(a.at(i, j), x);
  return m;
}

RingElem Group::det(const Mat& a) const {
  const Ring& R = *ring_;
  if (n_ == 1) return a.at(0, 0);
  if (n_ == 2) return R.sub(R.mul(a.at(0, 0), a.at(1, 1)), R.mul(a.at(0, 1), a.at(1, 0)));
  auto m2 = [&](int r0, int r1, int c0, int c1) {
    return R.sub(R.mul(a.at(r0, c0), a.at(r1, c1)), R.mul(a.at(r0, c1), a.at(r1, c0)));
  };
  RingElem d = R.mul(a.at(0, 0), m2(1, 2, 1, 2));
  d = R.sub(d, R.mul(a.at(0, 1), m2(1, 2, 0, 2)));
  return R.add(d, R.mul(a.at(0, 2), m2(1, 2, 0, 1)));
}

RingElem Group::trace(const Mat& a) const {
  RingElem t = ring_->zero();
  for (int i = 0; i < n_; ++i) t = ring_->add(t, a.at(i, i));
  return t;
}

Mat Group::inv(const Mat& a) const {
  const Ring& R = *ring_;
  RingElem di = R.inv(det(a));
  Mat m = zero();
  if (n_ == 1) {
    m.at(0, 0) = di;
    return m;
  }
  if (n_ == 2) {
    m.at(0, 0) = R.mul(a.at(1, 1), di);
    m.at(0, 1) = R.neg(R.mul(a.at(0, 1), di));
    m.at(1, 0) = R.neg(R.mul(a.at(1, 0), di));
    m.at(1, 1) = R.mul(a.at(0, 0), di);
    return m;
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      int r0 = (j + 1) % 3, r1 = (j + 2) % 3, c0 = (i + 1) % 3, c1 = (i + 2) % 3;
      RingElem c = R.sub(R.mul(a.at(r0, c0), a.at(r1, c1)), R.mul(a.at(r0, c1), a.at(r1, c0)));
      m.at(i, j) = R.mul(c, di);
    }
  return m;
}

Mat Group::commutator(const Mat& a, const Mat& b) const { return mul(mul(a, b), mul(inv(a), inv(b))); }

Mat Group::pow(const Mat& a, std::int64_t e) const {
  Mat base = e < 0 ? inv(a) : a;
  std::uint64_t k = static_cast<std::uint64_t>(e < 0 ? -e : e);
  Mat r = identity();
  while (k) {
    if (k & 1) r = mul(r, base);
    base = mul(base, base);
    k >>= 1;
  }
  return r;
}

Mat Group::apply(const RingEndo& g, const Mat& a) const {
  if (g.is_identity()) return a;
  Mat m = zero();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(i, j) = ring_->apply(g, a.at(i, j));
  return m;
}

Mat Group::reduce(const Mat& a, int k) const {
  Mat m = zero();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) m.at(i, j) = ring_->truncate(a.at(i, j), k);
  return m;
}

bool Group::is_identity(const Mat& a) const {
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j ? !ring_->is_one(a.at(i, j)) : !ring_->is_zero(a.at(i, j))) return false;
    }
  return true;
}

bool Group::contains(const Mat& a) const {
  if (a.n != n_) return false;
  RingElem d = det(a);
  return kind_ == GroupKind::GL ? ring_->is_unit(d) : ring_->is_one(d);
}

std::uint64_t Group::element_order(const Mat& a) const {
  Mat x = a;
  for (std::uint64_t k = 1; k <= (std::uint64_t{1} << 32); ++k) {
    if (is_identity(x)) return k;
    x = mul(x, a);
  }
  throw Error(ErrorCode::BudgetExceeded, "element order too large");
}

std::uint64_t Group::order() const {
  unsigned __int128 Q = field().order(), res = 1;
  unsigned __int128 Qn = 1;
  for (int i = 0; i < n_; ++i) Qn *= Q;
  unsigned __int128 Qi = 1;
  for (int i = 0; i < n_; ++i) {
    res *= (Qn - Qi);
    Qi *= Q;
  }
  int dim = n_ * n_;
  if (kind_ == GroupKind::SL) {
    res /= (Q - 1);
    dim -= 1;
  }
  for (int k = 0; k < dim * (r() - 1); ++k) {
    res *= Q;
    if (res >> 64) throw Error(ErrorCode::BudgetExceeded, "group order exceeds 64 bits");
  }
  return static_cast<std::uint64_t>(res);
}

MatKey Group::key(const Mat& a) const {
  if (!key_fits_) throw Error(ErrorCode::BudgetExceeded, "matrix keys do not fit in 128 bits");
  MatKey k = 0, Q = field().order();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      for (int c = 0; c < r(); ++c) k = k * Q + a.at(i, j).c[c];
  return k;
}

Mat Group::from_key(MatKey k) const {
  Mat m = zero();
  MatKey Q = field().order();
  for (int i = n_; i-- > 0;)
    for (int j = n_; j-- > 0;)
      for (int c = r(); c-- > 0;) {
        m.at(i, j).c[c] = static_cast<Elem>(k % Q);
        k /= Q;
      }
  return m;
}

std::vector<std::vector<std::string>> Group::to_strings(const Mat& a) const {
  std::vector<std::vector<std::string>> rows(n_);
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) rows[i].push_back(ring_->str(a.at(i, j)));
  return rows;
}

Mat Group::from_strings(const std::vector<std::vector<std::string>>& rows) const {
  std::vector<std::vector<RingElem>> r(rows.size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (const auto& s : rows[i]) r[i].push_back(ring_->parse(s));
  return from_rows(r);
}

std::string Group::str(const Mat& a) const {
  std::string s = "[";
  for (int i = 0; i < n_; ++i) {
    s += i ? ",[" : "[";
    for (int j = 0; j < n_; ++j) s += (j ? ",\"" : "\"") + ring_->str(a.at(i, j)) + "\"";
    s += "]";
  }
  return s + "]";
}

Mat Group::parse(const std::string& s) const {
  std::vector<std::string> tok;
  std::size_t pos = 0;
  while ((pos = s.find('"', pos)) != std::string::npos) {
    std::size_t end = s.find('"', pos + 1);
    if (end == std::string::npos) throw Error(ErrorCode::InvalidArgument, "unterminated string in " + s);
    tok.push_back(s.substr(pos + 1, end - pos - 1));
    pos = end + 1;
  }
  if (static_cast<int>(tok.size()) != n_ * n_) throw Error(ErrorCode::InvalidArgument, "expected n^2 entries in " + s);
  std::vector<std::vector<std::string>> rows(n_);
  for (int i = 0; i < n_ * n_; ++i) rows[i / n_].push_back(tok[i]);
  return from_strings(rows);
}

Domain Group::full_domain() const {
  Domain d;
  std::uint64_t Q = field().order();
  d.lists.emplace_back();
  for (std::uint64_t v = 0; v < Q; ++v) d.lists[0].push_back(static_cast<Elem>(v));
  d.member.emplace_back(Q, true);
  for (auto& row : d.which) row.fill(0);
  return d;
}

int Group::pivot_row(const Mat& g) const {
  // First row whose cofactor in column 0 has a unit residue; cofactors ignore column 0.
  const Field& F = field();
  for (int i = 0; i < n_; ++i) {
    Elem c;
    if (n_ == 1) {
      c = 1;
    } else if (n_ == 2) {
      c = i == 0 ? g.at(1, 1).c[0] : F.neg(g.at(0, 1).c[0]);
    } else {
      int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
      c = F.sub(F.mul(g.at(r0, 1).c[0], g.at(r1, 2).c[0]), F.mul(g.at(r0, 2).c[0], g.at(r1, 1).c[0]));
    }
    if (c) return i;
  }
  return -1;
}

namespace {

// Residue cofactor of entry (i, 0); matches pivot_row's sign convention.
Elem residue_cofactor(const Field& F, const Mat& g, int n, int i) {
  if (n == 1) return 1;
  if (n == 2) return i == 0 ? g.at(1, 1).c[0] : F.neg(g.at(0, 1).c[0]);
  int r0 = (i + 1) % 3, r1 = (i + 2) % 3;
  return F.sub(F.mul(g.at(r0, 1).c[0], g.at(r1, 2).c[0]), F.mul(g.at(r0, 2).c[0], g.at(r1, 1).c[0]));
}

}  // namespace

std::vector<Mat> Group::residues(const Domain& dom, const LevelPred& prune) const {
  const Field& F = field();
  std::vector<Mat> out;
  Mat g = zero();
  std::vector<int> free;  // entry indices assigned by the odometer
  auto run = [&](const std::vector<int>& entries, const std::function<void()>& leaf) {
    std::vector<std::size_t> pos(entries.size(), 0);
    for (std::size_t t = 0; t < entries.size(); ++t) {
      const auto& L = dom.lists[dom.which[entries[t]][0]];
      if (L.empty()) return;
      g.e[entries[t]].c[0] = L[0];
    }
    while (true) {
      leaf();
      std::size_t t = 0;
      for (; t < entries.size(); ++t) {
        const auto& L = dom.lists[dom.which[entries[t]][0]];
        if (++pos[t] < L.size()) {
          g.e[entries[t]].c[0] = L[pos[t]];
          break;
        }
        pos[t] = 0;
        g.e[entries[t]].c[0] = L[0];
      }
      if (t == entries.size()) break;
    }
  };
  const Group res = at_level(1);
  auto accept = [&] {
    if (prune && !prune(1, g)) return;
    out.push_back(g);
  };
  if (kind_ == GroupKind::GL) {
    for (int i = 0; i < n_; ++i)
      for (int j = 0; j < n_; ++j) free.push_back(i * kMaxN + j);
    run(free, [&] {
      if (res.det(g).c[0] != 0) accept();
    });
    return out;
  }
  std::vector<int> rest;
  for (int i = 0; i < n_; ++i)
    for (int j = 1; j < n_; ++j) rest.push_back(i * kMaxN + j);
  auto rest_leaf = [&] {
    int piv = pivot_row(g);
    if (piv < 0) return;
    std::vector<int> col;
    for (int i = 0; i < n_; ++i)
      if (i != piv) col.push_back(i * kMaxN);
    Elem cof = residue_cofactor(F, g, n_, piv);
    Mat saved = g;
    auto col_leaf = [&] {
      g.at(piv, 0).c[0] = 0;
      Elem d0 = res.det(g).c[0];
      Elem x = F.div(F.sub(1, d0), cof);
      if (!dom.allows(piv * kMaxN, 0, x)) return;
      g.at(piv, 0).c[0] = x;
      accept();
    };
    // The column-0 odometer must not disturb the outer one's entries.
    std::vector<std::size_t> pos(col.size(), 0);
    bool empty = false;
    for (std::size_t t = 0; t < col.size(); ++t) {
      const auto& L = dom.lists[dom.which[col[t]][0]];
      if (L.empty()) empty = true;
      else g.e[col[t]].c[0] = L[0];
    }
    if (!empty) {
      while (true) {
        col_leaf();
        std::size_t t = 0;
        for (; t < col.size(); ++t) {
          const auto& L = dom.lists[dom.which[col[t]][0]];
          if (++pos[t] < L.size()) {
            g.e[col[t]].c[0] = L[pos[t]];
            break;
          }
          pos[t] = 0;
          g.e[col[t]].c[0] = L[0];
        }
        if (t == col.size()) break;
      }
    }
    for (int i = 0; i < n_; ++i) g.at(i, 0) = saved.at(i, 0);
  };
  if (rest.empty()) {
    rest_leaf();
  } else {
    run(rest, rest_leaf);
  }
  return out;
}

bool Group::lift_level(Mat& g, int k, const Domain& dom, const LevelPred& prune, const Visit& visit) const {
  if (k == r()) {
    visit(g);
    return true;
  }
  const Field& F = field();
  const Group lev = at_level(k + 1);
  int piv = kind_ == GroupKind::SL ? pivot_row(g) : -1;
  Elem cof = piv >= 0 ? residue_cofactor(F, g, n_, piv) : 0;
  std::vector<int> entries;
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j)
      if (!(i == piv && j == 0)) entries.push_back(i * kMaxN + j);
  std::vector<std::size_t> pos(entries.size(), 0);
  for (std::size_t t = 0; t < entries.size(); ++t) {
    const auto& L = dom.lists[dom.which[entries[t]][k]];
    if (L.empty()) return false;
    g.e[entries[t]].c[k] = L[0];
  }
  while (true) {
    bool ok = true;
    if (piv >= 0) {
      g.at(piv, 0).c[k] = 0;
      Elem dk = lev.det(g).c[k];
      Elem x = F.div(F.neg(dk), cof);
      if (dom.allows(piv * kMaxN, k, x)) g.at(piv, 0).c[k] = x;
      else ok = false;
    }
    if (ok && (!prune || prune(k + 1, g))) lift_level(g, k + 1, dom, prune, visit);
    std::size_t t = 0;
    for (; t < entries.size(); ++t) {
      const auto& L = dom.lists[dom.which[entries[t]][k]];
      if (++pos[t] < L.size()) {
        g.e[entries[t]].c[k] = L[pos[t]];
        break;
      }
      pos[t] = 0;
      g.e[entries[t]].c[k] = L[0];
    }
    if (t == entries.size()) break;
  }
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) g.at(i, j).c[k] = 0;
  return true;
}

void Group::lift(const Mat& residue, const Domain& dom, const LevelPred& prune, const Visit& visit) const {
  Mat g = residue;
  lift_level(g, 1, dom, prune, visit);
}

void Group::enumerate(const Domain& dom, const LevelPred& prune, const Visit& visit) const {
  for (const auto& g0 : residues(dom, prune)) lift(g0, dom, prune, visit);
}

std::vector<Mat> Group::elements() const {
  std::vector<Mat> out;
  enumerate([&](const Mat& g) { out.push_back(g); });
  return out;
}

std::uint64_t Group::count(const Domain& dom, const LevelPred& prune, const std::function<bool(const Mat&)>& keep,
                           int threads) const {
  auto res = residues(dom, prune);
  std::atomic<std::uint64_t> total{0};
  parallel_for(res.size(), threads, [&](std::size_t i) {
    std::uint64_t local = 0;
    lift(res[i], dom, prune, [&](const Mat& g) {
      if (!keep || keep(g)) ++local;
    });
    total.fetch_add(local, std::memory_order_relaxed);
  });
  return total.load();
}

std::vector<Mat> Group::generators() const {
  std::vector<Mat> gens;
  const Ring& R = *ring_;
  const Field& F = field();
  for (int i = 0; i < n_; ++i)
    for (int j = 0; j < n_; ++j) {
      if (i == j) continue;
      for (int k = 0; k < r(); ++k)
        for (unsigned t = 0; t < F.degree(); ++t) gens.push_back(elementary(i, j, R.z_pow(k, F.gen_pow(t))));
    }
  if (kind_ == GroupKind::GL || n_ == 1) {
    auto d = [&](const RingElem& u) {
      std::vector<RingElem> v(n_, R.one());
      v[0] = u;
      return diag(v);
    };
    gens.push_back(d(R.scalar(F.gen_pow(1))));
    for (int k = 1; k < r(); ++k)
      for (unsigned t = 0; t < F.degree(); ++t) gens.push_back(d(R.add(R.one(), R.z_pow(k, F.gen_pow(t)))));
  }
  if (kind_ == GroupKind::SL && n_ == 1) gens.clear();
  return gens;
}

void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || count < 2) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  std::exception_ptr err;
  std::atomic<bool> failed{false};
  int nt = static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(threads), count));
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&] {
      try {
        for (std::size_t i; (i = next.fetch_add(1)) < count && !failed.load();) fn(i);
      } catch (...) {
        if (!failed.exchange(true)) err = std::current_exception();
      }
    });
  for (auto& th : pool) th.join();
  if (err) std::rethrow_exception(err);
}

}  // namespace edl
