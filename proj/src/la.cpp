#include "orbikit/la.hpp"

#include <boost/multiprecision/cpp_int.hpp>
#include <algorithm>
#include <cstdlib>
#include <numeric>
#include <sstream>
#include <unordered_map>
#include <unordered_set>

namespace orbikit {

using boost::multiprecision::cpp_rational;

long long gcd_ll(long long a, long long b) {
  a = std::llabs(a);
  b = std::llabs(b);
  while (b) {
    long long t = a % b;
    a = b;
    b = t;
  }
  return a;
}

long long mod_pow(long long b, long long e, long long p) {
  long long r = 1 % p;
  b %= p;
  if (b < 0) b += p;
  while (e) {
    if (e & 1) r = (__int128)r * b % p;
    b = (__int128)b * b % p;
    e >>= 1;
  }
  return r;
}

long long mod_inv(long long a, long long p) {
  a %= p;
  if (a < 0) a += p;
  if (a == 0) throw std::runtime_error("mod_inv: zero");
  return mod_pow(a, p - 2, p);
}

namespace {

long long chk(__int128 x) {
  if (x > INT64_MAX / 4 || x < INT64_MIN / 4)
    throw std::overflow_error("la: integer overflow");
  return (long long)x;
}

long long to_ll(const bigint& x) {
  if (x > INT64_MAX / 4 || x < INT64_MIN / 4)
    throw std::overflow_error("la: bigint does not fit");
  return x.convert_to<long long>();
}

long long lcm_ll(long long a, long long b) { return chk((__int128)a / gcd_ll(a, b) * b); }

}  // namespace

SpMat SpMat::identity(int n) {
  SpMat m(n, n);
  for (int i = 0; i < n; ++i) m.ents.push_back({i, i, 1});
  return m;
}

void SpMat::set(int r, int c, long long v) {
  if (r < 0 || r >= rows || c < 0 || c >= cols)
    throw std::out_of_range("SpMat::set");
  if (v != 0) ents.push_back({r, c, v});
}

void SpMat::finish() {
  std::sort(ents.begin(), ents.end(), [](const Ent& a, const Ent& b) {
    return a.r != b.r ? a.r < b.r : a.c < b.c;
  });
  std::vector<Ent> out;
  out.reserve(ents.size());
  for (const Ent& e : ents) {
    if (!out.empty() && out.back().r == e.r && out.back().c == e.c)
      out.back().v = chk((__int128)out.back().v + e.v);
    else
      out.push_back(e);
  }
  out.erase(std::remove_if(out.begin(), out.end(), [](const Ent& e) { return e.v == 0; }),
            out.end());
  ents = std::move(out);
}

void SpMat::normalize() {
  long long g = std::llabs(den);
  for (const Ent& e : ents) {
    g = gcd_ll(g, e.v);
    if (g == 1) break;
  }
  if (g == 0) g = 1;
  long long sgn = den < 0 ? -1 : 1;
  for (Ent& e : ents) e.v = e.v / g * sgn;
  den = den / g * sgn;
}

long long SpMat::at(int r, int c) const {
  auto it = std::lower_bound(ents.begin(), ents.end(), std::make_pair(r, c),
                             [](const Ent& e, const std::pair<int, int>& k) {
                               return e.r != k.first ? e.r < k.first : e.c < k.second;
                             });
  if (it != ents.end() && it->r == r && it->c == c) return it->v;
  return 0;
}

SpMat SpMat::transpose() const {
  SpMat m(cols, rows);
  m.den = den;
  m.ents.reserve(ents.size());
  for (const Ent& e : ents) m.ents.push_back({e.c, e.r, e.v});
  m.finish();
  return m;
}

SpMat SpMat::operator*(const SpMat& o) const {
  if (cols != o.rows) throw std::invalid_argument("SpMat*: shape mismatch");
  // Row start offsets for o.
  std::vector<int> ostart(o.rows + 1, 0);
  for (const Ent& e : o.ents) ostart[e.r + 1]++;
  for (int i = 0; i < o.rows; ++i) ostart[i + 1] += ostart[i];
  SpMat m(rows, o.cols);
  m.den = chk((__int128)den * o.den);
  std::unordered_map<long long, __int128> acc;
  int i = 0;
  while (i < (int)ents.size()) {
    int r = ents[i].r;
    acc.clear();
    for (; i < (int)ents.size() && ents[i].r == r; ++i) {
      int k = ents[i].c;
      long long v = ents[i].v;
      for (int j = ostart[k]; j < ostart[k + 1]; ++j)
        acc[o.ents[j].c] += (__int128)v * o.ents[j].v;
    }
    for (auto& [c, v] : acc)
      if (v != 0) m.ents.push_back({r, (int)c, chk(v)});
  }
  m.finish();
  m.normalize();
  return m;
}

SpMat SpMat::operator+(const SpMat& o) const {
  if (rows != o.rows || cols != o.cols) throw std::invalid_argument("SpMat+: shape mismatch");
  long long L = lcm_ll(den, o.den);
  long long f1 = L / den, f2 = L / o.den;
  SpMat m(rows, cols);
  m.den = L;
  for (const Ent& e : ents) m.ents.push_back({e.r, e.c, chk((__int128)e.v * f1)});
  for (const Ent& e : o.ents) m.ents.push_back({e.r, e.c, chk((__int128)e.v * f2)});
  m.finish();
  m.normalize();
  return m;
}

SpMat SpMat::operator-(const SpMat& o) const { return *this + (-o); }

SpMat SpMat::operator-() const {
  SpMat m = *this;
  for (Ent& e : m.ents) e.v = -e.v;
  return m;
}

SpMat SpMat::scaled(long long num, long long d) const {
  SpMat m = *this;
  if (num == 0) return SpMat(rows, cols);
  for (Ent& e : m.ents) e.v = chk((__int128)e.v * num);
  m.den = chk((__int128)m.den * d);
  m.normalize();
  return m;
}

bool SpMat::operator==(const SpMat& o) const {
  SpMat a = *this, b = o;
  a.normalize();
  b.normalize();
  if (a.rows != b.rows || a.cols != b.cols || a.den != b.den ||
      a.ents.size() != b.ents.size())
    return false;
  for (std::size_t i = 0; i < a.ents.size(); ++i)
    if (a.ents[i].r != b.ents[i].r || a.ents[i].c != b.ents[i].c || a.ents[i].v != b.ents[i].v)
      return false;
  return true;
}

SpMat SpMat::hstack(const std::vector<SpMat>& parts) {
  if (parts.empty()) return SpMat();
  long long L = 1;
  int rows = parts[0].rows, cols = 0;
  for (const SpMat& p : parts) {
    if (p.rows != rows) throw std::invalid_argument("hstack: row mismatch");
    L = lcm_ll(L, p.den);
    cols += p.cols;
  }
  SpMat m(rows, cols);
  m.den = L;
  int off = 0;
  for (const SpMat& p : parts) {
    long long f = L / p.den;
    for (const Ent& e : p.ents) m.ents.push_back({e.r, e.c + off, chk((__int128)e.v * f)});
    off += p.cols;
  }
  m.finish();
  m.normalize();
  return m;
}

SpMat SpMat::vstack(const std::vector<SpMat>& parts) {
  std::vector<SpMat> t;
  t.reserve(parts.size());
  for (const SpMat& p : parts) t.push_back(p.transpose());
  return hstack(t).transpose();
}

SpMat SpMat::diag_sum(const std::vector<SpMat>& parts) {
  long long L = 1;
  int rows = 0, cols = 0;
  for (const SpMat& p : parts) {
    L = lcm_ll(L, p.den);
    rows += p.rows;
    cols += p.cols;
  }
  SpMat m(rows, cols);
  m.den = L;
  int ro = 0, co = 0;
  for (const SpMat& p : parts) {
    long long f = L / p.den;
    for (const Ent& e : p.ents) m.ents.push_back({e.r + ro, e.c + co, chk((__int128)e.v * f)});
    ro += p.rows;
    co += p.cols;
  }
  m.finish();
  m.normalize();
  return m;
}

SpMat SpMat::from_blocks(const std::vector<std::vector<SpMat>>& blocks) {
  std::vector<SpMat> rowparts;
  rowparts.reserve(blocks.size());
  for (const auto& row : blocks) rowparts.push_back(hstack(row));
  return vstack(rowparts);
}

SpMat SpMat::kron(const SpMat& o) const {
  SpMat m(rows * o.rows, cols * o.cols);
  m.den = chk((__int128)den * o.den);
  for (const Ent& a : ents)
    for (const Ent& b : o.ents)
      m.ents.push_back({a.r * o.rows + b.r, a.c * o.cols + b.c, chk((__int128)a.v * b.v)});
  m.finish();
  m.normalize();
  return m;
}

SpMat SpMat::select_cols(const std::vector<int>& idx) const {
  std::unordered_map<int, std::vector<int>> pos;
  for (int j = 0; j < (int)idx.size(); ++j) pos[idx[j]].push_back(j);
  SpMat m(rows, (int)idx.size());
  m.den = den;
  for (const Ent& e : ents) {
    auto it = pos.find(e.c);
    if (it != pos.end())
      for (int j : it->second) m.ents.push_back({e.r, j, e.v});
  }
  m.finish();
  m.normalize();
  return m;
}

SpMat SpMat::select_rows(const std::vector<int>& idx) const {
  return transpose().select_cols(idx).transpose();
}

void SpMat::reduce(const Ring& R) {
  if (R.kind == Ring::Kind::PrimeField) {
    long long p = R.p;
    long long f = mod_inv(den % p, p);
    den = 1;
    for (Ent& e : ents) {
      e.v = (__int128)(e.v % p + p) * f % p;
    }
    ents.erase(std::remove_if(ents.begin(), ents.end(), [](const Ent& e) { return e.v == 0; }),
               ents.end());
  } else {
    normalize();
    if (R.kind == Ring::Kind::Integers && den != 1)
      throw std::runtime_error("la: non-integral matrix over Z");
  }
}

std::string SpMat::to_string() const {
  std::ostringstream os;
  os << rows << "x" << cols;
  if (den != 1) os << " /" << den;
  os << " [";
  for (const Ent& e : ents) os << " (" << e.r << "," << e.c << ")=" << e.v;
  os << " ]";
  return os.str();
}

std::string FGAbGroup::to_string() const {
  std::ostringstream os;
  bool first = true;
  if (rank > 0) {
    os << "Z";
    if (rank > 1) os << "^" << rank;
    first = false;
  }
  for (const bigint& t : torsion) {
    if (!first) os << " + ";
    os << "Z/" << t;
    first = false;
  }
  if (first) os << "0";
  return os.str();
}

// ---------------------------------------------------------------------------
// Dense field elimination (templated over F_p and Q).

namespace {

struct FpOps {
  long long p;
  using T = long long;
  T zero() const { return 0; }
  bool is_zero(T x) const { return x % p == 0; }
  T from(long long num, long long den) const {
    long long x = (num % p + p) % p;
    return (__int128)x * mod_inv(den, p) % p;
  }
  T add(T a, T b) const { return (a + b) % p; }
  T sub(T a, T b) const { return ((a - b) % p + p) % p; }
  T mul(T a, T b) const { return (__int128)a * b % p; }
  T inv(T a) const { return mod_inv(a, p); }
  T neg(T a) const { return (p - a % p) % p; }
};

struct QOps {
  using T = cpp_rational;
  T zero() const { return 0; }
  bool is_zero(const T& x) const { return x == 0; }
  T from(long long num, long long den) const { return T(num, den); }
  T add(const T& a, const T& b) const { return a + b; }
  T sub(const T& a, const T& b) const { return a - b; }
  T mul(const T& a, const T& b) const { return a * b; }
  T inv(const T& a) const { return 1 / a; }
  T neg(const T& a) const { return -a; }
};

template <class F>
std::vector<std::vector<typename F::T>> to_dense(const F& f, const SpMat& A) {
  std::vector<std::vector<typename F::T>> M(A.rows,
                                            std::vector<typename F::T>(A.cols, f.zero()));
  for (const SpMat::Ent& e : A.ents) M[e.r][e.c] = f.from(e.v, A.den);
  return M;
}

// Row-echelon elimination in place; returns list of (pivot row, pivot col).
template <class F>
std::vector<std::pair<int, int>> echelon(const F& f,
                                         std::vector<std::vector<typename F::T>>& M,
                                         int limit_cols = -1) {
  int rows = (int)M.size();
  int cols = rows ? (int)M[0].size() : 0;
  if (limit_cols < 0) limit_cols = cols;
  std::vector<std::pair<int, int>> piv;
  int r = 0;
  for (int c = 0; c < limit_cols && r < rows; ++c) {
    int pr = -1;
    for (int i = r; i < rows; ++i)
      if (!f.is_zero(M[i][c])) {
        pr = i;
        break;
      }
    if (pr < 0) continue;
    std::swap(M[r], M[pr]);
    auto iv = f.inv(M[r][c]);
    for (int j = c; j < cols; ++j) M[r][j] = f.mul(M[r][j], iv);
    for (int i = 0; i < rows; ++i) {
      if (i == r || f.is_zero(M[i][c])) continue;
      auto factor = M[i][c];
      for (int j = c; j < cols; ++j) M[i][j] = f.sub(M[i][j], f.mul(factor, M[r][j]));
    }
    piv.push_back({r, c});
    ++r;
  }
  return piv;
}

template <class F>
int dense_rank(const F& f, const SpMat& A) {
  auto M = to_dense(f, A);
  return (int)echelon(f, M).size();
}

template <class F>
std::vector<int> dense_pivot_cols(const F& f, const SpMat& A) {
  auto M = to_dense(f, A);
  auto piv = echelon(f, M);
  std::vector<int> out;
  out.reserve(piv.size());
  for (auto& pc : piv) out.push_back(pc.second);
  return out;
}

// Solve A X = B; returns dense X (cols(A) x cols(B)) or nullopt.
template <class F>
std::optional<std::vector<std::vector<typename F::T>>> dense_solve(const F& f, const SpMat& A,
                                                                   const SpMat& B) {
  if (A.rows != B.rows) throw std::invalid_argument("solve: shape mismatch");
  auto M = to_dense(f, A);
  auto Bd = to_dense(f, B);
  for (int i = 0; i < A.rows; ++i)
    M[i].insert(M[i].end(), Bd[i].begin(), Bd[i].end());
  if (A.rows == 0)
    return std::vector<std::vector<typename F::T>>(A.cols,
                                                   std::vector<typename F::T>(B.cols, f.zero()));
  auto piv = echelon(f, M, A.cols);
  // Consistency: no pivot may occur in the B-part rows.
  std::vector<bool> pivrow(A.rows, false);
  for (auto& pc : piv) pivrow[pc.first] = true;
  for (int i = 0; i < A.rows; ++i) {
    if (pivrow[i]) continue;
    for (int j = A.cols; j < A.cols + B.cols; ++j)
      if (!f.is_zero(M[i][j])) return std::nullopt;
  }
  std::vector<std::vector<typename F::T>> X(A.cols,
                                            std::vector<typename F::T>(B.cols, f.zero()));
  for (auto& pc : piv)
    for (int j = 0; j < B.cols; ++j) X[pc.second][j] = M[pc.first][A.cols + j];
  return X;
}

// Kernel basis columns (dense result, cols(A) x nullity).
template <class F>
std::vector<std::vector<typename F::T>> dense_kernel(const F& f, const SpMat& A) {
  auto M = to_dense(f, A);
  auto piv = echelon(f, M);
  std::vector<int> pivcol(A.cols, -1);
  for (auto& pc : piv) pivcol[pc.second] = pc.first;
  std::vector<int> freecols;
  for (int c = 0; c < A.cols; ++c)
    if (pivcol[c] < 0) freecols.push_back(c);
  std::vector<std::vector<typename F::T>> K(A.cols,
                                            std::vector<typename F::T>(freecols.size(), f.zero()));
  for (int k = 0; k < (int)freecols.size(); ++k) {
    int fc = freecols[k];
    K[fc][k] = f.from(1, 1);
    for (auto& pc : piv) K[pc.second][k] = f.neg(M[pc.first][fc]);
  }
  return K;
}

SpMat fp_to_sp(const std::vector<std::vector<long long>>& M, long long p) {
  int r = (int)M.size(), c = r ? (int)M[0].size() : 0;
  SpMat out(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      long long v = ((M[i][j] % p) + p) % p;
      if (v) out.ents.push_back({i, j, v});
    }
  out.finish();
  return out;
}

SpMat q_to_sp(const std::vector<std::vector<cpp_rational>>& M) {
  int r = (int)M.size(), c = r ? (int)M[0].size() : 0;
  bigint L = 1;
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) {
      bigint d = boost::multiprecision::denominator(M[i][j]);
      L = L / boost::multiprecision::gcd(L, d) * d;
    }
  SpMat out(r, c);
  out.den = to_ll(L);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j)
      if (M[i][j] != 0) {
        bigint v = boost::multiprecision::numerator(M[i][j]) *
                   (L / boost::multiprecision::denominator(M[i][j]));
        out.ents.push_back({i, j, to_ll(v)});
      }
  out.finish();
  out.normalize();
  return out;
}

// ---------------------------------------------------------------------------
// Sparse elimination over F_p (rank only) and a unit-pivot prepass over Z.

struct SparseRows {
  int nrows = 0, ncols = 0;
  std::vector<std::unordered_map<int, long long>> row;
  std::vector<std::unordered_set<int>> colrows;

  explicit SparseRows(const SpMat& A) : nrows(A.rows), ncols(A.cols) {
    row.resize(nrows);
    colrows.resize(ncols);
    for (const SpMat::Ent& e : A.ents) {
      row[e.r][e.c] = e.v;
      colrows[e.c].insert(e.r);
    }
  }
  void drop(int r, int c) {
    row[r].erase(c);
    colrows[c].erase(r);
  }
  void put(int r, int c, long long v) {
    if (v == 0) {
      drop(r, c);
    } else {
      row[r][c] = v;
      colrows[c].insert(r);
    }
  }
};

int sparse_rank_fp(const SpMat& A, long long p) {
  SparseRows S(A);
  for (auto& rw : S.row)
    for (auto& [c, v] : rw) v = ((v % p) + p) % p;
  // Clean explicit zeros mod p.
  for (int r = 0; r < S.nrows; ++r) {
    std::vector<int> dead;
    for (auto& [c, v] : S.row[r])
      if (v == 0) dead.push_back(c);
    for (int c : dead) S.drop(r, c);
  }
  std::vector<bool> rowdone(S.nrows, false), coldone(S.ncols, false);
  int rank = 0;
  while (true) {
    // Pick active column of minimal fill, then row of minimal fill in it.
    int bc = -1;
    std::size_t best = SIZE_MAX;
    for (int c = 0; c < S.ncols; ++c) {
      if (coldone[c] || S.colrows[c].empty()) continue;
      if (S.colrows[c].size() < best) {
        best = S.colrows[c].size();
        bc = c;
      }
    }
    if (bc < 0) break;
    int br = -1;
    std::size_t bestr = SIZE_MAX;
    for (int r : S.colrows[bc])
      if (S.row[r].size() < bestr) {
        bestr = S.row[r].size();
        br = r;
      }
    long long piv = S.row[br][bc];
    long long iv = mod_inv(piv, p);
    std::vector<std::pair<int, long long>> prow(S.row[br].begin(), S.row[br].end());
    std::vector<int> targets(S.colrows[bc].begin(), S.colrows[bc].end());
    for (int r : targets) {
      if (r == br) continue;
      long long f = (__int128)S.row[r][bc] * iv % p;
      for (auto& [c, v] : prow) {
        long long cur = 0;
        auto it = S.row[r].find(c);
        if (it != S.row[r].end()) cur = it->second;
        long long nv = ((cur - (__int128)f * v) % p + p) % p;
        S.put(r, c, nv);
      }
    }
    // Retire pivot row and column.
    for (auto& [c, v] : prow) S.drop(br, c);
    rowdone[br] = true;
    coldone[bc] = true;
    ++rank;
  }
  return rank;
}

// ---------------------------------------------------------------------------
// Dense Smith normal form over Z (cpp_int), with optional transforms.

struct DenseZ {
  int rows = 0, cols = 0;
  std::vector<std::vector<bigint>> a;
  DenseZ(int r, int c) : rows(r), cols(c), a(r, std::vector<bigint>(c, 0)) {}
};

void smith_dense(DenseZ& A, std::vector<bigint>& inv, DenseZ* U, DenseZ* V) {
  int r = A.rows, c = A.cols;
  if (U) {
    *U = DenseZ(r, r);
    for (int i = 0; i < r; ++i) U->a[i][i] = 1;
  }
  if (V) {
    *V = DenseZ(c, c);
    for (int i = 0; i < c; ++i) V->a[i][i] = 1;
  }
  auto row_sub = [&](int i, int j, const bigint& q) {  // row_i -= q*row_j
    for (int k = 0; k < c; ++k) A.a[i][k] -= q * A.a[j][k];
    if (U)
      for (int k = 0; k < r; ++k) U->a[i][k] -= q * U->a[j][k];
  };
  auto col_sub = [&](int i, int j, const bigint& q) {  // col_i -= q*col_j
    for (int k = 0; k < r; ++k) A.a[k][i] -= q * A.a[k][j];
    if (V)
      for (int k = 0; k < c; ++k) V->a[k][i] -= q * V->a[k][j];
  };
  auto row_swap = [&](int i, int j) {
    std::swap(A.a[i], A.a[j]);
    if (U) std::swap(U->a[i], U->a[j]);
  };
  auto col_swap = [&](int i, int j) {
    for (int k = 0; k < r; ++k) std::swap(A.a[k][i], A.a[k][j]);
    if (V)
      for (int k = 0; k < c; ++k) std::swap(V->a[k][i], V->a[k][j]);
  };
  auto row_neg = [&](int i) {
    for (int k = 0; k < c; ++k) A.a[i][k] = -A.a[i][k];
    if (U)
      for (int k = 0; k < r; ++k) U->a[i][k] = -U->a[i][k];
  };

  int t = 0;
  while (t < r && t < c) {
    // Find minimal nonzero entry in the remaining block.
    int pi = -1, pj = -1;
    bigint best = 0;
    for (int i = t; i < r; ++i)
      for (int j = t; j < c; ++j)
        if (A.a[i][j] != 0) {
          bigint m = abs(A.a[i][j]);
          if (pi < 0 || m < best) {
            best = m;
            pi = i;
            pj = j;
          }
        }
    if (pi < 0) break;
    row_swap(t, pi);
    col_swap(t, pj);
    bool clean = false;
    while (!clean) {
      clean = true;
      for (int i = t + 1; i < r; ++i) {
        if (A.a[i][t] == 0) continue;
        bigint q = A.a[i][t] / A.a[t][t];
        row_sub(i, t, q);
        if (A.a[i][t] != 0) {
          row_swap(t, i);  // strictly smaller remainder becomes pivot
          clean = false;
        }
      }
      for (int j = t + 1; j < c; ++j) {
        if (A.a[t][j] == 0) continue;
        bigint q = A.a[t][j] / A.a[t][t];
        col_sub(j, t, q);
        if (A.a[t][j] != 0) {
          col_swap(t, j);
          clean = false;
        }
      }
    }
    if (A.a[t][t] < 0) row_neg(t);
    // Enforce divisibility against the remaining block.
    bool redo = false;
    for (int i = t + 1; i < r && !redo; ++i)
      for (int j = t + 1; j < c && !redo; ++j)
        if (A.a[i][j] % A.a[t][t] != 0) {
          row_sub(t, i, -1);  // adds row i to row t
          redo = true;
        }
    if (redo) continue;
    ++t;
  }
  inv.clear();
  for (int i = 0; i < t; ++i) inv.push_back(A.a[i][i]);
}

DenseZ sp_to_densez(const SpMat& A) {
  if (A.den != 1) throw std::runtime_error("smith: matrix not integral");
  DenseZ M(A.rows, A.cols);
  for (const SpMat::Ent& e : A.ents) M.a[e.r][e.c] = e.v;
  return M;
}

}  // namespace

SmithResult smith(const SpMat& A0) {
  SpMat A = A0;
  A.normalize();
  if (A.den != 1) throw std::runtime_error("smith: matrix not integral");
  SmithResult res;
  long long small = 400;
  if (A.rows <= small && A.cols <= small) {
    DenseZ M = sp_to_densez(A);
    smith_dense(M, res.invariants, nullptr, nullptr);
    return res;
  }
  // Sparse prepass: eliminate with +-1 pivots, minimal-fill heuristic.
  SparseRows S(A);
  int units = 0;
  while (true) {
    int bc = -1, br = -1;
    std::size_t best = SIZE_MAX;
    for (int c = 0; c < S.ncols; ++c) {
      if (S.colrows[c].empty()) continue;
      for (int r : S.colrows[c]) {
        long long v = S.row[r].at(c);
        if (v != 1 && v != -1) continue;
        std::size_t cost = (S.row[r].size() - 1) * (S.colrows[c].size() - 1);
        if (cost < best) {
          best = cost;
          bc = c;
          br = r;
          if (cost == 0) break;
        }
      }
      if (best == 0) break;
    }
    if (bc < 0) break;
    long long piv = S.row[br][bc];
    std::vector<std::pair<int, long long>> prow(S.row[br].begin(), S.row[br].end());
    std::vector<int> targets(S.colrows[bc].begin(), S.colrows[bc].end());
    for (int r : targets) {
      if (r == br) continue;
      long long f = S.row[r][bc] * piv;  // entry / piv since piv = +-1
      for (auto& [c, v] : prow) {
        long long cur = 0;
        auto it = S.row[r].find(c);
        if (it != S.row[r].end()) cur = it->second;
        S.put(r, c, chk((__int128)cur - (__int128)f * v));
      }
    }
    for (auto& [c, v] : prow) S.drop(br, c);
    ++units;
  }
  // Gather the remainder into a dense matrix.
  std::vector<int> liver, livec;
  std::vector<int> rmap(S.nrows, -1), cmap(S.ncols, -1);
  for (int r = 0; r < S.nrows; ++r)
    if (!S.row[r].empty()) {
      rmap[r] = (int)liver.size();
      liver.push_back(r);
    }
  for (int c = 0; c < S.ncols; ++c)
    if (!S.colrows[c].empty()) {
      cmap[c] = (int)livec.size();
      livec.push_back(c);
    }
  DenseZ M((int)liver.size(), (int)livec.size());
  for (int r : liver)
    for (auto& [c, v] : S.row[r]) M.a[rmap[r]][cmap[c]] = v;
  std::vector<bigint> tail;
  smith_dense(M, tail, nullptr, nullptr);
  res.invariants.assign(units, bigint(1));
  res.invariants.insert(res.invariants.end(), tail.begin(), tail.end());
  return res;
}

int rank(const Ring& R, const SpMat& A) {
  if (A.rows == 0 || A.cols == 0) return 0;
  bool big = (long long)A.rows * A.cols > 1000000;
  if (R.kind == Ring::Kind::PrimeField) {
    if (big) return sparse_rank_fp(A, R.p);
    return dense_rank(FpOps{R.p}, A);
  }
  if (big) return smith(A).rank();
  return dense_rank(QOps{}, A);
}

SpMat kernel(const Ring& R, const SpMat& A) {
  if (R.kind == Ring::Kind::PrimeField) {
    FpOps f{R.p};
    auto K = dense_kernel(f, A);
    return fp_to_sp(K, R.p);
  }
  if (R.kind == Ring::Kind::Rationals) {
    QOps f;
    auto K = dense_kernel(f, A);
    SpMat out = q_to_sp(K);
    // Scale each column to a primitive integer vector.
    std::vector<SpMat> cols;
    for (int j = 0; j < out.cols; ++j) {
      SpMat c = out.col(j);
      c.den = 1;
      c.normalize();
      cols.push_back(c);
    }
    return out.cols ? SpMat::hstack(cols) : SpMat(A.cols, 0);
  }
  // Integral kernel via Smith transforms: columns of V past the rank.
  SpMat A1 = A;
  A1.reduce(R);
  DenseZ M = sp_to_densez(A1);
  std::vector<bigint> inv;
  DenseZ U(0, 0), V(0, 0);
  smith_dense(M, inv, &U, &V);
  int r = (int)inv.size();
  SpMat out(A.cols, A.cols - r);
  for (int i = 0; i < A.cols; ++i)
    for (int j = r; j < A.cols; ++j)
      if (V.a[i][j] != 0) out.ents.push_back({i, j - r, to_ll(V.a[i][j])});
  out.finish();
  return out;
}

std::optional<SpMat> solve(const Ring& R, const SpMat& A, const SpMat& B) {
  if (R.kind == Ring::Kind::PrimeField) {
    FpOps f{R.p};
    auto X = dense_solve(f, A, B);
    if (!X) return std::nullopt;
    SpMat out = fp_to_sp(*X, R.p);
    out.rows = A.cols;  // the dense shape degenerates when A has no columns
    out.cols = B.cols;
    return out;
  }
  if (R.kind == Ring::Kind::Rationals) {
    QOps f;
    auto X = dense_solve(f, A, B);
    if (!X) return std::nullopt;
    SpMat out = q_to_sp(*X);
    out.rows = A.cols;
    out.cols = B.cols;
    return out;
  }
  // Integral solve via Smith transforms.
  SpMat An = A, Bn = B;
  An.reduce(R);
  Bn.reduce(R);
  DenseZ M = sp_to_densez(An);
  std::vector<bigint> inv;
  DenseZ U(0, 0), V(0, 0);
  smith_dense(M, inv, &U, &V);
  int r = (int)inv.size();
  auto Bd = sp_to_densez(Bn);
  SpMat X(A.cols, B.cols);
  for (int j = 0; j < B.cols; ++j) {
    std::vector<bigint> y(A.rows, 0);
    for (int i = 0; i < A.rows; ++i)
      for (int k = 0; k < A.rows; ++k) y[i] += U.a[i][k] * Bd.a[k][j];
    std::vector<bigint> z(A.cols, 0);
    for (int i = 0; i < A.rows; ++i) {
      if (i < r) {
        if (y[i] % inv[i] != 0) return std::nullopt;
        z[i] = y[i] / inv[i];
      } else if (y[i] != 0) {
        return std::nullopt;
      }
    }
    for (int i = 0; i < A.cols; ++i) {
      bigint x = 0;
      for (int k = 0; k < A.cols; ++k) x += V.a[i][k] * z[k];
      if (x != 0) X.ents.push_back({i, j, to_ll(x)});
    }
  }
  X.finish();
  return X;
}

FGAbGroup cokernel_group(const Ring& R, int ambient, const SpMat& B) {
  FGAbGroup g;
  if (R.is_field()) {
    g.rank = ambient - rank(R, B);
    return g;
  }
  SmithResult s = smith(B);
  g.rank = ambient - s.rank();
  for (const bigint& d : s.invariants)
    if (d > 1) g.torsion.push_back(d);
  return g;
}

FGAbGroup homology_group(const Ring& R, const SpMat& dk, const SpMat& dk1) {
  int n = dk.cols;
  if (dk1.rows != n && dk1.rows != 0)
    throw std::invalid_argument("homology_group: shape mismatch");
  FGAbGroup g;
  if (R.is_field()) {
    g.rank = n - rank(R, dk) - rank(R, dk1);
    return g;
  }
  // For a complex of free modules: free rank from ranks of the differentials,
  // torsion from the invariant factors of the incoming differential.
  SmithResult s1 = smith(dk);
  SmithResult s2 = smith(dk1);
  g.rank = n - s1.rank() - s2.rank();
  for (const bigint& d : s2.invariants)
    if (d > 1) g.torsion.push_back(d);
  return g;
}

std::vector<int> pivot_columns(const Ring& R, const SpMat& A) {
  if (R.kind == Ring::Kind::PrimeField) return dense_pivot_cols(FpOps{R.p}, A);
  return dense_pivot_cols(QOps{}, A);
}

std::vector<int> complement_of_colspan(const Ring& R, int ambient, const SpMat& S) {
  std::vector<int> piv = pivot_columns(R, S.transpose());
  std::vector<bool> used(ambient, false);
  for (int i : piv) used[i] = true;
  std::vector<int> out;
  for (int i = 0; i < ambient; ++i)
    if (!used[i]) out.push_back(i);
  return out;
}

std::optional<SpMat> express_mod(const Ring& R, const SpMat& S, const SpMat& B,
                                 const SpMat& V) {
  SpMat A = SpMat::hstack({S, B});
  auto X = solve(R, A, V);
  if (!X) return std::nullopt;
  std::vector<int> idx(B.cols);
  std::iota(idx.begin(), idx.end(), S.cols);
  return X->select_rows(idx);
}

bool is_invertible(const Ring& R, const SpMat& A) {
  if (A.rows != A.cols) return false;
  if (A.rows == 0) return true;
  if (R.is_field()) return rank(R, A) == A.rows;
  SpMat B = A;
  B.reduce(R);
  SmithResult s = smith(B);
  if (s.rank() != A.rows) return false;
  for (const bigint& d : s.invariants)
    if (d != 1) return false;
  return true;
}

bool la_equal(const Ring& R, const SpMat& A, const SpMat& B) {
  if (A.rows != B.rows || A.cols != B.cols) return false;
  SpMat a = A, b = B;
  a.reduce(R);
  b.reduce(R);
  return a == b;
}

}  // namespace orbikit
