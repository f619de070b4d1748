#include "iwalab/linalg.hpp"

#include <algorithm>
#include <cstdlib>

namespace iwalab {

const char* errc_name(errc c) {
  switch (c) {
    case errc::non_unit: return "NonUnit";
    case errc::not_squarefree_mod_p: return "NotSquarefreeModP";
    case errc::level_below_kappa: return "LevelBelowKappa";
    case errc::bad_levels: return "BadLevels";
    case errc::precision_too_low: return "PrecisionTooLow";
    case errc::not_distinguished: return "NotDistinguished";
    case errc::no_solution_at_precision: return "NoSolutionAtPrecision";
    case errc::inconsistent_parameters: return "InconsistentParameters";
    case errc::p_divides_order: return "PDividesOrder";
    case errc::non_abelian_without_candidates: return "NonAbelianWithoutCandidates";
    case errc::not_idempotent: return "NotIdempotent";
    case errc::search_exhausted: return "SearchExhausted";
    case errc::not_cyclic: return "NotCyclic";
    case errc::modulus_mismatch: return "ModulusMismatch";
    case errc::no_presentation: return "NoPresentation";
    case errc::infinite_group: return "InfiniteGroup";
    case errc::not_minimal_system: return "NotMinimalSystem";
    case errc::not_injective_tower: return "NotInjectiveTower";
    case errc::infinite_quotient: return "InfiniteQuotient";
    case errc::no_stable_suffix: return "NoStableSuffix";
    case errc::kappa_too_small: return "KappaTooSmall";
    case errc::has_mu_part: return "HasMuPart";
    case errc::too_large: return "TooLarge";
    case errc::insufficient_levels: return "InsufficientLevels";
    case errc::no_consistent_twist: return "NoConsistentTwist";
    case errc::input_error: return "InputError";
    case errc::overflow: return "Overflow";
    case errc::internal: return "Internal";
  }
  return "Unknown";
}

bool is_prime(i64 p) {
  if (p < 2) return false;
  for (i64 d = 2; d * d <= p; ++d)
    if (p % d == 0) return false;
  return true;
}

i64 pow_i64_checked(i64 base, int exp) {
  i128 r = 1;
  for (int i = 0; i < exp; ++i) {
    r *= base;
    if (r > i128(INT64_MAX)) fail(errc::overflow, "integer power out of range");
  }
  return i64(r);
}

ZModRing::ZModRing(i64 prime, int precision) : p(prime), N(precision) {
  if (!is_prime(p)) fail(errc::input_error, "p must be prime");
  if (N < 1) fail(errc::input_error, "precision must be >= 1");
  mod = pow_i64_checked(p, N);
  if (mod > (i64(1) << 31)) fail(errc::overflow, "p^N exceeds the supported 2^31 bound");
}

i64 ZModRing::pow(i64 a, u64 e) const {
  i64 r = 1 % mod;
  a = reduce(a);
  while (e) {
    if (e & 1) r = mul(r, a);
    a = mul(a, a);
    e >>= 1;
  }
  return r;
}

int ZModRing::val(i64 x) const {
  if (x % mod == 0) return N;
  x = reduce(x);
  int v = 0;
  while (x % p == 0) {
    x /= p;
    ++v;
  }
  return v;
}

i64 ZModRing::inv(i64 x) const {
  x = reduce(x);
  if (!is_unit(x)) fail(errc::non_unit, "residue divisible by p");
  // Hensel lift of the mod-p inverse.
  i64 y = 1;
  {
    i64 xm = x % p;
    for (i64 c = 1; c < p; ++c)
      if ((xm * c) % p == 1) {
        y = c;
        break;
      }
  }
  i64 m = p;
  while (m < mod) {
    m = (m > mod / m) ? mod : m * m;
    // y <- y*(2 - x*y) mod m
    u64 t = (u64(x) * u64(y)) % u64(m);
    i64 two_minus = (2 - i64(t)) % m;
    if (two_minus < 0) two_minus += m;
    y = i64((u64(y) * u64(two_minus)) % u64(m));
  }
  return y % mod;
}

Mat Mat::identity(int n) {
  Mat I(n, n);
  for (int i = 0; i < n; ++i) I.at(i, i) = 1;
  return I;
}

Mat Mat::transposed() const {
  Mat T(cols, rows);
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) T.at(c, r) = at(r, c);
  return T;
}

std::vector<i64> Mat::row(int r) const {
  return std::vector<i64>(a.begin() + size_t(r) * cols, a.begin() + size_t(r + 1) * cols);
}

void Mat::set_row(int r, const std::vector<i64>& v) {
  std::copy(v.begin(), v.end(), a.begin() + size_t(r) * cols);
}

Mat mat_reduce(const Mat& A, const ZModRing& R) {
  Mat B = A;
  for (auto& x : B.a) x = R.reduce(x);
  return B;
}

Mat mat_mul(const Mat& A, const Mat& B, const ZModRing& R) {
  if (A.cols != B.rows) fail(errc::internal, "matrix dimension mismatch");
  Mat C(A.rows, B.cols);
  for (int i = 0; i < A.rows; ++i)
    for (int k = 0; k < A.cols; ++k) {
      i64 aik = R.reduce(A.at(i, k));
      if (!aik) continue;
      for (int j = 0; j < B.cols; ++j)
        C.at(i, j) = i64((u64(C.at(i, j)) + u64(aik) * u64(R.reduce(B.at(k, j)))) % u64(R.mod));
    }
  return C;
}

std::vector<i64> row_times_mat(const std::vector<i64>& x, const Mat& A, const ZModRing& R) {
  if (int(x.size()) != A.rows) fail(errc::internal, "row*mat dimension mismatch");
  std::vector<i64> y(A.cols, 0);
  for (int i = 0; i < A.rows; ++i) {
    i64 xi = R.reduce(x[i]);
    if (!xi) continue;
    for (int j = 0; j < A.cols; ++j)
      y[j] = i64((u64(y[j]) + u64(xi) * u64(R.reduce(A.at(i, j)))) % u64(R.mod));
  }
  return y;
}

std::vector<i64> mat_times_col(const Mat& A, const std::vector<i64>& x, const ZModRing& R) {
  if (int(x.size()) != A.cols) fail(errc::internal, "mat*col dimension mismatch");
  std::vector<i64> y(A.rows, 0);
  for (int i = 0; i < A.rows; ++i) {
    u64 acc = 0;
    for (int j = 0; j < A.cols; ++j)
      acc = (acc + u64(R.reduce(A.at(i, j))) * u64(R.reduce(x[j]))) % u64(R.mod);
    y[i] = i64(acc);
  }
  return y;
}

namespace {

// Row/column elementary operations with optional transform tracking.
struct SnfWork {
  Mat A;
  Mat U, V, Vinv;
  bool track;
  ZModRing R;

  void swap_rows(int i, int j) {
    if (i == j) return;
    for (int c = 0; c < A.cols; ++c) std::swap(A.at(i, c), A.at(j, c));
    if (track)
      for (int c = 0; c < U.cols; ++c) std::swap(U.at(i, c), U.at(j, c));
  }
  void swap_cols(int i, int j) {
    if (i == j) return;
    for (int r = 0; r < A.rows; ++r) std::swap(A.at(r, i), A.at(r, j));
    if (track) {
      for (int r = 0; r < V.rows; ++r) std::swap(V.at(r, i), V.at(r, j));
      for (int c = 0; c < Vinv.cols; ++c) std::swap(Vinv.at(i, c), Vinv.at(j, c));
    }
  }
  // row_i -= m * row_j
  void row_sub(int i, int j, i64 m) {
    m = R.reduce(m);
    if (!m) return;
    for (int c = 0; c < A.cols; ++c) A.at(i, c) = R.sub(A.at(i, c), R.mul(m, A.at(j, c)));
    if (track)
      for (int c = 0; c < U.cols; ++c) U.at(i, c) = R.sub(U.at(i, c), R.mul(m, U.at(j, c)));
  }
  // col_i -= m * col_j ; V tracks column ops, Vinv tracks the inverse op.
  void col_sub(int i, int j, i64 m) {
    m = R.reduce(m);
    if (!m) return;
    for (int r = 0; r < A.rows; ++r) A.at(r, i) = R.sub(A.at(r, i), R.mul(m, A.at(r, j)));
    if (track) {
      for (int r = 0; r < V.rows; ++r) V.at(r, i) = R.sub(V.at(r, i), R.mul(m, V.at(r, j)));
      for (int c = 0; c < Vinv.cols; ++c) Vinv.at(j, c) = R.add(Vinv.at(j, c), R.mul(m, Vinv.at(i, c)));
    }
  }
  void scale_row(int i, i64 u) {
    for (int c = 0; c < A.cols; ++c) A.at(i, c) = R.mul(A.at(i, c), u);
    if (track)
      for (int c = 0; c < U.cols; ++c) U.at(i, c) = R.mul(U.at(i, c), u);
  }
};

}  // namespace

SnfResult snf(const Mat& A0, const ZModRing& R, bool want_transforms) {
  SnfWork w{mat_reduce(A0, R), {}, {}, {}, want_transforms, R};
  if (want_transforms) {
    w.U = Mat::identity(A0.rows);
    w.V = Mat::identity(A0.cols);
    w.Vinv = Mat::identity(A0.cols);
  }
  int n = std::min(A0.rows, A0.cols);
  SnfResult res;
  for (int k = 0; k < n; ++k) {
    // pivot: entry of minimal valuation in the remaining block
    int bi = -1, bj = -1, bv = R.N + 1;
    for (int i = k; i < w.A.rows; ++i)
      for (int j = k; j < w.A.cols; ++j) {
        if (!w.A.at(i, j)) continue;
        int v = R.val(w.A.at(i, j));
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) {
      for (int t = k; t < n; ++t) res.exps.push_back(R.N);
      break;
    }
    w.swap_rows(k, bi);
    w.swap_cols(k, bj);
    // normalize pivot to exactly p^bv
    i64 piv = w.A.at(k, k);
    i64 unit_part = piv / pow_i64_checked(R.p, bv);
    w.scale_row(k, R.inv(unit_part));
    i64 pk = pow_i64_checked(R.p, bv);
    // clear column and row; all entries have valuation >= bv by pivot choice
    for (int i = k + 1; i < w.A.rows; ++i)
      if (w.A.at(i, k)) w.row_sub(i, k, w.A.at(i, k) / pk);
    for (int j = k + 1; j < w.A.cols; ++j)
      if (w.A.at(k, j)) w.col_sub(j, k, w.A.at(k, j) / pk);
    res.exps.push_back(bv);
  }
  res.D = w.A;
  if (want_transforms) {
    res.U = w.U;
    res.V = w.V;
  }
  res.unit_rank = int(std::count(res.exps.begin(), res.exps.end(), 0));
  res.D = mat_reduce(res.D, R);
  return res;
}

std::vector<i64> snf_int(Mat A) {
  auto mulchk = [](i64 a, i64 b) {
    i128 r = i128(a) * b;
    if (r > INT64_MAX || r < INT64_MIN) fail(errc::overflow, "integer SNF overflow");
    return i64(r);
  };
  int n = std::min(A.rows, A.cols);
  std::vector<i64> diag;
  for (int k = 0; k < n; ++k) {
    for (;;) {
      int bi = -1, bj = -1;
      i64 best = 0;
      for (int i = k; i < A.rows; ++i)
        for (int j = k; j < A.cols; ++j) {
          i64 x = std::abs(A.at(i, j));
          if (x && (bi < 0 || x < best)) {
            best = x;
            bi = i;
            bj = j;
          }
        }
      if (bi < 0) break;
      if (bi != k)
        for (int c = 0; c < A.cols; ++c) std::swap(A.at(k, c), A.at(bi, c));
      if (bj != k)
        for (int r = 0; r < A.rows; ++r) std::swap(A.at(r, k), A.at(r, bj));
      i64 piv = A.at(k, k);
      bool clean = true;
      for (int i = k + 1; i < A.rows; ++i) {
        i64 q = A.at(i, k) / piv;
        if (q)
          for (int c = k; c < A.cols; ++c) A.at(i, c) -= mulchk(q, A.at(k, c));
        if (A.at(i, k)) clean = false;
      }
      for (int j = k + 1; j < A.cols; ++j) {
        i64 q = A.at(k, j) / piv;
        if (q)
          for (int r = k; r < A.rows; ++r) A.at(r, j) -= mulchk(q, A.at(r, k));
        if (A.at(k, j)) clean = false;
      }
      if (!clean) continue;
      // enforce divisibility: pivot must divide the rest of the block
      bool divides = true;
      for (int i = k + 1; i < A.rows && divides; ++i)
        for (int j = k + 1; j < A.cols && divides; ++j)
          if (A.at(i, j) % piv) {
            for (int c = k; c < A.cols; ++c) A.at(k, c) += A.at(i, c);
            divides = false;
          }
      if (divides) break;
    }
    diag.push_back(std::abs(A.at(k, k)));
  }
  return diag;
}

namespace {

int leading_col(const std::vector<i64>& v) {
  for (size_t j = 0; j < v.size(); ++j)
    if (v[j]) return int(j);
  return int(v.size());
}

}  // namespace

Mat howell_form(const Mat& A0, const ZModRing& R) {
  int cols = A0.cols;
  std::vector<std::vector<i64>> work;
  for (int r = 0; r < A0.rows; ++r) {
    std::vector<i64> v = A0.row(r);
    for (auto& x : v) x = R.reduce(x);
    if (leading_col(v) < cols) work.push_back(std::move(v));
  }
  std::vector<std::vector<i64>> pivots;  // echelon rows, by increasing leading col
  for (int c = 0; c < cols; ++c) {
    for (;;) {
      int best = -1, bv = R.N + 1;
      for (size_t i = 0; i < work.size(); ++i) {
        if (leading_col(work[i]) != c) continue;
        int v = R.val(work[i][c]);
        if (v < bv) {
          bv = v;
          best = int(i);
        }
      }
      if (best < 0) break;
      std::vector<i64> piv = work[best];
      work.erase(work.begin() + best);
      i64 pk = pow_i64_checked(R.p, bv);
      i64 unit_part = piv[c] / pk;
      i64 ui = R.inv(unit_part);
      for (auto& x : piv) x = R.mul(x, ui);
      // eliminate c from the remaining rows with this leading column
      for (auto& w : work) {
        if (leading_col(w) != c) continue;
        i64 m = w[c] / pk;  // valuation >= bv by pivot choice
        for (int j = 0; j < cols; ++j) w[j] = R.sub(w[j], R.mul(m, piv[j]));
      }
      std::erase_if(work, [&](const std::vector<i64>& w) { return leading_col(w) >= cols; });
      // Howell completion: p^{N-v} * pivot has a later leading column
      if (bv > 0) {
        i64 s = pow_i64_checked(R.p, R.N - bv);
        std::vector<i64> extra(cols, 0);
        for (int j = 0; j < cols; ++j) extra[j] = R.mul(piv[j], s);
        if (leading_col(extra) < cols) work.push_back(std::move(extra));
      }
      pivots.push_back(std::move(piv));
      break;
    }
  }
  // canonical: entries above each pivot reduced mod p^{val(pivot)}
  for (size_t i = 0; i < pivots.size(); ++i) {
    int c = leading_col(pivots[i]);
    i64 pk = pow_i64_checked(R.p, R.val(pivots[i][c]));
    for (size_t j = 0; j < i; ++j) {
      i64 q = pivots[j][c] / pk;
      if (!q) continue;
      for (int t = 0; t < cols; ++t) pivots[j][t] = R.sub(pivots[j][t], R.mul(q, pivots[i][t]));
    }
  }
  Mat H(int(pivots.size()), cols);
  for (size_t i = 0; i < pivots.size(); ++i) H.set_row(int(i), pivots[i]);
  return H;
}

std::vector<i64> howell_reduce(const std::vector<i64>& v0, const Mat& H, const ZModRing& R) {
  std::vector<i64> v(v0);
  for (auto& x : v) x = R.reduce(x);
  for (int i = 0; i < H.rows; ++i) {
    int c = leading_col(H.row(i));
    if (c >= int(v.size()) || !v[c]) continue;
    i64 pk = pow_i64_checked(R.p, R.val(H.at(i, c)));
    int vv = R.val(v[c]);
    if (vv < R.val(H.at(i, c))) continue;  // not reducible by this pivot
    i64 q = v[c] / pk;
    for (int j = 0; j < H.cols; ++j) v[j] = R.sub(v[j], R.mul(q, H.at(i, j)));
  }
  return v;
}

bool in_row_span(const std::vector<i64>& v, const Mat& H, const ZModRing& R) {
  auto r = howell_reduce(v, H, R);
  return std::all_of(r.begin(), r.end(), [](i64 x) { return x == 0; });
}

int span_size_log(const Mat& H, const ZModRing& R) {
  int lg = 0;
  for (int i = 0; i < H.rows; ++i) {
    int c = leading_col(H.row(i));
    lg += R.N - R.val(H.at(i, c));
  }
  return lg;
}

bool span_equal(const Mat& A, const Mat& B, const ZModRing& R) {
  return howell_form(A, R) == howell_form(B, R);
}

Mat span_sum(const Mat& A, const Mat& B, const ZModRing& R) {
  Mat S(A.rows + B.rows, A.cols);
  for (int i = 0; i < A.rows; ++i) S.set_row(i, A.row(i));
  for (int i = 0; i < B.rows; ++i) S.set_row(A.rows + i, B.row(i));
  return howell_form(S, R);
}

Mat kernel_row(const Mat& A, const ZModRing& R) {
  // Howell of [A | I]; rows with zero A-part give the kernel in the I-part.
  Mat M(A.rows, A.cols + A.rows);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
    M.at(i, A.cols + i) = 1;
  }
  Mat H = howell_form(M, R);
  std::vector<std::vector<i64>> ker;
  for (int i = 0; i < H.rows; ++i) {
    auto row = H.row(i);
    if (leading_col(row) >= A.cols)
      ker.emplace_back(row.begin() + A.cols, row.end());
  }
  Mat K(int(ker.size()), A.rows);
  for (size_t i = 0; i < ker.size(); ++i) K.set_row(int(i), ker[i]);
  return K;
}

std::optional<LinSolve> solve_row(const Mat& A, const std::vector<i64>& b, const ZModRing& R) {
  Mat M(A.rows, A.cols + A.rows);
  for (int i = 0; i < A.rows; ++i) {
    for (int j = 0; j < A.cols; ++j) M.at(i, j) = A.at(i, j);
    M.at(i, A.cols + i) = 1;
  }
  Mat H = howell_form(M, R);
  // reduce (b | 0) against rows with leading column inside the A-part
  std::vector<i64> v(A.cols + A.rows, 0);
  for (int j = 0; j < A.cols; ++j) v[j] = R.reduce(b[j]);
  for (int i = 0; i < H.rows; ++i) {
    auto row = H.row(i);
    int c = leading_col(row);
    if (c >= A.cols) break;
    if (!v[c]) continue;
    i64 pk = pow_i64_checked(R.p, R.val(H.at(i, c)));
    if (R.val(v[c]) < R.val(H.at(i, c))) continue;
    i64 q = v[c] / pk;
    for (int j = 0; j < H.cols; ++j) v[j] = R.sub(v[j], R.mul(q, H.at(i, j)));
  }
  for (int j = 0; j < A.cols; ++j)
    if (v[j]) return std::nullopt;
  LinSolve out;
  out.particular.resize(A.rows);
  for (int i = 0; i < A.rows; ++i) out.particular[i] = R.neg(v[A.cols + i]);
  out.kernel = kernel_row(A, R);
  return out;
}

Mat span_intersection(const Mat& A, const Mat& B, const ZModRing& R) {
  // pairs (x, y) with x*A = y*B; intersection elements are x*A
  Mat S(A.rows + B.rows, A.cols);
  for (int i = 0; i < A.rows; ++i) S.set_row(i, A.row(i));
  for (int i = 0; i < B.rows; ++i) {
    auto r = B.row(i);
    for (auto& x : r) x = R.neg(R.reduce(x));
    S.set_row(A.rows + i, r);
  }
  Mat K = kernel_row(S, R);
  Mat gens(K.rows, A.cols);
  for (int i = 0; i < K.rows; ++i) {
    std::vector<i64> full = K.row(i);
    std::vector<i64> x(full.begin(), full.begin() + A.rows);
    gens.set_row(i, row_times_mat(x, A, R));
  }
  return howell_form(gens, R);
}

Mat span_preimage(const Mat& M, const Mat& L, const ZModRing& R) {
  // pairs (x, y) with x*M - y*L = 0; preimage is spanned by the x-parts
  Mat S(M.rows + L.rows, M.cols);
  for (int i = 0; i < M.rows; ++i) S.set_row(i, M.row(i));
  for (int i = 0; i < L.rows; ++i) {
    auto r = L.row(i);
    for (auto& x : r) x = R.neg(R.reduce(x));
    S.set_row(M.rows + i, r);
  }
  Mat K = kernel_row(S, R);
  Mat gens(K.rows, M.rows);
  for (int i = 0; i < K.rows; ++i) {
    std::vector<i64> full = K.row(i);
    std::vector<i64> x(full.begin(), full.begin() + M.rows);
    gens.set_row(i, x);
  }
  return howell_form(gens, R);
}

QuotientModule QuotientModule::from_relations(const Mat& relations, const ZModRing& R) {
  QuotientModule Q;
  Q.ring = R;
  Q.dim = relations.cols;
  Q.rel_howell = howell_form(relations, R);

  SnfWork w{mat_reduce(relations, R), {}, Mat::identity(relations.cols),
            Mat::identity(relations.cols), true, R};
  w.U = Mat::identity(relations.rows);
  int n = std::min(relations.rows, relations.cols);
  std::vector<int> exps(relations.cols, R.N);
  for (int k = 0; k < n; ++k) {
    int bi = -1, bj = -1, bv = R.N + 1;
    for (int i = k; i < w.A.rows; ++i)
      for (int j = k; j < w.A.cols; ++j) {
        if (!w.A.at(i, j)) continue;
        int v = R.val(w.A.at(i, j));
        if (v < bv) {
          bv = v;
          bi = i;
          bj = j;
        }
      }
    if (bi < 0) break;
    w.swap_rows(k, bi);
    w.swap_cols(k, bj);
    i64 pk = pow_i64_checked(R.p, bv);
    i64 unit_part = w.A.at(k, k) / pk;
    w.scale_row(k, R.inv(unit_part));
    for (int i = k + 1; i < w.A.rows; ++i)
      if (w.A.at(i, k)) w.row_sub(i, k, w.A.at(i, k) / pk);
    for (int j = k + 1; j < w.A.cols; ++j)
      if (w.A.at(k, j)) w.col_sub(j, k, w.A.at(k, j) / pk);
    exps[k] = bv;
  }
  // invariant coordinate j survives with exponent exps[j] when > 0
  Q.to_inv = w.V;
  Q.from_inv = w.Vinv;
  for (int j = 0; j < relations.cols; ++j)
    if (exps[j] > 0) {
      Q.keep.push_back(j);
      Q.exps.push_back(exps[j]);
    }
  // sort invariants non-increasing, permuting kept coordinates alongside
  std::vector<size_t> idx(Q.keep.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = i;
  std::stable_sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return Q.exps[a] > Q.exps[b]; });
  std::vector<int> keep2, exps2;
  for (auto i : idx) {
    keep2.push_back(Q.keep[i]);
    exps2.push_back(Q.exps[i]);
  }
  Q.keep = keep2;
  Q.exps = exps2;
  return Q;
}

int QuotientModule::size_log() const {
  int s = 0;
  for (int e : exps) s += e;
  return s;
}

std::vector<i64> QuotientModule::inv_coords(const std::vector<i64>& ambient) const {
  auto y = row_times_mat(ambient, to_inv, ring);
  std::vector<i64> out(exps.size());
  for (size_t i = 0; i < keep.size(); ++i)
    out[i] = y[keep[i]] % pow_i64_checked(ring.p, exps[i]);
  return out;
}

std::vector<i64> QuotientModule::ambient_coords(const std::vector<i64>& inv) const {
  std::vector<i64> y(dim, 0);
  for (size_t i = 0; i < keep.size(); ++i) y[keep[i]] = ring.reduce(inv[i]);
  return row_times_mat(y, from_inv, ring);
}

std::vector<i64> QuotientModule::normal_form_inv(const std::vector<i64>& inv) const {
  std::vector<i64> out(exps.size());
  for (size_t i = 0; i < exps.size(); ++i) {
    i64 m = pow_i64_checked(ring.p, exps[i]);
    i64 r = inv[i] % m;
    out[i] = r < 0 ? r + m : r;
  }
  return out;
}

bool QuotientModule::is_zero(const std::vector<i64>& ambient) const {
  auto y = inv_coords(ambient);
  return std::all_of(y.begin(), y.end(), [](i64 x) { return x == 0; });
}

int QuotientModule::order_log(const std::vector<i64>& ambient) const {
  auto y = inv_coords(ambient);
  int o = 0;
  for (size_t i = 0; i < exps.size(); ++i) {
    if (!y[i]) continue;
    int v = 0;
    i64 x = y[i];
    while (x % ring.p == 0) {
      x /= ring.p;
      ++v;
    }
    o = std::max(o, exps[i] - v);
  }
  return o;
}

std::vector<std::vector<i64>> QuotientModule::generators() const {
  std::vector<std::vector<i64>> g;
  for (size_t i = 0; i < keep.size(); ++i) {
    std::vector<i64> inv(exps.size(), 0);
    inv[i] = 1;
    g.push_back(ambient_coords(inv));
  }
  return g;
}

Mat QuotientModule::induced_action(const Mat& M) const {
  // y -> y * (from_inv * M * to_inv), restricted to the kept coordinates
  Mat full = mat_mul(mat_mul(from_inv, M, ring), to_inv, ring);
  Mat out(int(keep.size()), int(keep.size()));
  for (size_t i = 0; i < keep.size(); ++i)
    for (size_t j = 0; j < keep.size(); ++j)
      out.at(int(i), int(j)) = full.at(keep[i], keep[j]);
  return out;
}

std::vector<std::vector<i64>> QuotientModule::enumerate(i64 cap) const {
  i128 total = 1;
  for (int e : exps) {
    total *= pow_i64_checked(ring.p, e);
    if (total > cap) fail(errc::too_large, "module too large to enumerate");
  }
  std::vector<std::vector<i64>> all;
  std::vector<i64> cur(exps.size(), 0);
  all.reserve(size_t(total));
  for (;;) {
    all.push_back(cur);
    size_t i = 0;
    for (; i < exps.size(); ++i) {
      cur[i]++;
      if (cur[i] < pow_i64_checked(ring.p, exps[i])) break;
      cur[i] = 0;
    }
    if (i == exps.size()) break;
  }
  return all;
}

}  // namespace iwalab
