#pragma once

#include <optional>
#include <vector>

#include "iwalab/base.hpp"

namespace iwalab {

// Dense matrix over Z/p^N (or over Z when used with the integer SNF).
// Row-major; module elements are row vectors and lattices are row spans.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<i64> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(size_t(r) * c, 0) {}
  i64& at(int r, int c) { return a[size_t(r) * cols + c]; }
  i64 at(int r, int c) const { return a[size_t(r) * cols + c]; }
  static Mat identity(int n);
  Mat transposed() const;
  std::vector<i64> row(int r) const;
  void set_row(int r, const std::vector<i64>& v);
  bool operator==(const Mat&) const = default;
};

Mat mat_mul(const Mat& A, const Mat& B, const ZModRing& R);
std::vector<i64> row_times_mat(const std::vector<i64>& x, const Mat& A, const ZModRing& R);
std::vector<i64> mat_times_col(const Mat& A, const std::vector<i64>& x, const ZModRing& R);
Mat mat_reduce(const Mat& A, const ZModRing& R);

// Smith normal form over Z/p^N: U*A*V = D with U, V invertible and D
// diagonal with entries p^{e_1} | p^{e_2} | ..., exponents in [0, N]
// (p^N == 0). `exps` lists e_i for i < min(rows, cols).
struct SnfResult {
  Mat D;
  Mat U;
  Mat V;
  std::vector<int> exps;
  int unit_rank = 0;  // number of exponent-0 divisors
};
SnfResult snf(const Mat& A, const ZModRing& R, bool want_transforms = true);

// Integer SNF (diagonal d_1 | d_2 | ..., nonnegative). Used to classify
// finitely presented abelian groups. Throws `overflow` if intermediate
// values leave the i64 range.
std::vector<i64> snf_int(Mat A);

// Howell form of the row span: canonical echelon basis of a submodule of
// (Z/p^N)^cols. Two row spans are equal iff their Howell forms are equal.
Mat howell_form(const Mat& A, const ZModRing& R);

// Reduce v modulo the row span of a Howell form; the result is the
// canonical coset representative.
std::vector<i64> howell_reduce(const std::vector<i64>& v, const Mat& H, const ZModRing& R);

bool in_row_span(const std::vector<i64>& v, const Mat& H, const ZModRing& R);
// log_p of the number of elements in the row span of Howell form H.
int span_size_log(const Mat& H, const ZModRing& R);
bool span_equal(const Mat& A, const Mat& B, const ZModRing& R);
Mat span_sum(const Mat& A, const Mat& B, const ZModRing& R);
Mat span_intersection(const Mat& A, const Mat& B, const ZModRing& R);
// {x : x*M in rowspan(L)} as a Howell form (M maps row vectors by x -> x*M).
Mat span_preimage(const Mat& M, const Mat& L, const ZModRing& R);

// Solve x*A = b over Z/p^N (x a row vector). Returns a particular solution
// and a Howell basis of the solution kernel {x : x*A = 0}.
struct LinSolve {
  std::vector<i64> particular;
  Mat kernel;
};
std::optional<LinSolve> solve_row(const Mat& A, const std::vector<i64>& b, const ZModRing& R);
Mat kernel_row(const Mat& A, const ZModRing& R);

// Finite Z/p^N-module given as (Z/p^N)^dim / rowspan(relations), with the
// coordinate change to invariant (cyclic) coordinates precomputed.
struct QuotientModule {
  ZModRing ring;
  int dim = 0;
  Mat rel_howell;          // canonical relation lattice
  std::vector<int> exps;   // invariant exponents e_i > 0, non-increasing
  Mat to_inv;              // x (ambient row) -> y = x * to_inv, invariant coords
  Mat from_inv;            // y -> x = y * from_inv
  std::vector<int> keep;   // ambient-coordinate indices of surviving invariants

  static QuotientModule from_relations(const Mat& relations, const ZModRing& R);
  int p_rank() const { return int(exps.size()); }
  int size_log() const;
  bool is_trivial() const { return exps.empty(); }

  std::vector<i64> inv_coords(const std::vector<i64>& ambient) const;
  std::vector<i64> ambient_coords(const std::vector<i64>& inv) const;
  std::vector<i64> normal_form_inv(const std::vector<i64>& inv) const;
  bool is_zero(const std::vector<i64>& ambient) const;
  // additive order p^k of an ambient representative
  int order_log(const std::vector<i64>& ambient) const;
  // ambient representatives of the invariant generators
  std::vector<std::vector<i64>> generators() const;
  // action matrix on invariant coordinates induced by x -> x*M on ambient rows
  Mat induced_action(const Mat& M) const;
  // enumerate all elements in invariant coordinates (throws too_large beyond cap)
  std::vector<std::vector<i64>> enumerate(i64 cap = 1000000) const;
};

}  // namespace iwalab
