#pragma once

#include <vector>

#include "iwalab/base.hpp"

namespace iwalab {

// Capped-precision p-adic integer: a residue mod p^N together with (p, N).
// Values are immutable; mixed-precision arithmetic truncates to the smaller
// N and marks the result as truncated.
class PadicInt {
 public:
  PadicInt(i64 p, int N, i64 value);

  i64 p() const { return ring_.p; }
  int precision() const { return ring_.N; }
  i64 residue() const { return residue_; }
  bool truncated() const { return truncated_; }
  const ZModRing& ring() const { return ring_; }

  PadicInt operator+(const PadicInt& o) const;
  PadicInt operator-(const PadicInt& o) const;
  PadicInt operator*(const PadicInt& o) const;
  PadicInt operator-() const;
  bool operator==(const PadicInt& o) const;

  bool is_unit() const { return ring_.is_unit(residue_); }
  bool is_zero() const { return residue_ == 0; }

 private:
  ZModRing ring_;
  i64 residue_;
  bool truncated_ = false;

  PadicInt with(i64 r) const;
  friend PadicInt padic_inv(const PadicInt&);
  friend class PadicPoly;
};

struct PadicVal {
  int v;             // in [0, N]
  bool at_least;     // true when residue == 0: "v_p >= N"
};

// Two-sided inverse of a unit; throws NonUnit when v_p(x) > 0.
PadicInt padic_inv(const PadicInt& x);
PadicVal padic_val(const PadicInt& x);

// Polynomial over Z/p^N, coefficients low-degree first, leading coefficient
// nonzero (the zero polynomial has an empty coefficient list).
class PadicPoly {
 public:
  PadicPoly(i64 p, int N) : ring_(p, N) {}
  PadicPoly(i64 p, int N, std::vector<i64> coeffs);

  i64 p() const { return ring_.p; }
  int precision() const { return ring_.N; }
  const ZModRing& ring() const { return ring_; }
  const std::vector<i64>& coeffs() const { return c_; }
  int degree() const { return int(c_.size()) - 1; }
  bool is_zero() const { return c_.empty(); }
  bool is_monic() const;
  i64 coeff(int i) const { return i < int(c_.size()) ? c_[i] : 0; }

  PadicPoly operator+(const PadicPoly& o) const;
  PadicPoly operator-(const PadicPoly& o) const;
  PadicPoly operator*(const PadicPoly& o) const;
  bool operator==(const PadicPoly& o) const;

  i64 eval(i64 x) const;
  PadicPoly derivative() const;
  // division by a divisor with unit leading coefficient
  std::pair<PadicPoly, PadicPoly> divrem(const PadicPoly& divisor) const;

 private:
  ZModRing ring_;
  std::vector<i64> c_;
  void normalize();
};

// Monic irreducible-mod-p factors of f lifted to Z/p^N; the product of the
// returned polynomials is f mod p^N. Requires f monic with squarefree
// reduction mod p (throws NotSquarefreeModP otherwise).
std::vector<PadicPoly> hensel_factor(const PadicPoly& f);

// The e*f*g bookkeeping of the completion splitting in the unramified
// simple case: number of Hensel factors and their degrees.
struct CompletionReport {
  int g = 0;
  std::vector<int> degrees;
};
CompletionReport split_completions(const PadicPoly& f);

}  // namespace iwalab
