#pragma once

#include <optional>
#include <vector>

#include "iwalab/linalg.hpp"

namespace iwalab {

// Element of Z_p[T] with exact integer coefficients (low degree first).
// Exact construction of omega_n and norm elements is capped at
// deg = p^{n-kappa} <= 64 so binomials stay inside i64.
struct LambdaElem {
  i64 p = 0;
  int kappa = 0;
  std::vector<i64> c;

  LambdaElem() = default;
  LambdaElem(i64 p_, int kappa_, std::vector<i64> coeffs);
  int degree() const { return int(c.size()) - 1; }
  i64 coeff(int i) const { return i >= 0 && i < int(c.size()) ? c[i] : 0; }
  bool is_zero() const { return c.empty(); }
  bool is_monic() const { return !c.empty() && c.back() == 1; }
  bool is_distinguished() const;

  LambdaElem operator+(const LambdaElem& o) const;
  LambdaElem operator-(const LambdaElem& o) const;
  LambdaElem operator*(const LambdaElem& o) const;
  bool operator==(const LambdaElem& o) const = default;
};

// omega_n = (T+1)^{p^{n-kappa}} - 1, exact coefficients.
LambdaElem omega(i64 p, int kappa, int n);
// N_{m,n} = omega_m / omega_n, exact quotient (m > n >= kappa).
LambdaElem norm_elem(i64 p, int kappa, int m, int n);

// Truncation parameters for Lambda_{n,N} = Z/p^N [T] / (omega_n).
struct LevelParams {
  i64 p = 0;
  int kappa = 0;
  int n = 0;
  int N = 0;

  LevelParams() = default;
  LevelParams(i64 p_, int kappa_, int n_, int N_);
  int level_exp() const { return n - kappa; }       // l = n - kappa
  i64 quot_degree() const;                           // p^l
  i64 q_residue() const;                             // p^{kappa+1} mod p^N
  ZModRing ring() const { return ZModRing(p, N); }
  std::vector<i64> omega_mod() const;                // omega_n coefficients mod p^N
  bool operator==(const LevelParams&) const = default;
};

// Element of Lambda_{n,N}; canonical representative of degree < p^{n-kappa}.
class LambdaQuot {
 public:
  LambdaQuot(LevelParams lv, std::vector<i64> coeffs);
  static LambdaQuot from_elem(const LevelParams& lv, const LambdaElem& e);
  static LambdaQuot constant(const LevelParams& lv, i64 value);
  static LambdaQuot T(const LevelParams& lv);

  const LevelParams& level() const { return lv_; }
  const std::vector<i64>& coeffs() const { return c_; }
  i64 coeff(int i) const { return i >= 0 && i < int(c_.size()) ? c_[i] : 0; }
  bool is_zero() const;

  LambdaQuot operator+(const LambdaQuot& o) const;
  LambdaQuot operator-(const LambdaQuot& o) const;
  LambdaQuot operator*(const LambdaQuot& o) const;
  bool operator==(const LambdaQuot& o) const;

  LambdaQuot pow(u64 e) const;
  // Unit test against the residue field Lambda/(p, T).
  bool is_unit() const;
  LambdaQuot inverse() const;
  // same residue class at a lower p-precision
  LambdaQuot truncate(int N_new) const;

  // matrix of y -> y*this on the basis 1, T, ..., T^{d-1} (row convention)
  Mat mult_matrix() const;

 private:
  LevelParams lv_;
  std::vector<i64> c_;
  void reduce();
};

// The element T* = (q - T)/(T+1) of Lambda_{n,N} ((T+1) is invertible since
// (T+1)^{p^{n-kappa}} = 1 + omega_n = 1 there).
LambdaQuot involution_T(const LevelParams& lv);

// v_p((q+1)^{p^{n-kappa}} - 1): the largest precision at which T -> T*
// descends to a ring homomorphism of Lambda_{n,N}. Beyond it omega_n(T*)
// does not vanish in the quotient and no such homomorphism exists.
int involution_precision(i64 p, int kappa, int n);

// The Iwasawa involution as a ring homomorphism on residue classes.
// The result carries precision min(N, involution_precision): substitution
// into the canonical representative is transported through the quotient
// only up to p^e, so the operation truncates rather than returning
// coefficients that depend on the representative. Applying it twice is the
// identity at the carried precision.
LambdaQuot involution(const LambdaQuot& x);

// Element-level evaluation of an exact polynomial at T*; full precision N.
// This is the right tool for omega_n^* and N_m^* style quantities.
LambdaQuot eval_at_involution(const LambdaElem& f, const LevelParams& lv);

// omega_n + t*omega_n^* = p^e * c in Lambda_{n,N}, with t = (T+1)^{p^{n-kappa}}.
// e is the computed exponent v_p((q+1)^{p^{n-kappa}} - 1); the paper asserts
// p^{n-kappa}, which does not match direct expansion, so the computed value
// is returned alongside.
struct DualityReport {
  LambdaQuot t;
  int e = 0;
  i64 c_unit = 0;        // unit with omega* = p^e * c, at precision N - e
  int paper_exponent = 0;  // n - kappa, for comparison
  bool identity_holds = false;
};
DualityReport check_omega_duality(const LevelParams& lv);

struct PContent {
  int c = 0;
  bool at_least = false;  // true when no p-power found below p^N
};
// Least c with p^c in (f, omega_n) + p^N Lambda; f must be distinguished.
PContent ideal_p_content(const LambdaElem& f, int n, int N);

// The membership observation behind the angle decomposition:
// v_p(binom(p^{m-kappa}, k)) >= l' := floor((m-kappa)/2) for 0 < k < p^{l'+1}.
struct AnglesMembership {
  int l_prime = 0;
  bool ok = false;
  std::vector<int> binom_vals;
};
AnglesMembership angles_membership(i64 p, int kappa, int m);

// N_m^* = a p^{l'} + b N_{l'+1} in Lambda_{m,N} with a a unit, where
// l' = floor((m-kappa)/2) and N_{l'+1} is the relative norm from level m to
// level kappa+l'+1. Also checks v_p(binom(p^{m-kappa}, k)) >= l' for
// 0 < k < p^{l'+1}.
struct AnglesReport {
  int l_prime = 0;
  bool membership_ok = false;
  std::vector<int> binom_vals;  // v_p of binom(p^l, k), k = 1 .. p^{l'+1}-1
  LambdaQuot a;
  LambdaQuot b;
  bool identity_holds = false;
};
AnglesReport angles_decompose(i64 p, int kappa, int m, int N);

// Expansions of the relative norm N_{n+1,n} in F_p[theta]/(theta^p):
// N = p + theta*h(theta) = p*h3(theta) + theta^{p-1}, h3 a unit.
struct NormExpansionReport {
  std::vector<i64> norm_coeffs;  // exact integer coefficients, theta^0 .. theta^{p-1}
  std::vector<i64> h_mod_p;
  std::vector<i64> h3_mod_p;
  bool h3_unit = false;
  bool expansions_match = false;
};
NormExpansionReport norm_expansion_check(i64 p);

// Polynomial congruence systems over Z/p^N: each constraint demands
//   sum_j coeff_j * x_{unknown_j} - rhs  in (or not in)  <modulus generators>.
// Memberships are solved by lattice linear algebra on the coefficient
// vectors; non-memberships are satisfied by searching the solution coset.
struct CongruenceTerm {
  int unknown = 0;
  LambdaElem coeff;
};
struct Congruence {
  std::vector<CongruenceTerm> terms;
  LambdaElem rhs;
  std::vector<LambdaElem> modulus_gens;
  bool negate = false;  // true: require NON-membership
};
struct CongruenceSystem {
  i64 p = 0;
  int kappa = 0;
  int N = 0;
  int num_unknowns = 0;
  int degree_bound = 0;  // solutions have degree <= degree_bound
  std::vector<Congruence> constraints;
};
struct CongruenceSolution {
  bool solvable = false;
  std::vector<std::vector<i64>> assignment;  // coefficient lists mod p^N
};
// Unsolvable is a verdict at the given degree/precision bounds.
CongruenceSolution solve_congruence_system(const CongruenceSystem& sys, u64 seed = 1);

}  // namespace iwalab
