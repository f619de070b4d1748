#pragma once

#include <optional>
#include <vector>

#include "iwalab/iwasawa.hpp"
#include "iwalab/pgroup.hpp"

namespace iwalab {

// One elementary summand: Lambda/(p^mu), or Lambda/(f^k) for distinguished
// f, optionally capped as Lambda/(f^k, p^cap).
struct ModuleSummand {
  enum class Kind { mu, weierstrass };
  Kind kind = Kind::mu;
  int mu = 0;
  LambdaElem f;
  int k = 1;
  int cap = 0;  // 0 = no p-power cap

  static ModuleSummand mu_part(int mu);
  static ModuleSummand wei_part(LambdaElem f, int k, int cap = 0);
};

// Torsion Lambda-module given by its elementary decomposition. Strict
// construction rejects f sharing a cyclotomic factor with some omega_n
// (f = T in particular); the unchecked path exists so the InfiniteQuotient
// diagnosis in level_quotient stays reachable.
class ElemLambdaModule {
 public:
  static ElemLambdaModule make(i64 p, int kappa, std::vector<ModuleSummand> summands);
  static ElemLambdaModule make_unchecked(i64 p, int kappa, std::vector<ModuleSummand> summands);

  i64 p() const { return p_; }
  int kappa() const { return kappa_; }
  const std::vector<ModuleSummand>& summands() const { return summands_; }
  int mu_total() const;      // sum of mu_i (uncapped mu parts)
  int lambda_total() const;  // sum k_j * deg f_j over uncapped weierstrass parts

 private:
  i64 p_ = 0;
  int kappa_ = 0;
  std::vector<ModuleSummand> summands_;
};

// whether f shares a factor with some omega_n: T | f or Phi_{p^j}(T+1) | f
bool omega_entangled(const LambdaElem& f, int up_to_level);

// Finite level M_n = M / omega_n M with its T-action, kept blockwise per
// summand. Coordinates are the invariant (cyclic) coordinates per block.
struct LevelQuotient {
  int n = 0;
  int B = 0;  // working p-precision of the block quotients
  std::vector<QuotientModule> blocks;
  std::vector<Mat> t_actions;  // per block, on invariant coordinates

  FinAbPGroup group(i64 p) const;  // sorted SNF of the direct sum
  int size_log() const;
  int p_rank() const;
  // element = concatenation of block invariant coordinates
  std::vector<int> block_offsets() const;
  int dim() const;
  std::vector<i64> reduce(const std::vector<i64>& x) const;
  bool is_zero(const std::vector<i64>& x) const;
  int order_log(const std::vector<i64>& x) const;
  std::vector<i64> act_T(const std::vector<i64>& x) const;
};

LevelQuotient level_quotient(const ElemLambdaModule& M, int n, int N);

// Levels n_lo..n_hi with the canonical projections (norms) and the
// multiplication-by-N_{n+1,n} lifts between consecutive levels.
struct Tower {
  ElemLambdaModule M;
  int n_lo = 0;
  std::vector<LevelQuotient> levels;
  std::vector<std::vector<Mat>> norm_mats;  // [step][block]: level i+1 -> i
  std::vector<std::vector<Mat>> lift_mats;  // [step][block]: level i -> i+1

  const LevelQuotient& level(int n) const { return levels[size_t(n - n_lo)]; }
  int n_hi() const { return n_lo + int(levels.size()) - 1; }
  std::vector<i64> norm_down(int n_from, const std::vector<i64>& x) const;  // one step
  std::vector<i64> lift_up(int n_from, const std::vector<i64>& x) const;    // one step
};
Tower build_tower(const ElemLambdaModule& M, int n_lo, int n_hi, int N = 0);

// Iwasawa growth law fit v_p(|M_n|) = mu p^{n-kappa} + lambda (n-kappa) + nu
// on the longest exact suffix of the computed levels.
struct GrowthStats {
  int mu = 0;
  int lambda = 0;
  int nu = 0;
  int suffix_start = 0;  // first level of the exact suffix
  std::vector<int> size_logs;
  bool matches_module = false;  // (mu, lambda) equal the constructed invariants
};
GrowthStats growth_stats(const ElemLambdaModule& M, int n_lo, int n_hi);

// Fukuda-style stabilization report over a tower.
struct FukudaReport {
  std::vector<int> size_logs;
  std::vector<int> ranks;
  bool point1_checked = false;  // some |M_n| = |M_{n+1}| observed
  bool point1_holds = true;     // sizes stay equal afterwards
  bool point2_checked = false;  // rank stабilization observed
  bool point2_holds = true;     // ranks stay equal; growth increments constant
  int stable_growth = -1;       // p-exponent of |M_{n+1}|/|M_n| on the suffix
  // the point-3 identities are asserted per step only once the p-rank has
  // stabilized across the step (the proposition's own hypothesis); before
  // that the mu-direction genuinely violates them
  std::vector<bool> step_rank_stabilized;
  int ordinc_steps_checked = 0;
  bool ordinc_holds = true;         // p*x = iota(N x) elementwise on checked steps
  bool ordinc_exhaustive = false;   // checked by enumeration (<= 3^6)
  bool lift_image_is_p_holds = true;  // iota(M_n) = p M_{n+1} on every step
  std::vector<int> capitulation_logs;  // kernel of iota per step
  bool iota_injective_when_rank_is_lambda = true;
};
FukudaReport fukuda_check(const ElemLambdaModule& M, int n_lo, int n_hi, u64 sample_seed = 1);

// Norm-coherent family of elements, one per tower level, in level coordinates.
struct TowerElement {
  std::vector<std::vector<i64>> xs;  // indexed like tower.levels
};
TowerElement make_tower_element(const Tower& tw, const std::vector<std::vector<i64>>& xs);
// the family of classes of a fixed polynomial vector (one polynomial per block)
TowerElement tower_element_from_polys(const Tower& tw, const std::vector<std::vector<i64>>& polys);
TowerElement tower_scalar(const Tower& tw, const TowerElement& x, i64 c);

// z(x) = stabilized v_p(ord(x_n)) - (n+1-kappa); empty when the order is
// bounded along the tower ("minus infinity").
struct ZInvariant {
  bool torsion = false;  // order bounded: z = -infinity
  int z = 0;
  std::vector<int> order_logs;
};
ZInvariant z_invariant(const Tower& tw, const TowerElement& x);

// sigma = multiplication by p^kappa and the kappa-delayed lift iota_K.
struct ShiftMaps {
  TowerElement sigma_x;
  std::optional<TowerElement> iota_k_x;  // defined on levels >= 2 kappa within the tower
  int iota_k_first_level = 0;
  bool iota_k_norm_coherent = false;  // computed; holds where the ord-increment law does
  bool sigma_image_torsion_free = false;  // SNF growth of p^kappa M_n is exactly lambda
};
ShiftMaps shift_maps(const Tower& tw, const TowerElement& x);

// Canonical components of a Weierstrass module along the pairwise-coprime
// classes of its distinguished polynomials.
struct WeierstrassSplit {
  std::vector<ElemLambdaModule> components;
  std::vector<std::vector<int>> summand_indices;
  bool intersections_trivial = false;  // certified at two consecutive levels
};
WeierstrassSplit weierstrass_split(const ElemLambdaModule& M);

// Summand-wise Iwasawa dual: f -> distinguished part of f(T*). Mu parts are
// fixed. The dual polynomial is normalized at a bounded working precision.
ElemLambdaModule iwasawa_dual(const ElemLambdaModule& M);

// A finite Lambda_n-module given directly: group plus the matrix of T.
struct LambdaNModule {
  i64 p = 0;
  int kappa = 0;
  int n = 0;
  FinAbPGroup X;
  Mat t_action;
};
// Lambda/(omega_n, p^c) as a concrete module with its companion T-action.
LambdaNModule make_lambda_n_quotient(i64 p, int kappa, int n, int c);

// Both sides of the T*-kernel identity: left {x : T* x in p^{n-kappa} X},
// right (image of N_n^*) + mu_n + p^{n-kappa} X, compared inside X.
struct UntStarReport {
  bool equal = false;
  int lhs_log = 0;
  int rhs_log = 0;
  int mu_log = 0;
  bool exhaustive = false;  // additionally verified by enumeration
};
UntStarReport unt_star_sides(const LambdaNModule& Xn);

}  // namespace iwalab
