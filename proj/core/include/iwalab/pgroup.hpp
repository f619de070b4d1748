#pragma once

#include <optional>
#include <vector>

#include "iwalab/linalg.hpp"

namespace iwalab {

// Finite abelian p-group in Smith normal form: direct sum of Z/p^{e_i} with
// e_1 >= e_2 >= ... >= e_r >= 1. Elements are row vectors of coordinates,
// coordinate i taken mod p^{e_i}.
struct FinAbPGroup {
  i64 p = 0;
  std::vector<int> exps;

  FinAbPGroup() = default;
  FinAbPGroup(i64 p_, std::vector<int> exps_);

  int rank() const { return int(exps.size()); }
  int size_log() const;
  bool is_trivial() const { return exps.empty(); }
  int exponent_log() const { return exps.empty() ? 0 : exps.front(); }
  int subexponent_log() const { return exps.empty() ? 0 : exps.back(); }
  int socle_size_log(int m) const;

  std::vector<i64> reduce(const std::vector<i64>& x) const;
  bool is_zero(const std::vector<i64>& x) const;
  int order_log(const std::vector<i64>& x) const;
  std::vector<std::vector<i64>> enumerate(i64 cap = 1000000) const;
  bool operator==(const FinAbPGroup&) const = default;
};

// Homomorphism between groups in canonical coordinates. Row i of the matrix
// is the image of the i-th domain generator; x maps to x*M.
struct PGroupHom {
  FinAbPGroup domain;
  FinAbPGroup codomain;
  Mat M;

  static PGroupHom make(FinAbPGroup dom, FinAbPGroup cod, Mat M);
  std::vector<i64> apply(const std::vector<i64>& x) const;
  PGroupHom compose_after(const PGroupHom& first) const;  // this(first(x))

  bool is_surjective() const;
  bool is_injective() const;
  int kernel_size_log() const;
  int image_rank() const;  // p-rank of the image subgroup
  bool image_equals_multiple(int k) const;  // image == p^k * codomain
};

// Flat embedding of a group into (Z/p^F)^r: coordinate i is scaled by
// p^{F - e_i} so subgroup lattice computations are exact.
Mat group_full_lattice(const FinAbPGroup& G, int F);
std::vector<i64> to_scaled(const FinAbPGroup& G, const std::vector<i64>& x, int F);

// Smith classification of an integer relation matrix (Z^cols / row span),
// keeping the p-part only. Throws InfiniteGroup when the presented group
// has free rank.
FinAbPGroup snf_classify(const Mat& relations, i64 p);

struct StructureStats {
  int p_rank = 0;
  int exponent_log = 0;
  int subexponent_log = 0;
  std::vector<int> socle_logs;  // |S_1| ... |S_{exponent}|
};
StructureStats structure_stats(const FinAbPGroup& X);

// Hypothesis-by-hypothesis verifier for the norm/lift lemma on finite
// abelian p-groups. Hypothesis failures are report entries, never errors;
// conclusions are asserted only under satisfied hypotheses.
struct LemmaAbReport {
  bool n_surjective = false;
  bool ranks_equal = false;
  bool cardinality_ratio_ok = false;  // |B|/|A| = p^r
  bool n_iota_is_mult_p = false;
  bool iota_rank_preserving = false;
  int iota_image_rank = 0;
  bool hypotheses_hold = false;

  bool conclusions_checked = false;
  bool iota_injective = false;
  bool iota_image_is_pB = false;
  bool order_law_holds = false;  // ord(x) = p * ord(Nx) for all x in B
  bool order_law_exhaustive = false;
};
LemmaAbReport verify_lemma_ab(const FinAbPGroup& A, const FinAbPGroup& B, const PGroupHom& N,
                              const PGroupHom& iota, u64 sample_seed = 1);

// Generator of hypothesis-satisfying instances: B with all invariants >= 2,
// A = B/p-shape, N the coordinate reduction and iota multiplication by p,
// twisted by random automorphisms on both sides.
struct LemmaAbInstance {
  FinAbPGroup A, B;
  PGroupHom N, iota;
};
LemmaAbInstance make_lemma_ab_instance(i64 p, u64 seed, int max_rank = 3, int size_log_cap = 6);

// Change of minimal generating systems: invertible E with E * gens1 = gens2
// (row i of gens* is a group element). Throws NotMinimalSystem.
Mat generator_change(const FinAbPGroup& X, const Mat& gens1, const Mat& gens2);

enum class TowerVerdict { stable_limit_rank, essential_rank, bounded };
struct TowerReport {
  TowerVerdict verdict = TowerVerdict::bounded;
  int rank_value = 0;
  std::vector<int> ranks;
  std::vector<int> subexponent_logs;
  bool ranks_constant = false;
  bool subexponents_diverge = false;
};
// maps[i] : tower[i] -> tower[i+1], all required injective.
TowerReport limit_rank(const std::vector<FinAbPGroup>& tower, const std::vector<PGroupHom>& maps);

}  // namespace iwalab
