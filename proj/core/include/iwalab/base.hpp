#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace iwalab {

using i64 = std::int64_t;
using u64 = std::uint64_t;
using i128 = __int128;

// Failure conditions surfaced by the library. Verifier operations report
// negative verdicts as data, not as errors; `error` is for contract
// violations and inputs outside the supported range.
enum class errc {
  non_unit,
  not_squarefree_mod_p,
  level_below_kappa,
  bad_levels,
  precision_too_low,
  not_distinguished,
  no_solution_at_precision,
  inconsistent_parameters,
  p_divides_order,
  non_abelian_without_candidates,
  not_idempotent,
  search_exhausted,
  not_cyclic,
  modulus_mismatch,
  no_presentation,
  infinite_group,
  not_minimal_system,
  not_injective_tower,
  infinite_quotient,
  no_stable_suffix,
  kappa_too_small,
  has_mu_part,
  too_large,
  insufficient_levels,
  no_consistent_twist,
  input_error,
  overflow,
  internal,
};

const char* errc_name(errc c);

class error : public std::runtime_error {
 public:
  error(errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  errc code() const { return code_; }

 private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw error(code, what); }

// Residue ring Z/p^N with canonical representatives in [0, p^N).
// p^N must stay below 2^31 so that products fit in u64.
struct ZModRing {
  i64 p = 0;
  int N = 0;
  i64 mod = 0;

  ZModRing() = default;
  ZModRing(i64 prime, int precision);

  i64 reduce(i64 x) const {
    i64 r = x % mod;
    return r < 0 ? r + mod : r;
  }
  i64 add(i64 a, i64 b) const { return (a + b) % mod; }
  i64 sub(i64 a, i64 b) const { return reduce(a - b); }
  i64 mul(i64 a, i64 b) const { return i64((u64(a) * u64(b)) % u64(mod)); }
  i64 neg(i64 a) const { return a == 0 ? 0 : mod - a; }
  i64 pow(i64 a, u64 e) const;

  // v_p of a canonical residue; 0 maps to N ("indistinguishable from 0").
  int val(i64 x) const;
  bool is_unit(i64 x) const { return x % p != 0; }
  // Inverse of a unit; throws non_unit otherwise.
  i64 inv(i64 x) const;
};

i64 pow_i64_checked(i64 base, int exp);
bool is_prime(i64 p);

}  // namespace iwalab
