#pragma once

#include <optional>
#include <vector>

#include "iwalab/iwasawa.hpp"
#include "iwalab/linalg.hpp"
#include "iwalab/pgroup.hpp"

namespace iwalab {

// Semidirect data for Gamma_n x| G_0: tau has order tau_order and commutes
// past group elements by g * tau = tau^{action[g]} * g.
struct SemidirectPresentation {
  i64 tau_order = 0;
  std::vector<i64> action;
};

// Finite group given by its multiplication table (0-based indices).
// Associativity, identity and inverses are verified on construction.
struct FiniteGroup {
  int order = 0;
  std::vector<std::vector<int>> table;
  int identity = 0;
  std::vector<int> inv;
  std::optional<SemidirectPresentation> presentation;

  static FiniteGroup from_table(std::vector<std::vector<int>> table);
  static FiniteGroup cyclic(int m);
  static FiniteGroup direct_product(const FiniteGroup& a, const FiniteGroup& b);
  static FiniteGroup trivial() { return cyclic(1); }

  int mul(int a, int b) const { return table[size_t(a)][size_t(b)]; }
  int inverse(int a) const { return inv[size_t(a)]; }
  int element_order(int a) const;
  bool is_abelian() const;
  void attach_presentation(SemidirectPresentation pres);
};

// Multiplicative character with values in the units of Z/p^{modulus}.
struct CycloCharacter {
  i64 p = 0;
  int modulus_exp = 0;  // values mod p^{modulus_exp}
  std::vector<i64> values;

  static CycloCharacter make(const FiniteGroup& G, i64 p, int modulus_exp, std::vector<i64> values);
  static CycloCharacter trivial(const FiniteGroup& G, i64 p, int modulus_exp);
  i64 value(int g) const { return values[size_t(g)]; }
};

// The group ring Z/p^N [G]; elements are coefficient vectors indexed by
// group element.
class GroupAlgebra {
 public:
  using Elem = std::vector<i64>;

  GroupAlgebra(FiniteGroup G, i64 p, int N);
  const FiniteGroup& group() const { return G_; }
  const ZModRing& ring() const { return R_; }

  Elem zero() const { return Elem(size_t(G_.order), 0); }
  Elem one() const;
  Elem unit(int g) const;  // the basis element g
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  Elem scalar(i64 c, const Elem& a) const;
  bool is_zero(const Elem& a) const;
  bool is_idempotent(const Elem& a) const;
  bool is_central(const Elem& a) const;
  bool is_unit_elem(const Elem& a) const;

  Mat right_mult_matrix(const Elem& a) const;  // x -> x*a on the basis
  Mat left_mult_matrix(const Elem& a) const;   // x -> a*x

  // Primitive central idempotents. Abelian groups are decomposed by
  // factoring element orders over F_p and Newton-lifting; for non-abelian
  // groups a candidate list must be supplied and is verified instead.
  std::vector<Elem> central_idempotents() const;
  std::vector<Elem> verify_central_idempotents(const std::vector<Elem>& candidates) const;

  int idem_rank(const Elem& a) const;

  struct Congruent {
    bool congruent = false;
    Elem nu;  // witness: nu^2 = 0, nu*a = 0, a*nu = nu
  };
  Congruent idem_congruent(const Elem& a, const Elem& b) const;

  struct Isomorphic {
    bool isomorphic = false;
    Elem u;  // witness unit with u*a*u^{-1} = b
  };
  Isomorphic idem_isomorphic(const Elem& a, const Elem& b, u64 seed = 1) const;

  Elem leopoldt_reflect(const Elem& a, const CycloCharacter& chi) const;

 private:
  FiniteGroup G_;
  ZModRing R_;
};

// A finite module with a G-action: ambient group plus one action matrix per
// group element (rows act on coordinate row vectors).
struct GModule {
  FinAbPGroup M;
  std::vector<Mat> action;  // indexed by group element

  static GModule make(const FiniteGroup& G, FinAbPGroup M, std::vector<Mat> action);
  std::vector<i64> act(int g, const std::vector<i64>& x) const;
  std::vector<i64> act_elem(const GroupAlgebra& A, const GroupAlgebra::Elem& a,
                            const std::vector<i64>& x) const;
};

// The two canonic idempotents of Def. annih for commutative acting algebras:
// top kills x and is maximal among central idempotent sums, bot = 1 - top.
struct AnnihilatorSupport {
  GroupAlgebra::Elem top;
  GroupAlgebra::Elem bot;
  std::vector<int> killed;  // indices of central idempotents with e_i x = 0
};
AnnihilatorSupport annihilator_and_support(const GroupAlgebra& A, const GModule& X,
                                           const std::vector<i64>& x);

// Quasi-cyclicity gap: does q*X lie in the orbit span of the adjusted
// generator, q = p^{v_p(|G|)}?
struct QuasiCyclicReport {
  bool confirmed = false;
  i64 q = 1;
  std::vector<i64> adjusted_generator;
};
QuasiCyclicReport quasicyclic_gap(const GroupAlgebra& A, const GModule& X,
                                  const std::vector<i64>& x);

// q * (primitive idempotents of Q_p[G]) for abelian G, as exact integral
// elements of Z/p^N [G]; used by the quasi-cyclic adjustment.
std::vector<GroupAlgebra::Elem> scaled_qp_idempotents(const GroupAlgebra& A);

// ---- words and the twisted ring Lambda[G] ----

struct WordFactor {
  bool is_tau = false;
  i64 tau_exp = 0;  // when is_tau
  int g = 0;        // otherwise
};
struct NormalWord {
  i64 tau_exp = 0;
  int g = 0;
};
// Unique normal form tau^e * g; requires a semidirect presentation.
NormalWord word_reduce(const FiniteGroup& G, const std::vector<WordFactor>& word);

// Lambda_{n,N}[G_0] with the commutation rule g * f(T) = f((T+1)^{a_g} - 1) * g.
class TwistedRing {
 public:
  struct Elem {
    std::vector<LambdaQuot> c;  // coefficient per group element
  };

  TwistedRing(FiniteGroup G0, LevelParams lv);
  const FiniteGroup& group() const { return G_; }
  const LevelParams& level() const { return lv_; }

  Elem zero() const;
  Elem one() const;
  Elem monomial(const LambdaQuot& a, int g) const;
  Elem add(const Elem& a, const Elem& b) const;
  Elem sub(const Elem& a, const Elem& b) const;
  Elem mul(const Elem& a, const Elem& b) const;
  bool equal(const Elem& a, const Elem& b) const;

  // coefficient transport past g: T -> (T+1)^{a_g} - 1 (exact ring hom)
  LambdaQuot transport(int g, const LambdaQuot& x) const;

 private:
  FiniteGroup G_;
  LevelParams lv_;
};

// Reflection: the linear extension of w -> chi(w) w^{-1} on normal forms,
// i.e. sum a_g |x g -> sum transport_{g^{-1}}(a_g^*) chi(g) |x g^{-1}. The
// coefficient involution truncates, so the result lives at the capped
// precision. An anti-automorphism of the twisted ring whenever chi is
// compatible with the conjugation action (chi(tau)^{a_g} = chi(tau) at the
// carried precision); both conventions coincide for trivial actions.
struct TwistedReflect {
  TwistedRing ring;
  TwistedRing::Elem value;
};
TwistedReflect twisted_reflect(const TwistedRing& R, const TwistedRing::Elem& x,
                               const CycloCharacter& chi);

// Which composition laws the reflection satisfies on sampled products.
struct TwistedReflectLaws {
  bool anti_multiplicative = false;
  bool multiplicative = false;
  bool involutive = false;
};
TwistedReflectLaws twisted_reflect_laws(const TwistedRing& R, const CycloCharacter& chi,
                                        int samples, u64 seed);

}  // namespace iwalab
