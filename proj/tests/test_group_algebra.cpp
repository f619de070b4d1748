#include <algorithm>
#include <array>
#include <random>
#include <set>

#include "doctest.h"
#include "iwalab/group_algebra.hpp"

using namespace iwalab;

namespace {

FiniteGroup symmetric3() {
  // elements: 0=e, 1=(12), 2=(13), 3=(23), 4=(123), 5=(132)
  auto perm_mul = [](const std::array<int, 3>& a, const std::array<int, 3>& b) {
    std::array<int, 3> c{};
    for (int i = 0; i < 3; ++i) c[size_t(i)] = a[size_t(b[size_t(i)])];
    return c;
  };
  std::vector<std::array<int, 3>> elems = {{0, 1, 2}, {1, 0, 2}, {2, 1, 0},
                                           {0, 2, 1}, {1, 2, 0}, {2, 0, 1}};
  std::vector<std::vector<int>> t(6, std::vector<int>(6, 0));
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      auto c = perm_mul(elems[size_t(i)], elems[size_t(j)]);
      for (int k = 0; k < 6; ++k)
        if (elems[size_t(k)] == c) t[size_t(i)][size_t(j)] = k;
    }
  return FiniteGroup::from_table(std::move(t));
}

// number of irreducible factors of X^m - 1 over F_p, via cyclotomic cosets
int cyclotomic_coset_count(int m, i64 p) {
  std::vector<bool> seen(size_t(m), false);
  int orbits = 0;
  for (int r = 0; r < m; ++r) {
    if (seen[size_t(r)]) continue;
    ++orbits;
    int x = r;
    while (!seen[size_t(x)]) {
      seen[size_t(x)] = true;
      x = int((i64(x) * p) % m);
    }
  }
  return orbits;
}

GroupAlgebra::Elem sign_idempotent(const GroupAlgebra& S, int sign) {
  // (1/6) sum sgn(g)^[sign] g for S3 in the fixed element order
  i64 inv6 = S.ring().inv(6);
  GroupAlgebra::Elem e(6, 0);
  for (int g = 0; g < 6; ++g) {
    int sgn = (g == 0 || g == 4 || g == 5) ? 1 : -1;
    e[size_t(g)] = S.ring().reduce((sign == 1 ? 1 : sgn) * inv6);
  }
  return e;
}

}  // namespace

TEST_CASE("finite group construction and validation") {
  auto C4 = FiniteGroup::cyclic(4);
  CHECK(C4.order == 4);
  CHECK(C4.identity == 0);
  CHECK(C4.inverse(1) == 3);
  CHECK(C4.element_order(1) == 4);
  CHECK(C4.is_abelian());

  auto S3 = symmetric3();
  CHECK(S3.order == 6);
  CHECK_FALSE(S3.is_abelian());
  CHECK(S3.element_order(1) == 2);
  CHECK(S3.element_order(4) == 3);

  std::vector<std::vector<int>> bad = {{0, 1}, {1, 1}};
  CHECK_THROWS_AS(FiniteGroup::from_table(bad), error);
}

TEST_CASE("central idempotents of C2 at p=3, N=3") {
  GroupAlgebra A(FiniteGroup::cyclic(2), 3, 3);
  auto es = A.central_idempotents();
  REQUIRE(es.size() == 2);
  std::set<std::vector<i64>> got(es.begin(), es.end());
  CHECK(got.count({14, 14}) == 1);  // (1+s)/2, 1/2 = 14 mod 27
  CHECK(got.count({14, 13}) == 1);  // (1-s)/2
}

TEST_CASE("central idempotents of C4 at p=3 and the trivial group") {
  GroupAlgebra A(FiniteGroup::cyclic(4), 3, 3);
  auto es = A.central_idempotents();
  CHECK(es.size() == 3);  // X^4-1 = (X-1)(X+1)(X^2+1) over F_3
  GroupAlgebra::Elem sum = A.zero();
  for (const auto& e : es) {
    CHECK(A.is_idempotent(e));
    sum = A.add(sum, e);
  }
  CHECK(A.is_zero(A.sub(sum, A.one())));
  for (size_t i = 0; i < es.size(); ++i)
    for (size_t j = i + 1; j < es.size(); ++j) CHECK(A.is_zero(A.mul(es[i], es[j])));

  GroupAlgebra T(FiniteGroup::trivial(), 3, 3);
  auto et = T.central_idempotents();
  REQUIRE(et.size() == 1);
  CHECK(et[0] == T.one());
}

TEST_CASE("idempotent count matches the cyclotomic-coset oracle") {
  for (i64 p : {3, 5})
    for (int m = 1; m <= 12; ++m) {
      if (m % p == 0) continue;
      GroupAlgebra A(FiniteGroup::cyclic(m), p, 3);
      CHECK(int(A.central_idempotents().size()) == cyclotomic_coset_count(m, p));
    }
  // a non-cyclic abelian case: C2 x C2 at p=3 has 4 characters over F_3
  GroupAlgebra V(FiniteGroup::direct_product(FiniteGroup::cyclic(2), FiniteGroup::cyclic(2)), 3, 3);
  CHECK(V.central_idempotents().size() == 4);
}

TEST_CASE("p dividing |G| raises PDividesOrder; non-abelian needs candidates") {
  GroupAlgebra A(FiniteGroup::cyclic(3), 3, 3);
  CHECK_THROWS_AS(A.central_idempotents(), error);
  GroupAlgebra A6(FiniteGroup::cyclic(6), 3, 3);
  CHECK_THROWS_AS(A6.central_idempotents(), error);

  GroupAlgebra S(symmetric3(), 5, 3);
  CHECK_THROWS_AS(S.central_idempotents(), error);
  auto etriv = sign_idempotent(S, 1);
  auto esgn = sign_idempotent(S, -1);
  auto e2 = S.sub(S.sub(S.one(), etriv), esgn);
  auto verified = S.verify_central_idempotents({etriv, esgn, e2});
  CHECK(verified.size() == 3);
  CHECK_THROWS_AS(S.verify_central_idempotents({etriv, esgn}), error);  // no sum to 1
}

TEST_CASE("idempotent ranks") {
  GroupAlgebra A(FiniteGroup::cyclic(2), 3, 3);
  auto es = A.central_idempotents();
  for (const auto& e : es) CHECK(A.idem_rank(e) == 1);
  CHECK(A.idem_rank(A.one()) == 2);
  CHECK(A.idem_rank(A.zero()) == 0);
  CHECK(A.idem_rank(es[0]) + A.idem_rank(A.sub(A.one(), es[0])) == 2);
  CHECK_THROWS_AS(A.idem_rank(A.scalar(2, A.one())), error);

  GroupAlgebra S(symmetric3(), 5, 3);
  auto etriv = sign_idempotent(S, 1);
  CHECK(S.idem_rank(etriv) == 1);
  CHECK(S.idem_rank(S.sub(S.one(), etriv)) == 5);
}

TEST_CASE("idempotent congruence: identical, distinct, constructed pair") {
  GroupAlgebra A(FiniteGroup::cyclic(2), 3, 3);
  auto es = A.central_idempotents();
  auto same = A.idem_congruent(es[0], es[0]);
  CHECK(same.congruent);
  CHECK(A.is_zero(same.nu));
  CHECK_FALSE(A.idem_congruent(es[0], es[1]).congruent);

  // S3 at p=5: alpha inside the 2x2 block, nu = alpha*rho*(1-alpha)
  GroupAlgebra S(symmetric3(), 5, 3);
  i64 inv2 = S.ring().inv(2);
  auto e2 = S.sub(S.sub(S.one(), sign_idempotent(S, 1)), sign_idempotent(S, -1));
  auto f = S.scalar(inv2, S.add(S.unit(0), S.unit(1)));  // (1 + (12))/2
  auto alpha = S.mul(f, e2);
  REQUIRE(S.is_idempotent(alpha));
  GroupAlgebra::Elem nu;
  for (int g = 0; g < 6; ++g) {
    nu = S.mul(S.mul(alpha, S.unit(g)), S.sub(S.one(), alpha));
    if (!S.is_zero(nu)) break;
  }
  REQUIRE_FALSE(S.is_zero(nu));
  auto beta = S.sub(alpha, nu);
  REQUIRE(S.is_idempotent(beta));
  auto res = S.idem_congruent(alpha, beta);
  CHECK(res.congruent);
  CHECK(S.is_zero(S.mul(res.nu, res.nu)));
  CHECK(S.is_zero(S.mul(res.nu, alpha)));
  CHECK(S.is_zero(S.sub(S.mul(alpha, res.nu), res.nu)));
  // congruent idempotents generate the same right ideal: mutual membership
  auto solves = [&](const GroupAlgebra::Elem& gen, const GroupAlgebra::Elem& target) {
    auto L = S.left_mult_matrix(gen);
    return solve_row(L, target, S.ring()).has_value();
  };
  CHECK(solves(alpha, beta));
  CHECK(solves(beta, alpha));
}

TEST_CASE("idempotent isomorphism") {
  GroupAlgebra A(FiniteGroup::cyclic(2), 3, 3);
  auto es = A.central_idempotents();
  auto same = A.idem_isomorphic(es[0], es[0]);
  CHECK(same.isomorphic);
  CHECK(same.u == A.one());
  CHECK_FALSE(A.idem_isomorphic(es[0], es[1]).isomorphic);

  GroupAlgebra S(symmetric3(), 3, 2);
  i64 inv2 = S.ring().inv(2);
  auto f = S.scalar(inv2, S.add(S.unit(0), S.unit(1)));
  REQUIRE(S.is_idempotent(f));
  auto u = S.unit(4);  // the unit (123)
  auto beta = S.mul(S.mul(u, f), S.unit(S.group().inverse(4)));
  REQUIRE(S.is_idempotent(beta));
  auto res = S.idem_isomorphic(f, beta, 11);
  CHECK(res.isomorphic);
  CHECK(S.is_zero(S.sub(S.mul(res.u, f), S.mul(beta, res.u))));
  CHECK(S.is_unit_elem(res.u));
}

TEST_CASE("leopoldt reflection is the chi-twisted antipode and involutive") {
  FiniteGroup C2 = FiniteGroup::cyclic(2);
  GroupAlgebra A(C2, 3, 3);
  CycloCharacter chi = CycloCharacter::make(C2, 3, 3, {1, 26});  // chi(s) = -1
  GroupAlgebra::Elem x = {5, 7};
  // (a + b s)' = a - b s since s^{-1} = s
  CHECK(A.leopoldt_reflect(x, chi) == GroupAlgebra::Elem{5, 20});

  // trivial character: the plain antipode
  FiniteGroup C4 = FiniteGroup::cyclic(4);
  GroupAlgebra B(C4, 3, 3);
  CycloCharacter triv = CycloCharacter::trivial(C4, 3, 3);
  GroupAlgebra::Elem y = {1, 2, 3, 4};
  CHECK(B.leopoldt_reflect(y, triv) == GroupAlgebra::Elem{1, 4, 3, 2});

  // involution on random elements for a genuine character on C4 at p=5:
  // chi(g) = 7^k has chi(g)chi(g^{-1}) = 1 mod 5^3
  FiniteGroup C4b = FiniteGroup::cyclic(4);
  GroupAlgebra C(C4b, 5, 3);
  ZModRing R5(5, 3);
  i64 i4 = 57;  // 57^2 = 3249 = 124 mod 125 = -1: an order-4 unit mod 125
  CycloCharacter chi4 = CycloCharacter::make(C4b, 5, 3, {1, i4, R5.mul(i4, i4), R5.mul(R5.mul(i4, i4), i4)});
  std::mt19937_64 rng(17);
  for (int t = 0; t < 100; ++t) {
    GroupAlgebra::Elem z(4);
    for (auto& v : z) v = i64(rng() % 125);
    CHECK(C.leopoldt_reflect(C.leopoldt_reflect(z, chi4), chi4) == z);
  }

  // modulus below precision is rejected
  CycloCharacter low = CycloCharacter::make(C2, 3, 2, {1, 8});
  CHECK_THROWS_AS(A.leopoldt_reflect(x, low), error);

  // anti-multiplicativity under the antipode convention, sampled
  for (int t = 0; t < 200; ++t) {
    GroupAlgebra::Elem a(2), b(2);
    for (auto& v : a) v = i64(rng() % 27);
    for (auto& v : b) v = i64(rng() % 27);
    auto lhs = A.leopoldt_reflect(A.mul(a, b), chi);
    auto rhs = A.mul(A.leopoldt_reflect(b, chi), A.leopoldt_reflect(a, chi));
    CHECK(lhs == rhs);
  }
}

TEST_CASE("annihilator and support") {
  // C2 acting on Z/9 by s = -1, x = 1: top = (1+s)/2
  FiniteGroup C2 = FiniteGroup::cyclic(2);
  GroupAlgebra A(C2, 3, 2);
  Mat id1 = Mat::identity(1);
  Mat neg1(1, 1);
  neg1.at(0, 0) = 8;
  GModule X = GModule::make(C2, FinAbPGroup(3, {2}), {id1, neg1});
  auto res = annihilator_and_support(A, X, {1});
  GroupAlgebra::Elem eplus = {5, 5};  // (1+s)/2 mod 9
  CHECK(res.top == eplus);
  CHECK(res.bot == A.sub(A.one(), eplus));

  // x = 0: top = 1
  auto rz = annihilator_and_support(A, X, {0});
  CHECK(rz.top == A.one());
  CHECK(A.is_zero(rz.bot));

  // trivial group, x != 0: top = 0
  GroupAlgebra T(FiniteGroup::trivial(), 3, 2);
  GModule XT = GModule::make(FiniteGroup::trivial(), FinAbPGroup(3, {2}), {Mat::identity(1)});
  auto rt = annihilator_and_support(T, XT, {1});
  CHECK(T.is_zero(rt.top));
  CHECK(rt.bot == T.one());
}

TEST_CASE("quasicyclic gap") {
  // cyclic module, generator, p coprime to |G|: confirmed with q = 1
  FiniteGroup C2 = FiniteGroup::cyclic(2);
  GroupAlgebra A(C2, 3, 2);
  Mat id1 = Mat::identity(1);
  Mat neg1(1, 1);
  neg1.at(0, 0) = 8;
  GModule X = GModule::make(C2, FinAbPGroup(3, {2}), {id1, neg1});
  auto r1 = quasicyclic_gap(A, X, {1});
  CHECK(r1.q == 1);
  CHECK(r1.confirmed);

  // Z/3 + Z/3 with trivial action, x = (1,0): refuted
  GroupAlgebra T(FiniteGroup::trivial(), 3, 1);
  GModule Y = GModule::make(FiniteGroup::trivial(), FinAbPGroup(3, {1, 1}), {Mat::identity(2)});
  auto r2 = quasicyclic_gap(T, Y, {1, 0});
  CHECK_FALSE(r2.confirmed);

  // C2 at p = 2 with the swap action on Z/4 + Z/4, x = (1,0): 2X inside the
  // orbit span of the adjusted generator
  FiniteGroup C2b = FiniteGroup::cyclic(2);
  GroupAlgebra B(C2b, 2, 3);
  Mat swap(2, 2);
  swap.at(0, 1) = 1;
  swap.at(1, 0) = 1;
  GModule Z = GModule::make(C2b, FinAbPGroup(2, {2, 2}), {Mat::identity(2), swap});
  auto r3 = quasicyclic_gap(B, Z, {1, 0});
  CHECK(r3.q == 2);
  CHECK(r3.confirmed);
}

TEST_CASE("word reduction in the semidirect presentation") {
  FiniteGroup C2 = FiniteGroup::cyclic(2);
  // the action must be a homomorphism into units: 6^2 = 1 mod 7
  C2.attach_presentation({7, {1, 6}});
  auto w1 = word_reduce(C2, {{false, 0, 1}});
  CHECK(w1.tau_exp == 0);
  CHECK(w1.g == 1);

  // trivial conjugation: [tau, g, tau] -> tau^2 g
  FiniteGroup C2t = FiniteGroup::cyclic(2);
  C2t.attach_presentation({7, {1, 1}});
  auto w2 = word_reduce(C2t, {{true, 1, 0}, {false, 0, 1}, {true, 1, 0}});
  CHECK(w2.tau_exp == 2);
  CHECK(w2.g == 1);

  // stored conjugation g tau = tau^2 g: [tau, g, tau] -> tau^3 g
  FiniteGroup C3 = FiniteGroup::cyclic(3);
  C3.attach_presentation({7, {1, 2, 4}});  // 2^3 = 8 = 1 mod 7
  auto w3 = word_reduce(C3, {{true, 1, 0}, {false, 0, 1}, {true, 1, 0}});
  CHECK(w3.tau_exp == 3);
  CHECK(w3.g == 1);

  FiniteGroup bare = FiniteGroup::cyclic(2);
  CHECK_THROWS_AS(word_reduce(bare, {{false, 0, 1}}), error);
}

TEST_CASE("word reduction is confluent: right-to-left equals left-to-right") {
  // independent left-fold oracle
  auto left_fold = [](const FiniteGroup& G, const std::vector<WordFactor>& word) {
    const auto& pres = *G.presentation;
    auto ne = [&](i64 e) { return ((e % pres.tau_order) + pres.tau_order) % pres.tau_order; };
    NormalWord acc{0, G.identity};
    for (const auto& f : word) {
      if (f.is_tau) {
        acc.tau_exp = ne(acc.tau_exp + pres.action[size_t(acc.g)] * f.tau_exp);
      } else {
        acc.g = G.mul(acc.g, f.g);
      }
    }
    return acc;
  };
  std::mt19937_64 rng(23);
  for (int order : {2, 4, 8}) {
    FiniteGroup G = FiniteGroup::cyclic(order);
    // action must be a homomorphism into units mod 9: use g -> 8^g ... only
    // order-2 images exist mod 9; map even g -> 1, odd g -> 8 when order even
    std::vector<i64> act(size_t(order), 1);
    for (int g = 0; g < order; ++g) act[size_t(g)] = (g % 2 == 0) ? 1 : 8;
    G.attach_presentation(SemidirectPresentation{9, act});
    for (int t = 0; t < 200; ++t) {
      std::vector<WordFactor> word;
      int len = 1 + int(rng() % 6);
      for (int i = 0; i < len; ++i) {
        if (rng() & 1)
          word.push_back({true, i64(rng() % 9), 0});
        else
          word.push_back({false, 0, int(rng() % u64(order))});
      }
      auto a = word_reduce(G, word);
      auto b = left_fold(G, word);
      CHECK(a.tau_exp == b.tau_exp);
      CHECK(a.g == b.g);
    }
  }
}

TEST_CASE("twisted ring: products, reflection, laws") {
  LevelParams lv(3, 0, 1, 3);
  FiniteGroup C2 = FiniteGroup::cyclic(2);
  C2.attach_presentation({3, {1, 1}});
  TwistedRing R(C2, lv);
  CycloCharacter chi = CycloCharacter::make(C2, 3, 3, {1, 26});

  // 1 |x 1 reflects to itself
  auto one = R.one();
  auto r1 = twisted_reflect(R, one, chi);
  CHECK(r1.ring.equal(r1.value, r1.ring.one()));

  // T |x 1 reflects to T* |x 1 (capped precision keeps the same coefficients)
  auto tX = R.monomial(LambdaQuot::T(lv), C2.identity);
  auto rt = twisted_reflect(R, tX, chi);
  CHECK(rt.ring.level().N == 2);
  CHECK(rt.value.c[size_t(C2.identity)].coeffs() == std::vector<i64>{3, 8, 4});

  // reflection squared is the identity on random elements
  auto laws = twisted_reflect_laws(R, chi, 50, 3);
  CHECK(laws.involutive);
  CHECK(laws.anti_multiplicative);
  CHECK(laws.multiplicative);  // trivial action: the ring is commutative

  // nontrivial compatible action: anti-multiplicative only
  LevelParams lv2(3, 0, 2, 2);
  FiniteGroup C3 = FiniteGroup::cyclic(3);
  C3.attach_presentation({9, {1, 4, 7}});
  TwistedRing R2(C3, lv2);
  CycloCharacter chi3 = CycloCharacter::make(C3, 3, 3, {1, 10, 19});
  auto laws2 = twisted_reflect_laws(R2, chi3, 40, 9);
  CHECK(laws2.involutive);
  CHECK(laws2.anti_multiplicative);
  CHECK_FALSE(laws2.multiplicative);
}
