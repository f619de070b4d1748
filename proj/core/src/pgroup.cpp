#include "iwalab/pgroup.hpp"

#include <algorithm>
#include <random>

namespace iwalab {

FinAbPGroup::FinAbPGroup(i64 p_, std::vector<int> exps_) : p(p_), exps(std::move(exps_)) {
  if (!is_prime(p)) fail(errc::input_error, "p must be prime");
  for (size_t i = 0; i < exps.size(); ++i) {
    if (exps[i] < 1) fail(errc::input_error, "exponents must be >= 1");
    if (i && exps[i] > exps[i - 1]) fail(errc::input_error, "exponents must be non-increasing");
  }
}

int FinAbPGroup::size_log() const {
  int s = 0;
  for (int e : exps) s += e;
  return s;
}

int FinAbPGroup::socle_size_log(int m) const {
  int s = 0;
  for (int e : exps) s += std::min(m, e);
  return s;
}

std::vector<i64> FinAbPGroup::reduce(const std::vector<i64>& x) const {
  if (x.size() != exps.size()) fail(errc::input_error, "coordinate count mismatch");
  std::vector<i64> r(x.size());
  for (size_t i = 0; i < x.size(); ++i) {
    i64 m = pow_i64_checked(p, exps[i]);
    r[i] = ((x[i] % m) + m) % m;
  }
  return r;
}

bool FinAbPGroup::is_zero(const std::vector<i64>& x) const {
  auto r = reduce(x);
  return std::all_of(r.begin(), r.end(), [](i64 v) { return v == 0; });
}

int FinAbPGroup::order_log(const std::vector<i64>& x) const {
  auto r = reduce(x);
  int o = 0;
  for (size_t i = 0; i < r.size(); ++i) {
    if (!r[i]) continue;
    int v = 0;
    i64 y = r[i];
    while (y % p == 0) {
      y /= p;
      ++v;
    }
    o = std::max(o, exps[i] - v);
  }
  return o;
}

std::vector<std::vector<i64>> FinAbPGroup::enumerate(i64 cap) const {
  i128 total = 1;
  for (int e : exps) {
    total *= pow_i64_checked(p, e);
    if (total > cap) fail(errc::too_large, "group too large to enumerate");
  }
  std::vector<std::vector<i64>> all;
  all.reserve(size_t(total));
  std::vector<i64> cur(exps.size(), 0);
  for (;;) {
    all.push_back(cur);
    size_t i = 0;
    for (; i < exps.size(); ++i) {
      if (++cur[i] < pow_i64_checked(p, exps[i])) break;
      cur[i] = 0;
    }
    if (i == exps.size()) break;
  }
  return all;
}

Mat group_full_lattice(const FinAbPGroup& G, int F) {
  Mat L(G.rank(), G.rank());
  for (int i = 0; i < G.rank(); ++i) L.at(i, i) = pow_i64_checked(G.p, F - G.exps[size_t(i)]);
  return L;
}

std::vector<i64> to_scaled(const FinAbPGroup& G, const std::vector<i64>& x, int F) {
  auto r = G.reduce(x);
  for (size_t i = 0; i < r.size(); ++i) r[i] *= pow_i64_checked(G.p, F - G.exps[i]);
  return r;
}

namespace {

int flat_precision(const FinAbPGroup& a, const FinAbPGroup& b) {
  return std::max({a.exponent_log(), b.exponent_log(), 1});
}

Mat scaled_image_rows(const PGroupHom& h, int F) {
  Mat S(h.domain.rank(), h.codomain.rank());
  for (int i = 0; i < h.domain.rank(); ++i) S.set_row(i, to_scaled(h.codomain, h.M.row(i), F));
  return S;
}

// p^k * G as a lattice in the flat embedding
Mat multiple_lattice(const FinAbPGroup& G, int F, int k) {
  Mat L(G.rank(), G.rank());
  for (int i = 0; i < G.rank(); ++i) {
    int e = F - G.exps[size_t(i)] + k;
    L.at(i, i) = e >= F ? 0 : pow_i64_checked(G.p, e);
  }
  return L;
}

}  // namespace

PGroupHom PGroupHom::make(FinAbPGroup dom, FinAbPGroup cod, Mat M) {
  if (dom.p != cod.p) fail(errc::inconsistent_parameters, "mixed primes");
  if (M.rows != dom.rank() || M.cols != cod.rank())
    fail(errc::input_error, "homomorphism matrix shape mismatch");
  for (int i = 0; i < M.rows; ++i)
    for (int j = 0; j < M.cols; ++j) {
      // p^{e_i} * row_i must vanish in the codomain
      i64 m = pow_i64_checked(dom.p, cod.exps[size_t(j)]);
      i64 v = ((M.at(i, j) % m) + m) % m;
      i64 need = pow_i64_checked(dom.p, std::max(cod.exps[size_t(j)] - dom.exps[size_t(i)], 0));
      if (v % need != 0) fail(errc::input_error, "matrix does not respect generator orders");
    }
  PGroupHom h;
  h.domain = std::move(dom);
  h.codomain = std::move(cod);
  h.M = std::move(M);
  return h;
}

std::vector<i64> PGroupHom::apply(const std::vector<i64>& x) const {
  auto xr = domain.reduce(x);
  std::vector<i64> y(size_t(codomain.rank()), 0);
  for (int j = 0; j < codomain.rank(); ++j) {
    i64 m = pow_i64_checked(domain.p, codomain.exps[size_t(j)]);
    u64 acc = 0;
    for (int i = 0; i < domain.rank(); ++i) {
      i64 v = ((M.at(i, j) % m) + m) % m;
      acc = (acc + u64(xr[size_t(i)]) * u64(v)) % u64(m);
    }
    y[size_t(j)] = i64(acc);
  }
  return y;
}

PGroupHom PGroupHom::compose_after(const PGroupHom& first) const {
  if (!(first.codomain == domain)) fail(errc::inconsistent_parameters, "composition mismatch");
  Mat C(first.domain.rank(), codomain.rank());
  for (int i = 0; i < C.rows; ++i) C.set_row(i, apply(first.M.row(i)));
  return PGroupHom::make(first.domain, codomain, C);
}

bool PGroupHom::is_surjective() const {
  int F = flat_precision(domain, codomain);
  ZModRing R(domain.p, F);
  Mat img = howell_form(scaled_image_rows(*this, F), R);
  return span_size_log(img, R) == codomain.size_log();
}

int PGroupHom::kernel_size_log() const {
  int F = flat_precision(domain, codomain);
  ZModRing R(domain.p, F);
  Mat K = kernel_row(scaled_image_rows(*this, F), R);
  // the kernel lattice contains the domain relations diag(p^{e_i})
  int rel_log = 0;
  for (int e : domain.exps) rel_log += F - e;
  return span_size_log(howell_form(K, R), R) - rel_log;
}

bool PGroupHom::is_injective() const { return kernel_size_log() == 0; }

int PGroupHom::image_rank() const {
  // p-rank of the image subgroup S, i.e. log |S/pS|
  int F = flat_precision(domain, codomain);
  ZModRing R(domain.p, F);
  Mat img = howell_form(scaled_image_rows(*this, F), R);
  Mat pimg = img;
  for (auto& x : pimg.a) x = R.mul(x, domain.p % R.mod);
  return span_size_log(img, R) - span_size_log(howell_form(pimg, R), R);
}

bool PGroupHom::image_equals_multiple(int k) const {
  int F = flat_precision(domain, codomain);
  ZModRing R(domain.p, F);
  return span_equal(scaled_image_rows(*this, F), multiple_lattice(codomain, F, k), R);
}

FinAbPGroup snf_classify(const Mat& relations, i64 p) {
  auto d = snf_int(relations);
  if (int(d.size()) < relations.cols) fail(errc::infinite_group, "presentation has free rank");
  std::vector<int> exps;
  for (i64 x : d) {
    if (x == 0) fail(errc::infinite_group, "zero elementary divisor");
    int v = 0;
    while (x % p == 0) {
      x /= p;
      ++v;
    }
    if (v > 0) exps.push_back(v);
  }
  std::sort(exps.rbegin(), exps.rend());
  return FinAbPGroup(p, exps);
}

StructureStats structure_stats(const FinAbPGroup& X) {
  StructureStats s;
  s.p_rank = X.rank();
  s.exponent_log = X.exponent_log();
  s.subexponent_log = X.subexponent_log();
  for (int m = 1; m <= X.exponent_log(); ++m) s.socle_logs.push_back(X.socle_size_log(m));
  return s;
}

LemmaAbReport verify_lemma_ab(const FinAbPGroup& A, const FinAbPGroup& B, const PGroupHom& N,
                              const PGroupHom& iota, u64 sample_seed) {
  if (!(N.domain == B && N.codomain == A && iota.domain == A && iota.codomain == B))
    fail(errc::inconsistent_parameters, "maps must be N: B->A and iota: A->B");
  LemmaAbReport rep;
  rep.n_surjective = N.is_surjective();
  int r = A.rank();
  rep.ranks_equal = (B.rank() == r);
  rep.cardinality_ratio_ok = (B.size_log() - A.size_log() == r);
  // N(iota(a)) = p*a, checked on generators
  PGroupHom ni = N.compose_after(iota);
  rep.n_iota_is_mult_p = true;
  for (int i = 0; i < A.rank(); ++i) {
    std::vector<i64> gen(size_t(A.rank()), 0);
    gen[size_t(i)] = 1;
    std::vector<i64> expect(size_t(A.rank()), 0);
    expect[size_t(i)] = A.p;
    if (A.reduce(ni.apply(gen)) != A.reduce(expect)) rep.n_iota_is_mult_p = false;
  }
  rep.iota_image_rank = iota.image_rank();
  rep.iota_rank_preserving = (rep.iota_image_rank == r);
  rep.hypotheses_hold = rep.n_surjective && rep.ranks_equal && rep.cardinality_ratio_ok &&
                        rep.n_iota_is_mult_p && rep.iota_rank_preserving;
  if (!rep.hypotheses_hold) return rep;

  rep.conclusions_checked = true;
  rep.iota_injective = iota.is_injective();
  rep.iota_image_is_pB = iota.image_equals_multiple(1);
  rep.order_law_holds = true;
  rep.order_law_exhaustive = B.size_log() <= 6;
  auto check_one = [&](const std::vector<i64>& x) {
    if (B.is_zero(x)) return;
    if (B.order_log(x) != A.order_log(N.apply(x)) + 1) rep.order_law_holds = false;
  };
  if (rep.order_law_exhaustive) {
    for (const auto& x : B.enumerate()) check_one(x);
  } else {
    std::mt19937_64 rng(sample_seed);
    for (int t = 0; t < 500; ++t) {
      std::vector<i64> x(size_t(B.rank()), 0);
      for (size_t i = 0; i < x.size(); ++i)
        x[i] = i64(rng() % u64(pow_i64_checked(B.p, B.exps[i])));
      check_one(x);
    }
  }
  return rep;
}

namespace {

// random automorphism: unit diagonal, admissible off-diagonal entries,
// rejection-sampled for bijectivity
PGroupHom random_automorphism(const FinAbPGroup& G, std::mt19937_64& rng) {
  for (int attempt = 0; attempt < 64; ++attempt) {
    Mat U(G.rank(), G.rank());
    for (int i = 0; i < G.rank(); ++i)
      for (int j = 0; j < G.rank(); ++j) {
        i64 m = pow_i64_checked(G.p, G.exps[size_t(j)]);
        i64 need = pow_i64_checked(G.p, std::max(G.exps[size_t(j)] - G.exps[size_t(i)], 0));
        if (i == j) {
          i64 u = 1 + i64(rng() % u64(m - 1));
          while (u % G.p == 0) u = 1 + i64(rng() % u64(m - 1));
          U.at(i, j) = u;
        } else {
          U.at(i, j) = need * i64(rng() % u64(std::max<i64>(m / need, 1)));
        }
      }
    PGroupHom h = PGroupHom::make(G, G, U);
    if (h.is_surjective() && h.kernel_size_log() == 0) return h;
  }
  fail(errc::internal, "automorphism sampling failed");
}

PGroupHom hom_inverse(const PGroupHom& h) {
  int F = flat_precision(h.domain, h.codomain);
  ZModRing R(h.domain.p, F);
  Mat S = scaled_image_rows(h, F);
  Mat Inv(h.codomain.rank(), h.domain.rank());
  for (int i = 0; i < h.codomain.rank(); ++i) {
    std::vector<i64> gen(size_t(h.codomain.rank()), 0);
    gen[size_t(i)] = 1;
    auto sol = solve_row(S, to_scaled(h.codomain, gen, F), R);
    if (!sol) fail(errc::internal, "inverse of non-bijective homomorphism");
    Inv.set_row(i, h.domain.reduce(sol->particular));
  }
  return PGroupHom::make(h.codomain, h.domain, Inv);
}

}  // namespace

LemmaAbInstance make_lemma_ab_instance(i64 p, u64 seed, int max_rank, int size_log_cap) {
  std::mt19937_64 rng(seed);
  int r = 1 + int(rng() % u64(max_rank));
  // invariants of B: all >= 2 so that A = B/p keeps the same rank
  std::vector<int> be;
  int budget = size_log_cap;
  for (int i = 0; i < r; ++i) {
    int remaining = budget - 2 * (r - i - 1);
    int e = 2 + (remaining > 2 ? int(rng() % u64(remaining - 1)) : 0);
    if (i) e = std::min(e, be.back());
    e = std::max(e, 2);
    be.push_back(e);
    budget -= e;
  }
  std::sort(be.rbegin(), be.rend());
  FinAbPGroup B(p, be);
  std::vector<int> ae;
  for (int e : be) ae.push_back(e - 1);
  FinAbPGroup A(p, ae);

  Mat Nm(r, r), Im(r, r);
  for (int i = 0; i < r; ++i) {
    Nm.at(i, i) = 1;  // coordinate reduction mod p^{e_i - 1}
    Im.at(i, i) = p;  // multiplication by p
  }
  PGroupHom N = PGroupHom::make(B, A, Nm);
  PGroupHom iota = PGroupHom::make(A, B, Im);

  // twist: N' = alpha^{-1} o N o beta and iota' = beta^{-1} o iota o alpha
  // keep N' o iota' = p
  PGroupHom alpha = random_automorphism(A, rng);
  PGroupHom beta = random_automorphism(B, rng);
  PGroupHom alpha_inv = hom_inverse(alpha);
  PGroupHom beta_inv = hom_inverse(beta);
  return LemmaAbInstance{A, B, alpha_inv.compose_after(N.compose_after(beta)),
                         beta_inv.compose_after(iota.compose_after(alpha))};
}

Mat generator_change(const FinAbPGroup& X, const Mat& gens1, const Mat& gens2) {
  int r = X.rank();
  if (gens1.rows != r || gens2.rows != r || gens1.cols != r || gens2.cols != r)
    fail(errc::not_minimal_system, "minimal systems must have exactly p-rank many rows");
  // Nakayama: rows must span X/pX
  ZModRing Rp(X.p, 1);
  for (const Mat* G : {&gens1, &gens2}) {
    auto s = snf(mat_reduce(*G, Rp), Rp, false);
    if (s.unit_rank != r) fail(errc::not_minimal_system, "rows do not generate X/pX");
  }
  int F = X.exponent_log();
  ZModRing R(X.p, F);
  Mat G1s(r, r);
  for (int i = 0; i < r; ++i) G1s.set_row(i, to_scaled(X, gens1.row(i), F));
  Mat E(r, r);
  for (int i = 0; i < r; ++i) {
    auto sol = solve_row(G1s, to_scaled(X, gens2.row(i), F), R);
    if (!sol) fail(errc::internal, "generating system solve failed");
    E.set_row(i, sol->particular);
  }
  auto s = snf(mat_reduce(E, Rp), Rp, false);
  if (s.unit_rank != r) fail(errc::internal, "change of basis not invertible mod p");
  return E;
}

TowerReport limit_rank(const std::vector<FinAbPGroup>& tower, const std::vector<PGroupHom>& maps) {
  if (tower.size() < 2) fail(errc::insufficient_levels, "need at least two tower levels");
  if (maps.size() + 1 != tower.size()) fail(errc::input_error, "need one map per step");
  for (size_t i = 0; i < maps.size(); ++i) {
    if (!(maps[i].domain == tower[i] && maps[i].codomain == tower[i + 1]))
      fail(errc::inconsistent_parameters, "map endpoints do not match the tower");
    if (!maps[i].is_injective()) fail(errc::not_injective_tower, "connecting map has a kernel");
  }
  TowerReport rep;
  for (const auto& G : tower) {
    rep.ranks.push_back(G.rank());
    rep.subexponent_logs.push_back(G.subexponent_log());
  }
  rep.ranks_constant = std::all_of(rep.ranks.begin(), rep.ranks.end(),
                                   [&](int r) { return r == rep.ranks.front(); });
  rep.subexponents_diverge = true;
  for (size_t i = 0; i + 1 < rep.subexponent_logs.size(); ++i)
    if (rep.subexponent_logs[i + 1] <= rep.subexponent_logs[i]) rep.subexponents_diverge = false;

  if (rep.ranks_constant && rep.subexponents_diverge) {
    rep.verdict = TowerVerdict::stable_limit_rank;
    rep.rank_value = rep.ranks.front();
    return rep;
  }
  // invariant-factor positions growing along the whole stored tower
  int maxr = *std::max_element(rep.ranks.begin(), rep.ranks.end());
  int diverging = 0;
  for (int pos = 0; pos < maxr; ++pos) {
    bool grows = true;
    for (size_t i = 0; i + 1 < tower.size(); ++i) {
      int a = pos < tower[i].rank() ? tower[i].exps[size_t(pos)] : 0;
      int b = pos < tower[i + 1].rank() ? tower[i + 1].exps[size_t(pos)] : 0;
      if (b <= a) grows = false;
    }
    if (grows) ++diverging;
  }
  rep.rank_value = diverging;
  rep.verdict = diverging > 0 ? TowerVerdict::essential_rank : TowerVerdict::bounded;
  return rep;
}

}  // namespace iwalab
