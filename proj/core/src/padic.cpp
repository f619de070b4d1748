#include "iwalab/padic.hpp"

#include <algorithm>

#include "iwalab/fp_poly.hpp"

namespace iwalab {

PadicInt::PadicInt(i64 p, int N, i64 value) : ring_(p, N), residue_(ring_.reduce(value)) {}

PadicInt PadicInt::with(i64 r) const {
  PadicInt x(*this);
  x.residue_ = ring_.reduce(r);
  return x;
}

namespace {

std::pair<ZModRing, bool> common_ring(const PadicInt& a, const PadicInt& b) {
  if (a.p() != b.p()) fail(errc::inconsistent_parameters, "mixing different primes");
  int N = std::min(a.precision(), b.precision());
  return {ZModRing(a.p(), N), a.precision() != b.precision()};
}

}  // namespace

PadicInt PadicInt::operator+(const PadicInt& o) const {
  auto [R, trunc] = common_ring(*this, o);
  PadicInt r(R.p, R.N, R.add(R.reduce(residue_), R.reduce(o.residue_)));
  r.truncated_ = trunc || truncated_ || o.truncated_;
  return r;
}

PadicInt PadicInt::operator-(const PadicInt& o) const {
  auto [R, trunc] = common_ring(*this, o);
  PadicInt r(R.p, R.N, R.sub(R.reduce(residue_), R.reduce(o.residue_)));
  r.truncated_ = trunc || truncated_ || o.truncated_;
  return r;
}

PadicInt PadicInt::operator*(const PadicInt& o) const {
  auto [R, trunc] = common_ring(*this, o);
  PadicInt r(R.p, R.N, R.mul(R.reduce(residue_), R.reduce(o.residue_)));
  r.truncated_ = trunc || truncated_ || o.truncated_;
  return r;
}

PadicInt PadicInt::operator-() const { return with(ring_.neg(residue_)); }

bool PadicInt::operator==(const PadicInt& o) const {
  return p() == o.p() && precision() == o.precision() && residue_ == o.residue_;
}

PadicInt padic_inv(const PadicInt& x) { return x.with(x.ring().inv(x.residue())); }

PadicVal padic_val(const PadicInt& x) {
  int v = x.ring().val(x.residue());
  return {v, x.residue() == 0};
}

PadicPoly::PadicPoly(i64 p, int N, std::vector<i64> coeffs) : ring_(p, N), c_(std::move(coeffs)) {
  for (auto& x : c_) x = ring_.reduce(x);
  normalize();
}

void PadicPoly::normalize() {
  while (!c_.empty() && c_.back() == 0) c_.pop_back();
}

bool PadicPoly::is_monic() const { return !c_.empty() && c_.back() == 1; }

PadicPoly PadicPoly::operator+(const PadicPoly& o) const {
  if (p() != o.p()) fail(errc::inconsistent_parameters, "mixing different primes");
  int N = std::min(precision(), o.precision());
  std::vector<i64> r(std::max(c_.size(), o.c_.size()), 0);
  ZModRing R(p(), N);
  for (size_t i = 0; i < r.size(); ++i) r[i] = R.add(R.reduce(coeff(int(i))), R.reduce(o.coeff(int(i))));
  return PadicPoly(p(), N, std::move(r));
}

PadicPoly PadicPoly::operator-(const PadicPoly& o) const {
  if (p() != o.p()) fail(errc::inconsistent_parameters, "mixing different primes");
  int N = std::min(precision(), o.precision());
  std::vector<i64> r(std::max(c_.size(), o.c_.size()), 0);
  ZModRing R(p(), N);
  for (size_t i = 0; i < r.size(); ++i) r[i] = R.sub(R.reduce(coeff(int(i))), R.reduce(o.coeff(int(i))));
  return PadicPoly(p(), N, std::move(r));
}

PadicPoly PadicPoly::operator*(const PadicPoly& o) const {
  if (p() != o.p()) fail(errc::inconsistent_parameters, "mixing different primes");
  int N = std::min(precision(), o.precision());
  if (is_zero() || o.is_zero()) return PadicPoly(p(), N);
  ZModRing R(p(), N);
  std::vector<i64> r(c_.size() + o.c_.size() - 1, 0);
  for (size_t i = 0; i < c_.size(); ++i)
    for (size_t j = 0; j < o.c_.size(); ++j)
      r[i + j] = R.add(r[i + j], R.mul(R.reduce(c_[i]), R.reduce(o.c_[j])));
  return PadicPoly(p(), N, std::move(r));
}

bool PadicPoly::operator==(const PadicPoly& o) const {
  return p() == o.p() && precision() == o.precision() && c_ == o.c_;
}

i64 PadicPoly::eval(i64 x) const {
  i64 r = 0;
  x = ring_.reduce(x);
  for (auto it = c_.rbegin(); it != c_.rend(); ++it) r = ring_.add(ring_.mul(r, x), *it);
  return r;
}

PadicPoly PadicPoly::derivative() const {
  std::vector<i64> r;
  for (size_t i = 1; i < c_.size(); ++i) r.push_back(ring_.mul(i64(i) % ring_.mod, c_[i]));
  return PadicPoly(p(), precision(), std::move(r));
}

std::pair<PadicPoly, PadicPoly> PadicPoly::divrem(const PadicPoly& d) const {
  if (d.is_zero()) fail(errc::input_error, "division by zero polynomial");
  if (!ring_.is_unit(d.c_.back())) fail(errc::non_unit, "divisor leading coefficient not a unit");
  ZModRing R = ring_;
  i64 lead_inv = R.inv(d.c_.back());
  std::vector<i64> rem(c_);
  std::vector<i64> quo(std::max<int>(degree() - d.degree() + 1, 0), 0);
  for (int k = degree() - d.degree(); k >= 0; --k) {
    if (int(rem.size()) <= k + d.degree()) continue;
    i64 q = R.mul(rem[k + d.degree()], lead_inv);
    if (!q) continue;
    quo[k] = q;
    for (int j = 0; j <= d.degree(); ++j) rem[k + j] = R.sub(rem[k + j], R.mul(q, d.c_[j]));
  }
  return {PadicPoly(p(), precision(), std::move(quo)), PadicPoly(p(), precision(), std::move(rem))};
}

namespace {

using FpPoly = fp::Poly;

FpPoly reduce_mod_p(const PadicPoly& f) {
  FpPoly r;
  for (i64 c : f.coeffs()) r.push_back(c % f.p());
  fp::trim(r);
  return r;
}

PadicPoly lift_poly(const FpPoly& f, i64 p, int N) {
  return PadicPoly(p, N, std::vector<i64>(f.begin(), f.end()));
}

// Hensel lifting of f = g*h from mod p^k to mod p^{k+1} (linear step),
// with Bezout data a*g + b*h = 1 mod p fixed throughout.
struct HenselPair {
  PadicPoly g, h;
};

HenselPair hensel_pair(const PadicPoly& f, const FpPoly& g0, const FpPoly& h0) {
  i64 p = f.p();
  int N = f.precision();
  FpPoly a, b;
  fp::bezout(g0, h0, p, a, b);
  PadicPoly g = lift_poly(g0, p, N);
  PadicPoly h = lift_poly(h0, p, N);
  i64 pk = p;
  for (int k = 1; k < N; ++k, pk *= p) {
    PadicPoly e = f - g * h;
    // delta = e / p^k mod p
    FpPoly delta;
    for (i64 c : e.coeffs()) delta.push_back((c / pk) % p);
    fp::trim(delta);
    if (delta.empty()) continue;
    // solve g*v + h*u = delta over F_p with deg u < deg g
    FpPoly u = fp::divrem(fp::mul(b, delta, p), g0, p).second;
    FpPoly num = fp::sub(delta, fp::mul(h0, u, p), p);
    auto [v, rem] = fp::divrem(num, g0, p);
    if (!rem.empty()) fail(errc::internal, "hensel correction not divisible");
    std::vector<i64> gc = g.coeffs(), hc = h.coeffs();
    gc.resize(std::max(gc.size(), u.size()), 0);
    hc.resize(std::max(hc.size(), v.size()), 0);
    for (size_t i = 0; i < u.size(); ++i) gc[i] = (gc[i] + u[i] * pk) % (g.ring().mod);
    for (size_t i = 0; i < v.size(); ++i) hc[i] = (hc[i] + v[i] * pk) % (h.ring().mod);
    g = PadicPoly(p, N, std::move(gc));
    h = PadicPoly(p, N, std::move(hc));
  }
  return {g, h};
}

}  // namespace

std::vector<PadicPoly> hensel_factor(const PadicPoly& f) {
  if (!f.is_monic()) fail(errc::not_distinguished, "hensel_factor requires a monic polynomial");
  i64 p = f.p();
  FpPoly fbar = reduce_mod_p(f);
  if (int(fbar.size()) != f.degree() + 1)
    fail(errc::not_squarefree_mod_p, "leading coefficient vanishes mod p");
  FpPoly g = fp::gcd(fbar, reduce_mod_p(f.derivative()), p);
  if (g.size() > 1) fail(errc::not_squarefree_mod_p, "gcd(f, f') mod p is nonconstant");

  auto factors = fp::factor_squarefree(fbar, p);
  std::stable_sort(factors.begin(), factors.end(), [](const FpPoly& a, const FpPoly& b) {
    if (a.size() != b.size()) return a.size() < b.size();
    return a < b;
  });
  std::vector<PadicPoly> out;
  PadicPoly rest = f;
  std::vector<FpPoly> pending = factors;
  while (pending.size() > 1) {
    FpPoly g0 = pending.front();
    pending.erase(pending.begin());
    FpPoly h0 = {1};
    for (const auto& q : pending) h0 = fp::mul(h0, q, p);
    auto [G, H] = hensel_pair(rest, g0, h0);
    out.push_back(G);
    rest = H;
  }
  out.push_back(rest);
  return out;
}

CompletionReport split_completions(const PadicPoly& f) {
  auto factors = hensel_factor(f);
  CompletionReport rep;
  rep.g = int(factors.size());
  for (const auto& q : factors) rep.degrees.push_back(q.degree());
  std::sort(rep.degrees.begin(), rep.degrees.end());
  return rep;
}

}  // namespace iwalab
