#include "iwalab/fp_poly.hpp"

#include <algorithm>
#include <random>

namespace iwalab::fp {

void trim(Poly& f) {
  while (!f.empty() && f.back() == 0) f.pop_back();
}

Poly mul(const Poly& a, const Poly& b, i64 p) {
  if (a.empty() || b.empty()) return {};
  Poly r(a.size() + b.size() - 1, 0);
  for (size_t i = 0; i < a.size(); ++i)
    for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % p;
  trim(r);
  return r;
}

Poly sub(const Poly& a, const Poly& b, i64 p) {
  Poly r(std::max(a.size(), b.size()), 0);
  for (size_t i = 0; i < r.size(); ++i) {
    i64 x = (i < a.size() ? a[i] : 0) - (i < b.size() ? b[i] : 0);
    r[i] = ((x % p) + p) % p;
  }
  trim(r);
  return r;
}

i64 inv_scalar(i64 a, i64 p) {
  a = ((a % p) + p) % p;
  for (i64 c = 1; c < p; ++c)
    if ((a * c) % p == 1) return c;
  fail(errc::non_unit, "no inverse mod p");
}

std::pair<Poly, Poly> divrem(const Poly& a, const Poly& d, i64 p) {
  Poly rem = a, quo;
  if (d.empty()) fail(errc::input_error, "F_p division by zero");
  i64 li = inv_scalar(d.back(), p);
  if (rem.size() >= d.size()) quo.assign(rem.size() - d.size() + 1, 0);
  while (rem.size() >= d.size() && !rem.empty()) {
    i64 q = (rem.back() * li) % p;
    size_t k = rem.size() - d.size();
    if (q)
      for (size_t j = 0; j < d.size(); ++j) rem[k + j] = ((rem[k + j] - q * d[j]) % p + p) % p;
    quo[k] = q;
    trim(rem);
    if (rem.size() < d.size()) break;
  }
  trim(quo);
  return {quo, rem};
}

Poly gcd(Poly a, Poly b, i64 p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    auto [q, r] = divrem(a, b, p);
    a = b;
    b = r;
  }
  if (!a.empty()) {
    i64 li = inv_scalar(a.back(), p);
    for (auto& x : a) x = (x * li) % p;
  }
  return a;
}

void bezout(const Poly& a, const Poly& b, i64 p, Poly& u, Poly& v) {
  Poly r0 = a, r1 = b, s0 = {1}, s1 = {}, t0 = {}, t1 = {1};
  trim(r0);
  trim(r1);
  while (!r1.empty()) {
    auto [q, r] = divrem(r0, r1, p);
    Poly s2 = sub(s0, mul(q, s1, p), p);
    Poly t2 = sub(t0, mul(q, t1, p), p);
    r0 = r1;
    r1 = r;
    s0 = s1;
    s1 = s2;
    t0 = t1;
    t1 = t2;
  }
  if (r0.size() != 1) fail(errc::internal, "bezout of non-coprime polynomials");
  i64 li = inv_scalar(r0[0], p);
  u = s0;
  v = t0;
  for (auto& x : u) x = (x * li) % p;
  for (auto& x : v) x = (x * li) % p;
}

std::vector<Poly> irreducibles(i64 p, int dmax) {
  std::vector<Poly> irr;
  for (int d = 1; d <= dmax; ++d) {
    i64 count = 1;
    for (int i = 0; i < d; ++i) count *= p;
    for (i64 code = 0; code < count; ++code) {
      Poly f(size_t(d) + 1, 0);
      f[size_t(d)] = 1;
      i64 c = code;
      for (int i = 0; i < d; ++i) {
        f[size_t(i)] = c % p;
        c /= p;
      }
      bool red = false;
      for (const auto& g : irr) {
        if (int(g.size()) - 1 > d / 2) break;
        if (divrem(f, g, p).second.empty()) {
          red = true;
          break;
        }
      }
      if (!red) irr.push_back(f);
    }
    std::stable_sort(irr.begin(), irr.end(), [](const Poly& a, const Poly& b) {
      if (a.size() != b.size()) return a.size() < b.size();
      return a < b;
    });
  }
  return irr;
}

namespace {

Poly powmod(Poly a, i64 e, const Poly& m, i64 p) {
  Poly r = {1};
  a = divrem(a, m, p).second;
  while (e) {
    if (e & 1) r = divrem(mul(r, a, p), m, p).second;
    a = divrem(mul(a, a, p), m, p).second;
    e >>= 1;
  }
  return r;
}

Poly make_monic(Poly f, i64 p) {
  trim(f);
  if (f.empty()) return f;
  i64 li = inv_scalar(f.back(), p);
  for (auto& x : f) x = (x * li) % p;
  return f;
}

// Cantor-Zassenhaus equal-degree splitting: g squarefree, all irreducible
// factors of degree d.
void equal_degree(const Poly& g, int d, i64 p, std::mt19937_64& rng, std::vector<Poly>& out) {
  int dg = int(g.size()) - 1;
  if (dg == d) {
    out.push_back(make_monic(g, p));
    return;
  }
  for (;;) {
    Poly a(size_t(dg), 0);
    for (auto& x : a) x = i64(rng() % u64(p));
    trim(a);
    if (a.empty()) continue;
    Poly c;
    if (p == 2) {
      // trace map over F_{2^d}
      Poly t = a, cur = a;
      for (int i = 1; i < d; ++i) {
        cur = divrem(mul(cur, cur, 2), g, 2).second;
        t = sub(t, cur, 2);  // over F_2 subtraction is addition
      }
      c = gcd(t, g, p);
    } else {
      i64 e = 1;
      for (int i = 0; i < d; ++i) e *= p;
      Poly b = powmod(a, (e - 1) / 2, g, p);
      b = sub(b, {1}, p);
      c = gcd(b, g, p);
    }
    int dc = int(c.size()) - 1;
    if (dc > 0 && dc < dg) {
      equal_degree(c, d, p, rng, out);
      equal_degree(divrem(g, c, p).first, d, p, rng, out);
      return;
    }
  }
}

}  // namespace

std::vector<Poly> factor_squarefree(Poly f, i64 p) {
  f = make_monic(std::move(f), p);
  std::vector<Poly> factors;
  if (f.size() <= 1) return factors;
  // distinct-degree, then equal-degree splitting (seeded, deterministic)
  std::mt19937_64 rng(0x5EEDu);
  Poly rest = f;
  Poly x = {0, 1};
  Poly w = divrem(x, rest, p).second;
  for (int d = 1; int(rest.size()) - 1 > 0; ++d) {
    if (2 * d > int(rest.size()) - 1) {
      factors.push_back(rest);
      break;
    }
    w = powmod(w, p, rest, p);
    Poly g = gcd(sub(w, x, p), rest, p);
    if (int(g.size()) - 1 > 0) {
      equal_degree(g, d, p, rng, factors);
      rest = divrem(rest, g, p).first;
      w = divrem(w, rest, p).second;
    }
  }
  std::sort(factors.begin(), factors.end(), [](const Poly& a, const Poly& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return factors;
}

}  // namespace iwalab::fp
