#pragma once

#include <vector>

#include "iwalab/base.hpp"

namespace iwalab::fp {

// Small F_p[X] toolkit shared by the Hensel machinery and the idempotent
// refinement. Coefficients low-degree first, in [0, p), trailing zeros
// trimmed.
using Poly = std::vector<i64>;

void trim(Poly& f);
Poly mul(const Poly& a, const Poly& b, i64 p);
Poly sub(const Poly& a, const Poly& b, i64 p);
i64 inv_scalar(i64 a, i64 p);
std::pair<Poly, Poly> divrem(const Poly& a, const Poly& d, i64 p);
Poly gcd(Poly a, Poly b, i64 p);
// u*a + v*b = 1 for coprime a, b
void bezout(const Poly& a, const Poly& b, i64 p, Poly& u, Poly& v);
// monic irreducibles of degree <= dmax
std::vector<Poly> irreducibles(i64 p, int dmax);
// factor a squarefree monic polynomial into monic irreducibles
std::vector<Poly> factor_squarefree(Poly f, i64 p);

}  // namespace iwalab::fp
