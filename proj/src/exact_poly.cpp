#include "hypzero/exact_poly.hpp"

#include <algorithm>

#include "hypzero/errors.hpp"

namespace hypzero::poly {

void trim(ExactPoly& p) {
  while (!p.empty() && p.back().is_zero()) p.pop_back();
}

int degree(std::span<const ComplexRational> p) {
  for (std::size_t k = p.size(); k-- > 0;) {
    if (!p[k].is_zero()) return static_cast<int>(k);
  }
  return -1;
}

bool is_zero(std::span<const ComplexRational> p) { return degree(p) < 0; }

ComplexRational evaluate(std::span<const ComplexRational> p, const ComplexRational& z) {
  ComplexRational acc;
  for (std::size_t k = p.size(); k-- > 0;) {
    acc *= z;
    acc += p[k];
  }
  return acc;
}

ExactPoly derivative(std::span<const ComplexRational> p) {
  ExactPoly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * ComplexRational(static_cast<long>(k)));
  trim(d);
  return d;
}

ExactPoly add(std::span<const ComplexRational> a, std::span<const ComplexRational> b) {
  ExactPoly r(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] += b[k];
  trim(r);
  return r;
}

ExactPoly sub(std::span<const ComplexRational> a, std::span<const ComplexRational> b) {
  ExactPoly r(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < a.size(); ++k) r[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) r[k] -= b[k];
  trim(r);
  return r;
}

ExactPoly mul(std::span<const ComplexRational> a, std::span<const ComplexRational> b) {
  if (a.empty() || b.empty()) return {};
  ExactPoly r(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].is_zero()) continue;
    for (std::size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
  }
  trim(r);
  return r;
}

ExactPoly scale(std::span<const ComplexRational> a, const ComplexRational& c) {
  ExactPoly r(a.begin(), a.end());
  for (auto& x : r) x *= c;
  trim(r);
  return r;
}

ExactPoly power(std::span<const ComplexRational> a, unsigned e) {
  ExactPoly r{ComplexRational(1)};
  for (unsigned i = 0; i < e; ++i) r = mul(r, a);
  return r;
}

DivMod divmod(std::span<const ComplexRational> a, std::span<const ComplexRational> b) {
  const int db = degree(b);
  if (db < 0) throw invalid_input("polynomial division by zero");
  ExactPoly rem(a.begin(), a.end());
  trim(rem);
  const int da = degree(rem);
  if (da < db) return {{}, rem};
  ExactPoly quot(static_cast<std::size_t>(da - db + 1));
  const ComplexRational& lead = b[static_cast<std::size_t>(db)];
  for (int k = da; k >= db; --k) {
    const ComplexRational c = rem[static_cast<std::size_t>(k)] / lead;
    quot[static_cast<std::size_t>(k - db)] = c;
    if (c.is_zero()) continue;
    for (int j = 0; j <= db; ++j) rem[static_cast<std::size_t>(k - db + j)] -= c * b[static_cast<std::size_t>(j)];
  }
  rem.resize(static_cast<std::size_t>(db));
  trim(rem);
  trim(quot);
  return {std::move(quot), std::move(rem)};
}

namespace {

ExactPoly monic(ExactPoly p) {
  trim(p);
  if (p.empty()) return p;
  const ComplexRational lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

}  // namespace

ExactPoly gcd(std::span<const ComplexRational> a, std::span<const ComplexRational> b) {
  ExactPoly x(a.begin(), a.end());
  ExactPoly y(b.begin(), b.end());
  trim(x);
  trim(y);
  while (!y.empty()) {
    ExactPoly r = monic(divmod(x, y).remainder);
    x = monic(std::move(y));
    y = std::move(r);
  }
  return monic(std::move(x));
}

ExactPoly squarefree_part(std::span<const ComplexRational> p) {
  ExactPoly g = gcd(p, derivative(p));
  if (degree(g) <= 0) {
    ExactPoly r(p.begin(), p.end());
    trim(r);
    return r;
  }
  return divmod(p, g).quotient;
}

ExactPoly from_shifted_roots(std::span<const ComplexRational> shifts) {
  ExactPoly r{ComplexRational(1)};
  for (const auto& s : shifts) r = mul(r, ExactPoly{s, ComplexRational(1)});
  return r;
}

}  // namespace hypzero::poly
