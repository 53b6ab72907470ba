#pragma once

#include "tgs/model.hpp"

namespace tgs::fixtures {

// two-element lattice: addition = OR, product = AND, unit 1
inline GammaSemiring boolean2() {
  GammaSemiring t;
  t.n = 2;
  t.m = 1;
  t.alloc();
  auto set_add = [&](int a, int b, int v) { t.add[a * 2 + b] = v; };
  set_add(0, 0, 0);
  set_add(0, 1, 1);
  set_add(1, 0, 1);
  set_add(1, 1, 1);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        t.tern[((0 * 2 + a) * 2 + b) * 2 + c] = a & b & c;
  t.e = 1;
  return t;
}

// integers mod 2 with multiplication; group-complete
inline GammaSemiring mod2_prod() {
  GammaSemiring t;
  t.n = 2;
  t.m = 1;
  t.alloc();
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) t.add[a * 2 + b] = (a + b) % 2;
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c)
        t.tern[((0 * 2 + a) * 2 + b) * 2 + c] = (a * b * c) % 2;
  t.e = 1;
  return t;
}

// the additive three-element table {a,b,c} = a+b+c mod 3 with parameters
// {1,2} under multiplication mod 3; violates zero absorption
inline GammaSemiring mod3_sum() {
  GammaSemiring t;
  t.n = 3;
  t.m = 2;
  t.alloc();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) t.add[a * 3 + b] = (a + b) % 3;
  // parameter index g represents the residue g+1
  auto gidx = [&](int residue) { return residue - 1; };
  for (int g = 0; g < 2; ++g)
    for (int h = 0; h < 2; ++h)
      t.gmul[g * 2 + h] = gidx(((g + 1) * (h + 1)) % 3);
  for (int g = 0; g < 2; ++g)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          t.tern[((static_cast<std::size_t>(g) * 3 + a) * 3 + b) * 3 + c] =
              (a + b + c) % 3;
  return t;
}

// integers mod 3 with {a,b,c}_g = a*b*c*(g+1) mod 3; group-complete,
// single-point spectrum, unit 1
inline GammaSemiring mod3_prod() {
  GammaSemiring t;
  t.n = 3;
  t.m = 2;
  t.alloc();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) t.add[a * 3 + b] = (a + b) % 3;
  auto gidx = [&](int residue) { return residue - 1; };
  for (int g = 0; g < 2; ++g)
    for (int h = 0; h < 2; ++h)
      t.gmul[g * 2 + h] = gidx(((g + 1) * (h + 1)) % 3);
  for (int g = 0; g < 2; ++g)
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int c = 0; c < 3; ++c)
          t.tern[((static_cast<std::size_t>(g) * 3 + a) * 3 + b) * 3 + c] =
              (a * b * c * (g + 1)) % 3;
  t.e = 1;
  return t;
}

// componentwise product of two models with the same parameter structure
inline GammaSemiring product(const GammaSemiring& a, const GammaSemiring& b) {
  GammaSemiring t;
  t.n = a.n * b.n;
  t.m = a.m;
  t.alloc();
  t.gmul = a.gmul;
  auto idx = [&](int x, int y) { return x * b.n + y; };
  for (int x = 0; x < a.n; ++x)
    for (int y = 0; y < b.n; ++y)
      for (int x2 = 0; x2 < a.n; ++x2)
        for (int y2 = 0; y2 < b.n; ++y2)
          t.add[idx(x, y) * t.n + idx(x2, y2)] =
              idx(a.plus(x, x2), b.plus(y, y2));
  for (int g = 0; g < t.m; ++g)
    for (int x = 0; x < a.n; ++x)
      for (int y = 0; y < b.n; ++y)
        for (int x2 = 0; x2 < a.n; ++x2)
          for (int y2 = 0; y2 < b.n; ++y2)
            for (int x3 = 0; x3 < a.n; ++x3)
              for (int y3 = 0; y3 < b.n; ++y3)
                t.tern[((static_cast<std::size_t>(g) * t.n + idx(x, y)) * t.n +
                        idx(x2, y2)) *
                           t.n +
                       idx(x3, y3)] =
                    idx(a.prod(g, x, x2, x3), b.prod(g, y, y2, y3));
  if (a.e && b.e) t.e = idx(*a.e, *b.e);
  return t;
}

inline GammaSemiring bool_pair() { return product(boolean2(), boolean2()); }

// chain 0 < 1 < 2 with addition = max and product = min; unit 2
inline GammaSemiring chain3() {
  GammaSemiring t;
  t.n = 3;
  t.m = 1;
  t.alloc();
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b) t.add[a * 3 + b] = std::max(a, b);
  for (int a = 0; a < 3; ++a)
    for (int b = 0; b < 3; ++b)
      for (int c = 0; c < 3; ++c)
        t.tern[((0 * 3 + a) * 3 + b) * 3 + c] = std::min({a, b, c});
  t.e = 2;
  return t;
}

inline GammaSemiring trivial(int m = 1) {
  GammaSemiring t;
  t.n = 1;
  t.m = m;
  t.alloc();
  t.e = 0;
  return t;
}

}  // namespace tgs::fixtures
