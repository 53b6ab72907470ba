#include "tgs/ideals.hpp"

#include <algorithm>
#include <numeric>

namespace tgs {

bool is_ideal(const GammaSemiring& t, Mask ideal, Absorption mode,
              IdealViolation* why) {
  if (!mask_has(ideal, 0)) {
    if (why) *why = {"zero", -1, {0}, 0};
    return false;
  }
  for (int a = 0; a < t.n; ++a) {
    if (!mask_has(ideal, a)) continue;
    for (int b = a; b < t.n; ++b) {
      if (!mask_has(ideal, b)) continue;
      int s = t.plus(a, b);
      if (!mask_has(ideal, s)) {
        if (why) *why = {"add", -1, {a, b}, s};
        return false;
      }
    }
  }
  for (int g = 0; g < t.m; ++g)
    for (int a = 0; a < t.n; ++a) {
      if (!mask_has(ideal, a)) continue;
      for (int b = 0; b < t.n; ++b) {
        if (mode == Absorption::Literal && !mask_has(ideal, b)) continue;
        for (int c = 0; c < t.n; ++c) {
          int v = t.prod(g, a, b, c);
          if (!mask_has(ideal, v)) {
            if (why) *why = {"absorption", g, {a, b, c}, v};
            return false;
          }
        }
      }
    }
  return true;
}

Mask ideal_closure(const GammaSemiring& t, Mask generators, Absorption mode) {
  Mask cur = generators | mask_bit(0);
  for (;;) {
    Mask next = cur;
    for (int a = 0; a < t.n; ++a) {
      if (!mask_has(cur, a)) continue;
      for (int b = a; b < t.n; ++b)
        if (mask_has(cur, b)) next |= mask_bit(t.plus(a, b));
      for (int g = 0; g < t.m; ++g)
        for (int b = 0; b < t.n; ++b) {
          if (mode == Absorption::Literal && !mask_has(cur, b)) continue;
          for (int c = 0; c < t.n; ++c)
            next |= mask_bit(t.prod(g, a, b, c));
        }
    }
    if (next == cur) return cur;
    cur = next;
  }
}

std::vector<Mask> all_proper_ideals(const GammaSemiring& t, Absorption mode) {
  if (t.n > 24)
    throw BudgetError("ideal enumeration over " + std::to_string(t.n) +
                      " elements (2^" + std::to_string(t.n - 1) +
                      " subsets) exceeds the supported range");
  std::vector<Mask> out;
  Mask full = full_mask(t.n);
  for (Mask m = 1; m < full; m += 2)  // must contain element 0
    if (is_ideal(t, m, mode)) out.push_back(m);
  return out;
}

bool prime_condition(const GammaSemiring& t, Mask ideal, AxiomWitness* w) {
  for (int g = 0; g < t.m; ++g)
    for (int a = 0; a < t.n; ++a)
      for (int b = a; b < t.n; ++b)
        for (int c = b; c < t.n; ++c) {
          if (mask_has(ideal, a) || mask_has(ideal, b) || mask_has(ideal, c))
            continue;
          int v = t.prod(g, a, b, c);
          if (mask_has(ideal, v)) {
            if (w) *w = {"prime", {g}, {a, b, c}, v, -1};
            return false;
          }
        }
  return true;
}

bool is_prime(const GammaSemiring& t, Mask ideal, Absorption mode,
              AxiomWitness* witness) {
  IdealViolation why;
  if (ideal == full_mask(t.n))
    throw PreconditionError("primality test requires a proper ideal");
  if (!is_ideal(t, ideal, mode, &why))
    throw PreconditionError("primality test on a non-ideal (" + why.kind +
                            " violation)");
  return prime_condition(t, ideal, witness);
}

Mask radical(const GammaSemiring& t, Mask ideal) {
  Mask out = 0;
  for (int a = 0; a < t.n; ++a) {
    // all iterated self-powers p_1 = a, p_{k+1} = {p_k, a, a}_g, any g chain
    Mask seen = mask_bit(a);
    for (;;) {
      Mask next = seen;
      for (int p = 0; p < t.n; ++p) {
        if (!mask_has(seen, p)) continue;
        for (int g = 0; g < t.m; ++g) next |= mask_bit(t.prod(g, p, a, a));
      }
      if (next == seen) break;
      seen = next;
    }
    if (seen & ideal) out |= mask_bit(a);
  }
  return out;
}

bool is_semiprime(const GammaSemiring& t, Mask ideal) {
  return radical(t, ideal) == ideal;
}

SpectrumData spectrum(const GammaSemiring& t, Absorption mode) {
  SpectrumData s;
  s.mode = mode;
  s.proper_ideals = all_proper_ideals(t, mode);
  for (std::size_t i = 0; i < s.proper_ideals.size(); ++i)
    if (prime_condition(t, s.proper_ideals[i])) {
      s.primes.push_back(s.proper_ideals[i]);
      s.prime_ideal_index.push_back(static_cast<int>(i));
    }
  for (Mask ideal : s.proper_ideals) {
    s.d_sets.push_back(d_set_of(s, ideal));
    s.v_sets.push_back(v_set_of(s, ideal));
  }
  auto n_ideals = s.proper_ideals.size();
  s.incidence.assign(n_ideals, std::vector<int>(n_ideals, 0));
  for (std::size_t i = 0; i < n_ideals; ++i)
    for (std::size_t j = 0; j < n_ideals; ++j)
      s.incidence[i][j] = (s.d_sets[j] & ~s.d_sets[i]) == 0 ? 1 : 0;
  auto np = s.primes.size();
  s.incidence_primes.assign(np, std::vector<int>(np, 0));
  for (std::size_t i = 0; i < np; ++i)
    for (std::size_t j = 0; j < np; ++j)
      s.incidence_primes[i][j] =
          s.incidence[s.prime_ideal_index[i]][s.prime_ideal_index[j]];
  return s;
}

Mask d_set_of(const SpectrumData& spec, Mask ideal) {
  Mask d = 0;
  for (std::size_t p = 0; p < spec.primes.size(); ++p)
    if (ideal & ~spec.primes[p]) d |= mask_bit(static_cast<int>(p));
  return d;
}

Mask v_set_of(const SpectrumData& spec, Mask ideal) {
  return spec.all_primes_mask() & ~d_set_of(spec, ideal);
}

Mask ideal_product(const GammaSemiring& t, Mask a, Mask b, Absorption mode) {
  Mask gens = 0;
  for (int g = 0; g < t.m; ++g)
    for (int x = 0; x < t.n; ++x) {
      if (!mask_has(a, x)) continue;
      for (int y = 0; y < t.n; ++y) {
        if (!mask_has(b, y)) continue;
        for (int z = 0; z < t.n; ++z) gens |= mask_bit(t.prod(g, x, y, z));
      }
    }
  return ideal_closure(t, gens, mode);
}

namespace {

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(n) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  }
  bool merge(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    if (a > b) std::swap(a, b);
    parent[b] = a;  // keep the smallest element as representative
    return true;
  }
};

}  // namespace

int Congruence::class_count() const {
  int c = 0;
  for (std::size_t i = 0; i < class_of.size(); ++i)
    if (class_of[i] == static_cast<int>(i)) ++c;
  return c;
}

std::vector<std::vector<int>> Congruence::blocks() const {
  std::vector<std::vector<int>> out;
  std::vector<int> where(class_of.size(), -1);
  for (std::size_t i = 0; i < class_of.size(); ++i) {
    int r = class_of[i];
    if (where[r] < 0) {
      where[r] = static_cast<int>(out.size());
      out.emplace_back();
    }
    out[where[r]].push_back(static_cast<int>(i));
  }
  return out;
}

Congruence bourne_congruence(const GammaSemiring& t, Mask ideal) {
  UnionFind uf(t.n);
  for (int a = 0; a < t.n; ++a)
    for (int b = a + 1; b < t.n; ++b) {
      bool related = false;
      for (int i = 0; i < t.n && !related; ++i) {
        if (!mask_has(ideal, i)) continue;
        for (int j = 0; j < t.n && !related; ++j)
          if (mask_has(ideal, j)) related = t.plus(a, i) == t.plus(b, j);
      }
      if (related) uf.merge(a, b);
    }
  // close under the operations until the partition is a congruence
  bool changed = true;
  while (changed) {
    changed = false;
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b) {
        if (uf.find(a) != uf.find(b) || a == b) continue;
        for (int c = 0; c < t.n; ++c)
          changed |= uf.merge(t.plus(a, c), t.plus(b, c));
        for (int g = 0; g < t.m; ++g)
          for (int c = 0; c < t.n; ++c)
            for (int d = 0; d < t.n; ++d)
              changed |= uf.merge(t.prod(g, a, c, d), t.prod(g, b, c, d));
      }
  }
  Congruence cong;
  cong.class_of.resize(t.n);
  for (int a = 0; a < t.n; ++a) cong.class_of[a] = uf.find(a);
  return cong;
}

bool congruence_compatible(const GammaSemiring& t, const Congruence& c) {
  for (int a = 0; a < t.n; ++a)
    for (int b = 0; b < t.n; ++b) {
      if (!c.same(a, b)) continue;
      for (int x = 0; x < t.n; ++x)
        if (!c.same(t.plus(a, x), t.plus(b, x))) return false;
      for (int g = 0; g < t.m; ++g)
        for (int x = 0; x < t.n; ++x)
          for (int y = 0; y < t.n; ++y)
            if (!c.same(t.prod(g, a, x, y), t.prod(g, b, x, y))) return false;
    }
  return true;
}

ojson SpectrumData::to_json() const {
  ojson j;
  j["mode"] = absorption_str(mode);
  {
    ojson ps = ojson::array();
    for (Mask p : primes) {
      ojson elems = ojson::array();
      for (int i = 0; i < kMaxCarrier; ++i)
        if (mask_has(p, i)) elems.push_back(i);
      ps.push_back(std::move(elems));
    }
    j["primes"] = std::move(ps);
  }
  {
    ojson ids = ojson::array();
    for (Mask i : proper_ideals) ids.push_back(mask_to_hex(i));
    j["ideals"] = std::move(ids);
  }
  auto set_map = [&](const std::vector<Mask>& sets) {
    ojson m = ojson::object();
    for (std::size_t i = 0; i < proper_ideals.size(); ++i) {
      ojson lst = ojson::array();
      for (int p = 0; p < prime_count(); ++p)
        if (mask_has(sets[i], p)) lst.push_back(p);
      m[mask_to_hex(proper_ideals[i])] = std::move(lst);
    }
    return m;
  };
  j["D"] = set_map(d_sets);
  j["V"] = set_map(v_sets);
  j["incidence"] = incidence;
  j["incidence_primes"] = incidence_primes;
  return j;
}

}  // namespace tgs
