#include "tgs/modules.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <numeric>
#include <set>

namespace tgs {

namespace {

constexpr std::size_t kWitnessCap = 64;

void push_witness(AxiomCheck& c, AxiomWitness w) {
  if (c.witnesses.size() < kWitnessCap) c.witnesses.push_back(std::move(w));
}

// How an element was first reached during closure; used to propagate
// candidate homomorphism values deterministically.
struct Derivation {
  int kind = -1;  // 0 zero, 1 generator, 2 sum, 3 action
  int x = 0, y = 0;
  int g = 0, a = 0, b = 0;
};

struct GenTrace {
  std::vector<int> gens;
  std::vector<Derivation> deriv;
  std::vector<int> order;  // elements in discovery order
};

GenTrace module_generators(const GammaSemiring& t, const GammaModule& mod) {
  GenTrace tr;
  tr.deriv.assign(mod.n, {});
  std::vector<bool> known(mod.n, false);
  known[0] = true;
  tr.deriv[0] = {0};
  tr.order.push_back(0);
  auto close = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int x = 0; x < mod.n; ++x) {
        if (!known[x]) continue;
        for (int y = 0; y < mod.n; ++y) {
          if (!known[y]) continue;
          int s = mod.plus(x, y);
          if (!known[s]) {
            known[s] = true;
            tr.deriv[s] = {2, x, y};
            tr.order.push_back(s);
            changed = true;
          }
        }
        for (int g = 0; g < mod.m; ++g)
          for (int a = 0; a < mod.nt; ++a)
            for (int b = 0; b < mod.nt; ++b) {
              int v = mod.act(g, a, b, x);
              if (!known[v]) {
                known[v] = true;
                tr.deriv[v] = {3, x, 0, g, a, b};
                tr.order.push_back(v);
                changed = true;
              }
            }
      }
    }
  };
  close();
  for (int u = 0; u < mod.n; ++u) {
    if (known[u]) continue;
    known[u] = true;
    tr.deriv[u] = {1, static_cast<int>(tr.gens.size())};
    tr.gens.push_back(u);
    tr.order.push_back(u);
    close();
  }
  return tr;
}

// additive-only generators with derivations (kind 0/1/2)
GenTrace additive_generators(int n, const std::function<int(int, int)>& plus) {
  GenTrace tr;
  tr.deriv.assign(n, {});
  std::vector<bool> known(n, false);
  known[0] = true;
  tr.deriv[0] = {0};
  tr.order.push_back(0);
  auto close = [&]() {
    bool changed = true;
    while (changed) {
      changed = false;
      for (int x = 0; x < n; ++x) {
        if (!known[x]) continue;
        for (int y = 0; y < n; ++y) {
          if (!known[y]) continue;
          int s = plus(x, y);
          if (!known[s]) {
            known[s] = true;
            tr.deriv[s] = {2, x, y};
            tr.order.push_back(s);
            changed = true;
          }
        }
      }
    }
  };
  close();
  for (int u = 0; u < n; ++u) {
    if (known[u]) continue;
    known[u] = true;
    tr.deriv[u] = {1, static_cast<int>(tr.gens.size())};
    tr.gens.push_back(u);
    tr.order.push_back(u);
    close();
  }
  return tr;
}

long long env_budget(const char* name, long long fallback) {
  const char* v = std::getenv(name);
  if (!v) return fallback;
  try {
    long long b = std::stoll(v);
    return b > 0 ? b : fallback;
  } catch (...) {
    return fallback;
  }
}

}  // namespace

long long default_budget() { return env_budget("TGS_BUDGET", 2000000); }

static long long default_tensor_cap() {
  return env_budget("TGS_BUDGET", 10000);
}

bool GammaModule::group_complete() const {
  for (int a = 0; a < n; ++a) {
    bool inv = false;
    for (int b = 0; b < n && !inv; ++b) inv = plus(a, b) == 0;
    if (!inv) return false;
  }
  return true;
}

std::vector<std::uint8_t> GammaModule::encode() const {
  std::vector<std::uint8_t> out;
  out.push_back(static_cast<std::uint8_t>(n));
  for (int v : add) out.push_back(static_cast<std::uint8_t>(v));
  for (int v : action) out.push_back(static_cast<std::uint8_t>(v));
  return out;
}

GammaModule regular_module(const GammaSemiring& t) {
  GammaModule mod;
  mod.n = t.n;
  mod.nt = t.n;
  mod.m = t.m;
  mod.add = t.add;
  mod.action = t.tern;
  return mod;
}

GammaModule zero_module(const GammaSemiring& t) {
  GammaModule mod;
  mod.n = 1;
  mod.nt = t.n;
  mod.m = t.m;
  mod.alloc();
  return mod;
}

GammaModule direct_sum(const GammaSemiring& t, const GammaModule& a,
                       const GammaModule& b) {
  GammaModule s;
  s.n = a.n * b.n;
  s.nt = t.n;
  s.m = t.m;
  s.alloc();
  auto idx = [&](int x, int y) { return x * b.n + y; };
  for (int x = 0; x < a.n; ++x)
    for (int y = 0; y < b.n; ++y)
      for (int x2 = 0; x2 < a.n; ++x2)
        for (int y2 = 0; y2 < b.n; ++y2)
          s.add[idx(x, y) * s.n + idx(x2, y2)] =
              idx(a.plus(x, x2), b.plus(y, y2));
  for (int g = 0; g < t.m; ++g)
    for (int p = 0; p < t.n; ++p)
      for (int q = 0; q < t.n; ++q)
        for (int x = 0; x < a.n; ++x)
          for (int y = 0; y < b.n; ++y)
            s.action[((static_cast<std::size_t>(g) * t.n + p) * t.n + q) *
                         s.n +
                     idx(x, y)] =
                idx(a.act(g, p, q, x), b.act(g, p, q, y));
  return s;
}

void validate_module_structure(const GammaSemiring& t, const GammaModule& mod) {
  if (mod.n < 1) throw StructuralError("module carrier must be >= 1");
  if (mod.nt != t.n || mod.m != t.m)
    throw StructuralError("module tables do not match the base semiring");
  if (mod.add.size() != static_cast<std::size_t>(mod.n) * mod.n)
    throw StructuralError("module add table has the wrong shape");
  if (mod.action.size() !=
      static_cast<std::size_t>(mod.m) * mod.nt * mod.nt * mod.n)
    throw StructuralError("module action table has the wrong shape");
  for (int v : mod.add)
    if (v < 0 || v >= mod.n)
      throw StructuralError("module add entry out of range");
  for (int v : mod.action)
    if (v < 0 || v >= mod.n)
      throw StructuralError("module action entry out of range");
}

ModuleReport check_module_axioms(const GammaSemiring& t,
                                 const GammaModule& mod) {
  validate_module_structure(t, mod);
  ModuleReport rep;
  {
    AxiomCheck c{"m-monoid", "pass", {}};
    for (int a = 0; a < mod.n; ++a) {
      if (mod.plus(0, a) != a)
        push_witness(c, {"m-monoid", {}, {0, a}, mod.plus(0, a), a});
      for (int b = 0; b < mod.n; ++b) {
        if (mod.plus(a, b) != mod.plus(b, a))
          push_witness(c,
                       {"m-monoid", {}, {a, b}, mod.plus(a, b), mod.plus(b, a)});
        for (int d = 0; d < mod.n; ++d)
          if (mod.plus(mod.plus(a, b), d) != mod.plus(a, mod.plus(b, d)))
            push_witness(c, {"m-monoid",
                             {},
                             {a, b, d},
                             mod.plus(mod.plus(a, b), d),
                             mod.plus(a, mod.plus(b, d))});
      }
    }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }
  {
    AxiomCheck c{"m-mixed-assoc", "pass", {}};
    for (int g1 = 0; g1 < t.m; ++g1)
      for (int g2 = 0; g2 < t.m; ++g2)
        for (int a = 0; a < t.n; ++a)
          for (int b = 0; b < t.n; ++b)
            for (int cc = 0; cc < t.n; ++cc)
              for (int d = 0; d < t.n; ++d)
                for (int x = 0; x < mod.n; ++x) {
                  int lhs = mod.act(g2, t.prod(g1, a, b, cc), d, x);
                  int rhs = mod.act(g2, a, t.prod(g1, b, cc, d), x);
                  if (lhs != rhs)
                    push_witness(c, {"m-mixed-assoc",
                                     {g1, g2},
                                     {a, b, cc, d, x},
                                     lhs,
                                     rhs});
                }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }
  {
    AxiomCheck c{"m-additivity", "pass", {}};
    for (int g = 0; g < t.m; ++g)
      for (int a = 0; a < t.n; ++a)
        for (int b = 0; b < t.n; ++b)
          for (int cc = 0; cc < t.n; ++cc)
            for (int x = 0; x < mod.n; ++x) {
              int lhs = mod.act(g, t.plus(a, b), cc, x);
              int rhs = mod.plus(mod.act(g, a, cc, x), mod.act(g, b, cc, x));
              if (lhs != rhs)
                push_witness(c, {"m-additivity", {g}, {a, b, cc, x}, lhs, rhs});
            }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }
  {
    AxiomCheck c{"m-additive-in-m", "pass", {}};
    for (int g = 0; g < t.m; ++g)
      for (int a = 0; a < t.n; ++a)
        for (int b = 0; b < t.n; ++b)
          for (int x = 0; x < mod.n; ++x)
            for (int y = 0; y < mod.n; ++y) {
              int lhs = mod.act(g, a, b, mod.plus(x, y));
              int rhs = mod.plus(mod.act(g, a, b, x), mod.act(g, a, b, y));
              if (lhs != rhs)
                push_witness(c,
                             {"m-additive-in-m", {g}, {a, b, x, y}, lhs, rhs});
            }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }
  {
    AxiomCheck c{"m-zero", "pass", {}};
    for (int g = 0; g < t.m; ++g)
      for (int b = 0; b < t.n; ++b)
        for (int x = 0; x < mod.n; ++x) {
          int v = mod.act(g, 0, b, x);
          if (v != 0) push_witness(c, {"m-zero", {g}, {0, b, x}, v, 0});
        }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }
  return rep;
}

bool is_module_map(const GammaSemiring& t, const GammaModule& src,
                   const GammaModule& dst, const std::vector<int>& table) {
  if (static_cast<int>(table.size()) != src.n) return false;
  if (table[0] != 0) return false;
  for (int x = 0; x < src.n; ++x)
    for (int y = 0; y < src.n; ++y)
      if (table[src.plus(x, y)] != dst.plus(table[x], table[y])) return false;
  for (int g = 0; g < t.m; ++g)
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        for (int x = 0; x < src.n; ++x)
          if (table[src.act(g, a, b, x)] != dst.act(g, a, b, table[x]))
            return false;
  return true;
}

std::vector<ModuleMap> hom_set(const GammaSemiring& t, const GammaModule& src,
                               const GammaModule& dst, long long budget) {
  GenTrace tr = module_generators(t, src);
  const int k = static_cast<int>(tr.gens.size());
  long long total = 1;
  for (int i = 0; i < k; ++i) {
    total *= dst.n;
    if (total > budget)
      throw BudgetError("hom enumeration needs " + std::to_string(dst.n) +
                        "^" + std::to_string(k) + " assignments, over budget " +
                        std::to_string(budget));
  }
  std::vector<ModuleMap> out;
  std::vector<int> img(k), table(src.n);
  for (long long it = 0; it < total; ++it) {
    long long v = it;
    for (int i = k - 1; i >= 0; --i) {
      img[i] = static_cast<int>(v % dst.n);
      v /= dst.n;
    }
    bool ok = true;
    for (int el : tr.order) {
      const Derivation& d = tr.deriv[el];
      switch (d.kind) {
        case 0: table[el] = 0; break;
        case 1: table[el] = img[d.x]; break;
        case 2: table[el] = dst.plus(table[d.x], table[d.y]); break;
        case 3: table[el] = dst.act(d.g, d.a, d.b, table[d.x]); break;
        default: ok = false;
      }
      if (!ok) break;
    }
    if (ok && is_module_map(t, src, dst, table)) out.push_back({table});
  }
  std::sort(out.begin(), out.end());
  return out;
}

HomModule hom_module(const GammaSemiring& t, const GammaModule& src,
                     const GammaModule& dst, long long budget) {
  HomModule h;
  h.maps = hom_set(t, src, dst, budget);
  const int n = static_cast<int>(h.maps.size());
  std::map<std::vector<int>, int> index;
  for (int i = 0; i < n; ++i) index[h.maps[i].table] = i;
  h.module.n = n;
  h.module.nt = t.n;
  h.module.m = t.m;
  h.module.alloc();
  h.valid = n > 0;
  std::vector<int> tmp(src.n);
  for (int i = 0; i < n && h.valid; ++i)
    for (int j = 0; j < n && h.valid; ++j) {
      for (int x = 0; x < src.n; ++x)
        tmp[x] = dst.plus(h.maps[i].table[x], h.maps[j].table[x]);
      auto it = index.find(tmp);
      if (it == index.end())
        h.valid = false;
      else
        h.module.add[i * n + j] = it->second;
    }
  for (int g = 0; g < t.m && h.valid; ++g)
    for (int a = 0; a < t.n && h.valid; ++a)
      for (int b = 0; b < t.n && h.valid; ++b)
        for (int i = 0; i < n && h.valid; ++i) {
          for (int x = 0; x < src.n; ++x)
            tmp[x] = dst.act(g, a, b, h.maps[i].table[x]);
          auto it = index.find(tmp);
          if (it == index.end())
            h.valid = false;
          else
            h.module.action[((static_cast<std::size_t>(g) * t.n + a) * t.n +
                             b) *
                                n +
                            i] = it->second;
        }
  if (h.valid) h.valid = check_module_axioms(t, h.module).passed();
  return h;
}

// ---------------------------------------------------------------------------
// tensor products
// ---------------------------------------------------------------------------

namespace {

using Mat = std::vector<std::vector<long long>>;

struct Snf {
  std::vector<long long> diag;  // length = generator count
  Mat v;                        // x = V y
  Mat vinv;                     // y = Vinv x
};

void check_entry(long long v) {
  if (v > (1LL << 56) || v < -(1LL << 56))
    throw StructuralError("integer overflow in normal form computation");
}

Snf smith(Mat a, int g) {
  const int rows = static_cast<int>(a.size());
  Mat v(g, std::vector<long long>(g, 0)), vinv(g, std::vector<long long>(g, 0));
  for (int i = 0; i < g; ++i) v[i][i] = vinv[i][i] = 1;
  auto col_sub = [&](int j, int tcol, long long q) {
    // col_j -= q * col_t on A and V; row_t += q * row_j on Vinv
    for (auto& row : a) {
      row[j] -= q * row[tcol];
      check_entry(row[j]);
    }
    for (int i = 0; i < g; ++i) {
      v[i][j] -= q * v[i][tcol];
      check_entry(v[i][j]);
    }
    for (int i = 0; i < g; ++i) {
      vinv[tcol][i] += q * vinv[j][i];
      check_entry(vinv[tcol][i]);
    }
  };
  auto col_swap = [&](int j, int tcol) {
    for (auto& row : a) std::swap(row[j], row[tcol]);
    for (int i = 0; i < g; ++i) std::swap(v[i][j], v[i][tcol]);
    std::swap(vinv[j], vinv[tcol]);
  };
  auto col_neg = [&](int j) {
    for (auto& row : a) row[j] = -row[j];
    for (int i = 0; i < g; ++i) v[i][j] = -v[i][j];
    for (int i = 0; i < g; ++i) vinv[j][i] = -vinv[j][i];
  };

  int t = 0;
  const int lim = std::min(rows, g);
  for (; t < lim; ++t) {
    for (;;) {
      int pi = -1, pj = -1;
      long long best = 0;
      for (int i = t; i < rows; ++i)
        for (int j = t; j < g; ++j)
          if (a[i][j] != 0) {
            long long m = a[i][j] < 0 ? -a[i][j] : a[i][j];
            if (pi < 0 || m < best) {
              best = m;
              pi = i;
              pj = j;
            }
          }
      if (pi < 0) goto done;
      std::swap(a[t], a[pi]);
      if (pj != t) col_swap(pj, t);
      bool clean = true;
      for (int i = t + 1; i < rows; ++i)
        if (a[i][t] != 0) {
          long long q = a[i][t] / a[t][t];
          for (int j = 0; j < g; ++j) {
            a[i][j] -= q * a[t][j];
            check_entry(a[i][j]);
          }
          if (a[i][t] != 0) clean = false;
        }
      for (int j = t + 1; j < g; ++j)
        if (a[t][j] != 0) {
          long long q = a[t][j] / a[t][t];
          col_sub(j, t, q);
          if (a[t][j] != 0) clean = false;
        }
      if (clean) break;
    }
    if (a[t][t] < 0) col_neg(t);
  }
done:
  Snf out;
  out.diag.assign(g, 0);
  for (int i = 0; i < std::min(rows, g); ++i)
    out.diag[i] = i < static_cast<int>(a.size()) ? (a[i][i] < 0 ? -a[i][i] : a[i][i]) : 0;
  out.v = std::move(v);
  out.vinv = std::move(vinv);
  return out;
}

int additive_order(const GammaModule& mod, int x) {
  int k = 1, y = x;
  while (y != 0) {
    y = mod.plus(y, x);
    ++k;
    if (k > mod.n + 1)
      throw PreconditionError("element has no finite additive order to 0");
  }
  return k;
}

TensorResult tensor_group(const GammaSemiring& t, const GammaModule& A,
                          const GammaModule& B, long long cap) {
  const int g = A.n * B.n;
  auto gen = [&](int x, int y) { return x * B.n + y; };
  std::set<std::vector<long long>> rowset;
  auto add_row = [&](const std::vector<long long>& r) {
    for (long long v : r)
      if (v != 0) {
        rowset.insert(r);
        return;
      }
  };
  std::vector<long long> r(g, 0);
  for (int y = 0; y < B.n; ++y) {  // 0 (x) y = 0
    std::fill(r.begin(), r.end(), 0);
    r[gen(0, y)] = 1;
    add_row(r);
  }
  for (int x = 0; x < A.n; ++x) {  // x (x) 0 = 0
    std::fill(r.begin(), r.end(), 0);
    r[gen(x, 0)] = 1;
    add_row(r);
  }
  for (int x = 0; x < A.n; ++x)
    for (int x2 = x; x2 < A.n; ++x2)
      for (int y = 0; y < B.n; ++y) {
        std::fill(r.begin(), r.end(), 0);
        r[gen(A.plus(x, x2), y)] += 1;
        r[gen(x, y)] -= 1;
        r[gen(x2, y)] -= 1;
        add_row(r);
      }
  for (int y = 0; y < B.n; ++y)
    for (int y2 = y; y2 < B.n; ++y2)
      for (int x = 0; x < A.n; ++x) {
        std::fill(r.begin(), r.end(), 0);
        r[gen(x, B.plus(y, y2))] += 1;
        r[gen(x, y)] -= 1;
        r[gen(x, y2)] -= 1;
        add_row(r);
      }
  for (int gg = 0; gg < t.m; ++gg)
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        for (int x = 0; x < A.n; ++x)
          for (int y = 0; y < B.n; ++y) {
            std::fill(r.begin(), r.end(), 0);
            r[gen(A.act(gg, a, b, x), y)] += 1;
            r[gen(x, B.act(gg, a, b, y))] -= 1;
            add_row(r);
          }

  Mat rows(rowset.begin(), rowset.end());
  if (rows.empty()) rows.push_back(std::vector<long long>(g, 0));
  Snf snf = smith(rows, g);
  for (long long d : snf.diag)
    if (d == 0)
      throw InvalidQuotientError("tensor quotient has a free part",
                                 ojson::object());

  std::vector<int> moduli;            // the d_i > 1 positions
  std::vector<int> positions;
  long long total = 1;
  for (int i = 0; i < g; ++i)
    if (snf.diag[i] > 1) {
      moduli.push_back(static_cast<int>(snf.diag[i]));
      positions.push_back(i);
      total *= snf.diag[i];
      if (total > cap)
        throw BudgetError("tensor carrier exceeds the element cap " +
                          std::to_string(cap));
    }
  const int nq = static_cast<int>(total);
  const int nd = static_cast<int>(moduli.size());

  auto encode = [&](const std::vector<long long>& coords) {
    long long idx = 0;
    for (int i = 0; i < nd; ++i) idx = idx * moduli[i] + coords[i];
    return static_cast<int>(idx);
  };
  auto decode = [&](int idx) {
    std::vector<long long> coords(nd, 0);
    for (int i = nd - 1; i >= 0; --i) {
      coords[i] = idx % moduli[i];
      idx /= moduli[i];
    }
    return coords;
  };
  // row-vector convention: with D = U A V the class coordinates of x are
  // x V taken mod the diagonal, and lifts go back through V^{-1}
  auto class_of_vec = [&](const std::vector<long long>& x) {
    std::vector<long long> coords(nd, 0);
    for (int i = 0; i < nd; ++i) {
      long long acc = 0;
      for (int j = 0; j < g; ++j) acc += x[j] * snf.v[j][positions[i]];
      long long mod = moduli[i];
      acc %= mod;
      if (acc < 0) acc += mod;
      coords[i] = acc;
    }
    return encode(coords);
  };

  TensorResult res;
  res.mode = "group-complete";
  res.module.n = nq;
  res.module.nt = t.n;
  res.module.m = t.m;
  res.module.alloc();
  for (int i = 0; i < nq; ++i)
    for (int j = 0; j < nq; ++j) {
      auto ci = decode(i), cj = decode(j);
      std::vector<long long> s(nd);
      for (int k2 = 0; k2 < nd; ++k2)
        s[k2] = (ci[k2] + cj[k2]) % moduli[k2];
      res.module.add[i * nq + j] = encode(s);
    }

  res.gen_class.resize(g);
  std::vector<long long> unit(g, 0);
  for (int k2 = 0; k2 < g; ++k2) {
    std::fill(unit.begin(), unit.end(), 0);
    unit[k2] = 1;
    res.gen_class[k2] = class_of_vec(unit);
  }

  // canonical nonnegative representatives: lift quotient coordinates back to
  // generator space, then reduce each coefficient by the generator's
  // additive order (those multiples lie in the relation lattice)
  std::vector<int> gen_ord(g);
  for (int x = 0; x < A.n; ++x)
    for (int y = 0; y < B.n; ++y)
      gen_ord[gen(x, y)] = additive_order(A, x);
  res.class_rep.resize(nq);
  for (int idx = 0; idx < nq; ++idx) {
    auto coords = decode(idx);
    std::vector<long long> yfull(g, 0);
    for (int i = 0; i < nd; ++i) yfull[positions[i]] = coords[i];
    std::vector<int> rep(g, 0);
    std::vector<long long> x(g, 0);
    for (int k = 0; k < g; ++k) {
      long long acc = 0;
      for (int i = 0; i < g; ++i) acc += yfull[i] * snf.vinv[i][k];
      long long o = gen_ord[k];
      acc %= o;
      if (acc < 0) acc += o;
      x[k] = acc;
      rep[k] = static_cast<int>(acc);
    }
    if (class_of_vec(x) != idx)
      throw InvalidQuotientError("tensor representative lift failed",
                                 ojson::object());
    res.class_rep[idx] = rep;
  }

  for (int gg = 0; gg < t.m; ++gg)
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        for (int idx = 0; idx < nq; ++idx) {
          std::vector<long long> x(g, 0);
          for (int k2 = 0; k2 < g; ++k2) {
            if (res.class_rep[idx][k2] == 0) continue;
            int xa = k2 / B.n, yb = k2 % B.n;
            x[gen(A.act(gg, a, b, xa), yb)] += res.class_rep[idx][k2];
          }
          res.module
              .action[((static_cast<std::size_t>(gg) * t.n + a) * t.n + b) *
                          nq +
                      idx] = class_of_vec(x);
        }

  res.balance_ok = true;
  for (int gg = 0; gg < t.m && res.balance_ok; ++gg)
    for (int a = 0; a < t.n && res.balance_ok; ++a)
      for (int b = 0; b < t.n && res.balance_ok; ++b)
        for (int x = 0; x < A.n && res.balance_ok; ++x)
          for (int y = 0; y < B.n; ++y)
            if (res.gen_class[gen(A.act(gg, a, b, x), y)] !=
                res.gen_class[gen(x, B.act(gg, a, b, y))]) {
              res.balance_ok = false;
              break;
            }
  res.bilinear_ok = true;
  for (int x = 0; x < A.n && res.bilinear_ok; ++x)
    for (int x2 = 0; x2 < A.n && res.bilinear_ok; ++x2)
      for (int y = 0; y < B.n; ++y)
        if (res.gen_class[gen(A.plus(x, x2), y)] !=
            res.module.plus(res.gen_class[gen(x, y)],
                            res.gen_class[gen(x2, y)])) {
          res.bilinear_ok = false;
          break;
        }
  for (int y = 0; y < B.n && res.bilinear_ok; ++y)
    for (int y2 = 0; y2 < B.n && res.bilinear_ok; ++y2)
      for (int x = 0; x < A.n; ++x)
        if (res.gen_class[gen(x, B.plus(y, y2))] !=
            res.module.plus(res.gen_class[gen(x, y)],
                            res.gen_class[gen(x, y2)])) {
          res.bilinear_ok = false;
          break;
        }
  res.complete = true;
  return res;
}

// congruence closure of the free commutative monoid on the generators,
// evaluated inside a degree box; accepted only when two box sizes agree
struct BoxResult {
  std::vector<std::vector<int>> reps;  // class min-reps, sorted
  std::vector<int> gen_class;
  std::vector<int> add;  // class tables
  std::vector<int> action;  // m*nt*nt*classes
  bool saturated = false;
};

int vec_deg(const std::vector<int>& v) {
  int d = 0;
  for (int x : v) d += x;
  return d;
}

bool deg_lex_less(const std::vector<int>& a, const std::vector<int>& b) {
  int da = vec_deg(a), db = vec_deg(b);
  if (da != db) return da < db;
  return a < b;
}

std::optional<BoxResult> box_closure(
    const GammaSemiring& t, const GammaModule& A, const GammaModule& B,
    const std::vector<std::pair<std::vector<int>, std::vector<int>>>& rels,
    int D, long long cap) {
  const int g = A.n * B.n;
  if (g > 15 || D > 15) return std::nullopt;  // 4-bit packing limit
  // enumerate all vectors of total degree <= D, keyed by packed nibbles
  std::vector<std::vector<int>> vecs;
  std::map<std::uint64_t, int> id;
  auto key_of = [&](const std::vector<int>& v) {
    std::uint64_t k = 0;
    for (int i = g - 1; i >= 0; --i) k = (k << 4) | static_cast<unsigned>(v[i]);
    return k;
  };
  std::vector<int> cur(g, 0);
  std::function<void(int, int)> rec = [&](int pos, int left) {
    if (pos == g) {
      id[key_of(cur)] = static_cast<int>(vecs.size());
      vecs.push_back(cur);
      return;
    }
    for (int c = 0; c <= left; ++c) {
      cur[pos] = c;
      rec(pos + 1, left - c);
    }
    cur[pos] = 0;
  };
  rec(0, D);
  if (vecs.size() > 2000000) return std::nullopt;

  std::vector<int> root(vecs.size());
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  // the rewrite edges are fixed, so one union pass closes the relation
  std::vector<int> w2(g);
  for (std::size_t w = 0; w < vecs.size(); ++w)
    for (const auto& [p, q] : rels) {
      bool fits = true;
      int deg2 = 0;
      for (int k = 0; k < g && fits; ++k) fits = vecs[w][k] >= p[k];
      if (!fits) continue;
      for (int k = 0; k < g; ++k) {
        w2[k] = vecs[w][k] - p[k] + q[k];
        deg2 += w2[k];
      }
      if (deg2 > D) continue;
      auto it = id.find(key_of(w2));
      if (it == id.end()) continue;
      int a = find(static_cast<int>(w)), b = find(it->second);
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }

  std::map<int, std::vector<int>> min_rep;
  for (std::size_t w = 0; w < vecs.size(); ++w) {
    int r = find(static_cast<int>(w));
    auto it = min_rep.find(r);
    if (it == min_rep.end() || deg_lex_less(vecs[w], it->second))
      min_rep[r] = vecs[w];
  }
  std::vector<std::vector<int>> reps;
  for (auto& [root_id, rep] : min_rep) reps.push_back(rep);
  std::sort(reps.begin(), reps.end(), deg_lex_less);
  if (static_cast<long long>(reps.size()) > cap) return std::nullopt;

  int d_max = 0;
  for (const auto& rep : reps) d_max = std::max(d_max, vec_deg(rep));
  BoxResult res;
  if (2 * d_max + 1 > D) return res;  // saturated stays false: box too small

  std::map<std::vector<int>, int> class_of_rep;
  for (std::size_t i = 0; i < reps.size(); ++i) class_of_rep[reps[i]] = static_cast<int>(i);
  auto cls_of_vec = [&](const std::vector<int>& vvec) {
    auto it = id.find(key_of(vvec));
    if (it == id.end()) return -1;
    return class_of_rep.at(min_rep.at(find(it->second)));
  };

  const int nc = static_cast<int>(reps.size());
  res.reps = reps;
  res.add.assign(static_cast<std::size_t>(nc) * nc, 0);
  std::vector<int> tmp(g);
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      for (int k = 0; k < g; ++k) tmp[k] = reps[i][k] + reps[j][k];
      int c = cls_of_vec(tmp);
      if (c < 0) return res;
      res.add[i * nc + j] = c;
    }
  res.action.assign(static_cast<std::size_t>(t.m) * t.n * t.n * nc, 0);
  for (int gg = 0; gg < t.m; ++gg)
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        for (int i = 0; i < nc; ++i) {
          std::fill(tmp.begin(), tmp.end(), 0);
          for (int k = 0; k < g; ++k) {
            if (reps[i][k] == 0) continue;
            int xa = k / B.n, yb = k % B.n;
            tmp[A.act(gg, a, b, xa) * B.n + yb] += reps[i][k];
          }
          int c = cls_of_vec(tmp);
          if (c < 0) return res;
          res.action[((static_cast<std::size_t>(gg) * t.n + a) * t.n + b) *
                         nc +
                     i] = c;
        }
  res.gen_class.resize(g);
  std::vector<int> unit(g, 0);
  for (int k = 0; k < g; ++k) {
    std::fill(unit.begin(), unit.end(), 0);
    unit[k] = 1;
    res.gen_class[k] = cls_of_vec(unit);
  }
  res.saturated = true;
  return res;
}

TensorResult tensor_monoid(const GammaSemiring& t, const GammaModule& A,
                           const GammaModule& B, long long cap) {
  const int g = A.n * B.n;
  auto gen = [&](int x, int y) { return x * B.n + y; };
  std::vector<std::pair<std::vector<int>, std::vector<int>>> rels;
  std::set<std::pair<std::vector<int>, std::vector<int>>> seen;
  auto add_rel = [&](std::vector<int> p, std::vector<int> q) {
    if (p == q) return;
    if (deg_lex_less(p, q)) std::swap(p, q);
    if (seen.insert({p, q}).second) rels.push_back({p, q});
  };
  auto unit_vec = [&](int k) {
    std::vector<int> v(g, 0);
    v[k] = 1;
    return v;
  };
  std::vector<int> zero_vec(g, 0);
  for (int y = 0; y < B.n; ++y) add_rel(unit_vec(gen(0, y)), zero_vec);
  for (int x = 0; x < A.n; ++x) add_rel(unit_vec(gen(x, 0)), zero_vec);
  for (int x = 0; x < A.n; ++x)
    for (int x2 = x; x2 < A.n; ++x2)
      for (int y = 0; y < B.n; ++y) {
        std::vector<int> rhs(g, 0);
        rhs[gen(x, y)] += 1;
        rhs[gen(x2, y)] += 1;
        add_rel(unit_vec(gen(A.plus(x, x2), y)), rhs);
      }
  for (int y = 0; y < B.n; ++y)
    for (int y2 = y; y2 < B.n; ++y2)
      for (int x = 0; x < A.n; ++x) {
        std::vector<int> rhs(g, 0);
        rhs[gen(x, y)] += 1;
        rhs[gen(x, y2)] += 1;
        add_rel(unit_vec(gen(x, B.plus(y, y2))), rhs);
      }
  for (int gg = 0; gg < t.m; ++gg)
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        for (int x = 0; x < A.n; ++x)
          for (int y = 0; y < B.n; ++y)
            add_rel(unit_vec(gen(A.act(gg, a, b, x), y)),
                    unit_vec(gen(x, B.act(gg, a, b, y))));

  TensorResult res;
  res.mode = "monoid";
  for (int D = 4; D <= 13; D += 3) {
    auto r1 = box_closure(t, A, B, rels, D, cap);
    if (!r1 || !r1->saturated) continue;
    auto r2 = box_closure(t, A, B, rels, D + 2, cap);
    if (!r2 || !r2->saturated) continue;
    if (r1->reps == r2->reps && r1->add == r2->add &&
        r1->action == r2->action && r1->gen_class == r2->gen_class) {
      const int nc = static_cast<int>(r1->reps.size());
      res.module.n = nc;
      res.module.nt = t.n;
      res.module.m = t.m;
      res.module.add = r1->add;
      res.module.action = r1->action;
      res.gen_class = r1->gen_class;
      res.class_rep = r1->reps;
      res.complete = true;
      res.balance_ok = true;
      for (int gg = 0; gg < t.m && res.balance_ok; ++gg)
        for (int a = 0; a < t.n && res.balance_ok; ++a)
          for (int b = 0; b < t.n && res.balance_ok; ++b)
            for (int x = 0; x < A.n && res.balance_ok; ++x)
              for (int y = 0; y < B.n; ++y)
                if (res.gen_class[gen(A.act(gg, a, b, x), y)] !=
                    res.gen_class[gen(x, B.act(gg, a, b, y))]) {
                  res.balance_ok = false;
                  break;
                }
      res.bilinear_ok = true;
      for (int x = 0; x < A.n && res.bilinear_ok; ++x)
        for (int x2 = 0; x2 < A.n && res.bilinear_ok; ++x2)
          for (int y = 0; y < B.n; ++y)
            if (res.gen_class[gen(A.plus(x, x2), y)] !=
                res.module.plus(res.gen_class[gen(x, y)],
                                res.gen_class[gen(x2, y)])) {
              res.bilinear_ok = false;
              break;
            }
      return res;
    }
  }
  res.complete = false;  // explicit partial status, never silent truncation
  return res;
}

}  // namespace

TensorResult tensor(const GammaSemiring& t, const GammaModule& a,
                    const GammaModule& b, long long cap) {
  validate_module_structure(t, a);
  validate_module_structure(t, b);
  if (cap == 10000) cap = default_tensor_cap();
  if (a.group_complete() && b.group_complete()) return tensor_group(t, a, b, cap);
  return tensor_monoid(t, a, b, cap);
}

AdjunctionReport check_adjunction(const GammaSemiring& t, const GammaModule& a,
                                  const GammaModule& b, const GammaModule& c,
                                  long long budget) {
  TensorResult ab = tensor(t, a, b);
  HomModule hbc = hom_module(t, b, c, budget);
  return check_adjunction_with(t, a, b, c, ab, hbc, budget);
}

AdjunctionReport check_adjunction_with(const GammaSemiring& t,
                                       const GammaModule& a,
                                       const GammaModule& b,
                                       const GammaModule& c,
                                       const TensorResult& ab,
                                       const HomModule& hbc,
                                       long long budget) {
  AdjunctionReport rep;
  if (!ab.complete) {
    rep.note = "tensor did not materialize within its cap";
    return rep;
  }
  rep.hom_module_valid = hbc.valid;
  if (hbc.maps.empty()) {
    // any F in Hom(M (x) N, P) restricts to maps m (x) - in Hom(N, P), so
    // both sides are empty together and the bijection holds vacuously
    std::vector<ModuleMap> t1 = hom_set(t, ab.module, c, budget);
    rep.hom_from_tensor = static_cast<long long>(t1.size());
    rep.hom_curried = 0;
    rep.curry_injective = true;
    rep.inverse_total = true;
    rep.bijection = t1.empty();
    rep.note = "both hom sets empty";
    return rep;
  }
  if (!hbc.valid) {
    rep.note = "pointwise structure on Hom(N,P) is not a module here";
    return rep;
  }
  std::vector<ModuleMap> t1 = hom_set(t, ab.module, c, budget);
  std::vector<ModuleMap> t2 = hom_set(t, a, hbc.module, budget);
  rep.hom_from_tensor = static_cast<long long>(t1.size());
  rep.hom_curried = static_cast<long long>(t2.size());

  std::map<std::vector<int>, int> hbc_index;
  for (std::size_t i = 0; i < hbc.maps.size(); ++i)
    hbc_index[hbc.maps[i].table] = static_cast<int>(i);
  std::map<std::vector<int>, int> t2_index;
  for (std::size_t i = 0; i < t2.size(); ++i)
    t2_index[t2[i].table] = static_cast<int>(i);

  // curry both ways and demand a perfect matching
  std::set<std::vector<int>> curried_seen;
  rep.curry_injective = true;
  std::vector<int> hit(t2.size(), 0);
  for (const auto& f : t1) {
    std::vector<int> g_table(a.n, -1);
    bool ok = true;
    for (int x = 0; x < a.n && ok; ++x) {
      std::vector<int> leg(b.n);
      for (int y = 0; y < b.n; ++y)
        leg[y] = f.table[ab.gen_class[x * b.n + y]];
      auto it = hbc_index.find(leg);
      if (it == hbc_index.end())
        ok = false;
      else
        g_table[x] = it->second;
    }
    if (!ok) {
      rep.note = "curried leg is not a homomorphism";
      return rep;
    }
    auto it2 = t2_index.find(g_table);
    if (it2 == t2_index.end()) {
      rep.note = "curried map is not in Hom(M, Hom(N,P))";
      return rep;
    }
    ++hit[it2->second];
    if (!curried_seen.insert(g_table).second) rep.curry_injective = false;
  }

  // inverse: rebuild F from G by evaluating on representatives
  rep.inverse_total = true;
  std::map<std::vector<int>, int> t1_index;
  for (std::size_t i = 0; i < t1.size(); ++i)
    t1_index[t1[i].table] = static_cast<int>(i);
  for (const auto& gmap : t2) {
    std::vector<int> f_table(ab.module.n, 0);
    for (int cls = 0; cls < ab.module.n; ++cls) {
      int acc = 0;
      for (int k = 0; k < a.n * b.n; ++k) {
        int count = ab.class_rep[cls][k];
        if (count == 0) continue;
        int x = k / b.n, y = k % b.n;
        int val = hbc.maps[gmap.table[x]].table[y];
        for (int rpt = 0; rpt < count; ++rpt) acc = c.plus(acc, val);
      }
      f_table[cls] = acc;
    }
    if (!t1_index.count(f_table)) {
      rep.inverse_total = false;
      break;
    }
  }
  bool all_hit = true;
  for (int h : hit) all_hit &= h == 1;
  rep.bijection = rep.curry_injective && rep.inverse_total && all_hit &&
                  rep.hom_from_tensor == rep.hom_curried;
  return rep;
}

AnnihilatorResult annihilator(const GammaSemiring& t, const GammaModule& mod,
                              Absorption mode) {
  AnnihilatorResult res;
  for (int x = 0; x < t.n; ++x) {
    bool kills = true;
    for (int g = 0; g < t.m && kills; ++g)
      for (int b = 0; b < t.n && kills; ++b)
        for (int m2 = 0; m2 < mod.n && kills; ++m2)
          kills = mod.act(g, x, b, m2) == 0;
    if (kills) res.ann |= mask_bit(x);
  }
  res.ideal_in_mode = is_ideal(t, res.ann, mode, &res.violation);
  return res;
}

SchurReport schur_map(const GammaSemiring& t, const GammaModule& mod,
                      Absorption mode) {
  auto e_opt = effective_identity(t);
  if (!e_opt)
    throw PreconditionError("Schur map requires an identity idempotent");
  int e = *e_opt;
  SchurReport rep;
  rep.endo.resize(t.n);
  for (int x = 0; x < t.n; ++x) {
    rep.endo[x].resize(mod.n);
    for (int m2 = 0; m2 < mod.n; ++m2)
      rep.endo[x][m2] = mod.act(t.gamma0, x, e, m2);
  }
  rep.kernel.class_of.resize(t.n);
  for (int x = 0; x < t.n; ++x) {
    int r = x;
    for (int y = 0; y < x; ++y)
      if (rep.endo[y] == rep.endo[x]) {
        r = rep.kernel.class_of[y];
        break;
      }
    rep.kernel.class_of[x] = r;
  }
  rep.ann = annihilator(t, mod, mode).ann;
  rep.bourne_of_ann = bourne_congruence(t, rep.ann);
  rep.kernel_matches_bourne =
      rep.kernel.class_of == rep.bourne_of_ann.class_of;
  rep.faithful = rep.kernel.class_count() == t.n;
  return rep;
}

namespace {

GammaModule free_module(const GammaSemiring& t, int k) {
  if (k == 0) {
    GammaModule z;
    z.n = 1;
    z.nt = t.n;
    z.m = t.m;
    z.alloc();
    return z;
  }
  long long size = 1;
  for (int i = 0; i < k; ++i) {
    size *= t.n;
    if (size > 50000)
      throw BudgetError("free module of rank " + std::to_string(k) +
                        " is too large to materialize");
  }
  GammaModule f;
  f.n = static_cast<int>(size);
  f.nt = t.n;
  f.m = t.m;
  f.alloc();
  auto digit = [&](int idx, int pos) {
    for (int i = k - 1; i > pos; --i) idx /= t.n;
    return idx % t.n;
  };
  auto compose = [&](const std::vector<int>& tuple) {
    int idx = 0;
    for (int i = 0; i < k; ++i) idx = idx * t.n + tuple[i];
    return idx;
  };
  std::vector<int> tuple(k);
  for (int i = 0; i < f.n; ++i)
    for (int j = 0; j < f.n; ++j) {
      for (int p = 0; p < k; ++p)
        tuple[p] = t.plus(digit(i, p), digit(j, p));
      f.add[i * f.n + j] = compose(tuple);
    }
  for (int g = 0; g < t.m; ++g)
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        for (int i = 0; i < f.n; ++i) {
          for (int p = 0; p < k; ++p)
            tuple[p] = t.prod(g, a, b, digit(i, p));
          f.action[((static_cast<std::size_t>(g) * t.n + a) * t.n + b) * f.n +
                   i] = compose(tuple);
        }
  return f;
}

// additive closure of the single-parameter orbits {x . g : x in T}
Mask orbit_span(const GammaSemiring& t, const GammaModule& mod,
                const std::vector<int>& gens, int e) {
  Mask span = mask_bit(0);
  for (int g : gens)
    for (int x = 0; x < t.n; ++x)
      span |= mask_bit(mod.act(t.gamma0, x, e, g));
  for (;;) {
    Mask next = span;
    for (int x2 = 0; x2 < mod.n; ++x2) {
      if (!mask_has(span, x2)) continue;
      for (int y = 0; y < mod.n; ++y)
        if (mask_has(span, y)) next |= mask_bit(mod.plus(x2, y));
    }
    if (next == span) return span;
    span = next;
  }
}

}  // namespace

ChainData presentation(const GammaSemiring& t, const GammaModule& mod,
                       long long budget) {
  (void)budget;
  if (!t.group_complete() || !mod.group_complete())
    throw PreconditionError(
        "presentations are defined only in group-complete mode (additive "
        "monoids must be abelian groups)");
  auto e_opt = effective_identity(t);
  if (!e_opt)
    throw PreconditionError("presentation requires an identity idempotent");
  int e = *e_opt;
  for (int m2 = 0; m2 < mod.n; ++m2)
    if (mod.act(t.gamma0, e, e, m2) != m2)
      throw PreconditionError(
          "module is not unital ({e,e,m} != m); no free cover exists");

  ChainData ch;
  for (;;) {
    Mask span = orbit_span(t, mod, ch.generators, e);
    if (span == full_mask(mod.n)) break;
    for (int m2 = 0; m2 < mod.n; ++m2)
      if (!mask_has(span, m2)) {
        ch.generators.push_back(m2);
        break;
      }
  }
  const int k = static_cast<int>(ch.generators.size());
  ch.f0 = free_module(t, k);
  ch.h.resize(ch.f0.n);
  for (int i = 0; i < ch.f0.n; ++i) {
    int acc = 0, idx = i;
    std::vector<int> tuple(k);
    for (int p = k - 1; p >= 0; --p) {
      tuple[p] = idx % t.n;
      idx /= t.n;
    }
    for (int p = 0; p < k; ++p)
      acc = mod.plus(acc, mod.act(t.gamma0, tuple[p], e, ch.generators[p]));
    ch.h[i] = acc;
  }
  if (!is_module_map(t, ch.f0, mod, ch.h)) {
    ojson d;
    d["stage"] = "presentation";
    d["map"] = "cover";
    throw InvalidQuotientError(
        "generator cover is not a homomorphism on this module", d);
  }
  std::vector<bool> hitv(mod.n, false);
  for (int v : ch.h) hitv[v] = true;
  for (bool v : hitv)
    if (!v)
      throw InvalidQuotientError("generator cover is not surjective",
                                 ojson::object());

  Mask ker = 0;
  for (int i = 0; i < ch.f0.n; ++i)
    if (ch.h[i] == 0) ker |= mask_bit(i);
  if (ch.f0.n > kMaxCarrier)
    throw BudgetError("free cover too large for kernel bookkeeping");
  for (;;) {
    Mask span = orbit_span(t, ch.f0, ch.kernel_generators, e);
    if ((ker & ~span) == 0) break;
    for (int i = 0; i < ch.f0.n; ++i)
      if (mask_has(ker, i) && !mask_has(span, i)) {
        ch.kernel_generators.push_back(i);
        break;
      }
  }
  const int l = static_cast<int>(ch.kernel_generators.size());
  ch.f1 = free_module(t, l);
  ch.d.resize(ch.f1.n);
  for (int i = 0; i < ch.f1.n; ++i) {
    int acc = 0, idx = i;
    std::vector<int> tuple(l);
    for (int p = l - 1; p >= 0; --p) {
      tuple[p] = idx % t.n;
      idx /= t.n;
    }
    for (int p = 0; p < l; ++p)
      acc = ch.f0.plus(
          acc, ch.f0.act(t.gamma0, tuple[p], e, ch.kernel_generators[p]));
    ch.d[i] = acc;
  }
  if (!is_module_map(t, ch.f1, ch.f0, ch.d)) {
    ojson d;
    d["stage"] = "presentation";
    d["map"] = "relations";
    throw InvalidQuotientError(
        "relation map is not a homomorphism on this module", d);
  }
  Mask image = 0;
  for (int v : ch.d) image |= mask_bit(v);
  ch.exact_at_f0 = image == ker;
  return ch;
}

std::vector<long long> abelian_invariants(
    int n, const std::function<int(int, int)>& add) {
  if (n <= 1) return {};
  int zero = -1;
  for (int z = 0; z < n && zero < 0; ++z) {
    bool id = true;
    for (int x = 0; x < n && id; ++x) id = add(z, x) == x;
    if (id) zero = z;
  }
  if (zero < 0) throw PreconditionError("structure has no additive identity");
  auto order = [&](int x) {
    int k = 1, y = x;
    while (y != zero) {
      y = add(y, x);
      ++k;
      if (k > n + 1)
        throw PreconditionError("structure is not a finite group");
    }
    return k;
  };
  int best = zero, best_ord = 1;
  for (int x = 0; x < n; ++x) {
    int o = order(x);
    if (o > best_ord) {
      best_ord = o;
      best = x;
    }
  }
  if (best_ord == 1) return {};
  std::vector<int> sub{zero};
  {
    int y = best;
    while (y != zero) {
      sub.push_back(y);
      y = add(y, best);
    }
  }
  std::vector<int> root(n);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (int x = 0; x < n; ++x)
    for (int h : sub) {
      int a = find(x), b = find(add(x, h));
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  std::vector<int> reps;
  std::vector<int> rep_id(n, -1);
  for (int x = 0; x < n; ++x)
    if (find(x) == x) {
      rep_id[x] = static_cast<int>(reps.size());
      reps.push_back(x);
    }
  auto q_add = [&](int i, int j) {
    return rep_id[find(add(reps[i], reps[j]))];
  };
  std::vector<long long> rest =
      abelian_invariants(static_cast<int>(reps.size()), q_add);
  rest.push_back(best_ord);
  return rest;
}

ojson GroupDescriptor::to_json(int degree, const std::string& mode) const {
  ojson j;
  j["degree"] = degree;
  j["cyclic_orders"] = cyclic_orders;
  j["order"] = order;
  j["mode"] = mode;
  return j;
}

namespace {

GroupDescriptor descriptor_from_table(
    int n, const std::function<int(int, int)>& add) {
  GroupDescriptor d;
  d.cyclic_orders = abelian_invariants(n, add);
  d.order = 1;
  for (long long o : d.cyclic_orders) d.order *= o;
  if (d.order != n)
    throw PreconditionError("group decomposition does not match the order");
  return d;
}

void require_group_complete(const GammaSemiring& t, const GammaModule& a,
                            const GammaModule& b, const char* what) {
  if (!t.group_complete() || !a.group_complete() || !b.group_complete())
    throw PreconditionError(
        std::string(what) +
        " in degree 1 is defined only in group-complete mode (the base and "
        "both modules must have abelian-group addition)");
}

}  // namespace

GroupDescriptor ext_group(const GammaSemiring& t, const GammaModule& a,
                          const GammaModule& b, int degree, long long budget) {
  if (degree != 0 && degree != 1)
    throw PreconditionError("ext is implemented in degrees 0 and 1 only");
  if (degree == 0) {
    auto homs = hom_set(t, a, b, budget);
    if (!b.group_complete())
      throw PreconditionError(
          "ext degree 0 reports a group; the target module must be "
          "group-complete");
    auto add = [&](int i, int j) {
      std::vector<int> s(a.n);
      for (int x = 0; x < a.n; ++x)
        s[x] = b.plus(homs[i].table[x], homs[j].table[x]);
      auto it = std::lower_bound(homs.begin(), homs.end(), ModuleMap{s});
      if (it == homs.end() || !(it->table == s))
        throw InvalidQuotientError("hom set not closed under addition",
                                   ojson::object());
      return static_cast<int>(it - homs.begin());
    };
    return descriptor_from_table(static_cast<int>(homs.size()), add);
  }
  require_group_complete(t, a, b, "ext");
  ChainData ch = presentation(t, a, budget);
  auto h0 = hom_set(t, ch.f0, b, budget);
  auto h1 = hom_set(t, ch.f1, b, budget);
  std::map<std::vector<int>, int> h1_index;
  for (std::size_t i = 0; i < h1.size(); ++i)
    h1_index[h1[i].table] = static_cast<int>(i);
  std::vector<int> image;
  for (const auto& f : h0) {
    std::vector<int> comp(ch.f1.n);
    for (int x = 0; x < ch.f1.n; ++x) comp[x] = f.table[ch.d[x]];
    auto it = h1_index.find(comp);
    if (it == h1_index.end())
      throw InvalidQuotientError("pullback left the homomorphism set",
                                 ojson::object());
    image.push_back(it->second);
  }
  const int n1 = static_cast<int>(h1.size());
  auto h1_add = [&](int i, int j) {
    std::vector<int> s(ch.f1.n);
    for (int x = 0; x < ch.f1.n; ++x)
      s[x] = b.plus(h1[i].table[x], h1[j].table[x]);
    return h1_index.at(s);
  };
  std::vector<int> root(n1);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (int x = 0; x < n1; ++x)
    for (int u : image) {
      int a2 = find(x), b2 = find(h1_add(x, u));
      if (a2 != b2) root[std::max(a2, b2)] = std::min(a2, b2);
    }
  std::vector<int> reps, rep_id(n1, -1);
  for (int x = 0; x < n1; ++x)
    if (find(x) == x) {
      rep_id[x] = static_cast<int>(reps.size());
      reps.push_back(x);
    }
  auto q_add = [&](int i, int j) {
    return rep_id[find(h1_add(reps[i], reps[j]))];
  };
  return descriptor_from_table(static_cast<int>(reps.size()), q_add);
}

GroupDescriptor tor_group(const GammaSemiring& t, const GammaModule& a,
                          const GammaModule& b, int degree, long long cap) {
  if (degree != 0 && degree != 1)
    throw PreconditionError("tor is implemented in degrees 0 and 1 only");
  if (degree == 0) {
    TensorResult r = tensor(t, a, b, cap);
    if (!r.complete)
      throw BudgetError("tensor did not materialize within its cap");
    if (!r.module.group_complete())
      throw PreconditionError(
          "tor degree 0 reports a group; the tensor must be group-complete");
    auto add = [&](int i, int j) { return r.module.plus(i, j); };
    return descriptor_from_table(r.module.n, add);
  }
  require_group_complete(t, a, b, "tor");
  ChainData ch = presentation(t, a, default_budget());
  TensorResult t1 = tensor(t, ch.f1, b, cap);
  TensorResult t0 = tensor(t, ch.f0, b, cap);
  if (!t1.complete || !t0.complete)
    throw BudgetError("chain tensor did not materialize within its cap");
  // induced map F1 (x) N -> F0 (x) N on classes via representatives
  std::vector<int> theta(t1.module.n);
  for (int cls = 0; cls < t1.module.n; ++cls) {
    int acc = 0;
    for (int k = 0; k < ch.f1.n * b.n; ++k) {
      int count = t1.class_rep[cls][k];
      if (count == 0) continue;
      int x = k / b.n, y = k % b.n;
      int image_gen = t0.gen_class[ch.d[x] * b.n + y];
      for (int rpt = 0; rpt < count; ++rpt)
        acc = t0.module.plus(acc, image_gen);
    }
    theta[cls] = acc;
  }
  for (int i = 0; i < t1.module.n; ++i)
    for (int j = 0; j < t1.module.n; ++j)
      if (theta[t1.module.plus(i, j)] !=
          t0.module.plus(theta[i], theta[j]))
        throw InvalidQuotientError("induced chain map is not additive",
                                   ojson::object());
  std::vector<int> kernel;
  std::vector<int> kid(t1.module.n, -1);
  for (int i = 0; i < t1.module.n; ++i)
    if (theta[i] == 0) {
      kid[i] = static_cast<int>(kernel.size());
      kernel.push_back(i);
    }
  auto k_add = [&](int i, int j) {
    return kid[t1.module.plus(kernel[i], kernel[j])];
  };
  return descriptor_from_table(static_cast<int>(kernel.size()), k_add);
}

LocalizedModule localize_module(const GammaSemiring& t, const GammaModule& mod,
                                Mask s) {
  LocalizedModule lm;
  lm.base = localize(t, s);
  int e = lm.base.glue;
  std::vector<std::pair<int, int>> pairs;
  std::vector<int> pair_index(static_cast<std::size_t>(mod.n) * t.n, -1);
  for (int m2 = 0; m2 < mod.n; ++m2)
    for (int ss = 0; ss < t.n; ++ss)
      if (mask_has(s, ss)) {
        pair_index[m2 * t.n + ss] = static_cast<int>(pairs.size());
        pairs.emplace_back(m2, ss);
      }
  const int np = static_cast<int>(pairs.size());
  auto related = [&](int i, int j) {
    auto [m1, s1] = pairs[i];
    auto [m2, s2] = pairs[j];
    for (int u = 0; u < t.n; ++u) {
      if (!mask_has(s, u)) continue;
      for (int g = 0; g < t.m; ++g)
        if (mod.act(g, u, s2, m1) == mod.act(g, u, s1, m2)) return true;
    }
    return false;
  };
  std::vector<int> root(np);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j)
      if (related(i, j)) {
        int a = find(i), b = find(j);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }
  std::map<int, int> class_id;
  for (int i = 0; i < np; ++i) {
    int r = find(i);
    if (!class_id.count(r)) {
      int id = static_cast<int>(class_id.size());
      class_id[r] = id;
      lm.classes.emplace_back();
    }
    lm.classes[class_id[r]].push_back(pairs[i]);
  }
  auto cls = [&](int m2, int ss) {
    return class_id.at(find(pair_index[m2 * t.n + ss]));
  };
  const int nc = static_cast<int>(lm.classes.size());
  const GammaSemiring& q = lm.base.quotient;
  lm.quotient.n = nc;
  lm.quotient.nt = q.n;
  lm.quotient.m = q.m;
  lm.quotient.alloc();
  const int g0 = t.gamma0;
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      auto [m1, s1] = lm.classes[i][0];
      auto [m2, s2] = lm.classes[j][0];
      int num = mod.plus(mod.act(g0, s2, e, m1), mod.act(g0, s1, e, m2));
      int den = t.prod(g0, s1, s2, e);
      lm.quotient.add[i * nc + j] = cls(num, den);
    }
  for (int g = 0; g < t.m; ++g)
    for (int qa = 0; qa < q.n; ++qa)
      for (int qb = 0; qb < q.n; ++qb)
        for (int i = 0; i < nc; ++i) {
          auto [a, sa] = lm.base.classes[qa][0];
          auto [b, sb] = lm.base.classes[qb][0];
          auto [m2, sm] = lm.classes[i][0];
          int num = mod.act(g, a, b, m2);
          int den = t.prod(g0, sa, sb, sm);
          lm.quotient.action[((static_cast<std::size_t>(g) * q.n + qa) * q.n +
                              qb) *
                                 nc +
                             i] = cls(num, den);
        }
  lm.phi.resize(mod.n);
  for (int m2 = 0; m2 < mod.n; ++m2) lm.phi[m2] = cls(m2, e);
  lm.axioms_pass = check_module_axioms(q, lm.quotient).passed();
  return lm;
}

SupportReport support(const GammaSemiring& t, const GammaModule& mod,
                      const SpectrumData& spec) {
  SupportReport rep;
  for (int p = 0; p < spec.prime_count(); ++p) {
    LocalizedModule lm =
        localize_module(t, mod, full_mask(t.n) & ~spec.primes[p]);
    if (lm.classes.size() > 1) rep.support |= mask_bit(p);
  }
  Mask ann = annihilator(t, mod, spec.mode).ann;
  rep.radical_support = v_set_of(spec, radical(t, ann));
  rep.agree = rep.support == rep.radical_support;
  return rep;
}

std::vector<GammaModule> enumerate_modules(const GammaSemiring& t, int size,
                                           long long budget) {
  if (size < 1 || size > 6)
    throw PreconditionError("module enumeration supports sizes 1..6");
  // additive monoids on {0..size-1} with identity 0
  std::vector<std::vector<int>> monoids;
  {
    std::vector<std::pair<int, int>> cells;
    for (int a = 1; a < size; ++a)
      for (int b = a; b < size; ++b) cells.emplace_back(a, b);
    std::vector<int> table(size * size, 0);
    for (int a = 0; a < size; ++a) table[a] = table[a * size] = a;
    std::function<void(std::size_t)> rec = [&](std::size_t ci) {
      if (ci == cells.size()) {
        for (int a = 0; a < size; ++a)
          for (int b = 0; b < size; ++b)
            for (int c = 0; c < size; ++c)
              if (table[table[a * size + b] * size + c] !=
                  table[a * size + table[b * size + c]])
                return;
        monoids.push_back(table);
        return;
      }
      auto [a, b] = cells[ci];
      for (int v = 0; v < size; ++v) {
        table[a * size + b] = table[b * size + a] = v;
        rec(ci + 1);
      }
    };
    rec(0);
  }

  GenTrace t_trace = additive_generators(
      t.n, [&](int a, int b) { return t.plus(a, b); });

  std::set<std::vector<std::uint8_t>> seen;
  std::vector<GammaModule> out;
  for (const auto& monoid : monoids) {
    auto m_plus = [&](int a, int b) { return monoid[a * size + b]; };
    GenTrace m_trace = additive_generators(size, m_plus);
    std::vector<int> m_base{0};
    for (int g : m_trace.gens) m_base.push_back(g);

    // No axiom couples distinct action slabs, and mixed associativity only
    // couples the columns of one slab, so slabs and columns are searched
    // independently and recombined.
    // column = the action [a][m] table for one fixed (gamma, second slot)
    auto column_candidates = [&](long long cap) {
      std::vector<std::vector<int>> cols;  // flattened t.n * size tables
      long long combos = 1;
      std::vector<std::pair<int, int>> slots;  // (T-generator, base m)
      for (int gt : t_trace.gens)
        for (int mb : m_base) {
          slots.emplace_back(gt, mb);
          combos *= size;
          if (combos > cap)
            throw BudgetError("module enumeration needs " +
                              std::to_string(combos) +
                              "+ assignments per column, over budget " +
                              std::to_string(cap));
        }
      std::vector<std::vector<int>> val(t.n, std::vector<int>(size, -1));
      for (long long it = 0; it < combos; ++it) {
        long long v = it;
        for (auto& row : val) std::fill(row.begin(), row.end(), -1);
        for (int i = static_cast<int>(slots.size()) - 1; i >= 0; --i) {
          val[slots[i].first][slots[i].second] = static_cast<int>(v % size);
          v /= size;
        }
        // extend over m, then over the first slot, by additive derivations
        for (int gt : t_trace.gens)
          for (int el : m_trace.order) {
            const Derivation& d = m_trace.deriv[el];
            if (d.kind == 2) val[gt][el] = m_plus(val[gt][d.x], val[gt][d.y]);
          }
        for (int el : t_trace.order) {
          const Derivation& d = t_trace.deriv[el];
          if (d.kind == 0)
            for (int m2 = 0; m2 < size; ++m2) val[el][m2] = 0;
          else if (d.kind == 2)
            for (int m2 = 0; m2 < size; ++m2)
              val[el][m2] = m_plus(val[d.x][m2], val[d.y][m2]);
        }
        bool ok = true;
        for (int a = 0; a < t.n && ok; ++a)
          for (int x = 0; x < size && ok; ++x) {
            ok = val[a][x] >= 0;
            if (!ok) break;
            for (int y = 0; y < size && ok; ++y)
              ok = val[a][m_plus(x, y)] == m_plus(val[a][x], val[a][y]);
          }
        for (int a = 0; a < t.n && ok; ++a)
          for (int b = 0; b < t.n && ok; ++b)
            for (int x = 0; x < size && ok; ++x)
              ok = val[t.plus(a, b)][x] == m_plus(val[a][x], val[b][x]);
        if (!ok) continue;
        std::vector<int> flat;
        flat.reserve(t.n * size);
        for (int a = 0; a < t.n; ++a)
          for (int x = 0; x < size; ++x) flat.push_back(val[a][x]);
        cols.push_back(std::move(flat));
      }
      return cols;
    };

    std::vector<std::vector<int>> cols;
    try {
      cols = column_candidates(budget);
    } catch (const BudgetError&) {
      throw;
    }
    if (cols.empty()) continue;

    // slab = the full action table of one gamma: a choice of column per
    // second-slot element, filtered by mixed associativity
    std::vector<std::vector<int>> slabs;  // flattened t.n * t.n * size
    {
      long long combos = 1;
      for (int t2 = 0; t2 < t.n; ++t2) {
        combos *= static_cast<long long>(cols.size());
        if (combos > budget)
          throw BudgetError("module enumeration needs " +
                            std::to_string(combos) +
                            "+ slab assignments, over budget " +
                            std::to_string(budget));
      }
      std::vector<int> pick(t.n);
      for (long long it = 0; it < combos; ++it) {
        long long v = it;
        for (int i = t.n - 1; i >= 0; --i) {
          pick[i] = static_cast<int>(v % cols.size());
          v /= cols.size();
        }
        auto slab_at = [&](int a, int b, int x) {
          return cols[pick[b]][a * size + x];
        };
        bool ok = true;
        for (int g1 = 0; g1 < t.m && ok; ++g1)
          for (int a = 0; a < t.n && ok; ++a)
            for (int b = 0; b < t.n && ok; ++b)
              for (int c = 0; c < t.n && ok; ++c)
                for (int d = 0; d < t.n && ok; ++d)
                  for (int x = 0; x < size && ok; ++x)
                    ok = slab_at(t.prod(g1, a, b, c), d, x) ==
                         slab_at(a, t.prod(g1, b, c, d), x);
        if (!ok) continue;
        std::vector<int> flat;
        flat.reserve(t.n * t.n * size);
        for (int a = 0; a < t.n; ++a)
          for (int b = 0; b < t.n; ++b)
            for (int x = 0; x < size; ++x) flat.push_back(slab_at(a, b, x));
        slabs.push_back(std::move(flat));
      }
    }
    if (slabs.empty()) continue;

    long long combos = 1;
    for (int g = 0; g < t.m; ++g) {
      combos *= static_cast<long long>(slabs.size());
      if (combos > budget)
        throw BudgetError("module enumeration needs " + std::to_string(combos) +
                          "+ structures, over budget " + std::to_string(budget));
    }
    std::vector<int> pick(t.m);
    for (long long it = 0; it < combos; ++it) {
      long long v = it;
      for (int i = t.m - 1; i >= 0; --i) {
        pick[i] = static_cast<int>(v % slabs.size());
        v /= slabs.size();
      }
      GammaModule mod;
      mod.n = size;
      mod.nt = t.n;
      mod.m = t.m;
      mod.alloc();
      mod.add = monoid;
      for (int g = 0; g < t.m; ++g)
        std::copy(slabs[pick[g]].begin(), slabs[pick[g]].end(),
                  mod.action.begin() +
                      static_cast<std::size_t>(g) * t.n * t.n * size);
      if (!check_module_axioms(t, mod).passed()) continue;
      // canonical under module relabelings fixing 0
      std::vector<int> perm;
      for (int i = 1; i < size; ++i) perm.push_back(i);
      std::vector<std::uint8_t> best = mod.encode();
      std::vector<int> sigma(size);
      do {
        sigma[0] = 0;
        for (int i = 1; i < size; ++i) sigma[i] = perm[i - 1];
        GammaModule rl;
        rl.n = size;
        rl.nt = t.n;
        rl.m = t.m;
        rl.alloc();
        for (int a = 0; a < size; ++a)
          for (int b = 0; b < size; ++b)
            rl.add[sigma[a] * size + sigma[b]] = sigma[mod.plus(a, b)];
        for (int g = 0; g < t.m; ++g)
          for (int a = 0; a < t.n; ++a)
            for (int b = 0; b < t.n; ++b)
              for (int m2 = 0; m2 < size; ++m2)
                rl.action[((static_cast<std::size_t>(g) * t.n + a) * t.n + b) *
                              size +
                          sigma[m2]] = sigma[mod.act(g, a, b, m2)];
        auto enc = rl.encode();
        if (enc < best) best = enc;
      } while (std::next_permutation(perm.begin(), perm.end()));
      if (best == mod.encode() && seen.insert(best).second)
        out.push_back(mod);
    }
  }
  std::sort(out.begin(), out.end(), [](const GammaModule& a,
                                       const GammaModule& b) {
    return a.encode() < b.encode();
  });
  return out;
}

GammaModule module_from_json(const ojson& j, const GammaSemiring& t) {
  GammaModule mod;
  try {
    mod.n = j.at("n").get<int>();
    mod.nt = t.n;
    mod.m = t.m;
    if (mod.n < 1 || mod.n > 255)
      throw StructuralError("module size out of range");
    mod.alloc();
    const auto& add = j.at("add");
    if (static_cast<int>(add.size()) != mod.n)
      throw StructuralError("module add has wrong row count");
    for (int a = 0; a < mod.n; ++a)
      for (int b = 0; b < mod.n; ++b)
        mod.add[a * mod.n + b] = add[a][b].get<int>();
    const auto& act = j.at("action");
    if (static_cast<int>(act.size()) != t.m)
      throw StructuralError("module action has wrong gamma count");
    for (int g = 0; g < t.m; ++g)
      for (int a = 0; a < t.n; ++a)
        for (int b = 0; b < t.n; ++b)
          for (int x = 0; x < mod.n; ++x)
            mod.action[((static_cast<std::size_t>(g) * t.n + a) * t.n + b) *
                           mod.n +
                       x] = act[g][a][b][x].get<int>();
  } catch (const nlohmann::json::exception& ex) {
    throw StructuralError(std::string("bad module json: ") + ex.what());
  }
  validate_module_structure(t, mod);
  return mod;
}

ojson module_to_json(const GammaModule& mod, const std::string& over_hash) {
  ojson j;
  j["n"] = mod.n;
  ojson rows = ojson::array();
  for (int a = 0; a < mod.n; ++a) {
    ojson row = ojson::array();
    for (int b = 0; b < mod.n; ++b) row.push_back(mod.plus(a, b));
    rows.push_back(std::move(row));
  }
  j["add"] = std::move(rows);
  ojson slabs = ojson::array();
  for (int g = 0; g < mod.m; ++g) {
    ojson slab = ojson::array();
    for (int a = 0; a < mod.nt; ++a) {
      ojson plane = ojson::array();
      for (int b = 0; b < mod.nt; ++b) {
        ojson row = ojson::array();
        for (int x = 0; x < mod.n; ++x) row.push_back(mod.act(g, a, b, x));
        plane.push_back(std::move(row));
      }
      slab.push_back(std::move(plane));
    }
    slabs.push_back(std::move(slab));
  }
  j["action"] = std::move(slabs);
  if (over_hash.empty())
    j["over"] = nullptr;
  else
    j["over"] = over_hash;
  return j;
}

GammaModule load_module_file(const std::string& path, const GammaSemiring& t,
                             std::string* over_hash_out) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open module file: " + path);
  ojson j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw StructuralError("cannot parse " + path + ": " + ex.what());
  }
  if (over_hash_out) {
    *over_hash_out = "";
    if (j.contains("over") && j.at("over").is_string())
      *over_hash_out = j.at("over").get<std::string>();
  }
  return module_from_json(j, t);
}

}  // namespace tgs
