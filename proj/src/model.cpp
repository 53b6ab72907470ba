#include "tgs/model.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace tgs {

namespace {

constexpr std::size_t kWitnessCap = 64;

void push_witness(AxiomCheck& c, AxiomWitness w) {
  if (c.witnesses.size() < kWitnessCap) c.witnesses.push_back(std::move(w));
}

std::vector<std::vector<int>> perms_fixing_zero(int n) {
  std::vector<int> rest;
  for (int i = 1; i < n; ++i) rest.push_back(i);
  std::vector<std::vector<int>> out;
  do {
    std::vector<int> sigma(n);
    sigma[0] = 0;
    for (int i = 1; i < n; ++i) sigma[i] = rest[i - 1];
    out.push_back(sigma);
  } while (std::next_permutation(rest.begin(), rest.end()));
  return out;
}

std::vector<std::vector<int>> all_perms(int m) {
  std::vector<int> v;
  for (int i = 0; i < m; ++i) v.push_back(i);
  std::vector<std::vector<int>> out;
  do {
    out.push_back(v);
  } while (std::next_permutation(v.begin(), v.end()));
  return out;
}

}  // namespace

bool GammaSemiring::group_complete() const {
  for (int a = 0; a < n; ++a) {
    bool inv = false;
    for (int b = 0; b < n && !inv; ++b) inv = plus(a, b) == 0;
    if (!inv) return false;
  }
  return true;
}

void validate_structure(const GammaSemiring& t) {
  if (t.n < 1) throw StructuralError("carrier size must be >= 1");
  if (t.m < 1) throw StructuralError("parameter set size must be >= 1");
  if (t.n > kMaxCarrier) throw StructuralError("carrier size exceeds 64");
  auto expect = [](std::size_t got, std::size_t want, const char* name) {
    if (got != want)
      throw StructuralError(std::string("table ") + name + " has " +
                            std::to_string(got) + " entries, expected " +
                            std::to_string(want));
  };
  expect(t.add.size(), static_cast<std::size_t>(t.n) * t.n, "add");
  expect(t.gmul.size(), static_cast<std::size_t>(t.m) * t.m, "gmul");
  expect(t.tern.size(), static_cast<std::size_t>(t.m) * t.n * t.n * t.n,
         "tern");
  for (int a = 0; a < t.n; ++a)
    for (int b = 0; b < t.n; ++b)
      if (t.plus(a, b) < 0 || t.plus(a, b) >= t.n)
        throw StructuralError("add[" + std::to_string(a) + "][" +
                              std::to_string(b) + "]=" +
                              std::to_string(t.plus(a, b)) + " out of range");
  for (int g = 0; g < t.m; ++g)
    for (int h = 0; h < t.m; ++h)
      if (t.gprod(g, h) < 0 || t.gprod(g, h) >= t.m)
        throw StructuralError("gmul[" + std::to_string(g) + "][" +
                              std::to_string(h) + "]=" +
                              std::to_string(t.gprod(g, h)) + " out of range");
  for (int g = 0; g < t.m; ++g)
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        for (int c = 0; c < t.n; ++c) {
          int v = t.prod(g, a, b, c);
          if (v < 0 || v >= t.n)
            throw StructuralError(
                "tern[" + std::to_string(g) + "][" + std::to_string(a) + "][" +
                std::to_string(b) + "][" + std::to_string(c) + "]=" +
                std::to_string(v) + " out of range");
        }
  if (t.e && (*t.e < 0 || *t.e >= t.n))
    throw StructuralError("designated e out of range");
  if (t.gamma0 < 0 || t.gamma0 >= t.m)
    throw StructuralError("gamma0 out of range");
}

AxiomReport check_axioms(const GammaSemiring& t, AxiomMode mode) {
  validate_structure(t);
  AxiomReport rep;
  const int n = t.n, m = t.m;

  {  // T1: (carrier, +, 0) is a commutative monoid
    AxiomCheck c{"T1", "pass", {}};
    for (int a = 0; a < n; ++a) {
      if (t.plus(0, a) != a)
        push_witness(c, {"T1", {}, {0, a}, t.plus(0, a), a});
      for (int b = 0; b < n; ++b) {
        if (t.plus(a, b) != t.plus(b, a))
          push_witness(c, {"T1", {}, {a, b}, t.plus(a, b), t.plus(b, a)});
        for (int d = 0; d < n; ++d)
          if (t.plus(t.plus(a, b), d) != t.plus(a, t.plus(b, d)))
            push_witness(c, {"T1",
                             {},
                             {a, b, d},
                             t.plus(t.plus(a, b), d),
                             t.plus(a, t.plus(b, d))});
      }
    }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }

  {  // commutativity: each ternary table fully symmetric
    AxiomCheck c{"commutativity", "pass", {}};
    static const int perm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (int g = 0; g < m; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int cc = 0; cc < n; ++cc) {
            int v = t.prod(g, a, b, cc);
            int x[3] = {a, b, cc};
            for (const auto& p : perm3) {
              int w = t.prod(g, x[p[0]], x[p[1]], x[p[2]]);
              if (w != v) {
                push_witness(c, {"commutativity", {g}, {a, b, cc}, v, w});
                break;
              }
            }
          }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }

  {  // gamma-associativity: the parameter product is associative
    AxiomCheck c{"gamma-associativity", "pass", {}};
    for (int g = 0; g < m; ++g)
      for (int h = 0; h < m; ++h)
        for (int k = 0; k < m; ++k)
          if (t.gprod(t.gprod(g, h), k) != t.gprod(g, t.gprod(h, k)))
            push_witness(c, {"gamma-associativity",
                             {g, h, k},
                             {},
                             t.gprod(t.gprod(g, h), k),
                             t.gprod(g, t.gprod(h, k))});
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }

  {  // T3: distributivity over + (first slot; the tables are symmetric)
    AxiomCheck c{"T3", "pass", {}};
    for (int g = 0; g < m; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int x = 0; x < n; ++x)
            for (int y = 0; y < n; ++y) {
              int lhs = t.prod(g, t.plus(a, b), x, y);
              int rhs = t.plus(t.prod(g, a, x, y), t.prod(g, b, x, y));
              if (lhs != rhs)
                push_witness(c, {"T3", {g}, {a, b, x, y}, lhs, rhs});
            }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }

  {  // T4: ternary associativity across parameter pairs
    AxiomCheck c{"T4", "pass", {}};
    for (int g1 = 0; g1 < m; ++g1)
      for (int g2 = 0; g2 < m; ++g2)
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b)
            for (int cc = 0; cc < n; ++cc)
              for (int d = 0; d < n; ++d)
                for (int ee = 0; ee < n; ++ee) {
                  int left = t.prod(g2, t.prod(g1, a, b, cc), d, ee);
                  int mid = t.prod(g2, a, t.prod(g1, b, cc, d), ee);
                  int right = t.prod(g2, a, b, t.prod(g1, cc, d, ee));
                  if (left != mid)
                    push_witness(
                        c, {"T4", {g1, g2}, {a, b, cc, d, ee}, left, mid});
                  else if (mid != right)
                    push_witness(
                        c, {"T4", {g1, g2}, {a, b, cc, d, ee}, mid, right});
                }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }

  {  // T5 (strict only): {{a,b,c}_g1, d, e}_g2 = {a,b,c}_{g1 g2} as printed
    AxiomCheck c{"T5", mode.strict_t5 ? "pass" : "skipped", {}};
    if (mode.strict_t5) {
      for (int g1 = 0; g1 < m; ++g1)
        for (int g2 = 0; g2 < m; ++g2)
          for (int a = 0; a < n; ++a)
            for (int b = 0; b < n; ++b)
              for (int cc = 0; cc < n; ++cc)
                for (int d = 0; d < n; ++d)
                  for (int ee = 0; ee < n; ++ee) {
                    int lhs = t.prod(g2, t.prod(g1, a, b, cc), d, ee);
                    int rhs = t.prod(t.gprod(g1, g2), a, b, cc);
                    if (lhs != rhs)
                      push_witness(
                          c, {"T5", {g1, g2}, {a, b, cc, d, ee}, lhs, rhs});
                  }
      if (!c.witnesses.empty()) c.status = "fail";
    }
    rep.checks.push_back(std::move(c));
  }

  {  // T6: zero absorption
    AxiomCheck c{"T6", "pass", {}};
    for (int g = 0; g < m; ++g)
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          int v = t.prod(g, 0, a, b);
          if (v != 0) push_witness(c, {"T6", {g}, {0, a, b}, v, 0});
        }
    if (!c.witnesses.empty()) c.status = "fail";
    rep.checks.push_back(std::move(c));
  }

  {  // designated identity idempotent, when present
    AxiomCheck c{"identity-idempotent", t.e ? "pass" : "skipped", {}};
    if (t.e) {
      for (int a = 0; a < n; ++a) {
        int v = t.prod(t.gamma0, *t.e, *t.e, a);
        if (v != a)
          push_witness(c, {"identity-idempotent", {t.gamma0}, {*t.e, *t.e, a},
                           v, a});
      }
      if (!c.witnesses.empty()) c.status = "fail";
    }
    rep.checks.push_back(std::move(c));
  }

  return rep;
}

std::pair<int, int> reevaluate_witness(const GammaSemiring& t,
                                       const AxiomWitness& w) {
  const auto& e = w.elems;
  const auto& g = w.gammas;
  if (w.axiom == "T1") {
    if (e.size() == 2) {
      if (e[0] == 0) return {t.plus(0, e[1]), e[1]};
      return {t.plus(e[0], e[1]), t.plus(e[1], e[0])};
    }
    return {t.plus(t.plus(e[0], e[1]), e[2]), t.plus(e[0], t.plus(e[1], e[2]))};
  }
  if (w.axiom == "commutativity") {
    // lhs is the sorted-argument value; rhs the first differing permutation
    int v = t.prod(g[0], e[0], e[1], e[2]);
    static const int perm3[6][3] = {{0, 1, 2}, {0, 2, 1}, {1, 0, 2},
                                    {1, 2, 0}, {2, 0, 1}, {2, 1, 0}};
    for (const auto& p : perm3) {
      int x = t.prod(g[0], e[p[0]], e[p[1]], e[p[2]]);
      if (x != v) return {v, x};
    }
    return {v, v};
  }
  if (w.axiom == "gamma-associativity")
    return {t.gprod(t.gprod(g[0], g[1]), g[2]),
            t.gprod(g[0], t.gprod(g[1], g[2]))};
  if (w.axiom == "T3")
    return {t.prod(g[0], t.plus(e[0], e[1]), e[2], e[3]),
            t.plus(t.prod(g[0], e[0], e[2], e[3]),
                   t.prod(g[0], e[1], e[2], e[3]))};
  if (w.axiom == "T4") {
    int left = t.prod(g[1], t.prod(g[0], e[0], e[1], e[2]), e[3], e[4]);
    int mid = t.prod(g[1], e[0], t.prod(g[0], e[1], e[2], e[3]), e[4]);
    int right = t.prod(g[1], e[0], e[1], t.prod(g[0], e[2], e[3], e[4]));
    if (left != mid) return {left, mid};
    return {mid, right};
  }
  if (w.axiom == "T5")
    return {t.prod(g[1], t.prod(g[0], e[0], e[1], e[2]), e[3], e[4]),
            t.prod(t.gprod(g[0], g[1]), e[0], e[1], e[2])};
  if (w.axiom == "T6") return {t.prod(g[0], 0, e[1], e[2]), 0};
  if (w.axiom == "identity-idempotent")
    return {t.prod(g[0], e[0], e[1], e[2]), e[2]};
  throw StructuralError("unknown axiom id: " + w.axiom);
}

std::vector<int> find_identity_idempotents(const GammaSemiring& t) {
  std::vector<int> out;
  for (int e = 0; e < t.n; ++e) {
    bool ok = true;
    for (int a = 0; a < t.n && ok; ++a)
      ok = t.prod(t.gamma0, e, e, a) == a;
    if (ok) out.push_back(e);
  }
  return out;
}

std::optional<int> effective_identity(const GammaSemiring& t) {
  if (t.e) return t.e;
  auto ids = find_identity_idempotents(t);
  if (ids.empty()) return std::nullopt;
  return ids.front();
}

GammaSemiring relabel(const GammaSemiring& t, const std::vector<int>& sigma,
                      const std::vector<int>& pi) {
  GammaSemiring r;
  r.n = t.n;
  r.m = t.m;
  r.alloc();
  for (int a = 0; a < t.n; ++a)
    for (int b = 0; b < t.n; ++b)
      r.add[sigma[a] * t.n + sigma[b]] = sigma[t.plus(a, b)];
  for (int g = 0; g < t.m; ++g)
    for (int h = 0; h < t.m; ++h)
      r.gmul[pi[g] * t.m + pi[h]] = pi[t.gprod(g, h)];
  for (int g = 0; g < t.m; ++g)
    for (int a = 0; a < t.n; ++a)
      for (int b = 0; b < t.n; ++b)
        for (int c = 0; c < t.n; ++c)
          r.tern[((static_cast<std::size_t>(pi[g]) * t.n + sigma[a]) * t.n +
                  sigma[b]) *
                     t.n +
                 sigma[c]] = sigma[t.prod(g, a, b, c)];
  if (t.e) r.e = sigma[*t.e];
  r.gamma0 = pi[t.gamma0];
  return r;
}

std::vector<std::uint8_t> encode_tables(const GammaSemiring& t) {
  std::vector<std::uint8_t> out;
  out.reserve(2 + t.add.size() + t.gmul.size() + t.tern.size());
  out.push_back(static_cast<std::uint8_t>(t.n));
  out.push_back(static_cast<std::uint8_t>(t.m));
  for (int v : t.add) out.push_back(static_cast<std::uint8_t>(v));
  for (int v : t.gmul) out.push_back(static_cast<std::uint8_t>(v));
  for (int v : t.tern) out.push_back(static_cast<std::uint8_t>(v));
  return out;
}

std::vector<std::uint8_t> canonical_form(const GammaSemiring& t) {
  std::vector<std::uint8_t> best;
  for (const auto& pi : all_perms(t.m))
    for (const auto& sigma : perms_fixing_zero(t.n)) {
      auto enc = encode_tables(relabel(t, sigma, pi));
      if (best.empty() || enc < best) best = std::move(enc);
    }
  return best;
}

GammaSemiring canonical_model(const GammaSemiring& t) {
  GammaSemiring best;
  std::vector<std::uint8_t> best_enc;
  for (const auto& pi : all_perms(t.m))
    for (const auto& sigma : perms_fixing_zero(t.n)) {
      GammaSemiring r = relabel(t, sigma, pi);
      auto enc = encode_tables(r);
      if (best_enc.empty() || enc < best_enc) {
        best_enc = std::move(enc);
        best = std::move(r);
      }
    }
  auto ids = find_identity_idempotents(best);
  best.e = ids.empty() ? std::nullopt : std::optional<int>(ids.front());
  best.gamma0 = 0;
  return best;
}

std::string canonical_hash(const GammaSemiring& t) {
  auto enc = canonical_form(t);
  return hex64(fnv1a64(enc.data(), enc.size()));
}

bool check_morphism(const GammaSemiring& src, const GammaSemiring& dst,
                    const Morphism& f) {
  const auto& s = f.carrier_map;
  const auto& p = f.param_map;
  if (static_cast<int>(s.size()) != src.n ||
      static_cast<int>(p.size()) != src.m)
    return false;
  for (int v : s)
    if (v < 0 || v >= dst.n) return false;
  for (int v : p)
    if (v < 0 || v >= dst.m) return false;
  if (s[0] != 0) return false;
  for (int a = 0; a < src.n; ++a)
    for (int b = 0; b < src.n; ++b)
      if (s[src.plus(a, b)] != dst.plus(s[a], s[b])) return false;
  for (int g = 0; g < src.m; ++g)
    for (int h = 0; h < src.m; ++h)
      if (p[src.gprod(g, h)] != dst.gprod(p[g], p[h])) return false;
  for (int g = 0; g < src.m; ++g)
    for (int a = 0; a < src.n; ++a)
      for (int b = 0; b < src.n; ++b)
        for (int c = 0; c < src.n; ++c)
          if (s[src.prod(g, a, b, c)] != dst.prod(p[g], s[a], s[b], s[c]))
            return false;
  return true;
}

std::optional<Morphism> is_isomorphic(const GammaSemiring& a,
                                      const GammaSemiring& b) {
  if (a.n != b.n || a.m != b.m) return std::nullopt;
  if (canonical_form(a) != canonical_form(b)) return std::nullopt;
  for (const auto& pi : all_perms(a.m))
    for (const auto& sigma : perms_fixing_zero(a.n)) {
      Morphism f{sigma, pi};
      if (check_morphism(a, b, f)) return f;
    }
  return std::nullopt;  // unreachable when canonical forms agree
}

GammaSemiring model_from_json(const ojson& j) {
  GammaSemiring t;
  try {
    t.n = j.at("n").get<int>();
    t.m = j.at("m").get<int>();
    if (t.n < 1 || t.n > kMaxCarrier || t.m < 1 || t.m > kMaxCarrier)
      throw StructuralError("model dimensions out of range");
    t.alloc();
    const auto& add = j.at("add");
    if (static_cast<int>(add.size()) != t.n)
      throw StructuralError("add has wrong row count");
    for (int a = 0; a < t.n; ++a) {
      if (static_cast<int>(add[a].size()) != t.n)
        throw StructuralError("add row " + std::to_string(a) + " wrong width");
      for (int b = 0; b < t.n; ++b) t.add[a * t.n + b] = add[a][b].get<int>();
    }
    const auto& gm = j.at("gmul");
    if (static_cast<int>(gm.size()) != t.m)
      throw StructuralError("gmul has wrong row count");
    for (int g = 0; g < t.m; ++g) {
      if (static_cast<int>(gm[g].size()) != t.m)
        throw StructuralError("gmul row " + std::to_string(g) +
                              " wrong width");
      for (int h = 0; h < t.m; ++h) t.gmul[g * t.m + h] = gm[g][h].get<int>();
    }
    const auto& tn = j.at("tern");
    if (static_cast<int>(tn.size()) != t.m)
      throw StructuralError("tern has wrong gamma count");
    for (int g = 0; g < t.m; ++g) {
      if (static_cast<int>(tn[g].size()) != t.n)
        throw StructuralError("tern gamma " + std::to_string(g) +
                              " wrong shape");
      for (int a = 0; a < t.n; ++a) {
        if (static_cast<int>(tn[g][a].size()) != t.n)
          throw StructuralError("tern slab wrong shape");
        for (int b = 0; b < t.n; ++b) {
          if (static_cast<int>(tn[g][a][b].size()) != t.n)
            throw StructuralError("tern row wrong shape");
          for (int c = 0; c < t.n; ++c)
            t.tern[((static_cast<std::size_t>(g) * t.n + a) * t.n + b) * t.n +
                   c] = tn[g][a][b][c].get<int>();
        }
      }
    }
    if (j.contains("e") && !j.at("e").is_null()) t.e = j.at("e").get<int>();
    if (j.contains("gamma0")) t.gamma0 = j.at("gamma0").get<int>();
  } catch (const nlohmann::json::exception& ex) {
    throw StructuralError(std::string("bad model json: ") + ex.what());
  }
  validate_structure(t);
  return t;
}

ojson model_to_json(const GammaSemiring& t) {
  ojson j;
  j["n"] = t.n;
  j["m"] = t.m;
  {
    ojson rows = ojson::array();
    for (int a = 0; a < t.n; ++a) {
      ojson row = ojson::array();
      for (int b = 0; b < t.n; ++b) row.push_back(t.plus(a, b));
      rows.push_back(std::move(row));
    }
    j["add"] = std::move(rows);
  }
  {
    ojson rows = ojson::array();
    for (int g = 0; g < t.m; ++g) {
      ojson row = ojson::array();
      for (int h = 0; h < t.m; ++h) row.push_back(t.gprod(g, h));
      rows.push_back(std::move(row));
    }
    j["gmul"] = std::move(rows);
  }
  {
    ojson slabs = ojson::array();
    for (int g = 0; g < t.m; ++g) {
      ojson slab = ojson::array();
      for (int a = 0; a < t.n; ++a) {
        ojson plane = ojson::array();
        for (int b = 0; b < t.n; ++b) {
          ojson row = ojson::array();
          for (int c = 0; c < t.n; ++c) row.push_back(t.prod(g, a, b, c));
          plane.push_back(std::move(row));
        }
        slab.push_back(std::move(plane));
      }
      slabs.push_back(std::move(slab));
    }
    j["tern"] = std::move(slabs);
  }
  if (t.e)
    j["e"] = *t.e;
  else
    j["e"] = nullptr;
  j["gamma0"] = t.gamma0;
  return j;
}

GammaSemiring load_model_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open model file: " + path);
  ojson j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw StructuralError("cannot parse " + path + ": " + ex.what());
  }
  return model_from_json(j);
}

ojson AxiomReport::to_json() const {
  ojson j = ojson::object();
  for (const auto& c : checks) {
    ojson cj;
    cj["status"] = c.status;
    if (!c.witnesses.empty()) {
      ojson ws = ojson::array();
      for (const auto& w : c.witnesses) {
        ojson wj;
        wj["gammas"] = w.gammas;
        wj["elems"] = w.elems;
        wj["lhs"] = w.lhs;
        wj["rhs"] = w.rhs;
        ws.push_back(std::move(wj));
      }
      cj["witnesses"] = std::move(ws);
    }
    j[c.axiom] = std::move(cj);
  }
  return j;
}

}  // namespace tgs
