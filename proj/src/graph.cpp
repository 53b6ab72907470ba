#include "tgs/graph.hpp"

#include <algorithm>
#include <functional>
#include <numeric>
#include <set>
#include <tuple>

#include "tgs/modules.hpp"

namespace tgs {

SpectrumGraph build_graph(const SpectrumData& spec, const WeightedSpectrum& w) {
  SpectrumGraph g;
  g.vertices = spec.prime_count();
  g.weights = w.weights;
  std::vector<Mask> open_of(g.vertices);
  for (int i = 0; i < g.vertices; ++i)
    open_of[i] = spec.d_sets[spec.prime_ideal_index[i]];
  for (int i = 0; i < g.vertices; ++i)
    for (int j = i + 1; j < g.vertices; ++j)
      if (open_of[i] & open_of[j]) g.edges.emplace_back(i, j);
  g.laplacian.assign(g.vertices, std::vector<long long>(g.vertices, 0));
  for (auto [i, j] : g.edges) {
    g.laplacian[i][i] += 1;
    g.laplacian[j][j] += 1;
    g.laplacian[i][j] -= 1;
    g.laplacian[j][i] -= 1;
  }
  return g;
}

ComponentData components(const SpectrumGraph& g) {
  ComponentData c;
  std::vector<int> root(g.vertices);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (auto [i, j] : g.edges) {
    int a = find(i), b = find(j);
    if (a != b) root[std::max(a, b)] = std::min(a, b);
  }
  c.component_of.resize(g.vertices);
  std::vector<int> label(g.vertices, -1);
  for (int i = 0; i < g.vertices; ++i) {
    int r = find(i);
    if (label[r] < 0) label[r] = c.count++;
    c.component_of[i] = label[r];
  }
  return c;
}

int laplacian_nullity(const SpectrumGraph& g) {
  int n = g.vertices;
  if (n == 0) return 0;
  std::vector<std::vector<long long>> a = g.laplacian;
  // fraction-free Gaussian elimination (Bareiss)
  int rank = 0;
  long long prev = 1;
  for (int col = 0; col < n && rank < n; ++col) {
    int pivot = -1;
    for (int r = rank; r < n; ++r)
      if (a[r][col] != 0) {
        pivot = r;
        break;
      }
    if (pivot < 0) continue;
    std::swap(a[rank], a[pivot]);
    for (int r = rank + 1; r < n; ++r) {
      for (int c2 = col + 1; c2 < n; ++c2)
        a[r][c2] = (a[rank][col] * a[r][c2] - a[r][col] * a[rank][c2]) / prev;
      a[r][col] = 0;
    }
    prev = a[rank][col];
    ++rank;
  }
  return n - rank;
}

std::string graph_dot(const SpectrumGraph& g, const std::string& mode,
                      const std::string& scheme) {
  std::string out = "graph spectrum {\n";
  out += "  mode=\"" + mode + "\";\n";
  out += "  scheme=\"" + scheme + "\";\n";
  for (int i = 0; i < g.vertices; ++i)
    out += "  p" + std::to_string(i) + " [weight=\"" + g.weights[i].str() +
           "\"];\n";
  for (auto [i, j] : g.edges)
    out += "  p" + std::to_string(i) + " -- p" + std::to_string(j) + ";\n";
  out += "}\n";
  return out;
}

namespace {

std::vector<Mask> cover_prime_sets(const SpectrumData& spec,
                                   const WeightedCover& cover) {
  std::vector<Mask> sets;
  for (const auto& [ideal, w] : cover.members)
    sets.push_back(d_set_of(spec, ideal));
  return sets;
}

void require_whole_cover(const SpectrumData& spec, const WeightedCover& cover) {
  CoverReport cr = is_weighted_covering(spec, cover);
  if (!cr.valid)
    throw PreconditionError(
        std::string("not a valid weighted covering: ") +
        (!cr.union_ok ? "union mismatch" : "weights sum below 1"));
  if (d_set_of(spec, cover.target) != spec.all_primes_mask())
    throw PreconditionError("cover target must open the whole spectrum");
}

}  // namespace

CechH0 cech_h0(const GammaSemiring& t, const SpectrumData& spec,
               const WeightedCover& cover) {
  require_whole_cover(spec, cover);
  CechH0 res;
  res.confidence = Rat::one();
  for (const auto& [ideal, w] : cover.members)
    res.confidence = std::min(res.confidence, w);
  res.eq = equalizer_over(t, spec, cover_prime_sets(spec, cover), &t);
  res.isomorphic_to_model = res.eq.iso_to_model.has_value();
  return res;
}

CechH1 cech_h1(const GammaSemiring& t, const SpectrumData& spec,
               const WeightedCover& cover, const SpectrumGraph& g) {
  require_whole_cover(spec, cover);
  CechH1 res;
  res.surrogate = laplacian_nullity(g) - components(g).count;

  std::vector<Mask> sets = cover_prime_sets(spec, cover);
  const int k = static_cast<int>(sets.size());
  std::vector<LocalizedSemiring> secs;
  for (Mask u : sets) secs.push_back(sections_over(t, spec, u));

  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) pairs.emplace_back(i, j);
  std::vector<LocalizedSemiring> ov;
  for (auto [i, j] : pairs)
    ov.push_back(sections_over(t, spec, sets[i] & sets[j]));

  bool groups = true;
  for (const auto& s : secs) groups &= s.quotient.group_complete();
  for (const auto& s : ov) groups &= s.quotient.group_complete();
  if (!groups) {
    res.kind = "laplacian-surrogate";
    return res;
  }
  res.kind = "cech";

  auto neg = [](const GammaSemiring& q, int x) {
    for (int y = 0; y < q.n; ++y)
      if (q.plus(x, y) == 0) return y;
    throw PreconditionError("no additive inverse in a section");
  };

  std::vector<std::vector<int>> r_leg_to_pair_a(pairs.size()),
      r_leg_to_pair_b(pairs.size());
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    r_leg_to_pair_a[p] = restriction_map(secs[pairs[p].first], ov[p]);
    r_leg_to_pair_b[p] = restriction_map(secs[pairs[p].second], ov[p]);
  }

  std::vector<std::tuple<int, int, int>> triples;
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j)
      for (int l = j + 1; l < k; ++l) triples.emplace_back(i, j, l);
  std::vector<LocalizedSemiring> ov3;
  for (auto [i, j, l] : triples)
    ov3.push_back(sections_over(t, spec, sets[i] & sets[j] & sets[l]));
  auto pair_index = [&](int i, int j) {
    for (std::size_t p = 0; p < pairs.size(); ++p)
      if (pairs[p].first == i && pairs[p].second == j)
        return static_cast<int>(p);
    throw PreconditionError("pair index lookup failed");
  };
  std::vector<std::vector<std::vector<int>>> r_pair_to_triple(triples.size());
  for (std::size_t ti = 0; ti < triples.size(); ++ti) {
    auto [i, j, l] = triples[ti];
    r_pair_to_triple[ti] = {restriction_map(ov[pair_index(j, l)], ov3[ti]),
                            restriction_map(ov[pair_index(i, l)], ov3[ti]),
                            restriction_map(ov[pair_index(i, j)], ov3[ti])};
  }

  long long c1_total = 1;
  for (const auto& s : ov) {
    c1_total *= s.quotient.n;
    if (c1_total > 500000)
      throw BudgetError("first cochain group too large to enumerate");
  }
  long long c0_total = 1;
  for (const auto& s : secs) {
    c0_total *= s.quotient.n;
    if (c0_total > 500000)
      throw BudgetError("zeroth cochain group too large to enumerate");
  }

  auto decode = [](long long idx, const std::vector<LocalizedSemiring>& legs) {
    std::vector<int> out(legs.size());
    for (int i = static_cast<int>(legs.size()) - 1; i >= 0; --i) {
      out[i] = static_cast<int>(idx % legs[i].quotient.n);
      idx /= legs[i].quotient.n;
    }
    return out;
  };
  auto encode = [](const std::vector<int>& v,
                   const std::vector<LocalizedSemiring>& legs) {
    long long idx = 0;
    for (std::size_t i = 0; i < legs.size(); ++i)
      idx = idx * legs[i].quotient.n + v[i];
    return idx;
  };

  // kernel of d1
  std::vector<long long> kernel;
  std::vector<long long> kernel_pos;
  kernel_pos.assign(static_cast<std::size_t>(c1_total), -1);
  for (long long idx = 0; idx < c1_total; ++idx) {
    std::vector<int> co = decode(idx, ov);
    bool closed = true;
    for (std::size_t ti = 0; ti < triples.size() && closed; ++ti) {
      auto [i, j, l] = triples[ti];
      const GammaSemiring& q3 = ov3[ti].quotient;
      int a = r_pair_to_triple[ti][0][co[pair_index(j, l)]];
      int b = r_pair_to_triple[ti][1][co[pair_index(i, l)]];
      int c = r_pair_to_triple[ti][2][co[pair_index(i, j)]];
      closed = q3.plus(q3.plus(a, neg(q3, b)), c) == 0;
    }
    if (closed) {
      kernel_pos[idx] = static_cast<long long>(kernel.size());
      kernel.push_back(idx);
    }
  }

  // image of d0 inside the kernel
  std::vector<long long> image;
  {
    std::set<long long> seen;
    for (long long idx = 0; idx < c0_total; ++idx) {
      std::vector<int> s = decode(idx, secs);
      std::vector<int> co(pairs.size());
      for (std::size_t p = 0; p < pairs.size(); ++p) {
        const GammaSemiring& q = ov[p].quotient;
        int sj = r_leg_to_pair_b[p][s[pairs[p].second]];
        int si = r_leg_to_pair_a[p][s[pairs[p].first]];
        co[p] = q.plus(sj, neg(q, si));
      }
      long long ei = encode(co, ov);
      if (kernel_pos[ei] < 0)
        throw InvalidQuotientError("coboundary is not a cocycle",
                                   ojson::object());
      if (seen.insert(ei).second) image.push_back(ei);
    }
  }

  // quotient group kernel / image
  const int nk = static_cast<int>(kernel.size());
  auto k_add = [&](int x, int y) {
    std::vector<int> a = decode(kernel[x], ov), b = decode(kernel[y], ov);
    std::vector<int> s(pairs.size());
    for (std::size_t p = 0; p < pairs.size(); ++p)
      s[p] = ov[p].quotient.plus(a[p], b[p]);
    long long ei = encode(s, ov);
    if (kernel_pos[ei] < 0)
      throw InvalidQuotientError("cocycles not closed under addition",
                                 ojson::object());
    return static_cast<int>(kernel_pos[ei]);
  };
  std::vector<int> root(nk);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (int x = 0; x < nk; ++x)
    for (long long u : image) {
      int a = find(x), b = find(k_add(x, static_cast<int>(kernel_pos[u])));
      if (a != b) root[std::max(a, b)] = std::min(a, b);
    }
  std::vector<int> reps, rep_id(nk, -1);
  for (int x = 0; x < nk; ++x)
    if (find(x) == x) {
      rep_id[x] = static_cast<int>(reps.size());
      reps.push_back(x);
    }
  auto q_add = [&](int i, int j) {
    return rep_id[find(k_add(reps[i], reps[j]))];
  };
  res.cyclic_orders = abelian_invariants(static_cast<int>(reps.size()), q_add);
  res.order = 1;
  for (long long o : res.cyclic_orders) res.order *= o;
  return res;
}

WeightedCover canonical_weighted_cover(const GammaSemiring& t,
                                       const SpectrumData& spec,
                                       const WeightedSpectrum& w) {
  WeightedCover cover;
  cover.target = full_mask(t.n);
  Mask covered = 0;
  for (int p = 0; p < spec.prime_count(); ++p) {
    cover.members.emplace_back(spec.primes[p],
                               w.weights[p] == Rat::zero() ? Rat::one()
                                                           : w.weights[p]);
    covered |= spec.d_sets[spec.prime_ideal_index[p]];
  }
  if (covered != spec.all_primes_mask() || cover.members.empty())
    cover.members.emplace_back(full_mask(t.n), Rat::one());
  return cover;
}

FingerprintResult fingerprint(const GammaSemiring& t,
                              const FingerprintConfig& cfg) {
  FingerprintResult out;
  SpectrumData spec = spectrum(t, cfg.mode);
  WeightedSpectrum w = assign_weights(
      spec, cfg.scheme,
      cfg.scheme == "file" ? &cfg.file_weights : nullptr);
  SpectrumGraph g = build_graph(spec, w);
  ComponentData comp = components(g);
  int nullity = laplacian_nullity(g);

  ojson j;
  j["fpv"] = 1;
  j["model_hash"] = canonical_hash(t);
  j["mode"] = absorption_str(cfg.mode);
  j["spec_size"] = spec.prime_count();
  j["weights"] = w.to_json();
  {
    ojson gj;
    gj["vertices"] = g.vertices;
    ojson es = ojson::array();
    for (auto [a, b] : g.edges) es.push_back(ojson::array({a, b}));
    gj["edges"] = std::move(es);
    gj["components"] = comp.count;
    gj["laplacian_nullity"] = nullity;
    gj["laplacian_surrogate"] = nullity - comp.count;
    j["graph"] = std::move(gj);
  }

  bool has_e = effective_identity(t).has_value();
  std::optional<int> primitive_count;
  if (has_e) {
    int cnt = 0;
    for (int p = 0; p < spec.prime_count(); ++p)
      if (is_primitive(t, spec, p, cfg.mode)) ++cnt;
    primitive_count = cnt;
  }
  if (primitive_count)
    j["primitive_count"] = *primitive_count;
  else
    j["primitive_count"] = nullptr;

  std::optional<CechH1> h1;
  if (has_e) {
    WeightedCover cover = canonical_weighted_cover(t, spec, w);
    CechH0 h0 = cech_h0(t, spec, cover);
    ojson h0j;
    h0j["section_count"] = h0.eq.glued.n;
    h0j["isomorphic_to_model"] = h0.isomorphic_to_model;
    h0j["confidence"] = h0.confidence.str();
    j["h0"] = std::move(h0j);
    h1 = cech_h1(t, spec, cover, g);
    ojson h1j;
    h1j["kind"] = h1->kind;
    if (h1->kind == "cech") {
      h1j["cyclic_orders"] = h1->cyclic_orders;
      h1j["order"] = h1->order;
    }
    h1j["surrogate"] = h1->surrogate;
    j["h1"] = std::move(h1j);
    if (!h0.isomorphic_to_model)
      out.findings.push_back("global-sections-mismatch");
  } else {
    j["h0"] = ojson{{"skipped", "no identity idempotent"}};
    j["h1"] = ojson{{"skipped", "no identity idempotent"}};
  }

  ojson audits;
  {
    ojson a;
    a["components"] = comp.count;
    if (primitive_count)
      a["primitive_count"] = *primitive_count;
    else
      a["primitive_count"] = nullptr;
    bool agree = primitive_count && comp.count == *primitive_count;
    a["agree"] = agree;
    audits["components-vs-primitive-count"] = std::move(a);
    if (primitive_count && !agree)
      out.findings.push_back("components-vs-primitive-count");
  }
  {
    ojson a;
    a["laplacian_nullity"] = nullity;
    if (h1 && h1->kind == "cech") {
      long long rank = static_cast<long long>(h1->cyclic_orders.size());
      a["cech_h1_rank"] = rank;
      bool agree = rank == nullity;
      a["agree"] = agree;
      if (!agree) out.findings.push_back("laplacian-nullity-vs-cech-h1");
    } else {
      a["cech_h1_rank"] = nullptr;
      a["agree"] = nullptr;
    }
    audits["nullity-vs-h1"] = std::move(a);
  }
  j["audits"] = std::move(audits);
  {
    ojson f = ojson::array();
    for (const auto& s : out.findings) f.push_back(s);
    j["findings"] = std::move(f);
  }
  out.json = std::move(j);
  return out;
}

}  // namespace tgs
