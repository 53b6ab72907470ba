#include "tgs/localization.hpp"

#include <algorithm>
#include <map>
#include <numeric>

namespace tgs {

bool is_mult_closed(const GammaSemiring& t, Mask s) {
  for (int g = 0; g < t.m; ++g)
    for (int a = 0; a < t.n; ++a) {
      if (!mask_has(s, a)) continue;
      for (int b = 0; b < t.n; ++b) {
        if (!mask_has(s, b)) continue;
        for (int c = 0; c < t.n; ++c)
          if (mask_has(s, c) && !mask_has(s, t.prod(g, a, b, c))) return false;
      }
    }
  return true;
}

Mask mult_closure(const GammaSemiring& t, Mask seed) {
  Mask cur = seed;
  for (;;) {
    Mask next = cur;
    for (int g = 0; g < t.m; ++g)
      for (int a = 0; a < t.n; ++a) {
        if (!mask_has(cur, a)) continue;
        for (int b = 0; b < t.n; ++b) {
          if (!mask_has(cur, b)) continue;
          for (int c = 0; c < t.n; ++c)
            if (mask_has(cur, c)) next |= mask_bit(t.prod(g, a, b, c));
        }
      }
    if (next == cur) return cur;
    cur = next;
  }
}

int LocalizedSemiring::class_of(int a, int s) const {
  for (std::size_t i = 0; i < classes.size(); ++i)
    for (const auto& p : classes[i])
      if (p.first == a && p.second == s) return static_cast<int>(i);
  throw PreconditionError("fraction " + std::to_string(a) + "/" +
                          std::to_string(s) + " not in the localization");
}

ojson LocalizedSemiring::to_json() const {
  ojson j;
  j["system"] = mask_to_hex(system);
  ojson cls = ojson::array();
  for (const auto& c : classes) {
    ojson pairs = ojson::array();
    for (const auto& p : c) pairs.push_back(ojson::array({p.first, p.second}));
    cls.push_back(std::move(pairs));
  }
  j["classes"] = std::move(cls);
  j["phi"] = phi;
  ojson q = model_to_json(quotient);
  j["add"] = q["add"];
  j["gmul"] = q["gmul"];
  j["tern"] = q["tern"];
  j["e"] = q["e"];
  j["gamma0"] = q["gamma0"];
  j["validity"] = report.to_json();
  return j;
}

LocalizedSemiring localize(const GammaSemiring& t, Mask s) {
  if (s == 0 || (s & ~full_mask(t.n)))
    throw PreconditionError("multiplicative system out of range");
  if (!is_mult_closed(t, s))
    throw PreconditionError("set is not multiplicatively closed");
  auto e_opt = effective_identity(t);
  if (!e_opt)
    throw PreconditionError("model has no identity idempotent; fractions need one");
  int e = *e_opt;
  if (!mask_has(s, e))
    throw PreconditionError("identity idempotent " + std::to_string(e) +
                            " is not in the multiplicative system");

  std::vector<std::pair<int, int>> pairs;
  std::vector<int> pair_index(static_cast<std::size_t>(t.n) * t.n, -1);
  for (int a = 0; a < t.n; ++a)
    for (int ss = 0; ss < t.n; ++ss)
      if (mask_has(s, ss)) {
        pair_index[a * t.n + ss] = static_cast<int>(pairs.size());
        pairs.emplace_back(a, ss);
      }
  const int np = static_cast<int>(pairs.size());

  // a/s ~ b/u  iff  {w,a,u}_g = {w,b,s}_g for some w in S and some g
  auto related = [&](int i, int j) {
    auto [a, si] = pairs[i];
    auto [b, sj] = pairs[j];
    for (int w = 0; w < t.n; ++w) {
      if (!mask_has(s, w)) continue;
      for (int g = 0; g < t.m; ++g)
        if (t.prod(g, w, a, sj) == t.prod(g, w, b, si)) return true;
    }
    return false;
  };

  std::vector<std::vector<bool>> rel(np, std::vector<bool>(np, false));
  for (int i = 0; i < np; ++i)
    for (int j = i; j < np; ++j) rel[i][j] = rel[j][i] = related(i, j);

  LocalizationReport report;
  for (int i = 0; i < np && report.relation_was_transitive; ++i)
    for (int j = 0; j < np && report.relation_was_transitive; ++j) {
      if (!rel[i][j]) continue;
      for (int k = 0; k < np; ++k)
        if (rel[j][k] && !rel[i][k]) {
          report.relation_was_transitive = false;
          break;
        }
    }
  report.closure_added_pairs = !report.relation_was_transitive;

  std::vector<int> root(np);
  std::iota(root.begin(), root.end(), 0);
  std::function<int(int)> find = [&](int x) {
    while (root[x] != x) x = root[x] = root[root[x]];
    return x;
  };
  for (int i = 0; i < np; ++i)
    for (int j = i + 1; j < np; ++j)
      if (rel[i][j]) {
        int a = find(i), b = find(j);
        if (a != b) root[std::max(a, b)] = std::min(a, b);
      }

  // classes ordered by least pair; pairs are lex-sorted, so the class of
  // (0, min S) comes first and is the zero class
  std::map<int, int> class_id;
  std::vector<std::vector<std::pair<int, int>>> classes;
  for (int i = 0; i < np; ++i) {
    int r = find(i);
    auto it = class_id.find(r);
    if (it == class_id.end()) {
      class_id[r] = static_cast<int>(classes.size());
      classes.emplace_back();
      it = class_id.find(r);
    }
    classes[it->second].push_back(pairs[i]);
  }
  const int nc = static_cast<int>(classes.size());

  auto cls = [&](int a, int ss) { return class_id.at(find(pair_index[a * t.n + ss])); };

  LocalizedSemiring loc;
  loc.system = s;
  loc.glue = e;
  loc.classes = classes;
  loc.quotient.n = nc;
  loc.quotient.m = t.m;
  loc.quotient.alloc();
  loc.quotient.gmul = t.gmul;
  loc.quotient.gamma0 = t.gamma0;

  const int g0 = t.gamma0;
  auto add_pair = [&](int a, int si, int b, int sj) {
    int num = t.plus(t.prod(g0, a, sj, e), t.prod(g0, b, si, e));
    int den = t.prod(g0, si, sj, e);
    return std::make_pair(num, den);
  };

  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      auto [a, si] = classes[i][0];
      auto [b, sj] = classes[j][0];
      auto [num, den] = add_pair(a, si, b, sj);
      loc.quotient.add[i * nc + j] = cls(num, den);
    }
  // numerators carry the gamma grading; denominators are combined with the
  // gamma0 glue, like fraction addition, so the canonical map stays a
  // morphism
  for (int g = 0; g < t.m; ++g)
    for (int i = 0; i < nc; ++i)
      for (int j = 0; j < nc; ++j)
        for (int k = 0; k < nc; ++k) {
          auto [a, si] = classes[i][0];
          auto [b, sj] = classes[j][0];
          auto [c, sk] = classes[k][0];
          loc.quotient
              .tern[((static_cast<std::size_t>(g) * nc + i) * nc + j) * nc +
                    k] = cls(t.prod(g, a, b, c), t.prod(g0, si, sj, sk));
        }

  // well-definedness: every representative choice must land in the class
  // the representative tables predict
  for (int i = 0; i < np; ++i)
    for (int j = 0; j < np; ++j) {
      auto [a, si] = pairs[i];
      auto [b, sj] = pairs[j];
      auto [num, den] = add_pair(a, si, b, sj);
      int want = loc.quotient.plus(cls(a, si), cls(b, sj));
      if (cls(num, den) != want) {
        ojson d;
        d["op"] = "add";
        d["lhs"] = ojson::array({a, si});
        d["rhs"] = ojson::array({b, sj});
        throw InvalidQuotientError("fraction addition not well defined", d);
      }
    }
  for (int g = 0; g < t.m; ++g)
    for (int i = 0; i < np; ++i)
      for (int j = 0; j < np; ++j)
        for (int k = 0; k < np; ++k) {
          auto [a, si] = pairs[i];
          auto [b, sj] = pairs[j];
          auto [c, sk] = pairs[k];
          int got = cls(t.prod(g, a, b, c), t.prod(g0, si, sj, sk));
          int want = loc.quotient.prod(g, cls(a, si), cls(b, sj), cls(c, sk));
          if (got != want) {
            ojson d;
            d["op"] = "tern";
            d["gamma"] = g;
            d["args"] = ojson::array({ojson::array({a, si}),
                                      ojson::array({b, sj}),
                                      ojson::array({c, sk})});
            throw InvalidQuotientError("fraction product not well defined", d);
          }
        }

  loc.phi.resize(t.n);
  for (int a = 0; a < t.n; ++a) loc.phi[a] = cls(a, e);
  loc.quotient.e = cls(e, e);
  loc.report = report;
  loc.report.axioms_pass = check_axioms(loc.quotient).passed();
  return loc;
}

StalkData stalk_at(const GammaSemiring& t, const SpectrumData& spec,
                   int prime_index) {
  if (prime_index < 0 || prime_index >= spec.prime_count())
    throw PreconditionError("prime index out of range");
  Mask p = spec.primes[prime_index];
  StalkData st;
  st.loc = localize(t, full_mask(t.n) & ~p);
  for (std::size_t c = 0; c < st.loc.classes.size(); ++c)
    for (const auto& pr : st.loc.classes[c])
      if (mask_has(p, pr.first)) {
        st.maximal_ideal |= mask_bit(static_cast<int>(c));
        break;
      }
  Mask units = units_of(st.loc.quotient);
  Mask nonunits = full_mask(st.loc.quotient.n) & ~units;
  st.local_ok = nonunits == st.maximal_ideal;
  return st;
}

LocalizedSemiring sections_over(const GammaSemiring& t,
                                const SpectrumData& spec, Mask prime_set) {
  Mask avoid = 0;
  for (int p = 0; p < spec.prime_count(); ++p)
    if (mask_has(prime_set, p)) avoid |= spec.primes[p];
  return localize(t, full_mask(t.n) & ~avoid);
}

std::vector<int> restriction_map(const LocalizedSemiring& big,
                                 const LocalizedSemiring& small) {
  if (big.system & ~small.system)
    throw PreconditionError(
        "restriction requires the finer system to contain the coarser one");
  std::vector<int> r(big.classes.size());
  for (std::size_t c = 0; c < big.classes.size(); ++c)
    r[c] = small.class_of(big.classes[c][0].first, big.classes[c][0].second);
  return r;
}

std::vector<Mask> canonical_cover_sets(const SpectrumData& spec) {
  std::vector<Mask> sets;
  Mask covered = 0;
  for (std::size_t i = 0; i < spec.primes.size(); ++i) {
    sets.push_back(spec.d_sets[spec.prime_ideal_index[i]]);
    covered |= sets.back();
  }
  if (covered != spec.all_primes_mask() && spec.prime_count() > 0)
    sets.push_back(spec.all_primes_mask());
  return sets;
}

EqualizerResult equalizer_over(const GammaSemiring& t,
                               const SpectrumData& spec,
                               const std::vector<Mask>& prime_sets,
                               const GammaSemiring* compare) {
  EqualizerResult res;
  res.cover_sets = prime_sets;
  const int k = static_cast<int>(prime_sets.size());
  for (Mask u : prime_sets) res.sections.push_back(sections_over(t, spec, u));

  // restriction of each leg into each pairwise overlap
  std::vector<std::vector<std::vector<int>>> ra(k), rb(k);
  std::map<std::pair<int, int>, LocalizedSemiring> overlaps;
  for (int i = 0; i < k; ++i) {
    ra[i].resize(k);
    rb[i].resize(k);
  }
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      LocalizedSemiring ov =
          sections_over(t, spec, prime_sets[i] & prime_sets[j]);
      ra[i][j] = restriction_map(res.sections[i], ov);
      rb[i][j] = restriction_map(res.sections[j], ov);
    }

  long long total = 1;
  for (const auto& sec : res.sections) {
    total *= sec.quotient.n;
    if (total > 2000000)
      throw BudgetError("equalizer family enumeration too large (" +
                        std::to_string(total) + " candidates)");
  }

  std::vector<int> fam(k, 0);
  for (long long it = 0; it < total; ++it) {
    long long v = it;
    for (int i = k - 1; i >= 0; --i) {
      fam[i] = static_cast<int>(v % res.sections[i].quotient.n);
      v /= res.sections[i].quotient.n;
    }
    bool ok = true;
    for (int i = 0; i < k && ok; ++i)
      for (int j = i + 1; j < k && ok; ++j)
        ok = ra[i][j][fam[i]] == rb[i][j][fam[j]];
    if (ok) res.families.push_back(fam);
  }

  const int nf = static_cast<int>(res.families.size());
  std::map<std::vector<int>, int> fam_id;
  for (int i = 0; i < nf; ++i) fam_id[res.families[i]] = i;

  res.glued.n = nf;
  res.glued.m = t.m;
  res.glued.alloc();
  res.glued.gmul = t.gmul;
  res.glued.gamma0 = t.gamma0;
  auto lookup = [&](const std::vector<int>& f) {
    auto it = fam_id.find(f);
    if (it == fam_id.end()) {
      ojson d;
      d["family"] = f;
      throw InvalidQuotientError(
          "componentwise operation left the compatible families", d);
    }
    return it->second;
  };
  std::vector<int> tmp(k);
  for (int i = 0; i < nf; ++i)
    for (int j = 0; j < nf; ++j) {
      for (int l = 0; l < k; ++l)
        tmp[l] = res.sections[l].quotient.plus(res.families[i][l],
                                               res.families[j][l]);
      res.glued.add[i * nf + j] = lookup(tmp);
    }
  for (int g = 0; g < t.m; ++g)
    for (int i = 0; i < nf; ++i)
      for (int j = 0; j < nf; ++j)
        for (int l2 = 0; l2 < nf; ++l2) {
          for (int l = 0; l < k; ++l)
            tmp[l] = res.sections[l].quotient.prod(
                g, res.families[i][l], res.families[j][l], res.families[l2][l]);
          res.glued.tern[((static_cast<std::size_t>(g) * nf + i) * nf + j) *
                             nf +
                         l2] = lookup(tmp);
        }
  auto ids = find_identity_idempotents(res.glued);
  res.glued.e = ids.empty() ? std::nullopt : std::optional<int>(ids.front());
  if (compare) res.iso_to_model = is_isomorphic(res.glued, *compare);
  return res;
}

EqualizerResult global_sections(const GammaSemiring& t,
                                const SpectrumData& spec) {
  return equalizer_over(t, spec, canonical_cover_sets(spec), &t);
}

GluingReport check_sheaf_gluing(const GammaSemiring& t,
                                const SpectrumData& spec, Mask target_ideal,
                                const std::vector<Mask>& cover) {
  Mask target_d = d_set_of(spec, target_ideal);
  Mask covered = 0;
  for (Mask c : cover) covered |= d_set_of(spec, c);
  if (covered != target_d)
    throw PreconditionError("cover union does not equal the target open");

  const int k = static_cast<int>(cover.size());
  std::vector<Mask> sets;
  for (Mask c : cover) sets.push_back(d_set_of(spec, c));
  std::vector<LocalizedSemiring> secs;
  for (Mask u : sets) secs.push_back(sections_over(t, spec, u));
  LocalizedSemiring target_sec = sections_over(t, spec, target_d);

  std::vector<std::vector<int>> to_leg(k);
  for (int i = 0; i < k; ++i)
    to_leg[i] = restriction_map(target_sec, secs[i]);
  std::vector<std::vector<std::vector<int>>> ra(k, std::vector<std::vector<int>>(k)),
      rb(k, std::vector<std::vector<int>>(k));
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      LocalizedSemiring ov = sections_over(t, spec, sets[i] & sets[j]);
      ra[i][j] = restriction_map(secs[i], ov);
      rb[i][j] = restriction_map(secs[j], ov);
    }

  GluingReport rep;
  long long total = 1;
  for (const auto& sec : secs) {
    total *= sec.quotient.n;
    if (total > 2000000)
      throw BudgetError("gluing family enumeration too large");
  }
  std::vector<int> fam(k);
  rep.pass = true;
  for (long long it = 0; it < total; ++it) {
    long long v = it;
    for (int i = k - 1; i >= 0; --i) {
      fam[i] = static_cast<int>(v % secs[i].quotient.n);
      v /= secs[i].quotient.n;
    }
    bool compat = true;
    for (int i = 0; i < k && compat; ++i)
      for (int j = i + 1; j < k && compat; ++j)
        compat = ra[i][j][fam[i]] == rb[i][j][fam[j]];
    if (!compat) continue;
    ++rep.families_checked;
    int preimages = 0;
    for (int sidx = 0; sidx < target_sec.quotient.n; ++sidx) {
      bool hit = true;
      for (int i = 0; i < k && hit; ++i) hit = to_leg[i][sidx] == fam[i];
      if (hit) ++preimages;
    }
    if (preimages == 1) {
      ++rep.glued;
    } else {
      rep.pass = false;
      if (!rep.witness_family) {
        rep.witness_family = fam;
        rep.failure = preimages == 0 ? "no-preimage" : "multiple-preimages";
      }
    }
  }
  return rep;
}

Mask units_of(const GammaSemiring& t) {
  Mask units = 0;
  for (int u = 0; u < t.n; ++u) {
    bool unit = false;
    for (int v = 0; v < t.n && !unit; ++v) {
      bool ok = true;
      for (int x = 0; x < t.n && ok; ++x)
        ok = t.prod(t.gamma0, u, v, x) == x;
      unit = ok;
    }
    if (unit) units |= mask_bit(u);
  }
  return units;
}

UniversalPropertyReport check_universal_property(const GammaSemiring& t,
                                                 Mask s,
                                                 const GammaSemiring& target,
                                                 const Morphism& f,
                                                 long long budget) {
  UniversalPropertyReport rep;
  if (!check_morphism(t, target, f)) {
    rep.precondition_failure = "f is not a morphism";
    return rep;
  }
  Mask target_units = units_of(target);
  for (int a = 0; a < t.n; ++a)
    if (mask_has(s, a) && !mask_has(target_units, f.carrier_map[a])) {
      rep.precondition_failure = "f does not send the system to units";
      return rep;
    }
  rep.precondition_ok = true;

  LocalizedSemiring loc = localize(t, s);
  const int nl = loc.quotient.n;
  long long total = 1;
  for (int i = 0; i < nl; ++i) {
    total *= target.n;
    if (total > budget)
      throw BudgetError("universal property search needs " +
                        std::to_string(target.n) + "^" + std::to_string(nl) +
                        " candidate maps, over budget " +
                        std::to_string(budget));
  }
  rep.candidates = total;

  std::vector<int> map(nl);
  for (long long it = 0; it < total; ++it) {
    long long v = it;
    for (int i = nl - 1; i >= 0; --i) {
      map[i] = static_cast<int>(v % target.n);
      v /= target.n;
    }
    Morphism cand{map, f.param_map};
    if (!check_morphism(loc.quotient, target, cand)) continue;
    bool factors = true;
    for (int a = 0; a < t.n && factors; ++a)
      factors = map[loc.phi[a]] == f.carrier_map[a];
    if (!factors) continue;
    ++rep.factorizations;
    if (!rep.factor_map) rep.factor_map = map;
  }
  rep.holds = rep.factorizations == 1;
  return rep;
}

bool is_primitive(const GammaSemiring& t, const SpectrumData& spec,
                  int prime_index, Absorption mode) {
  StalkData st = stalk_at(t, spec, prime_index);
  auto ideals = all_proper_ideals(st.loc.quotient, mode);
  for (Mask i : ideals)
    if (i != mask_bit(0)) return false;
  return true;
}

SpectralMapReport spectral_pullback(const GammaSemiring& src,
                                    const GammaSemiring& dst,
                                    const Morphism& f, Absorption mode) {
  if (!check_morphism(src, dst, f))
    throw PreconditionError("spectral pullback requires a morphism");
  SpectrumData sspec = spectrum(src, mode);
  SpectrumData dspec = spectrum(dst, mode);
  SpectralMapReport rep;
  rep.image.assign(dspec.prime_count(), -1);
  for (int q = 0; q < dspec.prime_count(); ++q) {
    Mask pre = 0;
    for (int a = 0; a < src.n; ++a)
      if (mask_has(dspec.primes[q], f.carrier_map[a])) pre |= mask_bit(a);
    IdealViolation why;
    bool ok = pre != full_mask(src.n) && is_ideal(src, pre, mode, &why) &&
              prime_condition(src, pre);
    if (!ok) {
      rep.all_preimages_prime = false;
      rep.counterexamples.push_back(
          {"preimage-not-prime", {q}, {}, static_cast<int>(pre), -1});
      continue;
    }
    for (int p = 0; p < sspec.prime_count(); ++p)
      if (sspec.primes[p] == pre) rep.image[q] = p;
  }
  if (!rep.all_preimages_prime) {
    rep.continuous = false;
    return rep;
  }
  // extensional continuity: the preimage of every basic open of the source
  // spectrum is the basic open of the pushed-forward ideal
  std::vector<Mask> checks = sspec.proper_ideals;
  checks.push_back(full_mask(src.n));
  for (Mask ideal : checks) {
    Mask lhs = 0;
    for (int q = 0; q < dspec.prime_count(); ++q)
      if (ideal & ~sspec.primes[rep.image[q]]) lhs |= mask_bit(q);
    Mask img = 0;
    for (int a = 0; a < src.n; ++a)
      if (mask_has(ideal, a)) img |= mask_bit(f.carrier_map[a]);
    Mask rhs = d_set_of(dspec, ideal_closure(dst, img, mode));
    if (lhs != rhs) {
      rep.continuous = false;
      rep.counterexamples.push_back({"discontinuous-open",
                                     {},
                                     {},
                                     static_cast<int>(ideal),
                                     -1});
    }
  }
  return rep;
}

}  // namespace tgs
