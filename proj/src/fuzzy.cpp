#include "tgs/fuzzy.hpp"

#include <algorithm>

namespace tgs {

ojson WeightedSpectrum::to_json() const {
  ojson j;
  j["scheme"] = scheme;
  ojson w = ojson::array();
  for (const auto& r : weights) w.push_back(r.str());
  j["weights"] = std::move(w);
  return j;
}

WeightedSpectrum assign_weights(const SpectrumData& spec,
                                const std::string& scheme,
                                const std::map<int, Rat>* file_weights) {
  WeightedSpectrum w;
  w.scheme = scheme;
  const int np = spec.prime_count();
  if (scheme == "uniform") {
    w.weights.assign(np, Rat::one());
  } else if (scheme == "frequency") {
    long long total = static_cast<long long>(spec.proper_ideals.size());
    for (int p = 0; p < np; ++p) {
      long long hits = 0;
      for (Mask d : spec.d_sets)
        if (mask_has(d, p)) ++hits;
      w.weights.push_back(total == 0 ? Rat::one() : Rat(hits, total));
    }
  } else if (scheme == "file") {
    if (!file_weights)
      throw PreconditionError("file weight scheme requires a weights map");
    for (int p = 0; p < np; ++p) {
      auto it = file_weights->find(p);
      if (it == file_weights->end())
        throw StructuralError("weights file is missing prime " +
                              std::to_string(p));
      if (!it->second.in_unit_interval())
        throw StructuralError("weight for prime " + std::to_string(p) +
                              " outside [0,1]: " + it->second.str());
      w.weights.push_back(it->second);
    }
  } else {
    throw StructuralError("unknown weight scheme: " + scheme);
  }
  return w;
}

FuzzyOpen fuzzy_open_from_points(const GammaSemiring& t,
                                 const SpectrumData& spec,
                                 const std::vector<Rat>& point_values) {
  if (static_cast<int>(point_values.size()) != spec.prime_count())
    throw PreconditionError("one grade per prime required");
  FuzzyOpen mu;
  std::vector<Mask> ideals = spec.proper_ideals;
  ideals.push_back(full_mask(t.n));
  for (Mask ideal : ideals) {
    Mask d = d_set_of(spec, ideal);
    Rat v = Rat::zero();
    for (int p = 0; p < spec.prime_count(); ++p)
      if (mask_has(d, p)) v = std::max(v, point_values[p]);
    mu.values[ideal] = v;
  }
  return mu;
}

FuzzyOpenReport validate_fuzzy_open(const GammaSemiring& t,
                                    const SpectrumData& spec,
                                    const FuzzyOpen& mu) {
  FuzzyOpenReport rep;
  auto fail = [&](const std::string& s) {
    rep.pass = false;
    rep.violations.push_back(s);
  };
  std::vector<Mask> ideals = spec.proper_ideals;
  Mask improper = full_mask(t.n);
  ideals.push_back(improper);
  for (Mask ideal : ideals)
    if (!mu.values.count(ideal)) {
      fail("no grade for ideal " + mask_to_hex(ideal));
      return rep;
    }
  for (const auto& [ideal, v] : mu.values)
    if (!v.in_unit_interval())
      fail("grade for ideal " + mask_to_hex(ideal) + " outside [0,1]");

  // grades must be a function of the open, not the presenting ideal
  std::map<Mask, Rat> by_open;
  for (Mask ideal : ideals) {
    Mask d = d_set_of(spec, ideal);
    Rat v = mu.values.at(ideal);
    auto it = by_open.find(d);
    if (it == by_open.end())
      by_open[d] = v;
    else if (it->second != v)
      fail("ideals with the same basic open carry different grades (open " +
           mask_to_hex(d) + ")");
  }
  if (!rep.pass) return rep;

  Mask whole = spec.all_primes_mask();
  if (spec.prime_count() > 0) {
    if (by_open.count(0) && by_open.at(0) != Rat::zero())
      fail("grade of the empty open is " + by_open.at(0).str() + ", not 0");
    if (by_open.count(whole) && by_open.at(whole) != Rat::one())
      fail("grade of the whole spectrum is " + by_open.at(whole).str() +
           ", not 1");
  }
  for (const auto& [u, vu] : by_open)
    for (const auto& [v, vv] : by_open) {
      auto uni = by_open.find(u | v);
      if (uni != by_open.end()) {
        Rat want = std::max(vu, vv);
        if (uni->second != want)
          fail("max rule fails on opens " + mask_to_hex(u) + " and " +
               mask_to_hex(v));
      }
      if ((u & v) != 0) {
        auto inter = by_open.find(u & v);
        if (inter != by_open.end()) {
          Rat want = std::min(vu, vv);
          if (inter->second != want)
            fail("min rule fails on opens " + mask_to_hex(u) + " and " +
                 mask_to_hex(v));
        }
      }
    }
  // monotone along ideal inclusion (smaller ideal, smaller open)
  for (Mask i : ideals)
    for (Mask j : ideals)
      if ((i & ~j) == 0 && mu.values.at(i) > mu.values.at(j))
        fail("grade along inclusion " + mask_to_hex(i) + " <= " +
             mask_to_hex(j) + " increases downward: " +
             mu.values.at(i).str() + " > " + mu.values.at(j).str());
  return rep;
}

CoverReport is_weighted_covering(const SpectrumData& spec,
                                 const WeightedCover& cover) {
  CoverReport rep;
  Mask target_d = d_set_of(spec, cover.target);
  Mask covered = 0;
  Rat sum = Rat::zero();
  for (const auto& [ideal, w] : cover.members) {
    covered |= d_set_of(spec, ideal);
    sum = sum + w;
  }
  rep.weight_sum = sum;
  rep.missing = target_d & ~covered;
  rep.extra = covered & ~target_d;
  rep.union_ok = rep.missing == 0 && rep.extra == 0;
  rep.sum_ok = sum >= Rat::one();
  rep.valid = rep.union_ok && rep.sum_ok;
  return rep;
}

Mask fuzzy_closure(const SpectrumData& spec, Mask ideal, const Rat& theta,
                   const WeightedSpectrum& w) {
  if (!theta.in_unit_interval())
    throw PreconditionError("threshold outside [0,1]: " + theta.str());
  Mask d = d_set_of(spec, ideal);
  Mask out = 0;
  for (int p = 0; p < spec.prime_count(); ++p)
    if (mask_has(d, p) && w.weights[p] >= theta) out |= mask_bit(p);
  return out;
}

WeightedStalk weighted_stalk(const GammaSemiring& t, const SpectrumData& spec,
                             int prime_index, const WeightedSpectrum& w) {
  WeightedStalk ws;
  ws.confidence = w.weights[prime_index];
  if (ws.confidence == Rat::zero()) {
    ws.visible = false;
    ws.stalk = sections_over(t, spec, 0);  // one-element semiring
    return ws;
  }
  ws.stalk = stalk_at(t, spec, prime_index).loc;
  return ws;
}

CrispReductionReport crisp_reduction_check(const GammaSemiring& t,
                                           const SpectrumData& spec) {
  CrispReductionReport rep;
  WeightedSpectrum unit = assign_weights(spec, "uniform");
  const Rat thetas[3] = {Rat::zero(), Rat(1, 2), Rat::one()};
  for (std::size_t i = 0; i < spec.proper_ideals.size(); ++i)
    for (const Rat& th : thetas) {
      Mask got = fuzzy_closure(spec, spec.proper_ideals[i], th, unit);
      if (got != spec.d_sets[i]) {
        rep.pass = false;
        rep.mismatches.push_back("closure of ideal " +
                                 mask_to_hex(spec.proper_ideals[i]) +
                                 " at theta " + th.str());
      }
    }
  if (effective_identity(t)) {
    for (int p = 0; p < spec.prime_count(); ++p) {
      WeightedStalk ws = weighted_stalk(t, spec, p, unit);
      StalkData crisp = stalk_at(t, spec, p);
      if (!ws.visible || ws.stalk.classes != crisp.loc.classes ||
          !is_isomorphic(ws.stalk.quotient, crisp.loc.quotient)) {
        rep.pass = false;
        rep.mismatches.push_back("weighted stalk at prime " +
                                 std::to_string(p) +
                                 " differs from the crisp stalk");
      }
    }
  }
  return rep;
}

}  // namespace tgs
