#pragma once

#include <map>
#include <string>
#include <vector>

#include "tgs/ideals.hpp"
#include "tgs/localization.hpp"
#include "tgs/rational.hpp"

namespace tgs {

struct WeightedSpectrum {
  std::string scheme;        // "uniform" | "frequency" | "file"
  std::vector<Rat> weights;  // one per prime, each in [0, 1]
  ojson to_json() const;
};

// uniform: all 1. frequency: share of proper ideals whose basic open
// contains the prime. file: user-supplied map prime index -> "p/q".
WeightedSpectrum assign_weights(const SpectrumData& spec,
                                const std::string& scheme,
                                const std::map<int, Rat>* file_weights = nullptr);

// A grade per basic open, keyed by the ideal (proper ideals plus the
// improper one, which opens the whole spectrum).
struct FuzzyOpen {
  std::map<Mask, Rat> values;
};

// Max-extension of per-point grades to every basic open.
FuzzyOpen fuzzy_open_from_points(const GammaSemiring& t,
                                 const SpectrumData& spec,
                                 const std::vector<Rat>& point_values);

struct FuzzyOpenReport {
  bool pass = true;
  // one line per violated rule with a concrete witness
  std::vector<std::string> violations;
};

// Checks the grade axioms over the finite ideal lattice: empty/whole
// normalization, the max rule on unions, the min rule on intersections of
// overlapping opens, and monotonicity along ideal inclusion.
FuzzyOpenReport validate_fuzzy_open(const GammaSemiring& t,
                                    const SpectrumData& spec,
                                    const FuzzyOpen& mu);

struct WeightedCover {
  Mask target = 0;  // ideal mask (improper allowed)
  std::vector<std::pair<Mask, Rat>> members;
};

struct CoverReport {
  bool valid = false;
  bool union_ok = false;
  bool sum_ok = false;
  Rat weight_sum;
  Mask missing = 0;  // primes of the target open not covered
  Mask extra = 0;    // covered primes outside the target open
};

CoverReport is_weighted_covering(const SpectrumData& spec,
                                 const WeightedCover& cover);

// Primes of D(I) whose weight clears the threshold.
Mask fuzzy_closure(const SpectrumData& spec, Mask ideal, const Rat& theta,
                   const WeightedSpectrum& w);

struct CrispReductionReport {
  bool pass = true;
  std::vector<std::string> mismatches;
};

// With unit weights every closure must collapse to the crisp basic open and
// every weighted stalk to the crisp stalk.
CrispReductionReport crisp_reduction_check(const GammaSemiring& t,
                                           const SpectrumData& spec);

struct WeightedStalk {
  bool visible = true;  // false when the point's weight is zero
  Rat confidence;
  LocalizedSemiring stalk;  // one-element semiring when invisible
};

WeightedStalk weighted_stalk(const GammaSemiring& t, const SpectrumData& spec,
                             int prime_index, const WeightedSpectrum& w);

}  // namespace tgs
