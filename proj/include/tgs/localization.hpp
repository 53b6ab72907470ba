#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tgs/ideals.hpp"
#include "tgs/model.hpp"

namespace tgs {

bool is_mult_closed(const GammaSemiring& t, Mask s);

// Smallest multiplicatively closed superset of the seed.
Mask mult_closure(const GammaSemiring& t, Mask seed);

struct LocalizationReport {
  bool relation_was_transitive = true;  // before closure
  bool closure_added_pairs = false;
  bool well_defined = true;
  bool axioms_pass = true;
  ojson to_json() const {
    ojson j;
    j["relation_was_transitive"] = relation_was_transitive;
    j["closure_added_pairs"] = closure_added_pairs;
    j["well_defined"] = well_defined;
    j["axioms_pass"] = axioms_pass;
    return j;
  }
};

// Fraction semiring over a multiplicative system. The quotient is a plain
// GammaSemiring whose index 0 is the class of 0; `classes` lists the (a, s)
// pairs of each class and `phi` is the canonical map a -> class of a/e.
struct LocalizedSemiring {
  GammaSemiring quotient;
  Mask system = 0;
  int glue = 0;  // the identity idempotent used as common-denominator glue
  std::vector<std::vector<std::pair<int, int>>> classes;
  std::vector<int> phi;
  LocalizationReport report;

  int class_of(int a, int s) const;
  ojson to_json() const;
};

// Builds the fraction semiring. Throws PreconditionError when the model has
// no identity idempotent in S or S is not multiplicatively closed; throws
// InvalidQuotientError (with the violating representatives) when the induced
// operations are not well defined on classes.
LocalizedSemiring localize(const GammaSemiring& t, Mask s);

struct StalkData {
  LocalizedSemiring loc;
  Mask maximal_ideal = 0;     // classes of a/s with a in the prime
  bool local_ok = false;      // non-units coincide with the maximal ideal
};

StalkData stalk_at(const GammaSemiring& t, const SpectrumData& spec,
                   int prime_index);

// Sections over an arbitrary set of primes (a union of basic opens,
// evaluated extensionally): localization at the elements invertible at every
// point. The empty set yields the one-element semiring.
LocalizedSemiring sections_over(const GammaSemiring& t,
                                const SpectrumData& spec, Mask prime_set);

// Class map from sections over `from` to sections over `to`, to <= from.
std::vector<int> restriction_map(const LocalizedSemiring& big,
                                 const LocalizedSemiring& small);

struct GluingReport {
  bool pass = false;
  long long families_checked = 0;
  long long glued = 0;
  // a compatible family with no / multiple preimages, if any
  std::optional<std::vector<int>> witness_family;
  std::string failure;  // "", "no-preimage", "multiple-preimages"
};

// Exhaustively verifies that compatible families over the cover glue to
// unique sections over D(I). `cover` are ideal masks (improper allowed).
GluingReport check_sheaf_gluing(const GammaSemiring& t,
                                const SpectrumData& spec, Mask target_ideal,
                                const std::vector<Mask>& cover);

struct EqualizerResult {
  GammaSemiring glued;                  // semiring of compatible families
  std::vector<Mask> cover_sets;         // prime sets used
  std::vector<LocalizedSemiring> sections;
  std::vector<std::vector<int>> families;  // per glued element, class per leg
  std::optional<Morphism> iso_to_model;    // comparison, never assumed
};

// Compatible families over the prime-indexed canonical cover, compared
// against the model itself.
EqualizerResult global_sections(const GammaSemiring& t,
                                const SpectrumData& spec);

// Equalizer over an arbitrary family of prime sets covering `covered`.
EqualizerResult equalizer_over(const GammaSemiring& t,
                               const SpectrumData& spec,
                               const std::vector<Mask>& prime_sets,
                               const GammaSemiring* compare);

// The canonical cover: D(p_i) for every prime, plus the whole space when
// their union is proper.
std::vector<Mask> canonical_cover_sets(const SpectrumData& spec);

Mask units_of(const GammaSemiring& t);

struct UniversalPropertyReport {
  bool precondition_ok = false;
  std::string precondition_failure;
  long long candidates = 0;
  int factorizations = 0;  // expected exactly 1
  bool holds = false;
  std::optional<std::vector<int>> factor_map;
};

// Brute-force audit of the localization universal property for a morphism
// f : t -> target sending S to units of the target.
UniversalPropertyReport check_universal_property(const GammaSemiring& t,
                                                 Mask s,
                                                 const GammaSemiring& target,
                                                 const Morphism& f,
                                                 long long budget = 4000000);

// true iff the stalk has no proper ideal other than the zero ideal.
bool is_primitive(const GammaSemiring& t, const SpectrumData& spec,
                  int prime_index, Absorption mode);

struct SpectralMapReport {
  std::vector<int> image;  // target prime -> source prime index, -1 if bad
  bool all_preimages_prime = true;
  bool continuous = true;
  std::vector<AxiomWitness> counterexamples;
};

// For f : src -> dst, the induced map Spec(dst) -> Spec(src), q -> f^{-1}(q),
// with extensional continuity checks.
SpectralMapReport spectral_pullback(const GammaSemiring& src,
                                    const GammaSemiring& dst,
                                    const Morphism& f, Absorption mode);

}  // namespace tgs
