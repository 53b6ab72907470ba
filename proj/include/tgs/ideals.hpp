#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tgs/model.hpp"

namespace tgs {

// Ideal absorption rule. Literal: a product lands in the ideal when two of
// its arguments do. Strict: one argument suffices, any position.
enum class Absorption { Literal, Strict };

inline std::string absorption_str(Absorption a) {
  return a == Absorption::Literal ? "literal" : "strict";
}
inline Absorption absorption_from_str(const std::string& s) {
  if (s == "literal") return Absorption::Literal;
  if (s == "strict") return Absorption::Strict;
  throw StructuralError("unknown absorption mode: " + s);
}

struct IdealViolation {
  std::string kind;  // "zero" | "add" | "absorption"
  int gamma = -1;
  std::vector<int> elems;
  int value = 0;  // the escaping element
};

bool is_ideal(const GammaSemiring& t, Mask ideal, Absorption mode,
              IdealViolation* why = nullptr);

// Least ideal containing the generators and 0 under the active rule.
Mask ideal_closure(const GammaSemiring& t, Mask generators, Absorption mode);

// All strict-subset ideals, ordered by bitset value.
std::vector<Mask> all_proper_ideals(const GammaSemiring& t, Absorption mode);

// The primality condition alone (no ideal precondition).
bool prime_condition(const GammaSemiring& t, Mask ideal,
                     AxiomWitness* witness = nullptr);

// true iff every product in the ideal has an argument in it; precondition:
// `ideal` is a proper ideal under `mode`.
bool is_prime(const GammaSemiring& t, Mask ideal, Absorption mode,
              AxiomWitness* witness = nullptr);

// Elements with some iterated ternary self-power in the ideal.
Mask radical(const GammaSemiring& t, Mask ideal);

bool is_semiprime(const GammaSemiring& t, Mask ideal);

struct SpectrumData {
  Absorption mode = Absorption::Literal;
  std::vector<Mask> proper_ideals;        // sorted by bitset value
  std::vector<Mask> primes;               // subsequence of proper_ideals
  std::vector<int> prime_ideal_index;     // position of each prime above
  std::vector<Mask> d_sets;               // per proper ideal: prime-index set
  std::vector<Mask> v_sets;               // per proper ideal: prime-index set
  std::vector<std::vector<int>> incidence;        // over proper ideals
  std::vector<std::vector<int>> incidence_primes; // restricted to primes

  int prime_count() const { return static_cast<int>(primes.size()); }
  Mask all_primes_mask() const { return full_mask(prime_count()); }
  ojson to_json() const;
};

SpectrumData spectrum(const GammaSemiring& t, Absorption mode);

// D(I) for an arbitrary (possibly improper) additively/absorption-closed
// subset: the primes that do not contain it.
Mask d_set_of(const SpectrumData& spec, Mask ideal);
Mask v_set_of(const SpectrumData& spec, Mask ideal);

// Closure of all products with one argument from each ideal.
Mask ideal_product(const GammaSemiring& t, Mask a, Mask b, Absorption mode);

struct Congruence {
  std::vector<int> class_of;  // element -> smallest member of its class
  int class_count() const;
  std::vector<std::vector<int>> blocks() const;
  bool same(int a, int b) const { return class_of[a] == class_of[b]; }
};

// Smallest congruence relating a ~ b whenever a+i = b+j for some i,j in the
// ideal; the result is verified compatible with all operations.
Congruence bourne_congruence(const GammaSemiring& t, Mask ideal);

bool congruence_compatible(const GammaSemiring& t, const Congruence& c);

}  // namespace tgs
