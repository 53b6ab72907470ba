#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tgs/ideals.hpp"
#include "tgs/localization.hpp"
#include "tgs/model.hpp"

namespace tgs {

// A finite module over a GammaSemiring: additive monoid plus one ternary
// action table per parameter, shaped m x nT x nT x nM.
struct GammaModule {
  int n = 0;               // module carrier size
  std::vector<int> add;    // n*n
  std::vector<int> action; // m*nT*nT*n
  int nt = 0;              // carrier size of the base semiring
  int m = 0;               // parameter count of the base semiring

  int plus(int a, int b) const { return add[a * n + b]; }
  int act(int g, int a, int b, int x) const {
    return action[((static_cast<std::size_t>(g) * nt + a) * nt + b) * n + x];
  }
  void alloc() {
    add.assign(static_cast<std::size_t>(n) * n, 0);
    action.assign(static_cast<std::size_t>(m) * nt * nt * n, 0);
  }
  bool group_complete() const;
  std::vector<std::uint8_t> encode() const;
};

GammaModule regular_module(const GammaSemiring& t);
GammaModule zero_module(const GammaSemiring& t);
GammaModule direct_sum(const GammaSemiring& t, const GammaModule& a,
                       const GammaModule& b);

struct ModuleReport {
  std::vector<AxiomCheck> checks;
  bool passed() const {
    for (const auto& c : checks)
      if (c.status == "fail") return false;
    return true;
  }
  const AxiomCheck* find(const std::string& axiom) const {
    for (const auto& c : checks)
      if (c.axiom == axiom) return &c;
    return nullptr;
  }
};

void validate_module_structure(const GammaSemiring& t, const GammaModule& mod);
ModuleReport check_module_axioms(const GammaSemiring& t,
                                 const GammaModule& mod);

struct ModuleMap {
  std::vector<int> table;  // source element -> target element
  friend bool operator<(const ModuleMap& a, const ModuleMap& b) {
    return a.table < b.table;
  }
  friend bool operator==(const ModuleMap& a, const ModuleMap& b) {
    return a.table == b.table;
  }
};

bool is_module_map(const GammaSemiring& t, const GammaModule& src,
                   const GammaModule& dst, const std::vector<int>& table);

long long default_budget();

// Complete list of module homomorphisms, ordered by value table. The search
// assigns images to an additive+action generating set and propagates.
std::vector<ModuleMap> hom_set(const GammaSemiring& t, const GammaModule& src,
                               const GammaModule& dst,
                               long long budget = default_budget());

struct HomModule {
  GammaModule module;          // pointwise structure on the maps
  std::vector<ModuleMap> maps; // carrier: index -> map
  bool valid = false;          // module axioms hold on this structure
};

HomModule hom_module(const GammaSemiring& t, const GammaModule& src,
                     const GammaModule& dst,
                     long long budget = default_budget());

struct TensorResult {
  GammaModule module;               // the quotient (valid when complete)
  std::string mode;                 // "group-complete" | "monoid"
  bool complete = false;
  std::vector<int> gen_class;      // (m * |N| + n) -> class index
  // canonical nonnegative expression of each class as a sum of generators
  std::vector<std::vector<int>> class_rep;
  bool balance_ok = false;          // audited on the result
  bool bilinear_ok = false;
};

TensorResult tensor(const GammaSemiring& t, const GammaModule& a,
                    const GammaModule& b, long long cap = 10000);

struct AdjunctionReport {
  bool hom_module_valid = false;
  long long hom_from_tensor = 0;  // |Hom(M (x) N, P)|
  long long hom_curried = 0;      // |Hom(M, Hom(N, P))|
  bool curry_injective = false;
  bool inverse_total = false;     // every curried map arises from a unique F
  bool bijection = false;
  std::string note;
};

AdjunctionReport check_adjunction(const GammaSemiring& t, const GammaModule& a,
                                  const GammaModule& b, const GammaModule& c,
                                  long long budget = default_budget());

// Same check against a precomputed tensor and hom module (for sweeps that
// cache them across many triples).
AdjunctionReport check_adjunction_with(const GammaSemiring& t,
                                       const GammaModule& a,
                                       const GammaModule& b,
                                       const GammaModule& c,
                                       const TensorResult& ab,
                                       const HomModule& hbc,
                                       long long budget = default_budget());

struct AnnihilatorResult {
  Mask ann = 0;
  bool ideal_in_mode = false;
  IdealViolation violation;
};

AnnihilatorResult annihilator(const GammaSemiring& t, const GammaModule& mod,
                              Absorption mode);

struct SchurReport {
  std::vector<std::vector<int>> endo;  // per carrier element, map on module
  Congruence kernel;                   // equal-endomorphism classes
  Mask ann = 0;
  Congruence bourne_of_ann;
  bool kernel_matches_bourne = false;
  bool faithful = false;
};

SchurReport schur_map(const GammaSemiring& t, const GammaModule& mod,
                      Absorption mode);

// Two-step free presentation F1 -> F0 -> M by free modules T^k.
struct ChainData {
  std::vector<int> generators;  // elements of M generating it
  GammaModule f0;
  GammaModule f1;
  std::vector<int> h;  // F0 element -> M element (surjective)
  std::vector<int> d;  // F1 element -> F0 element, image = ker h
  std::vector<int> kernel_generators;  // F0 elements generating ker h
  bool exact_at_f0 = false;
};

ChainData presentation(const GammaSemiring& t, const GammaModule& mod,
                       long long budget = default_budget());

struct GroupDescriptor {
  long long order = 1;
  std::vector<long long> cyclic_orders;  // ascending divisibility chain
  ojson to_json(int degree, const std::string& mode) const;
};

GroupDescriptor ext_group(const GammaSemiring& t, const GammaModule& a,
                          const GammaModule& b, int degree,
                          long long budget = default_budget());
GroupDescriptor tor_group(const GammaSemiring& t, const GammaModule& a,
                          const GammaModule& b, int degree,
                          long long cap = 10000);

struct LocalizedModule {
  LocalizedSemiring base;    // S^{-1}T
  GammaModule quotient;      // module over base.quotient
  std::vector<std::vector<std::pair<int, int>>> classes;  // (m, s) pairs
  std::vector<int> phi;      // module element -> class
  bool axioms_pass = false;
};

LocalizedModule localize_module(const GammaSemiring& t, const GammaModule& mod,
                                Mask s);

struct SupportReport {
  Mask support = 0;            // primes with a nontrivial stalk
  Mask radical_support = 0;    // V(radical(Ann))
  bool agree = false;
};

SupportReport support(const GammaSemiring& t, const GammaModule& mod,
                      const SpectrumData& spec);

// All modules of the given carrier size up to module isomorphism,
// deterministically ordered.
std::vector<GammaModule> enumerate_modules(const GammaSemiring& t, int size,
                                           long long budget = 2000000);

// Invariant factors of a finite abelian group given by a table.
std::vector<long long> abelian_invariants(
    int n, const std::function<int(int, int)>& add);

GammaModule module_from_json(const ojson& j, const GammaSemiring& t);
ojson module_to_json(const GammaModule& mod,
                     const std::string& over_hash = "");
GammaModule load_module_file(const std::string& path, const GammaSemiring& t,
                             std::string* over_hash_out = nullptr);

}  // namespace tgs
