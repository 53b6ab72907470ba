#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tgs/base.hpp"

namespace tgs {

// A finite commutative ternary Gamma-semiring given by explicit tables:
// a carrier {0..n-1} with 0 the additive identity, a parameter set of size m
// with an associative product on parameter indices, and one fully symmetric
// ternary product table per parameter.
struct GammaSemiring {
  int n = 0;  // carrier size
  int m = 0;  // parameter set size
  std::vector<int> add;   // n*n, row-major
  std::vector<int> gmul;  // m*m, row-major
  std::vector<int> tern;  // m*n*n*n, [g][a][b][c]
  std::optional<int> e;   // identity idempotent, if designated
  int gamma0 = 0;         // parameter fixed wherever one parameter is needed

  int plus(int a, int b) const { return add[a * n + b]; }
  int gprod(int g, int h) const { return gmul[g * m + h]; }
  int prod(int g, int a, int b, int c) const {
    return tern[((static_cast<std::size_t>(g) * n + a) * n + b) * n + c];
  }

  void alloc() {
    add.assign(static_cast<std::size_t>(n) * n, 0);
    gmul.assign(static_cast<std::size_t>(m) * m, 0);
    tern.assign(static_cast<std::size_t>(m) * n * n * n, 0);
  }

  bool group_complete() const;  // every element has an additive inverse
};

// Which checks run. The degenerate printed form of the parameter
// compatibility law collapses nontrivial models, so it is opt-in.
struct AxiomMode {
  bool strict_t5 = false;
  std::string str() const { return strict_t5 ? "strict-t5" : "default"; }
};

struct AxiomWitness {
  std::string axiom;
  std::vector<int> gammas;
  std::vector<int> elems;
  int lhs = 0;
  int rhs = 0;
};

struct AxiomCheck {
  std::string axiom;
  std::string status;  // "pass" | "fail" | "skipped"
  std::vector<AxiomWitness> witnesses;
};

struct AxiomReport {
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
  ojson to_json() const;
};

// Structure-preserving map between models: a carrier map and a parameter map.
struct Morphism {
  std::vector<int> carrier_map;
  std::vector<int> param_map;
};

// Throws StructuralError naming the offending cell if any table entry is out
// of range or any shape is wrong.
void validate_structure(const GammaSemiring& t);

// Exhaustive check of every axiom in the selected mode; reports every
// failing axiom with witnesses (capped per axiom).
AxiomReport check_axioms(const GammaSemiring& t, AxiomMode mode = {});

// Recomputes the witness's lhs/rhs from the tables (used to audit reports).
std::pair<int, int> reevaluate_witness(const GammaSemiring& t,
                                       const AxiomWitness& w);

// All e with {e,e,a}_gamma0 = a for every a.
std::vector<int> find_identity_idempotents(const GammaSemiring& t);

// Effective identity idempotent: the designated one if present, otherwise
// the least one found; nullopt when none exists.
std::optional<int> effective_identity(const GammaSemiring& t);

// Relabels by a carrier permutation (sigma[0] must be 0) and a parameter
// permutation; both maps send old index -> new index.
GammaSemiring relabel(const GammaSemiring& t, const std::vector<int>& sigma,
                      const std::vector<int>& pi);

// Serialization of the structural tables (n, m, add, gmul, tern) only.
std::vector<std::uint8_t> encode_tables(const GammaSemiring& t);

// Deterministic encoding minimal over all carrier permutations fixing 0 and
// all parameter permutations; two models are isomorphic iff these are equal.
std::vector<std::uint8_t> canonical_form(const GammaSemiring& t);

// The relabeled model achieving the canonical encoding (its designated e is
// reset to the least identity idempotent, gamma0 to 0).
GammaSemiring canonical_model(const GammaSemiring& t);

std::string canonical_hash(const GammaSemiring& t);  // fnv1a64 hex

bool check_morphism(const GammaSemiring& src, const GammaSemiring& dst,
                    const Morphism& f);

// A bijective-in-both-components witness when the models are isomorphic.
std::optional<Morphism> is_isomorphic(const GammaSemiring& a,
                                      const GammaSemiring& b);

GammaSemiring model_from_json(const ojson& j);
ojson model_to_json(const GammaSemiring& t);
GammaSemiring load_model_file(const std::string& path);

}  // namespace tgs
