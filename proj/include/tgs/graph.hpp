#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tgs/fuzzy.hpp"
#include "tgs/ideals.hpp"
#include "tgs/localization.hpp"

namespace tgs {

// Weighted graph on the primes: an edge joins two primes whose basic opens
// intersect.
struct SpectrumGraph {
  int vertices = 0;
  std::vector<std::pair<int, int>> edges;
  std::vector<Rat> weights;
  std::vector<std::vector<long long>> laplacian;
};

SpectrumGraph build_graph(const SpectrumData& spec, const WeightedSpectrum& w);

struct ComponentData {
  int count = 0;
  std::vector<int> component_of;
};

ComponentData components(const SpectrumGraph& g);

// Exact integer rank, hence exact nullity; no floating point.
int laplacian_nullity(const SpectrumGraph& g);

std::string graph_dot(const SpectrumGraph& g, const std::string& mode,
                      const std::string& scheme);

struct CechH0 {
  EqualizerResult eq;
  Rat confidence;
  bool isomorphic_to_model = false;
};

CechH0 cech_h0(const GammaSemiring& t, const SpectrumData& spec,
               const WeightedCover& cover);

struct CechH1 {
  std::string kind;  // "cech" | "laplacian-surrogate"
  std::vector<long long> cyclic_orders;  // cech mode
  long long order = 1;                   // cech mode group order
  int surrogate = 0;                     // nullity - components
};

CechH1 cech_h1(const GammaSemiring& t, const SpectrumData& spec,
               const WeightedCover& cover, const SpectrumGraph& g);

struct FingerprintConfig {
  Absorption mode = Absorption::Literal;
  std::string scheme = "uniform";
  std::map<int, Rat> file_weights;
};

struct FingerprintResult {
  ojson json;
  std::vector<std::string> findings;
};

// Stage-5 invariant tuple; byte-deterministic for identical inputs.
FingerprintResult fingerprint(const GammaSemiring& t,
                              const FingerprintConfig& cfg = {});

// The canonical weighted cover used by fingerprints: one member per prime
// with that prime's weight, plus the whole space at weight 1 when needed.
WeightedCover canonical_weighted_cover(const GammaSemiring& t,
                                       const SpectrumData& spec,
                                       const WeightedSpectrum& w);

}  // namespace tgs
