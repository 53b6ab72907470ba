#pragma once

#include <string>
#include <vector>

#include "tgs/model.hpp"

namespace tgs {

struct CensusOptions {
  AxiomMode mode;
  int workers = 1;
  bool allow_large = false;      // override the n <= 4, m <= 3 guard
  std::string checkpoint_path;   // empty disables checkpointing
  bool resume = false;
  int stop_after_units = -1;     // test hook: abandon the run early
};

struct CensusStats {
  long long addition_tables = 0;
  long long gamma_tables = 0;
  long long ternary_tables = 0;   // single-parameter tables surviving T3/T4
  long long candidates = 0;       // fully assembled structures checked
  std::string raw_search_space;   // decimal magnitude of the raw space
};

struct CensusRecord {
  int n = 0;
  int m = 0;
  std::string mode;
  long long count = 0;
  int workers = 1;
  long long wall_ms = 0;
  bool complete = true;
  std::string iso_policy = "carrier-and-parameter-permutations";
  CensusStats stats;
  ojson to_json(bool with_timing = false) const;
};

struct CensusResult {
  CensusRecord record;
  std::vector<GammaSemiring> models;  // canonical representatives, sorted
};

// Exhaustive enumeration of models passing the axioms in the given mode, one
// canonical representative per isomorphism class, sorted by encoding.
CensusResult enumerate_models(int n, int m, const CensusOptions& opt = {});

std::string census_ndjson(const CensusResult& r);

// Raw-magnitude estimate of the unpruned assignment space, used by the
// feasibility guard's refusal message and recorded in every record.
std::string census_space_estimate(int n, int m);

}  // namespace tgs
