#pragma once

#include <string>
#include <vector>

#include "tgs/census.hpp"
#include "tgs/graph.hpp"
#include "tgs/ideals.hpp"
#include "tgs/rational.hpp"

namespace tgs {

struct PipelineConfig {
  int n = 2;
  int m = 1;
  AxiomMode axiom_mode;
  Absorption absorption = Absorption::Literal;
  std::string scheme = "uniform";
  std::vector<Rat> thetas{Rat::zero(), Rat(1, 2), Rat::one()};
  long long hom_budget = 0;   // 0 = library default
  long long tensor_cap = 0;   // 0 = library default
  int workers = 1;
  std::string out_dir;
  bool resume = false;
  ojson to_json() const;
};

struct PipelineResult {
  ojson manifest;
  int exit_code = 0;             // 0 clean, 1 findings reported
  long long findings_count = 0;
};

// Runs census -> spectra -> homology -> fuzzy -> fingerprints, writing one
// artifact file per stage plus findings.json, manifest.json and a separate
// timings.json. Deterministic: identical config and inputs give
// byte-identical artifacts and manifest. Interrupted runs leave no manifest.
PipelineResult run_pipeline(const PipelineConfig& cfg);

std::string file_hash(const std::string& path);  // "fnv64:<hex>"

}  // namespace tgs
