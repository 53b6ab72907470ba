#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "fixtures.hpp"
#include "tgs/pipeline.hpp"

using namespace tgs;
namespace fs = std::filesystem;

namespace {

std::string slurp(const std::string& p) {
  std::ifstream in(p, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct TempDir {
  fs::path path;
  explicit TempDir(const std::string& name)
      : path(fs::temp_directory_path() / name) {
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

}  // namespace

TEST_CASE("trivial pipeline run") {
  TempDir dir("tgs_pipe_trivial");
  PipelineConfig cfg;
  cfg.n = 1;
  cfg.m = 1;
  cfg.out_dir = dir.path.string();
  PipelineResult r = run_pipeline(cfg);
  CHECK(r.exit_code == 0);
  CHECK(r.findings_count == 0);
  CHECK(fs::exists(dir.path / "manifest.json"));
  CHECK(fs::exists(dir.path / "census.ndjson"));
  CHECK(fs::exists(dir.path / "fingerprints.ndjson"));
  ojson manifest = ojson::parse(slurp((dir.path / "manifest.json").string()));
  CHECK(manifest["findings_count"] == 0);
  // census has one model line plus the summary
  std::string census = slurp((dir.path / "census.ndjson").string());
  CHECK(census.find("\"count\":1") != std::string::npos);
}

TEST_CASE("order-2 pipeline is deterministic and reports findings") {
  TempDir a("tgs_pipe_a"), b("tgs_pipe_b");
  PipelineConfig cfg;
  cfg.n = 2;
  cfg.m = 1;
  cfg.out_dir = a.path.string();
  PipelineResult ra = run_pipeline(cfg);
  cfg.out_dir = b.path.string();
  PipelineResult rb = run_pipeline(cfg);
  // byte-identical artifacts and manifest across runs
  for (const char* name :
       {"census.ndjson", "spectra.ndjson", "homology.ndjson", "fuzzy.ndjson",
        "fingerprints.ndjson", "findings.json", "manifest.json"})
    CHECK(slurp((a.path / name).string()) == slurp((b.path / name).string()));
  // the group-complete two-element model has vanishing cohomology on a
  // connected graph, which contradicts the nullity claim: a finding
  CHECK(ra.exit_code == 1);
  CHECK(ra.findings_count > 0);
  CHECK(ra.manifest.dump() == rb.manifest.dump());
  // timing lives outside the manifest
  CHECK(slurp((a.path / "manifest.json").string()).find("_ms") ==
        std::string::npos);
  CHECK(fs::exists(a.path / "timings.json"));
}

TEST_CASE("pipeline resume reuses stages and reproduces the manifest") {
  TempDir dir("tgs_pipe_resume");
  PipelineConfig cfg;
  cfg.n = 2;
  cfg.m = 2;
  cfg.out_dir = dir.path.string();
  PipelineResult first = run_pipeline(cfg);
  std::string manifest1 = slurp((dir.path / "manifest.json").string());
  cfg.resume = true;
  PipelineResult second = run_pipeline(cfg);
  std::string manifest2 = slurp((dir.path / "manifest.json").string());
  CHECK(manifest1 == manifest2);
  CHECK(first.findings_count == second.findings_count);
}

TEST_CASE("pipeline refuses bad thresholds") {
  PipelineConfig cfg;
  cfg.n = 1;
  cfg.m = 1;
  cfg.out_dir = "unused";
  cfg.thetas = {Rat(3, 2)};
  CHECK_THROWS_AS(run_pipeline(cfg), PreconditionError);
}

TEST_CASE("workers do not change pipeline artifacts") {
  TempDir a("tgs_pipe_w1"), b("tgs_pipe_w4");
  PipelineConfig cfg;
  cfg.n = 2;
  cfg.m = 2;
  cfg.out_dir = a.path.string();
  cfg.workers = 1;
  run_pipeline(cfg);
  cfg.out_dir = b.path.string();
  cfg.workers = 4;
  run_pipeline(cfg);
  for (const char* name : {"census.ndjson", "spectra.ndjson",
                           "homology.ndjson", "fuzzy.ndjson",
                           "fingerprints.ndjson", "findings.json"})
    CHECK(slurp((a.path / name).string()) == slurp((b.path / name).string()));
  // manifests agree on everything but the worker count they echo
  ojson ma = ojson::parse(slurp((a.path / "manifest.json").string()));
  ojson mb = ojson::parse(slurp((b.path / "manifest.json").string()));
  CHECK(ma["artifacts"].dump() == mb["artifacts"].dump());
  CHECK(ma["findings_count"] == mb["findings_count"]);
}
