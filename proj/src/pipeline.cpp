#include "tgs/pipeline.hpp"

#include <atomic>
#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "tgs/modules.hpp"

namespace fs = std::filesystem;

namespace tgs {

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw StructuralError("cannot open file: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw StructuralError("cannot write file: " + tmp);
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw StructuralError("cannot replace file: " + path);
}

std::string hash_bytes(const std::string& bytes) {
  return "fnv64:" + hex64(fnv1a64(bytes.data(), bytes.size()));
}

// deterministic per-model fan-out
template <typename Fn>
std::vector<std::string> parallel_lines(int workers, std::size_t count, Fn fn) {
  std::vector<std::string> lines(count);
  if (workers <= 1 || count <= 1) {
    for (std::size_t i = 0; i < count; ++i) lines[i] = fn(i);
    return lines;
  }
  std::atomic<std::size_t> next{0};
  auto body = [&]() {
    for (;;) {
      std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      lines[i] = fn(i);
    }
  };
  std::vector<std::thread> threads;
  for (int w = 0; w < workers; ++w) threads.emplace_back(body);
  for (auto& th : threads) th.join();
  return lines;
}

}  // namespace

std::string file_hash(const std::string& path) {
  return hash_bytes(read_file(path));
}

ojson PipelineConfig::to_json() const {
  ojson j;
  j["n"] = n;
  j["m"] = m;
  j["axiom_mode"] = axiom_mode.str();
  j["absorption"] = absorption_str(absorption);
  j["scheme"] = scheme;
  ojson th = ojson::array();
  for (const auto& r : thetas) th.push_back(r.str());
  j["thetas"] = std::move(th);
  j["hom_budget"] = hom_budget == 0 ? default_budget() : hom_budget;
  j["tensor_cap"] = tensor_cap == 0 ? 10000 : tensor_cap;
  j["workers"] = workers;
  return j;
}

PipelineResult run_pipeline(const PipelineConfig& cfg) {
  if (cfg.out_dir.empty())
    throw PreconditionError("pipeline requires an output directory");
  for (const auto& th : cfg.thetas)
    if (!th.in_unit_interval())
      throw PreconditionError("threshold outside [0,1]: " + th.str());
  fs::create_directories(cfg.out_dir);
  auto path = [&](const std::string& name) {
    return (fs::path(cfg.out_dir) / name).string();
  };
  const std::string config_echo = cfg.to_json().dump();

  ojson state = ojson::object();
  const std::string state_path = path("run-state.json");
  if (cfg.resume && fs::exists(state_path)) {
    try {
      std::ifstream in(state_path);
      in >> state;
      if (!state.contains("config") ||
          state["config"].dump() != cfg.to_json().dump())
        state = ojson::object();  // stale state: recompute everything
    } catch (...) {
      state = ojson::object();
    }
  }
  state["config"] = cfg.to_json();
  auto stage_fresh = [&](const std::string& artifact) {
    if (!cfg.resume) return false;
    if (!state.contains("stages") || !state["stages"].contains(artifact))
      return false;
    std::string p = path(artifact);
    if (!fs::exists(p)) return false;
    return state["stages"][artifact].get<std::string>() == file_hash(p);
  };
  auto record_stage = [&](const std::string& artifact) {
    if (!state.contains("stages")) state["stages"] = ojson::object();
    state["stages"][artifact] = file_hash(path(artifact));
    write_file_atomic(state_path, state.dump() + "\n");
  };

  ojson timings = ojson::object();
  auto timed = [&](const std::string& key, auto&& fn) {
    auto start = std::chrono::steady_clock::now();
    fn();
    timings[key] = std::chrono::duration_cast<std::chrono::milliseconds>(
                       std::chrono::steady_clock::now() - start)
                       .count();
  };

  // stage 1: census
  std::vector<GammaSemiring> models;
  timed("census_ms", [&]() {
    if (stage_fresh("census.ndjson")) {
      std::istringstream in(read_file(path("census.ndjson")));
      std::string line;
      while (std::getline(in, line)) {
        if (line.empty()) continue;
        ojson j = ojson::parse(line);
        if (j.contains("count")) break;  // summary line
        models.push_back(model_from_json(j));
      }
      return;
    }
    CensusOptions copt;
    copt.mode = cfg.axiom_mode;
    copt.workers = cfg.workers;
    copt.checkpoint_path = path("census.ckpt");
    CensusResult census = enumerate_models(cfg.n, cfg.m, copt);
    write_file_atomic(path("census.ndjson"), census_ndjson(census));
    record_stage("census.ndjson");
    models = std::move(census.models);
  });

  std::vector<SpectrumData> spectra(models.size());
  for (std::size_t i = 0; i < models.size(); ++i)
    spectra[i] = spectrum(models[i], cfg.absorption);

  std::vector<ojson> all_findings;
  auto add_finding = [&](const std::string& stage, std::size_t idx,
                         const std::string& id, ojson detail) {
    ojson f;
    f["stage"] = stage;
    f["model_index"] = static_cast<long long>(idx);
    f["model_hash"] = canonical_hash(models[idx]);
    f["id"] = id;
    f["detail"] = std::move(detail);
    all_findings.push_back(std::move(f));
  };

  // stage 2: spectra
  timed("spectral_ms", [&]() {
    if (stage_fresh("spectra.ndjson")) return;
    auto lines = parallel_lines(cfg.workers, models.size(), [&](std::size_t i) {
      ojson j;
      j["model_index"] = static_cast<long long>(i);
      j["model_hash"] = canonical_hash(models[i]);
      j["spectrum"] = spectra[i].to_json();
      return j.dump();
    });
    std::string out;
    for (auto& l : lines) {
      out += l;
      out += "\n";
    }
    write_file_atomic(path("spectra.ndjson"), out);
    record_stage("spectra.ndjson");
  });

  // stage 3: homology of the regular module, group-complete instances only
  timed("homology_ms", [&]() {
    if (stage_fresh("homology.ndjson")) return;
    auto lines = parallel_lines(cfg.workers, models.size(), [&](std::size_t i) {
      const GammaSemiring& t = models[i];
      ojson j;
      j["model_index"] = static_cast<long long>(i);
      if (!t.group_complete()) {
        j["skipped"] = "not group-complete";
        return j.dump();
      }
      if (!effective_identity(t)) {
        j["skipped"] = "no identity idempotent";
        return j.dump();
      }
      GammaModule reg = regular_module(t);
      try {
        long long hb = cfg.hom_budget == 0 ? default_budget() : cfg.hom_budget;
        long long tc = cfg.tensor_cap == 0 ? 10000 : cfg.tensor_cap;
        j["ext0"] = ext_group(t, reg, reg, 0, hb).to_json(0, "group-complete");
        j["ext1"] = ext_group(t, reg, reg, 1, hb).to_json(1, "group-complete");
        j["tor0"] = tor_group(t, reg, reg, 0, tc).to_json(0, "group-complete");
        j["tor1"] = tor_group(t, reg, reg, 1, tc).to_json(1, "group-complete");
      } catch (const TgsError& ex) {
        j["skipped"] = ex.what();
      }
      return j.dump();
    });
    std::string out;
    for (auto& l : lines) {
      out += l;
      out += "\n";
    }
    write_file_atomic(path("homology.ndjson"), out);
    record_stage("homology.ndjson");
  });

  auto read_lines = [&](const std::string& artifact) {
    std::vector<std::string> lines;
    std::istringstream in(read_file(path(artifact)));
    std::string line;
    while (std::getline(in, line))
      if (!line.empty()) lines.push_back(line);
    return lines;
  };

  // stage 4: fuzzy closures and the crisp-reduction audit
  timed("fuzzy_ms", [&]() {
    std::vector<std::string> lines;
    if (stage_fresh("fuzzy.ndjson")) {
      lines = read_lines("fuzzy.ndjson");
    } else {
      lines = parallel_lines(cfg.workers, models.size(), [&](std::size_t i) {
      const GammaSemiring& t = models[i];
      const SpectrumData& spec = spectra[i];
      ojson j;
      j["model_index"] = static_cast<long long>(i);
      WeightedSpectrum w = assign_weights(spec, cfg.scheme);
      j["weights"] = w.to_json();
      ojson closures = ojson::object();
      for (std::size_t ii = 0; ii < spec.proper_ideals.size(); ++ii) {
        ojson per_theta = ojson::object();
        for (const auto& th : cfg.thetas) {
          Mask cl = fuzzy_closure(spec, spec.proper_ideals[ii], th, w);
          ojson lst = ojson::array();
          for (int p = 0; p < spec.prime_count(); ++p)
            if (mask_has(cl, p)) lst.push_back(p);
          per_theta[th.str()] = std::move(lst);
        }
        closures[mask_to_hex(spec.proper_ideals[ii])] = std::move(per_theta);
      }
      j["closures"] = std::move(closures);
      CrispReductionReport crisp = crisp_reduction_check(t, spec);
      j["crisp_reduction_pass"] = crisp.pass;
      return j.dump();
      });
    }
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      ojson j = ojson::parse(lines[i]);
      if (!j["crisp_reduction_pass"].get<bool>())
        add_finding("fuzzy", i, "crisp-reduction-failure", ojson::object());
      out += lines[i];
      out += "\n";
    }
    write_file_atomic(path("fuzzy.ndjson"), out);
    record_stage("fuzzy.ndjson");
  });

  // stage 5: fingerprints
  timed("fingerprint_ms", [&]() {
    std::vector<std::string> lines;
    if (stage_fresh("fingerprints.ndjson")) {
      lines = read_lines("fingerprints.ndjson");
    } else {
      lines = parallel_lines(cfg.workers, models.size(), [&](std::size_t i) {
        FingerprintConfig fc;
        fc.mode = cfg.absorption;
        fc.scheme = cfg.scheme;
        FingerprintResult fp = fingerprint(models[i], fc);
        ojson j;
        j["model_index"] = static_cast<long long>(i);
        j["fingerprint"] = fp.json;
        return j.dump();
      });
    }
    std::string out;
    for (std::size_t i = 0; i < lines.size(); ++i) {
      ojson j = ojson::parse(lines[i]);
      for (const auto& f : j["fingerprint"]["findings"])
        add_finding("fingerprint", i, f.get<std::string>(), ojson::object());
      out += lines[i];
      out += "\n";
    }
    write_file_atomic(path("fingerprints.ndjson"), out);
    record_stage("fingerprints.ndjson");
  });

  {
    ojson fj = ojson::array();
    for (const auto& f : all_findings) fj.push_back(f);
    write_file_atomic(path("findings.json"), fj.dump() + "\n");
  }
  write_file_atomic(path("timings.json"), timings.dump() + "\n");

  PipelineResult res;
  res.findings_count = static_cast<long long>(all_findings.size());
  res.exit_code = all_findings.empty() ? 0 : 1;
  ojson manifest;
  manifest["tool"] = "tgs";
  manifest["version"] = "0.1.0";
  manifest["config"] = cfg.to_json();
  ojson arts = ojson::object();
  for (const char* name : {"census.ndjson", "spectra.ndjson",
                           "homology.ndjson", "fuzzy.ndjson",
                           "fingerprints.ndjson", "findings.json"}) {
    ojson a;
    std::string content = read_file(path(name));
    a["hash"] = hash_bytes(content);
    a["bytes"] = static_cast<long long>(content.size());
    arts[name] = std::move(a);
  }
  manifest["artifacts"] = std::move(arts);
  manifest["findings_count"] = res.findings_count;
  manifest["exit"] = res.exit_code;
  write_file_atomic(path("manifest.json"), manifest.dump() + "\n");
  res.manifest = std::move(manifest);
  return res;
}

}  // namespace tgs
