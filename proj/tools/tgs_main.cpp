// tgs: a workbench for finite commutative ternary Gamma-semirings.
// Subcommands audit axioms, compute spectra, localizations, fuzzy closures,
// homological invariants, spectrum graphs, and run the full pipeline.

#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "tgs/census.hpp"
#include "tgs/fuzzy.hpp"
#include "tgs/graph.hpp"
#include "tgs/localization.hpp"
#include "tgs/modules.hpp"
#include "tgs/pipeline.hpp"

using namespace tgs;

namespace {

int g_exit = 0;

void emit(const ojson& j, const std::string& out_path) {
  std::string s = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << s;
  } else {
    std::ofstream out(out_path);
    if (!out) throw StructuralError("cannot write " + out_path);
    out << s;
  }
}

void emit_raw(const std::string& s, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << s;
  } else {
    std::ofstream out(out_path);
    if (!out) throw StructuralError("cannot write " + out_path);
    out << s;
  }
}

std::map<int, Rat> load_weights_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError("cannot open weights file: " + path);
  ojson j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& ex) {
    throw StructuralError(std::string("bad weights file: ") + ex.what());
  }
  std::map<int, Rat> w;
  for (auto& [key, value] : j.at("weights").items())
    w[std::stoi(key)] = parse_rat(value.get<std::string>());
  return w;
}

ojson ideal_violation_json(const IdealViolation& v) {
  ojson j;
  j["kind"] = v.kind;
  if (v.gamma >= 0) j["gamma"] = v.gamma;
  j["elems"] = v.elems;
  j["value"] = v.value;
  return j;
}

void cmd_check_model(const std::string& file, const std::string& mode,
                     bool strict_t5, const std::string& out) {
  GammaSemiring t = load_model_file(file);
  AxiomMode am{strict_t5};
  AxiomReport rep = check_axioms(t, am);
  ojson j;
  j["model"] = file;
  j["axiom_mode"] = am.str();
  j["axioms"] = rep.to_json();
  std::vector<std::string> findings;
  for (const auto& c : rep.checks)
    if (c.status == "fail") findings.push_back("axiom-" + c.axiom);
  if (rep.passed())
    j["identity_idempotents"] = find_identity_idempotents(t);
  else
    j["identity_idempotents"] = nullptr;
  ojson zi = ojson::object();
  for (Absorption ab : {Absorption::Literal, Absorption::Strict}) {
    IdealViolation why;
    bool ok = is_ideal(t, mask_bit(0), ab, &why);
    ojson zj;
    zj["is_ideal"] = ok;
    if (!ok) {
      zj["witness"] = ideal_violation_json(why);
      findings.push_back("zero-ideal-not-ideal-" + absorption_str(ab));
    }
    zi[absorption_str(ab)] = std::move(zj);
  }
  (void)mode;
  j["zero_ideal"] = std::move(zi);
  ojson fj = ojson::array();
  for (const auto& f : findings) fj.push_back(f);
  j["findings"] = std::move(fj);
  j["status"] = findings.empty() ? "ok" : "violations";
  emit(j, out);
  if (!findings.empty()) g_exit = 1;
}

void cmd_spec(const std::string& file, const std::string& mode,
              const std::string& out) {
  GammaSemiring t = load_model_file(file);
  SpectrumData spec = spectrum(t, absorption_from_str(mode));
  emit(spec.to_json(), out);
}

void cmd_census(int n, int m, bool strict_t5, int workers, bool allow_large,
                const std::string& checkpoint, bool resume,
                const std::string& out) {
  CensusOptions opt;
  opt.mode.strict_t5 = strict_t5;
  opt.workers = workers;
  opt.allow_large = allow_large;
  opt.checkpoint_path = checkpoint;
  opt.resume = resume;
  CensusResult r = enumerate_models(n, m, opt);
  emit_raw(census_ndjson(r), out);
  std::cerr << r.record.to_json(true).dump() << "\n";
}

void cmd_fuzzy(const std::string& file, const std::string& mode,
               const std::string& scheme, const std::string& weights_path,
               const std::string& theta, const std::string& ideal_hex,
               const std::string& out) {
  GammaSemiring t = load_model_file(file);
  SpectrumData spec = spectrum(t, absorption_from_str(mode));
  std::map<int, Rat> fw;
  if (!weights_path.empty()) fw = load_weights_file(weights_path);
  WeightedSpectrum w =
      assign_weights(spec, scheme, scheme == "file" ? &fw : nullptr);
  Rat th = parse_rat(theta);
  ojson j;
  j["mode"] = absorption_str(spec.mode);
  j["theta"] = th.str();
  j["weights"] = w.to_json();
  auto closure_json = [&](Mask ideal) {
    Mask cl = fuzzy_closure(spec, ideal, th, w);
    ojson lst = ojson::array();
    for (int p = 0; p < spec.prime_count(); ++p)
      if (mask_has(cl, p)) lst.push_back(p);
    return lst;
  };
  if (!ideal_hex.empty()) {
    j["ideal"] = ideal_hex;
    j["closure"] = closure_json(mask_from_hex(ideal_hex));
  } else {
    ojson m2 = ojson::object();
    for (Mask ideal : spec.proper_ideals)
      m2[mask_to_hex(ideal)] = closure_json(ideal);
    j["closures"] = std::move(m2);
  }
  emit(j, out);
}

void cmd_homology(const std::string& model_file, const std::string& m_file,
                  const std::string& n_file, const std::string& out) {
  GammaSemiring t = load_model_file(model_file);
  std::string model_hash = file_hash(model_file);
  auto load = [&](const std::string& p) {
    std::string over;
    GammaModule mod = load_module_file(p, t, &over);
    if (!over.empty() && over != model_hash)
      throw StructuralError("module " + p + " declares base " + over +
                            " but the model file hashes to " + model_hash);
    return mod;
  };
  GammaModule a = load(m_file);
  GammaModule b = load(n_file);
  ojson j;
  j["model_hash"] = model_hash;
  j["ext0"] = ext_group(t, a, b, 0).to_json(0, "group-complete");
  j["ext1"] = ext_group(t, a, b, 1).to_json(1, "group-complete");
  j["tor0"] = tor_group(t, a, b, 0).to_json(0, "group-complete");
  j["tor1"] = tor_group(t, a, b, 1).to_json(1, "group-complete");
  emit(j, out);
}

void cmd_fingerprint(const std::string& file, const std::string& mode,
                     const std::string& scheme,
                     const std::string& weights_path, const std::string& out) {
  GammaSemiring t = load_model_file(file);
  FingerprintConfig fc;
  fc.mode = absorption_from_str(mode);
  fc.scheme = scheme;
  if (!weights_path.empty()) fc.file_weights = load_weights_file(weights_path);
  FingerprintResult fp = fingerprint(t, fc);
  emit(fp.json, out);
  if (!fp.findings.empty()) g_exit = 1;
}

void cmd_graph(const std::string& file, const std::string& mode,
               const std::string& scheme, const std::string& weights_path,
               bool dot, const std::string& out) {
  GammaSemiring t = load_model_file(file);
  SpectrumData spec = spectrum(t, absorption_from_str(mode));
  std::map<int, Rat> fw;
  if (!weights_path.empty()) fw = load_weights_file(weights_path);
  WeightedSpectrum w =
      assign_weights(spec, scheme, scheme == "file" ? &fw : nullptr);
  SpectrumGraph g = build_graph(spec, w);
  if (dot) {
    emit_raw(graph_dot(g, absorption_str(spec.mode), scheme), out);
    return;
  }
  ojson j;
  j["vertices"] = g.vertices;
  ojson es = ojson::array();
  for (auto [a, b] : g.edges) es.push_back(ojson::array({a, b}));
  j["edges"] = std::move(es);
  j["weights"] = w.to_json();
  j["components"] = components(g).count;
  j["laplacian_nullity"] = laplacian_nullity(g);
  emit(j, out);
}

void cmd_pipeline(int n, int m, const std::string& mode, bool strict_t5,
                  const std::string& scheme,
                  const std::vector<std::string>& thetas, int workers,
                  const std::string& out_dir, bool resume) {
  PipelineConfig cfg;
  cfg.n = n;
  cfg.m = m;
  cfg.axiom_mode.strict_t5 = strict_t5;
  cfg.absorption = absorption_from_str(mode);
  cfg.scheme = scheme;
  if (!thetas.empty()) {
    cfg.thetas.clear();
    for (const auto& s : thetas) cfg.thetas.push_back(parse_rat(s));
  }
  cfg.workers = workers;
  cfg.out_dir = out_dir;
  cfg.resume = resume;
  PipelineResult r = run_pipeline(cfg);
  std::cout << r.manifest.dump(2) << "\n";
  g_exit = r.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"workbench for finite commutative ternary Gamma-semirings"};
  app.require_subcommand(1);

  std::string file, out, mode = "literal", scheme = "uniform";
  std::string weights_path, theta = "0", ideal_hex, checkpoint;
  std::string model_file, m_file, n_file, out_dir = "tgs-out";
  bool strict_t5 = false, allow_large = false, resume = false, dot = false;
  int n = 2, m = 1, workers = 1;
  std::vector<std::string> theta_list;

  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode, "ideal absorption rule: literal|strict")
        ->check(CLI::IsMember({"literal", "strict"}));
  };

  auto* c_check = app.add_subcommand("check-model", "audit the axioms of a model file");
  c_check->add_option("file", file)->required();
  add_mode(c_check);
  c_check->add_flag("--strict-t5", strict_t5, "also check the printed parameter-compatibility law");
  c_check->add_option("--out", out);

  auto* c_spec = app.add_subcommand("spec", "prime spectrum, basic opens, incidence matrix");
  c_spec->add_option("file", file)->required();
  add_mode(c_spec);
  c_spec->add_option("--out", out);

  auto* c_census = app.add_subcommand("census", "enumerate models up to isomorphism (NDJSON)");
  c_census->add_option("--n", n)->required();
  c_census->add_option("--m", m)->required();
  c_census->add_flag("--strict-t5", strict_t5);
  c_census->add_option("--workers", workers);
  c_census->add_flag("--allow-large", allow_large, "override the n<=4, m<=3 guard");
  c_census->add_option("--checkpoint", checkpoint, "checkpoint file for resumable runs");
  c_census->add_flag("--resume", resume);
  c_census->add_option("--out", out);

  auto* c_fuzzy = app.add_subcommand("fuzzy", "threshold closures of basic opens");
  c_fuzzy->add_option("file", file)->required();
  add_mode(c_fuzzy);
  c_fuzzy->add_option("--scheme", scheme)->check(CLI::IsMember({"uniform", "frequency", "file"}));
  c_fuzzy->add_option("--weights", weights_path, "weights file for --scheme=file");
  c_fuzzy->add_option("--theta", theta, "threshold, p/q or decimal");
  c_fuzzy->add_option("--ideal", ideal_hex, "hex bitset of one ideal (default: all proper ideals)");
  c_fuzzy->add_option("--out", out);

  auto* c_hom = app.add_subcommand("homology", "Ext/Tor of two modules in degrees 0 and 1");
  c_hom->add_option("model", model_file)->required();
  c_hom->add_option("module_m", m_file)->required();
  c_hom->add_option("module_n", n_file)->required();
  c_hom->add_option("--out", out);

  auto* c_fp = app.add_subcommand("fingerprint", "computational fingerprint of one model");
  c_fp->add_option("file", file)->required();
  add_mode(c_fp);
  c_fp->add_option("--scheme", scheme)->check(CLI::IsMember({"uniform", "frequency", "file"}));
  c_fp->add_option("--weights", weights_path);
  c_fp->add_option("--out", out);

  auto* c_graph = app.add_subcommand("graph", "spectrum graph (JSON or DOT)");
  c_graph->add_option("file", file)->required();
  add_mode(c_graph);
  c_graph->add_option("--scheme", scheme)->check(CLI::IsMember({"uniform", "frequency", "file"}));
  c_graph->add_option("--weights", weights_path);
  c_graph->add_flag("--dot", dot, "emit DOT instead of JSON");
  c_graph->add_option("--out", out);

  auto* c_pipe = app.add_subcommand("pipeline", "census -> spectra -> homology -> fuzzy -> fingerprints");
  c_pipe->add_option("--n", n)->required();
  c_pipe->add_option("--m", m)->required();
  add_mode(c_pipe);
  c_pipe->add_flag("--strict-t5", strict_t5);
  c_pipe->add_option("--scheme", scheme)->check(CLI::IsMember({"uniform", "frequency", "file"}));
  c_pipe->add_option("--theta", theta_list, "threshold list");
  c_pipe->add_option("--workers", workers);
  c_pipe->add_option("--out", out_dir, "output directory");
  c_pipe->add_flag("--resume", resume);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*c_check) cmd_check_model(file, mode, strict_t5, out);
    if (*c_spec) cmd_spec(file, mode, out);
    if (*c_census) cmd_census(n, m, strict_t5, workers, allow_large, checkpoint, resume, out);
    if (*c_fuzzy) cmd_fuzzy(file, mode, scheme, weights_path, theta, ideal_hex, out);
    if (*c_hom) cmd_homology(model_file, m_file, n_file, out);
    if (*c_fp) cmd_fingerprint(file, mode, scheme, weights_path, out);
    if (*c_graph) cmd_graph(file, mode, scheme, weights_path, dot, out);
    if (*c_pipe) cmd_pipeline(n, m, mode, strict_t5, scheme, theta_list, workers, out_dir, resume);
  } catch (const InvalidQuotientError& ex) {
    ojson err;
    err["error"] = "invalid-quotient";
    err["message"] = ex.what();
    err["detail"] = ex.detail;
    std::cerr << err.dump(2) << "\n";
    return 1;
  } catch (const TgsError& ex) {
    ojson err;
    err["error"] = "tool-error";
    err["message"] = ex.what();
    std::cerr << err.dump(2) << "\n";
    return 2;
  }
  return g_exit;
}
