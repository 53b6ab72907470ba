#include "tgs/census.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <set>
#include <thread>

namespace tgs {

namespace {

std::vector<std::vector<int>> commutative_monoid_tables(int n) {
  std::vector<std::pair<int, int>> cells;
  for (int a = 1; a < n; ++a)
    for (int b = a; b < n; ++b) cells.emplace_back(a, b);
  std::vector<int> table(n * n, 0);
  for (int a = 0; a < n; ++a) table[a] = table[a * n] = a;
  std::vector<std::vector<int>> out;
  std::function<void(std::size_t)> rec = [&](std::size_t ci) {
    if (ci == cells.size()) {
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c)
            if (table[table[a * n + b] * n + c] != table[a * n + table[b * n + c]])
              return;
      out.push_back(table);
      return;
    }
    auto [a, b] = cells[ci];
    for (int v = 0; v < n; ++v) {
      table[a * n + b] = table[b * n + a] = v;
      rec(ci + 1);
    }
  };
  rec(0);
  return out;
}

std::vector<std::vector<int>> associative_gamma_tables(int m) {
  std::vector<std::vector<int>> out;
  std::vector<int> table(m * m, -1);
  // cell-by-cell search; an associativity instance is checked as soon as all
  // four products it mentions are assigned
  std::function<bool()> consistent = [&]() {
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        int ab = table[a * m + b];
        if (ab < 0) continue;
        for (int c = 0; c < m; ++c) {
          int bc = table[b * m + c];
          if (bc < 0) continue;
          int left = table[ab * m + c];
          int right = table[a * m + bc];
          if (left >= 0 && right >= 0 && left != right) return false;
        }
      }
    return true;
  };
  std::function<void(int)> rec = [&](int cell) {
    if (cell == m * m) {
      out.push_back(table);
      return;
    }
    for (int v = 0; v < m; ++v) {
      table[cell] = v;
      if (consistent()) rec(cell + 1);
    }
    table[cell] = -1;
  };
  rec(0);
  return out;
}

// Symmetric single-parameter ternary tables compatible with a fixed addition
// table: zero absorption built in, distributivity checked cell-by-cell
// during the search, self-associativity checked at the leaves.
struct TernSearch {
  int n;
  const std::vector<int>& add;
  std::vector<std::array<int, 3>> cells;           // sorted triples, no zeros
  std::vector<int> cell_of_triple;                 // n^3 -> cell index or -1
  struct Instance {
    int lhs_cell;   // cell of {x+y, c, d}, -1 when forced zero
    int rhs1_cell;  // cell of {x, c, d}
    int rhs2_cell;  // cell of {y, c, d}
  };
  std::vector<std::vector<Instance>> by_ready;     // per cell index
  std::vector<std::vector<int>> results;

  explicit TernSearch(int n_, const std::vector<int>& add_) : n(n_), add(add_) {
    cell_of_triple.assign(n * n * n, -1);
    for (int a = 1; a < n; ++a)
      for (int b = a; b < n; ++b)
        for (int c = b; c < n; ++c) {
          int idx = static_cast<int>(cells.size());
          cells.push_back({a, b, c});
          int xs[3] = {a, b, c};
          std::sort(xs, xs + 3);
          do {
            cell_of_triple[(xs[0] * n + xs[1]) * n + xs[2]] = idx;
          } while (std::next_permutation(xs, xs + 3));
        }
    by_ready.resize(cells.size());
    for (int x = 0; x < n; ++x)
      for (int y = x; y < n; ++y)
        for (int c = 0; c < n; ++c)
          for (int d = 0; d < n; ++d) {
            int s = add[x * n + y];
            Instance ins{cell_idx(s, c, d), cell_idx(x, c, d),
                         cell_idx(y, c, d)};
            int ready = std::max({ins.lhs_cell, ins.rhs1_cell, ins.rhs2_cell});
            if (ready >= 0) by_ready[ready].push_back(ins);
          }
  }

  int cell_idx(int a, int b, int c) const {
    int xs[3] = {a, b, c};
    std::sort(xs, xs + 3);
    return cell_of_triple[(xs[0] * n + xs[1]) * n + xs[2]];
  }

  void run() {
    std::vector<int> val(cells.size(), -1);
    dfs(0, val);
  }

  int value_of(const std::vector<int>& val, int cell) const {
    return cell < 0 ? 0 : val[cell];
  }

  void dfs(std::size_t k, std::vector<int>& val) {
    if (k == cells.size()) {
      std::vector<int> table(n * n * n, 0);
      for (std::size_t i = 0; i < cells.size(); ++i) {
        int xs[3] = {cells[i][0], cells[i][1], cells[i][2]};
        std::sort(xs, xs + 3);
        do {
          table[(xs[0] * n + xs[1]) * n + xs[2]] = val[i];
        } while (std::next_permutation(xs, xs + 3));
      }
      // self ternary associativity
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
          for (int c = 0; c < n; ++c) {
            int abc = table[(a * n + b) * n + c];
            for (int d = 0; d < n; ++d)
              for (int e2 = 0; e2 < n; ++e2) {
                int left = table[(abc * n + d) * n + e2];
                int mid =
                    table[(a * n + table[(b * n + c) * n + d]) * n + e2];
                if (left != mid) return;
                int right = table[(a * n + b) * n + table[(c * n + d) * n + e2]];
                if (mid != right) return;
              }
          }
      results.push_back(table);
      return;
    }
    for (int v = 0; v < n; ++v) {
      val[k] = v;
      bool ok = true;
      for (const Instance& ins : by_ready[k]) {
        int lhs = value_of(val, ins.lhs_cell);
        int r1 = value_of(val, ins.rhs1_cell);
        int r2 = value_of(val, ins.rhs2_cell);
        if (lhs != add[r1 * n + r2]) {
          ok = false;
          break;
        }
      }
      if (ok) dfs(k + 1, val);
    }
    val[k] = -1;
  }
};

struct Checkpoint {
  int n = 0, m = 0;
  std::string mode;
  long long units_total = 0;
  std::map<long long, std::vector<ojson>> units;  // unit -> model jsons

  static Checkpoint load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw CheckpointError("cannot open checkpoint: " + path);
    ojson j;
    try {
      in >> j;
      Checkpoint ck;
      ck.n = j.at("n").get<int>();
      ck.m = j.at("m").get<int>();
      ck.mode = j.at("mode").get<std::string>();
      ck.units_total = j.at("units_total").get<long long>();
      for (auto& [key, value] : j.at("units").items()) {
        std::vector<ojson> models;
        for (auto& mj : value) models.push_back(mj);
        ck.units[std::stoll(key)] = std::move(models);
      }
      return ck;
    } catch (const std::exception& ex) {
      throw CheckpointError(std::string("corrupt checkpoint: ") + ex.what());
    }
  }

  void save(const std::string& path) const {
    ojson j;
    j["n"] = n;
    j["m"] = m;
    j["mode"] = mode;
    j["units_total"] = units_total;
    ojson us = ojson::object();
    for (const auto& [unit, models] : units) {
      ojson arr = ojson::array();
      for (const auto& mj : models) arr.push_back(mj);
      us[std::to_string(unit)] = std::move(arr);
    }
    j["units"] = std::move(us);
    std::string tmp = path + ".tmp";
    {
      std::ofstream out(tmp);
      if (!out) throw CheckpointError("cannot write checkpoint: " + tmp);
      out << j.dump();
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0)
      throw CheckpointError("cannot replace checkpoint: " + path);
  }
};

}  // namespace

std::string census_space_estimate(int n, int m) {
  double lg = 0;
  lg += (n * (n - 1) / 2.0) * std::log10(static_cast<double>(n));
  lg += (m * m) * std::log10(static_cast<double>(m > 1 ? m : 2)) * (m > 1);
  double tern_cells = 0;  // multisets of size 3 from n-1 nonzero elements
  double k = n - 1;
  tern_cells = k * (k + 1) * (k + 2) / 6.0;
  lg += m * tern_cells * std::log10(static_cast<double>(n));
  char buf[64];
  std::snprintf(buf, sizeof(buf), "10^%.1f", lg);
  return buf;
}

CensusResult enumerate_models(int n, int m, const CensusOptions& opt) {
  if (n < 1 || m < 1) throw PreconditionError("census requires n >= 1, m >= 1");
  if ((n > 4 || m > 3) && !opt.allow_large)
    throw BudgetError("census guard: n=" + std::to_string(n) +
                      ", m=" + std::to_string(m) +
                      " exceeds the default n <= 4, m <= 3 envelope; raw "
                      "search space is about " +
                      census_space_estimate(n, m) +
                      " assignments (pass the override to proceed)");

  auto t_start = std::chrono::steady_clock::now();
  CensusResult res;
  res.record.n = n;
  res.record.m = m;
  res.record.mode = opt.mode.str();
  res.record.workers = std::max(1, opt.workers);
  res.record.stats.raw_search_space = census_space_estimate(n, m);

  std::vector<std::vector<int>> adds = commutative_monoid_tables(n);
  std::vector<std::vector<int>> gmuls = associative_gamma_tables(m);
  res.record.stats.addition_tables = static_cast<long long>(adds.size());
  res.record.stats.gamma_tables = static_cast<long long>(gmuls.size());

  Checkpoint ck;
  ck.n = n;
  ck.m = m;
  ck.mode = opt.mode.str();
  ck.units_total = static_cast<long long>(adds.size());
  if (opt.resume && !opt.checkpoint_path.empty()) {
    Checkpoint prev = Checkpoint::load(opt.checkpoint_path);
    if (prev.n != n || prev.m != m || prev.mode != opt.mode.str() ||
        prev.units_total != ck.units_total)
      throw CheckpointError("checkpoint does not match this run");
    ck.units = std::move(prev.units);
  }

  std::mutex mtx;
  std::atomic<long long> next_unit{0};
  std::atomic<long long> done_count{0};
  std::atomic<bool> stop{false};
  std::atomic<long long> tern_tables{0}, candidates{0};
  std::vector<std::vector<GammaSemiring>> unit_models(adds.size());
  std::vector<bool> unit_done(adds.size(), false);
  {
    std::lock_guard<std::mutex> lk(mtx);
    for (const auto& [unit, models] : ck.units) {
      unit_done[unit] = true;
      for (const auto& mj : models)
        unit_models[unit].push_back(model_from_json(mj));
    }
  }

  auto worker = [&]() {
    for (;;) {
      if (stop.load()) return;
      long long unit = next_unit.fetch_add(1);
      if (unit >= static_cast<long long>(adds.size())) return;
      {
        std::lock_guard<std::mutex> lk(mtx);
        if (unit_done[unit]) continue;
      }
      const std::vector<int>& add = adds[unit];
      TernSearch search(n, add);
      search.run();
      tern_tables += static_cast<long long>(search.results.size());
      std::vector<GammaSemiring> found;
      const auto& terns = search.results;
      const long long tc = static_cast<long long>(terns.size());
      long long combos = 1;
      for (int i = 0; i < m; ++i) combos *= tc;
      for (const auto& gmul : gmuls) {
        for (long long comb = 0; comb < combos; ++comb) {
          if (stop.load()) return;
          GammaSemiring model;
          model.n = n;
          model.m = m;
          model.add = add;
          model.gmul = gmul;
          model.tern.resize(static_cast<std::size_t>(m) * n * n * n);
          long long v = comb;
          bool ok = true;
          std::vector<int> pick(m);
          for (int g = m - 1; g >= 0; --g) {
            pick[g] = static_cast<int>(v % tc);
            v /= tc;
          }
          for (int g = 0; g < m; ++g)
            std::copy(terns[pick[g]].begin(), terns[pick[g]].end(),
                      model.tern.begin() +
                          static_cast<std::size_t>(g) * n * n * n);
          ++candidates;
          // cross-parameter ternary associativity
          for (int g1 = 0; g1 < m && ok; ++g1)
            for (int g2 = 0; g2 < m && ok; ++g2) {
              if (g1 == g2) continue;
              for (int a = 0; a < n && ok; ++a)
                for (int b = 0; b < n && ok; ++b)
                  for (int c = 0; c < n && ok; ++c) {
                    int abc = model.prod(g1, a, b, c);
                    for (int d = 0; d < n && ok; ++d)
                      for (int e2 = 0; e2 < n && ok; ++e2) {
                        int left = model.prod(g2, abc, d, e2);
                        int mid = model.prod(g2, a,
                                             model.prod(g1, b, c, d), e2);
                        int right = model.prod(
                            g2, a, b, model.prod(g1, c, d, e2));
                        ok = left == mid && mid == right;
                      }
                  }
            }
          if (ok && opt.mode.strict_t5) {
            for (int g1 = 0; g1 < m && ok; ++g1)
              for (int g2 = 0; g2 < m && ok; ++g2)
                for (int a = 0; a < n && ok; ++a)
                  for (int b = 0; b < n && ok; ++b)
                    for (int c = 0; c < n && ok; ++c) {
                      int abc = model.prod(g1, a, b, c);
                      int rhs = model.prod(model.gprod(g1, g2), a, b, c);
                      for (int d = 0; d < n && ok; ++d)
                        for (int e2 = 0; e2 < n && ok; ++e2)
                          ok = model.prod(g2, abc, d, e2) == rhs;
                    }
          }
          if (!ok) continue;
          if (canonical_form(model) != encode_tables(model)) continue;
          auto ids = find_identity_idempotents(model);
          model.e = ids.empty() ? std::optional<int>() : std::optional<int>(ids.front());
          model.gamma0 = 0;
          found.push_back(std::move(model));
        }
      }
      {
        std::lock_guard<std::mutex> lk(mtx);
        unit_models[unit] = std::move(found);
        unit_done[unit] = true;
        if (!opt.checkpoint_path.empty()) {
          ck.units[unit].clear();
          for (const auto& mm : unit_models[unit])
            ck.units[unit].push_back(model_to_json(mm));
          ck.save(opt.checkpoint_path);
        }
      }
      long long nd = done_count.fetch_add(1) + 1;
      if (opt.stop_after_units > 0 && nd >= opt.stop_after_units)
        stop.store(true);
    }
  };

  int nw = std::max(1, opt.workers);
  if (nw == 1) {
    worker();
  } else {
    std::vector<std::thread> threads;
    for (int i = 0; i < nw; ++i) threads.emplace_back(worker);
    for (auto& th : threads) th.join();
  }

  res.record.stats.ternary_tables = tern_tables.load();
  res.record.stats.candidates = candidates.load();
  bool all_done = true;
  for (bool d : unit_done) all_done &= d;
  res.record.complete = all_done;
  for (auto& models : unit_models)
    for (auto& mm : models) res.models.push_back(std::move(mm));
  std::sort(res.models.begin(), res.models.end(),
            [](const GammaSemiring& a, const GammaSemiring& b) {
              return encode_tables(a) < encode_tables(b);
            });
  res.record.count = static_cast<long long>(res.models.size());
  res.record.wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                           std::chrono::steady_clock::now() - t_start)
                           .count();
  return res;
}

std::string census_ndjson(const CensusResult& r) {
  std::string out;
  for (const auto& model : r.models) {
    out += model_to_json(model).dump();
    out += "\n";
  }
  ojson summary;
  summary["count"] = r.record.count;
  summary["n"] = r.record.n;
  summary["m"] = r.record.m;
  summary["mode"] = r.record.mode;
  out += summary.dump();
  out += "\n";
  return out;
}

ojson CensusRecord::to_json(bool with_timing) const {
  ojson j;
  j["n"] = n;
  j["m"] = m;
  j["mode"] = mode;
  j["count"] = count;
  j["workers"] = workers;
  j["complete"] = complete;
  j["iso_policy"] = iso_policy;
  ojson s;
  s["addition_tables"] = stats.addition_tables;
  s["gamma_tables"] = stats.gamma_tables;
  s["ternary_tables"] = stats.ternary_tables;
  s["candidates"] = stats.candidates;
  s["raw_search_space"] = stats.raw_search_space;
  j["search"] = std::move(s);
  if (with_timing) j["wall_ms"] = wall_ms;
  return j;
}

}  // namespace tgs
