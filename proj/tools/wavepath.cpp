#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "wavepath/decomposition.hpp"
#include "wavepath/engine.hpp"
#include "wavepath/oracle.hpp"
#include "wavepath/render.hpp"

using namespace wavepath;
using nlohmann::ordered_json;

namespace {

int log_level() {
  const char* v = std::getenv("SPW_LOG");
  if (!v) return 0;
  std::string s = v;
  if (s == "debug") return 2;
  if (s == "info") return 1;
  return 0;
}

void logline(int level, const std::string& msg) {
  if (log_level() >= level) std::cerr << "[wavepath] " << msg << "\n";
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

Instance load_instance(const std::string& path) {
  logline(2, "loading " + path);
  return parse_instance(slurp(path));
}

std::string trace_json(const PathResult& r) {
  ordered_json arr = ordered_json::array();
  for (const auto& t : r.trace)
    arr.push_back({{"type", t.type}, {"d", t.d}, {"detail", t.detail}});
  return arr.dump(2) + "\n";
}

struct RandomSpec {
  unsigned seed = 1;
  int m = 8, k = 8;
};

RandomSpec parse_random(const std::string& s) {
  RandomSpec r;
  if (std::sscanf(s.c_str(), "%u,%d,%d", &r.seed, &r.m, &r.k) != 3)
    throw CLI::ValidationError("--random", "expected seed,m,k");
  return r;
}

int cmd_solve(const std::string& in, const std::string& out, const std::string& trace_out,
              const std::string& rewind) {
  Instance inst;
  try {
    inst = load_instance(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  EngineOptions opts;
  opts.rewind =
      rewind == "replay" ? EngineOptions::Rewind::Replay : EngineOptions::Rewind::Offset;
  opts.collect_trace = !trace_out.empty();
  try {
    PathResult r = solve_instance(inst, opts);
    spit(out, serialize_result(r));
    if (!trace_out.empty()) spit(trace_out, trace_json(r));
  } catch (const DisconnectedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_oracle(const std::string& in, const std::string& out) {
  Instance inst;
  try {
    inst = load_instance(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  try {
    spit(out, serialize_result(oracle_distance(inst)));
  } catch (const DisconnectedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_compare(const std::string& in, const std::string& random_spec, int count,
                bool inject_fault) {
  std::vector<Instance> instances;
  if (!in.empty()) {
    try {
      instances.push_back(load_instance(in));
    } catch (const std::exception& e) {
      std::cerr << "error: " << e.what() << "\n";
      return 1;
    }
  } else {
    RandomSpec rs = parse_random(random_spec);
    for (int i = 0; i < count; ++i)
      instances.push_back(random_instance(rs.seed + static_cast<unsigned>(i), rs.m, rs.k));
  }

  double max_err = 0.0;
  int path_failures = 0, runs = 0;
  std::map<std::string, std::uint64_t> totals;
  for (std::size_t i = 0; i < instances.size(); ++i) {
    const Instance& inst = instances[i];
    try {
      PathResult e = solve_instance(inst);
      PathResult o = oracle_distance(inst);
      if (inject_fault) e.distance += 1e-3 * (1.0 + e.distance);
      double err = std::abs(e.distance - o.distance) / std::max(1.0, o.distance);
      max_err = std::max(max_err, err);
      bool ok = e.path.size() >= 2 && e.path.front() == inst.s && e.path.back() == inst.t;
      for (std::size_t j = 0; ok && j + 1 < e.path.size(); ++j)
        ok = segment_visible(inst, e.path[j], e.path[j + 1]);
      if (!ok) ++path_failures;
      for (const auto& [k, v] : e.counters) totals[k] += v;
      ++runs;
      logline(2, "instance " + std::to_string(i) + " err " + std::to_string(err));
    } catch (const DisconnectedError&) {
      logline(1, "instance " + std::to_string(i) + " disconnected, skipped");
    }
  }
  ordered_json rep;
  rep["instances"] = runs;
  rep["max_relative_error"] = max_err;
  rep["path_validity_failures"] = path_failures;
  rep["counters"] = totals;
  std::cout << rep.dump(2) << "\n";
  return (max_err > 1e-6 || path_failures > 0) ? 2 : 0;
}

int cmd_decompose(const std::string& in, const std::string& out) {
  Instance inst;
  try {
    inst = load_instance(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  auto tri = triangulate(inst);
  auto dec = build_decomposition(tri);
  spit(out, dump_decomposition(dec, tri));
  return 0;
}

int cmd_trace(const std::string& in, const std::string& out) {
  Instance inst;
  try {
    inst = load_instance(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  EngineOptions opts;
  opts.collect_trace = true;
  opts.full_sweep = true;
  try {
    spit(out, trace_json(solve_instance(inst, opts)));
  } catch (const DisconnectedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}

int cmd_render(const std::string& in, const std::string& what, const std::string& out) {
  Instance inst;
  try {
    inst = load_instance(in);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  std::string svg;
  try {
    if (what == "domain") {
      svg = render_domain(inst);
    } else if (what == "decomposition") {
      svg = render_decomposition(inst);
    } else if (what == "path") {
      svg = render_path(inst, solve_instance(inst));
    } else if (what.rfind("wavefront:", 0) == 0) {
      double d = std::stod(what.substr(10));
      EngineOptions opts;
      opts.collect_trace = true;
      opts.full_sweep = true;
      svg = render_wavefront(inst, solve_instance(inst, opts), d);
    } else {
      std::cerr << "error: unknown --what " << what << "\n";
      return 1;
    }
  } catch (const DisconnectedError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  spit(out, svg);
  return 0;
}

int cmd_bench(const std::string& m_list, int k, int seeds) {
  std::vector<int> ms;
  {
    std::stringstream ss(m_list);
    std::string tok;
    while (std::getline(ss, tok, ',')) ms.push_back(std::stoi(tok));
  }
  static const char* kTypes[] = {"events_type1", "events_type2", "events_type3",
                                 "events_type4"};
  ordered_json rows = ordered_json::array();
  std::map<std::string, double> prev;
  bool flagged = false;
  for (int m : ms) {
    std::map<std::string, double> mean;
    std::uint64_t peak = 0;
    int runs = 0;
    for (int s = 1; s <= seeds; ++s) {
      Instance inst;
      try {
        inst = random_instance(static_cast<unsigned>(s), m, k);
      } catch (const std::exception&) {
        continue;
      }
      EngineOptions opts;
      opts.full_sweep = true;
      try {
        PathResult r = solve_instance(inst, opts);
        for (const char* t : kTypes) mean[t] += static_cast<double>(r.counters[t]);
        peak = std::max(peak, r.counters["peak_bunches"]);
        ++runs;
      } catch (const DisconnectedError&) {
      }
    }
    ordered_json row;
    row["m"] = m;
    row["runs"] = runs;
    row["peak_bunches"] = peak;
    for (const char* t : kTypes) {
      double v = runs ? mean[t] / runs : 0.0;
      row[t] = v;
      if (prev.count(t) && prev[t] > 0) {
        double ratio = v / prev[t];
        row[std::string(t) + "_ratio"] = ratio;
        if (ratio > 2.5) {
          row[std::string(t) + "_flag"] = true;
          flagged = true;
        }
      }
      mean[t] = v;
    }
    prev = mean;
    rows.push_back(row);
  }
  ordered_json rep;
  rep["k"] = k;
  rep["seeds"] = seeds;
  rep["rows"] = rows;
  rep["flagged"] = flagged;
  std::cout << rep.dump(2) << "\n";
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"near-optimal Euclidean shortest paths in polygonal domains"};
  app.require_subcommand(1);

  std::string in, out, trace_out, rewind = "offset", random_spec, what = "domain";
  std::string m_list = "5,10,20,40";
  int count = 1, k = 8, seeds = 20;
  bool inject_fault = false;

  auto* solve = app.add_subcommand("solve", "solve an instance");
  solve->add_option("--in", in)->required();
  solve->add_option("--out", out);
  solve->add_option("--trace", trace_out);
  solve->add_option("--rewind-mode", rewind)
      ->check(CLI::IsMember({"offset", "replay"}));

  auto* oracle = app.add_subcommand("oracle", "solve via the visibility-graph oracle");
  oracle->add_option("--in", in)->required();
  oracle->add_option("--out", out);

  auto* compare = app.add_subcommand("compare", "engine vs oracle report");
  compare->add_option("--in", in);
  compare->add_option("--random", random_spec);
  compare->add_option("--count", count);
  compare->add_flag("--inject-fault", inject_fault)->group("");

  auto* decompose = app.add_subcommand("decompose", "dump the corridor decomposition");
  decompose->add_option("--in", in)->required();
  decompose->add_option("--out", out);

  auto* trace = app.add_subcommand("trace", "full-sweep event trace");
  trace->add_option("--in", in)->required();
  trace->add_option("--out", out);

  auto* render = app.add_subcommand("render", "SVG render");
  render->add_option("--in", in)->required();
  render->add_option("--what", what);
  render->add_option("--out", out);

  auto* bench = app.add_subcommand("bench", "event-count scaling report");
  bench->add_option("--m-list", m_list);
  bench->add_option("--k", k);
  bench->add_option("--seeds", seeds);

  CLI11_PARSE(app, argc, argv);

  try {
    if (solve->parsed()) return cmd_solve(in, out, trace_out, rewind);
    if (oracle->parsed()) return cmd_oracle(in, out);
    if (compare->parsed()) {
      if (in.empty() && random_spec.empty()) {
        std::cerr << "error: compare needs --in or --random\n";
        return 1;
      }
      return cmd_compare(in, random_spec, count, inject_fault);
    }
    if (decompose->parsed()) return cmd_decompose(in, out);
    if (trace->parsed()) return cmd_trace(in, out);
    if (render->parsed()) return cmd_render(in, what, out);
    if (bench->parsed()) return cmd_bench(m_list, k, seeds);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
