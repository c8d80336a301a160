// accumsim command line front end: dataset preparation, simulation runs and
// ablation sweeps.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <exception>
#include <fstream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "accumsim/algorithms.hpp"
#include "accumsim/graph.hpp"
#include "accumsim/preprocess.hpp"
#include "accumsim/simulator.hpp"
#include "sha256.hpp"

using nlohmann::json;
using namespace accumsim;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitInput = 3;
constexpr int kExitCapacity = 4;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << content;
}

Graph load_any_graph(const std::string& path) {
  {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open graph: " + path);
    char magic[4] = {};
    in.read(magic, 4);
    if (in && std::memcmp(magic, "AGRF", 4) == 0) return load_graph_binary(path);
  }
  return load_edge_list(path, true);
}

struct RunOptions {
  std::string graph_path;
  std::string algo = "bfs";
  std::string mode = "cfg5";
  PipelineConfig cfg;
  std::uint32_t partitions = 1;
  VertexId root = 0;
  double epsilon = 0.15;
  std::uint32_t iterations = 10;
  std::uint64_t seed = 0;
  std::string out_prefix;
  std::string config_path;
};

json config_to_json(const PipelineConfig& cfg, std::uint64_t seed) {
  return json{{"mode", mode_name(cfg.mode)},
              {"vertex_pipelines", cfg.vertex_pipelines},
              {"edge_lanes", cfg.edge_lanes},
              {"banks", cfg.banks},
              {"bank_queue_depth", cfg.bank_queue_depth},
              {"reorder_capacity", cfg.reorder_capacity},
              {"dest_replicas", cfg.dest_replicas},
              {"dram_latency", cfg.dram_latency},
              {"prefetch_depth", cfg.prefetch_depth},
              {"onchip_bytes", cfg.onchip_bytes},
              {"ideal_vertex_memory", cfg.ideal_vertex_memory},
              {"seed", seed}};
}

void apply_config_file(PipelineConfig& cfg, const std::string& path) {
  const json j = json::parse(slurp(path));
  if (j.contains("mode")) cfg.mode = mode_from_string(j["mode"].get<std::string>());
  if (j.contains("vertex_pipelines")) cfg.vertex_pipelines = j["vertex_pipelines"];
  if (j.contains("edge_lanes")) cfg.edge_lanes = j["edge_lanes"];
  if (j.contains("banks")) cfg.banks = j["banks"];
  if (j.contains("bank_queue_depth")) cfg.bank_queue_depth = j["bank_queue_depth"];
  if (j.contains("reorder_capacity")) cfg.reorder_capacity = j["reorder_capacity"];
  if (j.contains("dest_replicas")) cfg.dest_replicas = j["dest_replicas"];
  if (j.contains("dram_latency")) cfg.dram_latency = j["dram_latency"];
  if (j.contains("prefetch_depth")) cfg.prefetch_depth = j["prefetch_depth"];
  if (j.contains("onchip_bytes")) cfg.onchip_bytes = j["onchip_bytes"];
  if (j.contains("ideal_vertex_memory")) cfg.ideal_vertex_memory = j["ideal_vertex_memory"];
}

json stats_to_json(const SimStats& s, const std::string& algo,
                   const PipelineConfig& cfg, std::uint32_t partitions,
                   std::uint64_t seed) {
  json j;
  j["schema_version"] = s.schema_version;
  j["algo"] = algo;
  j["cycles"] = s.total_cycles;
  j["edges_traversed"] = s.edges_traversed;
  j["teps"] = s.teps;
  j["stalls"] = json{{"atomic", s.stalls.atomic},
                     {"bank_conflict", s.stalls.bank_conflict},
                     {"reorder", s.stalls.reorder},
                     {"scheduler", s.stalls.scheduler},
                     {"crossbar", s.stalls.crossbar},
                     {"dram", s.stalls.dram}};
  j["iterations"] = s.iterations;
  j["partitions"] = partitions;
  j["productive_cycles"] = s.productive_cycles;
  j["sub_iterations"] = s.sub_iterations;
  j["events"] = json{{"update_stage_busy_cycles", s.update_stage_busy_cycles},
                     {"source_read_requests", s.source_read_requests},
                     {"dest_read_requests", s.dest_read_requests},
                     {"writeback_requests", s.writeback_requests},
                     {"crossbar_collisions", s.crossbar_collisions},
                     {"reorder_token_stalls", s.reorder_token_stalls},
                     {"oversubscribed_windows", s.oversubscribed_windows},
                     {"bank_read_busy_cycles", s.bank_read_busy_cycles},
                     {"write_wait_cycles", s.write_wait_cycles},
                     {"partition_reload_cycles", s.partition_reload_cycles}};
  j["config"] = config_to_json(cfg, seed);
  return j;
}

std::string format_teps(double teps) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", teps);
  return buf;
}

SimStats dispatch_run(const Graph& g, const RunOptions& opt) {
  if (opt.algo == "bfs") {
    return run(g, bfs_spec(opt.root), opt.cfg, opt.partitions).stats;
  }
  if (opt.algo == "pr") {
    return run(g, pagerank_spec(opt.epsilon, opt.iterations), opt.cfg,
               opt.partitions)
        .stats;
  }
  if (opt.algo == "wcc") {
    return run(symmetrize(g), wcc_spec(), opt.cfg, opt.partitions).stats;
  }
  throw CLI::ValidationError("--algo", "unknown algorithm: " + opt.algo);
}

// Bounded fan-out over configuration indexes; results land by index so
// aggregation order is stable regardless of completion order.
void parallel_for_index(std::size_t n, const std::function<void(std::size_t)>& f) {
  unsigned threads = std::thread::hardware_concurrency();
  if (const char* env = std::getenv("ACCUMSIM_THREADS")) {
    threads = static_cast<unsigned>(std::max(1, std::atoi(env)));
  }
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n));
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t) {
    pool.emplace_back([&, t] {
      try {
        for (std::size_t i = next++; i < n; i = next++) f(i);
      } catch (...) {
        errors[t] = std::current_exception();
      }
    });
  }
  for (auto& th : pool) th.join();
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

// ---------------------------------------------------------------------------
// prepare
// ---------------------------------------------------------------------------

int cmd_prepare(const std::string& input, const std::string& out_prefix,
                bool undirected, std::uint32_t rearrange_banks,
                std::uint32_t partitions) {
  const Graph loaded = load_edge_list(input, !undirected);

  json manifest;
  manifest["schema_version"] = 1;
  manifest["command"] = "prepare";
  manifest["input"] = json{{"path", input}, {"sha256", sha256_hex(slurp(input))}};
  manifest["options"] = json{{"undirected", undirected},
                             {"rearrange", rearrange_banks},
                             {"partitions", partitions}};
  manifest["graph"] = json{{"num_vertices", loaded.num_vertices()},
                           {"num_edges", loaded.num_edges()}};

  const auto maybe_rearranged = [&](const Graph& g) {
    if (rearrange_banks == 0) return g;
    const Graph r = rearrange_edges(g, {rearrange_banks});
    // Built-in check: every per-vertex neighbor multiset must be preserved.
    for (VertexId v = 0; v < g.num_vertices(); ++v) {
      auto a = g.neighbors_of(v);
      auto b = r.neighbors_of(v);
      std::vector<VertexId> sa(a.begin(), a.end()), sb(b.begin(), b.end());
      std::sort(sa.begin(), sa.end());
      std::sort(sb.begin(), sb.end());
      if (sa != sb)
        throw std::logic_error("rearrange check failed: neighbor multiset changed");
    }
    return r;
  };

  json outputs = json::array();
  if (partitions <= 1) {
    const Graph out = maybe_rearranged(loaded);
    const std::string path = out_prefix + ".agrf";
    save_graph_binary(out, path);
    outputs.push_back(json{{"path", path},
                           {"sha256", sha256_hex(slurp(path))},
                           {"part_index", 0},
                           {"vertex_range", {0, out.num_vertices()}}});
  } else {
    for (const auto& part : partition_by_destination(loaded, partitions)) {
      const Graph out = maybe_rearranged(part.sub_graph);
      const std::string path =
          out_prefix + ".part" + std::to_string(part.part_index) + ".agrf";
      save_graph_binary(out, path);
      outputs.push_back(json{{"path", path},
                             {"sha256", sha256_hex(slurp(path))},
                             {"part_index", part.part_index},
                             {"vertex_range", {part.begin_vertex, part.end_vertex}}});
    }
  }
  manifest["outputs"] = outputs;
  if (rearrange_banks > 0) manifest["rearrange_check"] = "ok";
  spit(out_prefix + ".manifest.json", manifest.dump(2) + "\n");
  std::printf("[accumsim] prepared %s: %llu vertices, %llu edges, %u part(s)\n",
              input.c_str(),
              static_cast<unsigned long long>(loaded.num_vertices()),
              static_cast<unsigned long long>(loaded.num_edges()), partitions);
  return 0;
}

// ---------------------------------------------------------------------------
// run
// ---------------------------------------------------------------------------

int cmd_run(const RunOptions& opt) {
  const Graph g = load_any_graph(opt.graph_path);
  const SimStats stats = dispatch_run(g, opt);

  const json j = stats_to_json(stats, opt.algo, opt.cfg, opt.partitions, opt.seed);
  const std::string csv_header =
      "algo,mode,vertex_pipelines,banks,reorder_capacity,dram_latency,"
      "partitions,iterations,cycles,edges_traversed,teps,top_stall\n";
  std::ostringstream row;
  row << opt.algo << ',' << mode_name(opt.cfg.mode) << ','
      << opt.cfg.vertex_pipelines << ',' << opt.cfg.banks << ','
      << opt.cfg.reorder_capacity << ',' << opt.cfg.dram_latency << ','
      << opt.partitions << ',' << stats.iterations << ',' << stats.total_cycles
      << ',' << stats.edges_traversed << ',' << format_teps(stats.teps) << ','
      << stats.top_stall_cause() << '\n';

  if (!opt.out_prefix.empty()) {
    spit(opt.out_prefix + ".stats.json", j.dump(2) + "\n");
    spit(opt.out_prefix + ".csv", csv_header + row.str());
  }
  std::printf("[accumsim] %s mode=%s cycles=%llu gteps=%s top-stall=%s\n",
              opt.algo.c_str(), mode_name(opt.cfg.mode),
              static_cast<unsigned long long>(stats.total_cycles),
              format_teps(stats.teps / 1e9).c_str(),
              stats.top_stall_cause().c_str());
  return 0;
}

// ---------------------------------------------------------------------------
// sweep
// ---------------------------------------------------------------------------

struct SweepResult {
  std::string label;
  std::string mode;
  std::uint32_t vertex_pipelines = 0;
  std::uint32_t partitions = 1;
  SimStats stats;
  double speedup = 1.0;
};

int cmd_sweep(const RunOptions& opt, const std::string& kind) {
  const Graph g = load_any_graph(opt.graph_path);

  std::vector<RunOptions> configs;
  if (kind == "modes") {
    for (Mode mode : {Mode::Baseline, Mode::Cfg1, Mode::Cfg2, Mode::Cfg3,
                      Mode::Cfg4, Mode::Cfg5}) {
      RunOptions c = opt;
      c.cfg.mode = mode;
      configs.push_back(c);
    }
  } else if (kind == "pipelines") {
    for (std::uint32_t n : {1u, 2u, 4u, 8u}) {
      RunOptions c = opt;
      c.cfg.mode = Mode::Cfg3;
      c.cfg.vertex_pipelines = n;
      c.cfg.ideal_vertex_memory = true;
      configs.push_back(c);
    }
  } else if (kind == "partitions") {
    for (std::uint32_t k : {1u, 2u, 4u}) {
      RunOptions c = opt;
      c.partitions = k;
      configs.push_back(c);
    }
  } else {
    throw CLI::ValidationError("--sweep", "unknown sweep kind: " + kind);
  }

  std::vector<SweepResult> results(configs.size());
  parallel_for_index(configs.size(), [&](std::size_t i) {
    const RunOptions& c = configs[i];
    SweepResult r;
    r.mode = mode_name(c.cfg.mode);
    r.vertex_pipelines = c.cfg.vertex_pipelines;
    r.partitions = c.partitions;
    if (kind == "modes") r.label = r.mode;
    else if (kind == "pipelines") r.label = "pipelines_" + std::to_string(c.cfg.vertex_pipelines);
    else r.label = "partitions_" + std::to_string(c.partitions);
    r.stats = dispatch_run(g, c);
    results[i] = std::move(r);
  });

  const double reference_cycles = static_cast<double>(results[0].stats.total_cycles);
  for (auto& r : results) {
    r.speedup = r.stats.total_cycles == 0
                    ? 1.0
                    : reference_cycles / static_cast<double>(r.stats.total_cycles);
  }

  std::ostringstream csv;
  csv << "label,mode,vertex_pipelines,partitions,cycles,teps,speedup\n";
  json plot;
  plot["labels"] = json::array();
  plot["cycles"] = json::array();
  plot["teps"] = json::array();
  plot["speedup"] = json::array();
  for (const auto& r : results) {
    csv << r.label << ',' << r.mode << ',' << r.vertex_pipelines << ','
        << r.partitions << ',' << r.stats.total_cycles << ','
        << format_teps(r.stats.teps) << ',' << format_teps(r.speedup) << '\n';
    plot["labels"].push_back(r.label);
    plot["cycles"].push_back(r.stats.total_cycles);
    plot["teps"].push_back(r.stats.teps);
    plot["speedup"].push_back(r.speedup);
  }
  plot["algo"] = opt.algo;
  plot["sweep"] = kind;

  if (!opt.out_prefix.empty()) {
    spit(opt.out_prefix + ".csv", csv.str());
    spit(opt.out_prefix + ".plot.json", plot.dump(2) + "\n");
  }
  std::printf("%s", csv.str().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"accumsim: cycle-level graph accelerator simulator"};
  app.require_subcommand(1);

  // prepare
  auto* prepare = app.add_subcommand("prepare", "convert an edge list into binary graph files");
  std::string prep_input, prep_out;
  bool prep_undirected = false;
  std::uint32_t prep_rearrange = 0, prep_partitions = 1;
  prepare->add_option("input", prep_input, "edge list file")->required();
  prepare->add_option("--out", prep_out, "output path prefix")->required();
  prepare->add_flag("--undirected", prep_undirected, "insert each edge in both directions");
  prepare->add_option("--rearrange", prep_rearrange, "rearrange edges for this many banks");
  prepare->add_option("--partitions", prep_partitions, "split into K destination ranges");

  // run
  auto* runc = app.add_subcommand("run", "simulate one algorithm on a graph");
  RunOptions opt;
  runc->add_option("graph", opt.graph_path, "graph file (AGRF binary or edge list)")->required();
  runc->add_option("--algo", opt.algo, "bfs, pr or wcc")
      ->check(CLI::IsMember({"bfs", "pr", "wcc"}));
  std::string mode_str = "cfg5";
  auto* o_mode = runc->add_option(
      "--mode", mode_str, "serialized, baseline, cfg1, cfg2, cfg3, cfg4 or cfg5");
  auto* o_pipes = runc->add_option("--vertex-pipelines", opt.cfg.vertex_pipelines, "vertex pipeline count");
  auto* o_banks = runc->add_option("--banks", opt.cfg.banks, "on-chip memory banks");
  auto* o_reorder = runc->add_option("--reorder", opt.cfg.reorder_capacity, "reorder buffer capacity");
  auto* o_lat = runc->add_option("--dram-latency", opt.cfg.dram_latency, "edge fetch latency in cycles");
  auto* o_root = runc->add_option("--root", opt.root, "BFS root vertex");
  auto* o_eps = runc->add_option("--epsilon", opt.epsilon, "PageRank constant");
  auto* o_iters = runc->add_option("--iterations", opt.iterations, "PageRank iteration count");
  runc->add_option("--seed", opt.seed, "seed recorded in outputs");
  runc->add_option("--partitions", opt.partitions, "destination-range partitions");
  runc->add_option("--out", opt.out_prefix, "output path prefix");
  runc->add_option("--config", opt.config_path, "JSON config file");
  auto* o_ideal = runc->add_flag("--ideal-memory", opt.cfg.ideal_vertex_memory,
                                 "serve any 16 vertex requests per cycle");

  // sweep
  auto* sweep = app.add_subcommand("sweep", "run an ablation sweep");
  std::string sweep_kind = "modes";
  RunOptions sopt;
  std::string sweep_mode_str = "cfg5";
  sweep->add_option("graph", sopt.graph_path, "graph file")->required();
  sweep->add_option("--algo", sopt.algo, "bfs, pr or wcc")
      ->check(CLI::IsMember({"bfs", "pr", "wcc"}));
  sweep->add_option("--sweep", sweep_kind, "modes, pipelines or partitions")
      ->check(CLI::IsMember({"modes", "pipelines", "partitions"}));
  sweep->add_option("--mode", sweep_mode_str, "pipeline mode for partition sweeps");
  sweep->add_option("--root", sopt.root, "BFS root vertex");
  sweep->add_option("--epsilon", sopt.epsilon, "PageRank constant");
  sweep->add_option("--iterations", sopt.iterations, "PageRank iteration count");
  sweep->add_option("--seed", sopt.seed, "seed recorded in outputs");
  sweep->add_option("--out", sopt.out_prefix, "output path prefix");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (prepare->parsed()) {
      return cmd_prepare(prep_input, prep_out, prep_undirected, prep_rearrange,
                         prep_partitions);
    }
    if (runc->parsed()) {
      opt.cfg.mode = mode_from_string(mode_str);
      if (!opt.config_path.empty()) {
        // Explicit flags override the config file.
        PipelineConfig from_file;
        apply_config_file(from_file, opt.config_path);
        if (!*o_mode) opt.cfg.mode = from_file.mode;
        if (!*o_pipes) opt.cfg.vertex_pipelines = from_file.vertex_pipelines;
        if (!*o_banks) opt.cfg.banks = from_file.banks;
        if (!*o_reorder) opt.cfg.reorder_capacity = from_file.reorder_capacity;
        if (!*o_lat) opt.cfg.dram_latency = from_file.dram_latency;
        if (!*o_ideal) opt.cfg.ideal_vertex_memory = from_file.ideal_vertex_memory;
        opt.cfg.bank_queue_depth = from_file.bank_queue_depth;
        opt.cfg.dest_replicas = from_file.dest_replicas;
        opt.cfg.prefetch_depth = from_file.prefetch_depth;
        opt.cfg.onchip_bytes = from_file.onchip_bytes;
      }
      if (*o_root && opt.algo != "bfs")
        throw CLI::ValidationError("--root", "only valid with --algo bfs");
      if ((*o_eps || *o_iters) && opt.algo != "pr")
        throw CLI::ValidationError("--epsilon/--iterations", "only valid with --algo pr");
      return cmd_run(opt);
    }
    if (sweep->parsed()) {
      sopt.cfg.mode = mode_from_string(sweep_mode_str);
      return cmd_sweep(sopt, sweep_kind);
    }
  } catch (const CLI::ValidationError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const CapacityError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitCapacity;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitInput;
  }
  return 0;
}
