// fsdp-plan: analytical planner for transformer training under FSDP/ZeRO.
// Subcommands: estimate, bounds, search, sweep, validate.
// Exit codes: 0 ok, 1 bad input, 2 infeasible, 3 validation flagged records.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "fsdpplan/bounds.hpp"
#include "fsdpplan/config_io.hpp"
#include "fsdpplan/measurements.hpp"
#include "fsdpplan/model_math.hpp"
#include "fsdpplan/presets.hpp"
#include "fsdpplan/search.hpp"
#include "fsdpplan/types.hpp"
#include "render.hpp"

namespace {

using namespace fsdpplan;
using cli::Document;
using cli::KvSection;
using cli::TableSection;
using cli::Value;

constexpr int kExitOk = 0;
constexpr int kExitBadInput = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitFlagged = 3;

struct OutputArgs {
  std::string format = "table";
  std::string out_path;
  int precision = 3;
};

struct SpecArgs {
  std::string model, model_config;
  std::string cluster, cluster_config;
  long long num_gpus = 0;  // 0 keeps the preset/config value
  long long seq_len = 0;   // 0 keeps the model value
};

struct PlanArgs {
  double gamma = 0.0;
  double alpha = 1.0;
  std::string stage = "zero3";
  long long batch_tokens = 0;  // 0 = derive from free memory
};

struct GridArgs {
  GridParams grid;
  std::string stages = "zero12,zero3";
  std::string objective = "mfu";
  int threads = 0;
};

void add_output_args(CLI::App* cmd, OutputArgs& a) {
  cmd->add_option("--format", a.format, "output format: table, csv, or json")
      ->check(CLI::IsMember({"table", "csv", "json"}));
  cmd->add_option("--out", a.out_path, "write the rendering to a file instead of stdout");
  cmd->add_option("--precision", a.precision, "decimal places in table/csv output")
      ->check(CLI::Range(0, 12));
}

void add_spec_args(CLI::App* cmd, SpecArgs& a) {
  cmd->add_option("--model", a.model, "model preset name (1.3b .. 310b)");
  cmd->add_option("--model-config", a.model_config, "model JSON file instead of a preset");
  cmd->add_option("--cluster", a.cluster, "cluster preset name");
  cmd->add_option("--cluster-config", a.cluster_config, "cluster JSON file instead of a preset");
  cmd->add_option("-N,--num-gpus", a.num_gpus, "override the cluster GPU count");
  cmd->add_option("--seq-len", a.seq_len, "override the model sequence length");
}

void add_plan_args(CLI::App* cmd, PlanArgs& a) {
  cmd->add_option("--gamma", a.gamma, "fraction of activations kept live (0 = full recompute)");
  cmd->add_option("--alpha", a.alpha, "assumed compute-phase HFU");
  cmd->add_option("--stage", a.stage, "ZeRO stage: zero3 or zero12");
  cmd->add_option("--batch-tokens", a.batch_tokens,
                  "per-GPU tokens per step (default: fill free memory)");
}

void add_grid_args(CLI::App* cmd, GridArgs& a) {
  cmd->add_option("--alpha-min", a.grid.alpha_min, "grid start for the assumed HFU");
  cmd->add_option("--alpha-max", a.grid.alpha_max, "grid end for the assumed HFU");
  cmd->add_option("--alpha-step", a.grid.alpha_step, "grid step for the assumed HFU");
  cmd->add_option("--gamma-min", a.grid.gamma_min, "grid start for gamma");
  cmd->add_option("--gamma-max", a.grid.gamma_max, "grid end for gamma");
  cmd->add_option("--gamma-step", a.grid.gamma_step, "grid step for gamma");
  cmd->add_option("--stages", a.stages, "comma list of ZeRO stages to search");
  cmd->add_option("--objective", a.objective, "search objective: mfu, hfu, or tgs")
      ->check(CLI::IsMember({"mfu", "hfu", "tgs"}));
  cmd->add_option("--threads", a.threads, "worker threads (0 = serial)");
}

GridParams resolve_grid(const GridArgs& a) {
  GridParams g = a.grid;
  g.objective = objective_from_string(a.objective);
  g.stage12 = g.stage3 = false;
  std::istringstream in(a.stages);
  std::string tok;
  while (std::getline(in, tok, ',')) {
    if (tok.empty()) continue;
    if (zero_stage_from_string(tok) == ZeroStage::Stage3)
      g.stage3 = true;
    else
      g.stage12 = true;
  }
  if (!g.stage12 && !g.stage3) throw ParseError("--stages lists no ZeRO stage");
  return g;
}

ModelSpec resolve_model(const PresetCatalog& cat, const SpecArgs& a) {
  if (!a.model_config.empty() && !a.model.empty())
    throw ParseError("pass --model or --model-config, not both");
  ModelSpec m;
  if (!a.model_config.empty())
    m = load_model_config(a.model_config);
  else if (!a.model.empty())
    m = cat.model_or_throw(a.model);
  else
    throw ParseError("a model is required: --model <preset> or --model-config <file>");
  if (a.seq_len > 0) m.seq_len = a.seq_len;
  m.validate();
  return m;
}

ClusterSpec resolve_cluster(const PresetCatalog& cat, const SpecArgs& a) {
  if (!a.cluster_config.empty() && !a.cluster.empty())
    throw ParseError("pass --cluster or --cluster-config, not both");
  ClusterSpec c;
  if (!a.cluster_config.empty())
    c = load_cluster_config(a.cluster_config);
  else if (!a.cluster.empty())
    c = cat.cluster_or_throw(a.cluster);
  else
    throw ParseError("a cluster is required: --cluster <preset> or --cluster-config <file>");
  if (a.num_gpus > 0) c.num_gpus = a.num_gpus;
  c.validate();
  return c;
}

TrainPlan resolve_plan(const PlanArgs& a) {
  TrainPlan p;
  p.gamma = a.gamma;
  p.assumed_hfu = a.alpha;
  p.stage = zero_stage_from_string(a.stage);
  if (a.batch_tokens > 0) p.batch_tokens = a.batch_tokens;
  p.validate();
  return p;
}

KvSection model_section(const ModelSpec& m) {
  return {"model",
          {{"name", m.name},
           {"params", param_count(m)},
           {"layers", m.layers},
           {"hidden", m.hidden},
           {"heads", m.heads},
           {"seq_len", m.seq_len},
           {"bytes_per_value", static_cast<long long>(m.bytes_per_value)}}};
}

KvSection cluster_section(const ClusterSpec& c) {
  return {"cluster",
          {{"name", c.name},
           {"num_gpus", c.num_gpus},
           {"gpu_mem_gib", c.gpu_mem_bytes / kGiB},
           {"reserved_gib", c.reserved_bytes / kGiB},
           {"peak_tflops", c.peak_flops / 1e12},
           {"bandwidth_gbps", c.bandwidth_bps * 8.0 / 1e9},
           {"latency_s", c.latency_s}}};
}

KvSection plan_section(const TrainPlan& p) {
  KvSection sec{"plan",
                {{"stage", std::string(to_string(p.stage))},
                 {"gamma", p.gamma},
                 {"assumed_hfu", p.assumed_hfu}}};
  sec.items.emplace_back("batch_tokens",
                         p.batch_tokens ? Value(*p.batch_tokens) : Value(std::string("derived")));
  return sec;
}

void perf_items(KvSection& sec, const PerfEstimate& e, long long num_gpus, bool global_tgs) {
  const double tgs = global_tgs ? e.throughput * static_cast<double>(num_gpus) : e.throughput;
  sec.items.insert(sec.items.end(),
                   {{"tokens_per_step", e.tokens},
                    {"t_transfer_s", e.t_transfer},
                    {"t_fwd_s", e.t_fwd},
                    {"t_bwd_s", e.t_bwd},
                    {"t_step_s", e.t_step},
                    {"r_fwd", e.r_fwd},
                    {"r_bwd", e.r_bwd},
                    {global_tgs ? "tokens_per_s_cluster" : "tokens_per_gpu_per_s", tgs},
                    {"hfu", e.hfu},
                    {"mfu", e.mfu}});
}

struct CommandResult {
  Document doc;
  int exit_code = kExitOk;
};

// ---------------------------------------------------------------- estimate

CommandResult cmd_estimate(const PresetCatalog& cat, const SpecArgs& spec, const PlanArgs& plan,
                           bool global_tgs) {
  const ModelSpec m = resolve_model(cat, spec);
  const ClusterSpec c = resolve_cluster(cat, spec);
  const TrainPlan p = resolve_plan(plan);

  CommandResult res;
  res.doc.sections = {model_section(m), cluster_section(c), plan_section(p)};

  const MemoryBreakdown mem = memory_breakdown(m, c, p);
  res.doc.sections.push_back(
      {"memory",
       {{"params_gib", static_cast<double>(mem.params_bytes) / kGiB},
        {"grad_gib", static_cast<double>(mem.grad_bytes) / kGiB},
        {"optimizer_gib", static_cast<double>(mem.optimizer_bytes) / kGiB},
        {"free_gib", mem.free_bytes / kGiB},
        {"act_per_token_mib", mem.act_per_token_bytes / kMiB},
        {"act_total_gib", mem.act_total_bytes / kGiB}}});

  const EvalResult ev = evaluate_point(m, c, p);
  if (!ev.feasible) {
    res.doc.sections.push_back({"infeasible", {{"reason", ev.reason}}});
    res.exit_code = kExitInfeasible;
    return res;
  }
  KvSection perf{"performance", {}};
  perf_items(perf, ev.estimate, c.num_gpus, global_tgs);
  res.doc.sections.push_back(std::move(perf));
  return res;
}

// ------------------------------------------------------------------ bounds

CommandResult cmd_bounds(const PresetCatalog& cat, const SpecArgs& spec, const PlanArgs& plan,
                         bool verbose) {
  const ModelSpec m = resolve_model(cat, spec);
  const ClusterSpec c = resolve_cluster(cat, spec);
  const TrainPlan p = resolve_plan(plan);
  const BoundReport b = bound_report(m, c, p);

  CommandResult res;
  res.doc.sections = {model_section(m), cluster_section(c), plan_section(p)};
  KvSection sec{"bounds", {{"e_max_tokens", b.e_max}}};
  sec.items.emplace_back("hfu_bound", b.hfu_bound);
  if (b.hfu_clamped)
    sec.items.emplace_back("hfu_bound_note", std::string(">=1.0 (compute-limited)"));
  sec.items.emplace_back("mfu_bound", b.mfu_bound);
  if (b.mfu_clamped)
    sec.items.emplace_back("mfu_bound_note", std::string(">=1.0 (compute-limited)"));
  sec.items.emplace_back("k_bound_tokens_per_gpu_per_s", b.k_bound);
  if (verbose) {
    sec.items.insert(sec.items.end(), {{"hfu_bound_tight", b.hfu_bound_tight},
                                       {"mfu_bound_tight", b.mfu_bound_tight},
                                       {"k_bound_tight", b.k_bound_tight}});
  }
  sec.items.emplace_back("binding_resource", std::string(to_string(b.binding)));
  res.doc.sections.push_back(std::move(sec));
  return res;
}

// ------------------------------------------------------------------ search

CommandResult cmd_search(const PresetCatalog& cat, const SpecArgs& spec, const GridArgs& grid_args,
                         const std::string& frontier_path, bool global_tgs, int precision) {
  const ModelSpec m = resolve_model(cat, spec);
  const ClusterSpec c = resolve_cluster(cat, spec);
  const GridParams grid = resolve_grid(grid_args);

  SearchOptions opts;
  opts.num_threads = grid_args.threads;
  opts.collect_frontier = !frontier_path.empty();
  const SearchResult sr = grid_search(m, c, grid, std::nullopt, opts);

  if (!frontier_path.empty()) {
    Document front;
    front.table = TableSection{"frontier",
                               {"stage", "gamma", "assumed_hfu", "tokens_per_step", "t_step_s",
                                "tokens_per_gpu_per_s", "hfu", "mfu", "r_fwd", "r_bwd"},
                               {}};
    for (const FrontierRow& row : sr.frontier)
      front.table->rows.push_back({std::string(to_string(row.plan.stage)), row.plan.gamma,
                                   row.plan.assumed_hfu, row.estimate.tokens,
                                   row.estimate.t_step, row.estimate.throughput,
                                   row.estimate.hfu, row.estimate.mfu, row.estimate.r_fwd,
                                   row.estimate.r_bwd});
    std::ofstream out(frontier_path, std::ios::binary);
    if (!out) throw ParseError("cannot open frontier file '" + frontier_path + "'");
    out << cli::render(front, cli::Format::Csv, precision);
  }

  CommandResult res;
  res.doc.sections = {model_section(m), cluster_section(c)};
  res.doc.sections.push_back({"grid",
                              {{"objective", std::string(to_string(grid.objective))},
                               {"points", grid.point_count()},
                               {"evaluated", sr.evaluated_count},
                               {"feasible", sr.feasible_count}}});
  KvSection best{"best",
                 {{"stage", std::string(to_string(sr.best_plan.stage))},
                  {"gamma", sr.best_plan.gamma},
                  {"assumed_hfu", sr.best_plan.assumed_hfu}}};
  perf_items(best, sr.best_estimate, c.num_gpus, global_tgs);
  best.items.emplace_back(
      "binding_resource",
      std::string(to_string(bound_report(m, c, sr.best_plan).binding)));
  res.doc.sections.push_back(std::move(best));
  return res;
}

// ------------------------------------------------------------------- sweep

CommandResult cmd_sweep(const PresetCatalog& cat, const std::vector<std::string>& model_names,
                        const std::vector<std::string>& cluster_names,
                        std::vector<long long> gpu_counts, const GridArgs& grid_args,
                        long long seq_len, bool global_tgs) {
  std::vector<ModelSpec> models;
  if (model_names.size() == 1 && model_names[0] == "all") {
    models = cat.models;
  } else {
    for (const std::string& name : model_names) models.push_back(cat.model_or_throw(name));
  }
  if (seq_len > 0)
    for (ModelSpec& m : models) m.seq_len = seq_len;

  std::vector<ClusterSpec> clusters;
  if (cluster_names.size() == 1 && cluster_names[0] == "all") {
    clusters = cat.clusters;
  } else {
    for (const std::string& name : cluster_names) clusters.push_back(cat.cluster_or_throw(name));
  }
  if (gpu_counts.empty()) gpu_counts.push_back(512);

  const GridParams grid = resolve_grid(grid_args);
  const std::vector<SweepRow> rows = sweep(models, clusters, gpu_counts, grid);

  CommandResult res;
  res.doc.table = TableSection{
      "sweep",
      {"model", "params", "cluster", "num_gpus", "feasible", "stage", "gamma", "assumed_hfu",
       "tokens_per_step", "mfu", "hfu", global_tgs ? "tokens_per_s_cluster" : "tokens_per_gpu_per_s",
       "log10_tgs", "binding", "note"},
      {}};
  const Value na = std::string("n/a");
  for (const SweepRow& row : rows) {
    if (!row.feasible) {
      res.doc.table->rows.push_back({row.model_name, row.params, row.cluster_name, row.num_gpus,
                                     false, na, na, na, na, na, na, na, na, na, row.reason});
      continue;
    }
    const double tgs = global_tgs
                           ? row.estimate.throughput * static_cast<double>(row.num_gpus)
                           : row.estimate.throughput;
    res.doc.table->rows.push_back({row.model_name, row.params, row.cluster_name, row.num_gpus,
                                   true, std::string(to_string(row.plan.stage)), row.plan.gamma,
                                   row.plan.assumed_hfu, row.estimate.tokens, row.estimate.mfu,
                                   row.estimate.hfu, tgs, std::log10(tgs),
                                   std::string(to_string(row.binding)), std::string()});
  }
  return res;
}

// ---------------------------------------------------------------- validate

CommandResult cmd_validate(const PresetCatalog& cat, const std::vector<std::string>& data_files,
                           const std::string& data_dir, double tolerance,
                           const GridArgs& grid_args) {
  std::vector<MeasurementRecord> records;
  if (!data_files.empty()) {
    for (const std::string& f : data_files) {
      std::vector<MeasurementRecord> part = load_measurements(f);
      records.insert(records.end(), part.begin(), part.end());
    }
  } else {
    records = load_measurements_dir(data_dir);
  }
  const ValidationReport report =
      validate_against_measurements(records, cat, tolerance, resolve_grid(grid_args));

  CommandResult res;
  res.doc.sections.push_back({"summary",
                              {{"records", static_cast<long long>(report.rows.size())},
                               {"checked", report.checked_count},
                               {"flagged", report.flagged_count},
                               {"skipped", report.skipped_count},
                               {"tolerance", report.tolerance}}});
  res.doc.table = TableSection{"records",
                               {"file", "line", "model", "cluster", "num_gpus", "context",
                                "batch", "measured_mfu", "theory_mfu", "ratio", "status", "note"},
                               {}};
  for (const ValidationRow& row : report.rows) {
    const MeasurementRecord& r = row.record;
    const std::string status = row.skipped ? "skipped" : (row.flagged ? "flagged" : "ok");
    res.doc.table->rows.push_back(
        {std::filesystem::path(r.source_file).filename().string(),
         static_cast<long long>(r.source_line), r.model_name, r.cluster_name, r.num_gpus,
         r.context_length, r.batch_size,
         r.mfu ? Value(*r.mfu) : Value(std::string("n/a")),
         row.skipped ? Value(std::string("n/a")) : Value(row.theory_mfu),
         row.skipped ? Value(std::string("n/a")) : Value(row.ratio), status, row.note});
  }
  if (report.flagged_count > 0) res.exit_code = kExitFlagged;
  return res;
}

void emit(const CommandResult& res, const OutputArgs& out) {
  const std::string text =
      cli::render(res.doc, cli::format_from_string(out.format), out.precision);
  if (out.out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream file(out.out_path, std::ios::binary);
  if (!file) throw ParseError("cannot open output file '" + out.out_path + "'");
  file << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analytical planner for FSDP/ZeRO transformer training"};
  app.require_subcommand(1);

  OutputArgs out;
  SpecArgs spec;
  PlanArgs plan;
  GridArgs grid;
  bool global_tgs = false, verbose = false;
  std::string frontier_path, data_dir = "data/measurements";
  std::vector<std::string> model_names{"all"};
  std::vector<std::string> cluster_names{"40GB-A100-200Gbps", "40GB-A100-100Gbps"};
  std::vector<long long> gpu_counts;
  std::vector<std::string> data_files;
  double tolerance = 0.02;
  long long sweep_seq_len = 0;

  CLI::App* est = app.add_subcommand("estimate", "memory and step-time estimate for one plan");
  add_spec_args(est, spec);
  add_plan_args(est, plan);
  add_output_args(est, out);
  est->add_flag("--global", global_tgs, "report cluster-wide instead of per-GPU throughput");

  CLI::App* bnd = app.add_subcommand("bounds", "closed-form utilization/throughput ceilings");
  add_spec_args(bnd, spec);
  add_plan_args(bnd, plan);
  add_output_args(bnd, out);
  bnd->add_flag("--verbose", verbose, "also report the gamma-aware tight bounds");

  CLI::App* sea = app.add_subcommand("search", "grid search over (alpha, gamma, stage)");
  add_spec_args(sea, spec);
  add_grid_args(sea, grid);
  add_output_args(sea, out);
  sea->add_option("--frontier", frontier_path, "write every feasible point to a CSV file");
  sea->add_flag("--global", global_tgs, "report cluster-wide instead of per-GPU throughput");

  CLI::App* swp = app.add_subcommand("sweep", "best plan per (model, cluster, GPU count)");
  swp->add_option("--models", model_names, "model presets, or 'all'")->delimiter(',');
  swp->add_option("--clusters", cluster_names, "cluster presets, or 'all'")->delimiter(',');
  swp->add_option("-N,--num-gpus", gpu_counts, "GPU counts (default 512)")->delimiter(',');
  swp->add_option("--seq-len", sweep_seq_len, "override every model's sequence length");
  add_grid_args(swp, grid);
  add_output_args(swp, out);
  swp->add_flag("--global", global_tgs, "report cluster-wide instead of per-GPU throughput");

  CLI::App* val = app.add_subcommand("validate", "compare measured MFU against the theory bound");
  val->add_option("--data", data_files, "measurement CSV files")->delimiter(',');
  val->add_option("--data-dir", data_dir, "directory of measurement CSVs");
  val->add_option("--tolerance", tolerance, "allowed measured/theory excess (fraction)");
  add_grid_args(val, grid);
  add_output_args(val, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitBadInput;
  }

  try {
    const PresetCatalog cat = catalog_from_env();
    CommandResult res;
    if (app.got_subcommand(est))
      res = cmd_estimate(cat, spec, plan, global_tgs);
    else if (app.got_subcommand(bnd))
      res = cmd_bounds(cat, spec, plan, verbose);
    else if (app.got_subcommand(sea))
      res = cmd_search(cat, spec, grid, frontier_path, global_tgs, out.precision);
    else if (app.got_subcommand(swp))
      res = cmd_sweep(cat, model_names, cluster_names, gpu_counts, grid, sweep_seq_len,
                      global_tgs);
    else
      res = cmd_validate(cat, data_files, data_dir, tolerance, grid);
    emit(res, out);
    return res.exit_code;
  } catch (const InfeasibleConfig& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const NoFeasibleConfig& e) {
    std::cerr << "infeasible: " << e.what() << '\n';
    return kExitInfeasible;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitBadInput;
  }
}
