#pragma once

#include <array>
#include <chrono>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "xaibench/explainers/explainer.hpp"
#include "xaibench/harness/config.hpp"
#include "xaibench/harness/data.hpp"
#include "xaibench/harness/io.hpp"
#include "xaibench/harness/leaderboard.hpp"
#include "xaibench/metrics/agreement.hpp"
#include "xaibench/metrics/aggregate.hpp"
#include "xaibench/metrics/fairness.hpp"
#include "xaibench/metrics/prediction_gap.hpp"
#include "xaibench/metrics/stability.hpp"
#include "xaibench/models/serialize.hpp"
#include "xaibench/models/train.hpp"
#include "xaibench/parallel.hpp"

namespace xaibench::harness {

// Per-instance score slots: the 11 base metrics (reported values), then the
// single-k variants of the top-k metrics.
inline constexpr std::size_t kBaseSlots = metrics::kBaseMetrics.size();
inline constexpr std::array<metrics::BaseMetric, 6> kAtKMetrics{metrics::BaseMetric::FA,  metrics::BaseMetric::RA,
                                                                 metrics::BaseMetric::SA,  metrics::BaseMetric::SRA,
                                                                 metrics::BaseMetric::PGI, metrics::BaseMetric::PGU};
inline constexpr std::size_t kSlots = kBaseSlots + kAtKMetrics.size();
using Scores = std::array<double, kSlots>;

inline std::size_t slot(metrics::BaseMetric m) { return static_cast<std::size_t>(m); }

struct InstanceResult {
  std::size_t id = 0;
  std::vector<Vector> attributions;  // per method
  std::vector<Scores> scores;        // per method
};

// Everything the per-instance stages need. Shared read-only across workers.
struct EvalContext {
  const BenchmarkConfig* cfg = nullptr;
  const PreparedData* data = nullptr;
  const models::Model* model = nullptr;
  std::vector<explainers::Explainer> explainers;
  std::optional<Vector> model_truth;  // instance-independent ground truth (LR)
  Eigen::Index k = 1;
  bool need_truth = false;
  bool need_gap = false;
  bool need_stability = false;

  const datasets::DatasetSplit& split() const { return data->split; }

  std::optional<Vector> truth_for(std::size_t id) const {
    if (model_truth) return model_truth;
    if (data->truth) return data->truth->for_instance(id);
    return std::nullopt;
  }
};

inline std::uint64_t explain_seed(std::uint64_t master, explainers::Method m, std::size_t id) {
  return derive_seed(master, "explain", static_cast<int>(m), id);
}

// Neighbor j of instance id gets its own explainer stream.
inline std::uint64_t neighbor_seed(std::uint64_t master, explainers::Method m, std::size_t id, int j) {
  return derive_seed(master, "explain/neighbor", static_cast<int>(m), id, j);
}

inline explainers::Explainer make_explainer(explainers::Method m, const BenchmarkConfig& cfg,
                                            const datasets::DatasetSplit& split) {
  explainers::Explainer e;
  e.method = m;
  e.config = cfg.explainer_params;
  const Vector means = split.train_X.colwise().mean().transpose();
  e.ig_baseline = means;
  e.shap_baseline = means;
  return e;
}

inline EvalContext make_context(const BenchmarkConfig& cfg, const PreparedData& data, const models::Model& model) {
  EvalContext ctx;
  ctx.cfg = &cfg;
  ctx.data = &data;
  ctx.model = &model;
  for (auto m : cfg.explainers) ctx.explainers.push_back(make_explainer(m, cfg, data.split));
  if (const auto* lr = model.as_linear()) ctx.model_truth = lr->coefficient_difference();
  ctx.k = cfg.topk.resolve(static_cast<Eigen::Index>(data.split.dim()));
  for (const auto& m : cfg.metrics) {
    ctx.need_truth = ctx.need_truth || metrics::needs_ground_truth(m.base);
    ctx.need_gap = ctx.need_gap || m.base == metrics::BaseMetric::PGI || m.base == metrics::BaseMetric::PGU;
    ctx.need_stability = ctx.need_stability || metrics::is_stability(m.base);
  }
  return ctx;
}

namespace detail {

template <models::Classifier M>
Vector explain_one(const M& model, const EvalContext& ctx, std::size_t mi, const Vector& x, std::size_t id) {
  const auto& ex = ctx.explainers[mi];
  return ex.explain(model, x, id, explain_seed(ctx.cfg->seed, ex.method, id)).attributions;
}

template <models::RepresentingClassifier M>
Scores score_one(const M& model, const EvalContext& ctx, std::size_t mi, const Vector& x, std::size_t id,
                 const Vector& e) {
  using metrics::AgreementMode;
  using metrics::BaseMetric;
  Scores s;
  s.fill(kNaN);
  const auto& cfg = *ctx.cfg;
  const auto& schema = ctx.split().schema;
  const auto at_k = [&](BaseMetric m) {
    for (std::size_t i = 0; i < kAtKMetrics.size(); ++i)
      if (kAtKMetrics[i] == m) return kBaseSlots + i;
    return kSlots;
  };

  if (ctx.need_truth) {
    if (auto g = ctx.truth_for(id)) {
      s[slot(BaseMetric::PRA)] = metrics::pairwise_rank_agreement(e, *g);
      s[slot(BaseMetric::RC)] = metrics::rank_correlation(e, *g);
      const std::pair<BaseMetric, AgreementMode> modes[] = {{BaseMetric::FA, AgreementMode::feature},
                                                            {BaseMetric::RA, AgreementMode::rank},
                                                            {BaseMetric::SA, AgreementMode::sign},
                                                            {BaseMetric::SRA, AgreementMode::signed_rank}};
      for (const auto& [m, mode] : modes) {
        const auto curve = metrics::agreement_curve(e, *g, mode);
        s[slot(m)] = metrics::auc_over_k(curve);
        s[at_k(m)] = curve[static_cast<std::size_t>(ctx.k - 1)];
      }
    }
  }
  if (ctx.need_gap) {
    // One perturbation stream per instance, shared by every method.
    const std::uint64_t gap_seed = derive_seed(cfg.seed, "gap", id);
    for (auto [m, mode] : {std::pair{BaseMetric::PGI, metrics::GapMode::important},
                           std::pair{BaseMetric::PGU, metrics::GapMode::unimportant}}) {
      const auto curve = metrics::prediction_gap_curve(model, x, e, mode, schema, cfg.perturbation, gap_seed);
      s[slot(m)] = metrics::auc_over_k(curve);
      s[at_k(m)] = curve[static_cast<std::size_t>(ctx.k - 1)];
    }
  }
  if (ctx.need_stability) {
    const auto& ex = ctx.explainers[mi];
    auto explain_neighbor = [&](const Vector& xp, int j) {
      Vector a = ex.attribute(model, xp, neighbor_seed(cfg.seed, ex.method, id, j));
      if (!a.allFinite()) throw Error("non-finite neighbor attribution");
      return a;
    };
    const auto st = metrics::relative_stability_all(model, x, e, explain_neighbor, schema, cfg.stability,
                                                    cfg.perturbation, derive_seed(cfg.seed, "stability", id));
    s[slot(BaseMetric::RIS)] = st.ris;
    s[slot(BaseMetric::RRS)] = st.rrs;
    s[slot(BaseMetric::ROS)] = st.ros;
  }
  return s;
}

template <class Fn>
auto with_model(const models::Model& m, Fn&& fn) {
  if (const auto* lr = m.as_linear()) return fn(*lr);
  return fn(*m.as_mlp());
}

[[noreturn]] inline void rethrow_with_context(const std::string& stage, std::size_t id) {
  try {
    throw;
  } catch (const ConfigError& e) {
    throw ConfigError(stage + " (instance " + std::to_string(id) + "): " + e.what());
  } catch (const std::exception& e) {
    throw Error(stage + " (instance " + std::to_string(id) + "): " + e.what());
  }
}

}  // namespace detail

// Explanation of test row `row` by method index `mi`.
inline Vector explain_instance(const EvalContext& ctx, std::size_t mi, std::size_t row) {
  const auto& s = ctx.split();
  const std::size_t id = s.test_ids[row];
  const Vector x = s.test_X.row(static_cast<Eigen::Index>(row)).transpose();
  try {
    return detail::with_model(*ctx.model, [&](const auto& m) { return detail::explain_one(m, ctx, mi, x, id); });
  } catch (...) {
    detail::rethrow_with_context("explain[" + std::string(explainers::method_id(ctx.explainers[mi].method)) + "]", id);
  }
}

inline Scores score_instance(const EvalContext& ctx, std::size_t mi, std::size_t row, const Vector& e) {
  const auto& s = ctx.split();
  const std::size_t id = s.test_ids[row];
  const Vector x = s.test_X.row(static_cast<Eigen::Index>(row)).transpose();
  try {
    return detail::with_model(*ctx.model,
                              [&](const auto& m) { return detail::score_one(m, ctx, mi, x, id, e); });
  } catch (...) {
    detail::rethrow_with_context("evaluate[" + std::string(explainers::method_id(ctx.explainers[mi].method)) + "]", id);
  }
}

inline std::size_t instance_count(const BenchmarkConfig& cfg, const datasets::DatasetSplit& s) {
  const std::size_t n = s.test_y.size();
  return cfg.max_instances ? std::min(n, *cfg.max_instances) : n;
}

inline nlohmann::json instance_to_json(const InstanceResult& r) {
  nlohmann::json j{{"id", r.id}, {"attributions", nlohmann::json::array()}, {"scores", nlohmann::json::array()}};
  for (const auto& a : r.attributions) j["attributions"].push_back(std::vector<double>(a.begin(), a.end()));
  for (const auto& s : r.scores) {
    nlohmann::json row = nlohmann::json::array();
    for (double v : s) row.push_back(detail::num(v));
    j["scores"].push_back(row);
  }
  return j;
}

inline InstanceResult instance_from_json(const nlohmann::json& j, std::size_t n_methods, Eigen::Index d) {
  InstanceResult r;
  r.id = j.at("id").get<std::size_t>();
  for (const auto& a : j.at("attributions")) {
    const auto v = a.get<std::vector<double>>();
    if (static_cast<Eigen::Index>(v.size()) != d) throw ParseError("cached attribution has wrong length");
    r.attributions.push_back(Eigen::Map<const Vector>(v.data(), d));
  }
  for (const auto& row : j.at("scores")) {
    if (row.size() != kSlots) throw ParseError("cached score row has wrong length");
    Scores s;
    for (std::size_t i = 0; i < kSlots; ++i) s[i] = detail::num_from(row[i]);
    r.scores.push_back(s);
  }
  if (r.attributions.size() != n_methods || r.scores.size() != n_methods) throw ParseError("cached method count");
  return r;
}

struct ModelRun {
  models::Family family = models::Family::logistic;
  std::optional<models::Model> model;
  double test_accuracy = kNaN;
  std::vector<InstanceResult> instances;  // test-row order
  std::vector<std::vector<metrics::MetricResult>> results;  // [method][metric]
  std::size_t computed = 0;  // instances not served from cache
  bool model_from_cache = false;
  double seconds = 0.0;
};

struct BenchmarkResult {
  std::string fingerprint;
  PreparedData data;
  std::vector<ModelRun> runs;
  Leaderboard leaderboard;
  double seconds = 0.0;
};

struct RunOptions {
  bool use_cache = true;
  std::function<void(const std::string&)> progress;
};

inline std::filesystem::path cache_dir(const BenchmarkConfig& cfg, const std::string& fp) {
  return std::filesystem::path(cfg.output_dir) / "cache" / fp.substr(0, 16);
}

inline models::Model obtain_model(const BenchmarkConfig& cfg, const ModelSpec& spec, const PreparedData& data,
                                  const std::filesystem::path& cache, bool use_cache, bool& from_cache) {
  from_cache = false;
  if (spec.path) {
    auto m = models::load_model(*spec.path);
    if (m.family() != spec.family) throw ConfigError("model file '" + *spec.path + "' holds a different family");
    if (m.n_features() != static_cast<Eigen::Index>(data.split.dim())) {
      throw DimensionError("model file '" + *spec.path + "' does not match the dataset width");
    }
    return m;
  }
  const auto path = cache / ("model_" + std::string(models::to_string(spec.family)) + ".json");
  if (use_cache && std::filesystem::exists(path)) {
    from_cache = true;
    return models::load_model(path.string());
  }
  const auto tc = cfg.train_config();
  models::Model m = spec.family == models::Family::logistic ? models::Model(models::train_logistic(data.split, tc))
                                                            : models::Model(models::train_mlp(data.split, tc));
  m.meta().test_accuracy = models::accuracy(m, data.split.test_X, data.split.test_y);
  if (use_cache) write_file(path, models::model_to_json(m).dump());
  return m;
}

// Computes explanations and scores for every evaluated test instance,
// reusing per-instance cache shards when present.
inline std::vector<InstanceResult> run_instances(const EvalContext& ctx, const std::filesystem::path& shard_dir,
                                                 bool use_cache, std::size_t& computed) {
  const auto& s = ctx.split();
  const std::size_t n = instance_count(*ctx.cfg, s);
  const std::size_t n_methods = ctx.explainers.size();
  std::vector<InstanceResult> out(n);
  std::vector<char> fresh(n, 0);
  parallel_for(n, ctx.cfg->workers, [&](std::size_t row) {
    const std::size_t id = s.test_ids[row];
    const auto shard = shard_dir / ("instance_" + std::to_string(id) + ".json");
    if (use_cache && std::filesystem::exists(shard)) {
      try {
        out[row] = instance_from_json(nlohmann::json::parse(read_file(shard)), n_methods,
                                      static_cast<Eigen::Index>(s.dim()));
        return;
      } catch (const std::exception&) {
        warn("discarding unreadable cache shard " + shard.string());
      }
    }
    InstanceResult r;
    r.id = id;
    for (std::size_t mi = 0; mi < n_methods; ++mi) {
      r.attributions.push_back(explain_instance(ctx, mi, row));
      r.scores.push_back(score_instance(ctx, mi, row, r.attributions.back()));
    }
    if (use_cache) write_file(shard, instance_to_json(r).dump());
    out[row] = std::move(r);
    fresh[row] = 1;
  });
  computed = static_cast<std::size_t>(std::count(fresh.begin(), fresh.end(), 1));
  return out;
}

inline std::string undefined_reason(const metrics::MetricId& m, const EvalContext& ctx) {
  if (m.disparity && !ctx.data->test_groups) return ctx.data->groups_note;
  if (metrics::needs_ground_truth(m.base) && !ctx.model_truth && !ctx.data->truth) {
    return "no ground-truth explanation for this model and dataset";
  }
  if (metrics::is_stability(m.base)) return "no perturbed neighbor kept the predicted class";
  return "undefined for every instance";
}

// Aggregates per-instance scores into one MetricResult per (method, metric).
inline std::vector<std::vector<metrics::MetricResult>> aggregate_run(const EvalContext& ctx,
                                                                     const std::vector<InstanceResult>& inst) {
  const auto& cfg = *ctx.cfg;
  std::vector<std::vector<metrics::MetricResult>> res(ctx.explainers.size());
  std::optional<std::vector<int>> groups;
  if (ctx.data->test_groups) groups.emplace(ctx.data->test_groups->begin(), ctx.data->test_groups->begin() + inst.size());
  for (std::size_t mi = 0; mi < ctx.explainers.size(); ++mi) {
    for (const auto& m : cfg.metrics) {
      std::vector<double> col(inst.size());
      for (std::size_t i = 0; i < inst.size(); ++i) col[i] = inst[i].scores[mi][slot(m.base)];
      if (!m.disparity) {
        res[mi].push_back(metrics::aggregate(std::move(col)));
        continue;
      }
      metrics::MetricResult r;
      r.n_undefined = inst.size();
      if (groups) {
        const auto g = *groups;
        const bool both = std::count(g.begin(), g.end(), 0) > 0 && std::count(g.begin(), g.end(), 1) > 0;
        if (both) {
          const auto sum = metrics::subgroup_disparity(col, g);
          std::vector<double> maj, min;
          for (std::size_t i = 0; i < col.size(); ++i) {
            if (is_undefined(col[i])) continue;
            (g[i] == sum.majority_value ? maj : min).push_back(col[i]);
          }
          r.subgroups = sum;
          r.n = maj.size() + min.size();
          r.n_undefined = inst.size() - r.n;
          if (!maj.empty() && !min.empty()) {
            r.mean = sum.disparity;
            const double se_maj = maj.size() > 1 ? sample_stddev(maj) / std::sqrt(double(maj.size())) : 0.0;
            const double se_min = min.size() > 1 ? sample_stddev(min) / std::sqrt(double(min.size())) : 0.0;
            r.std_error = std::sqrt(se_maj * se_maj + se_min * se_min);
          } else {
            r.n = 0;
            r.n_undefined = inst.size();
          }
        }
      }
      res[mi].push_back(std::move(r));
    }
  }
  return res;
}

inline LeaderboardTable make_table(const EvalContext& ctx, const ModelRun& run) {
  LeaderboardTable t;
  t.dataset = ctx.split().name;
  t.model = std::string(models::to_string(run.family));
  t.metrics = ctx.cfg->metrics;
  for (const auto& e : ctx.explainers) {
    t.methods.emplace_back(explainers::method_display_name(e.method));
  }
  for (std::size_t mi = 0; mi < ctx.explainers.size(); ++mi) {
    std::vector<Cell> row;
    for (std::size_t j = 0; j < t.metrics.size(); ++j) {
      std::string note;
      if (!run.results[mi][j].defined()) {
        note = (t.metrics[j].disparity && ctx.data->test_groups && !run.results[mi][j].subgroups)
                   ? "a subgroup is empty among evaluated instances"
                   : undefined_reason(t.metrics[j], ctx);
      }
      row.push_back(make_cell(run.results[mi][j], note));
    }
    t.cells.push_back(std::move(row));
  }
  return t;
}

inline BenchmarkResult run_benchmark(const BenchmarkConfig& cfg, const RunOptions& opt = {}) {
  cfg.validate();
  const auto t0 = std::chrono::steady_clock::now();
  const auto say = [&](const std::string& msg) {
    if (opt.progress) opt.progress(msg);
  };
  BenchmarkResult out;
  out.fingerprint = fingerprint(cfg);
  out.leaderboard.fingerprint = out.fingerprint;
  const auto cache = cache_dir(cfg, out.fingerprint);
  try {
    say("preparing dataset");
    out.data = prepare_dataset(cfg);
  } catch (const std::exception& e) {
    throw Error(std::string("dataset: ") + e.what());
  }
  for (const auto& spec : cfg.models) {
    const auto tm = std::chrono::steady_clock::now();
    const std::string fam(models::to_string(spec.family));
    ModelRun run;
    run.family = spec.family;
    try {
      say("model " + fam);
      run.model = obtain_model(cfg, spec, out.data, cache, opt.use_cache, run.model_from_cache);
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw Error("train[" + fam + "]: " + e.what());
    }
    run.test_accuracy = models::accuracy(*run.model, out.data.split.test_X, out.data.split.test_y);
    const auto ctx = make_context(cfg, out.data, *run.model);
    say("explaining and scoring with " + fam);
    run.instances = run_instances(ctx, cache / fam, opt.use_cache, run.computed);
    run.results = aggregate_run(ctx, run.instances);
    out.leaderboard.tables.push_back(make_table(ctx, run));
    run.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - tm).count();
    out.runs.push_back(std::move(run));
  }
  out.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return out;
}

// ---- output files --------------------------------------------------------

inline std::string explanations_csv(const BenchmarkResult& r, const BenchmarkConfig& cfg) {
  std::ostringstream out;
  out << "model,instance_id,method";
  for (const auto& f : r.data.split.schema) out << ',' << f.name;
  out << '\n';
  for (const auto& run : r.runs) {
    for (const auto& inst : run.instances) {
      for (std::size_t mi = 0; mi < cfg.explainers.size(); ++mi) {
        out << models::to_string(run.family) << ',' << inst.id << ',' << explainers::method_id(cfg.explainers[mi]);
        for (double v : inst.attributions[mi]) out << ',' << format_full(v);
        out << '\n';
      }
    }
  }
  return out.str();
}

inline std::string explanations_jsonl(const BenchmarkResult& r, const BenchmarkConfig& cfg) {
  std::string out;
  for (const auto& run : r.runs) {
    for (const auto& inst : run.instances) {
      for (std::size_t mi = 0; mi < cfg.explainers.size(); ++mi) {
        const Vector& a = inst.attributions[mi];
        nlohmann::json j{{"model", models::to_string(run.family)},
                         {"instance_id", inst.id},
                         {"method", explainers::method_id(cfg.explainers[mi])},
                         {"attributions", std::vector<double>(a.begin(), a.end())}};
        out += j.dump() + "\n";
      }
    }
  }
  return out;
}

// Long-format metric table, including the single-k variants.
inline std::string metrics_csv(const BenchmarkResult& r, const BenchmarkConfig& cfg) {
  std::ostringstream out;
  out << "dataset,model,method,metric,mean,stderr,n,n_undefined,mean_majority,mean_minority,disparity,"
         "config_fingerprint\n";
  const Eigen::Index k = cfg.topk.resolve(static_cast<Eigen::Index>(r.data.split.dim()));
  for (const auto& run : r.runs) {
    const std::string model(models::to_string(run.family));
    for (std::size_t mi = 0; mi < cfg.explainers.size(); ++mi) {
      const std::string method(explainers::method_display_name(cfg.explainers[mi]));
      const auto line = [&](const std::string& name, const metrics::MetricResult& m) {
        const auto sg = m.subgroups.value_or(metrics::SubgroupSummary{});
        out << r.data.split.name << ',' << model << ',' << method << ',' << name << ',' << format_full(m.mean) << ','
            << format_full(m.std_error) << ',' << m.n << ',' << m.n_undefined << ',' << format_full(sg.mean_majority)
            << ',' << format_full(sg.mean_minority) << ',' << format_full(sg.disparity) << ',' << r.fingerprint
            << '\n';
      };
      for (std::size_t j = 0; j < cfg.metrics.size(); ++j) line(cfg.metrics[j].name(), run.results[mi][j]);
      for (std::size_t a = 0; a < kAtKMetrics.size(); ++a) {
        bool requested = false;
        for (const auto& m : cfg.metrics) requested = requested || (!m.disparity && m.base == kAtKMetrics[a]);
        if (!requested) continue;
        std::vector<double> col;
        for (const auto& inst : run.instances) col.push_back(inst.scores[mi][kBaseSlots + a]);
        line(std::string(metrics::base_name(kAtKMetrics[a])) + "@" + std::to_string(k), metrics::aggregate(col));
      }
    }
  }
  return out.str();
}

inline nlohmann::json run_metadata(const BenchmarkResult& r, const BenchmarkConfig& cfg) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["config_fingerprint"] = r.fingerprint;
  j["resolved_config"] = resolved_json(cfg);
  j["master_seed"] = cfg.seed;
  j["workers"] = cfg.workers;
  j["wall_time_seconds"] = r.seconds;
  j["finished_at_unix"] =
      std::chrono::duration_cast<std::chrono::seconds>(std::chrono::system_clock::now().time_since_epoch()).count();
  j["dataset"] = {{"name", r.data.split.name},
                  {"n_train", r.data.split.train_y.size()},
                  {"n_test", r.data.split.test_y.size()},
                  {"dim", r.data.split.dim()},
                  {"standardized", r.data.standardized},
                  {"subgroups", r.data.groups_note}};
  j["topk_k"] = cfg.topk.resolve(static_cast<Eigen::Index>(r.data.split.dim()));
  j["models"] = nlohmann::json::array();
  for (const auto& run : r.runs) {
    nlohmann::json mj{{"family", models::to_string(run.family)},
                      {"test_accuracy", run.test_accuracy},
                      {"instances", run.instances.size()},
                      {"instances_computed", run.computed},
                      {"model_from_cache", run.model_from_cache},
                      {"wall_time_seconds", run.seconds}};
    nlohmann::json undef = nlohmann::json::object();
    for (std::size_t mi = 0; mi < cfg.explainers.size(); ++mi) {
      for (std::size_t j2 = 0; j2 < cfg.metrics.size(); ++j2) {
        const auto& res = run.results[mi][j2];
        if (res.n_undefined > 0) {
          undef[std::string(explainers::method_id(cfg.explainers[mi]))][cfg.metrics[j2].name()] = res.n_undefined;
        }
      }
    }
    mj["undefined_counts"] = undef;
    j["models"].push_back(mj);
  }
  return j;
}

// Writes every output file under cfg.output_dir.
inline void write_outputs(const BenchmarkResult& r, const BenchmarkConfig& cfg) {
  const std::filesystem::path dir(cfg.output_dir);
  for (const auto& f : cfg.formats) {
    if (f == "markdown") write_file(dir / "leaderboard.md", to_markdown(r.leaderboard));
    if (f == "csv") write_file(dir / "leaderboard.csv", to_csv(r.leaderboard));
    if (f == "json") write_file(dir / "leaderboard.json", to_json(r.leaderboard).dump(2) + "\n");
  }
  write_file(dir / "explanations.csv", explanations_csv(r, cfg));
  write_file(dir / "explanations.jsonl", explanations_jsonl(r, cfg));
  write_file(dir / "metrics.csv", metrics_csv(r, cfg));
  write_file(dir / "run_metadata.json", run_metadata(r, cfg).dump(2) + "\n");
}

}  // namespace xaibench::harness
