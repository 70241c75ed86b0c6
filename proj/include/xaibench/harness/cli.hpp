#pragma once

#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "xaibench/harness/benchmark.hpp"

namespace xaibench::harness {

namespace cli_detail {

struct Common {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::vector<std::string> formats;
  std::optional<std::size_t> workers;
  bool no_cache = false;
};

inline void add_common(CLI::App* cmd, Common& c, bool config_required) {
  auto* opt = cmd->add_option("--config", c.config, "JSON config file");
  if (config_required) opt->required();
  cmd->add_option("--seed", c.seed, "Master seed");
  cmd->add_option("--out", c.out, "Output directory");
  cmd->add_option("--format", c.formats, "Output formats: markdown, csv, json")->delimiter(',');
  cmd->add_option("--workers", c.workers, "Worker threads");
}

inline BenchmarkConfig load_with_overrides(const Common& c) {
  BenchmarkConfig cfg = c.config.empty() ? BenchmarkConfig{} : load_config(c.config);
  if (c.seed) cfg.seed = *c.seed;
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (!c.formats.empty()) cfg.formats = c.formats;
  if (c.workers) cfg.workers = *c.workers;
  cfg.validate();
  return cfg;
}

inline void write_matrix_csv(std::ostream& out, const Matrix& X, const datasets::Schema& schema,
                             const std::vector<std::size_t>& ids, const std::vector<int>* y) {
  out << "id";
  for (const auto& f : schema) out << ',' << f.name;
  if (y) out << ",y";
  out << '\n';
  for (Eigen::Index i = 0; i < X.rows(); ++i) {
    out << ids[static_cast<std::size_t>(i)];
    for (Eigen::Index j = 0; j < X.cols(); ++j) out << ',' << format_full(X(i, j));
    if (y) out << ',' << (*y)[static_cast<std::size_t>(i)];
    out << '\n';
  }
}

inline nlohmann::json matrix_json(const Matrix& m) {
  nlohmann::json j = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    std::vector<double> row(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) row[static_cast<std::size_t>(c)] = m(i, c);
    j.push_back(row);
  }
  return j;
}

inline int generate(const Common& c, std::ostream& out) {
  datasets::SynthConfig sc;
  if (!c.config.empty()) {
    const auto j = nlohmann::json::parse(read_file(c.config));
    if (j.contains("dataset")) {
      const auto cfg = parse_config(j, std::filesystem::path(c.config).parent_path());
      if (cfg.dataset.kind != DatasetSpec::Kind::synthetic) throw ConfigError("generate: config is not synthetic");
      sc = cfg.dataset.synthetic;
    } else {
      try {
        sc = j.get<datasets::SynthConfig>();
      } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("generate: ") + e.what());
      }
    }
  }
  if (c.seed) sc.seed = *c.seed;
  sc.validate();
  const auto ds = datasets::generate_synthetic(sc);
  const std::filesystem::path dir(c.out.empty() ? "synthetic" : c.out);
  std::ostringstream train, test, truth;
  write_matrix_csv(train, ds.split.train_X, ds.split.schema, ds.split.train_ids, &ds.split.train_y);
  write_matrix_csv(test, ds.split.test_X, ds.split.schema, ds.split.test_ids, &ds.split.test_y);
  truth << "id,cluster";
  for (const auto& f : ds.split.schema) truth << ',' << f.name;
  truth << '\n';
  for (std::size_t i = 0; i < ds.truth.cluster.size(); ++i) {
    truth << i << ',' << ds.truth.cluster[i];
    for (Eigen::Index j = 0; j < ds.truth.importance.cols(); ++j)
      truth << ',' << format_full(ds.truth.importance(static_cast<Eigen::Index>(i), j));
    truth << '\n';
  }
  nlohmann::json meta{{"config", sc},
                      {"centers", matrix_json(ds.truth.centers)},
                      {"masks", matrix_json(ds.truth.masks)},
                      {"weights", matrix_json(ds.truth.weights)}};
  write_file(dir / "train.csv", train.str());
  write_file(dir / "test.csv", test.str());
  write_file(dir / "ground_truth.csv", truth.str());
  write_file(dir / "synthetic.json", meta.dump(2) + "\n");
  out << "wrote " << ds.split.train_y.size() << " train and " << ds.split.test_y.size() << " test rows to "
      << dir.string() << '\n';
  return 0;
}

inline int fetch(const Common& c, const std::string& manifest, const std::string& name, const std::string& cache,
                 std::ostream& out) {
  std::string mpath = manifest, entry_name = name, cache_dir = cache;
  if (!c.config.empty()) {
    const auto cfg = load_config(c.config);
    if (cfg.dataset.kind != DatasetSpec::Kind::manifest) throw ConfigError("fetch: config has no manifest dataset");
    mpath = cfg.dataset.path;
    entry_name = cfg.dataset.name;
    cache_dir = cfg.dataset.cache_dir;
  }
  if (mpath.empty() || entry_name.empty()) throw ConfigError("fetch: need --config or --manifest and --name");
  const auto entries = datasets::load_manifest(mpath);
  const auto& entry = datasets::find_entry(entries, entry_name);
  out << datasets::fetch_dataset(entry, cache_dir.empty() ? "cache" : cache_dir).string() << '\n';
  return 0;
}

inline int train(const Common& c, std::ostream& out) {
  auto cfg = load_with_overrides(c);
  const auto data = prepare_dataset(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  for (const auto& spec : cfg.models) {
    bool cached = false;
    auto m = obtain_model(cfg, spec, data, {}, false, cached);
    const auto path = dir / ("model_" + std::string(models::to_string(spec.family)) + ".json");
    write_file(path, models::model_to_json(m).dump());
    out << models::to_string(spec.family) << " test accuracy "
        << models::accuracy(m, data.split.test_X, data.split.test_y) << " -> " << path.string() << '\n';
  }
  return 0;
}

// Builds a result holding models and explanations only.
inline BenchmarkResult explain_all(const BenchmarkConfig& cfg) {
  BenchmarkResult r;
  r.fingerprint = fingerprint(cfg);
  r.data = prepare_dataset(cfg);
  for (const auto& spec : cfg.models) {
    ModelRun run;
    run.family = spec.family;
    run.model = obtain_model(cfg, spec, r.data, cache_dir(cfg, r.fingerprint), true, run.model_from_cache);
    const auto ctx = make_context(cfg, r.data, *run.model);
    const std::size_t n = instance_count(cfg, r.data.split);
    run.instances.resize(n);
    parallel_for(n, cfg.workers, [&](std::size_t row) {
      auto& inst = run.instances[row];
      inst.id = r.data.split.test_ids[row];
      for (std::size_t mi = 0; mi < ctx.explainers.size(); ++mi) inst.attributions.push_back(explain_instance(ctx, mi, row));
    });
    r.runs.push_back(std::move(run));
  }
  return r;
}

inline int explain(const Common& c, std::ostream& out) {
  const auto cfg = load_with_overrides(c);
  const auto r = explain_all(cfg);
  const std::filesystem::path dir(cfg.output_dir);
  write_file(dir / "explanations.csv", explanations_csv(r, cfg));
  write_file(dir / "explanations.jsonl", explanations_jsonl(r, cfg));
  out << "wrote " << (dir / "explanations.csv").string() << '\n';
  return 0;
}

// Scores a previously written explanations.csv.
inline int evaluate(const Common& c, const std::string& explanations_path, std::ostream& out) {
  const auto cfg = load_with_overrides(c);
  std::ifstream in(explanations_path);
  if (!in) throw IoError("cannot open '" + explanations_path + "'");
  const auto table = datasets::read_csv(in);
  if (table.header.size() < 4 || table.header[0] != "model") throw ParseError("explanations file has no header");
  std::map<std::string, Vector> lookup;  // "model/id/method"
  for (const auto& row : table.rows) {
    Vector a(static_cast<Eigen::Index>(row.size() - 3));
    for (std::size_t j = 3; j < row.size(); ++j) {
      const auto v = datasets::detail::parse_double(row[j]);
      if (!v) throw ParseError("explanations: bad number '" + row[j] + "'");
      a[static_cast<Eigen::Index>(j - 3)] = *v;
    }
    lookup[row[0] + "/" + row[1] + "/" + row[2]] = std::move(a);
  }

  BenchmarkResult r;
  r.fingerprint = fingerprint(cfg);
  r.leaderboard.fingerprint = r.fingerprint;
  r.data = prepare_dataset(cfg);
  for (const auto& spec : cfg.models) {
    ModelRun run;
    run.family = spec.family;
    run.model = obtain_model(cfg, spec, r.data, cache_dir(cfg, r.fingerprint), true, run.model_from_cache);
    run.test_accuracy = models::accuracy(*run.model, r.data.split.test_X, r.data.split.test_y);
    const auto ctx = make_context(cfg, r.data, *run.model);
    const std::size_t n = instance_count(cfg, r.data.split);
    run.instances.resize(n);
    const std::string fam(models::to_string(spec.family));
    for (std::size_t row = 0; row < n; ++row) {
      auto& inst = run.instances[row];
      inst.id = r.data.split.test_ids[row];
      for (auto m : cfg.explainers) {
        const auto it = lookup.find(fam + "/" + std::to_string(inst.id) + "/" + std::string(explainers::method_id(m)));
        if (it == lookup.end()) {
          throw ParseError("explanations: missing " + fam + " instance " + std::to_string(inst.id) + " method " +
                           std::string(explainers::method_id(m)));
        }
        require_size(it->second, static_cast<Eigen::Index>(r.data.split.dim()), "explanations row");
        inst.attributions.push_back(it->second);
      }
      inst.scores.resize(cfg.explainers.size());
    }
    parallel_for(n, cfg.workers, [&](std::size_t row) {
      for (std::size_t mi = 0; mi < ctx.explainers.size(); ++mi)
        run.instances[row].scores[mi] = score_instance(ctx, mi, row, run.instances[row].attributions[mi]);
    });
    run.computed = n;
    run.results = aggregate_run(ctx, run.instances);
    r.leaderboard.tables.push_back(make_table(ctx, run));
    r.runs.push_back(std::move(run));
  }
  write_outputs(r, cfg);
  out << "wrote metrics to " << cfg.output_dir << '\n';
  return 0;
}

inline int benchmark(const Common& c, std::ostream& out, std::ostream& err) {
  const auto cfg = load_with_overrides(c);
  RunOptions opt;
  opt.use_cache = !c.no_cache;
  opt.progress = [&](const std::string& msg) { err << "[benchmark] " << msg << '\n'; };
  const auto r = run_benchmark(cfg, opt);
  write_outputs(r, cfg);
  out << "wrote leaderboard to " << cfg.output_dir << " (" << r.seconds << " s)\n";
  return 0;
}

inline int leaderboard(const std::string& input, const Common& c, std::ostream& out) {
  const auto lb = load_leaderboard(input);
  const std::string fmt = c.formats.empty() ? "markdown" : c.formats.front();
  std::string text;
  if (fmt == "markdown") text = to_markdown(lb);
  else if (fmt == "csv") text = to_csv(lb);
  else if (fmt == "json") text = to_json(lb).dump(2) + "\n";
  else throw ConfigError("leaderboard: unknown format '" + fmt + "'");
  if (c.out.empty()) {
    out << text;
  } else {
    write_file(c.out, text);
  }
  return 0;
}

}  // namespace cli_detail

// Exit codes: 0 success, 1 usage or validation error, 2 runtime failure.
inline int cli_dispatch(int argc, const char* const* argv, std::ostream& out = std::cout,
                        std::ostream& err = std::cerr) {
  CLI::App app{"Benchmark feature-attribution explainers on tabular models", "xaibench"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  cli_detail::Common gen, fet, tra, exp, eva, ben, led;
  std::string manifest, name, cache, explanations_path, input;

  auto* g = app.add_subcommand("generate", "Write a synthetic Gaussian-cluster dataset");
  cli_detail::add_common(g, gen, false);
  auto* f = app.add_subcommand("fetch", "Download and verify a dataset from a manifest");
  cli_detail::add_common(f, fet, false);
  f->add_option("--manifest", manifest, "Manifest JSON file");
  f->add_option("--name", name, "Dataset name");
  f->add_option("--cache", cache, "Cache directory");
  auto* t = app.add_subcommand("train", "Train the configured models");
  cli_detail::add_common(t, tra, true);
  auto* x = app.add_subcommand("explain", "Explain every evaluated test instance");
  cli_detail::add_common(x, exp, true);
  auto* e = app.add_subcommand("evaluate", "Score an explanations file");
  cli_detail::add_common(e, eva, true);
  e->add_option("--explanations", explanations_path, "explanations.csv to score")->required();
  auto* b = app.add_subcommand("benchmark", "Run the full pipeline and write leaderboard files");
  cli_detail::add_common(b, ben, true);
  b->add_flag("--no-cache", ben.no_cache, "Ignore and do not write the result cache");
  auto* l = app.add_subcommand("leaderboard", "Render a leaderboard.json in another format");
  cli_detail::add_common(l, led, false);
  l->add_option("--input", input, "leaderboard.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForVersion&) {
    out << kVersion << '\n';
    return 0;
  } catch (const CLI::ParseError& pe) {
    err << "error: " << pe.what() << "\n\n" << app.help();
    return 1;
  }

  try {
    if (g->parsed()) return cli_detail::generate(gen, out);
    if (f->parsed()) return cli_detail::fetch(fet, manifest, name, cache, out);
    if (t->parsed()) return cli_detail::train(tra, out);
    if (x->parsed()) return cli_detail::explain(exp, out);
    if (e->parsed()) return cli_detail::evaluate(eva, explanations_path, out);
    if (b->parsed()) return cli_detail::benchmark(ben, out, err);
    if (l->parsed()) return cli_detail::leaderboard(input, led, out);
  } catch (const ConfigError& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 1;
  } catch (const std::exception& ex) {
    err << "error: " << ex.what() << '\n';
    return 2;
  }
  err << app.help();
  return 1;
}

}  // namespace xaibench::harness
