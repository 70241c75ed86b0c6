#pragma once

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "xaibench/error.hpp"
#include "xaibench/metrics/aggregate.hpp"
#include "xaibench/metrics/catalog.hpp"
#include "xaibench/numeric.hpp"

namespace xaibench::harness {

struct Cell {
  double mean = kNaN;
  double std_error = kNaN;
  std::size_t n = 0;
  std::size_t n_undefined = 0;
  std::optional<metrics::SubgroupSummary> subgroups;
  std::string note;  // why the cell is undefined

  bool defined() const { return n > 0 && !std::isnan(mean); }
};

inline Cell make_cell(const metrics::MetricResult& r, std::string note = {}) {
  Cell c{r.mean, r.std_error, r.n, r.n_undefined, r.subgroups, {}};
  if (!c.defined()) c.note = std::move(note);
  return c;
}

// One (dataset, model) table: rows are explanation methods, columns metrics.
struct LeaderboardTable {
  std::string dataset;
  std::string model;
  std::vector<std::string> methods;
  std::vector<metrics::MetricId> metrics;
  std::vector<std::vector<Cell>> cells;  // [method][metric]

  const Cell& at(const std::string& method, const std::string& metric) const {
    for (std::size_t i = 0; i < methods.size(); ++i) {
      if (methods[i] != method) continue;
      for (std::size_t j = 0; j < metrics.size(); ++j)
        if (metrics[j].name() == metric) return cells[i][j];
    }
    throw ConfigError("leaderboard: no cell " + method + "/" + metric);
  }

  // Rows holding the best defined mean of a column. Empty unless at least two
  // rows are defined.
  std::vector<std::size_t> best_rows(std::size_t col) const {
    std::vector<std::size_t> rows;
    std::size_t defined = 0;
    double best = 0.0;
    const bool higher = metrics[col].higher_is_better();
    for (std::size_t i = 0; i < methods.size(); ++i) {
      const Cell& c = cells[i][col];
      if (!c.defined()) continue;
      if (defined++ == 0 || (higher ? c.mean > best : c.mean < best)) best = c.mean;
    }
    if (defined < 2) return rows;
    for (std::size_t i = 0; i < methods.size(); ++i)
      if (cells[i][col].defined() && cells[i][col].mean == best) rows.push_back(i);
    return rows;
  }
};

struct Leaderboard {
  std::vector<LeaderboardTable> tables;
  std::string fingerprint;
};

namespace detail {

inline bool same_double(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

inline nlohmann::json num(double v) { return std::isnan(v) ? nlohmann::json(nullptr) : nlohmann::json(v); }

inline double num_from(const nlohmann::json& j) { return j.is_null() ? kNaN : j.get<double>(); }

inline std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

}  // namespace detail

inline std::string format_full(double v) { return std::isnan(v) ? "nan" : detail::fmt("%.17g", v); }

inline bool same_summary(const metrics::SubgroupSummary& a, const metrics::SubgroupSummary& b) {
  return detail::same_double(a.mean_majority, b.mean_majority) && detail::same_double(a.mean_minority, b.mean_minority) &&
         detail::same_double(a.disparity, b.disparity) && a.n_majority == b.n_majority && a.n_minority == b.n_minority &&
         a.majority_value == b.majority_value;
}

inline bool operator==(const Cell& a, const Cell& b) {
  return detail::same_double(a.mean, b.mean) && detail::same_double(a.std_error, b.std_error) && a.n == b.n &&
         a.n_undefined == b.n_undefined && a.subgroups.has_value() == b.subgroups.has_value() &&
         (!a.subgroups || same_summary(*a.subgroups, *b.subgroups)) && a.note == b.note;
}

inline bool operator==(const LeaderboardTable& a, const LeaderboardTable& b) {
  return a.dataset == b.dataset && a.model == b.model && a.methods == b.methods && a.metrics == b.metrics &&
         a.cells == b.cells;
}

inline bool operator==(const Leaderboard& a, const Leaderboard& b) {
  return a.fingerprint == b.fingerprint && a.tables == b.tables;
}

inline std::string to_markdown(const Leaderboard& lb) {
  std::ostringstream out;
  for (const auto& t : lb.tables) {
    out << "## " << t.dataset << " / " << t.model << "\n\n| Method |";
    for (const auto& m : t.metrics) out << ' ' << m.name() << (m.higher_is_better() ? " ↑" : " ↓") << " |";
    out << "\n|---|";
    for (std::size_t j = 0; j < t.metrics.size(); ++j) out << "---|";
    out << '\n';
    std::vector<std::vector<bool>> bold(t.methods.size(), std::vector<bool>(t.metrics.size(), false));
    for (std::size_t j = 0; j < t.metrics.size(); ++j)
      for (std::size_t i : t.best_rows(j)) bold[i][j] = true;
    for (std::size_t i = 0; i < t.methods.size(); ++i) {
      out << "| " << t.methods[i] << " |";
      for (std::size_t j = 0; j < t.metrics.size(); ++j) {
        const Cell& c = t.cells[i][j];
        std::string s = "n/a";
        if (c.defined()) {
          s = detail::fmt("%.3f", c.mean);
          if (!std::isnan(c.std_error)) s += " ± " + detail::fmt("%.3f", c.std_error);
          if (bold[i][j]) s = "**" + s + "**";
        }
        out << ' ' << s << " |";
      }
      out << '\n';
    }
    out << '\n';
  }
  out << "Config fingerprint: `" << lb.fingerprint << "`\n";
  return out.str();
}

inline std::string to_csv(const Leaderboard& lb) {
  std::ostringstream out;
  out << "dataset,model,method,metric,mean,stderr,n,n_undefined,mean_majority,mean_minority,config_fingerprint\n";
  for (const auto& t : lb.tables) {
    for (std::size_t i = 0; i < t.methods.size(); ++i) {
      for (std::size_t j = 0; j < t.metrics.size(); ++j) {
        const Cell& c = t.cells[i][j];
        out << t.dataset << ',' << t.model << ',' << t.methods[i] << ',' << t.metrics[j].name() << ','
            << format_full(c.mean) << ',' << format_full(c.std_error) << ',' << c.n << ',' << c.n_undefined << ','
            << format_full(c.subgroups ? c.subgroups->mean_majority : kNaN) << ','
            << format_full(c.subgroups ? c.subgroups->mean_minority : kNaN) << ',' << lb.fingerprint << '\n';
      }
    }
  }
  return out.str();
}

inline nlohmann::json to_json(const Leaderboard& lb) {
  nlohmann::json j{{"config_fingerprint", lb.fingerprint}, {"tables", nlohmann::json::array()}};
  for (const auto& t : lb.tables) {
    nlohmann::json tj{{"dataset", t.dataset}, {"model", t.model}, {"methods", t.methods}};
    tj["metrics"] = nlohmann::json::array();
    for (const auto& m : t.metrics) tj["metrics"].push_back(m.name());
    tj["cells"] = nlohmann::json::array();
    for (std::size_t i = 0; i < t.methods.size(); ++i) {
      nlohmann::json row = nlohmann::json::array();
      for (const Cell& c : t.cells[i]) {
        nlohmann::json cj{{"mean", detail::num(c.mean)},
                          {"stderr", detail::num(c.std_error)},
                          {"n", c.n},
                          {"n_undefined", c.n_undefined}};
        if (!c.note.empty()) cj["note"] = c.note;
        if (c.subgroups) {
          const auto& s = *c.subgroups;
          cj["subgroups"] = {{"mean_majority", detail::num(s.mean_majority)},
                             {"mean_minority", detail::num(s.mean_minority)},
                             {"disparity", detail::num(s.disparity)},
                             {"n_majority", s.n_majority},
                             {"n_minority", s.n_minority},
                             {"majority_value", s.majority_value}};
        }
        row.push_back(cj);
      }
      tj["cells"].push_back(row);
    }
    j["tables"].push_back(tj);
  }
  return j;
}

inline Leaderboard leaderboard_from_json(const nlohmann::json& j) {
  Leaderboard lb;
  try {
    lb.fingerprint = j.at("config_fingerprint").get<std::string>();
    for (const auto& tj : j.at("tables")) {
      LeaderboardTable t;
      t.dataset = tj.at("dataset").get<std::string>();
      t.model = tj.at("model").get<std::string>();
      t.methods = tj.at("methods").get<std::vector<std::string>>();
      for (const auto& m : tj.at("metrics")) t.metrics.push_back(metrics::parse_metric(m.get<std::string>()));
      const auto& rows = tj.at("cells");
      if (rows.size() != t.methods.size()) throw ParseError("leaderboard: row count mismatch");
      for (const auto& row : rows) {
        if (row.size() != t.metrics.size()) throw ParseError("leaderboard: column count mismatch");
        std::vector<Cell> cells;
        for (const auto& cj : row) {
          Cell c;
          c.mean = detail::num_from(cj.at("mean"));
          c.std_error = detail::num_from(cj.at("stderr"));
          c.n = cj.at("n").get<std::size_t>();
          c.n_undefined = cj.at("n_undefined").get<std::size_t>();
          c.note = cj.value("note", std::string());
          if (cj.contains("subgroups")) {
            const auto& sj = cj["subgroups"];
            metrics::SubgroupSummary s;
            s.mean_majority = detail::num_from(sj.at("mean_majority"));
            s.mean_minority = detail::num_from(sj.at("mean_minority"));
            s.disparity = detail::num_from(sj.at("disparity"));
            s.n_majority = sj.at("n_majority").get<std::size_t>();
            s.n_minority = sj.at("n_minority").get<std::size_t>();
            s.majority_value = sj.at("majority_value").get<int>();
            c.subgroups = s;
          }
          cells.push_back(std::move(c));
        }
        t.cells.push_back(std::move(cells));
      }
      lb.tables.push_back(std::move(t));
    }
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("leaderboard: ") + e.what());
  }
  return lb;
}

inline Leaderboard load_leaderboard(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "'");
  try {
    return leaderboard_from_json(nlohmann::json::parse(in));
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("leaderboard '" + path + "': " + e.what());
  }
}

}  // namespace xaibench::harness
