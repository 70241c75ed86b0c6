#pragma once

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "xaibench/datasets/split.hpp"
#include "xaibench/datasets/types.hpp"

namespace xaibench::datasets {

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

inline std::vector<std::string> split_line(std::string_view line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      out.emplace_back(trim(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  out.emplace_back(trim(cur));
  return out;
}

inline std::optional<double> parse_double(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

}  // namespace detail

inline CsvTable read_csv(std::istream& in) {
  CsvTable t;
  std::string line;
  bool first = true;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (first && line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
    if (detail::trim(line).empty()) continue;
    auto cells = detail::split_line(line);
    if (first) {
      t.header = std::move(cells);
      first = false;
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(t.header.size()) + " cells, got " + std::to_string(cells.size()));
    }
    t.rows.push_back(std::move(cells));
  }
  if (first) throw ParseError("csv: missing header row");
  return t;
}

struct CsvOptions {
  std::string target;
  std::optional<std::string> protected_column;
  std::map<std::string, FeatureKind> kinds;  // per-column overrides
  double train_ratio = 0.7;
  std::uint64_t seed = 0;
};

struct LoadedTable {
  Matrix X;
  std::vector<int> y;
  Schema schema;
};

namespace detail {

// Maps a column with at most two distinct levels onto {0, 1}. Numeric levels
// already in {0, 1} keep their values; otherwise the smaller level maps to 0.
inline std::vector<double> encode_binary(const std::vector<std::string>& cells, const std::string& col) {
  std::vector<std::optional<double>> nums;
  bool numeric = true;
  for (const auto& c : cells) {
    nums.push_back(parse_double(c));
    numeric = numeric && nums.back().has_value();
  }
  std::vector<double> out(cells.size());
  if (numeric) {
    std::set<double> levels;
    for (const auto& v : nums) levels.insert(*v);
    if (levels.size() > 2) {
      throw ParseError("column '" + col + "' is declared binary but has " + std::to_string(levels.size()) +
                       " distinct values");
    }
    const bool zero_one = std::all_of(levels.begin(), levels.end(), [](double v) { return v == 0.0 || v == 1.0; });
    const double lo = *levels.begin();
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out[i] = zero_one ? *nums[i] : (*nums[i] == lo ? 0.0 : 1.0);
    }
    return out;
  }
  std::set<std::string> levels(cells.begin(), cells.end());
  if (levels.size() > 2) {
    throw ParseError("column '" + col + "' is binary but has " + std::to_string(levels.size()) + " distinct values");
  }
  const std::string& lo = *levels.begin();
  for (std::size_t i = 0; i < cells.size(); ++i) out[i] = cells[i] == lo ? 0.0 : 1.0;
  return out;
}

}  // namespace detail

// Types columns (hints first, else <= 2 distinct values => binary) and
// extracts the binary target. Row order is preserved.
inline LoadedTable to_dataset(const CsvTable& t, const CsvOptions& opt) {
  const auto target_it = std::find(t.header.begin(), t.header.end(), opt.target);
  if (opt.target.empty() || target_it == t.header.end()) {
    throw ConfigError("csv: target column '" + opt.target + "' not found");
  }
  if (opt.protected_column &&
      std::find(t.header.begin(), t.header.end(), *opt.protected_column) == t.header.end()) {
    throw ConfigError("csv: protected column '" + *opt.protected_column + "' not found");
  }
  for (const auto& [name, kind] : opt.kinds) {
    (void)kind;
    if (std::find(t.header.begin(), t.header.end(), name) == t.header.end()) {
      throw ConfigError("csv: kind override for unknown column '" + name + "'");
    }
  }
  const std::size_t target_col = static_cast<std::size_t>(target_it - t.header.begin());
  const std::size_t n = t.rows.size();
  if (n == 0) throw ParseError("csv: no data rows");

  auto column = [&](std::size_t c) {
    std::vector<std::string> cells(n);
    for (std::size_t i = 0; i < n; ++i) cells[i] = t.rows[i][c];
    return cells;
  };

  LoadedTable out;
  {
    const auto enc = detail::encode_binary(column(target_col), opt.target);
    out.y.resize(n);
    for (std::size_t i = 0; i < n; ++i) out.y[i] = static_cast<int>(enc[i]);
  }

  std::vector<std::vector<double>> cols;
  for (std::size_t c = 0; c < t.header.size(); ++c) {
    if (c == target_col) continue;
    const std::string& name = t.header[c];
    const auto cells = column(c);
    FeatureKind kind;
    if (auto it = opt.kinds.find(name); it != opt.kinds.end()) {
      kind = it->second;
    } else {
      std::set<std::string_view> distinct;
      for (const auto& s : cells) {
        distinct.insert(s);
        if (distinct.size() > 2) break;
      }
      kind = distinct.size() <= 2 ? FeatureKind::binary : FeatureKind::continuous;
    }
    std::vector<double> values(n);
    if (kind == FeatureKind::binary) {
      values = detail::encode_binary(cells, name);
    } else {
      for (std::size_t i = 0; i < n; ++i) {
        const auto v = detail::parse_double(cells[i]);
        if (!v) {
          throw ParseError("csv: non-numeric value '" + cells[i] + "' in continuous column '" + name +
                           "' (row " + std::to_string(i + 1) + ")");
        }
        values[i] = *v;
      }
    }
    const bool prot = opt.protected_column && *opt.protected_column == name;
    if (prot && kind != FeatureKind::binary) {
      throw ConfigError("csv: protected column '" + name + "' must be binary");
    }
    out.schema.push_back({name, kind, prot});
    cols.push_back(std::move(values));
  }
  out.X.resize(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(cols.size()));
  for (std::size_t j = 0; j < cols.size(); ++j)
    for (std::size_t i = 0; i < n; ++i) out.X(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = cols[j][i];
  return out;
}

inline DatasetSplit load_csv(const std::string& path, const CsvOptions& opt) {
  std::ifstream in(path);
  if (!in) throw IoError("csv: cannot open '" + path + "'");
  const auto table = read_csv(in);
  auto loaded = to_dataset(table, opt);
  auto out = split(loaded.X, loaded.y, opt.train_ratio, opt.seed, std::move(loaded.schema));
  const auto slash = path.find_last_of('/');
  out.name = slash == std::string::npos ? path : path.substr(slash + 1);
  return out;
}

}  // namespace xaibench::datasets
