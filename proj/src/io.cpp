#include "pebble/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

#include "pebble/errors.hpp"

namespace pebble {
namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split_row(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (;;) {
    const auto comma = line.find(',', start);
    out.push_back(trim(std::string_view(line).substr(start, comma - start)));
    if (comma == std::string::npos) break;
    start = comma + 1;
  }
  return out;
}

double parse_number(const std::string& cell, std::size_t row, const std::string& column) {
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
  if (cell.empty() || ec != std::errc{} || ptr != cell.data() + cell.size() ||
      !std::isfinite(value)) {
    fail(ErrorKind::ParseError, "row " + std::to_string(row) + ", column '" + column +
                                    "': cannot parse '" + cell + "' as a number");
  }
  return value;
}

void write_number(std::string& out, double v) {
  if (!std::isfinite(v)) {
    out += "null";
    return;
  }
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  out += buf;
}

void write_value(std::string& out, const Json& v, int depth) {
  const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
  const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
  switch (v.type()) {
    case Json::value_t::object: {
      if (v.empty()) {
        out += "{}";
        return;
      }
      out += "{\n";
      bool first = true;
      for (auto it = v.begin(); it != v.end(); ++it) {
        if (!first) out += ",\n";
        first = false;
        out += pad;
        out += Json(it.key()).dump();
        out += ": ";
        write_value(out, it.value(), depth + 1);
      }
      out += "\n" + close_pad + "}";
      return;
    }
    case Json::value_t::array: {
      out += "[";
      bool first = true;
      for (const auto& item : v) {
        if (!first) out += ", ";
        first = false;
        write_value(out, item, depth + 1);
      }
      out += "]";
      return;
    }
    case Json::value_t::number_float:
      write_number(out, v.get<double>());
      return;
    default:
      out += v.dump();
  }
}

Json vector_json(const Vector& v) {
  Json arr = Json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v[i]);
  return arr;
}

Json matrix_json(const SymMatrix& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.dim(); ++i) rows.push_back(vector_json(m.matrix().row(i)));
  return rows;
}

Json summary_json(const MethodCoverage& m, const char* method) {
  Json j;
  j["method"] = method;
  j["beta_lower_region"] = m.region_lower;
  auto put = [&](const std::string& prefix, const CoordSummary& s) {
    j[prefix + "_middle"] = s.middle;
    j[prefix + "_middle_width"] = s.width;
    j[prefix + "_upper"] = s.upper;
    j[prefix + "_lower"] = s.lower;
  };
  put("beta_min", m.min_coord);
  put("beta_max", m.max_coord);
  put("beta_avg", m.average);
  return j;
}

}  // namespace

Dataset parse_csv(const std::string& text, const std::string& response, bool intercept) {
  std::istringstream in(text);
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::ParseError, "missing header row");
  if (line.size() >= 3 && line.compare(0, 3, "\xEF\xBB\xBF") == 0) line.erase(0, 3);
  const auto header = split_row(line);

  std::size_t response_col = header.size();
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == response) response_col = c;
  }
  if (response_col == header.size()) {
    fail(ErrorKind::MissingColumn, "response column '" + response + "' not found in header");
  }

  std::vector<std::vector<double>> rows;
  std::vector<double> ys;
  std::size_t row_no = 1;
  while (std::getline(in, line)) {
    ++row_no;
    if (trim(line).empty()) continue;
    const auto cells = split_row(line);
    if (cells.size() != header.size()) {
      fail(ErrorKind::ParseError, "row " + std::to_string(row_no) + ": expected " +
                                      std::to_string(header.size()) + " fields, got " +
                                      std::to_string(cells.size()));
    }
    std::vector<double> covariates;
    if (intercept) covariates.push_back(1.0);
    for (std::size_t c = 0; c < cells.size(); ++c) {
      const double v = parse_number(cells[c], row_no, header[c]);
      if (c == response_col) {
        if (v != 0.0 && v != 1.0) {
          fail(ErrorKind::NonBinaryResponse, "row " + std::to_string(row_no) +
                                                 ": response value '" + cells[c] +
                                                 "' is not 0 or 1");
        }
        ys.push_back(v);
      } else {
        covariates.push_back(v);
      }
    }
    rows.push_back(std::move(covariates));
  }

  std::vector<std::string> names;
  if (intercept) names.emplace_back("_intercept");
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (c != response_col) names.push_back(header[c]);
  }
  const auto n = static_cast<Eigen::Index>(rows.size());
  const auto p = static_cast<Eigen::Index>(names.size());
  Matrix x(n, p);
  Vector y(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      x(i, j) = rows[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    }
    y[i] = ys[static_cast<std::size_t>(i)];
  }
  return Dataset(std::move(x), std::move(y), std::move(names));
}

Dataset load_csv(const std::filesystem::path& path, const std::string& response, bool intercept) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::IoError, "cannot open '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), response, intercept);
}

Json config_json(const ReportConfig& cfg) {
  Json j;
  j["command"] = cfg.command;
  j["data"] = cfg.data;
  j["response"] = cfg.response;
  j["intercept"] = cfg.intercept;
  j["level"] = cfg.level;
  j["boot"] = cfg.boot;
  j["seed"] = cfg.seed;
  j["bn"] = cfg.b_n;
  j["dvar"] = vector_json(cfg.d_var);
  j["threads"] = cfg.threads;
  return j;
}

Json intervals_json(const IntervalSet& set, const std::vector<std::string>& names) {
  Json arr = Json::array();
  for (std::size_t j = 0; j < set.coords.size(); ++j) {
    const auto& ci = set.coords[j];
    Json item;
    item["coord"] = j;
    if (j < names.size()) item["name"] = names[j];
    item["two_sided"] = Json::array({ci.lo, ci.hi});
    item["upper"] = ci.upper;
    item["lower"] = ci.lower;
    arr.push_back(std::move(item));
  }
  return arr;
}

Json fit_json(const FittedModel& fitted, const Dataset& data) {
  Json j;
  j["beta_hat"] = vector_json(fitted.beta_hat);
  j["names"] = data.names();
  j["n"] = data.n();
  j["iterations"] = fitted.iterations;
  j["final_score_norm"] = fitted.final_score_norm;
  j["log_likelihood"] = log_likelihood(fitted.beta_hat, data);
  j["l_hat"] = matrix_json(fitted.l_hat);
  j["m_hat"] = matrix_json(fitted.m_hat);
  j["sigma_hat"] = matrix_json(fitted.sigma_hat);
  return j;
}

Json coverage_json(const CoverageReport& r) {
  Json j;
  j["n"] = r.scenario.n;
  j["p"] = r.scenario.p;
  j["reps"] = r.scenario.reps;
  j["boot"] = r.scenario.B;
  j["level"] = 1.0 - r.scenario.alpha;
  j["seed"] = r.scenario.seed;
  j["beta_true"] = vector_json(r.scenario.beta_true());
  j["beta_min_coord"] = r.min_index;
  j["beta_max_coord"] = r.max_index;
  j["experiments_used"] = r.experiments_used;
  j["failed_experiments"] = r.failed_experiments;
  j["data_redraws"] = r.data_redraws;
  j["failed_replicates"] = r.failed_replicates;
  j["methods"] = Json::array({summary_json(r.pebble, "PEBBLE"), summary_json(r.normal, "Normal")});
  return j;
}

std::string dump_json(const Json& doc) {
  std::string out;
  write_value(out, doc, 0);
  return out;
}

void emit_report(const Json& doc, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) fail(ErrorKind::IoError, "cannot open '" + path.string() + "' for writing");
  out << dump_json(doc) << '\n';
  if (!out) fail(ErrorKind::IoError, "write to '" + path.string() + "' failed");
}

}  // namespace pebble
