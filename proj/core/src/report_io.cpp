#include "survmult/report_io.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>

#include "survmult/errors.hpp"
#include "text_util.hpp"

namespace survmult {

void write_report_csv(const std::filesystem::path& path, const MultiplicityReport& report,
                      const std::string& config_hash) {
  report.validate();
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# survmult-report v1";
  if (!config_hash.empty()) {
    out << " config=" << config_hash;
  }
  out << '\n';
  out << "dataset,epsilon,delta,metric,value\n";
  for (const auto& row : report.rows) {
    const std::string prefix = report.dataset_id + ',' +
                               detail::format_double(row.epsilon) + ',' +
                               detail::format_double(row.delta) + ',';
    out << prefix << "ambiguity," << detail::format_double(row.ambiguity) << '\n';
    out << prefix << "discrepancy," << detail::format_double(row.discrepancy) << '\n';
    out << prefix << "obscurity," << detail::format_double(row.obscurity) << '\n';
    out << prefix << "rashomon_size," << row.rashomon_size << '\n';
  }
}

std::vector<MultiplicityReport> read_report_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw ParseError("cannot open " + path.string(), 0);
  }

  // dataset -> (epsilon, delta) -> partially filled row, in file order.
  std::vector<std::string> dataset_order;
  std::map<std::string, std::vector<MultiplicityRow>> rows_by_dataset;
  std::map<std::string, std::map<std::pair<double, double>, std::size_t>> index_of;

  std::string line;
  std::size_t line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') {
      continue;
    }
    if (!header_seen) {
      if (line != "dataset,epsilon,delta,metric,value") {
        throw ParseError("unexpected report header: " + line, line_no);
      }
      header_seen = true;
      continue;
    }
    std::istringstream split(line);
    std::string dataset;
    std::string eps_token;
    std::string delta_token;
    std::string metric;
    std::string value_token;
    if (!std::getline(split, dataset, ',') || !std::getline(split, eps_token, ',') ||
        !std::getline(split, delta_token, ',') || !std::getline(split, metric, ',') ||
        !std::getline(split, value_token)) {
      throw ParseError("malformed report row: " + line, line_no);
    }
    double epsilon = 0.0;
    double delta = 0.0;
    double value = 0.0;
    if (!detail::parse_double(eps_token, epsilon) ||
        !detail::parse_double(delta_token, delta) ||
        !detail::parse_double(value_token, value)) {
      throw ParseError("malformed numeric cell in report row", line_no);
    }

    auto& rows = rows_by_dataset[dataset];
    auto& index = index_of[dataset];
    if (rows.empty() && std::find(dataset_order.begin(), dataset_order.end(), dataset) ==
                            dataset_order.end()) {
      dataset_order.push_back(dataset);
    }
    const auto key = std::make_pair(epsilon, delta);
    auto it = index.find(key);
    if (it == index.end()) {
      MultiplicityRow row;
      row.epsilon = epsilon;
      row.delta = delta;
      index.emplace(key, rows.size());
      rows.push_back(row);
      it = index.find(key);
    }
    MultiplicityRow& row = rows[it->second];
    if (metric == "ambiguity") {
      row.ambiguity = value;
    } else if (metric == "discrepancy") {
      row.discrepancy = value;
    } else if (metric == "obscurity") {
      row.obscurity = value;
    } else if (metric == "rashomon_size") {
      row.rashomon_size = static_cast<std::size_t>(value);
    } else {
      throw ParseError("unknown metric in report: " + metric, line_no);
    }
  }
  if (!header_seen || rows_by_dataset.empty()) {
    throw ParseError("report file holds no rows", 0);
  }

  std::vector<MultiplicityReport> reports;
  reports.reserve(dataset_order.size());
  for (const auto& dataset : dataset_order) {
    MultiplicityReport report;
    report.dataset_id = dataset;
    report.rows = rows_by_dataset[dataset];
    report.validate();
    reports.push_back(std::move(report));
  }
  return reports;
}

std::vector<RashomonCharacteristicsRow> rashomon_characteristics(
    const PredictionCube& cube, std::span<const double> eps_grid) {
  std::vector<RashomonCharacteristicsRow> rows;
  rows.reserve(eps_grid.size());
  for (double eps : eps_grid) {
    const auto selection = rashomon_set(cube.performances, cube.reference_index, eps);
    RashomonCharacteristicsRow row;
    row.epsilon = eps;
    row.size = selection.member_indices.size();
    row.metric = to_string(cube.performances.front().kind);
    row.phi_reference = cube.performances[cube.reference_index].value;
    row.phi_worst = row.phi_reference;
    const bool lower_better =
        cube.performances.front().orientation == Orientation::kLowerIsBetter;
    row.c_index_min = std::nan("");
    row.c_index_max = std::nan("");
    for (std::size_t k : selection.member_indices) {
      const double phi = cube.performances[k].value;
      row.phi_worst = lower_better ? std::max(row.phi_worst, phi)
                                   : std::min(row.phi_worst, phi);
      if (!cube.aux_c_index.empty()) {
        const double ci = cube.aux_c_index[k];
        if (std::isnan(row.c_index_min) || ci < row.c_index_min) {
          row.c_index_min = ci;
        }
        if (std::isnan(row.c_index_max) || ci > row.c_index_max) {
          row.c_index_max = ci;
        }
      }
    }
    rows.push_back(row);
  }
  return rows;
}

void write_rashomon_csv(const std::filesystem::path& path, const std::string& dataset_id,
                        const std::vector<RashomonCharacteristicsRow>& rows,
                        const std::string& config_hash) {
  std::ofstream out(path);
  if (!out) {
    throw std::runtime_error("cannot write " + path.string());
  }
  out << "# survmult-rashomon v1";
  if (!config_hash.empty()) {
    out << " config=" << config_hash;
  }
  out << '\n';
  out << "dataset,epsilon,rashomon_size,metric,phi_reference,phi_worst,c_index_min,c_index_max\n";
  for (const auto& row : rows) {
    out << dataset_id << ',' << detail::format_double(row.epsilon) << ',' << row.size
        << ',' << row.metric << ',' << detail::format_double(row.phi_reference) << ','
        << detail::format_double(row.phi_worst) << ','
        << detail::format_double(row.c_index_min) << ','
        << detail::format_double(row.c_index_max) << '\n';
  }
}

std::string render_report_table(const std::vector<MultiplicityReport>& reports) {
  std::vector<const MultiplicityReport*> ordered;
  ordered.reserve(reports.size());
  for (const auto& r : reports) {
    ordered.push_back(&r);
  }
  std::sort(ordered.begin(), ordered.end(),
            [](const MultiplicityReport* a, const MultiplicityReport* b) {
              return a->dataset_id < b->dataset_id;
            });

  std::string out;
  char buf[160];
  std::snprintf(buf, sizeof(buf), "%-8s %8s %8s %11s %12s %10s %6s\n", "dataset",
                "epsilon", "delta", "ambiguity", "discrepancy", "obscurity", "size");
  out += buf;
  out += std::string(68, '-') + '\n';
  for (const auto* report : ordered) {
    for (const auto& row : report->rows) {
      std::snprintf(buf, sizeof(buf), "%-8s %8.4f %8.4f %11.4f %12.4f %10.4f %6zu\n",
                    report->dataset_id.c_str(), row.epsilon, row.delta, row.ambiguity,
                    row.discrepancy, row.obscurity, row.rashomon_size);
      out += buf;
    }
  }
  return out;
}

}  // namespace survmult
