#include "edclust/io.hpp"

#include <cerrno>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace edclust {

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) fields.push_back(field);
  if (!line.empty() && line.back() == ',') fields.emplace_back();
  return fields;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) return "";
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

double parse_cell(const std::string& raw, std::size_t row, std::size_t col) {
  const std::string cell = trim(raw);
  const char* first = cell.data();
  const char* last = cell.data() + cell.size();
  double value = 0.0;
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || cell.empty()) {
    throw std::runtime_error("csv: non-numeric cell at data row " + std::to_string(row + 1) +
                             ", column " + std::to_string(col + 1) + ": '" + cell + "'");
  }
  return value;
}

}  // namespace

TimeSeriesPanel read_panel_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) {
    throw std::runtime_error("csv: cannot open '" + path.string() + "'");
  }
  std::string line;
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  bool have_header = false;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') continue;  // provenance comments
    std::vector<std::string> fields = split_csv_line(line);
    if (!have_header) {
      for (std::string& f : fields) f = trim(f);
      header = fields;
      have_header = true;
      continue;
    }
    if (fields.size() != header.size()) {
      throw std::runtime_error("csv: ragged row " + std::to_string(rows.size() + 1) + " ('" +
                               path.string() + "'): expected " + std::to_string(header.size()) +
                               " cells, got " + std::to_string(fields.size()));
    }
    std::vector<double> row(fields.size());
    for (std::size_t c = 0; c < fields.size(); ++c) row[c] = parse_cell(fields[c], rows.size(), c);
    rows.push_back(std::move(row));
  }
  if (!have_header || rows.empty()) {
    throw std::runtime_error("csv: no data rows in '" + path.string() + "'");
  }

  TimeSeriesPanel panel;
  panel.names = header;
  panel.values.resize(static_cast<Eigen::Index>(rows.size()),
                      static_cast<Eigen::Index>(header.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < header.size(); ++c) {
      panel.values(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) = rows[r][c];
    }
  }
  validate_panel(panel);
  return panel;
}

namespace {

std::string metadata_block(const Metadata& metadata) {
  std::string out;
  for (const auto& [key, value] : metadata) {
    out += "# " + key + ": " + value + "\n";
  }
  return out;
}

std::string join_names(const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < names.size(); ++i) {
    if (i) out += ",";
    out += names[i];
  }
  return out;
}

}  // namespace

std::string panel_to_csv(const TimeSeriesPanel& panel, const Metadata& metadata) {
  validate_panel(panel);
  if (panel.names.empty()) {
    throw std::invalid_argument("panel_to_csv: component names required");
  }
  std::string out = metadata_block(metadata);
  out += join_names(panel.names) + "\n";
  for (Eigen::Index t = 0; t < panel.values.rows(); ++t) {
    for (Eigen::Index j = 0; j < panel.values.cols(); ++j) {
      if (j) out += ",";
      out += format_g17(panel.values(t, j));
    }
    out += "\n";
  }
  return out;
}

std::string dissimilarity_to_csv(const DissimilarityMatrix& d,
                                 const std::vector<std::string>& names,
                                 const Metadata& metadata) {
  validate_dissimilarity_matrix(d);
  if (static_cast<Eigen::Index>(names.size()) != d.size()) {
    throw std::invalid_argument("dissimilarity_to_csv: name count mismatch");
  }
  std::string out = metadata_block(metadata);
  out += "name," + join_names(names) + "\n";
  for (Eigen::Index j = 0; j < d.size(); ++j) {
    out += names[static_cast<std::size_t>(j)];
    for (Eigen::Index k = 0; k < d.size(); ++k) {
      out += "," + format_g17(d.values(j, k));
    }
    out += "\n";
  }
  return out;
}

void write_text_atomic(const std::filesystem::path& path, const std::string& content) {
  std::filesystem::path dir = path.parent_path();
  if (dir.empty()) dir = ".";
  std::filesystem::create_directories(dir);
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) {
      throw std::runtime_error("io: cannot open temporary file '" + tmp.string() + "'");
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
      throw std::runtime_error("io: short write to '" + tmp.string() + "'");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    throw std::runtime_error("io: rename to '" + path.string() + "' failed: " + ec.message());
  }
}

}  // namespace edclust
