#include "rbnn/table.hpp"

#include <cerrno>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

#include "rbnn/errors.hpp"

namespace rbnn {

namespace {

std::vector<std::string> split_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::stringstream stream(line);
  while (std::getline(stream, cell, ',')) {
    cells.push_back(cell);
  }
  if (!line.empty() && line.back() == ',') {
    cells.emplace_back();
  }
  return cells;
}

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r");
  if (begin == std::string::npos) {
    return "";
  }
  const auto end = s.find_last_not_of(" \t\r");
  return s.substr(begin, end - begin + 1);
}

}  // namespace

std::size_t LabeledTable::feature_index(const std::string& name) const {
  for (std::size_t i = 0; i < feature_names.size(); ++i) {
    if (feature_names[i] == name) {
      return i;
    }
  }
  throw DataError("unknown feature: " + name);
}

LabeledTable LabeledTable::take_rows(std::span<const std::size_t> indices) const {
  LabeledTable out;
  out.feature_names = feature_names;
  out.features.reserve(indices.size() * cols());
  out.labels.reserve(indices.size());
  for (std::size_t idx : indices) {
    const auto src = row(idx);
    out.features.insert(out.features.end(), src.begin(), src.end());
    out.labels.push_back(labels[idx]);
  }
  return out;
}

LabeledTable load_csv(const std::string& path,
                      std::span<const std::string> expected_names) {
  std::ifstream file(path);
  if (!file) {
    throw DataError("cannot open CSV file: " + path);
  }
  std::string line;
  if (!std::getline(file, line)) {
    throw DataError("empty CSV file: " + path);
  }
  const auto header = split_line(line);

  // Map contract order -> file column, plus the label column.
  std::vector<std::size_t> feature_cols(expected_names.size());
  std::size_t label_col = header.size();
  for (std::size_t i = 0; i < expected_names.size(); ++i) {
    bool found = false;
    for (std::size_t c = 0; c < header.size(); ++c) {
      if (trim(header[c]) == expected_names[i]) {
        feature_cols[i] = c;
        found = true;
        break;
      }
    }
    if (!found) {
      throw DataError(path + ": missing column \"" + expected_names[i] + "\"");
    }
  }
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (trim(header[c]) == kLabelColumnName) {
      label_col = c;
      break;
    }
  }
  if (label_col == header.size()) {
    throw DataError(path + ": missing column \"" + kLabelColumnName + "\"");
  }

  LabeledTable table;
  table.feature_names.assign(expected_names.begin(), expected_names.end());

  std::size_t line_no = 1;
  while (std::getline(file, line)) {
    ++line_no;
    if (trim(line).empty()) {
      continue;
    }
    const auto cells = split_line(line);
    if (cells.size() != header.size()) {
      throw DataError(path + ": row " + std::to_string(line_no) + " has " +
                      std::to_string(cells.size()) + " cells, expected " +
                      std::to_string(header.size()));
    }
    auto parse_cell = [&](std::size_t col) {
      const std::string text = trim(cells[col]);
      errno = 0;
      char* end = nullptr;
      const double value = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        throw DataError(path + ": unparseable cell at row " + std::to_string(line_no) +
                        ", column \"" + trim(header[col]) + "\"");
      }
      return value;
    };
    for (std::size_t i = 0; i < expected_names.size(); ++i) {
      table.features.push_back(parse_cell(feature_cols[i]));
    }
    const double label = parse_cell(label_col);
    if (label != 0.0 && label != 1.0) {
      throw DataError(path + ": non-binary label at row " + std::to_string(line_no));
    }
    table.labels.push_back(label == 1.0 ? 1 : 0);
  }
  if (table.labels.empty()) {
    throw DataError(path + ": no data rows");
  }
  return table;
}

std::string format_double(double value) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", value);
  return buf;
}

void write_csv(const LabeledTable& table, const std::string& path) {
  std::string out;
  for (std::size_t c = 0; c < table.cols(); ++c) {
    out += table.feature_names[c];
    out += ',';
  }
  out += kLabelColumnName;
  out += '\n';
  for (std::size_t r = 0; r < table.rows(); ++r) {
    for (std::size_t c = 0; c < table.cols(); ++c) {
      out += format_double(table.at(r, c));
      out += ',';
    }
    out += std::to_string(table.labels[r]);
    out += '\n';
  }
  write_file_atomic(path, out);
}

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream file(tmp, std::ios::binary | std::ios::trunc);
    if (!file) {
      throw DataError("cannot write file: " + tmp);
    }
    file.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!file) {
      throw DataError("write failed: " + tmp);
    }
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    throw DataError("cannot rename " + tmp + " to " + path + ": " + std::strerror(errno));
  }
}

}  // namespace rbnn
