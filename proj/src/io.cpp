#include "slrr/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace slrr {

namespace {

constexpr char kMagic[4] = {'S', 'L', 'R', 'R'};

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return "";
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    out.push_back(trim(field));
  }
  if (!line.empty() && line.back() == ',') {
    out.push_back("");
  }
  return out;
}

bool parse_double(const std::string& field, double* out) {
  if (field.empty()) return false;
  char* end = nullptr;
  const double v = std::strtod(field.c_str(), &end);
  if (end != field.c_str() + field.size()) return false;
  *out = v;
  return true;
}

int parse_label(const std::string& field) {
  double v;
  if (!parse_double(field, &v) || v != std::floor(v)) {
    throw std::invalid_argument("csv: label column must hold integers");
  }
  return static_cast<int>(v);
}

Dataset read_dataset_csv(std::ifstream& in) {
  Dataset ds;
  std::vector<std::string> names;
  bool header_checked = false;
  int label_col = -1;
  int id_col = -1;
  std::vector<std::vector<double>> rows;
  std::vector<int> labels;

  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line.rfind("#kind=", 0) == 0) {
        ds.kind = parse_kind(trim(line.substr(6)));
      }
      continue;
    }
    std::vector<std::string> fields = split_fields(line);
    if (!header_checked) {
      header_checked = true;
      bool all_numeric = true;
      double scratch;
      for (const std::string& f : fields) {
        if (!parse_double(f, &scratch)) {
          all_numeric = false;
          break;
        }
      }
      if (!all_numeric) {
        names = fields;
        for (int c = 0; c < static_cast<int>(names.size()); ++c) {
          if (names[c] == "label") label_col = c;
          if (names[c] == "id") id_col = c;
        }
        continue;
      }
    }
    const std::size_t expected =
        names.empty() ? (rows.empty() ? fields.size() : rows[0].size() +
                                                            (label_col >= 0) +
                                                            (id_col >= 0))
                      : names.size();
    if (fields.size() != expected) {
      throw std::invalid_argument("csv: inconsistent column count");
    }
    std::vector<double> row;
    row.reserve(fields.size());
    for (int c = 0; c < static_cast<int>(fields.size()); ++c) {
      if (c == label_col) {
        labels.push_back(parse_label(fields[c]));
        continue;
      }
      if (c == id_col) {
        ds.ids.push_back(fields[c]);
        continue;
      }
      double v;
      if (!parse_double(fields[c], &v)) {
        throw std::invalid_argument("csv: non-numeric value field");
      }
      row.push_back(v);
    }
    rows.push_back(std::move(row));
  }

  const Eigen::Index n = static_cast<Eigen::Index>(rows.size());
  const Eigen::Index p = n > 0 ? static_cast<Eigen::Index>(rows[0].size()) : 0;
  ds.values.resize(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < p; ++j) {
      ds.values(i, j) = rows[i][j];
    }
  }
  if (label_col >= 0) {
    ds.labels = std::move(labels);
  }
  if (id_col < 0) {
    ds.ids.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      ds.ids[i] = "row_" + std::to_string(i);
    }
  }
  return ds;
}

}  // namespace

DataKind parse_kind(const std::string& name) {
  if (name == "raw") return DataKind::raw;
  if (name == "hist") return DataKind::hist;
  if (name == "sphere") return DataKind::sphere;
  throw std::invalid_argument("unknown data kind: " + name);
}

std::string to_string(DataKind kind) {
  switch (kind) {
    case DataKind::raw: return "raw";
    case DataKind::hist: return "hist";
    case DataKind::sphere: return "sphere";
    case DataKind::unspecified: return "unspecified";
  }
  return "unspecified";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

Dataset read_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  char magic[4] = {0, 0, 0, 0};
  in.read(magic, 4);
  const bool is_binary =
      in.gcount() == 4 && std::memcmp(magic, kMagic, 4) == 0;
  in.clear();
  in.seekg(0);
  if (is_binary) {
    Dataset ds;
    ds.values = read_matrix_bin(path);
    ds.ids.resize(ds.values.rows());
    for (Eigen::Index i = 0; i < ds.values.rows(); ++i) {
      ds.ids[i] = "row_" + std::to_string(i);
    }
    return ds;
  }
  return read_dataset_csv(in);
}

void write_dataset_csv(const std::string& path, const Dataset& ds) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  if (ds.kind != DataKind::unspecified) {
    out << "#kind=" << to_string(ds.kind) << "\n";
  }
  for (Eigen::Index j = 0; j < ds.values.cols(); ++j) {
    if (j > 0) out << ",";
    out << "c" << j;
  }
  if (ds.labels.has_value()) {
    out << ",label";
  }
  out << "\n";
  for (Eigen::Index i = 0; i < ds.values.rows(); ++i) {
    for (Eigen::Index j = 0; j < ds.values.cols(); ++j) {
      if (j > 0) out << ",";
      out << format_double(ds.values(i, j));
    }
    if (ds.labels.has_value()) {
      out << "," << (*ds.labels)[i];
    }
    out << "\n";
  }
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  if (!header.empty()) {
    if (static_cast<Eigen::Index>(header.size()) != m.cols()) {
      throw DimensionError("write_matrix_csv: header width mismatch");
    }
    for (std::size_t j = 0; j < header.size(); ++j) {
      if (j > 0) out << ",";
      out << header[j];
    }
    out << "\n";
  }
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j > 0) out << ",";
      out << format_double(m(i, j));
    }
    out << "\n";
  }
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

Eigen::MatrixXd read_matrix_bin(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open " + path);
  }
  char magic[4];
  in.read(magic, 4);
  if (in.gcount() != 4 || std::memcmp(magic, kMagic, 4) != 0) {
    throw IoError("bad magic in " + path);
  }
  std::uint32_t rows = 0, cols = 0;
  in.read(reinterpret_cast<char*>(&rows), 4);
  in.read(reinterpret_cast<char*>(&cols), 4);
  if (!in) {
    throw IoError("truncated header in " + path);
  }
  Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor> m(
      rows, cols);
  in.read(reinterpret_cast<char*>(m.data()),
          static_cast<std::streamsize>(sizeof(double)) * rows * cols);
  if (in.gcount() !=
      static_cast<std::streamsize>(sizeof(double)) * rows * cols) {
    throw IoError("truncated payload in " + path);
  }
  return m;
}

void write_matrix_bin(const std::string& path, const Eigen::MatrixXd& m) {
  std::ofstream out(path, std::ios::binary);
  if (!out) {
    throw IoError("cannot write " + path);
  }
  out.write(kMagic, 4);
  const std::uint32_t rows = static_cast<std::uint32_t>(m.rows());
  const std::uint32_t cols = static_cast<std::uint32_t>(m.cols());
  out.write(reinterpret_cast<const char*>(&rows), 4);
  out.write(reinterpret_cast<const char*>(&cols), 4);
  const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>
      rm = m;
  out.write(reinterpret_cast<const char*>(rm.data()),
            static_cast<std::streamsize>(sizeof(double)) * rows * cols);
  if (!out) {
    throw IoError("write failed for " + path);
  }
}

}  // namespace slrr
