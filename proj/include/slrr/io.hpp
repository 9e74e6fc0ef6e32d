#pragma once

#include <Eigen/Core>

#include <optional>
#include <string>
#include <vector>

#include "slrr/errors.hpp"

namespace slrr {

enum class DataKind { raw, hist, sphere, unspecified };

DataKind parse_kind(const std::string& name);
std::string to_string(DataKind kind);

/// One sample per row. `kind` reflects a "#kind=raw|hist|sphere" directive
/// in the file when present; `labels` the optional label column; `ids` the
/// id column or generated "row_<i>" names.
struct Dataset {
  Eigen::MatrixXd values;
  std::optional<std::vector<int>> labels;
  std::vector<std::string> ids;
  DataKind kind = DataKind::unspecified;
};

/// Full-precision decimal rendering ("%.17g") so CSV round-trips are exact.
std::string format_double(double v);

/// Reads a dataset from CSV or the SLRR binary matrix format, sniffed by
/// the leading magic bytes. CSV may start with "#kind=..." directives and
/// '#' comments; a first row with any non-numeric field is treated as a
/// header, whose "label" and "id" columns are split out. Throws IoError
/// when the file cannot be read, std::invalid_argument on malformed
/// content.
Dataset read_dataset(const std::string& path);

/// Writes values (+ label column when present) as CSV with a "#kind="
/// directive and a header row.
void write_dataset_csv(const std::string& path, const Dataset& ds);

/// Writes a bare numeric matrix as CSV, optionally with a header row.
void write_matrix_csv(const std::string& path, const Eigen::MatrixXd& m,
                      const std::vector<std::string>& header = {});

/// Binary dense-matrix format: magic "SLRR", u32 rows, u32 cols,
/// little-endian f64 row-major payload.
Eigen::MatrixXd read_matrix_bin(const std::string& path);
void write_matrix_bin(const std::string& path, const Eigen::MatrixXd& m);

}  // namespace slrr
