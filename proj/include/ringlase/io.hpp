#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>

namespace ringlase {

std::string read_file(const std::string& path);

/// Shortest decimal that round-trips to the same double.
std::string format_double(double v);

/// Writes to a sibling temporary file, then renames over `path`.
void write_atomic(const std::string& path, const std::string& content);

std::string sha256_hex(const std::string& data);

struct Provenance {
    std::string version;
    std::string config_sha256;
    std::optional<std::uint64_t> seed;
    bool timestamp = true;

    /// '#'-prefixed comment lines ending in newline.
    std::string header() const;
};

struct GridMeta {
    double signal_center_nm;
    double signal_step_pm;
    std::size_t signal_points;
    double idler_center_nm;
    double idler_step_pm;
    std::size_t idler_points;
};

enum class MatrixKind { jsd, jsa };

struct MatrixFile {
    GridMeta grid;
    MatrixKind kind;
    Eigen::MatrixXcd values;  // jsd files load as real values
};

/// Comment lines, a metadata header row, one metadata value row, then the
/// matrix rows (jsa rows hold re,im pairs).
std::string format_matrix(const Provenance& prov, const GridMeta& grid, MatrixKind kind,
                          const Eigen::MatrixXcd& values);
MatrixFile parse_matrix(const std::string& text);

}  // namespace ringlase
