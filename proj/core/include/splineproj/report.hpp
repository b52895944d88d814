#pragma once

#include <string>
#include <utility>
#include <vector>

#include "splineproj/banded_matrix.hpp"

namespace splineproj {

/// Ordered key/value pairs echoed into every output file.
using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

/// Version string stamped into every output file.
inline constexpr const char* kFormatVersion = "splineproj-v1";

/// Shortest decimal form that round-trips to the same double.
std::string format_double(double v);

/// Leading comment block: the format version, then one `# key = value`
/// line per config entry, in the given order.
std::string config_comment_block(const ConfigEcho& config);

/// Writes content through a temp file in the same directory plus rename,
/// so readers never observe a partial file.  IoError on failure.
void write_file_atomic(const std::string& path, const std::string& content);

/// Comma-separated output with `.` decimals: config comment block, then a
/// mandatory header row, then data rows.  All doubles go through
/// format_double, so equal configs serialize to identical bytes.
class CsvWriter {
public:
    explicit CsvWriter(const ConfigEcho& config);

    void header(const std::vector<std::string>& columns);

    CsvWriter& add(const std::string& cell);
    CsvWriter& add(const char* cell);
    CsvWriter& add(double v);
    CsvWriter& add(int v);
    CsvWriter& add(long v);
    /// Closes the current row; the cell count must match the header.
    void end_row();

    std::string str() const;

private:
    std::string head_;
    std::string body_;
    std::vector<std::string> pending_;
    std::size_t columns_ = 0;
};

/// Dense text rendering (one space-separated row per line) behind the
/// config comment block.
std::string matrix_text(const DenseMatrix& m, const ConfigEcho& config);

}  // namespace splineproj
