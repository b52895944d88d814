#include "splineproj/report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <system_error>

#include "splineproj/errors.hpp"

namespace splineproj {

std::string format_double(double v) {
    char buf[64];
    const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
    (void)ec;
    return std::string(buf, p);
}

std::string config_comment_block(const ConfigEcho& config) {
    std::string out = "# ";
    out += kFormatVersion;
    out += "\n";
    for (const auto& [key, value] : config) {
        out += "# ";
        out += key;
        out += " = ";
        out += value;
        out += "\n";
    }
    return out;
}

void write_file_atomic(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot open '" + tmp + "' for writing");
        out << content;
        out.flush();
        if (!out) throw IoError("write to '" + tmp + "' failed");
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp);
        throw IoError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
    }
}

CsvWriter::CsvWriter(const ConfigEcho& config) : head_(config_comment_block(config)) {}

void CsvWriter::header(const std::vector<std::string>& columns) {
    if (columns_ != 0) throw OutOfRange("CSV header already set");
    if (columns.empty()) throw OutOfRange("CSV header needs at least one column");
    columns_ = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i) {
        if (i) head_ += ',';
        head_ += columns[i];
    }
    head_ += '\n';
}

CsvWriter& CsvWriter::add(const std::string& cell) {
    pending_.push_back(cell);
    return *this;
}

CsvWriter& CsvWriter::add(const char* cell) { return add(std::string(cell)); }

CsvWriter& CsvWriter::add(double v) { return add(format_double(v)); }

CsvWriter& CsvWriter::add(int v) { return add(std::to_string(v)); }

CsvWriter& CsvWriter::add(long v) { return add(std::to_string(v)); }

void CsvWriter::end_row() {
    if (columns_ == 0) throw OutOfRange("CSV row before header");
    if (pending_.size() != columns_)
        throw OutOfRange("CSV row has " + std::to_string(pending_.size()) +
                         " cells, header has " + std::to_string(columns_));
    for (std::size_t i = 0; i < pending_.size(); ++i) {
        if (i) body_ += ',';
        body_ += pending_[i];
    }
    body_ += '\n';
    pending_.clear();
}

std::string CsvWriter::str() const {
    if (!pending_.empty()) throw OutOfRange("CSV row left open");
    return head_ + body_;
}

std::string matrix_text(const DenseMatrix& m, const ConfigEcho& config) {
    std::string out = config_comment_block(config);
    for (int i = 0; i < m.rows(); ++i) {
        for (int j = 0; j < m.cols(); ++j) {
            if (j) out += ' ';
            out += format_double(m.at(i, j));
        }
        out += '\n';
    }
    return out;
}

}  // namespace splineproj
