#pragma once

#include <string>
#include <vector>

namespace diffhmm {

/// Floating-point value printed with 17 significant digits, so emitted CSVs
/// are byte-reproducible and round-trip exactly.
std::string csv_double(double x);

/// Minimal CSV writer: fixed column set, one row at a time.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& columns);
    ~CsvWriter();
    CsvWriter(const CsvWriter&) = delete;
    CsvWriter& operator=(const CsvWriter&) = delete;

    void row(const std::vector<std::string>& cells);

private:
    struct Impl;
    Impl* impl_;
};

std::string join_path(const std::string& dir, const std::string& file);
void ensure_dir(const std::string& dir);

}  // namespace diffhmm
