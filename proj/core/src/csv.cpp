#include "diffhmm/csv.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "diffhmm/errors.hpp"

namespace diffhmm {

std::string csv_double(double x) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

struct CsvWriter::Impl {
    std::ofstream out;
    std::size_t nCols;
};

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : impl_(new Impl) {
    impl_->out.open(path);
    if (!impl_->out) {
        delete impl_;
        throw NumericError("cannot open " + path);
    }
    impl_->nCols = columns.size();
    for (std::size_t i = 0; i < columns.size(); ++i)
        impl_->out << (i ? "," : "") << columns[i];
    impl_->out << "\n";
}

CsvWriter::~CsvWriter() { delete impl_; }

void CsvWriter::row(const std::vector<std::string>& cells) {
    if (cells.size() != impl_->nCols) throw PreconditionError("csv row width mismatch");
    for (std::size_t i = 0; i < cells.size(); ++i)
        impl_->out << (i ? "," : "") << cells[i];
    impl_->out << "\n";
}

std::string join_path(const std::string& dir, const std::string& file) {
    return (std::filesystem::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw NumericError("cannot create directory " + dir + ": " + ec.message());
}

}  // namespace diffhmm
