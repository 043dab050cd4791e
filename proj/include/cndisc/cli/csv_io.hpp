#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cndisc/detector.hpp"
#include "cndisc/error.hpp"
#include "cndisc/series.hpp"

namespace cndisc::cli {

/// File could not be opened, read or written. Maps to exit status 2.
class IoError : public Error {
public:
    using Error::Error;
};

/// File contents are not what the format requires. Maps to exit status 2.
class ParseError : public Error {
public:
    using Error::Error;
};

struct CsvTable {
    std::vector<std::string> header;  ///< empty when the file has no header row
    std::vector<std::vector<double>> columns;

    std::size_t rows() const { return columns.empty() ? 0 : columns.front().size(); }
};

/// Comma-separated numbers; a first row that does not parse as numbers is
/// taken as the header. Blank lines are skipped.
CsvTable read_csv(const std::filesystem::path& path);

/// `selector` is a header name or a zero-based column index.
std::size_t resolve_column(const CsvTable& table, const std::string& selector);

SampleSeries series_from_table(const CsvTable& table, const std::string& x_col, const std::string& y_col);

/// Shortest round-trip decimal form.
std::string format_double(double v);

void write_series_csv(const std::filesystem::path& path, const SampleSeries& series);

/// Columns zeta,delta_t,variance,z,e_approx,e_combined,e_extrap.
void write_profile_csv(const std::filesystem::path& path, const std::vector<PointDiagnostics>& profile);
std::vector<PointDiagnostics> read_profile_csv(const std::filesystem::path& path);

/// Writes `content` to `path`, throwing IoError on failure.
void write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace cndisc::cli
