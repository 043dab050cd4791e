#include "cndisc/cli/csv_io.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <system_error>

namespace cndisc::cli {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) {
        fields.push_back(trim(field));
    }
    if (!line.empty() && line.back() == ',') {
        fields.emplace_back();
    }
    return fields;
}

bool parse_number(const std::string& field, double& out) {
    if (field.empty()) {
        return false;
    }
    const char* begin = field.data();
    const char* end = begin + field.size();
    if (*begin == '+') {
        ++begin;
    }
    const auto [ptr, ec] = std::from_chars(begin, end, out);
    return ec == std::errc() && ptr == end;
}

}  // namespace

CsvTable read_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    bool first_row = true;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        std::vector<double> values(fields.size());
        bool numeric = true;
        for (std::size_t i = 0; i < fields.size() && numeric; ++i) {
            numeric = parse_number(fields[i], values[i]);
        }
        if (first_row) {
            first_row = false;
            table.columns.resize(fields.size());
            if (!numeric) {
                table.header = fields;
                continue;
            }
        }
        if (!numeric) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": non-numeric field");
        }
        if (fields.size() != table.columns.size()) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected " +
                             std::to_string(table.columns.size()) + " fields, found " +
                             std::to_string(fields.size()));
        }
        for (std::size_t i = 0; i < values.size(); ++i) {
            table.columns[i].push_back(values[i]);
        }
    }
    if (in.bad()) {
        throw IoError("error while reading '" + path.string() + "'");
    }
    if (table.rows() == 0) {
        throw ParseError(path.string() + ": no data rows");
    }
    return table;
}

std::size_t resolve_column(const CsvTable& table, const std::string& selector) {
    for (std::size_t i = 0; i < table.header.size(); ++i) {
        if (table.header[i] == selector) {
            return i;
        }
    }
    std::size_t index = 0;
    const auto [ptr, ec] = std::from_chars(selector.data(), selector.data() + selector.size(), index);
    if (ec != std::errc() || ptr != selector.data() + selector.size()) {
        throw ParseError("no column named '" + selector + "'");
    }
    if (index >= table.columns.size()) {
        throw ParseError("column index " + selector + " out of range (" + std::to_string(table.columns.size()) +
                         " columns)");
    }
    return index;
}

SampleSeries series_from_table(const CsvTable& table, const std::string& x_col, const std::string& y_col) {
    const auto xi = resolve_column(table, x_col);
    const auto yi = resolve_column(table, y_col);
    try {
        return SampleSeries(table.columns[xi], table.columns[yi]);
    } catch (const Error& e) {
        throw ParseError(std::string("input series rejected: ") + e.what());
    }
}

std::string format_double(double v) {
    if (std::isnan(v)) {
        return "nan";
    }
    if (std::isinf(v)) {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        throw IoError("cannot open '" + path.string() + "' for writing");
    }
    out << content;
    out.flush();
    if (!out) {
        throw IoError("error while writing '" + path.string() + "'");
    }
}

void write_series_csv(const std::filesystem::path& path, const SampleSeries& series) {
    std::string s = "x,y\n";
    for (std::size_t i = 0; i < series.size(); ++i) {
        s += format_double(series.x()[i]) + "," + format_double(series.y()[i]) + "\n";
    }
    write_text(path, s);
}

void write_profile_csv(const std::filesystem::path& path, const std::vector<PointDiagnostics>& profile) {
    std::string s = "zeta,delta_t,variance,z,e_approx,e_combined,e_extrap\n";
    for (const auto& p : profile) {
        s += format_double(p.zeta) + "," + format_double(p.delta_t) + "," + format_double(p.variance) + "," +
             format_double(p.z_score) + "," + format_double(p.e_approx) + "," + format_double(p.e_combined) + "," +
             format_double(p.e_extrap) + "\n";
    }
    write_text(path, s);
}

std::vector<PointDiagnostics> read_profile_csv(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open '" + path.string() + "' for reading");
    }
    std::string line;
    if (!std::getline(in, line) || trim(line) != "zeta,delta_t,variance,z,e_approx,e_combined,e_extrap") {
        throw ParseError(path.string() + ": not a profile file (unexpected header)");
    }
    auto parse = [&](const std::string& f, std::size_t line_no) {
        if (f == "inf") return std::numeric_limits<double>::infinity();
        if (f == "-inf") return -std::numeric_limits<double>::infinity();
        if (f == "nan") return std::numeric_limits<double>::quiet_NaN();
        double v = 0.0;
        if (!parse_number(f, v)) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": bad number '" + f + "'");
        }
        return v;
    };
    std::vector<PointDiagnostics> profile;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto f = split_fields(line);
        if (f.size() != 7) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected 7 fields");
        }
        PointDiagnostics p;
        p.zeta = parse(f[0], line_no);
        p.delta_t = parse(f[1], line_no);
        p.variance = parse(f[2], line_no);
        p.z_score = parse(f[3], line_no);
        p.e_approx = parse(f[4], line_no);
        p.e_combined = parse(f[5], line_no);
        p.e_extrap = parse(f[6], line_no);
        p.gap = profile.size();  // the file does not carry gap indices
        profile.push_back(p);
    }
    return profile;
}

}  // namespace cndisc::cli
