#include "wrt/io.hpp"

#include "wrt/error.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string_view>
#include <system_error>
#include <vector>

namespace wrt::io {

namespace fs = std::filesystem;

std::string format_double(double v) {
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf, static_cast<std::size_t>(n));
}

void write_text_file(const fs::path& path, const std::string& contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError(path.string(), "cannot open for writing");
        out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
        out.flush();
        if (!out) throw IoError(path.string(), "write failed");
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw IoError(path.string(), "cannot move into place");
    }
}

std::string read_text_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError(path.string(), "cannot open for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw IoError(path.string(), "read failed");
    return ss.str();
}

namespace {

struct Row {
    long index;
    double value;
    std::size_t line;
};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
        s.remove_suffix(1);
    return s;
}

std::vector<Row> read_rows(const fs::path& path) {
    const std::string text = read_text_file(path);
    const std::string name = path.string();
    std::vector<Row> rows;
    std::size_t line_no = 0;
    bool header = true;
    std::size_t pos = 0;
    while (pos < text.size()) {
        std::size_t end = text.find('\n', pos);
        if (end == std::string::npos) end = text.size();
        const std::string_view line = trim(std::string_view(text).substr(pos, end - pos));
        pos = end + 1;
        ++line_no;
        if (line.empty()) continue;
        if (header) {
            header = false;
            continue;
        }
        const auto comma = line.find(',');
        if (comma == std::string_view::npos) throw ParseError(name, line_no, "expected two columns");
        const auto first = trim(line.substr(0, comma));
        const auto second = trim(line.substr(comma + 1));
        if (second.find(',') != std::string_view::npos)
            throw ParseError(name, line_no, "expected two columns");

        Row row{0, 0.0, line_no};
        auto r1 = std::from_chars(first.data(), first.data() + first.size(), row.index);
        if (r1.ec != std::errc() || r1.ptr != first.data() + first.size())
            throw ParseError(name, line_no, "bad index '" + std::string(first) + "'");
        auto r2 = std::from_chars(second.data(), second.data() + second.size(), row.value);
        if (r2.ec != std::errc() || r2.ptr != second.data() + second.size())
            throw ParseError(name, line_no, "bad value '" + std::string(second) + "'");
        if (!std::isfinite(row.value)) throw ParseError(name, line_no, "non-finite value");
        rows.push_back(row);
    }
    if (rows.empty()) throw ParseError(name, line_no, "no data rows");
    return rows;
}

// Checks the index column counts up by one from `first`.
std::vector<double> values_from(const std::vector<Row>& rows, long first, const fs::path& path) {
    std::vector<double> out;
    out.reserve(rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        if (rows[i].index != first + static_cast<long>(i))
            throw ParseError(path.string(), rows[i].line,
                             "index " + std::to_string(rows[i].index) + " out of sequence, expected " +
                                 std::to_string(first + static_cast<long>(i)));
        out.push_back(rows[i].value);
    }
    return out;
}

} // namespace

void write_series_csv(const fs::path& path, const TimeSeries& series) {
    std::string s = "t,value\n";
    for (std::size_t t = 0; t < series.size(); ++t) {
        s += std::to_string(t);
        s += ',';
        s += format_double(series[t]);
        s += '\n';
    }
    write_text_file(path, s);
}

void write_kernel_csv(const fs::path& path, const Kernel& kernel) {
    std::string s = "lag,value\n";
    const auto v = kernel.values();
    for (std::size_t j = 0; j < v.size(); ++j) {
        s += std::to_string(kernel.lag_of(j));
        s += ',';
        s += format_double(v[j]);
        s += '\n';
    }
    write_text_file(path, s);
}

TimeSeries read_series_csv(const fs::path& path) {
    const auto rows = read_rows(path);
    return TimeSeries(values_from(rows, 0, path));
}

Kernel read_kernel_csv(const fs::path& path) {
    const auto rows = read_rows(path);
    if (rows.size() % 2 != 0)
        throw ParseError(path.string(), rows.back().line, "kernel must have an even number of rows");
    return Kernel(values_from(rows, -static_cast<long>(rows.size() / 2), path));
}

} // namespace wrt::io
