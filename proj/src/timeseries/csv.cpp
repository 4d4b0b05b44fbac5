#include "hybridtherm/timeseries/csv.hpp"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hybridtherm/core/civil.hpp"

namespace hybridtherm {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, sep)) out.push_back(field);
    if (!line.empty() && line.back() == sep) out.emplace_back();
    return out;
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

}  // namespace

FrameSchema load_schema(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open schema file: " + path);
    FrameSchema schema;
    std::string line;
    while (std::getline(in, line)) {
        line = trim(line);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw std::runtime_error("bad schema line: '" + line + "'");
        ColumnSpec spec;
        spec.name = trim(line.substr(0, eq));
        const auto rhs = split(line.substr(eq + 1), ',');
        if (rhs.empty()) throw std::runtime_error("bad schema line: '" + line + "'");
        spec.group = feature_group_from_string(trim(rhs[0]));
        spec.unit = rhs.size() > 1 ? trim(rhs[1]) : "";
        schema.push_back(std::move(spec));
    }
    return schema;
}

void write_schema(const FrameSchema& schema, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write schema file: " + path);
    for (const auto& s : schema)
        out << s.name << " = " << to_string(s.group) << ", " << s.unit << "\n";
}

FrameSchema schema_of(const TimeSeriesFrame& frame) {
    FrameSchema schema;
    for (const auto& c : frame.columns()) schema.push_back({c.name, c.group, c.unit});
    return schema;
}

TimeSeriesFrame load_csv(const std::string& path, const FrameSchema& schema) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open data file: " + path);

    std::string line;
    if (!std::getline(in, line)) throw std::runtime_error("empty data file: " + path);
    const auto header = split(trim(line), ',');
    if (header.empty() || trim(header[0]) != "timestamp")
        throw std::runtime_error("first CSV column must be 'timestamp'");

    std::vector<const ColumnSpec*> specs;
    for (std::size_t i = 1; i < header.size(); ++i) {
        const std::string name = trim(header[i]);
        const ColumnSpec* found = nullptr;
        for (const auto& s : schema)
            if (s.name == name) { found = &s; break; }
        if (!found)
            throw std::runtime_error("column '" + name + "' not declared in schema");
        specs.push_back(found);
    }

    std::vector<std::int64_t> timestamps;
    std::vector<std::vector<double>> data(specs.size());
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        line = trim(line);
        if (line.empty()) continue;
        const auto fields = split(line, ',');
        if (fields.size() != specs.size() + 1)
            throw std::runtime_error(path + ":" + std::to_string(line_no) +
                                     ": expected " + std::to_string(specs.size() + 1) +
                                     " fields, got " + std::to_string(fields.size()));
        timestamps.push_back(parse_iso8601(trim(fields[0])));
        for (std::size_t j = 0; j < specs.size(); ++j) {
            const std::string cell = trim(fields[j + 1]);
            double v = missing_value();
            if (!cell.empty()) {
                char* end = nullptr;
                const double parsed = std::strtod(cell.c_str(), &end);
                if (end == cell.c_str() + cell.size()) v = parsed;
            }
            data[j].push_back(v);
        }
    }

    int step = 1;
    if (timestamps.size() >= 2) {
        const std::int64_t d = timestamps[1] - timestamps[0];
        if (d > 0 && d % 60 == 0) step = static_cast<int>(d / 60);
    }
    TimeSeriesFrame frame(std::move(timestamps), step);
    for (std::size_t j = 0; j < specs.size(); ++j)
        frame.add_column({specs[j]->name, specs[j]->group, specs[j]->unit, std::move(data[j])});
    return frame;
}

TimeSeriesFrame load_csv_with_sidecar(const std::string& path, const std::string& schema_path) {
    return load_csv(path, load_schema(schema_path));
}

void write_csv(const TimeSeriesFrame& frame, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write data file: " + path);
    out << "timestamp";
    for (const auto& c : frame.columns()) out << ',' << c.name;
    out << '\n';
    for (std::size_t i = 0; i < frame.rows(); ++i) {
        out << to_iso8601(frame.timestamps()[i]);
        for (const auto& c : frame.columns()) {
            out << ',';
            if (!is_missing(c.values[i])) out << format_double(c.values[i]);
        }
        out << '\n';
    }
}

}  // namespace hybridtherm
