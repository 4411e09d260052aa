#include "klgof/csv_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>
#include <vector>

#include "klgof/errors.hpp"

namespace klgof {
namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

bool parse_double(const std::string& field, double& out) {
    if (field.empty()) return false;
    char* end = nullptr;
    out = std::strtod(field.c_str(), &end);
    return end == field.c_str() + field.size();
}

}  // namespace

PointSet read_csv_points(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw BadInputError("cannot open " + path.string());

    std::vector<double> data;
    int dim = 0;
    std::int64_t rows = 0;
    std::string line;
    bool first_content_line = true;
    std::int64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_fields(line);
        std::vector<double> row(fields.size());
        bool all_numeric = true;
        for (std::size_t c = 0; c < fields.size(); ++c) {
            if (!parse_double(fields[c], row[c])) {
                all_numeric = false;
                break;
            }
        }
        if (!all_numeric) {
            if (first_content_line) {
                first_content_line = false;  // header row
                continue;
            }
            throw BadInputError("non-numeric cell on line " +
                                std::to_string(line_no) + " of " + path.string());
        }
        first_content_line = false;
        if (dim == 0) {
            dim = static_cast<int>(fields.size());
        } else if (static_cast<int>(fields.size()) != dim) {
            throw BadInputError("ragged row on line " + std::to_string(line_no) +
                                " of " + path.string());
        }
        data.insert(data.end(), row.begin(), row.end());
        ++rows;
    }
    if (rows == 0) throw BadInputError("no observations in " + path.string());
    try {
        return {std::move(data), rows, dim};
    } catch (const DomainError& e) {
        throw BadInputError(std::string(e.what()) + " in " + path.string());
    }
}

void write_csv_points(const PointSet& points, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot open output file " + path.string());
    char buf[40];
    for (std::int64_t i = 0; i < points.size(); ++i) {
        for (int j = 0; j < points.dim(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", points(i, j));
            if (j) out << ',';
            out << buf;
        }
        out << '\n';
    }
}

}  // namespace klgof
