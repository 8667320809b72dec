#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "weylspec/common.hpp"
#include "weylspec/version.hpp"

namespace weylspec {

using json = nlohmann::json;

/// 17 significant digits: round-trips every double exactly.
inline std::string format_full(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

/// CSV emitter with a versioned schema comment line and a fixed header row.
class CsvWriter {
public:
    CsvWriter(const std::filesystem::path& path, const std::string& schema,
              const std::vector<std::string>& columns)
        : out_(path) {
        if (!out_) throw Error("cannot open " + path.string() + " for writing");
        out_ << "# weylspec csv schema=" << schema << ".v" << csv_schema_version
             << "\n";
        for (size_t i = 0; i < columns.size(); ++i)
            out_ << columns[i] << (i + 1 < columns.size() ? "," : "\n");
        n_cols_ = columns.size();
    }

    void row(const std::vector<double>& values) {
        if (values.size() != n_cols_)
            throw Error("CsvWriter: column count mismatch");
        for (size_t i = 0; i < values.size(); ++i)
            out_ << format_full(values[i]) << (i + 1 < values.size() ? "," : "\n");
    }

private:
    std::ofstream out_;
    size_t n_cols_ = 0;
};

inline void write_json_file(const std::filesystem::path& path, const json& j) {
    std::ofstream out(path);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << "\n";
}

} // namespace weylspec
