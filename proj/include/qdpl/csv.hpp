// csv.hpp — deterministic CSV emission: `# key = value` metadata header, then rows
// printed with 9 significant digits.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "qdpl/errors.hpp"

namespace qdpl {

class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw Error("cannot open output file: " + path);
    }

    void meta(const std::string& key, const std::string& value) {
        out_ << "# " << key << " = " << value << "\n";
    }

    void meta(const std::vector<std::pair<std::string, std::string>>& kv) {
        for (const auto& [k, v] : kv) meta(k, v);
    }

    void header(const std::string& columns) { out_ << columns << "\n"; }

    void row(const std::vector<double>& values) {
        std::string line;
        char buf[40];
        for (size_t i = 0; i < values.size(); ++i) {
            snprintf(buf, sizeof buf, "%.9g", values[i]);
            if (i) line += ',';
            line += buf;
        }
        out_ << line << "\n";
    }

    void raw(const std::string& line) { out_ << line << "\n"; }

  private:
    std::ofstream out_;
};

inline std::string format_number(double v) {
    char buf[40];
    snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

} // namespace qdpl
