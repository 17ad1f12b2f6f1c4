// CSV emission: header row always, numbers at 17 significant digits,
// deterministic field order.
#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "polydense/common.hpp"

namespace polydense {

inline std::string format_g17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

class CsvWriter {
  public:
    CsvWriter(const std::string& path, std::vector<std::string> header) : path_(path) {
        out_.open(path, std::ios::binary | std::ios::trunc);
        if (!out_) throw RangeError("cannot open output file: " + path);
        write_row_strings(header);
    }

    void write_row_strings(const std::vector<std::string>& fields) {
        for (size_t i = 0; i < fields.size(); ++i) {
            if (i) out_ << ',';
            out_ << fields[i];
        }
        out_ << '\n';
    }

    // mixed row: any string fields pre-rendered by the caller
    template <class... Ts>
    void row(const Ts&... vals) {
        std::vector<std::string> fields;
        (fields.push_back(render(vals)), ...);
        write_row_strings(fields);
    }

    // flush and close so the file can be read back (idempotent)
    void close() {
        if (out_.is_open()) out_.close();
    }

    const std::string& path() const { return path_; }

  private:
    static std::string render(double v) { return format_g17(v); }
    static std::string render(int v) { return std::to_string(v); }
    static std::string render(const char* s) { return s; }
    static std::string render(const std::string& s) { return s; }

    std::string path_;
    std::ofstream out_;
};

} // namespace polydense
