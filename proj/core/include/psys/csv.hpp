#pragma once

#include <cstdio>
#include <fstream>
#include <string>
#include <vector>

#include "psys/errors.hpp"

namespace psys {

/// 17 significant digits, enough to round-trip a double exactly.
inline std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

/// Minimal CSV emitter; floats formatted with fmt17 for byte-reproducible
/// output.
class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header)
        : out_(path) {
        if (!out_) throw IoError("cannot open CSV for writing: " + path);
        for (size_t i = 0; i < header.size(); ++i)
            out_ << (i ? "," : "") << header[i];
        out_ << "\n";
    }

    void row(const std::vector<double>& values) {
        for (size_t i = 0; i < values.size(); ++i)
            out_ << (i ? "," : "") << fmt17(values[i]);
        out_ << "\n";
    }

private:
    std::ofstream out_;
};

} // namespace psys
