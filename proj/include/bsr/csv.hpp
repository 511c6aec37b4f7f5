#pragma once

#include <cstdio>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace bsr::harness {

// CSV writer: '#' comment lines for the parameter echo / config hash, one
// header row, floats at 17 significant digits so identical runs are
// byte-identical.
class CsvWriter {
  public:
    explicit CsvWriter(const std::string& path) : out_(path) {
        if (!out_) throw std::runtime_error("csv: cannot open " + path);
    }
    void comment(const std::string& line) { out_ << "# " << line << "\n"; }
    void header(const std::vector<std::string>& cols) {
        for (size_t i = 0; i < cols.size(); ++i) out_ << (i ? "," : "") << cols[i];
        out_ << "\n";
    }
    void row(const std::vector<double>& vals) {
        char buf[32];
        for (size_t i = 0; i < vals.size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", vals[i]);
            out_ << (i ? "," : "") << buf;
        }
        out_ << "\n";
    }
    static std::string format(double v) {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        return buf;
    }

  private:
    std::ofstream out_;
};

}  // namespace bsr::harness
