#include "ssns/csv.hpp"

#include <cmath>
#include <cstdio>
#include <ostream>

namespace ssns::csv {

std::string num(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void Writer::comment(const std::string& text) { out_ << "# " << text << '\n'; }

void Writer::row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ << ',';
        out_ << cells[i];
    }
    out_ << '\n';
}

void Writer::separator() { out_ << '\n'; }

}  // namespace ssns::csv
