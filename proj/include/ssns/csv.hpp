#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace ssns::csv {

inline constexpr int kSchemaVersion = 1;

/// Scientific notation with 17 significant digits; "nan"/"inf" spelled out.
std::string num(double v);

/// Minimal CSV emitter: comma separated, '\n' line ends, '#' comment lines.
class Writer {
public:
    explicit Writer(std::ostream& out) : out_(out) {}

    void comment(const std::string& text);
    void row(const std::vector<std::string>& cells);
    /// Blank line between blocks of one report.
    void separator();

private:
    std::ostream& out_;
};

}  // namespace ssns::csv
