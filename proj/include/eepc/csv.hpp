#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace eepc {

/// Shortest decimal form that round-trips to the same double (at most 17
/// significant digits). Non-finite values print as nan / inf / -inf.
std::string format_number(double value);

/// Minimal comma-separated writer; every row must match the header width.
class CsvWriter {
public:
    CsvWriter(std::ostream& out, std::vector<std::string> header);

    void row(const std::vector<double>& values);
    void row(const std::vector<std::string>& cells);

    std::size_t columns() const { return width_; }

private:
    std::ostream& out_;
    std::size_t width_;
};

}  // namespace eepc
