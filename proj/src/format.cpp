#include "osbounds/format.hpp"

#include "osbounds/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <limits>

namespace osbounds {

std::string format_real(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    if (std::isnan(value)) return "nan";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    return buf;
}

double parse_real(std::string_view text) {
    if (text == "inf") return std::numeric_limits<double>::infinity();
    if (text == "-inf") return -std::numeric_limits<double>::infinity();
    const std::string s(text);
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size()) {
        throw DomainError("not a number: '" + s + "'");
    }
    return v;
}

}  // namespace osbounds
