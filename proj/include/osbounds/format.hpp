#pragma once

#include <string>
#include <string_view>

namespace osbounds {

// 17 significant digits ("%.17g"); infinities render as "inf" / "-inf".
std::string format_real(double value);

// Inverse of format_real; throws DomainError on malformed text.
double parse_real(std::string_view text);

}  // namespace osbounds
