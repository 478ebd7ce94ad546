#pragma once

#include <string>
#include <string_view>

namespace anm {

/// Quotes a CSV field when it contains a separator, quote or line break.
std::string csv_field(std::string_view value);

}  // namespace anm
