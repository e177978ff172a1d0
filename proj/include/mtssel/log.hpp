#pragma once

#include <iostream>
#include <string_view>

namespace mtssel {

inline void warn(std::string_view message) { std::cerr << "warning: " << message << '\n'; }

} // namespace mtssel
