#pragma once

// Profile documents: {"breakpoints": [[r, v], ...], "tail_slope": number | "inf"}.

#include <stdexcept>
#include <string>
#include <string_view>

#include "santalo/profile.hpp"

namespace santalo::io {

/// Malformed JSON (message carries line and column) or a document that
/// fails a field or profile check (message names the field).
struct ParseError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

ConvexProfile parse_profile(std::string_view text);

/// Canonical form, 17 significant digits; identical profiles give identical bytes.
std::string format_profile(const ConvexProfile& p);

/// %.17g, with "inf"/"-inf"/"nan" spelled out.
std::string format_number(double x);

}  // namespace santalo::io
