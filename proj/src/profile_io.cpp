#include "santalo/profile_io.hpp"

#include <cmath>
#include <cstdio>

#include <json.hpp>

namespace santalo::io {

namespace {

using nlohmann::json;

std::string where(std::string_view text, std::size_t byte) {
    std::size_t line = 1;
    std::size_t column = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return "line " + std::to_string(line) + ", column " + std::to_string(column);
}

double number_field(const json& j, const std::string& field) {
    if (!j.is_number()) throw ParseError("field " + field + ": expected a number, got " + j.dump());
    const double x = j.get<double>();
    if (!std::isfinite(x)) throw ParseError("field " + field + ": must be finite");
    return x;
}

}  // namespace

ConvexProfile parse_profile(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text.begin(), text.end());
    } catch (const json::parse_error& e) {
        // e.byte is one past the offending character
        const std::size_t at = e.byte > 0 ? e.byte - 1 : 0;
        throw ParseError("invalid JSON at " + where(text, at) + ": " + e.what());
    }
    if (!doc.is_object()) throw ParseError("document: expected a JSON object");
    for (const auto& [key, value] : doc.items()) {
        if (key != "breakpoints" && key != "tail_slope") throw ParseError("field " + key + ": unknown field");
    }
    if (!doc.contains("breakpoints")) throw ParseError("field breakpoints: missing");
    if (!doc.contains("tail_slope")) throw ParseError("field tail_slope: missing");

    const auto& bp = doc["breakpoints"];
    if (!bp.is_array() || bp.empty()) throw ParseError("field breakpoints: expected a non-empty array");
    std::vector<Knot> knots;
    knots.reserve(bp.size());
    for (std::size_t i = 0; i < bp.size(); ++i) {
        const std::string field = "breakpoints[" + std::to_string(i) + "]";
        if (!bp[i].is_array() || bp[i].size() != 2) throw ParseError("field " + field + ": expected [r, v]");
        knots.push_back({number_field(bp[i][0], field + "[0]"), number_field(bp[i][1], field + "[1]")});
    }

    const auto& ts = doc["tail_slope"];
    double tail = 0.0;
    if (ts.is_string()) {
        if (ts.get<std::string>() != "inf") throw ParseError("field tail_slope: the only string allowed is \"inf\"");
        tail = kInf;
    } else {
        tail = number_field(ts, "tail_slope");
    }

    try {
        return ConvexProfile(std::move(knots), tail);
    } catch (const InvalidProfile& e) {
        throw ParseError(std::string("profile: ") + e.what());
    }
}

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string format_profile(const ConvexProfile& p) {
    const auto c = p.canonical();
    std::string out = "{\"breakpoints\": [";
    bool first = true;
    for (const auto& k : c.knots()) {
        if (!first) out += ", ";
        first = false;
        out += "[" + format_number(k.r) + ", " + format_number(k.v) + "]";
    }
    out += "], \"tail_slope\": ";
    out += c.has_indicator_tail() ? std::string("\"inf\"") : format_number(c.tail_slope());
    out += "}\n";
    return out;
}

}  // namespace santalo::io
