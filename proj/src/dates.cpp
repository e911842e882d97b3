#include "kernoil/dates.hpp"

#include <charconv>
#include <stdexcept>

namespace kernoil {

std::string to_string(Freq f) { return f == Freq::monthly ? "monthly" : "quarterly"; }

Freq freq_from_string(const std::string& text) {
    if (text == "monthly") return Freq::monthly;
    if (text == "quarterly") return Freq::quarterly;
    throw std::invalid_argument("unknown frequency '" + text + "'");
}

Month parse_month(const std::string& text) {
    auto fail = [&] { throw std::invalid_argument("malformed date '" + text + "' (expected YYYY-MM)"); };
    if (text.size() != 7 || text[4] != '-') fail();
    for (std::size_t i : {0u, 1u, 2u, 3u, 5u, 6u}) {
        if (text[i] < '0' || text[i] > '9') fail();
    }
    int year = 0;
    int month = 0;
    std::from_chars(text.data(), text.data() + 4, year);
    std::from_chars(text.data() + 5, text.data() + 7, month);
    if (month < 1 || month > 12) fail();
    return Month{year, month};
}

std::string format_month(const Month& m) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-%02d", m.year, m.month);
    return buf;
}

std::string format_quarter(const Month& m) {
    char buf[24];
    std::snprintf(buf, sizeof(buf), "%04d-Q%d", m.year, m.quarter());
    return buf;
}

std::string format_date(const Month& m, Freq f) {
    return f == Freq::monthly ? format_month(m) : format_quarter(m);
}

}  // namespace kernoil
