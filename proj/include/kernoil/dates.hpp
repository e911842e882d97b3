#pragma once

#include <compare>
#include <string>

namespace kernoil {

enum class Freq { monthly, quarterly };

/// Calendar step of one observation, in months.
constexpr int step_months(Freq f) { return f == Freq::monthly ? 1 : 3; }

std::string to_string(Freq f);
Freq freq_from_string(const std::string& text);

/// Calendar month, the native time index for every series in the pipeline.
struct Month {
    int year = 0;
    int month = 1;  // 1..12

    static Month from_index(int idx) { return Month{idx / 12, idx % 12 + 1}; }

    /// Months since year 0; gives Month a total order and cheap arithmetic.
    int index() const { return year * 12 + (month - 1); }

    Month plus(int steps, Freq f = Freq::monthly) const {
        return from_index(index() + steps * step_months(f));
    }

    int quarter() const { return (month - 1) / 3 + 1; }
    bool starts_quarter() const { return month % 3 == 1; }

    auto operator<=>(const Month&) const = default;
};

inline int months_between(const Month& from, const Month& to) {
    return to.index() - from.index();
}

/// Strict YYYY-MM parse; anything else throws with the offending text.
Month parse_month(const std::string& text);

std::string format_month(const Month& m);    // YYYY-MM
std::string format_quarter(const Month& m);  // YYYY-Qn, m being any month of the quarter
std::string format_date(const Month& m, Freq f);

struct DateRange {
    Month first;
    Month last;
};

}  // namespace kernoil
