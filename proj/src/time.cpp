#include "rpmsim/time.h"

#include <charconv>

#include <fmt/format.h>

#include "rpmsim/errors.h"

namespace rpm {

namespace {

int parse_int(std::string_view text, std::size_t pos, std::size_t len, std::string_view whole) {
    int v = 0;
    auto part = text.substr(pos, len);
    auto [ptr, ec] = std::from_chars(part.data(), part.data() + part.size(), v);
    if (ec != std::errc() || ptr != part.data() + part.size())
        throw FormatError("malformed date/time '" + std::string(whole) + "'");
    return v;
}

} // namespace

Date make_date(int year, unsigned month, unsigned day) {
    std::chrono::year_month_day ymd{std::chrono::year(year), std::chrono::month(month), std::chrono::day(day)};
    if (!ymd.ok()) throw FormatError(fmt::format("invalid calendar date {}-{}-{}", year, month, day));
    return Date(ymd);
}

DateTime at(Date date, int hour, int minute, int second) {
    return DateTime(date) + std::chrono::hours(hour) + std::chrono::minutes(minute) + std::chrono::seconds(second);
}

Date date_of(DateTime t) { return std::chrono::floor<std::chrono::days>(t); }

Weekday weekday_of(Date date) {
    // iso_encoding: Monday = 1 ... Sunday = 7
    return static_cast<Weekday>(std::chrono::weekday(date).iso_encoding() - 1);
}

std::string format_date(Date date) {
    std::chrono::year_month_day ymd(date);
    return fmt::format("{:04}-{:02}-{:02}", static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                       static_cast<unsigned>(ymd.day()));
}

std::string format_datetime(DateTime t) {
    Date d = date_of(t);
    auto secs = (t - DateTime(d)).count();
    return fmt::format("{}T{:02}:{:02}:{:02}Z", format_date(d), secs / 3600, (secs / 60) % 60, secs % 60);
}

Date parse_date(std::string_view text) {
    if (text.size() != 10 || text[4] != '-' || text[7] != '-')
        throw FormatError("malformed date '" + std::string(text) + "'");
    return make_date(parse_int(text, 0, 4, text), static_cast<unsigned>(parse_int(text, 5, 2, text)),
                     static_cast<unsigned>(parse_int(text, 8, 2, text)));
}

DateTime parse_datetime(std::string_view text) {
    if (text.size() != 20 || text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z')
        throw FormatError("malformed timestamp '" + std::string(text) + "'");
    int h = parse_int(text, 11, 2, text);
    int m = parse_int(text, 14, 2, text);
    int s = parse_int(text, 17, 2, text);
    if (h > 23 || m > 59 || s > 59) throw FormatError("malformed timestamp '" + std::string(text) + "'");
    return at(parse_date(text.substr(0, 10)), h, m, s);
}

} // namespace rpm
