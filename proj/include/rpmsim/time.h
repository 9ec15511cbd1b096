#pragma once

#include <chrono>
#include <string>
#include <string_view>

namespace rpm {

using Date = std::chrono::sys_days;
using DateTime = std::chrono::sys_seconds;

enum class Weekday { monday, tuesday, wednesday, thursday, friday, saturday, sunday };

Date make_date(int year, unsigned month, unsigned day);
DateTime at(Date date, int hour, int minute = 0, int second = 0);
Date date_of(DateTime t);
Weekday weekday_of(Date date);

// ISO-8601: `2024-01-31` and `2024-01-31T08:15:00Z` (UTC only).
std::string format_date(Date date);
std::string format_datetime(DateTime t);
Date parse_date(std::string_view text);
DateTime parse_datetime(std::string_view text);

inline int days_between(Date from, Date to) { return static_cast<int>((to - from).count()); }

} // namespace rpm
