#include "supply_audit/date.hpp"

#include <charconv>
#include <cstdio>

namespace supply_audit {

namespace chr = std::chrono;

Date Date::from_ymd(int year, unsigned month, unsigned day) {
  return Date(chr::sys_days(chr::year{year} / chr::month{month} / chr::day{day}));
}

std::optional<Date> Date::parse(std::string_view text) {
  if (text.size() != 10 || text[4] != '-' || text[7] != '-') return std::nullopt;
  auto field = [&](std::size_t pos, std::size_t len, int& out) {
    const char* first = text.data() + pos;
    const char* last = first + len;
    for (const char* p = first; p != last; ++p) {
      if (*p < '0' || *p > '9') return false;
    }
    return std::from_chars(first, last, out).ec == std::errc{};
  };
  int y = 0, m = 0, d = 0;
  if (!field(0, 4, y) || !field(5, 2, m) || !field(8, 2, d)) return std::nullopt;
  chr::year_month_day ymd{chr::year{y}, chr::month{static_cast<unsigned>(m)},
                          chr::day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  return Date(chr::sys_days(ymd));
}

std::string Date::to_string() const {
  chr::year_month_day ymd{days_};
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
  return buf;
}

int Date::year() const { return static_cast<int>(chr::year_month_day{days_}.year()); }

Date Date::end_of_year(int year) { return from_ymd(year, 12, 31); }

long days_between(const Date& from, const Date& to) {
  return static_cast<long>((to.days() - from.days()).count());
}

}  // namespace supply_audit
