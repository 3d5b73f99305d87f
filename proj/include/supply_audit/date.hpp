#pragma once

#include <chrono>
#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace supply_audit {

// A UTC calendar day.
class Date {
 public:
  constexpr Date() = default;
  constexpr explicit Date(std::chrono::sys_days days) : days_(days) {}

  static Date from_ymd(int year, unsigned month, unsigned day);

  // Strict "YYYY-MM-DD"; nullopt for anything else, including impossible
  // calendar days such as 2019-02-30.
  static std::optional<Date> parse(std::string_view text);

  std::string to_string() const;
  int year() const;
  std::chrono::sys_days days() const { return days_; }

  // Dec 31 of the given year.
  static Date end_of_year(int year);

  friend constexpr auto operator<=>(const Date&, const Date&) = default;
  friend constexpr bool operator==(const Date&, const Date&) = default;

 private:
  std::chrono::sys_days days_{};
};

// Signed number of days from `from` to `to`.
long days_between(const Date& from, const Date& to);

}  // namespace supply_audit
