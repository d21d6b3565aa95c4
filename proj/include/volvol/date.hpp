#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace volvol {

/// Calendar date backed by std::chrono::year_month_day.
class Date {
 public:
  Date() = default;
  explicit Date(std::chrono::year_month_day ymd) : ymd_(ymd) {}
  Date(int y, unsigned m, unsigned d)
      : ymd_(std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}) {}

  /// Strict YYYY-MM-DD; returns nullopt for anything else, including
  /// impossible calendar dates such as 2021-02-30.
  static std::optional<Date> parse(std::string_view text);

  std::string to_string() const;

  std::chrono::sys_days days() const { return std::chrono::sys_days{ymd_}; }
  Date plus_days(int n) const { return Date{std::chrono::year_month_day{days() + std::chrono::days{n}}}; }
  bool is_weekend() const;

  /// Signed number of calendar days from this date to `other`.
  int days_until(const Date& other) const { return (other.days() - days()).count(); }

  auto operator<=>(const Date& o) const { return days() <=> o.days(); }
  bool operator==(const Date& o) const { return days() == o.days(); }

 private:
  std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::month{1}, std::chrono::day{1}};
};

}  // namespace volvol
