// Copyright 2026 The dpform Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "dpform/schedule.hpp"

#include <cmath>

#include "dpform/errors.hpp"

namespace dpform {

Schedule Schedule::power(double a, double p) {
  if (a <= 0.0 || p <= 0.0) {
    throw NonPositiveParameter("power schedule requires a > 0 and p > 0");
  }
  Schedule s;
  s.family = ScheduleFamily::kPower;
  s.a = a;
  s.p = p;
  return s;
}

Schedule Schedule::exp_sqrt(double b) {
  if (b <= 0.0) {
    throw NonPositiveParameter("exp_sqrt schedule requires b > 0");
  }
  Schedule s;
  s.family = ScheduleFamily::kExpSqrt;
  s.b = b;
  return s;
}

Schedule Schedule::constant(double v) {
  if (v <= 0.0) {
    throw NonPositiveParameter("constant schedule requires a positive value");
  }
  Schedule s;
  s.family = ScheduleFamily::kConstant;
  s.value = v;
  return s;
}

Schedule Schedule::from_table(std::vector<double> values) {
  if (values.empty()) {
    throw NonPositiveParameter("table schedule requires at least one value");
  }
  for (double v : values) {
    if (v <= 0.0) {
      throw NonPositiveParameter("table schedule entries must be positive");
    }
  }
  Schedule s;
  s.family = ScheduleFamily::kTable;
  s.table = std::move(values);
  return s;
}

double Schedule::operator()(int t) const {
  if (t < 0) throw OutOfDomain("schedule evaluated at negative time");
  switch (family) {
    case ScheduleFamily::kPower:
      return a * std::pow(static_cast<double>(t) + 1.0, -p);
    case ScheduleFamily::kExpSqrt:
      return b * std::exp(-std::sqrt(static_cast<double>(t)));
    case ScheduleFamily::kConstant:
      return value;
    case ScheduleFamily::kTable:
      if (t >= static_cast<int>(table.size())) {
        throw OutOfDomain("table schedule has no entry for t=" +
                          std::to_string(t));
      }
      return table[static_cast<std::size_t>(t)];
  }
  throw OutOfDomain("unreachable schedule family");
}

std::string Schedule::family_name() const {
  switch (family) {
    case ScheduleFamily::kPower: return "power";
    case ScheduleFamily::kExpSqrt: return "exp_sqrt";
    case ScheduleFamily::kConstant: return "constant";
    case ScheduleFamily::kTable: return "table";
  }
  return "unknown";
}

std::string Schedule::describe() const {
  switch (family) {
    case ScheduleFamily::kPower:
      return std::to_string(a) + "/(t+1)^" + std::to_string(p);
    case ScheduleFamily::kExpSqrt:
      return std::to_string(b) + "*e^(-sqrt(t))";
    case ScheduleFamily::kConstant:
      return std::to_string(value);
    case ScheduleFamily::kTable:
      return "table[" + std::to_string(table.size()) + "]";
  }
  return "unknown";
}

}  // namespace dpform
