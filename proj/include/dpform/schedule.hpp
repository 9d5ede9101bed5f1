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

#ifndef DPFORM_SCHEDULE_HPP
#define DPFORM_SCHEDULE_HPP

#include <string>
#include <vector>

namespace dpform {

enum class ScheduleFamily { kPower, kExpSqrt, kConstant, kTable };

// Closed-form scalar sequence used for the step gain c(t) and the failure
// probability delta_t. Families:
//   power    : a / (t+1)^p,  a > 0, p > 0
//   exp_sqrt : b * e^{-sqrt(t)},  b > 0
//   constant : v > 0
//   table    : explicit positive values, defined for t < size
struct Schedule {
  ScheduleFamily family = ScheduleFamily::kConstant;
  double a = 0.0;  // power scale
  double p = 0.0;  // power exponent
  double b = 0.0;  // exp_sqrt scale
  double value = 0.0;
  std::vector<double> table;

  static Schedule power(double a, double p);
  static Schedule exp_sqrt(double b);
  static Schedule constant(double v);
  static Schedule from_table(std::vector<double> values);

  double operator()(int t) const;

  std::string family_name() const;
  std::string describe() const;
};

}  // namespace dpform

#endif  // DPFORM_SCHEDULE_HPP
