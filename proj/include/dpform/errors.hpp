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

#ifndef DPFORM_ERRORS_HPP
#define DPFORM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dpform {

// Base class of all dpform errors. `name()` is stable and machine-readable;
// it is what the CLI emits in error JSON.
class Error : public std::runtime_error {
 public:
  Error(std::string name, const std::string& what)
      : std::runtime_error(what), name_(std::move(name)) {}
  const std::string& name() const { return name_; }

 private:
  std::string name_;
};

#define DPFORM_DEFINE_ERROR(TYPE)                           \
  struct TYPE : Error {                                     \
    explicit TYPE(const std::string& what)                  \
        : Error(#TYPE, what) {}                             \
  }

// graph
DPFORM_DEFINE_ERROR(InvalidEdge);
DPFORM_DEFINE_ERROR(NotATree);
// channel / shared parameter checks
DPFORM_DEFINE_ERROR(NonPositiveParameter);
// control
DPFORM_DEFINE_ERROR(NotPositiveDefinite);
DPFORM_DEFINE_ERROR(HorizonTooShort);
DPFORM_DEFINE_ERROR(NeighborMismatch);
DPFORM_DEFINE_ERROR(SingularSystem);
DPFORM_DEFINE_ERROR(EmptyWindow);
// privacy
DPFORM_DEFINE_ERROR(OutOfDomain);
DPFORM_DEFINE_ERROR(MissingRecords);
DPFORM_DEFINE_ERROR(UnknownFamily);
// engine
DPFORM_DEFINE_ERROR(DimensionMismatch);
DPFORM_DEFINE_ERROR(GainMissing);
// config / cli
DPFORM_DEFINE_ERROR(ParseError);
DPFORM_DEFINE_ERROR(ValidationError);
DPFORM_DEFINE_ERROR(UnknownFigure);

#undef DPFORM_DEFINE_ERROR

}  // namespace dpform

#endif  // DPFORM_ERRORS_HPP
