// Copyright 2026 The swapreg Authors
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

#ifndef SWAPREG_ERRORS_HPP_
#define SWAPREG_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace swapreg {

// Base class for every error raised by the library. Subclasses carry the
// failure category so callers (the CLI in particular) can map them to exit
// codes without string matching.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
  virtual const char* kind() const noexcept { return "Error"; }
};

#define SWAPREG_DEFINE_ERROR(Name)                                   \
  class Name : public Error {                                        \
   public:                                                           \
    using Error::Error;                                              \
    const char* kind() const noexcept override { return #Name; }     \
  }

SWAPREG_DEFINE_ERROR(InvalidArgument);
SWAPREG_DEFINE_ERROR(DegenerateSpan);
SWAPREG_DEFINE_ERROR(NoConvergence);
SWAPREG_DEFINE_ERROR(UnsupportedSet);
SWAPREG_DEFINE_ERROR(NonPolyhedral);
SWAPREG_DEFINE_ERROR(RepresentationMissing);
SWAPREG_DEFINE_ERROR(VertexBlowup);
SWAPREG_DEFINE_ERROR(NumericalFailure);
SWAPREG_DEFINE_ERROR(SolverFailure);
SWAPREG_DEFINE_ERROR(MembershipViolation);
SWAPREG_DEFINE_ERROR(AdversaryFault);
SWAPREG_DEFINE_ERROR(DimBlowup);
SWAPREG_DEFINE_ERROR(NoCertifiedDeviation);
SWAPREG_DEFINE_ERROR(ConfigError);

#undef SWAPREG_DEFINE_ERROR

// Raised by the Pythagorean checker when the inner-product premise fails at a
// given (1-based) round.
class PremiseViolated : public Error {
 public:
  PremiseViolated(int round, const std::string& what)
      : Error(what), round_(round) {}
  const char* kind() const noexcept override { return "PremiseViolated"; }
  int round() const noexcept { return round_; }

 private:
  int round_;
};

}  // namespace swapreg

#endif  // SWAPREG_ERRORS_HPP_
