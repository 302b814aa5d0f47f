// Copyright 2026 The tcilab Authors
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

#pragma once

#include <stdexcept>
#include <string>

namespace tcilab {

/// Operand sizes disagree (qubit counts, parameter counts, basis lengths).
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// An argument lies outside the operation's domain.
struct DomainError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// A dense representation was requested above the configured qubit cap.
struct CapExceeded : std::length_error {
    using std::length_error::length_error;
};

/// A numerical result failed a validity check (e.g. negative density eigenvalue).
struct NumericalError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

} // namespace tcilab
