// Copyright 2026 The qiv Authors
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

namespace qiv {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Incompatible matrix or vector dimensions.
struct ShapeError : Error {
    using Error::Error;
};

/// Input violates a documented invariant (scenario, distribution, model, JSON document).
struct ValidationError : Error {
    using Error::Error;
};

/// A numerical guard tripped: residual imaginary part, NaN, non-converging iteration.
struct NumericalError : Error {
    using Error::Error;
};

/// The LP solver stalled or reported a status that is impossible for the given program.
struct SolverError : Error {
    using Error::Error;
};

/// A combinatorial size guard was exceeded.
struct CapacityError : Error {
    using Error::Error;
};

}  // namespace qiv
