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

/// Self-contained dense two-phase primal simplex for equality-form LPs with
/// nonnegative variables, plus a brute-force vertex-enumeration oracle for
/// small instances.

#pragma once

#include <string>
#include <vector>

#include "qiv/errors.hpp"

namespace qiv {

enum class Sense { MIN, MAX };

/// optimize c.x  subject to  A x = b, x >= 0.
struct LinearProgram {
    int numVars = 0;
    Sense sense = Sense::MIN;
    std::vector<double> objective;  // length numVars
    std::vector<double> eqMatrix;   // row-major, numRows x numVars
    std::vector<double> eqRhs;      // length numRows

    int numRows() const { return static_cast<int>(eqRhs.size()); }

    double a(int r, int c) const {
        return eqMatrix[static_cast<std::size_t>(r) * numVars + c];
    }
    double& a(int r, int c) { return eqMatrix[static_cast<std::size_t>(r) * numVars + c]; }

    /// Appends one equality row; `row` must have numVars coefficients.
    void add_row(const std::vector<double>& row, double rhs);

    /// Throws ShapeError / ValidationError if dimensions are inconsistent or
    /// entries are not finite.
    void check_consistent() const;
};

enum class SolveStatus { OPTIMAL, INFEASIBLE, UNBOUNDED };

const char* to_string(SolveStatus s);

struct Solution {
    SolveStatus status = SolveStatus::INFEASIBLE;
    double objectiveValue = 0.0;  // meaningful iff OPTIMAL
    std::vector<double> x;        // meaningful iff OPTIMAL
    int iterations = 0;
};

/// Two-phase primal simplex with Bland's rule.
///
/// Phase 1 minimizes the sum of artificial variables (rows with negative
/// right-hand side are sign-flipped first); the program is infeasible iff the
/// phase-1 optimum exceeds tol. Artificial variables stuck basic at level
/// <= tol are pivoted out, or their rows dropped as redundant. Phase 2
/// optimizes the true objective; MAX is solved as MIN of the negation.
/// Throws SolverError if an iteration cap of 10*(m+n) pivots per phase is
/// exceeded and NumericalError if NaN appears in the tableau.
Solution solve(const LinearProgram& lp, double tol = 1e-9);

/// Independent brute-force oracle: enumerates basic solutions over all
/// column subsets of one maximal independent row set, keeps the feasible
/// ones, and reports the best vertex. Guarded to numVars <= 24 and
/// numRows <= 12 (CapacityError beyond that).
Solution enumerate_vertices(const LinearProgram& lp);

/// Tab-separated dump of the program, for debugging.
std::string debug_dump(const LinearProgram& lp);

}  // namespace qiv
