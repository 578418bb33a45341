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

#include "qiv/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace qiv {

namespace {

constexpr double kPivotTol = 1e-9;  // minimum magnitude of an acceptable pivot
constexpr double kZeroTol = 1e-11;  // entries at or below this count as zero

}  // namespace

void LinearProgram::add_row(const std::vector<double>& row, double rhs) {
    if (static_cast<int>(row.size()) != numVars) {
        throw ShapeError("LinearProgram::add_row: row length " + std::to_string(row.size()) +
                         " != numVars " + std::to_string(numVars));
    }
    eqMatrix.insert(eqMatrix.end(), row.begin(), row.end());
    eqRhs.push_back(rhs);
}

void LinearProgram::check_consistent() const {
    if (numVars <= 0) {
        throw ShapeError("LinearProgram: numVars must be positive");
    }
    if (static_cast<int>(objective.size()) != numVars) {
        throw ShapeError("LinearProgram: objective length mismatch");
    }
    if (eqMatrix.size() != eqRhs.size() * static_cast<std::size_t>(numVars)) {
        throw ShapeError("LinearProgram: eqMatrix size mismatch");
    }
    for (double v : objective) {
        if (!std::isfinite(v)) {
            throw ValidationError("LinearProgram: non-finite objective entry");
        }
    }
    for (double v : eqMatrix) {
        if (!std::isfinite(v)) {
            throw ValidationError("LinearProgram: non-finite constraint entry");
        }
    }
    for (double v : eqRhs) {
        if (!std::isfinite(v)) {
            throw ValidationError("LinearProgram: non-finite right-hand side");
        }
    }
}

const char* to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::OPTIMAL:
            return "OPTIMAL";
        case SolveStatus::INFEASIBLE:
            return "INFEASIBLE";
        case SolveStatus::UNBOUNDED:
            return "UNBOUNDED";
    }
    return "?";
}

namespace {

// Dense tableau: `width` data columns plus the right-hand side.
class Tableau {
  public:
    Tableau(int rows, int width) : rows_(rows), width_(width), t_(rows * (width + 1), 0.0) {}

    double& at(int i, int j) { return t_[static_cast<std::size_t>(i) * (width_ + 1) + j]; }
    double& rhs(int i) { return t_[static_cast<std::size_t>(i) * (width_ + 1) + width_]; }

    int rows() const { return rows_; }

    void pivot(int pr, int pc) {
        const double p = at(pr, pc);
        if (!std::isfinite(p)) {
            throw NumericalError("simplex: non-finite pivot element");
        }
        const double inv = 1.0 / p;
        for (int j = 0; j <= width_; ++j) {
            at(pr, j) *= inv;
        }
        at(pr, pc) = 1.0;
        for (int i = 0; i < rows_; ++i) {
            if (i == pr) {
                continue;
            }
            const double f = at(i, pc);
            if (f == 0.0) {
                continue;
            }
            for (int j = 0; j <= width_; ++j) {
                at(i, j) -= f * at(pr, j);
            }
            at(i, pc) = 0.0;
            if (rhs(i) < 0.0 && rhs(i) >= -kZeroTol) {
                rhs(i) = 0.0;
            }
        }
    }

  private:
    int rows_;
    int width_;
    std::vector<double> t_;
};

enum class PhaseOutcome { OPTIMAL, UNBOUNDED };

// Bland's rule simplex loop on the given costs. `numCols` restricts which
// columns may enter. Throws SolverError when the pivot cap is exceeded.
PhaseOutcome run_phase(Tableau& t, std::vector<int>& basis, const std::vector<double>& costs,
                       int numCols, double tol, int pivotCap, int& iterations) {
    const int m = t.rows();
    int pivots = 0;
    for (;;) {
        // Entering column: smallest index with negative reduced cost.
        int enter = -1;
        for (int j = 0; j < numCols && enter < 0; ++j) {
            double r = costs[j];
            for (int i = 0; i < m; ++i) {
                const double cb = costs[basis[i]];
                if (cb != 0.0) {
                    r -= cb * t.at(i, j);
                }
            }
            if (std::isnan(r)) {
                throw NumericalError("simplex: NaN reduced cost");
            }
            if (r < -tol) {
                enter = j;
            }
        }
        if (enter < 0) {
            return PhaseOutcome::OPTIMAL;
        }

        // Ratio test; ties broken on the smallest leaving basis index.
        int leave = -1;
        double bestRatio = std::numeric_limits<double>::infinity();
        for (int i = 0; i < m; ++i) {
            const double a = t.at(i, enter);
            if (a <= kPivotTol) {
                continue;
            }
            const double ratio = t.rhs(i) / a;
            if (ratio < bestRatio - 1e-12 ||
                (ratio <= bestRatio + 1e-12 && (leave < 0 || basis[i] < basis[leave]))) {
                bestRatio = ratio;
                leave = i;
            }
        }
        if (leave < 0) {
            return PhaseOutcome::UNBOUNDED;
        }

        t.pivot(leave, enter);
        basis[leave] = enter;
        ++iterations;
        if (++pivots > pivotCap) {
            throw SolverError("simplex: pivot cap of " + std::to_string(pivotCap) +
                              " exceeded in one phase");
        }
    }
}

}  // namespace

Solution solve(const LinearProgram& lp, double tol) {
    lp.check_consistent();
    if (tol <= 0.0) {
        throw ValidationError("solve: tol must be positive");
    }
    const int m = lp.numRows();
    const int n = lp.numVars;
    const int pivotCap = 10 * (m + n);

    std::vector<double> minimizeCosts(lp.objective);
    if (lp.sense == Sense::MAX) {
        for (double& c : minimizeCosts) {
            c = -c;
        }
    }

    // Phase-1 tableau: original columns, then one artificial per row.
    Tableau t(m, n + m);
    std::vector<int> basis(m);
    for (int i = 0; i < m; ++i) {
        const double flip = lp.eqRhs[static_cast<std::size_t>(i)] < 0.0 ? -1.0 : 1.0;
        for (int j = 0; j < n; ++j) {
            t.at(i, j) = flip * lp.a(i, j);
        }
        t.rhs(i) = flip * lp.eqRhs[static_cast<std::size_t>(i)];
        t.at(i, n + i) = 1.0;
        basis[i] = n + i;
    }

    Solution sol;
    sol.iterations = 0;

    std::vector<double> phase1Costs(n + m, 0.0);
    for (int i = 0; i < m; ++i) {
        phase1Costs[n + i] = 1.0;
    }
    const PhaseOutcome p1 = run_phase(t, basis, phase1Costs, n, tol, pivotCap, sol.iterations);
    if (p1 == PhaseOutcome::UNBOUNDED) {
        throw SolverError("simplex: phase 1 reported unbounded");  // cannot happen: costs >= 0
    }
    double infeasibility = 0.0;
    for (int i = 0; i < m; ++i) {
        if (basis[i] >= n) {
            infeasibility += t.rhs(i);
        }
    }
    if (infeasibility > tol) {
        sol.status = SolveStatus::INFEASIBLE;
        return sol;
    }

    // Drive leftover artificials out of the basis; rows that offer no usable
    // pivot are redundant and get dropped below.
    std::vector<bool> keep(m, true);
    for (int i = 0; i < m; ++i) {
        if (basis[i] < n) {
            continue;
        }
        int bestCol = -1;
        double bestMag = kPivotTol;
        for (int j = 0; j < n; ++j) {
            const double mag = std::fabs(t.at(i, j));
            if (mag > bestMag) {
                bestMag = mag;
                bestCol = j;
            }
        }
        if (bestCol >= 0) {
            t.pivot(i, bestCol);
            basis[i] = bestCol;
        } else {
            keep[i] = false;
        }
    }

    // Compact to the phase-2 tableau: surviving rows, no artificial columns.
    int m2 = 0;
    for (int i = 0; i < m; ++i) {
        if (keep[i]) {
            ++m2;
        }
    }
    Tableau t2(m2, n);
    std::vector<int> basis2(m2);
    for (int i = 0, k = 0; i < m; ++i) {
        if (!keep[i]) {
            continue;
        }
        for (int j = 0; j < n; ++j) {
            t2.at(k, j) = t.at(i, j);
        }
        t2.rhs(k) = std::max(t.rhs(i), 0.0);
        basis2[k] = basis[i];
        ++k;
    }

    const PhaseOutcome p2 =
        run_phase(t2, basis2, minimizeCosts, n, tol, pivotCap, sol.iterations);
    if (p2 == PhaseOutcome::UNBOUNDED) {
        sol.status = SolveStatus::UNBOUNDED;
        return sol;
    }

    sol.status = SolveStatus::OPTIMAL;
    sol.x.assign(static_cast<std::size_t>(n), 0.0);
    for (int i = 0; i < m2; ++i) {
        sol.x[static_cast<std::size_t>(basis2[i])] = t2.rhs(i);
    }
    double value = 0.0;
    for (int j = 0; j < n; ++j) {
        value += lp.objective[static_cast<std::size_t>(j)] * sol.x[static_cast<std::size_t>(j)];
    }
    if (!std::isfinite(value)) {
        throw NumericalError("simplex: non-finite objective value");
    }
    sol.objectiveValue = value;
    return sol;
}

namespace {

// Gaussian elimination with partial pivoting on [A | b]; returns false when
// the square system is singular at the kZeroTol threshold.
bool solve_square(std::vector<double>& a, std::vector<double>& b, int n) {
    for (int col = 0; col < n; ++col) {
        int p = col;
        double best = std::fabs(a[static_cast<std::size_t>(col) * n + col]);
        for (int i = col + 1; i < n; ++i) {
            const double mag = std::fabs(a[static_cast<std::size_t>(i) * n + col]);
            if (mag > best) {
                best = mag;
                p = i;
            }
        }
        if (best <= kZeroTol) {
            return false;
        }
        if (p != col) {
            for (int j = 0; j < n; ++j) {
                std::swap(a[static_cast<std::size_t>(p) * n + j],
                          a[static_cast<std::size_t>(col) * n + j]);
            }
            std::swap(b[static_cast<std::size_t>(p)], b[static_cast<std::size_t>(col)]);
        }
        const double inv = 1.0 / a[static_cast<std::size_t>(col) * n + col];
        for (int i = col + 1; i < n; ++i) {
            const double f = a[static_cast<std::size_t>(i) * n + col] * inv;
            if (f == 0.0) {
                continue;
            }
            for (int j = col; j < n; ++j) {
                a[static_cast<std::size_t>(i) * n + j] -= f * a[static_cast<std::size_t>(col) * n + j];
            }
            b[static_cast<std::size_t>(i)] -= f * b[static_cast<std::size_t>(col)];
        }
    }
    for (int i = n - 1; i >= 0; --i) {
        double s = b[static_cast<std::size_t>(i)];
        for (int j = i + 1; j < n; ++j) {
            s -= a[static_cast<std::size_t>(i) * n + j] * b[static_cast<std::size_t>(j)];
        }
        b[static_cast<std::size_t>(i)] = s / a[static_cast<std::size_t>(i) * n + i];
    }
    return true;
}

struct IndependentRows {
    bool inconsistent = false;
    std::vector<int> rows;  // original indices of one maximal independent set
};

// Row-reduces [A | b] to find a maximal independent row set; flags systems
// whose dependent rows have nonzero reduced right-hand side.
IndependentRows independent_rows(const std::vector<double>& a, const std::vector<double>& b,
                                 int m, int n) {
    std::vector<double> w(a);
    std::vector<double> rhs(b);
    std::vector<int> order(static_cast<std::size_t>(m));
    for (int i = 0; i < m; ++i) {
        order[static_cast<std::size_t>(i)] = i;
    }

    IndependentRows out;
    int rank = 0;
    for (int col = 0; col < n && rank < m; ++col) {
        int p = -1;
        double best = kZeroTol;
        for (int i = rank; i < m; ++i) {
            const double mag = std::fabs(w[static_cast<std::size_t>(i) * n + col]);
            if (mag > best) {
                best = mag;
                p = i;
            }
        }
        if (p < 0) {
            continue;
        }
        if (p != rank) {
            for (int j = 0; j < n; ++j) {
                std::swap(w[static_cast<std::size_t>(p) * n + j],
                          w[static_cast<std::size_t>(rank) * n + j]);
            }
            std::swap(rhs[static_cast<std::size_t>(p)], rhs[static_cast<std::size_t>(rank)]);
            std::swap(order[static_cast<std::size_t>(p)], order[static_cast<std::size_t>(rank)]);
        }
        const double inv = 1.0 / w[static_cast<std::size_t>(rank) * n + col];
        for (int i = rank + 1; i < m; ++i) {
            const double f = w[static_cast<std::size_t>(i) * n + col] * inv;
            if (f == 0.0) {
                continue;
            }
            for (int j = 0; j < n; ++j) {
                w[static_cast<std::size_t>(i) * n + j] -= f * w[static_cast<std::size_t>(rank) * n + j];
            }
            rhs[static_cast<std::size_t>(i)] -= f * rhs[static_cast<std::size_t>(rank)];
        }
        out.rows.push_back(order[static_cast<std::size_t>(rank)]);
        ++rank;
    }
    for (int i = rank; i < m; ++i) {
        if (std::fabs(rhs[static_cast<std::size_t>(i)]) > 1e-9) {
            out.inconsistent = true;
        }
    }
    std::sort(out.rows.begin(), out.rows.end());
    return out;
}

struct VertexScan {
    bool found = false;
    double best = 0.0;
    std::vector<double> x;
    int tried = 0;
};

// Visits every basic solution of `A' x = b'` over size-r column subsets and
// keeps the best feasible vertex under (c, sense). Singular bases are skipped.
VertexScan scan_vertices(const std::vector<double>& a, const std::vector<double>& b, int r,
                         int n, const std::vector<double>& c, Sense sense) {
    VertexScan out;
    if (r == 0) {
        // Only the origin is a candidate.
        out.found = true;
        out.best = 0.0;
        out.x.assign(static_cast<std::size_t>(n), 0.0);
        out.tried = 1;
        return out;
    }
    std::vector<int> pick(static_cast<std::size_t>(r));
    for (int i = 0; i < r; ++i) {
        pick[static_cast<std::size_t>(i)] = i;
    }
    std::vector<double> sub(static_cast<std::size_t>(r) * r);
    std::vector<double> xb(static_cast<std::size_t>(r));
    for (;;) {
        ++out.tried;
        for (int i = 0; i < r; ++i) {
            for (int k = 0; k < r; ++k) {
                sub[static_cast<std::size_t>(i) * r + k] =
                    a[static_cast<std::size_t>(i) * n + pick[static_cast<std::size_t>(k)]];
            }
            xb[static_cast<std::size_t>(i)] = b[static_cast<std::size_t>(i)];
        }
        if (solve_square(sub, xb, r)) {
            bool feasible = true;
            for (int k = 0; k < r && feasible; ++k) {
                feasible = xb[static_cast<std::size_t>(k)] >= -1e-9;
            }
            if (feasible) {
                double val = 0.0;
                for (int k = 0; k < r; ++k) {
                    val += c[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])] *
                           xb[static_cast<std::size_t>(k)];
                }
                const bool better = !out.found ||
                                    (sense == Sense::MIN ? val < out.best : val > out.best);
                if (better) {
                    out.found = true;
                    out.best = val;
                    out.x.assign(static_cast<std::size_t>(n), 0.0);
                    for (int k = 0; k < r; ++k) {
                        out.x[static_cast<std::size_t>(pick[static_cast<std::size_t>(k)])] =
                            xb[static_cast<std::size_t>(k)];
                    }
                }
            }
        }
        // Next combination in lexicographic order.
        int i = r - 1;
        while (i >= 0 && pick[static_cast<std::size_t>(i)] == n - r + i) {
            --i;
        }
        if (i < 0) {
            break;
        }
        ++pick[static_cast<std::size_t>(i)];
        for (int k = i + 1; k < r; ++k) {
            pick[static_cast<std::size_t>(k)] = pick[static_cast<std::size_t>(k - 1)] + 1;
        }
    }
    return out;
}

// Rows of `a` restricted to the given original-row subset.
void gather_rows(const std::vector<double>& a, const std::vector<double>& b,
                 const std::vector<int>& rows, int n, std::vector<double>& aOut,
                 std::vector<double>& bOut) {
    aOut.clear();
    bOut.clear();
    for (int i : rows) {
        aOut.insert(aOut.end(), a.begin() + static_cast<std::size_t>(i) * n,
                    a.begin() + static_cast<std::size_t>(i + 1) * n);
        bOut.push_back(b[static_cast<std::size_t>(i)]);
    }
}

}  // namespace

Solution enumerate_vertices(const LinearProgram& lp) {
    lp.check_consistent();
    if (lp.numVars > 24 || lp.numRows() > 12) {
        throw CapacityError("enumerate_vertices: guard is numVars <= 24 and numRows <= 12, got " +
                            std::to_string(lp.numVars) + " vars, " +
                            std::to_string(lp.numRows()) + " rows");
    }
    const int n = lp.numVars;
    const int m = lp.numRows();

    Solution sol;
    const IndependentRows ind = independent_rows(lp.eqMatrix, lp.eqRhs, m, n);
    if (ind.inconsistent) {
        sol.status = SolveStatus::INFEASIBLE;
        return sol;
    }
    std::vector<double> a, b;
    gather_rows(lp.eqMatrix, lp.eqRhs, ind.rows, n, a, b);
    const int r = static_cast<int>(ind.rows.size());

    const VertexScan scan = scan_vertices(a, b, r, n, lp.objective, lp.sense);
    sol.iterations = scan.tried;
    if (!scan.found) {
        sol.status = SolveStatus::INFEASIBLE;
        return sol;
    }

    // Feasible and vertex-optimal; unbounded iff the recession cone contains
    // an improving direction. Its extreme rays are the vertices of
    // {d >= 0, A d = 0, sum d = 1}.
    std::vector<double> ra(a);
    std::vector<double> rb(b.size(), 0.0);
    ra.insert(ra.end(), static_cast<std::size_t>(n), 1.0);
    rb.push_back(1.0);
    const IndependentRows rind = independent_rows(ra, rb, r + 1, n);
    if (!rind.inconsistent) {
        std::vector<double> ca, cb;
        gather_rows(ra, rb, rind.rows, n, ca, cb);
        const VertexScan rays = scan_vertices(ca, cb, static_cast<int>(rind.rows.size()), n,
                                              lp.objective, lp.sense);
        sol.iterations += rays.tried;
        if (rays.found &&
            (lp.sense == Sense::MIN ? rays.best < -1e-9 : rays.best > 1e-9)) {
            sol.status = SolveStatus::UNBOUNDED;
            return sol;
        }
    }

    sol.status = SolveStatus::OPTIMAL;
    sol.objectiveValue = scan.best;
    sol.x = scan.x;
    return sol;
}

std::string debug_dump(const LinearProgram& lp) {
    std::ostringstream os;
    os << (lp.sense == Sense::MIN ? "min" : "max");
    for (double c : lp.objective) {
        os << '\t' << c;
    }
    os << '\n';
    for (int i = 0; i < lp.numRows(); ++i) {
        for (int j = 0; j < lp.numVars; ++j) {
            os << lp.a(i, j) << '\t';
        }
        os << "=\t" << lp.eqRhs[static_cast<std::size_t>(i)] << '\n';
    }
    return os.str();
}

}  // namespace qiv
