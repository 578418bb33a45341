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

#include "qiv/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qiv {

Matrix::Matrix(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows <= 0 || cols <= 0) {
        throw ShapeError("Matrix: dimensions must be positive, got " + std::to_string(rows) +
                         "x" + std::to_string(cols));
    }
    entries_.assign(static_cast<std::size_t>(rows) * cols, Complex{0.0, 0.0});
}

Matrix::Matrix(std::initializer_list<std::initializer_list<Complex>> rows) {
    rows_ = static_cast<int>(rows.size());
    if (rows_ == 0) {
        throw ShapeError("Matrix: empty initializer");
    }
    cols_ = static_cast<int>(rows.begin()->size());
    if (cols_ == 0) {
        throw ShapeError("Matrix: empty row in initializer");
    }
    entries_.reserve(static_cast<std::size_t>(rows_) * cols_);
    for (const auto& row : rows) {
        if (static_cast<int>(row.size()) != cols_) {
            throw ShapeError("Matrix: ragged initializer");
        }
        entries_.insert(entries_.end(), row.begin(), row.end());
    }
}

Matrix Matrix::identity(int n) {
    Matrix m(n, n);
    for (int i = 0; i < n; ++i) {
        m(i, i) = 1.0;
    }
    return m;
}

bool Matrix::all_finite() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Complex& c) {
        return std::isfinite(c.real()) && std::isfinite(c.imag());
    });
}

Matrix& Matrix::operator+=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw ShapeError("Matrix +=: shape mismatch");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] += o.entries_[i];
    }
    return *this;
}

Matrix& Matrix::operator-=(const Matrix& o) {
    if (rows_ != o.rows_ || cols_ != o.cols_) {
        throw ShapeError("Matrix -=: shape mismatch");
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        entries_[i] -= o.entries_[i];
    }
    return *this;
}

Matrix& Matrix::operator*=(Complex s) {
    for (auto& e : entries_) {
        e *= s;
    }
    return *this;
}

Matrix operator+(Matrix a, const Matrix& b) {
    a += b;
    return a;
}

Matrix operator-(Matrix a, const Matrix& b) {
    a -= b;
    return a;
}

Matrix operator*(Complex s, Matrix a) {
    a *= s;
    return a;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
    if (a.cols() != b.rows()) {
        throw ShapeError("Matrix *: inner dimensions " + std::to_string(a.cols()) + " and " +
                         std::to_string(b.rows()) + " differ");
    }
    Matrix c(a.rows(), b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int k = 0; k < a.cols(); ++k) {
            const Complex aik = a(i, k);
            if (aik == Complex{0.0, 0.0}) {
                continue;
            }
            for (int j = 0; j < b.cols(); ++j) {
                c(i, j) += aik * b(k, j);
            }
        }
    }
    return c;
}

Matrix kron(const Matrix& a, const Matrix& b) {
    Matrix c(a.rows() * b.rows(), a.cols() * b.cols());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            const Complex aij = a(i, j);
            for (int k = 0; k < b.rows(); ++k) {
                for (int l = 0; l < b.cols(); ++l) {
                    c(i * b.rows() + k, j * b.cols() + l) = aij * b(k, l);
                }
            }
        }
    }
    return c;
}

Matrix dagger(const Matrix& a) {
    Matrix c(a.cols(), a.rows());
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            c(j, i) = std::conj(a(i, j));
        }
    }
    return c;
}

Complex trace(const Matrix& a) {
    if (!a.is_square()) {
        throw ShapeError("trace: matrix is " + std::to_string(a.rows()) + "x" +
                         std::to_string(a.cols()));
    }
    Complex t{0.0, 0.0};
    for (int i = 0; i < a.rows(); ++i) {
        t += a(i, i);
    }
    return t;
}

double max_abs(const Matrix& a) {
    double m = 0.0;
    for (const auto& e : a.entries()) {
        m = std::max(m, std::abs(e));
    }
    return m;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
    if (a.rows() != b.rows() || a.cols() != b.cols()) {
        throw ShapeError("max_abs_diff: shape mismatch");
    }
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            m = std::max(m, std::abs(a(i, j) - b(i, j)));
        }
    }
    return m;
}

bool approx_equal(const Matrix& a, const Matrix& b, double tol) {
    return a.rows() == b.rows() && a.cols() == b.cols() && max_abs_diff(a, b) <= tol;
}

double hermiticity_residual(const Matrix& a) {
    if (!a.is_square()) {
        throw ShapeError("hermiticity_residual: matrix is not square");
    }
    double m = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            m = std::max(m, std::abs(a(i, j) - std::conj(a(j, i))));
        }
    }
    return m;
}

namespace {

double off_diagonal_frobenius(const Matrix& a) {
    double s = 0.0;
    for (int i = 0; i < a.rows(); ++i) {
        for (int j = 0; j < a.cols(); ++j) {
            if (i != j) {
                s += std::norm(a(i, j));
            }
        }
    }
    return std::sqrt(s);
}

// Zeroes a(p,q) by a unitary similarity built from a phase factor d and a
// real Givens rotation (c, s).
void jacobi_rotate(Matrix& a, int p, int q) {
    const Complex apq = a(p, q);
    const double r = std::abs(apq);
    if (r == 0.0) {
        return;
    }
    const Complex d = std::conj(apq) / r;  // a(p,q) * d == r
    const double app = a(p, p).real();
    const double aqq = a(q, q).real();
    const double tau = (aqq - app) / (2.0 * r);
    const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
    const double c = 1.0 / std::sqrt(1.0 + t * t);
    const double s = t * c;

    const int n = a.rows();
    for (int i = 0; i < n; ++i) {  // columns: A <- A * U
        const Complex aip = a(i, p);
        const Complex aiq = a(i, q) * d;
        a(i, p) = c * aip - s * aiq;
        a(i, q) = s * aip + c * aiq;
    }
    const Complex dc = std::conj(d);
    for (int j = 0; j < n; ++j) {  // rows: A <- U^dagger * A
        const Complex apj = a(p, j);
        const Complex aqj = a(q, j) * dc;
        a(p, j) = c * apj - s * aqj;
        a(q, j) = s * apj + c * aqj;
    }
    a(p, q) = 0.0;
    a(q, p) = 0.0;
}

}  // namespace

std::vector<double> eig_hermitian(const Matrix& a, double tol) {
    if (!a.is_square()) {
        throw ShapeError("eig_hermitian: matrix is not square");
    }
    if (hermiticity_residual(a) > tol) {
        throw ValidationError("eig_hermitian: matrix deviates from Hermitian by " +
                              std::to_string(hermiticity_residual(a)));
    }
    Matrix w = a;
    // Symmetrize so roundoff in the input cannot leak into the rotations.
    for (int i = 0; i < w.rows(); ++i) {
        for (int j = 0; j < w.cols(); ++j) {
            const Complex m = 0.5 * (w(i, j) + std::conj(a(j, i)));
            w(i, j) = (i == j) ? Complex{m.real(), 0.0} : m;
        }
    }

    constexpr int max_sweeps = 100;
    int sweep = 0;
    while (off_diagonal_frobenius(w) > tol) {
        if (++sweep > max_sweeps) {
            throw NumericalError("eig_hermitian: Jacobi iteration did not converge in " +
                                 std::to_string(max_sweeps) + " sweeps");
        }
        for (int p = 0; p < w.rows(); ++p) {
            for (int q = p + 1; q < w.cols(); ++q) {
                jacobi_rotate(w, p, q);
            }
        }
    }

    std::vector<double> eig(static_cast<std::size_t>(w.rows()));
    for (int i = 0; i < w.rows(); ++i) {
        eig[static_cast<std::size_t>(i)] = w(i, i).real();
    }
    std::sort(eig.begin(), eig.end());
    return eig;
}

void to_json(nlohmann::json& j, const Matrix& m) {
    j = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < m.cols(); ++c) {
            row.push_back({m(r, c).real(), m(r, c).imag()});
        }
        j.push_back(std::move(row));
    }
}

void from_json(const nlohmann::json& j, Matrix& m) {
    if (!j.is_array() || j.empty()) {
        throw ValidationError("matrix JSON: expected a non-empty array of rows");
    }
    const int rows = static_cast<int>(j.size());
    if (!j[0].is_array() || j[0].empty()) {
        throw ValidationError("matrix JSON: expected rows to be non-empty arrays");
    }
    const int cols = static_cast<int>(j[0].size());
    m = Matrix(rows, cols);
    for (int r = 0; r < rows; ++r) {
        const auto& row = j[static_cast<std::size_t>(r)];
        if (!row.is_array() || static_cast<int>(row.size()) != cols) {
            throw ValidationError("matrix JSON: ragged rows");
        }
        for (int c = 0; c < cols; ++c) {
            const auto& cell = row[static_cast<std::size_t>(c)];
            if (!cell.is_array() || cell.size() != 2 || !cell[0].is_number() ||
                !cell[1].is_number()) {
                throw ValidationError("matrix JSON: entries must be [re, im] pairs");
            }
            m(r, c) = Complex{cell[0].get<double>(), cell[1].get<double>()};
        }
    }
    if (!m.all_finite()) {
        throw ValidationError("matrix JSON: non-finite entry");
    }
}

}  // namespace qiv
