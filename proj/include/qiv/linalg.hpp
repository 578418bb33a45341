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

/// Minimal dense complex linear algebra for 2x2 and 4x4 quantum objects:
/// products, Kronecker products, traces, adjoints, Hermitian eigenvalues.

#pragma once

#include <complex>
#include <initializer_list>
#include <vector>

#include "json.hpp"

#include "qiv/errors.hpp"

namespace qiv {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Target dimensions never exceed 4.
class Matrix {
  public:
    Matrix() = default;

    /// Zero matrix of the given shape.
    Matrix(int rows, int cols);

    /// Build from nested braces: Matrix{{1, 0}, {0, 1}}.
    Matrix(std::initializer_list<std::initializer_list<Complex>> rows);

    static Matrix identity(int n);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool is_square() const { return rows_ == cols_; }

    Complex& operator()(int r, int c) { return entries_[static_cast<std::size_t>(r) * cols_ + c]; }
    const Complex& operator()(int r, int c) const {
        return entries_[static_cast<std::size_t>(r) * cols_ + c];
    }

    const std::vector<Complex>& entries() const { return entries_; }

    bool all_finite() const;

    Matrix& operator+=(const Matrix& o);
    Matrix& operator-=(const Matrix& o);
    Matrix& operator*=(Complex s);

  private:
    int rows_ = 0;
    int cols_ = 0;
    std::vector<Complex> entries_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(Complex s, Matrix a);

/// Standard matrix product; throws ShapeError on a.cols() != b.rows().
Matrix operator*(const Matrix& a, const Matrix& b);

/// Kronecker product: block (i,j) of the result is a(i,j) * b.
Matrix kron(const Matrix& a, const Matrix& b);

/// Conjugate transpose.
Matrix dagger(const Matrix& a);

/// Sum of diagonal entries; throws ShapeError on non-square input.
Complex trace(const Matrix& a);

/// Entrywise max-norm.
double max_abs(const Matrix& a);

/// Entrywise max-norm of a - b; throws ShapeError on shape mismatch.
double max_abs_diff(const Matrix& a, const Matrix& b);

bool approx_equal(const Matrix& a, const Matrix& b, double tol = 1e-10);

/// max-norm of a - dagger(a).
double hermiticity_residual(const Matrix& a);

/// All eigenvalues of a Hermitian matrix, ascending.
///
/// Cyclic Jacobi rotations, iterated until the off-diagonal Frobenius mass
/// drops to tol; capped at 100 sweeps. Inputs further than tol from
/// Hermitian are rejected with ValidationError.
std::vector<double> eig_hermitian(const Matrix& a, double tol = 1e-12);

/// Matrices serialize as row-major nested arrays of [re, im] pairs.
void to_json(nlohmann::json& j, const Matrix& m);
void from_json(const nlohmann::json& j, Matrix& m);

}  // namespace qiv
