// Copyright 2026 The qpmme Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#pragma once

#include <complex>
#include <vector>

#include <Eigen/Dense>

namespace qpmme {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

// Linear map on M_d(C) stored as a d^2 x d^2 matrix acting on column-stacked
// vectorizations: S(rho) = devectorize(matrix * vectorize(rho)).
struct Superoperator {
    int dim = 0;
    CMatrix matrix;

    Superoperator() = default;
    Superoperator(int d, CMatrix m);

    static Superoperator identity(int d);
    static Superoperator zero(int d);

    CMatrix apply(const CMatrix& rho) const;
    Superoperator compose(const Superoperator& inner) const; // this o inner
};

Superoperator operator+(const Superoperator& a, const Superoperator& b);
Superoperator operator-(const Superoperator& a, const Superoperator& b);
Superoperator operator*(Complex s, const Superoperator& a);

struct ChoiMatrix {
    int dim = 0;
    CMatrix matrix;
};

struct HermitianEigen {
    Eigen::VectorXd eigenvalues; // ascending
    CMatrix eigenvectors;        // columns, unitary
};

namespace linalg {

inline constexpr double kDefaultHermTol = 1e-9;

double hermiticity_residual(const CMatrix& h); // ||H - H^dag|| / max(||H||, 1)

HermitianEigen eig_hermitian(const CMatrix& h, double tol_herm = kDefaultHermTol);

// Scaling and squaring with a Pade approximant; throws Overflow on non-finite output.
CMatrix expm(const CMatrix& a);

CVector vectorize(const CMatrix& m);
CMatrix devectorize(const CVector& v);

CMatrix kron(const CMatrix& a, const CMatrix& b);

// rho -> [H, rho], i.e. I (x) H - H^T (x) I
Superoperator ad_superop(const CMatrix& h);
// rho -> A rho B
Superoperator sandwich_superop(const CMatrix& a, const CMatrix& b);

ChoiMatrix choi_of(const Superoperator& s);
double min_eigenvalue(const ChoiMatrix& c);
double min_eigenvalue_hermitian(const CMatrix& m); // of the Hermitian part

double trace_norm(const CMatrix& m);
double operator_norm(const CMatrix& m); // largest singular value

bool all_finite(const CMatrix& m);

} // namespace linalg
} // namespace qpmme
