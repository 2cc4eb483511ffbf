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

#include <cmath>
#include <random>

#include "qpmme/fourier.hpp"
#include "qpmme/linalg.hpp"

namespace qpmme::testing {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    double normal() { return normal_(gen_); }
    double uniform(double a, double b) { return std::uniform_real_distribution<double>(a, b)(gen_); }
    int integer(int a, int b) { return std::uniform_int_distribution<int>(a, b)(gen_); }

    CMatrix matrix(int rows, int cols) {
        CMatrix m(rows, cols);
        for (int i = 0; i < rows; ++i)
            for (int j = 0; j < cols; ++j) m(i, j) = Complex(normal(), normal());
        return m;
    }
    CMatrix matrix(int d) { return matrix(d, d); }

    CMatrix hermitian(int d) {
        CMatrix a = matrix(d);
        return 0.5 * (a + a.adjoint());
    }

    CMatrix unitary(int d) {
        Eigen::HouseholderQR<CMatrix> qr(matrix(d));
        return qr.householderQ();
    }

    CMatrix density(int d) {
        CMatrix a = matrix(d);
        CMatrix rho = a * a.adjoint();
        return rho / rho.trace().real();
    }

    // Random series with `terms` coefficients scattered in the box, decaying in shell.
    FourierOperatorSeries series(int r, int d, int trunc, int terms, double scale = 1.0) {
        FourierOperatorSeries s(r, d, trunc);
        for (int k = 0; k < terms; ++k) {
            std::vector<int> n(static_cast<std::size_t>(r));
            for (auto& x : n) x = integer(-trunc, trunc);
            MultiIndex idx(n);
            s.add(idx, scale * std::exp(-0.5 * idx.max_abs()) * matrix(d));
        }
        return s;
    }

private:
    std::mt19937_64 gen_;
    std::normal_distribution<double> normal_;
};

inline double max_abs_diff(const CMatrix& a, const CMatrix& b) { return (a - b).cwiseAbs().maxCoeff(); }

} // namespace qpmme::testing
