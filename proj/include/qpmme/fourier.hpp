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

#include <compare>
#include <map>
#include <optional>
#include <vector>

#include "qpmme/linalg.hpp"

namespace qpmme {

// Drive frequencies (Omega_1, ..., Omega_r), all strictly positive.
class FrequencyVector {
public:
    FrequencyVector() = default;
    explicit FrequencyVector(std::vector<double> omegas);

    int size() const { return static_cast<int>(omegas_.size()); }
    double operator[](int i) const { return omegas_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& values() const { return omegas_; }
    double norm() const;

private:
    std::vector<double> omegas_;
};

struct MultiIndex {
    std::vector<int> n;

    MultiIndex() = default;
    explicit MultiIndex(std::vector<int> v) : n(std::move(v)) {}
    MultiIndex(std::initializer_list<int> v) : n(v) {}

    static MultiIndex zero(int r) { return MultiIndex(std::vector<int>(static_cast<std::size_t>(r), 0)); }

    int size() const { return static_cast<int>(n.size()); }
    int operator[](int i) const { return n[static_cast<std::size_t>(i)]; }
    bool is_zero() const;
    int max_abs() const;
    double dot(const FrequencyVector& omega) const;

    MultiIndex operator-() const;
    friend MultiIndex operator+(const MultiIndex& a, const MultiIndex& b);
    friend MultiIndex operator-(const MultiIndex& a, const MultiIndex& b);
    friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;
    friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
};

// All multi-indices of length r with max-norm exactly `shell`, in lexicographic order.
std::vector<MultiIndex> box_shell(int r, int shell);
// All multi-indices with max-norm <= bound, ordered by shell.
std::vector<MultiIndex> box(int r, int bound);

// sum_n coeffs[n] exp(i n.theta), truncated to the box |n_i| <= trunc.
// Absent coefficients are zero.
class FourierOperatorSeries {
public:
    FourierOperatorSeries(int r, int d, int trunc);

    static FourierOperatorSeries constant(int r, int trunc, const CMatrix& value);

    int r() const { return r_; }
    int dim() const { return d_; }
    int trunc() const { return trunc_; }
    const std::map<MultiIndex, CMatrix>& coeffs() const { return coeffs_; }

    // Stores (or replaces) a coefficient; throws DimensionMismatch outside the box.
    void set(const MultiIndex& n, const CMatrix& c);
    // Accumulates into a coefficient, returning false (and dropping it) if outside the box.
    bool add(const MultiIndex& n, const CMatrix& c);
    CMatrix coeff(const MultiIndex& n) const; // zero if absent
    bool in_box(const MultiIndex& n) const;

    // Frobenius norm of all coefficients with max-norm > bound.
    double tail_norm(int bound) const;
    // Removes coefficients whose Frobenius norm is below `threshold`.
    void prune(double threshold);

private:
    int r_;
    int d_;
    int trunc_;
    std::map<MultiIndex, CMatrix> coeffs_;
};

// Lossy series operations return the truncated series together with the
// Frobenius norm of the coefficients that fell outside the result box.
struct TruncatedSeries {
    FourierOperatorSeries series;
    double dropped_tail = 0.0;
};

namespace fourier {

inline constexpr int kDefaultTrunc = 8;
inline constexpr int kDefaultRationalK = 12;
inline constexpr double kDefaultRationalTol = 1e-9;
inline constexpr int kDefaultSampleCount = 64;

// Precomputed phases exp(i n.Omega t) for one time, reused across coefficients.
class PhaseTable {
public:
    PhaseTable(const FrequencyVector& omega, int trunc, double t);
    Complex phase(const MultiIndex& n) const;

private:
    int trunc_;
    std::vector<std::vector<Complex>> axis_; // axis_[j][k + trunc] = exp(i k Omega_j t)
};

CMatrix evaluate(const FourierOperatorSeries& s, const FrequencyVector& omega, double t);
// Evaluates on the torus directly at angles theta (length r).
CMatrix evaluate_angles(const FourierOperatorSeries& s, const std::vector<double>& theta);

// Result truncated to max(a.trunc, b.trunc) unless `trunc` is given.
TruncatedSeries series_product(const FourierOperatorSeries& a, const FourierOperatorSeries& b,
                               std::optional<int> trunc = std::nullopt);
FourierOperatorSeries series_adjoint(const FourierOperatorSeries& a);
FourierOperatorSeries series_derivative(const FourierOperatorSeries& a, const FrequencyVector& omega);
FourierOperatorSeries series_scale(const FourierOperatorSeries& a, Complex s);
FourierOperatorSeries series_sum(const FourierOperatorSeries& a, const FourierOperatorSeries& b);
// Left/right multiplication by a constant matrix.
FourierOperatorSeries series_left_multiply(const CMatrix& m, const FourierOperatorSeries& a);
FourierOperatorSeries series_right_multiply(const FourierOperatorSeries& a, const CMatrix& m);

// Semi-decision: searches k != 0 with |k_i| <= K for |k.Omega| < tol ||Omega||.
// Returns the witness of smallest max-norm, or nullopt if none exists in the box.
std::optional<MultiIndex> check_rational_independence(const FrequencyVector& omega,
                                                      int K = kDefaultRationalK,
                                                      double tol = kDefaultRationalTol);

// Validation grid: `count` uniform times on [0, 2 pi max_j 1/Omega_j].
std::vector<double> sample_grid(const FrequencyVector& omega, int count = kDefaultSampleCount);

} // namespace fourier
} // namespace qpmme
