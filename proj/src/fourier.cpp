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


#include "qpmme/fourier.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

#include "qpmme/error.hpp"

namespace qpmme {

FrequencyVector::FrequencyVector(std::vector<double> omegas) : omegas_(std::move(omegas)) {
    if (omegas_.empty()) throw Error(ErrorCode::DimensionMismatch, "frequency vector must have r >= 1");
    for (double w : omegas_) {
        if (!(w > 0.0) || !std::isfinite(w)) {
            throw Error(ErrorCode::DimensionMismatch, "frequencies must be finite and positive");
        }
    }
}

double FrequencyVector::norm() const {
    double s = 0.0;
    for (double w : omegas_) s += w * w;
    return std::sqrt(s);
}

bool MultiIndex::is_zero() const {
    return std::all_of(n.begin(), n.end(), [](int k) { return k == 0; });
}

int MultiIndex::max_abs() const {
    int m = 0;
    for (int k : n) m = std::max(m, std::abs(k));
    return m;
}

double MultiIndex::dot(const FrequencyVector& omega) const {
    if (size() != omega.size()) throw Error(ErrorCode::DimensionMismatch, "multi-index / frequency length");
    double s = 0.0;
    for (int i = 0; i < size(); ++i) s += n[static_cast<std::size_t>(i)] * omega[i];
    return s;
}

MultiIndex MultiIndex::operator-() const {
    MultiIndex out(n);
    for (int& k : out.n) k = -k;
    return out;
}

MultiIndex operator+(const MultiIndex& a, const MultiIndex& b) {
    if (a.size() != b.size()) throw Error(ErrorCode::DimensionMismatch, "multi-index sum");
    MultiIndex out(a.n);
    for (std::size_t i = 0; i < out.n.size(); ++i) out.n[i] += b.n[i];
    return out;
}

MultiIndex operator-(const MultiIndex& a, const MultiIndex& b) { return a + (-b); }

std::vector<MultiIndex> box_shell(int r, int shell) {
    std::vector<MultiIndex> out;
    std::vector<int> cur(static_cast<std::size_t>(r), -shell);
    while (true) {
        MultiIndex idx(cur);
        if (idx.max_abs() == shell) out.push_back(idx);
        int pos = r - 1;
        while (pos >= 0 && cur[static_cast<std::size_t>(pos)] == shell) {
            cur[static_cast<std::size_t>(pos)] = -shell;
            --pos;
        }
        if (pos < 0) break;
        ++cur[static_cast<std::size_t>(pos)];
    }
    return out;
}

std::vector<MultiIndex> box(int r, int bound) {
    std::vector<MultiIndex> out;
    for (int s = 0; s <= bound; ++s) {
        auto shell = box_shell(r, s);
        out.insert(out.end(), shell.begin(), shell.end());
    }
    return out;
}

FourierOperatorSeries::FourierOperatorSeries(int r, int d, int trunc) : r_(r), d_(d), trunc_(trunc) {
    if (r < 1 || d < 1 || trunc < 0) {
        throw Error(ErrorCode::DimensionMismatch, "series needs r >= 1, d >= 1, trunc >= 0");
    }
}

FourierOperatorSeries FourierOperatorSeries::constant(int r, int trunc, const CMatrix& value) {
    FourierOperatorSeries s(r, static_cast<int>(value.rows()), trunc);
    s.set(MultiIndex::zero(r), value);
    return s;
}

bool FourierOperatorSeries::in_box(const MultiIndex& n) const {
    return n.size() == r_ && n.max_abs() <= trunc_;
}

void FourierOperatorSeries::set(const MultiIndex& n, const CMatrix& c) {
    if (n.size() != r_) throw Error(ErrorCode::DimensionMismatch, "multi-index length does not match r");
    if (!in_box(n)) throw Error(ErrorCode::DimensionMismatch, "multi-index outside truncation box");
    if (c.rows() != d_ || c.cols() != d_) throw Error(ErrorCode::DimensionMismatch, "coefficient size");
    if (!linalg::all_finite(c)) throw Error(ErrorCode::Overflow, "non-finite series coefficient");
    coeffs_[n] = c;
}

bool FourierOperatorSeries::add(const MultiIndex& n, const CMatrix& c) {
    if (!in_box(n)) return false;
    auto it = coeffs_.find(n);
    if (it == coeffs_.end()) {
        coeffs_.emplace(n, c);
    } else {
        it->second += c;
    }
    return true;
}

CMatrix FourierOperatorSeries::coeff(const MultiIndex& n) const {
    auto it = coeffs_.find(n);
    if (it == coeffs_.end()) return CMatrix::Zero(d_, d_);
    return it->second;
}

double FourierOperatorSeries::tail_norm(int bound) const {
    double s = 0.0;
    for (const auto& [n, c] : coeffs_) {
        if (n.max_abs() > bound) s += c.squaredNorm();
    }
    return std::sqrt(s);
}

void FourierOperatorSeries::prune(double threshold) {
    std::erase_if(coeffs_, [threshold](const auto& kv) { return kv.second.norm() < threshold; });
}

namespace fourier {

namespace {

void require_same_shape(const FourierOperatorSeries& a, const FourierOperatorSeries& b) {
    if (a.r() != b.r() || a.dim() != b.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "series have different torus or matrix dimension");
    }
}

} // namespace

PhaseTable::PhaseTable(const FrequencyVector& omega, int trunc, double t) : trunc_(trunc) {
    axis_.resize(static_cast<std::size_t>(omega.size()));
    for (int j = 0; j < omega.size(); ++j) {
        auto& row = axis_[static_cast<std::size_t>(j)];
        row.resize(static_cast<std::size_t>(2 * trunc + 1));
        for (int k = -trunc; k <= trunc; ++k) {
            row[static_cast<std::size_t>(k + trunc)] = std::polar(1.0, k * omega[j] * t);
        }
    }
}

Complex PhaseTable::phase(const MultiIndex& n) const {
    Complex p{1.0, 0.0};
    for (int j = 0; j < n.size(); ++j) p *= axis_[static_cast<std::size_t>(j)][static_cast<std::size_t>(n[j] + trunc_)];
    return p;
}

CMatrix evaluate(const FourierOperatorSeries& s, const FrequencyVector& omega, double t) {
    if (s.r() != omega.size()) throw Error(ErrorCode::DimensionMismatch, "series r differs from |Omega|");
    PhaseTable table(omega, s.trunc(), t);
    CMatrix out = CMatrix::Zero(s.dim(), s.dim());
    for (const auto& [n, c] : s.coeffs()) out += table.phase(n) * c;
    return out;
}

CMatrix evaluate_angles(const FourierOperatorSeries& s, const std::vector<double>& theta) {
    if (static_cast<int>(theta.size()) != s.r()) throw Error(ErrorCode::DimensionMismatch, "angle count");
    CMatrix out = CMatrix::Zero(s.dim(), s.dim());
    for (const auto& [n, c] : s.coeffs()) {
        double phase = 0.0;
        for (int j = 0; j < s.r(); ++j) phase += n[j] * theta[static_cast<std::size_t>(j)];
        out += std::polar(1.0, phase) * c;
    }
    return out;
}

TruncatedSeries series_product(const FourierOperatorSeries& a, const FourierOperatorSeries& b,
                               std::optional<int> trunc) {
    require_same_shape(a, b);
    const int n_out = trunc.value_or(std::max(a.trunc(), b.trunc()));
    FourierOperatorSeries full(a.r(), a.dim(), a.trunc() + b.trunc());
    for (const auto& [m, am] : a.coeffs()) {
        for (const auto& [k, bk] : b.coeffs()) full.add(m + k, am * bk);
    }
    TruncatedSeries out{FourierOperatorSeries(a.r(), a.dim(), n_out), 0.0};
    double dropped = 0.0;
    for (const auto& [n, c] : full.coeffs()) {
        if (!out.series.add(n, c)) dropped += c.squaredNorm();
    }
    out.dropped_tail = std::sqrt(dropped);
    return out;
}

FourierOperatorSeries series_adjoint(const FourierOperatorSeries& a) {
    FourierOperatorSeries out(a.r(), a.dim(), a.trunc());
    for (const auto& [n, c] : a.coeffs()) out.set(-n, c.adjoint());
    return out;
}

FourierOperatorSeries series_derivative(const FourierOperatorSeries& a, const FrequencyVector& omega) {
    if (a.r() != omega.size()) throw Error(ErrorCode::DimensionMismatch, "series r differs from |Omega|");
    FourierOperatorSeries out(a.r(), a.dim(), a.trunc());
    for (const auto& [n, c] : a.coeffs()) {
        if (n.is_zero()) continue;
        out.set(n, Complex(0.0, n.dot(omega)) * c);
    }
    return out;
}

FourierOperatorSeries series_scale(const FourierOperatorSeries& a, Complex s) {
    FourierOperatorSeries out(a.r(), a.dim(), a.trunc());
    for (const auto& [n, c] : a.coeffs()) out.set(n, s * c);
    return out;
}

FourierOperatorSeries series_sum(const FourierOperatorSeries& a, const FourierOperatorSeries& b) {
    require_same_shape(a, b);
    FourierOperatorSeries out(a.r(), a.dim(), std::max(a.trunc(), b.trunc()));
    for (const auto& [n, c] : a.coeffs()) out.add(n, c);
    for (const auto& [n, c] : b.coeffs()) out.add(n, c);
    return out;
}

FourierOperatorSeries series_left_multiply(const CMatrix& m, const FourierOperatorSeries& a) {
    FourierOperatorSeries out(a.r(), a.dim(), a.trunc());
    for (const auto& [n, c] : a.coeffs()) out.set(n, m * c);
    return out;
}

FourierOperatorSeries series_right_multiply(const FourierOperatorSeries& a, const CMatrix& m) {
    FourierOperatorSeries out(a.r(), a.dim(), a.trunc());
    for (const auto& [n, c] : a.coeffs()) out.set(n, c * m);
    return out;
}

std::optional<MultiIndex> check_rational_independence(const FrequencyVector& omega, int K, double tol) {
    const double threshold = tol * omega.norm();
    for (int shell = 1; shell <= K; ++shell) {
        for (const auto& k : box_shell(omega.size(), shell)) {
            // k and -k are equivalent; report the one whose first nonzero entry is positive.
            auto first = std::find_if(k.n.begin(), k.n.end(), [](int v) { return v != 0; });
            if (*first < 0) continue;
            if (std::abs(k.dot(omega)) < threshold) return k;
        }
    }
    return std::nullopt;
}

std::vector<double> sample_grid(const FrequencyVector& omega, int count) {
    double max_inv = 0.0;
    for (double w : omega.values()) max_inv = std::max(max_inv, 1.0 / w);
    const double span = 2.0 * std::numbers::pi * max_inv;
    std::vector<double> t(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        t[static_cast<std::size_t>(k)] = count > 1 ? span * k / (count - 1) : 0.0;
    }
    return t;
}

} // namespace fourier
} // namespace qpmme
