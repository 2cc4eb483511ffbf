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


#include "qpmme/model.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qpmme/bohr.hpp"
#include "qpmme/error.hpp"

namespace qpmme::model {

namespace {

// In-place DFT along one axis of a row-major grid of matrices with M points per axis.
void dft_axis(std::vector<CMatrix>& data, int r, int M, int axis) {
    std::size_t stride = 1;
    for (int j = r - 1; j > axis; --j) stride *= static_cast<std::size_t>(M);
    const std::size_t block = stride * static_cast<std::size_t>(M);
    std::vector<Complex> twiddle(static_cast<std::size_t>(M));
    for (int k = 0; k < M; ++k) twiddle[static_cast<std::size_t>(k)] = std::polar(1.0, -2.0 * std::numbers::pi * k / M);

    std::vector<CMatrix> line(static_cast<std::size_t>(M));
    for (std::size_t base = 0; base < data.size(); base += block) {
        for (std::size_t off = 0; off < stride; ++off) {
            for (int k = 0; k < M; ++k) {
                CMatrix acc = CMatrix::Zero(data[0].rows(), data[0].cols());
                for (int g = 0; g < M; ++g) {
                    acc += twiddle[static_cast<std::size_t>((k * g) % M)] *
                           data[base + off + static_cast<std::size_t>(g) * stride];
                }
                line[static_cast<std::size_t>(k)] = acc / static_cast<double>(M);
            }
            for (int k = 0; k < M; ++k) data[base + off + static_cast<std::size_t>(k) * stride] = line[static_cast<std::size_t>(k)];
        }
    }
}

} // namespace

TruncatedSeries p_from_generator(const std::vector<GeneratorTerm>& terms, int r, int d, int trunc) {
    for (const auto& term : terms) {
        if (term.generator.rows() != d || term.generator.cols() != d) {
            throw Error(ErrorCode::DimensionMismatch, "generator dimension differs from model dimension");
        }
        if (linalg::hermiticity_residual(term.generator) > linalg::kDefaultHermTol) {
            throw Error(ErrorCode::NotHermitian, "periodic generator must be Hermitian");
        }
        for (const auto& mode : term.modes) {
            if (mode.n.size() != r) throw Error(ErrorCode::DimensionMismatch, "generator mode index length");
        }
    }
    const int M = 2 * (2 * trunc + 1);
    std::size_t total = 1;
    for (int j = 0; j < r; ++j) total *= static_cast<std::size_t>(M);

    std::vector<CMatrix> grid(total);
    std::vector<int> idx(static_cast<std::size_t>(r), 0);
    std::vector<double> theta(static_cast<std::size_t>(r));
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        for (int j = r - 1; j >= 0; --j) {
            idx[static_cast<std::size_t>(j)] = static_cast<int>(rem % static_cast<std::size_t>(M));
            rem /= static_cast<std::size_t>(M);
            theta[static_cast<std::size_t>(j)] = 2.0 * std::numbers::pi * idx[static_cast<std::size_t>(j)] / M;
        }
        CMatrix exponent = CMatrix::Zero(d, d);
        for (const auto& term : terms) {
            double f = 0.0;
            for (const auto& mode : term.modes) {
                double phase = 0.0;
                for (int j = 0; j < r; ++j) phase += mode.n[j] * theta[static_cast<std::size_t>(j)];
                f += mode.sin_amplitude * std::sin(phase) + mode.cos_amplitude * (std::cos(phase) - 1.0);
            }
            exponent += f * term.generator;
        }
        grid[flat] = linalg::expm(-kI * exponent);
    }
    for (int axis = 0; axis < r; ++axis) dft_axis(grid, r, M, axis);

    // Resolved frequencies per axis: -(2N+1) .. 2N; keep |n| <= 2N.
    TruncatedSeries out{FourierOperatorSeries(r, d, trunc), 0.0};
    double tail = 0.0;
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        std::vector<int> n(static_cast<std::size_t>(r));
        bool resolved = true;
        for (int j = r - 1; j >= 0; --j) {
            int k = static_cast<int>(rem % static_cast<std::size_t>(M));
            rem /= static_cast<std::size_t>(M);
            if (k > M / 2 - 1) k -= M;
            if (std::abs(k) > 2 * trunc) resolved = false;
            n[static_cast<std::size_t>(j)] = k;
        }
        if (!resolved) continue;
        MultiIndex mi(n);
        if (mi.max_abs() <= trunc) {
            if (grid[flat].norm() > 0.0) out.series.set(mi, grid[flat]);
        } else {
            tail += grid[flat].squaredNorm();
        }
    }
    out.dropped_tail = std::sqrt(tail);
    return out;
}

double p_unitarity_residual(const FourierOperatorSeries& p, const FrequencyVector& omega) {
    double worst = 0.0;
    const CMatrix id = CMatrix::Identity(p.dim(), p.dim());
    for (double t : fourier::sample_grid(omega)) {
        const CMatrix pt = fourier::evaluate(p, omega, t);
        worst = std::max(worst, (pt.adjoint() * pt - id).norm());
    }
    return worst;
}

FourierOperatorSeries synthesize_hamiltonian(const FourierOperatorSeries& p, const FrequencyVector& omega,
                                             const CMatrix& H_bar, const Tolerances& tol, double* dropped_tail) {
    if (p.r() != omega.size()) throw Error(ErrorCode::DimensionMismatch, "p series r differs from |Omega|");
    if (H_bar.rows() != p.dim() || H_bar.cols() != p.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "H_bar dimension differs from p");
    }
    const double p0 = (fourier::evaluate(p, omega, 0.0) - CMatrix::Identity(p.dim(), p.dim())).norm();
    const double unit = p_unitarity_residual(p, omega);
    if (p0 > tol.unitarity || unit > tol.unitarity) {
        throw Error(ErrorCode::NotUnitary, "p_t fails p_0 = I or unitarity on the sample grid (residual " +
                                               std::to_string(std::max(p0, unit)) + ")");
    }
    const auto p_dag = fourier::series_adjoint(p);
    const auto p_dot = fourier::series_derivative(p, omega);

    auto kinetic = fourier::series_product(p_dot, p_dag);
    auto conj = fourier::series_product(fourier::series_right_multiply(p, H_bar), p_dag);
    const double dropped = std::hypot(kinetic.dropped_tail, conj.dropped_tail);
    if (dropped > tol.truncation_loss) {
        throw Error(ErrorCode::TruncationLoss, "H_t synthesis dropped tail " + std::to_string(dropped));
    }
    if (dropped_tail != nullptr) *dropped_tail = dropped;
    return fourier::series_sum(fourier::series_scale(kinetic.series, kI), conj.series);
}

ValidationReport validate_model(const ReducedModel& m) {
    ValidationReport report;
    report.rational_witness = fourier::check_rational_independence(m.omega, m.tol.rational_K, m.tol.rational);
    const int d = m.dim();
    if (m.p_series.dim() != d || m.p_series.r() != m.r()) {
        throw Error(ErrorCode::DimensionMismatch, "p series shape does not match the model");
    }
    report.p0_residual = (fourier::evaluate(m.p_series, m.omega, 0.0) - CMatrix::Identity(d, d)).norm();
    report.unitarity_residual = p_unitarity_residual(m.p_series, m.omega);
    report.hbar_hermiticity_residual = linalg::hermiticity_residual(m.H_bar);
    if (report.hermiticity_ok(m.tol)) {
        const auto decomp = bohr::decompose_averaged_hamiltonian(m.H_bar, m.tol.cluster, m.tol.hermiticity);
        report.bohr_freqs = decomp.bohr_freqs;
        report.congruence_witness =
            bohr::check_congruence_freedom(decomp.bohr_freqs, m.omega, m.tol.congruence_K, m.tol.congruence);
        report.congruence_checked = true;
    }
    return report;
}

} // namespace qpmme::model
