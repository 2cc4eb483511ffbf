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


#include "qpmme/bohr.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpmme/error.hpp"

namespace qpmme {

int BohrDecomposition::zero_index() const {
    auto idx = find_frequency(0.0, 1e-300);
    if (idx) return *idx;
    // 0 is stored exactly (diagonal pairs) but a cluster mean may shift it slightly.
    int best = 0;
    for (int w = 1; w < static_cast<int>(bohr_freqs.size()); ++w) {
        if (std::abs(bohr_freqs[static_cast<std::size_t>(w)]) < std::abs(bohr_freqs[static_cast<std::size_t>(best)])) best = w;
    }
    return best;
}

std::optional<int> BohrDecomposition::find_frequency(double omega, double tol) const {
    for (int w = 0; w < static_cast<int>(bohr_freqs.size()); ++w) {
        if (std::abs(bohr_freqs[static_cast<std::size_t>(w)] - omega) <= tol) return w;
    }
    return std::nullopt;
}

namespace bohr {

namespace {

// Single-linkage clusters of sorted values; returns cluster id per input index.
std::vector<int> cluster_sorted(const std::vector<double>& sorted, double gap) {
    std::vector<int> id(sorted.size(), 0);
    for (std::size_t i = 1; i < sorted.size(); ++i) {
        id[i] = id[i - 1] + (sorted[i] - sorted[i - 1] >= gap ? 1 : 0);
    }
    return id;
}

} // namespace

BohrDecomposition decompose_averaged_hamiltonian(const CMatrix& H_bar, double tol_cluster, double tol_herm) {
    const HermitianEigen eig = linalg::eig_hermitian(H_bar, tol_herm);
    const int d = static_cast<int>(H_bar.rows());
    const double gap = tol_cluster * std::max(H_bar.norm(), 1.0);

    std::vector<double> evals(eig.eigenvalues.data(), eig.eigenvalues.data() + d);
    const auto ids = cluster_sorted(evals, gap);

    BohrDecomposition out;
    const int n_clusters = ids.empty() ? 0 : ids.back() + 1;
    out.quasienergies.assign(static_cast<std::size_t>(n_clusters), 0.0);
    out.projections.assign(static_cast<std::size_t>(n_clusters), CMatrix::Zero(d, d));
    std::vector<int> counts(static_cast<std::size_t>(n_clusters), 0);
    for (int i = 0; i < d; ++i) {
        const auto c = static_cast<std::size_t>(ids[static_cast<std::size_t>(i)]);
        out.quasienergies[c] += evals[static_cast<std::size_t>(i)];
        ++counts[c];
        const CVector v = eig.eigenvectors.col(i);
        out.projections[c] += v * v.adjoint();
    }
    for (int c = 0; c < n_clusters; ++c) {
        out.quasienergies[static_cast<std::size_t>(c)] /= counts[static_cast<std::size_t>(c)];
    }

    struct Diff {
        double value;
        int k;
        int l;
    };
    std::vector<Diff> diffs;
    for (int k = 0; k < n_clusters; ++k) {
        for (int l = 0; l < n_clusters; ++l) {
            const double v = (k == l) ? 0.0 : out.quasienergies[static_cast<std::size_t>(k)] - out.quasienergies[static_cast<std::size_t>(l)];
            diffs.push_back({v, k, l});
        }
    }
    std::stable_sort(diffs.begin(), diffs.end(), [](const Diff& a, const Diff& b) { return a.value < b.value; });
    std::vector<double> sorted;
    sorted.reserve(diffs.size());
    for (const auto& df : diffs) sorted.push_back(df.value);
    const auto dids = cluster_sorted(sorted, gap);

    const int n_freq = dids.back() + 1;
    out.bohr_freqs.assign(static_cast<std::size_t>(n_freq), 0.0);
    out.sectors.assign(static_cast<std::size_t>(n_freq), {});
    std::vector<bool> has_zero(static_cast<std::size_t>(n_freq), false);
    for (std::size_t i = 0; i < diffs.size(); ++i) {
        const auto w = static_cast<std::size_t>(dids[i]);
        out.bohr_freqs[w] += diffs[i].value;
        out.sectors[w].emplace_back(diffs[i].k, diffs[i].l);
        if (diffs[i].k == diffs[i].l) has_zero[w] = true;
    }
    for (int w = 0; w < n_freq; ++w) {
        const auto uw = static_cast<std::size_t>(w);
        // The sector holding the diagonal pairs is the exact frequency 0.
        out.bohr_freqs[uw] = has_zero[uw] ? 0.0 : out.bohr_freqs[uw] / static_cast<double>(out.sectors[uw].size());
    }
    return out;
}

TruncatedSeries interaction_picture_coupling_series(const FourierOperatorSeries& p, const CMatrix& S) {
    if (S.rows() != p.dim() || S.cols() != p.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "coupling operator dimension differs from p");
    }
    return fourier::series_product(fourier::series_adjoint(p), fourier::series_left_multiply(S, p));
}

void build_jump_operators(BohrDecomposition& decomp, const std::vector<FourierOperatorSeries>& s_hat,
                          double drop_below) {
    decomp.jump_ops.clear();
    for (int mu = 0; mu < static_cast<int>(s_hat.size()); ++mu) {
        for (const auto& [n, coeff] : s_hat[static_cast<std::size_t>(mu)].coeffs()) {
            for (int w = 0; w < static_cast<int>(decomp.bohr_freqs.size()); ++w) {
                CMatrix op = CMatrix::Zero(coeff.rows(), coeff.cols());
                for (const auto& [k, l] : decomp.sectors[static_cast<std::size_t>(w)]) {
                    op += decomp.projections[static_cast<std::size_t>(k)] * coeff *
                          decomp.projections[static_cast<std::size_t>(l)];
                }
                if (op.norm() < drop_below) continue;
                decomp.jump_ops.push_back({mu, n, w, decomp.bohr_freqs[static_cast<std::size_t>(w)], std::move(op)});
            }
        }
    }
}

CMatrix q_omega_apply(const BohrDecomposition& decomp, double omega, const CMatrix& rho, double tol) {
    const auto w = decomp.find_frequency(omega, tol);
    if (!w) throw Error(ErrorCode::UnknownFrequency, "omega = " + std::to_string(omega) + " is not a Bohr frequency");
    CMatrix out = CMatrix::Zero(rho.rows(), rho.cols());
    for (const auto& [k, l] : decomp.sectors[static_cast<std::size_t>(*w)]) {
        out += decomp.projections[static_cast<std::size_t>(k)] * rho * decomp.projections[static_cast<std::size_t>(l)];
    }
    return out;
}

std::optional<CongruenceWitness> check_congruence_freedom(const std::vector<double>& bohr_freqs,
                                                          const FrequencyVector& omega, int K, double tol) {
    std::vector<double> freqs = bohr_freqs;
    std::sort(freqs.begin(), freqs.end(), std::greater<>());
    std::vector<MultiIndex> indices;
    for (int shell = 1; shell <= K; ++shell) {
        auto s = box_shell(omega.size(), shell);
        indices.insert(indices.end(), s.begin(), s.end());
    }
    for (std::size_t a = 0; a < freqs.size(); ++a) {
        for (std::size_t b = a + 1; b < freqs.size(); ++b) {
            const double diff = freqs[a] - freqs[b];
            for (const auto& n : indices) {
                if (std::abs(diff - n.dot(omega)) < tol) return CongruenceWitness{freqs[a], freqs[b], n};
            }
        }
    }
    return std::nullopt;
}

BohrDecomposition decompose_model(const ReducedModel& m) {
    auto decomp = decompose_averaged_hamiltonian(m.H_bar, m.tol.cluster, m.tol.hermiticity);
    std::vector<FourierOperatorSeries> s_hat;
    for (const auto& S : m.couplings) {
        auto series = interaction_picture_coupling_series(m.p_series, S);
        if (series.dropped_tail > m.tol.truncation_loss) {
            throw Error(ErrorCode::TruncationLoss,
                        "interaction-picture coupling dropped tail " + std::to_string(series.dropped_tail));
        }
        s_hat.push_back(std::move(series.series));
    }
    build_jump_operators(decomp, s_hat, m.tol.jump_drop);
    return decomp;
}

} // namespace bohr
} // namespace qpmme
