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

#include <optional>
#include <utility>
#include <vector>

#include "qpmme/fourier.hpp"
#include "qpmme/linalg.hpp"
#include "qpmme/model.hpp"

namespace qpmme {

// S_{mu n omega} = sum_{(k,l) ~ omega} P_k S_hat_{mu,n} P_l
struct JumpOperator {
    int mu = 0;
    MultiIndex n;
    int omega_index = 0;
    double omega = 0.0;
    CMatrix op;
};

struct BohrDecomposition {
    std::vector<double> quasienergies;  // ascending, clustered
    std::vector<CMatrix> projections;   // P_k, same order
    std::vector<double> bohr_freqs;     // ascending, clustered, contains 0
    std::vector<std::vector<std::pair<int, int>>> sectors; // (k, l) with eps_k - eps_l ~ bohr_freqs[w]
    std::vector<JumpOperator> jump_ops; // empty until build_jump_operators

    int dim() const { return projections.empty() ? 0 : static_cast<int>(projections.front().rows()); }
    int zero_index() const;
    // Index of the Bohr frequency within `tol` of omega, if any.
    std::optional<int> find_frequency(double omega, double tol = 1e-9) const;
};

namespace bohr {

inline constexpr double kDefaultClusterTol = 1e-9;

// Eigenvalues are merged by single linkage when consecutive gaps are below
// tol_cluster * max(||H||_F, 1); Bohr frequencies are clustered the same way.
BohrDecomposition decompose_averaged_hamiltonian(const CMatrix& H_bar, double tol_cluster = kDefaultClusterTol,
                                                 double tol_herm = linalg::kDefaultHermTol);

// p^dag S p as a series, truncated to p's box.
TruncatedSeries interaction_picture_coupling_series(const FourierOperatorSeries& p, const CMatrix& S);

// Fills decomp.jump_ops from the interaction-picture coupling series (one per mu).
// Operators with Frobenius norm below `drop_below` are omitted.
void build_jump_operators(BohrDecomposition& decomp, const std::vector<FourierOperatorSeries>& s_hat,
                          double drop_below = 1e-14);

// q_omega(rho) = sum_{(k,l) ~ omega} P_k rho P_l; throws UnknownFrequency.
CMatrix q_omega_apply(const BohrDecomposition& decomp, double omega, const CMatrix& rho, double tol = 1e-9);

// Scans ordered pairs omega > omega' (and their mirrors) and n != 0 with
// |n_i| <= K for |omega - omega' - n.Omega| < tol. Pairs are visited from the
// largest omega down; n by increasing max-norm.
std::optional<CongruenceWitness> check_congruence_freedom(const std::vector<double>& bohr_freqs,
                                                          const FrequencyVector& omega, int K = 12,
                                                          double tol = 1e-9);

// Convenience: decomposition + interaction-picture series + jump operators for a model.
BohrDecomposition decompose_model(const ReducedModel& m);

} // namespace bohr
} // namespace qpmme
