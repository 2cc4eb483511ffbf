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
#include <vector>

#include "qpmme/bath.hpp"
#include "qpmme/fourier.hpp"
#include "qpmme/linalg.hpp"

namespace qpmme {

// Numerical tolerances shared across the pipeline. Every check takes its
// threshold from here so a model file or the CLI can override it.
struct Tolerances {
    double hermiticity = 1e-9;
    double unitarity = 1e-8;
    int rational_K = 12;
    double rational = 1e-9;
    int congruence_K = 12;
    double congruence = 1e-9;
    double cluster = 1e-9;
    double truncation_loss = 1e-8;
    double jump_drop = 1e-14;
    double psd = 1e-12;
    double spectral = 1e-9;
    double integrator = 1e-9;
    double condition_max = 1e6;
};

// The reduced description the engine works from: the quasiperiodic unitary
// factor p_t (as a Fourier series), the averaged Hamiltonian, couplings S_mu
// and the bath spectral data. The Schrodinger propagator is u_t = p_t exp(-i H_bar t).
struct ReducedModel {
    FrequencyVector omega;
    FourierOperatorSeries p_series{1, 1, 0};
    CMatrix H_bar;
    std::vector<CMatrix> couplings;
    BathSpectrum bath;
    Tolerances tol;

    int dim() const { return static_cast<int>(H_bar.rows()); }
    int r() const { return omega.size(); }
    int trunc() const { return p_series.trunc(); }
};

// One term of p(theta) = exp(-i sum_j f_j(theta) G_j), where
// f_j(theta) = sum_modes [ a sin(n.theta) + b (cos(n.theta) - 1) ] vanishes at theta = 0.
struct GeneratorMode {
    MultiIndex n;
    double sin_amplitude = 0.0;
    double cos_amplitude = 0.0;
};

struct GeneratorTerm {
    CMatrix generator; // Hermitian
    std::vector<GeneratorMode> modes;
};

struct CongruenceWitness {
    double omega;
    double omega_prime;
    MultiIndex n;
};

struct ValidationReport {
    std::optional<MultiIndex> rational_witness;
    double p0_residual = 0.0;        // ||p_0 - I||
    double unitarity_residual = 0.0; // max over grid of ||p_t^dag p_t - I||
    double hbar_hermiticity_residual = 0.0;
    std::optional<CongruenceWitness> congruence_witness;
    bool congruence_checked = false;
    std::vector<double> bohr_freqs;

    bool rational_ok() const { return !rational_witness.has_value(); }
    bool unitarity_ok(const Tolerances& tol) const {
        return p0_residual <= tol.unitarity && unitarity_residual <= tol.unitarity;
    }
    bool hermiticity_ok(const Tolerances& tol) const { return hbar_hermiticity_residual <= tol.hermiticity; }
    bool congruence_ok() const { return congruence_checked && !congruence_witness.has_value(); }
    bool pass(const Tolerances& tol) const {
        return rational_ok() && unitarity_ok(tol) && hermiticity_ok(tol) && congruence_ok();
    }
};

namespace model {

// Samples p(theta) on a uniform grid with 2(2N+1) points per axis and returns
// its Fourier coefficients in the box |n_i| <= trunc. The dropped tail is the
// norm of the resolved coefficients with trunc < |n|_max <= 2 trunc.
TruncatedSeries p_from_generator(const std::vector<GeneratorTerm>& terms, int r, int d, int trunc);

// Unitarity residuals of p on the validation grid.
double p_unitarity_residual(const FourierOperatorSeries& p, const FrequencyVector& omega);

// H_t = i pdot_t p_t^dag + p_t H_bar p_t^dag as a series. Throws NotUnitary or
// TruncationLoss according to `tol`.
FourierOperatorSeries synthesize_hamiltonian(const FourierOperatorSeries& p, const FrequencyVector& omega,
                                             const CMatrix& H_bar, const Tolerances& tol = {},
                                             double* dropped_tail = nullptr);

ValidationReport validate_model(const ReducedModel& m);

} // namespace model
} // namespace qpmme
