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

#include <cstdint>
#include <optional>
#include <vector>

#include "qpmme/dynamics.hpp"
#include "qpmme/linalg.hpp"

namespace qpmme {

// spec X = {0} u M1 u M2 with M1 purely imaginary nonzero and M2 strictly damped.
enum class SpectralClass { Zero, M1, M2 };

struct StabilityReport {
    std::vector<Complex> spectrum; // snapped: |Re| < tol_spec set to 0
    std::vector<SpectralClass> classes;
    int k0 = 0;
    int m1_count = 0;
    int m2_count = 0;
    bool diagonalizable = false;
    double condition_number = 0.0;
    bool quasiperiodic_steady_state = false; // M1 empty
    double max_real_part = 0.0;              // before snapping
    double zero_distance = 0.0;              // min |xi|
    double conjugation_defect = 0.0;         // max_xi min_j |xi_j - conj(xi)|
    std::optional<double> slowest_decay;     // min over M2 of |Re xi|
    std::optional<double> fastest_decay;     // max over M2 of |Re xi|
};

struct SpectralComponent {
    Complex xi;
    SpectralClass cls = SpectralClass::M2;
    Complex coefficient;
    CMatrix phi;
};

// rho_t^inf = Sigma_t( sum_{0, M1} c_j exp(i Im(xi_j) t) phi_j )
class LimitCycle {
public:
    LimitCycle(FourierOperatorSeries p, FrequencyVector omega, std::vector<SpectralComponent> retained,
               std::vector<SpectralComponent> decaying, double condition_number);

    CMatrix evaluate(double t) const;
    bool quasiperiodic() const;
    const std::vector<SpectralComponent>& retained() const { return retained_; }
    const std::vector<SpectralComponent>& decaying() const { return decaying_; }
    double condition_number() const { return condition_number_; }
    // A = sum_{M2} |c_j| ||phi_j||_1, so ||rho_t - rho_t^inf||_1 <= A exp(-a t).
    double decay_amplitude() const;
    // Slowest |Re xi| among decaying components actually present in the seed.
    std::optional<double> slowest_present_rate(double rel_cutoff = 1e-10) const;

private:
    FourierOperatorSeries p_;
    FrequencyVector omega_;
    std::vector<SpectralComponent> retained_;
    std::vector<SpectralComponent> decaying_;
    double condition_number_;
};

struct DecayFit {
    double rate = 0.0;
    std::optional<double> expected_rate;
    double window_begin = 0.0;
    double window_end = 0.0;
    int points = 0;
    std::vector<double> distances; // on the full t grid
};

struct CptpEntry {
    double t = 0.0;
    double s = 0.0;
    double choi_min = 0.0;
    double trace_defect = 0.0;
    double hermiticity_defect = 0.0;
    bool pass = false;
};

struct CptpReport {
    std::vector<CptpEntry> maps;
    std::vector<CptpEntry> propagators;
    double choi_tol = 1e-10;
    double trace_tol = 1e-12;
    double hermiticity_tol = 1e-12;
    bool pass = false;
};

namespace analysis {

// Throws SpectralViolation if some Re xi > tol_spec, 0 is not within zero_tol
// of the spectrum, or the spectrum is not conjugation symmetric within conj_tol.
StabilityReport spectrum_classification(const Superoperator& X, double tol_spec = 1e-9, double zero_tol = 1e-10,
                                        double conj_tol = 1e-10, double condition_max = 1e6);

// Throws Defective when the eigenvector matrix of X has condition number >= condition_max.
LimitCycle limit_cycle(const DynamicalMap& map, const CMatrix& rho0, double tol_spec = 1e-9,
                       double condition_max = 1e6);

// Projection of I/d onto ker X along the other eigenspaces; returns it if PSD
// within tol, otherwise nullopt.
std::optional<CMatrix> find_psd_invariant(const Superoperator& X, double tol_spec = 1e-9, double psd_tol = 1e-10);

// Least-squares slope of log ||Lambda_t(rho0) - rho_t^inf||_1 over the window
// that starts once the distance falls below 1e-3 and ends at the last point
// above 100 eps max(A, 1). Lambda_t is evaluated with expm, independently of
// the eigen-expansion. Throws InsufficientDecay if the distance never drops
// below 1e-3 or the window holds fewer than three points.
DecayFit decay_rate_fit(const DynamicalMap& map, const LimitCycle& cycle, const CMatrix& rho0,
                        const std::vector<double>& t_grid);

CptpReport cptp_certificate(const DynamicalMap& map, const std::vector<double>& t_samples, int random_pairs = 20,
                            std::uint64_t seed = 20260101);
CptpEntry certify_superoperator(const Superoperator& s, double t, double s_time, std::uint64_t seed = 7);

CMatrix gibbs_state(const CMatrix& H, double beta);

std::vector<double> log_grid(double start, double stop, int count);

} // namespace analysis
} // namespace qpmme
