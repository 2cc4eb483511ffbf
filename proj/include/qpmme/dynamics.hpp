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

#include "qpmme/fourier.hpp"
#include "qpmme/generator.hpp"
#include "qpmme/linalg.hpp"
#include "qpmme/model.hpp"

namespace qpmme {

// Lambda_t = Sigma_t exp(t X) for one built model. Holds copies of the
// pieces it needs, so it stays valid independently of the model object.
class DynamicalMap {
public:
    DynamicalMap(const ReducedModel& m, GeneratorBundle bundle, bool use_eigen_cache = true);

    int dim() const { return static_cast<int>(bundle_.H_bar.rows()); }
    const FrequencyVector& omega() const { return omega_; }
    const FourierOperatorSeries& p_series() const { return p_series_; }
    const FourierOperatorSeries& hamiltonian_series() const { return h_series_; }
    const GeneratorBundle& bundle() const { return bundle_; }
    const Tolerances& tol() const { return tol_; }

    CMatrix p(double t) const;
    CMatrix hamiltonian(double t) const;

    // exp(t X), from the cached eigendecomposition when X is well conditioned.
    CMatrix semigroup(double t) const;
    bool uses_eigen_cache() const { return cache_.has_value(); }

private:
    struct EigenCache {
        CVector eigenvalues;
        CMatrix vectors;
        CMatrix inverse;
    };

    FrequencyVector omega_;
    FourierOperatorSeries p_series_;
    FourierOperatorSeries h_series_;
    GeneratorBundle bundle_;
    Tolerances tol_;
    std::optional<EigenCache> cache_;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<CMatrix> states;
    int substeps = 0;          // RK4 steps per grid interval at the accepted level
    double refinement_gap = 0; // sup trace-norm change between the last two levels
};

namespace dynamics {

// rho -> p_t rho p_t^dag; throws NotUnitary if p_t drifts beyond `unitarity_tol`.
Superoperator sigma_superop(const FourierOperatorSeries& p, const FrequencyVector& omega, double t,
                            double unitarity_tol = 1e-8);

Superoperator dynamical_map(const DynamicalMap& map, double t);
// Lambda_{t,s} = Sigma_t exp((t - s) X) Sigma_s^{-1}; throws OrderViolation if s > t.
Superoperator propagator(const DynamicalMap& map, double t, double s);

// L_t = -i [H_t + Sigma_t(Delta H), .] + Sigma_t D Sigma_t^{-1}
Superoperator assemble_L_t(const DynamicalMap& map, double t);
// The same generator written out in GKLS form with rotated jump operators
// S^t = p_t S_{mu n omega} p_t^dag.
Superoperator assemble_L_t_gkls(const DynamicalMap& map, double t);
CMatrix apply_L_t(const DynamicalMap& map, double t, const CMatrix& rho);

std::vector<CMatrix> product_form_trajectory(const DynamicalMap& map, const CMatrix& rho0,
                                             const std::vector<double>& grid);

// Classical RK4 on rho' = L_t(rho), halving the step until two successive
// levels agree to `tol` in trace norm over the whole grid. Throws NoConvergence
// after `max_levels` halvings.
Trajectory integrate_mme_direct(const DynamicalMap& map, const CMatrix& rho0, const std::vector<double>& grid,
                                double tol, int max_levels = 14);

// RK4 for u' = -i H_t u, u(0) = I, same refinement rule in operator norm.
std::vector<CMatrix> integrate_schrodinger(const FourierOperatorSeries& h_series, const FrequencyVector& omega,
                                           const std::vector<double>& grid, double tol, int max_levels = 14);

std::vector<double> uniform_grid(double start, double stop, int count);

} // namespace dynamics
} // namespace qpmme
