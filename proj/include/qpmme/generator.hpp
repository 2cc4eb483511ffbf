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

#include <vector>

#include "qpmme/bath.hpp"
#include "qpmme/bohr.hpp"
#include "qpmme/linalg.hpp"

namespace qpmme {

// Everything attached to one shifted Bohr quasi-frequency omega + n.Omega:
// the Kossakowski matrix [h_{mu nu}], the Lamb-shift matrix [zeta_{mu nu}]
// and the jump operators S_{mu n omega} for every channel mu (zero if absent).
struct KossakowskiBlock {
    MultiIndex n;
    int omega_index = 0;
    double omega = 0.0;
    double shifted = 0.0;
    CMatrix h;
    CMatrix zeta;
    std::vector<CMatrix> jumps;
};

struct GeneratorBundle {
    CMatrix H_bar;
    CMatrix delta_H;
    Superoperator dissipator;
    Superoperator X;
    std::vector<KossakowskiBlock> blocks;

    // K = -i ad_{delta_H} + D
    Superoperator dissipative_part() const;
};

namespace generator {

// Groups the decomposition's jump operators into blocks ordered by omega
// (outer) then n (inner) and evaluates the bath exactly at omega + n.Omega.
std::vector<KossakowskiBlock> collect_blocks(const BohrDecomposition& decomp, const BathSpectrum& bath,
                                             const FrequencyVector& omega, int channels);

// Delta H = sum zeta_{mu nu}(omega_n) S_{mu n omega}^dag S_{nu n omega}
CMatrix build_lamb_shift(const std::vector<KossakowskiBlock>& blocks);

// D(rho) = sum h_{mu nu}(omega_n) (S_nu rho S_mu^dag - 1/2 {S_mu^dag S_nu, rho}).
// With `check_psd`, throws NotPSD naming the first block whose h has
// min eigenvalue below -psd_tol.
Superoperator build_dissipator(const std::vector<KossakowskiBlock>& blocks, int dim, bool check_psd = true,
                               double psd_tol = 1e-12);

// X = -i [H_bar + Delta H, .] + D
Superoperator assemble_X(const CMatrix& delta_H, const Superoperator& dissipator, const CMatrix& H_bar);

// Full pipeline on a decomposed model. Throws CongruenceViolation unless the
// Bohr set is Omega-congruence free within the model tolerances.
GeneratorBundle build_generator(const ReducedModel& m, const BohrDecomposition& decomp);

// Builds K from the double sum over pairs of shifted frequencies that agree
// within tol_delta and returns its operator-norm distance to the diagonal
// (omega = omega', n = m) assembly.
double cross_check_selection_rule(const std::vector<KossakowskiBlock>& blocks, int dim, double tol_delta);

// || K o ad_H - ad_H o K || in operator norm
double check_covariance(const Superoperator& k, const CMatrix& H_bar);

// Left trace defect max_j |(vec(I)^dag X)_j|
double trace_annihilation_defect(const Superoperator& x);

} // namespace generator
} // namespace qpmme
