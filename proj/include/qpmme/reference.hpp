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

#include <string>
#include <vector>

#include "qpmme/model.hpp"

namespace qpmme::reference {

CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();
CMatrix sigma_plus();  // |0><1|
CMatrix sigma_minus(); // |1><0|

// Q1: pure dephasing qubit, Omega = (1, sqrt 2), p = I, H_bar = (sqrt 3 / 2) sigma_z,
// S = sigma_z, flat bath gamma = 0.1.
ReducedModel qubit_dephasing();

// Q2: p_t = exp(-i (0.3 sin Omega_1 t + 0.2 sin Omega_2 t) sigma_z), H_bar = 0.5 sigma_z,
// S = sigma_x, flat bath gamma = 0.1, Omega = (sqrt 2, pi). The periodic variant drops
// the second frequency: Omega = (sqrt 2), p_t = exp(-i 0.3 sin(Omega_1 t) sigma_z).
ReducedModel driven_qubit(bool periodic = false);

// Q3: qutrit with a fixed nondegenerate H_bar, two couplings, ohmic KMS bath
// (kappa 0.05, cutoff 5, beta 1), Omega = (1, sqrt 2) and a non-commuting
// two-frequency p_t. With `static_p` the drive is removed (p = I).
ReducedModel qutrit(bool static_p = false);

// Qubit with Bohr gap 1 under Omega = (1, sqrt 2) and a nontrivial drive along
// Omega_1, so shifted frequencies collide.
ReducedModel congruence_violating(bool periodic = false);

// Omega = (1, 2), otherwise Q1.
ReducedModel rationally_dependent();

// Generator recipes used by the models above, for the file format.
std::vector<GeneratorTerm> driven_qubit_recipe(bool periodic);
std::vector<GeneratorTerm> qutrit_recipe();

ReducedModel by_name(const std::string& name);
std::vector<std::string> names();

} // namespace qpmme::reference
