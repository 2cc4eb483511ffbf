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


#include "qpmme/reference.hpp"

#include <cmath>
#include <numbers>

#include "qpmme/error.hpp"

namespace qpmme::reference {

namespace {

CMatrix mat2(Complex a, Complex b, Complex c, Complex d) {
    CMatrix m(2, 2);
    m << a, b, c, d;
    return m;
}

CMatrix mat3(std::initializer_list<Complex> v) {
    CMatrix m(3, 3);
    auto it = v.begin();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) m(i, j) = *it++;
    return m;
}

constexpr Complex I{0.0, 1.0};

} // namespace

CMatrix pauli_x() { return mat2(0.0, 1.0, 1.0, 0.0); }
CMatrix pauli_y() { return mat2(0.0, -I, I, 0.0); }
CMatrix pauli_z() { return mat2(1.0, 0.0, 0.0, -1.0); }
CMatrix sigma_plus() { return mat2(0.0, 1.0, 0.0, 0.0); }
CMatrix sigma_minus() { return mat2(0.0, 0.0, 1.0, 0.0); }

ReducedModel qubit_dephasing() {
    ReducedModel m;
    m.omega = FrequencyVector({1.0, std::numbers::sqrt2});
    m.p_series = FourierOperatorSeries::constant(2, 8, CMatrix::Identity(2, 2));
    m.H_bar = 0.5 * std::numbers::sqrt3 * pauli_z();
    m.couplings = {pauli_z()};
    m.bath = BathSpectrum::flat(1, 0.1);
    return m;
}

std::vector<GeneratorTerm> driven_qubit_recipe(bool periodic) {
    GeneratorTerm term;
    term.generator = pauli_z();
    if (periodic) {
        term.modes = {{MultiIndex{1}, 0.3, 0.0}};
    } else {
        term.modes = {{MultiIndex{1, 0}, 0.3, 0.0}, {MultiIndex{0, 1}, 0.2, 0.0}};
    }
    return {term};
}

ReducedModel driven_qubit(bool periodic) {
    ReducedModel m;
    m.omega = periodic ? FrequencyVector({std::numbers::sqrt2}) : FrequencyVector({std::numbers::sqrt2, std::numbers::pi});
    m.p_series = model::p_from_generator(driven_qubit_recipe(periodic), m.omega.size(), 2, 8).series;
    m.H_bar = 0.5 * pauli_z();
    m.couplings = {pauli_x()};
    m.bath = BathSpectrum::flat(1, 0.1);
    return m;
}

std::vector<GeneratorTerm> qutrit_recipe() {
    GeneratorTerm g1;
    g1.generator = mat3({0.5, 0.3, 0.0, 0.3, -0.2, 0.4 * I, 0.0, -0.4 * I, 0.1});
    g1.modes = {{MultiIndex{1, 0}, 0.3, 0.0}};
    GeneratorTerm g2;
    g2.generator = mat3({0.1, 0.0, 0.5, 0.0, 0.6, 0.2, 0.5, 0.2, -0.4});
    g2.modes = {{MultiIndex{0, 1}, 0.2, 0.0}, {MultiIndex{1, 1}, 0.0, 0.1}};
    return {g1, g2};
}

ReducedModel qutrit(bool static_p) {
    ReducedModel m;
    m.omega = FrequencyVector({1.0, std::numbers::sqrt2});
    const int trunc = 10;
    m.p_series = static_p ? FourierOperatorSeries::constant(2, trunc, CMatrix::Identity(3, 3))
                          : model::p_from_generator(qutrit_recipe(), 2, 3, trunc).series;
    m.H_bar = mat3({0.9, 0.2 - 0.1 * I, 0.05, 0.2 + 0.1 * I, 0.1, 0.15 * I, 0.05, -0.15 * I, -0.8});
    m.couplings = {mat3({0.3, 0.5, 0.1 * I, 0.5, -0.2, 0.4, -0.1 * I, 0.4, 0.1}),
                   mat3({0.0, 0.2 - 0.3 * I, 0.6, 0.2 + 0.3 * I, 0.4, 0.1, 0.6, 0.1, -0.3})};
    m.bath = BathSpectrum::ohmic_kms(2, 0.05, 5.0, 1.0);
    return m;
}

ReducedModel congruence_violating(bool periodic) {
    ReducedModel m;
    m.omega = periodic ? FrequencyVector({1.0}) : FrequencyVector({1.0, std::numbers::sqrt2});
    GeneratorTerm term;
    term.generator = pauli_z();
    term.modes = {{periodic ? MultiIndex{1} : MultiIndex{1, 0}, 0.4, 0.0}};
    m.p_series = model::p_from_generator({term}, m.omega.size(), 2, 8).series;
    m.H_bar = 0.5 * pauli_z();
    m.couplings = {pauli_x()};
    m.bath = BathSpectrum::flat(1, 0.1);
    return m;
}

ReducedModel rationally_dependent() {
    ReducedModel m = qubit_dephasing();
    m.omega = FrequencyVector({1.0, 2.0});
    return m;
}

std::vector<std::string> names() {
    return {"qubit_dephasing", "driven_qubit", "driven_qubit_periodic", "qutrit", "qutrit_static",
            "congruence_violating", "rationally_dependent"};
}

ReducedModel by_name(const std::string& name) {
    if (name == "qubit_dephasing") return qubit_dephasing();
    if (name == "driven_qubit") return driven_qubit(false);
    if (name == "driven_qubit_periodic") return driven_qubit(true);
    if (name == "qutrit") return qutrit(false);
    if (name == "qutrit_static") return qutrit(true);
    if (name == "congruence_violating") return congruence_violating(false);
    if (name == "rationally_dependent") return rationally_dependent();
    throw Error(ErrorCode::ParseError, "unknown reference model '" + name + "'");
}

} // namespace qpmme::reference
