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


#include <doctest.h>

#include <cmath>
#include <numbers>

#include "qpmme/analysis.hpp"
#include "qpmme/bohr.hpp"
#include "qpmme/dynamics.hpp"
#include "qpmme/error.hpp"
#include "qpmme/generator.hpp"
#include "qpmme/reference.hpp"
#include "support.hpp"

using namespace qpmme;
using qpmme::testing::Rng;

namespace {

DynamicalMap make_map(const ReducedModel& m) {
    return DynamicalMap(m, generator::build_generator(m, bohr::decompose_model(m)));
}

ReducedModel static_qubit(const CMatrix& h_bar, const CMatrix& s, BathSpectrum bath) {
    ReducedModel m;
    m.omega = FrequencyVector({std::sqrt(2.0), std::numbers::pi});
    m.p_series = FourierOperatorSeries::constant(2, 4, CMatrix::Identity(2, 2));
    m.H_bar = h_bar;
    m.couplings = {s};
    m.bath = std::move(bath);
    return m;
}

double sup_trace_distance(const std::vector<CMatrix>& a, const std::vector<CMatrix>& b) {
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) worst = std::max(worst, linalg::trace_norm(a[i] - b[i]));
    return worst;
}

} // namespace

TEST_CASE("sigma_superop") {
    ReducedModel q2 = reference::driven_qubit();
    CHECK(testing::max_abs_diff(dynamics::sigma_superop(q2.p_series, q2.omega, 0.0).matrix, CMatrix::Identity(4, 4)) <
          1e-12);

    // Diagonal phases: populations fixed, coherences rotated.
    Rng rng(50);
    CMatrix rho = rng.density(2);
    const double t = 1.9;
    Superoperator s = dynamics::sigma_superop(q2.p_series, q2.omega, t);
    CMatrix out = s.apply(rho);
    CHECK(std::abs(out(0, 0) - rho(0, 0)) < 1e-12);
    CHECK(std::abs(out(1, 1) - rho(1, 1)) < 1e-12);
    CHECK(std::abs(out(0, 1)) == doctest::Approx(std::abs(rho(0, 1))).epsilon(1e-12));
    const double f = 0.3 * std::sin(q2.omega[0] * t) + 0.2 * std::sin(q2.omega[1] * t);
    CHECK(std::abs(out(0, 1) - std::exp(Complex(0.0, -2.0 * f)) * rho(0, 1)) < 1e-10);

    ReducedModel q3 = reference::qutrit();
    for (int k = 0; k < 5; ++k) {
        CMatrix a = rng.hermitian(3);
        Superoperator st = dynamics::sigma_superop(q3.p_series, q3.omega, rng.uniform(0, 30));
        CHECK(linalg::trace_norm(st.apply(a)) == doctest::Approx(linalg::trace_norm(a)).epsilon(1e-10));
    }
}

TEST_CASE("dynamical map closed forms") {
    ReducedModel q1 = reference::qubit_dephasing();
    DynamicalMap map = make_map(q1);
    CHECK(testing::max_abs_diff(dynamics::dynamical_map(map, 0.0).matrix, CMatrix::Identity(4, 4)) < 1e-14);
    CMatrix plus = CMatrix::Constant(2, 2, 0.5);
    for (double t : {0.5, 3.0, 12.0}) {
        CMatrix rho = dynamics::dynamical_map(map, t).apply(plus);
        CHECK(std::abs(rho(0, 1)) == doctest::Approx(0.5 * std::exp(-2 * q1.bath.gamma * t)).epsilon(1e-12));
        CHECK(rho(0, 0).real() == doctest::Approx(0.5));
    }
    CHECK_THROWS_AS(dynamics::dynamical_map(map, -1.0), Error);
}

TEST_CASE("thermal relaxation of a static qubit reaches the Gibbs ratio") {
    const double beta = 0.8;
    ReducedModel m = static_qubit(0.5 * reference::pauli_z(), reference::pauli_x(),
                                  BathSpectrum::ohmic_kms(1, 0.05, 5.0, beta));
    DynamicalMap map = make_map(m);
    CMatrix excited = CMatrix::Zero(2, 2);
    excited(0, 0) = 1.0;
    CMatrix rho = dynamics::dynamical_map(map, 400.0).apply(excited);
    // |0> carries energy +1/2, |1> carries -1/2.
    CHECK(rho(0, 0).real() / rho(1, 1).real() == doctest::Approx(std::exp(-beta)).epsilon(1e-9));
}

TEST_CASE("propagators") {
    ReducedModel q3 = reference::qutrit();
    DynamicalMap map = make_map(q3);
    CHECK(testing::max_abs_diff(dynamics::propagator(map, 2.5, 2.5).matrix, CMatrix::Identity(9, 9)) < 1e-12);
    CMatrix lhs = dynamics::propagator(map, 2.0, 0.0).matrix;
    CMatrix rhs = dynamics::propagator(map, 2.0, 1.0).matrix * dynamics::propagator(map, 1.0, 0.0).matrix;
    CHECK(testing::max_abs_diff(lhs, rhs) <= 1e-11);
    CHECK(testing::max_abs_diff(lhs, dynamics::dynamical_map(map, 2.0).matrix) <= 1e-12);
    CHECK_THROWS_AS(dynamics::propagator(map, 1.0, 2.0), Error);

    Rng rng(51);
    for (int k = 0; k < 3; ++k) {
        double a = rng.uniform(0, 20), b = rng.uniform(0, 20), c = rng.uniform(0, 20);
        if (a < b) std::swap(a, b);
        if (b < c) std::swap(b, c);
        if (a < b) std::swap(a, b);
        CMatrix ck = dynamics::propagator(map, a, b).matrix * dynamics::propagator(map, b, c).matrix;
        CHECK(testing::max_abs_diff(ck, dynamics::propagator(map, a, c).matrix) <= 1e-11);
    }
    for (int k = 0; k < 20; ++k) {
        double t = rng.uniform(0, 20), s = rng.uniform(0, 20);
        if (t < s) std::swap(t, s);
        CHECK(linalg::min_eigenvalue(linalg::choi_of(dynamics::propagator(map, t, s))) >= -1e-10);
    }
}

TEST_CASE("time-dependent generator") {
    for (const char* name : {"qubit_dephasing", "driven_qubit", "qutrit"}) {
        CAPTURE(name);
        ReducedModel m = reference::by_name(name);
        DynamicalMap map = make_map(m);
        const int d = m.dim();
        Rng rng(52);

        // At t = 0 the rotation is trivial.
        Superoperator l0 = dynamics::assemble_L_t(map, 0.0);
        CMatrix expected = -kI * linalg::ad_superop(map.hamiltonian(0.0) + map.bundle().delta_H).matrix +
                           map.bundle().dissipator.matrix;
        CHECK(testing::max_abs_diff(l0.matrix, expected) < 1e-12);

        for (int k = 0; k < 4; ++k) {
            const double t = rng.uniform(0.0, 20.0);
            Superoperator l = dynamics::assemble_L_t(map, t);
            CMatrix rho = rng.matrix(d);
            CHECK(std::abs(l.apply(rho).trace()) < 1e-12);
            CHECK(testing::max_abs_diff(l.matrix, dynamics::assemble_L_t_gkls(map, t).matrix) < 1e-11);
            CHECK(testing::max_abs_diff(l.apply(rho), dynamics::apply_L_t(map, t, rho)) < 1e-11);

            // d/dt Lambda_t = L_t Lambda_t, by central differences.
            const double h = 1e-5;
            CMatrix dl = (dynamics::dynamical_map(map, t + h).matrix - dynamics::dynamical_map(map, t - h).matrix) /
                         (2 * h);
            CHECK(testing::max_abs_diff(dl, l.matrix * dynamics::dynamical_map(map, t).matrix) <= 1e-7);
        }
    }

    // Constant p: L_t = X for all t.
    ReducedModel q3s = reference::qutrit(true);
    DynamicalMap smap = make_map(q3s);
    for (double t : {0.0, 1.7, 9.2})
        CHECK(testing::max_abs_diff(dynamics::assemble_L_t(smap, t).matrix, smap.bundle().X.matrix) < 1e-12);
}

TEST_CASE("direct integrator") {
    // X = 0: nothing moves.
    ReducedModel idle = static_qubit(CMatrix::Zero(2, 2), reference::pauli_z(), BathSpectrum::flat(1, 0.0));
    DynamicalMap imap = make_map(idle);
    Rng rng(53);
    CMatrix rho0 = rng.density(2);
    auto grid = dynamics::uniform_grid(0.0, 5.0, 11);
    Trajectory still = dynamics::integrate_mme_direct(imap, rho0, grid, 1e-10);
    for (const auto& r : still.states) CHECK(testing::max_abs_diff(r, rho0) < 1e-15);

    // Constant generator: compare with expm.
    ReducedModel q3s = reference::qutrit(true);
    DynamicalMap smap = make_map(q3s);
    CMatrix r3 = rng.density(3);
    auto g3 = dynamics::uniform_grid(0.0, 10.0, 21);
    Trajectory tr = dynamics::integrate_mme_direct(smap, r3, g3, 1e-10);
    for (std::size_t i = 0; i < g3.size(); ++i) {
        CMatrix ref = linalg::devectorize(linalg::expm(g3[i] * smap.bundle().X.matrix) * linalg::vectorize(r3));
        CHECK(linalg::trace_norm(tr.states[i] - ref) <= 1e-8);
    }

    CHECK_THROWS_AS(dynamics::integrate_mme_direct(smap, r3, {0.0, 1.0, 0.5}, 1e-9), Error);
}

TEST_CASE("product form agrees with direct integration on the driven qubit") {
    ReducedModel q2 = reference::driven_qubit();
    DynamicalMap map = make_map(q2);
    Rng rng(54);
    CMatrix rho0 = rng.density(2);
    auto grid = dynamics::uniform_grid(0.0, 20.0, 200);
    auto product = dynamics::product_form_trajectory(map, rho0, grid);
    Trajectory direct = dynamics::integrate_mme_direct(map, rho0, grid, 1e-9);
    CHECK(sup_trace_distance(product, direct.states) <= 1e-6);
    for (const auto& r : product) {
        CHECK(linalg::min_eigenvalue_hermitian(r) >= -1e-10);
        CHECK(std::abs(r.trace() - 1.0) < 1e-12);
    }
}

TEST_CASE("Schrodinger oracle reproduces the product form") {
    ReducedModel q2 = reference::driven_qubit();
    DynamicalMap map = make_map(q2);
    auto grid = dynamics::uniform_grid(0.0, 20.0, 41);
    auto u = dynamics::integrate_schrodinger(map.hamiltonian_series(), q2.omega, grid, 1e-10);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        CMatrix expected = map.p(grid[i]) * linalg::expm(-kI * grid[i] * q2.H_bar);
        CHECK(linalg::operator_norm(u[i] - expected) <= 1e-8);
    }
}

TEST_CASE("eigen cache and expm agree") {
    ReducedModel q3 = reference::qutrit();
    GeneratorBundle b = generator::build_generator(q3, bohr::decompose_model(q3));
    DynamicalMap cached(q3, b, true), plain(q3, b, false);
    CHECK(cached.uses_eigen_cache());
    CHECK_FALSE(plain.uses_eigen_cache());
    for (double t : {0.0, 0.3, 7.0, 40.0})
        CHECK(testing::max_abs_diff(cached.semigroup(t), plain.semigroup(t)) <= 1e-12);
}

TEST_CASE("uniform grid") {
    auto g = dynamics::uniform_grid(0.0, 1.0, 5);
    CHECK(g == std::vector<double>{0.0, 0.25, 0.5, 0.75, 1.0});
    CHECK(dynamics::uniform_grid(2.0, 2.0, 1) == std::vector<double>{2.0});
}
