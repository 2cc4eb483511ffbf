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

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qpmme/analysis.hpp"
#include "qpmme/bohr.hpp"
#include "qpmme/error.hpp"
#include "qpmme/generator.hpp"
#include "qpmme/reference.hpp"
#include "support.hpp"

using namespace qpmme;
using qpmme::testing::Rng;

namespace {

ReducedModel static_qubit(const CMatrix& h_bar, const CMatrix& s, BathSpectrum bath) {
    ReducedModel m;
    m.omega = FrequencyVector({std::sqrt(2.0), std::numbers::pi});
    m.p_series = FourierOperatorSeries::constant(2, 6, CMatrix::Identity(2, 2));
    m.H_bar = h_bar;
    m.couplings = {s};
    m.bath = std::move(bath);
    return m;
}

BathSpectrum two_rate_bath(double up, double down) {
    BathSpectrum b;
    b.family = BathFamily::Custom;
    b.channels = 1;
    b.custom_h = [up, down](double w) {
        return CMatrix::Constant(1, 1, w > 0.5 ? up : w < -0.5 ? down : 0.0);
    };
    return b;
}

GeneratorBundle build(const ReducedModel& m) { return generator::build_generator(m, bohr::decompose_model(m)); }

std::vector<Complex> sorted_spectrum(const CMatrix& x) {
    Eigen::ComplexEigenSolver<CMatrix> es(x);
    std::vector<Complex> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    std::sort(ev.begin(), ev.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() < b.real() : a.imag() < b.imag();
    });
    return ev;
}

} // namespace

TEST_CASE("Lamb shift examples") {
    const CMatrix sz = reference::pauli_z();
    ReducedModel zero = static_qubit(0.5 * sz, reference::pauli_x(), BathSpectrum::flat(1, 0.1));
    CHECK(build(zero).delta_H.norm() == 0.0);

    BathSpectrum cst = BathSpectrum::flat(1, 0.1);
    cst.zeta_mode = ZetaMode::Constant;
    cst.zeta_constant = 0.37;
    GeneratorBundle one = build(static_qubit(0.5 * sz, sz, cst));
    CHECK(testing::max_abs_diff(one.delta_H, 0.37 * sz.adjoint() * sz) < 1e-15);

    // zeta(+-1) = -+0.1 on sigma_x: S_1 = sigma_+, S_{-1} = sigma_-
    BathSpectrum odd = BathSpectrum::flat(1, 0.1);
    odd.zeta_mode = ZetaMode::Custom;
    odd.custom_zeta = [](double w) { return CMatrix::Constant(1, 1, w > 0.5 ? -0.1 : w < -0.5 ? 0.1 : 0.0); };
    GeneratorBundle two = build(static_qubit(0.5 * sz, reference::pauli_x(), odd));
    CMatrix expected = -0.1 * reference::sigma_plus().adjoint() * reference::sigma_plus() +
                       0.1 * reference::sigma_minus().adjoint() * reference::sigma_minus();
    CHECK(testing::max_abs_diff(two.delta_H, expected) < 1e-15);
    CHECK(testing::max_abs_diff(two.delta_H, 0.1 * sz) < 1e-15);
    CHECK((two.delta_H * sz - sz * two.delta_H).norm() == 0.0);
}

TEST_CASE("pure dephasing dissipator") {
    const double gamma = 0.13;
    const CMatrix sz = reference::pauli_z();
    GeneratorBundle g = build(static_qubit(0.5 * sz, sz, BathSpectrum::flat(1, gamma)));
    Rng rng(40);
    CMatrix rho = rng.density(2);
    CHECK(testing::max_abs_diff(g.dissipator.apply(rho), gamma * (sz * rho * sz - rho)) < 1e-15);
    // Off-diagonal entries decay at 2 gamma.
    CMatrix coh = reference::sigma_plus();
    CHECK(testing::max_abs_diff(g.dissipator.apply(coh), -2.0 * gamma * coh) < 1e-15);
}

TEST_CASE("two-rate qubit relaxes to the rate-equation ratio") {
    const double up = 0.3, down = 0.05;
    const CMatrix sz = reference::pauli_z();
    GeneratorBundle g = build(static_qubit(0.5 * sz, reference::pauli_x(), two_rate_bath(up, down)));
    // p_e' = up p_g - down p_e with |0> the excited level of sz / 2 and S_{+1} = |0><1|.
    auto fixed = analysis::find_psd_invariant(g.X);
    REQUIRE(fixed.has_value());
    const double pe = fixed->real()(0, 0), pg = fixed->real()(1, 1);
    CHECK(pe / pg == doctest::Approx(up / down).epsilon(1e-12));
    CHECK(pe + pg == doctest::Approx(1.0));
}

TEST_CASE("dissipator is trace annihilating and unital for symmetric rates") {
    Rng rng(41);
    const CMatrix sx = reference::pauli_x();
    GeneratorBundle g = build(static_qubit(0.5 * reference::pauli_z(), sx, two_rate_bath(0.2, 0.2)));
    for (int k = 0; k < 5; ++k) CHECK(std::abs(g.dissipator.apply(rng.matrix(2)).trace()) < 1e-15);
    CHECK(g.dissipator.apply(CMatrix::Identity(2, 2)).norm() < 1e-15);
    CHECK(g.X.apply(CMatrix::Identity(2, 2) / 2.0).norm() < 1e-15);
}

TEST_CASE("X without dissipation is the commutator with H_bar") {
    Rng rng(42);
    CMatrix h = rng.hermitian(3);
    Superoperator x = generator::assemble_X(CMatrix::Zero(3, 3), Superoperator::zero(3), h);
    CHECK(testing::max_abs_diff(x.matrix, -kI * linalg::ad_superop(h).matrix) < 1e-15);
    HermitianEigen e = linalg::eig_hermitian(h);
    std::vector<double> expected;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) expected.push_back(-(e.eigenvalues(i) - e.eigenvalues(j)));
    std::sort(expected.begin(), expected.end());
    auto ev = sorted_spectrum(x.matrix);
    std::vector<double> imag;
    for (auto z : ev) {
        CHECK(std::abs(z.real()) < 1e-12);
        imag.push_back(z.imag());
    }
    std::sort(imag.begin(), imag.end());
    for (std::size_t k = 0; k < imag.size(); ++k) CHECK(imag[k] == doctest::Approx(expected[k]).epsilon(1e-10));
}

TEST_CASE("pure dephasing generator spectrum") {
    ReducedModel q1 = reference::qubit_dephasing();
    GeneratorBundle g = build(q1);
    const double gamma = q1.bath.gamma;
    const double delta = std::sqrt(3.0);
    auto ev = sorted_spectrum(g.X.matrix);
    CHECK(std::abs(ev[0] - Complex(-2 * gamma, -delta)) < 1e-12);
    CHECK(std::abs(ev[1] - Complex(-2 * gamma, delta)) < 1e-12);
    CHECK(std::abs(ev[2]) < 1e-12);
    CHECK(std::abs(ev[3]) < 1e-12);
}

TEST_CASE("build_generator refuses congruence violations") {
    ReducedModel cv = reference::congruence_violating();
    try {
        build(cv);
        FAIL("expected CongruenceViolation");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::CongruenceViolation);
    }
}

TEST_CASE("negative Kossakowski block is rejected") {
    ReducedModel q2 = reference::driven_qubit();
    BohrDecomposition dec = bohr::decompose_model(q2);
    auto blocks = generator::collect_blocks(dec, q2.bath, q2.omega, 1);
    blocks[blocks.size() / 2].h *= -1.0;
    try {
        generator::build_dissipator(blocks, 2);
        FAIL("expected NotPSD");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NotPSD);
    }
    CHECK_NOTHROW(generator::build_dissipator(blocks, 2, false));
}

TEST_CASE("selection rule cross-check") {
    for (const char* name : {"driven_qubit", "driven_qubit_periodic", "qutrit"}) {
        CAPTURE(name);
        ReducedModel m = reference::by_name(name);
        BohrDecomposition dec = bohr::decompose_model(m);
        auto blocks = generator::collect_blocks(dec, m.bath, m.omega, static_cast<int>(m.couplings.size()));
        CHECK(generator::cross_check_selection_rule(blocks, m.dim(), m.tol.cluster) <= 1e-10);
    }

    // Single omega, single n: the sums coincide term by term.
    ReducedModel q1 = reference::qubit_dephasing();
    BohrDecomposition d1 = bohr::decompose_model(q1);
    auto b1 = generator::collect_blocks(d1, q1.bath, q1.omega, 1);
    CHECK(b1.size() == 1);
    CHECK(generator::cross_check_selection_rule(b1, 2, 1e-9) == 0.0);

    ReducedModel cv = reference::congruence_violating();
    BohrDecomposition dcv = bohr::decompose_model(cv);
    auto bcv = generator::collect_blocks(dcv, cv.bath, cv.omega, 1);
    CHECK(generator::cross_check_selection_rule(bcv, 2, cv.tol.cluster) > 1e-3);
}

TEST_CASE("covariance and Lamb-shift commutation") {
    GeneratorBundle q1 = build(reference::qubit_dephasing());
    CHECK(generator::check_covariance(q1.dissipative_part(), q1.H_bar) == 0.0);

    for (bool pv : {false, true}) {
        ReducedModel q3 = reference::qutrit();
        if (pv) q3.bath.zeta_mode = ZetaMode::PrincipalValue;
        GeneratorBundle g = build(q3);
        CHECK(generator::check_covariance(g.dissipative_part(), q3.H_bar) <= 1e-10);
        const double comm = linalg::operator_norm(g.delta_H * q3.H_bar - q3.H_bar * g.delta_H);
        CHECK(comm <= 1e-10 * std::max(1e-300, linalg::operator_norm(g.delta_H) * linalg::operator_norm(q3.H_bar)) + 1e-300);
        if (pv) CHECK(g.delta_H.norm() > 1e-3);
        CHECK(generator::trace_annihilation_defect(g.X) <= 1e-12);
    }

    // A jump operator mixing two omega sectors breaks covariance.
    ReducedModel q2 = reference::driven_qubit();
    BohrDecomposition dec = bohr::decompose_model(q2);
    auto blocks = generator::collect_blocks(dec, q2.bath, q2.omega, 1);
    for (auto& b : blocks) {
        if (b.omega > 0.5 && b.n.is_zero()) b.jumps[0] += reference::sigma_minus();
    }
    Superoperator broken = generator::build_dissipator(blocks, 2);
    CHECK(generator::check_covariance(broken, q2.H_bar) > 1e-3);
}

TEST_CASE("generator converges with the truncation") {
    ReducedModel q3 = reference::qutrit();
    auto recipe = reference::qutrit_recipe();
    const int n = 6;
    ReducedModel coarse = q3, fine = q3;
    TruncatedSeries pc = model::p_from_generator(recipe, 2, 3, n);
    TruncatedSeries pf = model::p_from_generator(recipe, 2, 3, n + 2);
    coarse.p_series = pc.series;
    fine.p_series = pf.series;
    GeneratorBundle gc = build(coarse), gf = build(fine);
    double s_norms = 0.0;
    for (const auto& s : q3.couplings) s_norms += s.squaredNorm();
    double max_h = 0.0;
    for (const auto& b : gf.blocks) max_h = std::max(max_h, linalg::operator_norm(b.h));
    const double bound = 4.0 * pf.series.tail_norm(n) * s_norms * max_h;
    const double diff = linalg::operator_norm(gc.X.matrix - gf.X.matrix);
    CAPTURE(diff);
    CAPTURE(bound);
    CHECK(diff <= bound);
}
