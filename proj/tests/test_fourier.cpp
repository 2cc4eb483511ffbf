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

#include "qpmme/error.hpp"
#include "qpmme/fourier.hpp"
#include "support.hpp"

using namespace qpmme;
using qpmme::testing::Rng;

namespace {

// Direct sum with std::exp per coefficient, no phase table.
CMatrix naive_evaluate(const FourierOperatorSeries& s, const FrequencyVector& omega, double t) {
    CMatrix out = CMatrix::Zero(s.dim(), s.dim());
    for (const auto& [n, c] : s.coeffs()) out += std::exp(kI * n.dot(omega) * t) * c;
    return out;
}

// Exhaustive scan: smallest max-norm k != 0 with |k.Omega| < tol ||Omega||.
bool has_relation(const FrequencyVector& omega, int K, double tol) {
    const int r = omega.size();
    std::vector<int> k(static_cast<std::size_t>(r), -K);
    while (true) {
        bool zero = std::all_of(k.begin(), k.end(), [](int x) { return x == 0; });
        if (!zero) {
            double dot = 0.0;
            for (int j = 0; j < r; ++j) dot += k[static_cast<std::size_t>(j)] * omega[j];
            if (std::abs(dot) < tol * omega.norm()) return true;
        }
        int j = 0;
        while (j < r && k[static_cast<std::size_t>(j)] == K) k[static_cast<std::size_t>(j++)] = -K;
        if (j == r) return false;
        ++k[static_cast<std::size_t>(j)];
    }
}

} // namespace

TEST_CASE("FrequencyVector rejects non-positive entries") {
    CHECK_THROWS_AS(FrequencyVector({1.0, 0.0}), Error);
    CHECK_THROWS_AS(FrequencyVector({-1.0}), Error);
    CHECK_THROWS_AS(FrequencyVector(std::vector<double>{}), Error);
    CHECK(FrequencyVector({3.0, 4.0}).norm() == doctest::Approx(5.0));
}

TEST_CASE("box enumeration") {
    CHECK(box(2, 1).size() == 9);
    CHECK(box(3, 2).size() == 125);
    CHECK(box_shell(2, 0).size() == 1);
    CHECK(box_shell(2, 2).size() == 16);
    for (const auto& n : box_shell(3, 2)) CHECK(n.max_abs() == 2);
}

TEST_CASE("evaluate examples") {
    FrequencyVector om({2.0, 3.0});
    Rng rng(10);
    CMatrix h0 = rng.hermitian(2);
    FourierOperatorSeries c = FourierOperatorSeries::constant(2, 4, h0);
    for (double t : {0.0, 0.7, 13.1}) CHECK(fourier::evaluate(c, om, t) == h0);

    FrequencyVector om1({1.3});
    CMatrix a = rng.matrix(2);
    FourierOperatorSeries s(1, 2, 3);
    s.set({1}, a);
    s.set({-1}, a.adjoint());
    CHECK(testing::max_abs_diff(fourier::evaluate(s, om1, 0.0), a + a.adjoint()) < 1e-15);

    FourierOperatorSeries cosine(2, 2, 2);
    cosine.set({1, 0}, 0.5 * CMatrix::Identity(2, 2));
    cosine.set({-1, 0}, 0.5 * CMatrix::Identity(2, 2));
    CHECK(testing::max_abs_diff(fourier::evaluate(cosine, om, std::numbers::pi / 2), -CMatrix::Identity(2, 2)) <
          1e-15);
}

TEST_CASE("evaluate matches a naive sum and is linear") {
    Rng rng(11);
    FrequencyVector om({1.0, std::sqrt(2.0), std::sqrt(5.0)});
    for (int trial = 0; trial < 5; ++trial) {
        FourierOperatorSeries a = rng.series(3, 3, 3, 20);
        FourierOperatorSeries b = rng.series(3, 3, 3, 20);
        const Complex alpha(0.3, -1.1);
        FourierOperatorSeries comb = fourier::series_sum(a, fourier::series_scale(b, alpha));
        for (int k = 0; k < 8; ++k) {
            const double t = rng.uniform(0.0, 30.0);
            CHECK(testing::max_abs_diff(fourier::evaluate(a, om, t), naive_evaluate(a, om, t)) < 1e-12);
            CMatrix lin = fourier::evaluate(a, om, t) + alpha * fourier::evaluate(b, om, t);
            CHECK(testing::max_abs_diff(fourier::evaluate(comb, om, t), lin) < 1e-12);
        }
    }
}

TEST_CASE("evaluate_angles agrees with evaluate on the winding line") {
    Rng rng(12);
    FrequencyVector om({1.0, std::sqrt(2.0)});
    FourierOperatorSeries a = rng.series(2, 2, 4, 15);
    const double t = 3.7;
    CHECK(testing::max_abs_diff(fourier::evaluate_angles(a, {om[0] * t, om[1] * t}), fourier::evaluate(a, om, t)) <
          1e-12);
}

TEST_CASE("series_product examples") {
    Rng rng(13);
    FourierOperatorSeries b = rng.series(2, 2, 3, 10);
    FourierOperatorSeries id = FourierOperatorSeries::constant(2, 3, CMatrix::Identity(2, 2));
    TruncatedSeries p = fourier::series_product(id, b);
    CHECK(p.dropped_tail == 0.0);
    CHECK(p.series.coeffs().size() == b.coeffs().size());
    for (const auto& [n, c] : b.coeffs()) CHECK(testing::max_abs_diff(p.series.coeff(n), c) < 1e-15);

    CMatrix a = rng.matrix(2), bb = rng.matrix(2);
    FourierOperatorSeries sa(1, 2, 2), sb(1, 2, 2);
    sa.set({1}, a);
    sb.set({-1}, bb);
    TruncatedSeries ab = fourier::series_product(sa, sb);
    CHECK(ab.series.coeffs().size() == 1);
    CHECK(testing::max_abs_diff(ab.series.coeff({0}), a * bb) < 1e-15);
}

TEST_CASE("series_product commutes with evaluation and is associative") {
    Rng rng(14);
    FrequencyVector om({1.0, std::sqrt(2.0)});
    for (int trial = 0; trial < 5; ++trial) {
        // Factors live in |n| <= 2; the product fits in the box of 4 without loss.
        FourierOperatorSeries a = rng.series(2, 3, 2, 2);
        FourierOperatorSeries b = rng.series(2, 3, 2, 2);
        TruncatedSeries ab = fourier::series_product(a, b, 4);
        CHECK(ab.dropped_tail == 0.0);
        for (int k = 0; k < 32; ++k) {
            const double t = rng.uniform(0.0, 50.0);
            CMatrix pw = fourier::evaluate(a, om, t) * fourier::evaluate(b, om, t);
            CHECK(testing::max_abs_diff(fourier::evaluate(ab.series, om, t), pw) <= 1e-12);
        }

        FourierOperatorSeries c = rng.series(2, 3, 2, 2);
        auto left = fourier::series_product(fourier::series_product(a, b, 6).series, c, 6);
        auto right = fourier::series_product(a, fourier::series_product(b, c, 6).series, 6);
        for (int k = 0; k < 8; ++k) {
            const double t = rng.uniform(0.0, 50.0);
            CHECK(testing::max_abs_diff(fourier::evaluate(left.series, om, t), fourier::evaluate(right.series, om, t)) <
                  1e-11);
        }
    }
}

TEST_CASE("series_product reports the dropped tail") {
    FourierOperatorSeries a(1, 1, 2), b(1, 1, 2);
    a.set({2}, CMatrix::Constant(1, 1, 3.0));
    b.set({1}, CMatrix::Constant(1, 1, 4.0));
    b.set({0}, CMatrix::Constant(1, 1, 1.0));
    TruncatedSeries p = fourier::series_product(a, b);
    CHECK(p.dropped_tail == doctest::Approx(12.0));
    CHECK(p.series.coeff({2})(0, 0) == Complex(3.0));
}

TEST_CASE("series_adjoint") {
    Rng rng(15);
    CMatrix h = rng.hermitian(3);
    FourierOperatorSeries c = FourierOperatorSeries::constant(1, 2, h);
    CHECK(fourier::series_adjoint(c).coeff({0}) == h);

    CMatrix a = rng.matrix(2);
    FourierOperatorSeries s(1, 2, 2);
    s.set({1}, a);
    FourierOperatorSeries adj = fourier::series_adjoint(s);
    CHECK(adj.coeffs().size() == 1);
    CHECK(adj.coeff({-1}) == a.adjoint());

    FourierOperatorSeries r = rng.series(2, 3, 3, 12);
    FourierOperatorSeries rr = fourier::series_adjoint(fourier::series_adjoint(r));
    for (const auto& [n, m] : r.coeffs()) CHECK(rr.coeff(n) == m);

    // A series with Hermitian values has (A_{-n})^dag = A_n.
    FourierOperatorSeries herm = fourier::series_sum(r, fourier::series_adjoint(r));
    FrequencyVector om({1.0, std::sqrt(3.0)});
    for (double t : {0.1, 2.5, 9.0}) {
        CMatrix v = fourier::evaluate(herm, om, t);
        CHECK((v - v.adjoint()).norm() < 1e-12);
    }
    for (const auto& [n, m] : herm.coeffs()) CHECK(testing::max_abs_diff(herm.coeff(-n).adjoint(), m) <= 1e-12);
}

TEST_CASE("series_derivative") {
    FrequencyVector om({2.0, 3.0});
    Rng rng(16);
    FourierOperatorSeries c = FourierOperatorSeries::constant(2, 3, rng.matrix(2));
    CHECK(fourier::series_derivative(c, om).coeff(MultiIndex::zero(2)).norm() == 0.0);

    CMatrix a = rng.matrix(2);
    FourierOperatorSeries s(2, 2, 2);
    s.set({1, 0}, a);
    CHECK(testing::max_abs_diff(fourier::series_derivative(s, om).coeff({1, 0}), Complex(0.0, 2.0) * a) < 1e-15);
}

TEST_CASE("series_derivative matches central finite differences and the Leibniz rule") {
    Rng rng(17);
    FrequencyVector om({1.0, std::sqrt(2.0)});
    const double h = 1e-5;
    for (int trial = 0; trial < 5; ++trial) {
        FourierOperatorSeries a = rng.series(2, 2, 3, 10, 0.2);
        FourierOperatorSeries da = fourier::series_derivative(a, om);
        for (int k = 0; k < 6; ++k) {
            const double t = rng.uniform(0.0, 20.0);
            CMatrix fd = (fourier::evaluate(a, om, t + h) - fourier::evaluate(a, om, t - h)) / (2 * h);
            CHECK(testing::max_abs_diff(fd, fourier::evaluate(da, om, t)) <= 1e-8);
        }

        FourierOperatorSeries b = rng.series(2, 2, 2, 4, 0.2);
        FourierOperatorSeries a2 = rng.series(2, 2, 2, 4, 0.2);
        auto ab = fourier::series_product(a2, b, 4);
        FourierOperatorSeries lhs = fourier::series_derivative(ab.series, om);
        for (int k = 0; k < 6; ++k) {
            const double t = rng.uniform(0.0, 20.0);
            CMatrix rhs = fourier::evaluate(fourier::series_derivative(a2, om), om, t) * fourier::evaluate(b, om, t) +
                          fourier::evaluate(a2, om, t) * fourier::evaluate(fourier::series_derivative(b, om), om, t);
            CHECK(testing::max_abs_diff(fourier::evaluate(lhs, om, t), rhs) <= 1e-11);
        }
    }
}

TEST_CASE("rational independence") {
    CHECK_FALSE(fourier::check_rational_independence(FrequencyVector({1.0, std::sqrt(2.0)}), 10, 1e-9).has_value());
    CHECK_FALSE(has_relation(FrequencyVector({1.0, std::sqrt(2.0)}), 10, 1e-9));

    auto w = fourier::check_rational_independence(FrequencyVector({1.0, 2.0}), 10, 1e-9);
    REQUIRE(w.has_value());
    CHECK((*w == MultiIndex{2, -1} || *w == MultiIndex{-2, 1}));

    CHECK_FALSE(fourier::check_rational_independence(FrequencyVector({0.37}), 12, 1e-9).has_value());
    CHECK_FALSE(fourier::check_rational_independence(FrequencyVector({std::numbers::pi}), 12, 1e-9).has_value());
}

TEST_CASE("rational independence agrees with an exhaustive scan") {
    Rng rng(18);
    for (int trial = 0; trial < 30; ++trial) {
        const int r = rng.integer(1, 3);
        std::vector<double> om;
        for (int j = 0; j < r; ++j) {
            // Half the draws are small integers, so relations do occur.
            om.push_back(rng.integer(0, 1) ? rng.integer(1, 4) : rng.uniform(0.5, 3.0));
        }
        FrequencyVector f(om);
        const int K = 4;
        auto w = fourier::check_rational_independence(f, K, 1e-9);
        CHECK(w.has_value() == has_relation(f, K, 1e-9));
        if (w) {
            CHECK(w->max_abs() <= K);
            CHECK(std::abs(w->dot(f)) < 1e-9 * f.norm());
        }
    }
}

TEST_CASE("set outside the box throws, add drops") {
    FourierOperatorSeries s(2, 2, 1);
    CHECK_THROWS_AS(s.set({2, 0}, CMatrix::Identity(2, 2)), Error);
    CHECK_THROWS_AS(s.set({0, 0}, CMatrix::Identity(3, 3)), Error);
    CHECK_FALSE(s.add({0, 2}, CMatrix::Identity(2, 2)));
    CHECK(s.add({1, -1}, CMatrix::Identity(2, 2)));
    CHECK(s.coeffs().size() == 1);
}
