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


#include "qpmme/bath.hpp"

#include <cmath>
#include <numbers>

#include "qpmme/error.hpp"

namespace qpmme {

BathSpectrum BathSpectrum::flat(int channels, double gamma) {
    BathSpectrum b;
    b.family = BathFamily::Flat;
    b.channels = channels;
    b.gamma = gamma;
    return b;
}

BathSpectrum BathSpectrum::ohmic_kms(int channels, double kappa, double cutoff, double beta) {
    BathSpectrum b;
    b.family = BathFamily::OhmicKms;
    b.channels = channels;
    b.kappa = kappa;
    b.cutoff = cutoff;
    b.beta = beta;
    return b;
}

namespace bath {

std::string family_name(BathFamily f) {
    switch (f) {
    case BathFamily::Flat: return "flat";
    case BathFamily::OhmicKms: return "ohmic_kms";
    case BathFamily::Custom: return "custom";
    }
    return "unknown";
}

double profile(const BathSpectrum& b, double omega) {
    switch (b.family) {
    case BathFamily::Flat:
        return b.gamma;
    case BathFamily::OhmicKms: {
        const double two_pi_kappa = 2.0 * std::numbers::pi * b.kappa;
        const double x = b.beta * omega;
        // omega / (1 - exp(-beta omega)) -> 1 / beta as omega -> 0
        double bose;
        if (std::abs(x) < 1e-8) {
            bose = (1.0 + 0.5 * x) / b.beta;
        } else {
            bose = omega / (-std::expm1(-x));
        }
        return two_pi_kappa * bose * std::exp(-std::abs(omega) / b.cutoff);
    }
    case BathFamily::Custom:
        break;
    }
    throw Error(ErrorCode::Unsupported, "custom baths have no scalar profile");
}

CMatrix bath_h(const BathSpectrum& b, double omega, double tol) {
    if (!std::isfinite(omega)) throw Error(ErrorCode::DimensionMismatch, "bath_h at non-finite omega");
    if (b.family == BathFamily::Custom) {
        CMatrix h = b.custom_h(omega);
        if (h.rows() != b.channels || h.cols() != b.channels) {
            throw Error(ErrorCode::DimensionMismatch, "custom h has wrong channel count");
        }
        if (linalg::hermiticity_residual(h) > 1e-12 || linalg::min_eigenvalue_hermitian(h) < -tol) {
            throw Error(ErrorCode::NotPSD, "custom h(" + std::to_string(omega) + ") is not Hermitian PSD");
        }
        return 0.5 * (h + h.adjoint());
    }
    // h is the transform with kernel e^{-i omega x} and S_omega raises the energy by omega,
    // so the thermal profile enters mirrored: h(omega) = s(-omega).
    return profile(b, -omega) * CMatrix::Identity(b.channels, b.channels);
}

CMatrix bath_zeta(const BathSpectrum& b, double omega, double tol) {
    const int m = b.channels;
    switch (b.zeta_mode) {
    case ZetaMode::Zero:
        return CMatrix::Zero(m, m);
    case ZetaMode::Constant:
        return b.zeta_constant * CMatrix::Identity(m, m);
    case ZetaMode::PrincipalValue: {
        auto s = [&b](double nu) { return profile(b, -nu); };
        const double width = b.pv_half_width * (b.family == BathFamily::OhmicKms ? b.cutoff : 1.0);
        return principal_value_zeta(s, omega, width) * CMatrix::Identity(m, m);
    }
    case ZetaMode::Custom: {
        CMatrix z = b.custom_zeta(omega);
        if (z.rows() != m || z.cols() != m) {
            throw Error(ErrorCode::DimensionMismatch, "custom zeta has wrong channel count");
        }
        if (linalg::hermiticity_residual(z) > tol) {
            throw Error(ErrorCode::NotHermitianZeta, "zeta(" + std::to_string(omega) + ") is not Hermitian");
        }
        return z;
    }
    }
    return CMatrix::Zero(m, m);
}

double principal_value_zeta(const std::function<double(double)>& s, double omega, double half_width,
                            int panels) {
    // P.V. int_{-W}^{W} s(omega + u) / u du = int_0^W (s(omega + u) - s(omega - u)) / u du
    // Composite Gauss-Legendre (5 nodes) on a geometrically refined mesh near u = 0.
    static constexpr double nodes[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                                        0.5384693101056831, 0.9061798459386640};
    static constexpr double weights[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889,
                                          0.4786286704993665, 0.2369268850561891};
    auto integrand = [&](double u) { return (s(omega + u) - s(omega - u)) / u; };
    double total = 0.0;
    const double ratio = std::pow(half_width / 1e-10, 1.0 / panels);
    double a = 0.0;
    double b = 1e-10;
    for (int p = 0; p <= panels; ++p) {
        const double mid = 0.5 * (a + b);
        const double half = 0.5 * (b - a);
        for (int q = 0; q < 5; ++q) total += weights[q] * half * integrand(mid + half * nodes[q]);
        a = b;
        b = std::min(b * ratio, half_width);
        if (a >= half_width) break;
    }
    return total / (2.0 * std::numbers::pi);
}

} // namespace bath
} // namespace qpmme
