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

#include <functional>
#include <optional>
#include <string>

#include "qpmme/linalg.hpp"

namespace qpmme {

enum class BathFamily { Flat, OhmicKms, Custom };
enum class ZetaMode { Zero, Constant, PrincipalValue, Custom };

// Spectral data of the environment as seen by the generator: h(omega) is the
// full Fourier transform of the correlation functions (PSD over mu, nu) and
// zeta(omega) the Hermitian part entering the Lamb shift.
//
// Scalar families are lifted diagonally over `channels` coupling operators.
struct BathSpectrum {
    BathFamily family = BathFamily::Flat;
    int channels = 1;

    double gamma = 0.0;  // flat
    double kappa = 0.0;  // ohmic_kms coupling
    double cutoff = 1.0; // ohmic_kms omega_c
    double beta = 1.0;   // ohmic_kms inverse temperature

    ZetaMode zeta_mode = ZetaMode::Zero;
    double zeta_constant = 0.0;
    double pv_half_width = 200.0; // principal-value integration range, in units of the cutoff

    std::function<CMatrix(double)> custom_h;
    std::function<CMatrix(double)> custom_zeta;

    static BathSpectrum flat(int channels, double gamma);
    static BathSpectrum ohmic_kms(int channels, double kappa, double cutoff, double beta);
};

namespace bath {

inline constexpr double kPsdTol = 1e-12;

// Scalar profile s(omega) of the built-in families. For ohmic_kms,
// s(omega) = 2 pi kappa omega e^{-|omega|/cutoff} / (1 - e^{-beta omega}), so
// s(-omega) = e^{-beta omega} s(omega). bath_h samples it as h(omega) = s(-omega).
double profile(const BathSpectrum& b, double omega);

// Throws NotPSD if a custom callback returns a matrix with min eigenvalue < -tol.
CMatrix bath_h(const BathSpectrum& b, double omega, double tol = kPsdTol);
// Throws NotHermitianZeta on a non-Hermitian custom callback.
CMatrix bath_zeta(const BathSpectrum& b, double omega, double tol = 1e-12);

// zeta(omega) = (1 / 2 pi) P.V. int s(nu) / (nu - omega) dnu, computed on
// [omega - W, omega + W] with the singularity subtracted.
double principal_value_zeta(const std::function<double(double)>& s, double omega, double half_width,
                            int panels = 4000);

std::string family_name(BathFamily f);

} // namespace bath
} // namespace qpmme
