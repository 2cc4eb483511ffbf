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


#include "qpmme/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>

#include "qpmme/error.hpp"

namespace qpmme {

LimitCycle::LimitCycle(FourierOperatorSeries p, FrequencyVector omega, std::vector<SpectralComponent> retained,
                       std::vector<SpectralComponent> decaying, double condition_number)
    : p_(std::move(p)), omega_(std::move(omega)), retained_(std::move(retained)), decaying_(std::move(decaying)),
      condition_number_(condition_number) {}

CMatrix LimitCycle::evaluate(double t) const {
    const auto d = p_.dim();
    CMatrix inner = CMatrix::Zero(d, d);
    for (const auto& c : retained_) inner += c.coefficient * std::polar(1.0, c.xi.imag() * t) * c.phi;
    const CMatrix pt = fourier::evaluate(p_, omega_, t);
    return pt * inner * pt.adjoint();
}

bool LimitCycle::quasiperiodic() const {
    return std::none_of(retained_.begin(), retained_.end(),
                        [](const SpectralComponent& c) { return c.cls == SpectralClass::M1; });
}

double LimitCycle::decay_amplitude() const {
    double a = 0.0;
    for (const auto& c : decaying_) a += std::abs(c.coefficient) * linalg::trace_norm(c.phi);
    return a;
}

std::optional<double> LimitCycle::slowest_present_rate(double rel_cutoff) const {
    const double amp = decay_amplitude();
    std::optional<double> best;
    for (const auto& c : decaying_) {
        if (std::abs(c.coefficient) * linalg::trace_norm(c.phi) <= rel_cutoff * amp) continue;
        const double rate = -c.xi.real();
        if (!best || rate < *best) best = rate;
    }
    return best;
}

namespace analysis {

namespace {

struct EigenData {
    CVector values;
    CMatrix vectors;
    double condition = std::numeric_limits<double>::infinity();
};

EigenData eigen_of(const CMatrix& x) {
    Eigen::ComplexEigenSolver<CMatrix> solver(x);
    if (solver.info() != Eigen::Success) throw Error(ErrorCode::NoConvergence, "eigensolver for X failed");
    EigenData out{solver.eigenvalues(), solver.eigenvectors()};
    Eigen::JacobiSVD<CMatrix> svd(out.vectors);
    const auto& sv = svd.singularValues();
    if (sv(sv.size() - 1) > 0.0) out.condition = sv(0) / sv(sv.size() - 1);
    return out;
}

SpectralClass classify(Complex& xi, double tol_spec) {
    if (std::abs(xi.real()) < tol_spec) {
        xi = Complex(0.0, xi.imag());
        if (std::abs(xi.imag()) < tol_spec) {
            xi = Complex(0.0, 0.0);
            return SpectralClass::Zero;
        }
        return SpectralClass::M1;
    }
    return SpectralClass::M2;
}

std::string format_complex(Complex z) {
    std::ostringstream os;
    os.precision(6);
    os << z.real() << (z.imag() < 0 ? " - " : " + ") << std::abs(z.imag()) << "i";
    return os.str();
}

// Trace distance below which the transient counts as asymptotic.
constexpr double kDecayWindowStart = 1e-3;

} // namespace

StabilityReport spectrum_classification(const Superoperator& X, double tol_spec, double zero_tol, double conj_tol,
                                        double condition_max) {
    const EigenData eig = eigen_of(X.matrix);
    StabilityReport report;
    report.condition_number = eig.condition;
    report.diagonalizable = eig.condition < condition_max;
    const auto n = eig.values.size();
    report.max_real_part = -std::numeric_limits<double>::infinity();
    report.zero_distance = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < n; ++i) {
        const Complex xi = eig.values(i);
        report.max_real_part = std::max(report.max_real_part, xi.real());
        report.zero_distance = std::min(report.zero_distance, std::abs(xi));
        double best = std::numeric_limits<double>::infinity();
        for (Eigen::Index j = 0; j < n; ++j) best = std::min(best, std::abs(eig.values(j) - std::conj(xi)));
        report.conjugation_defect = std::max(report.conjugation_defect, best);
    }
    if (report.max_real_part > tol_spec) {
        throw Error(ErrorCode::SpectralViolation,
                    "eigenvalue with positive real part " + std::to_string(report.max_real_part));
    }
    if (report.zero_distance > zero_tol) {
        throw Error(ErrorCode::SpectralViolation, "0 is not in the spectrum (distance " +
                                                      std::to_string(report.zero_distance) + ")");
    }
    if (report.conjugation_defect > conj_tol) {
        throw Error(ErrorCode::SpectralViolation, "spectrum is not closed under conjugation (defect " +
                                                      std::to_string(report.conjugation_defect) + ")");
    }

    std::vector<Complex> values(eig.values.data(), eig.values.data() + n);
    std::sort(values.begin(), values.end(), [](Complex a, Complex b) {
        return a.real() != b.real() ? a.real() > b.real() : a.imag() < b.imag();
    });
    for (Complex xi : values) {
        const SpectralClass cls = classify(xi, tol_spec);
        report.spectrum.push_back(xi);
        report.classes.push_back(cls);
        switch (cls) {
        case SpectralClass::Zero: ++report.k0; break;
        case SpectralClass::M1: ++report.m1_count; break;
        case SpectralClass::M2: {
            ++report.m2_count;
            const double rate = -xi.real();
            if (!report.slowest_decay || rate < *report.slowest_decay) report.slowest_decay = rate;
            if (!report.fastest_decay || rate > *report.fastest_decay) report.fastest_decay = rate;
            break;
        }
        }
    }
    report.quasiperiodic_steady_state = report.m1_count == 0;
    return report;
}

LimitCycle limit_cycle(const DynamicalMap& map, const CMatrix& rho0, double tol_spec, double condition_max) {
    const EigenData eig = eigen_of(map.bundle().X.matrix);
    if (!(eig.condition < condition_max)) {
        throw Error(ErrorCode::Defective,
                    "X is not diagonalizable within tolerance (condition number " + std::to_string(eig.condition) + ")");
    }
    const CVector coeffs = eig.vectors.partialPivLu().solve(linalg::vectorize(rho0));
    std::vector<SpectralComponent> retained;
    std::vector<SpectralComponent> decaying;
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
        Complex xi = eig.values(j);
        if (xi.real() > tol_spec) {
            throw Error(ErrorCode::SpectralViolation, "unstable eigenvalue " + format_complex(xi));
        }
        const SpectralClass cls = classify(xi, tol_spec);
        SpectralComponent comp{xi, cls, coeffs(j), linalg::devectorize(eig.vectors.col(j))};
        (cls == SpectralClass::M2 ? decaying : retained).push_back(std::move(comp));
    }
    return LimitCycle(map.p_series(), map.omega(), std::move(retained), std::move(decaying), eig.condition);
}

std::optional<CMatrix> find_psd_invariant(const Superoperator& X, double tol_spec, double psd_tol) {
    const EigenData eig = eigen_of(X.matrix);
    const int d = X.dim;
    const CVector coeffs =
        eig.vectors.partialPivLu().solve(linalg::vectorize(CMatrix::Identity(d, d) / static_cast<double>(d)));
    CMatrix inv = CMatrix::Zero(d, d);
    for (Eigen::Index j = 0; j < eig.values.size(); ++j) {
        Complex xi = eig.values(j);
        if (classify(xi, tol_spec) == SpectralClass::Zero) inv += coeffs(j) * linalg::devectorize(eig.vectors.col(j));
    }
    inv = 0.5 * (inv + inv.adjoint());
    if (inv.norm() == 0.0 || linalg::min_eigenvalue_hermitian(inv) < -psd_tol) return std::nullopt;
    return inv / inv.trace().real();
}

DecayFit decay_rate_fit(const DynamicalMap& map, const LimitCycle& cycle, const CMatrix& rho0,
                        const std::vector<double>& t_grid) {
    if (t_grid.size() < 3) throw Error(ErrorCode::InsufficientDecay, "need at least three sample times");
    DecayFit fit;
    fit.expected_rate = cycle.slowest_present_rate();
    const CVector v0 = linalg::vectorize(rho0);
    const CMatrix& x = map.bundle().X.matrix;
    for (double t : t_grid) {
        const CMatrix inner = linalg::devectorize(linalg::expm(t * x) * v0);
        const CMatrix pt = map.p(t);
        fit.distances.push_back(linalg::trace_norm(pt * inner * pt.adjoint() - cycle.evaluate(t)));
    }
    const double floor = 100.0 * std::numeric_limits<double>::epsilon() * std::max(cycle.decay_amplitude(), 1.0);
    const double initial = fit.distances.front();
    std::size_t begin = fit.distances.size();
    for (std::size_t i = 0; i < fit.distances.size(); ++i) {
        if (fit.distances[i] < kDecayWindowStart) {
            begin = i;
            break;
        }
    }
    if (begin == fit.distances.size()) {
        throw Error(ErrorCode::InsufficientDecay,
                    "distance to the limit cycle never falls below 1e-3 (initial " + std::to_string(initial) + ")");
    }
    std::size_t end = begin;
    while (end + 1 < fit.distances.size() && fit.distances[end + 1] > floor) ++end;
    if (!(fit.distances[begin] > floor) || end < begin + 2) {
        throw Error(ErrorCode::InsufficientDecay, "fewer than three samples between 1e-3 and the roundoff floor");
    }
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const auto n = static_cast<double>(end - begin + 1);
    for (std::size_t i = begin; i <= end; ++i) {
        const double t = t_grid[i];
        const double y = std::log(fit.distances[i]);
        st += t;
        sy += y;
        stt += t * t;
        sty += t * y;
    }
    const double slope = (n * sty - st * sy) / (n * stt - st * st);
    fit.rate = -slope;
    fit.window_begin = t_grid[begin];
    fit.window_end = t_grid[end];
    fit.points = static_cast<int>(end - begin + 1);
    return fit;
}

CptpEntry certify_superoperator(const Superoperator& s, double t, double s_time, std::uint64_t seed) {
    CptpEntry e;
    e.t = t;
    e.s = s_time;
    const int d = s.dim;
    e.choi_min = linalg::min_eigenvalue(linalg::choi_of(s));
    const CVector id = linalg::vectorize(CMatrix::Identity(d, d));
    e.trace_defect = (id.adjoint() * s.matrix - id.adjoint()).cwiseAbs().maxCoeff();
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    for (int k = 0; k < 3; ++k) {
        CMatrix a(d, d);
        for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) a(i, j) = Complex(normal(rng), normal(rng));
        const CMatrix herm = a + a.adjoint();
        const CMatrix out = s.apply(herm);
        e.hermiticity_defect = std::max(e.hermiticity_defect, (out - out.adjoint()).norm());
    }
    return e;
}

CptpReport cptp_certificate(const DynamicalMap& map, const std::vector<double>& t_samples, int random_pairs,
                            std::uint64_t seed) {
    CptpReport report;
    auto judge = [&report](CptpEntry& e) {
        e.pass = e.choi_min >= -report.choi_tol && e.trace_defect <= report.trace_tol &&
                 e.hermiticity_defect <= report.hermiticity_tol;
        return e.pass;
    };
    bool ok = true;
    double t_max = 0.0;
    for (double t : t_samples) {
        auto e = certify_superoperator(dynamics::dynamical_map(map, t), t, 0.0, seed + report.maps.size());
        ok = judge(e) && ok;
        report.maps.push_back(e);
        t_max = std::max(t_max, t);
    }
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uni(0.0, t_max > 0.0 ? t_max : 1.0);
    for (int k = 0; k < random_pairs; ++k) {
        double a = uni(rng);
        double b = uni(rng);
        if (a < b) std::swap(a, b);
        auto e = certify_superoperator(dynamics::propagator(map, a, b), a, b, seed + 1000 + static_cast<std::uint64_t>(k));
        ok = judge(e) && ok;
        report.propagators.push_back(e);
    }
    report.pass = ok;
    return report;
}

CMatrix gibbs_state(const CMatrix& H, double beta) {
    const HermitianEigen eig = linalg::eig_hermitian(H);
    const double shift = eig.eigenvalues.minCoeff();
    Eigen::VectorXd w = (-beta * (eig.eigenvalues.array() - shift)).exp();
    w /= w.sum();
    return eig.eigenvectors * w.cast<Complex>().asDiagonal() * eig.eigenvectors.adjoint();
}

std::vector<double> log_grid(double start, double stop, int count) {
    if (!(start > 0.0) || !(stop > start) || count < 2) {
        throw Error(ErrorCode::OrderViolation, "log grid needs 0 < start < stop and count >= 2");
    }
    std::vector<double> g(static_cast<std::size_t>(count));
    const double ratio = std::log(stop / start) / (count - 1);
    for (int i = 0; i < count; ++i) g[static_cast<std::size_t>(i)] = start * std::exp(ratio * i);
    g.back() = stop;
    return g;
}

} // namespace analysis
} // namespace qpmme
