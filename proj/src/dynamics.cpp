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


#include "qpmme/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "qpmme/error.hpp"

namespace qpmme {

DynamicalMap::DynamicalMap(const ReducedModel& m, GeneratorBundle bundle, bool use_eigen_cache)
    : omega_(m.omega), p_series_(m.p_series),
      h_series_(model::synthesize_hamiltonian(m.p_series, m.omega, m.H_bar, m.tol)), bundle_(std::move(bundle)),
      tol_(m.tol) {
    if (!use_eigen_cache) return;
    Eigen::ComplexEigenSolver<CMatrix> solver(bundle_.X.matrix);
    if (solver.info() != Eigen::Success) return;
    const CMatrix& v = solver.eigenvectors();
    Eigen::JacobiSVD<CMatrix> svd(v);
    const auto& sv = svd.singularValues();
    const double cond = sv(0) / sv(sv.size() - 1);
    if (!(cond < tol_.condition_max)) return;
    cache_ = EigenCache{solver.eigenvalues(), v, v.inverse()};
}

CMatrix DynamicalMap::p(double t) const { return fourier::evaluate(p_series_, omega_, t); }

CMatrix DynamicalMap::hamiltonian(double t) const { return fourier::evaluate(h_series_, omega_, t); }

CMatrix DynamicalMap::semigroup(double t) const {
    if (cache_) {
        CVector e = (t * cache_->eigenvalues).array().exp();
        return cache_->vectors * e.asDiagonal() * cache_->inverse;
    }
    return linalg::expm(t * bundle_.X.matrix);
}

namespace dynamics {

namespace {

// RK4 with uniform substeps per grid interval; doubles the substep count until
// the sup distance between successive levels drops below tol.
template <class Rhs, class Dist>
std::vector<CMatrix> rk4_refine(const Rhs& rhs, const CMatrix& y0, const std::vector<double>& grid, double tol,
                                int max_levels, const Dist& dist, int* substeps_out, double* gap_out) {
    if (grid.empty()) return {};
    double max_dt = 0.0;
    for (std::size_t i = 1; i < grid.size(); ++i) {
        if (!(grid[i] > grid[i - 1])) throw Error(ErrorCode::OrderViolation, "time grid must be strictly increasing");
        max_dt = std::max(max_dt, grid[i] - grid[i - 1]);
    }
    if (max_dt == 0.0) max_dt = grid.front();
    if (!(max_dt > 0.0)) return {y0};
    auto run = [&](int substeps) {
        std::vector<CMatrix> out;
        out.reserve(grid.size());
        CMatrix y = y0;
        double t = 0.0;
        // Integrate from 0 to the first grid point as well.
        const double first = grid.front();
        if (first > 0.0) {
            const int n0 = std::max(1, static_cast<int>(std::ceil(first / max_dt * substeps)));
            const double h = first / n0;
            for (int s = 0; s < n0; ++s) {
                const CMatrix k1 = rhs(t, y);
                const CMatrix k2 = rhs(t + 0.5 * h, y + 0.5 * h * k1);
                const CMatrix k3 = rhs(t + 0.5 * h, y + 0.5 * h * k2);
                const CMatrix k4 = rhs(t + h, y + h * k3);
                y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
                t = (s + 1) * h;
            }
        }
        out.push_back(y);
        for (std::size_t i = 1; i < grid.size(); ++i) {
            const double t0 = grid[i - 1];
            const double h = (grid[i] - t0) / substeps;
            for (int s = 0; s < substeps; ++s) {
                const double ts = t0 + s * h;
                const CMatrix k1 = rhs(ts, y);
                const CMatrix k2 = rhs(ts + 0.5 * h, y + 0.5 * h * k1);
                const CMatrix k3 = rhs(ts + 0.5 * h, y + 0.5 * h * k2);
                const CMatrix k4 = rhs(ts + h, y + h * k3);
                y += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
            }
            out.push_back(y);
        }
        return out;
    };

    int substeps = std::max(1, static_cast<int>(std::ceil(max_dt / 0.1)));
    auto coarse = run(substeps);
    for (int level = 0; level < max_levels; ++level) {
        substeps *= 2;
        auto fine = run(substeps);
        double gap = 0.0;
        for (std::size_t i = 0; i < fine.size(); ++i) gap = std::max(gap, dist(fine[i], coarse[i]));
        if (gap < tol) {
            if (substeps_out) *substeps_out = substeps;
            if (gap_out) *gap_out = gap;
            return fine;
        }
        coarse = std::move(fine);
    }
    throw Error(ErrorCode::NoConvergence, "RK4 step refinement did not reach tolerance " + std::to_string(tol));
}

} // namespace

Superoperator sigma_superop(const FourierOperatorSeries& p, const FrequencyVector& omega, double t,
                            double unitarity_tol) {
    const CMatrix pt = fourier::evaluate(p, omega, t);
    const auto d = pt.rows();
    if ((pt.adjoint() * pt - CMatrix::Identity(d, d)).norm() > unitarity_tol) {
        throw Error(ErrorCode::NotUnitary, "p_t is not unitary at t = " + std::to_string(t));
    }
    return Superoperator(static_cast<int>(d), linalg::kron(pt.conjugate(), pt));
}

Superoperator dynamical_map(const DynamicalMap& map, double t) {
    if (t < 0.0) throw Error(ErrorCode::OrderViolation, "dynamical map requires t >= 0");
    const Superoperator sigma = sigma_superop(map.p_series(), map.omega(), t, map.tol().unitarity);
    return Superoperator(map.dim(), sigma.matrix * map.semigroup(t));
}

Superoperator propagator(const DynamicalMap& map, double t, double s) {
    if (s > t) throw Error(ErrorCode::OrderViolation, "propagator requires s <= t");
    if (s < 0.0) throw Error(ErrorCode::OrderViolation, "propagator requires s >= 0");
    const Superoperator sigma_t = sigma_superop(map.p_series(), map.omega(), t, map.tol().unitarity);
    const CMatrix ps = map.p(s);
    const CMatrix ps_inv = ps.inverse();
    const CMatrix sigma_s_inv = linalg::kron(ps_inv.conjugate(), ps_inv);
    return Superoperator(map.dim(), sigma_t.matrix * map.semigroup(t - s) * sigma_s_inv);
}

Superoperator assemble_L_t(const DynamicalMap& map, double t) {
    const CMatrix pt = map.p(t);
    const CMatrix pt_inv = pt.inverse();
    const CMatrix h_eff = map.hamiltonian(t) + pt * map.bundle().delta_H * pt.adjoint();
    const CMatrix sigma = linalg::kron(pt.conjugate(), pt);
    const CMatrix sigma_inv = linalg::kron(pt_inv.conjugate(), pt_inv);
    return Superoperator(map.dim(), -kI * linalg::ad_superop(h_eff).matrix +
                                        sigma * map.bundle().dissipator.matrix * sigma_inv);
}

Superoperator assemble_L_t_gkls(const DynamicalMap& map, double t) {
    const CMatrix pt = map.p(t);
    const int d = map.dim();
    const CMatrix id = CMatrix::Identity(d, d);
    const CMatrix h_eff = map.hamiltonian(t) + pt * map.bundle().delta_H * pt.adjoint();
    CMatrix out = -kI * linalg::ad_superop(h_eff).matrix;
    for (const auto& b : map.bundle().blocks) {
        std::vector<CMatrix> rotated;
        rotated.reserve(b.jumps.size());
        for (const auto& s : b.jumps) rotated.push_back(pt * s * pt.adjoint());
        for (std::size_t mu = 0; mu < rotated.size(); ++mu) {
            for (std::size_t nu = 0; nu < rotated.size(); ++nu) {
                const Complex h = b.h(static_cast<Eigen::Index>(mu), static_cast<Eigen::Index>(nu));
                if (h == Complex(0.0)) continue;
                const CMatrix prod = rotated[mu].adjoint() * rotated[nu];
                out += h * (linalg::kron(rotated[mu].conjugate(), rotated[nu]) -
                            0.5 * (linalg::kron(id, prod) + linalg::kron(prod.transpose(), id)));
            }
        }
    }
    return Superoperator(d, std::move(out));
}

CMatrix apply_L_t(const DynamicalMap& map, double t, const CMatrix& rho) {
    fourier::PhaseTable table(map.omega(), std::max(map.p_series().trunc(), map.hamiltonian_series().trunc()), t);
    const int d = map.dim();
    CMatrix pt = CMatrix::Zero(d, d);
    for (const auto& [n, c] : map.p_series().coeffs()) pt += table.phase(n) * c;
    CMatrix ht = CMatrix::Zero(d, d);
    for (const auto& [n, c] : map.hamiltonian_series().coeffs()) ht += table.phase(n) * c;

    const CMatrix pt_inv = pt.inverse();
    const CMatrix h_eff = ht + pt * map.bundle().delta_H * pt.adjoint();
    const CMatrix back = pt_inv * rho * pt_inv.adjoint();
    const CMatrix dissipated = map.bundle().dissipator.apply(back);
    return -kI * (h_eff * rho - rho * h_eff) + pt * dissipated * pt.adjoint();
}

std::vector<CMatrix> product_form_trajectory(const DynamicalMap& map, const CMatrix& rho0,
                                             const std::vector<double>& grid) {
    std::vector<CMatrix> out;
    out.reserve(grid.size());
    const CVector v0 = linalg::vectorize(rho0);
    for (double t : grid) {
        const CMatrix inner = linalg::devectorize(map.semigroup(t) * v0);
        const CMatrix pt = map.p(t);
        out.push_back(pt * inner * pt.adjoint());
    }
    return out;
}

Trajectory integrate_mme_direct(const DynamicalMap& map, const CMatrix& rho0, const std::vector<double>& grid,
                                double tol, int max_levels) {
    if (rho0.rows() != map.dim() || rho0.cols() != map.dim()) {
        throw Error(ErrorCode::DimensionMismatch, "initial state dimension");
    }
    auto rhs = [&map](double t, const CMatrix& rho) { return apply_L_t(map, t, rho); };
    auto dist = [](const CMatrix& a, const CMatrix& b) { return linalg::trace_norm(a - b); };
    Trajectory traj;
    traj.times = grid;
    traj.states = rk4_refine(rhs, rho0, grid, tol, max_levels, dist, &traj.substeps, &traj.refinement_gap);
    return traj;
}

std::vector<CMatrix> integrate_schrodinger(const FourierOperatorSeries& h_series, const FrequencyVector& omega,
                                           const std::vector<double>& grid, double tol, int max_levels) {
    auto rhs = [&](double t, const CMatrix& u) -> CMatrix {
        return -kI * (fourier::evaluate(h_series, omega, t) * u);
    };
    auto dist = [](const CMatrix& a, const CMatrix& b) { return linalg::operator_norm(a - b); };
    const auto d = h_series.dim();
    return rk4_refine(rhs, CMatrix::Identity(d, d), grid, tol, max_levels, dist, nullptr, nullptr);
}

std::vector<double> uniform_grid(double start, double stop, int count) {
    if (count < 1 || !(stop >= start)) throw Error(ErrorCode::OrderViolation, "invalid grid specification");
    std::vector<double> g(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        g[static_cast<std::size_t>(i)] = count > 1 ? start + (stop - start) * i / (count - 1) : start;
    }
    return g;
}

} // namespace dynamics
} // namespace qpmme
