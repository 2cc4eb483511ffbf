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


#include "qpmme/generator.hpp"

#include <cmath>
#include <map>
#include <string>
#include <tuple>

#include "qpmme/error.hpp"

namespace qpmme {

Superoperator GeneratorBundle::dissipative_part() const {
    return (-kI) * linalg::ad_superop(delta_H) + dissipator;
}

namespace generator {

namespace {

// Neumaier summation per entry, real and imaginary parts separately.
class CompensatedSum {
public:
    CompensatedSum(Eigen::Index rows, Eigen::Index cols)
        : sum_re_(Eigen::MatrixXd::Zero(rows, cols)), sum_im_(Eigen::MatrixXd::Zero(rows, cols)),
          c_re_(Eigen::MatrixXd::Zero(rows, cols)), c_im_(Eigen::MatrixXd::Zero(rows, cols)) {}

    void add(const CMatrix& term) {
        accumulate(sum_re_, c_re_, term.real());
        accumulate(sum_im_, c_im_, term.imag());
    }

    CMatrix result() const {
        CMatrix out(sum_re_.rows(), sum_re_.cols());
        out.real() = sum_re_ + c_re_;
        out.imag() = sum_im_ + c_im_;
        return out;
    }

private:
    static void accumulate(Eigen::MatrixXd& sum, Eigen::MatrixXd& comp, const Eigen::MatrixXd& term) {
        for (Eigen::Index j = 0; j < sum.cols(); ++j) {
            for (Eigen::Index i = 0; i < sum.rows(); ++i) {
                const double s = sum(i, j);
                const double x = term(i, j);
                const double t = s + x;
                comp(i, j) += (std::abs(s) >= std::abs(x)) ? (s - t) + x : (x - t) + s;
                sum(i, j) = t;
            }
        }
    }

    Eigen::MatrixXd sum_re_, sum_im_, c_re_, c_im_;
};

// Superoperator of rho -> h (S_nu rho S_mu^dag - 1/2 {S_mu^dag S_nu, rho}) - i zeta [S_mu^dag S_nu, rho]
CMatrix pair_term(const CMatrix& s_mu, const CMatrix& s_nu, Complex h, Complex zeta) {
    const auto d = s_mu.rows();
    const CMatrix id = CMatrix::Identity(d, d);
    const CMatrix prod = s_mu.adjoint() * s_nu;
    CMatrix out = h * (linalg::kron(s_mu.conjugate(), s_nu) -
                       0.5 * (linalg::kron(id, prod) + linalg::kron(prod.transpose(), id)));
    if (zeta != Complex(0.0)) out += (-kI * zeta) * (linalg::kron(id, prod) - linalg::kron(prod.transpose(), id));
    return out;
}

std::string block_label(const KossakowskiBlock& b) {
    std::string s = "(n=(";
    for (int i = 0; i < b.n.size(); ++i) s += (i ? "," : "") + std::to_string(b.n[i]);
    return s + "), omega=" + std::to_string(b.omega) + ")";
}

} // namespace

std::vector<KossakowskiBlock> collect_blocks(const BohrDecomposition& decomp, const BathSpectrum& bath,
                                             const FrequencyVector& omega, int channels) {
    if (bath.channels != channels) {
        throw Error(ErrorCode::DimensionMismatch, "bath channel count differs from number of couplings");
    }
    const int d = decomp.dim();
    std::map<std::tuple<int, MultiIndex>, KossakowskiBlock> grouped;
    for (const auto& j : decomp.jump_ops) {
        auto key = std::make_tuple(j.omega_index, j.n);
        auto it = grouped.find(key);
        if (it == grouped.end()) {
            KossakowskiBlock b;
            b.n = j.n;
            b.omega_index = j.omega_index;
            b.omega = j.omega;
            b.shifted = j.omega + j.n.dot(omega);
            b.jumps.assign(static_cast<std::size_t>(channels), CMatrix::Zero(d, d));
            it = grouped.emplace(key, std::move(b)).first;
        }
        it->second.jumps[static_cast<std::size_t>(j.mu)] = j.op;
    }
    std::vector<KossakowskiBlock> blocks;
    blocks.reserve(grouped.size());
    for (auto& [key, b] : grouped) {
        b.h = bath::bath_h(bath, b.shifted);
        b.zeta = bath::bath_zeta(bath, b.shifted);
        blocks.push_back(std::move(b));
    }
    return blocks;
}

CMatrix build_lamb_shift(const std::vector<KossakowskiBlock>& blocks) {
    if (blocks.empty()) throw Error(ErrorCode::DimensionMismatch, "no generator blocks");
    const auto d = blocks.front().jumps.front().rows();
    CompensatedSum acc(d, d);
    for (const auto& b : blocks) {
        const auto m = static_cast<Eigen::Index>(b.jumps.size());
        for (Eigen::Index mu = 0; mu < m; ++mu) {
            for (Eigen::Index nu = 0; nu < m; ++nu) {
                const Complex z = b.zeta(mu, nu);
                if (z == Complex(0.0)) continue;
                acc.add(z * b.jumps[static_cast<std::size_t>(mu)].adjoint() * b.jumps[static_cast<std::size_t>(nu)]);
            }
        }
    }
    return acc.result();
}

Superoperator build_dissipator(const std::vector<KossakowskiBlock>& blocks, int dim, bool check_psd,
                               double psd_tol) {
    CompensatedSum acc(dim * dim, dim * dim);
    for (const auto& b : blocks) {
        if (check_psd && linalg::min_eigenvalue_hermitian(b.h) < -psd_tol) {
            throw Error(ErrorCode::NotPSD, "Kossakowski block " + block_label(b) + " is not PSD");
        }
        const auto m = static_cast<Eigen::Index>(b.jumps.size());
        for (Eigen::Index mu = 0; mu < m; ++mu) {
            for (Eigen::Index nu = 0; nu < m; ++nu) {
                const Complex h = b.h(mu, nu);
                if (h == Complex(0.0)) continue;
                acc.add(pair_term(b.jumps[static_cast<std::size_t>(mu)], b.jumps[static_cast<std::size_t>(nu)], h, 0.0));
            }
        }
    }
    return Superoperator(dim, acc.result());
}

Superoperator assemble_X(const CMatrix& delta_H, const Superoperator& dissipator, const CMatrix& H_bar) {
    if (delta_H.rows() != H_bar.rows() || dissipator.dim != H_bar.rows()) {
        throw Error(ErrorCode::DimensionMismatch, "assemble_X inputs have different dimensions");
    }
    return (-kI) * linalg::ad_superop(H_bar + delta_H) + dissipator;
}

GeneratorBundle build_generator(const ReducedModel& m, const BohrDecomposition& decomp) {
    if (auto w = bohr::check_congruence_freedom(decomp.bohr_freqs, m.omega, m.tol.congruence_K, m.tol.congruence)) {
        throw Error(ErrorCode::CongruenceViolation,
                    "Bohr frequencies " + std::to_string(w->omega) + " and " + std::to_string(w->omega_prime) +
                        " differ by an integer combination of the drive frequencies");
    }
    GeneratorBundle g;
    g.H_bar = m.H_bar;
    g.blocks = collect_blocks(decomp, m.bath, m.omega, static_cast<int>(m.couplings.size()));
    const int d = m.dim();
    if (g.blocks.empty()) {
        g.delta_H = CMatrix::Zero(d, d);
        g.dissipator = Superoperator::zero(d);
    } else {
        g.delta_H = build_lamb_shift(g.blocks);
        g.dissipator = build_dissipator(g.blocks, d, true, m.tol.psd);
    }
    g.X = assemble_X(g.delta_H, g.dissipator, m.H_bar);
    return g;
}

double cross_check_selection_rule(const std::vector<KossakowskiBlock>& blocks, int dim, double tol_delta) {
    CompensatedSum diag(dim * dim, dim * dim);
    CompensatedSum full(dim * dim, dim * dim);
    for (std::size_t a = 0; a < blocks.size(); ++a) {
        const auto& ba = blocks[a];
        const auto m = static_cast<Eigen::Index>(ba.jumps.size());
        for (std::size_t b = 0; b < blocks.size(); ++b) {
            const auto& bb = blocks[b];
            if (std::abs(ba.shifted - bb.shifted) >= tol_delta) continue;
            for (Eigen::Index mu = 0; mu < m; ++mu) {
                for (Eigen::Index nu = 0; nu < m; ++nu) {
                    const CMatrix term = pair_term(ba.jumps[static_cast<std::size_t>(mu)],
                                                   bb.jumps[static_cast<std::size_t>(nu)], ba.h(mu, nu),
                                                   ba.zeta(mu, nu));
                    full.add(term);
                    if (a == b) diag.add(term);
                }
            }
        }
    }
    return linalg::operator_norm(full.result() - diag.result());
}

double check_covariance(const Superoperator& k, const CMatrix& H_bar) {
    const Superoperator ad = linalg::ad_superop(H_bar);
    return linalg::operator_norm(k.matrix * ad.matrix - ad.matrix * k.matrix);
}

double trace_annihilation_defect(const Superoperator& x) {
    const CVector id = linalg::vectorize(CMatrix::Identity(x.dim, x.dim));
    return (id.adjoint() * x.matrix).cwiseAbs().maxCoeff();
}

} // namespace generator
} // namespace qpmme
