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


#include "qpmme/linalg.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <unsupported/Eigen/MatrixFunctions>

#include "qpmme/error.hpp"

namespace qpmme {

std::string_view to_string(ErrorCode code) {
    switch (code) {
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::NotHermitian: return "NotHermitian";
    case ErrorCode::NoConvergence: return "NoConvergence";
    case ErrorCode::Overflow: return "Overflow";
    case ErrorCode::NotUnitary: return "NotUnitary";
    case ErrorCode::TruncationLoss: return "TruncationLoss";
    case ErrorCode::NotPSD: return "NotPSD";
    case ErrorCode::NotHermitianZeta: return "NotHermitianZeta";
    case ErrorCode::UnknownFrequency: return "UnknownFrequency";
    case ErrorCode::CongruenceViolation: return "CongruenceViolation";
    case ErrorCode::OrderViolation: return "OrderViolation";
    case ErrorCode::SpectralViolation: return "SpectralViolation";
    case ErrorCode::Defective: return "Defective";
    case ErrorCode::InsufficientDecay: return "InsufficientDecay";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaVersionMismatch: return "SchemaVersionMismatch";
    case ErrorCode::Unsupported: return "Unsupported";
    }
    return "Unknown";
}

Superoperator::Superoperator(int d, CMatrix m) : dim(d), matrix(std::move(m)) {
    if (matrix.rows() != d * d || matrix.cols() != d * d) {
        throw Error(ErrorCode::DimensionMismatch, "superoperator matrix must be d^2 x d^2");
    }
}

Superoperator Superoperator::identity(int d) {
    return Superoperator(d, CMatrix::Identity(d * d, d * d));
}

Superoperator Superoperator::zero(int d) {
    return Superoperator(d, CMatrix::Zero(d * d, d * d));
}

CMatrix Superoperator::apply(const CMatrix& rho) const {
    if (rho.rows() != dim || rho.cols() != dim) {
        throw Error(ErrorCode::DimensionMismatch, "superoperator applied to wrong-sized matrix");
    }
    return linalg::devectorize(matrix * linalg::vectorize(rho));
}

Superoperator Superoperator::compose(const Superoperator& inner) const {
    if (inner.dim != dim) {
        throw Error(ErrorCode::DimensionMismatch, "composing superoperators of different dimension");
    }
    return Superoperator(dim, matrix * inner.matrix);
}

Superoperator operator+(const Superoperator& a, const Superoperator& b) {
    if (a.dim != b.dim) throw Error(ErrorCode::DimensionMismatch, "superoperator sum");
    return Superoperator(a.dim, a.matrix + b.matrix);
}

Superoperator operator-(const Superoperator& a, const Superoperator& b) {
    if (a.dim != b.dim) throw Error(ErrorCode::DimensionMismatch, "superoperator difference");
    return Superoperator(a.dim, a.matrix - b.matrix);
}

Superoperator operator*(Complex s, const Superoperator& a) {
    return Superoperator(a.dim, s * a.matrix);
}

namespace linalg {

namespace {

void require_square(const CMatrix& m, const char* what) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": matrix must be square and non-empty");
    }
}

} // namespace

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        for (Eigen::Index i = 0; i < m.rows(); ++i) {
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
        }
    }
    return true;
}

double hermiticity_residual(const CMatrix& h) {
    const double scale = std::max(h.norm(), 1.0);
    return (h - h.adjoint()).norm() / scale;
}

HermitianEigen eig_hermitian(const CMatrix& h, double tol_herm) {
    require_square(h, "eig_hermitian");
    const double norm = h.norm();
    if ((h - h.adjoint()).norm() > tol_herm * norm) {
        throw Error(ErrorCode::NotHermitian,
                    "||H - H^dag|| = " + std::to_string((h - h.adjoint()).norm()) + " exceeds tolerance");
    }
    const CMatrix sym = 0.5 * (h + h.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw Error(ErrorCode::NoConvergence, "Hermitian eigensolver did not converge");
    }
    return {solver.eigenvalues(), solver.eigenvectors()};
}

CMatrix expm(const CMatrix& a) {
    require_square(a, "expm");
    if (!all_finite(a)) throw Error(ErrorCode::Overflow, "expm input is not finite");
    CMatrix result = a.exp();
    if (!all_finite(result)) throw Error(ErrorCode::Overflow, "expm produced non-finite entries");
    return result;
}

CVector vectorize(const CMatrix& m) {
    require_square(m, "vectorize");
    const Eigen::Index d = m.rows();
    CVector v(d * d);
    for (Eigen::Index j = 0; j < d; ++j) v.segment(j * d, d) = m.col(j);
    return v;
}

CMatrix devectorize(const CVector& v) {
    const auto d = static_cast<Eigen::Index>(std::llround(std::sqrt(static_cast<double>(v.size()))));
    if (d * d != v.size() || d == 0) {
        throw Error(ErrorCode::DimensionMismatch, "vector length is not a perfect square");
    }
    CMatrix m(d, d);
    for (Eigen::Index j = 0; j < d; ++j) m.col(j) = v.segment(j * d, d);
    return m;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
    CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

Superoperator ad_superop(const CMatrix& h) {
    require_square(h, "ad_superop");
    const auto d = static_cast<int>(h.rows());
    const CMatrix id = CMatrix::Identity(d, d);
    return Superoperator(d, kron(id, h) - kron(h.transpose(), id));
}

Superoperator sandwich_superop(const CMatrix& a, const CMatrix& b) {
    require_square(a, "sandwich_superop");
    require_square(b, "sandwich_superop");
    if (a.rows() != b.rows()) throw Error(ErrorCode::DimensionMismatch, "sandwich_superop");
    return Superoperator(static_cast<int>(a.rows()), kron(b.transpose(), a));
}

ChoiMatrix choi_of(const Superoperator& s) {
    const int d = s.dim;
    CMatrix c = CMatrix::Zero(d * d, d * d);
    for (int i = 0; i < d; ++i) {
        for (int j = 0; j < d; ++j) {
            // S(E_ij) is column (j*d + i) of the superoperator matrix.
            c.block(i * d, j * d, d, d) = devectorize(s.matrix.col(j * d + i));
        }
    }
    return {d, std::move(c)};
}

double min_eigenvalue_hermitian(const CMatrix& m) {
    const CMatrix sym = 0.5 * (m + m.adjoint());
    Eigen::SelfAdjointEigenSolver<CMatrix> solver(sym, Eigen::EigenvaluesOnly);
    return solver.eigenvalues().minCoeff();
}

double min_eigenvalue(const ChoiMatrix& c) { return min_eigenvalue_hermitian(c.matrix); }

double trace_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues().sum();
}

double operator_norm(const CMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(0);
}

} // namespace linalg
} // namespace qpmme
