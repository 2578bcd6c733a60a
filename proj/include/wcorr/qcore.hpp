// Copyright 2026 The wcorr Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef WCORR_QCORE_HPP
#define WCORR_QCORE_HPP

// Dense complex state primitives over small tensor-factored Hilbert spaces.
//
// Subsystem ordering: the first listed subsystem is the slowest (most
// significant) digit of a flat index, so |i,j,k> on dims {2,2,2} is flat index
// 4i + 2j + k.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "wcorr/error.hpp"

namespace wcorr {

using Complex = std::complex<double>;
using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;
using Dims = std::vector<std::size_t>;

namespace tol {
/// Hermiticity, trace, normalization, orthonormality.
inline constexpr double structural = 1e-12;
/// Anything that goes through an eigensolver.
inline constexpr double spectral = 1e-10;
/// Postselection probabilities below this are treated as zero.
inline constexpr double null_probability = 1e-14;
}  // namespace tol

inline std::size_t total_dim(const Dims &dims) {
    return std::accumulate(dims.begin(), dims.end(), std::size_t{1}, std::multiplies<>());
}

/// Digits of a flat index, first subsystem most significant.
inline std::vector<std::size_t> unravel(std::size_t index, const Dims &dims) {
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t s = dims.size(); s-- > 0;) {
        digits[s] = index % dims[s];
        index /= dims[s];
    }
    return digits;
}

inline std::size_t ravel(std::span<const std::size_t> digits, const Dims &dims) {
    std::size_t index = 0;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        index = index * dims[s] + digits[s];
    }
    return index;
}

/// Flat-index stride of each subsystem.
inline std::vector<std::size_t> strides(const Dims &dims) {
    std::vector<std::size_t> out(dims.size(), 1);
    for (std::size_t s = dims.size(); s-- > 1;) {
        out[s - 1] = out[s] * dims[s];
    }
    return out;
}

inline bool all_finite(const ComplexMatrix &m) {
    return m.allFinite();
}

inline void require_dims(const Dims &dims) {
    if (dims.empty()) {
        throw Error("bad-dimension", "subsystem list is empty");
    }
    for (std::size_t d : dims) {
        if (d == 0) {
            throw Error("bad-dimension", "subsystem of dimension 0");
        }
    }
}

class PureState {
   public:
    PureState(Dims dims, ComplexVector amplitudes) : dims_(std::move(dims)), amplitudes_(std::move(amplitudes)) {
        require_dims(dims_);
        if (static_cast<std::size_t>(amplitudes_.size()) != total_dim(dims_)) {
            throw InvariantViolation("amplitude-count", "amplitude count does not match the product of dims");
        }
        if (!amplitudes_.allFinite()) {
            throw InvariantViolation("finite-entries", "amplitudes contain NaN or Inf");
        }
        double norm2 = amplitudes_.squaredNorm();
        if (std::abs(norm2 - 1.0) > tol::structural) {
            throw InvariantViolation("normalized", "squared-amplitude sum is " + std::to_string(norm2));
        }
    }

    /// Computational basis ket with the given flat index.
    static PureState basis(Dims dims, std::size_t index) {
        ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(total_dim(dims)));
        v(static_cast<Eigen::Index>(index)) = 1.0;
        return PureState(std::move(dims), std::move(v));
    }

    /// Rescales `amplitudes` to unit norm before validating.
    static PureState normalized(Dims dims, ComplexVector amplitudes) {
        double n = amplitudes.norm();
        if (!(n > 0.0)) {
            throw InvariantViolation("normalized", "zero vector cannot be normalized");
        }
        return PureState(std::move(dims), amplitudes / n);
    }

    const Dims &dims() const noexcept { return dims_; }
    const ComplexVector &amplitudes() const noexcept { return amplitudes_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(amplitudes_.size()); }
    Complex operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }

    ComplexMatrix projector() const { return amplitudes_ * amplitudes_.adjoint(); }

   private:
    Dims dims_;
    ComplexVector amplitudes_;
};

/// Returns the name of the first violated DensityMatrix invariant, if any.
inline std::optional<std::string> density_violation(const Dims &dims, const ComplexMatrix &m, bool check_spectrum = true) {
    auto d = static_cast<Eigen::Index>(total_dim(dims));
    if (m.rows() != d || m.cols() != d) {
        return "shape";
    }
    if (!m.allFinite()) {
        return "finite-entries";
    }
    if ((m - m.adjoint()).cwiseAbs().maxCoeff() > tol::structural) {
        return "hermitian";
    }
    if (std::abs(m.trace() - Complex(1.0)) > tol::structural) {
        return "unit-trace";
    }
    if (check_spectrum) {
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(m, Eigen::EigenvaluesOnly);
        if (es.info() != Eigen::Success) {
            return "eigensolver";
        }
        if (es.eigenvalues().minCoeff() < -tol::spectral) {
            return "positive-semidefinite";
        }
    }
    return std::nullopt;
}

class DensityMatrix {
   public:
    DensityMatrix(Dims dims, ComplexMatrix matrix) : dims_(std::move(dims)), matrix_(std::move(matrix)) {
        require_dims(dims_);
        if (auto bad = density_violation(dims_, matrix_)) {
            throw InvariantViolation(*bad, "density matrix check failed");
        }
    }

    /// Skips validation; for results of operations known to preserve the invariants.
    static DensityMatrix trusted(Dims dims, ComplexMatrix matrix) {
        return DensityMatrix(std::move(dims), std::move(matrix), TrustedTag{});
    }

    static DensityMatrix from_pure(const PureState &psi) { return trusted(psi.dims(), psi.projector()); }

    static DensityMatrix maximally_mixed(Dims dims) {
        require_dims(dims);
        auto d = static_cast<Eigen::Index>(total_dim(dims));
        return trusted(std::move(dims), ComplexMatrix::Identity(d, d) / static_cast<double>(d));
    }

    const Dims &dims() const noexcept { return dims_; }
    const ComplexMatrix &matrix() const noexcept { return matrix_; }
    std::size_t dim() const noexcept { return static_cast<std::size_t>(matrix_.rows()); }
    std::size_t parties() const noexcept { return dims_.size(); }
    Complex operator()(std::size_t r, std::size_t c) const {
        return matrix_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }

    /// Real diagonal in the computational basis.
    Eigen::VectorXd diagonal() const { return matrix_.diagonal().real(); }

   private:
    struct TrustedTag {};
    DensityMatrix(Dims dims, ComplexMatrix matrix, TrustedTag) : dims_(std::move(dims)), matrix_(std::move(matrix)) {}

    Dims dims_;
    ComplexMatrix matrix_;
};

inline Dims concat(const Dims &a, const Dims &b) {
    Dims out = a;
    out.insert(out.end(), b.begin(), b.end());
    return out;
}

inline ComplexMatrix kron(const ComplexMatrix &a, const ComplexMatrix &b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

inline PureState tensor_product(const PureState &a, const PureState &b) {
    ComplexVector v = kron(a.amplitudes(), b.amplitudes());
    return PureState(concat(a.dims(), b.dims()), std::move(v));
}

inline DensityMatrix tensor_product(const DensityMatrix &a, const DensityMatrix &b) {
    return DensityMatrix::trusted(concat(a.dims(), b.dims()), kron(a.matrix(), b.matrix()));
}

/// Tensor product of several factors, in order.
template <typename State>
State tensor_product(std::span<const State> factors) {
    if (factors.empty()) {
        throw Error("bad-dimension", "empty tensor product");
    }
    State out = factors[0];
    for (std::size_t i = 1; i < factors.size(); ++i) {
        out = tensor_product(out, factors[i]);
    }
    return out;
}

/// Reduced state on `keep`, with the kept subsystems in the given order.
inline DensityMatrix partial_trace(const DensityMatrix &rho, std::span<const std::size_t> keep) {
    const Dims &dims = rho.dims();
    std::vector<bool> kept(dims.size(), false);
    for (std::size_t s : keep) {
        if (s >= dims.size()) {
            throw Error("bad-subsystem", "index " + std::to_string(s) + " out of range");
        }
        if (kept[s]) {
            throw Error("bad-subsystem", "index " + std::to_string(s) + " listed twice");
        }
        kept[s] = true;
    }
    if (keep.empty()) {
        throw Error("bad-subsystem", "nothing to keep");
    }

    const auto stride = strides(dims);
    Dims keep_dims, traced_dims;
    std::vector<std::size_t> keep_stride, traced_stride;
    for (std::size_t s : keep) {
        keep_dims.push_back(dims[s]);
        keep_stride.push_back(stride[s]);
    }
    for (std::size_t s = 0; s < dims.size(); ++s) {
        if (!kept[s]) {
            traced_dims.push_back(dims[s]);
            traced_stride.push_back(stride[s]);
        }
    }

    auto offsets = [](const Dims &sub, const std::vector<std::size_t> &sub_stride) {
        std::vector<std::size_t> out(total_dim(sub));
        for (std::size_t i = 0; i < out.size(); ++i) {
            auto digits = unravel(i, sub);
            std::size_t off = 0;
            for (std::size_t m = 0; m < digits.size(); ++m) {
                off += digits[m] * sub_stride[m];
            }
            out[i] = off;
        }
        return out;
    };
    const auto ko = offsets(keep_dims, keep_stride);
    const auto to = traced_dims.empty() ? std::vector<std::size_t>{0} : offsets(traced_dims, traced_stride);

    const auto &m = rho.matrix();
    auto dk = static_cast<Eigen::Index>(ko.size());
    ComplexMatrix out = ComplexMatrix::Zero(dk, dk);
    for (Eigen::Index r = 0; r < dk; ++r) {
        for (Eigen::Index c = 0; c < dk; ++c) {
            Complex acc = 0.0;
            for (std::size_t t : to) {
                acc += m(static_cast<Eigen::Index>(ko[r] + t), static_cast<Eigen::Index>(ko[c] + t));
            }
            out(r, c) = acc;
        }
    }
    return DensityMatrix::trusted(std::move(keep_dims), std::move(out));
}

inline DensityMatrix partial_trace(const DensityMatrix &rho, std::initializer_list<std::size_t> keep) {
    std::vector<std::size_t> k(keep);
    return partial_trace(rho, std::span<const std::size_t>(k));
}

/// Single-party reduced states, in party order.
inline std::vector<DensityMatrix> marginals(const DensityMatrix &rho) {
    std::vector<DensityMatrix> out;
    out.reserve(rho.parties());
    for (std::size_t p = 0; p < rho.parties(); ++p) {
        out.push_back(partial_trace(rho, {p}));
    }
    return out;
}

inline void require_same_dims(const Dims &a, const Dims &b) {
    if (a != b) {
        throw Error("shape-mismatch", "subsystem dimensions differ");
    }
}

/// Half the sum of absolute eigenvalues of (rho - sigma).
inline double trace_distance(const DensityMatrix &rho, const DensityMatrix &sigma) {
    require_same_dims(rho.dims(), sigma.dims());
    ComplexMatrix diff = rho.matrix() - sigma.matrix();
    diff = (diff + diff.adjoint().eval()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(diff, Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw Error("numerical-failure", "Hermitian eigensolver did not converge");
    }
    return 0.5 * es.eigenvalues().cwiseAbs().sum();
}

/// Half the l1 distance between the diagonals of rho and sigma in `basis`.
inline double diagonal_distance(const DensityMatrix &rho, const DensityMatrix &sigma, std::span<const PureState> basis) {
    require_same_dims(rho.dims(), sigma.dims());
    if (basis.size() != rho.dim()) {
        throw Error("shape-mismatch", "basis does not span the space");
    }
    double acc = 0.0;
    for (const auto &a : basis) {
        require_same_dims(a.dims(), rho.dims());
        const auto &v = a.amplitudes();
        Complex r = v.dot(rho.matrix() * v);
        Complex s = v.dot(sigma.matrix() * v);
        acc += std::abs(r.real() - s.real());
    }
    return 0.5 * acc;
}

/// U rho U^dagger; U must be unitary.
inline DensityMatrix conjugate(const DensityMatrix &rho, const ComplexMatrix &unitary) {
    return DensityMatrix::trusted(rho.dims(), unitary * rho.matrix() * unitary.adjoint());
}

/// Zeroes every off-diagonal element in the computational basis.
inline DensityMatrix dephase(const DensityMatrix &rho) {
    ComplexMatrix d = rho.matrix().diagonal().asDiagonal();
    return DensityMatrix::trusted(rho.dims(), std::move(d));
}

/// Seeded random full-rank state, G G^dagger / tr(G G^dagger) with complex Gaussian G.
inline DensityMatrix random_density_matrix(const Dims &dims, std::uint64_t seed) {
    require_dims(dims);
    for (std::size_t d : dims) {
        if (d < 2) {
            throw Error("bad-dimension", "random states need every subsystem of dimension >= 2");
        }
    }
    auto n = static_cast<Eigen::Index>(total_dim(dims));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix g(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            double re = normal(rng);
            double im = normal(rng);
            g(r, c) = Complex(re, im);
        }
    }
    ComplexMatrix m = g * g.adjoint();
    m = (m + m.adjoint().eval()) / 2.0;
    m /= m.trace().real();
    return DensityMatrix::trusted(dims, std::move(m));
}

/// Seeded random pure state (normalized complex Gaussian vector).
inline PureState random_pure_state(const Dims &dims, std::uint64_t seed) {
    require_dims(dims);
    auto n = static_cast<Eigen::Index>(total_dim(dims));
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexVector v(n);
    for (Eigen::Index i = 0; i < n; ++i) {
        double re = normal(rng);
        double im = normal(rng);
        v(i) = Complex(re, im);
    }
    return PureState::normalized(dims, std::move(v));
}

}  // namespace wcorr

#endif  // WCORR_QCORE_HPP
