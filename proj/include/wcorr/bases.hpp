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

#ifndef WCORR_BASES_HPP
#define WCORR_BASES_HPP

// Measurement bases, the qubit Hadamard-product postselection basis and the
// weak-coupling device table.

#include <cmath>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "wcorr/error.hpp"
#include "wcorr/qcore.hpp"

namespace wcorr {

/// Splits a product ket into single-party factors, or nullopt if it is entangled.
///
/// The global phase is absorbed into the first factor so that the tensor
/// product of the factors reproduces `psi` exactly.
inline std::optional<std::vector<PureState>> factorize(const PureState &psi, double tolerance = tol::spectral) {
    const Dims &dims = psi.dims();
    auto rho = DensityMatrix::from_pure(psi);
    std::vector<PureState> factors;
    for (std::size_t p = 0; p < dims.size(); ++p) {
        auto reduced = partial_trace(rho, {p});
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(reduced.matrix());
        if (es.info() != Eigen::Success) {
            return std::nullopt;
        }
        auto top = es.eigenvalues().size() - 1;
        if (std::abs(es.eigenvalues()(top) - 1.0) > tolerance) {
            return std::nullopt;
        }
        factors.push_back(PureState::normalized({dims[p]}, es.eigenvectors().col(top)));
    }
    ComplexVector prod = factors[0].amplitudes();
    for (std::size_t p = 1; p < factors.size(); ++p) {
        prod = kron(prod, factors[p].amplitudes());
    }
    Complex phase = prod.dot(psi.amplitudes());
    if (std::abs(std::abs(phase) - 1.0) > tolerance) {
        return std::nullopt;
    }
    factors[0] = PureState::normalized({dims[0]}, factors[0].amplitudes() * (phase / std::abs(phase)));
    if ((prod * (phase / std::abs(phase)) - psi.amplitudes()).cwiseAbs().maxCoeff() > tolerance) {
        return std::nullopt;
    }
    return factors;
}

/// Ordered orthonormal basis with labels.
///
/// When every vector is a product ket, `factors(k)` exposes its per-party
/// tensor factors; single-party postselection in the estimator relies on them.
class BasisSet {
   public:
    /// Factors are detected numerically.
    BasisSet(Dims dims, std::vector<PureState> vectors, std::vector<std::string> labels)
        : BasisSet(std::move(dims), std::move(vectors), std::move(labels), std::nullopt) {}

    /// Known per-party factors; each must reproduce its vector.
    BasisSet(Dims dims, std::vector<PureState> vectors, std::vector<std::string> labels,
             std::optional<std::vector<std::vector<PureState>>> factors)
        : dims_(std::move(dims)), vectors_(std::move(vectors)), labels_(std::move(labels)) {
        require_dims(dims_);
        if (vectors_.size() != total_dim(dims_)) {
            throw InvariantViolation("basis-size", "vector count must equal the product of dims");
        }
        if (labels_.size() != vectors_.size()) {
            throw InvariantViolation("basis-labels", "one label per vector required");
        }
        for (std::size_t a = 0; a < vectors_.size(); ++a) {
            require_same_dims(vectors_[a].dims(), dims_);
            for (std::size_t b = a; b < vectors_.size(); ++b) {
                Complex ip = vectors_[a].amplitudes().dot(vectors_[b].amplitudes());
                double expect = a == b ? 1.0 : 0.0;
                if (std::abs(ip - expect) > tol::structural) {
                    throw InvariantViolation("orthonormal", "vectors " + labels_[a] + " and " + labels_[b]);
                }
            }
        }
        if (factors) {
            if (factors->size() != vectors_.size()) {
                throw InvariantViolation("basis-factors", "one factor list per vector required");
            }
            for (std::size_t k = 0; k < vectors_.size(); ++k) {
                const auto &f = (*factors)[k];
                if (f.size() != dims_.size()) {
                    throw InvariantViolation("basis-factors", "one factor per party required");
                }
                ComplexVector prod = f[0].amplitudes();
                for (std::size_t p = 1; p < f.size(); ++p) {
                    prod = kron(prod, f[p].amplitudes());
                }
                if (static_cast<std::size_t>(prod.size()) != vectors_[k].dim() ||
                    (prod - vectors_[k].amplitudes()).cwiseAbs().maxCoeff() > tol::structural) {
                    throw InvariantViolation("basis-factors", "factors do not reproduce " + labels_[k]);
                }
            }
            factors_ = std::move(*factors);
            return;
        }
        for (const auto &v : vectors_) {
            auto f = factorize(v);
            if (!f) {
                factors_.clear();
                return;
            }
            factors_.push_back(std::move(*f));
        }
    }

    const Dims &dims() const noexcept { return dims_; }
    std::size_t size() const noexcept { return vectors_.size(); }
    const std::vector<PureState> &vectors() const noexcept { return vectors_; }
    const PureState &operator[](std::size_t k) const { return vectors_.at(k); }
    const std::string &label(std::size_t k) const { return labels_.at(k); }
    const std::vector<std::string> &labels() const noexcept { return labels_; }

    bool is_product() const noexcept { return !factors_.empty(); }

    /// Per-party factors of vector k.
    const std::vector<PureState> &factors(std::size_t k) const {
        if (!is_product()) {
            throw Error("non-factorable-postselection", "basis contains entangled vectors");
        }
        return factors_.at(k);
    }

   private:
    Dims dims_;
    std::vector<PureState> vectors_;
    std::vector<std::string> labels_;
    std::vector<std::vector<PureState>> factors_;
};

inline char digit_char(std::size_t d) {
    return d < 10 ? static_cast<char>('0' + d) : static_cast<char>('a' + (d - 10));
}

inline std::string digit_label(std::span<const std::size_t> digits) {
    std::string s;
    for (std::size_t d : digits) {
        s += digit_char(d);
    }
    return s;
}

/// Standard basis, first party most significant; labels "000", "001", ...
inline BasisSet computational_basis(const Dims &dims) {
    require_dims(dims);
    std::vector<PureState> vectors;
    std::vector<std::string> labels;
    std::vector<std::vector<PureState>> factors;
    for (std::size_t i = 0; i < total_dim(dims); ++i) {
        auto digits = unravel(i, dims);
        vectors.push_back(PureState::basis(dims, i));
        labels.push_back(digit_label(digits));
        std::vector<PureState> f;
        for (std::size_t p = 0; p < dims.size(); ++p) {
            f.push_back(PureState::basis({dims[p]}, digits[p]));
        }
        factors.push_back(std::move(f));
    }
    return BasisSet(dims, std::move(vectors), std::move(labels), std::move(factors));
}

/// Tensor products of (|0> +- |1>)/sqrt(2). Bit q of k, counted from the most
/// significant end, selects the minus sign on qubit q; labels are the sign
/// patterns ("+++", "++-", ...).
inline BasisSet hadamard_mub(std::size_t n_qubits) {
    if (n_qubits < 1) {
        throw Error("bad-size", "need at least one qubit");
    }
    if (n_qubits > 10) {
        throw Error("bad-size", "at most 10 qubits are supported");
    }
    const double h = 1.0 / std::sqrt(2.0);
    const PureState plus({2}, ComplexVector{{h, h}});
    const PureState minus({2}, ComplexVector{{h, -h}});
    Dims dims(n_qubits, 2);
    std::vector<PureState> vectors;
    std::vector<std::string> labels;
    std::vector<std::vector<PureState>> all_factors;
    for (std::size_t k = 0; k < (std::size_t{1} << n_qubits); ++k) {
        std::vector<PureState> factors;
        std::string label;
        for (std::size_t q = 0; q < n_qubits; ++q) {
            bool neg = (k >> (n_qubits - 1 - q)) & 1U;
            factors.push_back(neg ? minus : plus);
            label += neg ? '-' : '+';
        }
        vectors.push_back(tensor_product(std::span<const PureState>(factors)));
        labels.push_back(std::move(label));
        all_factors.push_back(std::move(factors));
    }
    return BasisSet(std::move(dims), std::move(vectors), std::move(labels), std::move(all_factors));
}

/// True iff |<b|a>|^2 = 1/d for every cross pair within `tolerance`.
inline bool is_mutually_unbiased(const BasisSet &b1, const BasisSet &b2, double tolerance = tol::structural) {
    require_same_dims(b1.dims(), b2.dims());
    const double target = 1.0 / static_cast<double>(total_dim(b1.dims()));
    for (const auto &b : b1.vectors()) {
        for (const auto &a : b2.vectors()) {
            if (std::abs(std::norm(b.amplitudes().dot(a.amplitudes())) - target) > tolerance) {
                return false;
            }
        }
    }
    return true;
}

/// Applies a local unitary (one matrix per party) to every vector of `basis`.
inline BasisSet relabeled(const BasisSet &basis, const std::vector<ComplexMatrix> &local_unitaries) {
    if (local_unitaries.size() != basis.dims().size()) {
        throw Error("shape-mismatch", "one unitary per party required");
    }
    ComplexMatrix u = local_unitaries[0];
    for (std::size_t p = 1; p < local_unitaries.size(); ++p) {
        u = kron(u, local_unitaries[p]);
    }
    std::vector<PureState> vectors;
    for (const auto &v : basis.vectors()) {
        vectors.push_back(PureState::normalized(basis.dims(), u * v.amplitudes()));
    }
    if (!basis.is_product()) {
        return BasisSet(basis.dims(), std::move(vectors), basis.labels());
    }
    std::vector<std::vector<PureState>> factors;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        std::vector<PureState> f;
        for (std::size_t p = 0; p < local_unitaries.size(); ++p) {
            const auto &old = basis.factors(k)[p];
            f.push_back(PureState::normalized(old.dims(), local_unitaries[p] * old.amplitudes()));
        }
        factors.push_back(std::move(f));
    }
    return BasisSet(basis.dims(), std::move(vectors), basis.labels(), std::move(factors));
}

inline double diagonal_distance(const DensityMatrix &rho, const DensityMatrix &sigma, const BasisSet &basis) {
    return diagonal_distance(rho, sigma, std::span<const PureState>(basis.vectors()));
}

/// Layout of weak-measured projectors: line 0 holds the joint computational
/// projectors |a_i><a_i|, line p+1 holds the single-party projector that
/// column i picks out for party p.
class DeviceTable {
   public:
    explicit DeviceTable(Dims dims) : dims_(std::move(dims)) {
        require_dims(dims_);
        for (std::size_t i = 0; i < total_dim(dims_); ++i) {
            party_bits_.push_back(unravel(i, dims_));
        }
    }

    const Dims &dims() const noexcept { return dims_; }
    std::size_t parties() const noexcept { return dims_.size(); }
    std::size_t lines() const noexcept { return 1 + dims_.size(); }
    std::size_t columns() const noexcept { return party_bits_.size(); }

    const std::vector<std::size_t> &party_bits(std::size_t column) const { return party_bits_.at(column); }

    /// Label in the form printed by the tables command, e.g. "|010><010|" or "|1><1|".
    std::string operator_label(std::size_t line, std::size_t column) const {
        std::string ket = line == 0 ? digit_label(party_bits(column))
                                    : std::string(1, digit_char(party_bits(column).at(line - 1)));
        return "|" + ket + "><" + ket + "|";
    }

    /// Projector of device (line, column): on the joint space for line 0,
    /// on party line-1's space otherwise.
    ComplexMatrix projector(std::size_t line, std::size_t column) const {
        if (line >= lines() || column >= columns()) {
            throw Error("bad-device", "device index out of range");
        }
        if (line == 0) {
            return PureState::basis(dims_, column).projector();
        }
        std::size_t p = line - 1;
        return PureState::basis({dims_[p]}, party_bits(column)[p]).projector();
    }

    /// Whether the tensor of lines 1..n reproduces line 0 for `column`.
    bool reconstruction_holds(std::size_t column) const {
        ComplexMatrix prod = projector(1, column);
        for (std::size_t line = 2; line < lines(); ++line) {
            prod = kron(prod, projector(line, column));
        }
        return (prod - projector(0, column)).cwiseAbs().maxCoeff() <= tol::structural;
    }

   private:
    Dims dims_;
    std::vector<std::vector<std::size_t>> party_bits_;
};

inline DeviceTable device_table(const Dims &dims) {
    return DeviceTable(dims);
}

}  // namespace wcorr

#endif  // WCORR_BASES_HPP
