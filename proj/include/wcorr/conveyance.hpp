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

#ifndef WCORR_CONVEYANCE_HPP
#define WCORR_CONVEYANCE_HPP

// Strong-coupling state conveyance to the last party's side, and the
// broadcast step that equips a particle with a computational-basis copy.

#include <cmath>
#include <string>
#include <vector>

#include "wcorr/error.hpp"
#include "wcorr/qcore.hpp"

namespace wcorr {

/// Which maximally entangled ancilla state is prepared.
enum class AncillaVariant {
    standard,  ///< (1/sqrt l) sum_m |m>|m>
    flip,      ///< (1/sqrt l) sum_m |m>|m+1 mod l>; (|01>+|10>)/sqrt 2 for qubits
};

enum class ConveyanceMode { literal, idealized };

inline std::string to_string(ConveyanceMode m) {
    return m == ConveyanceMode::literal ? "literal" : "idealized";
}

struct AncillaPair {
    std::size_t dim;
    AncillaVariant variant;
    PureState state;
};

inline AncillaPair bell_state(std::size_t l, AncillaVariant variant = AncillaVariant::standard) {
    if (l < 2) {
        throw Error("bad-dimension", "ancilla dimension must be >= 2");
    }
    std::size_t offset = variant == AncillaVariant::flip ? 1 : 0;
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(l * l));
    const double amp = 1.0 / std::sqrt(static_cast<double>(l));
    for (std::size_t m = 0; m < l; ++m) {
        v(static_cast<Eigen::Index>(m * l + (m + offset) % l)) = amp;
    }
    return AncillaPair{l, variant, PureState({l, l}, std::move(v))};
}

/// Post-measurement state together with the recorded meter readings.
struct ConveyanceRecord {
    DensityMatrix state;
    std::vector<std::size_t> outcomes;
    double probability;
};

/// Controlled shift |x>_c |m>_t -> |x>_c |m + x mod l>_t, then a projective
/// measurement of `target` with result `outcome`. The measured subsystem is
/// removed from the returned state.
inline ConveyanceRecord strong_couple_and_measure(const DensityMatrix &joint, std::size_t control, std::size_t target,
                                                  std::size_t outcome) {
    const Dims &dims = joint.dims();
    if (control >= dims.size() || target >= dims.size() || control == target) {
        throw Error("bad-subsystem", "control and target must be distinct valid subsystems");
    }
    if (dims[control] != dims[target]) {
        throw Error("bad-dimension", "control and target dimensions differ");
    }
    const std::size_t l = dims[target];
    if (outcome >= l) {
        throw Error("bad-outcome", "outcome " + std::to_string(outcome) + " outside the target's range");
    }

    Dims out_dims;
    for (std::size_t s = 0; s < dims.size(); ++s) {
        if (s != target) {
            out_dims.push_back(dims[s]);
        }
    }
    // Source row of the pre-coupling matrix for each surviving index: the
    // controlled shift is a permutation, so the projected block is a gather.
    const std::size_t out_dim = total_dim(out_dims);
    std::vector<Eigen::Index> source(out_dim);
    std::vector<std::size_t> digits(dims.size());
    for (std::size_t r = 0; r < out_dim; ++r) {
        auto od = unravel(r, out_dims);
        for (std::size_t s = 0, o = 0; s < dims.size(); ++s) {
            digits[s] = s == target ? outcome : od[o++];
        }
        digits[target] = (outcome + l - digits[control]) % l;
        source[r] = static_cast<Eigen::Index>(ravel(digits, dims));
    }

    const auto &m = joint.matrix();
    auto n = static_cast<Eigen::Index>(out_dim);
    ComplexMatrix out(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        for (Eigen::Index c = 0; c < n; ++c) {
            out(r, c) = m(source[r], source[c]);
        }
    }
    double probability = out.trace().real();
    if (!(probability >= tol::null_probability)) {
        throw Error("impossible-outcome", "outcome " + std::to_string(outcome) + " has zero probability");
    }
    out /= probability;
    return ConveyanceRecord{DensityMatrix::trusted(std::move(out_dims), std::move(out)), {outcome}, probability};
}

/// |x> -> |x + shift mod l>.
inline ComplexMatrix shift_unitary(std::size_t l, std::size_t shift) {
    ComplexMatrix u = ComplexMatrix::Zero(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
    for (std::size_t x = 0; x < l; ++x) {
        u(static_cast<Eigen::Index>((x + shift) % l), static_cast<Eigen::Index>(x)) = 1.0;
    }
    return u;
}

/// Local relabeling that conveyance readings `outcomes` induce relative to the
/// all-zero branch: a shift by nu_m on each conveyed party, identity on the last.
inline std::vector<ComplexMatrix> outcome_relabeling(const Dims &dims, const std::vector<std::size_t> &outcomes) {
    if (dims.empty() || outcomes.size() + 1 != dims.size()) {
        throw Error("bad-outcome", "need one conveyance outcome per party except the last");
    }
    std::vector<ComplexMatrix> out;
    for (std::size_t p = 0; p < dims.size(); ++p) {
        out.push_back(shift_unitary(dims[p], p < outcomes.size() ? outcomes[p] : 0));
    }
    return out;
}

/// Transfers an n-party state onto the last party's side: parties 0..n-2 are
/// each conveyed through an ancilla pair and the result is ordered
/// (image of party 0, ..., image of party n-2, party n-1).
///
/// Literal mode runs the circuit: attach pairs, controlled shift from each
/// party onto its pair's first half, measure that half, trace the originals.
/// Idealized mode returns the relabeled input directly, the identity for
/// all-zero outcomes.
inline ConveyanceRecord convey(const DensityMatrix &rho, const std::vector<std::size_t> &outcomes,
                               ConveyanceMode mode = ConveyanceMode::idealized,
                               AncillaVariant variant = AncillaVariant::standard) {
    const Dims &dims = rho.dims();
    const std::size_t n = dims.size();
    if (outcomes.size() + 1 != n) {
        throw Error("bad-outcome", "need one conveyance outcome per party except the last");
    }
    for (std::size_t p = 0; p + 1 < n; ++p) {
        if (outcomes[p] >= dims[p]) {
            throw Error("bad-outcome", "outcome outside the party's range");
        }
    }

    if (mode == ConveyanceMode::idealized) {
        ComplexMatrix u = ComplexMatrix::Identity(1, 1);
        double probability = 1.0;
        for (const auto &f : outcome_relabeling(dims, outcomes)) {
            u = kron(u, f);
        }
        for (std::size_t p = 0; p + 1 < n; ++p) {
            probability /= static_cast<double>(dims[p]);
        }
        return ConveyanceRecord{conjugate(rho, u), outcomes, probability};
    }

    // Layout: parties 0..n-1, then (ancilla, image) for each conveyed party.
    DensityMatrix state = rho;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        state = tensor_product(state, DensityMatrix::from_pure(bell_state(dims[p], variant).state));
    }
    double probability = 1.0;
    // Measure the last pair first so earlier ancilla indices stay put.
    for (std::size_t p = n - 1; p-- > 0;) {
        auto rec = strong_couple_and_measure(state, p, n + 2 * p, outcomes[p]);
        state = std::move(rec.state);
        probability *= rec.probability;
    }
    std::vector<std::size_t> keep;
    for (std::size_t p = 0; p + 1 < n; ++p) {
        keep.push_back(n + p);
    }
    keep.push_back(n - 1);
    return ConveyanceRecord{partial_trace(state, keep), outcomes, probability};
}

/// Copy label left on C' when the original holds `x` and C'' reads `outcome`.
inline std::size_t copy_label(std::size_t l, std::size_t x, std::size_t outcome,
                              AncillaVariant variant = AncillaVariant::standard) {
    std::size_t offset = variant == AncillaVariant::flip ? 1 : 0;
    return (outcome + l - x % l + offset) % l;
}

/// Attaches a copy of `party` in the computational basis at the end of the
/// subsystem list. The pair's second half is measured with result `outcome`
/// and discarded.
inline ConveyanceRecord broadcast(const DensityMatrix &rho, std::size_t party, std::size_t outcome,
                                  AncillaVariant variant = AncillaVariant::standard) {
    if (party >= rho.parties()) {
        throw Error("bad-subsystem", "party index out of range");
    }
    const std::size_t n = rho.parties();
    auto extended = tensor_product(rho, DensityMatrix::from_pure(bell_state(rho.dims()[party], variant).state));
    return strong_couple_and_measure(extended, party, n + 1, outcome);
}

/// Broadcasts every party with the same reading; copies are appended in party order.
inline ConveyanceRecord broadcast_all(const DensityMatrix &rho, std::size_t outcome,
                                      AncillaVariant variant = AncillaVariant::standard) {
    DensityMatrix state = rho;
    double probability = 1.0;
    for (std::size_t p = 0; p < rho.parties(); ++p) {
        auto rec = broadcast(state, p, outcome, variant);
        state = std::move(rec.state);
        probability *= rec.probability;
    }
    return ConveyanceRecord{std::move(state), std::vector<std::size_t>(rho.parties(), outcome), probability};
}

}  // namespace wcorr

#endif  // WCORR_CONVEYANCE_HPP
