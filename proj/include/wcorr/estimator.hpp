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

#ifndef WCORR_ESTIMATOR_HPP
#define WCORR_ESTIMATOR_HPP

// Weak values, matrix-element reconstruction from postselected weak values,
// and the correlation functional computed either analytically or through the
// simulated coupling pipeline.

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>
#include <vector>

#include "wcorr/bases.hpp"
#include "wcorr/conveyance.hpp"
#include "wcorr/error.hpp"
#include "wcorr/pointer.hpp"
#include "wcorr/qcore.hpp"

namespace wcorr {

/// <fin|A|in> / <fin|in>.
inline Complex weak_value_pure(const PureState &psi_in, const PureState &psi_fin, const ComplexMatrix &a) {
    require_same_dims(psi_in.dims(), psi_fin.dims());
    if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != psi_in.dim()) {
        throw Error("shape-mismatch", "operator does not act on the state space");
    }
    Complex overlap = psi_fin.amplitudes().dot(psi_in.amplitudes());
    if (std::abs(overlap) <= tol::null_probability) {
        throw Error("null-postselection", "pre- and postselected states are orthogonal");
    }
    return psi_fin.amplitudes().dot(a * psi_in.amplitudes()) / overlap;
}

/// tr(|b><b| rho).
inline double postselection_probability(const DensityMatrix &rho, const PureState &b) {
    require_same_dims(rho.dims(), b.dims());
    return b.amplitudes().dot(rho.matrix() * b.amplitudes()).real();
}

/// tr(|b><b| A rho) / tr(|b><b| rho).
inline Complex analytic_weak_value(const DensityMatrix &rho, const ComplexMatrix &a, const PureState &b) {
    require_same_dims(rho.dims(), b.dims());
    if (a.rows() != a.cols() || static_cast<std::size_t>(a.rows()) != rho.dim()) {
        throw Error("shape-mismatch", "operator does not act on the state space");
    }
    double p = postselection_probability(rho, b);
    if (!(p >= tol::null_probability)) {
        throw Error("null-postselection", "postselection probability " + std::to_string(p));
    }
    return b.amplitudes().dot(a * rho.matrix() * b.amplitudes()) / p;
}

/// <a_i|rho|a_j> from the postselected weak values of |a_i><a_i|:
///   sum_k P_k (beta_kj / beta_ki) W_ki,  beta_kx = <b_k|a_x>.
/// Postselections with P_k below the null threshold contribute zero.
inline Complex reconstruct_element(std::size_t i, std::size_t j, const DensityMatrix &rho, const BasisSet &basis_a,
                                   const BasisSet &basis_b) {
    require_same_dims(basis_a.dims(), rho.dims());
    require_same_dims(basis_b.dims(), rho.dims());
    if (i >= basis_a.size() || j >= basis_a.size()) {
        throw Error("bad-index", "element index out of range");
    }
    const auto &ai = basis_a[i];
    const auto &aj = basis_a[j];
    const ComplexMatrix proj = ai.projector();
    Complex acc = 0.0;
    for (const auto &bk : basis_b.vectors()) {
        Complex beta_i = bk.amplitudes().dot(ai.amplitudes());
        Complex beta_j = bk.amplitudes().dot(aj.amplitudes());
        if (std::abs(beta_i) <= tol::structural) {
            throw Error("unbiasedness-violation", "postselection vector orthogonal to a measured basis vector");
        }
        double p = postselection_probability(rho, bk);
        if (p < tol::null_probability) {
            continue;
        }
        acc += p * (beta_j / beta_i) * analytic_weak_value(rho, proj, bk);
    }
    return acc;
}

/// W[line][k][column] and P[k].
class WeakValueTable {
   public:
    WeakValueTable(std::size_t lines, std::size_t postselections, std::size_t columns)
        : lines_(lines),
          postselections_(postselections),
          columns_(columns),
          w_(lines * postselections * columns, Complex(0.0)),
          p_(postselections, 0.0),
          skipped_(postselections, false) {}

    std::size_t lines() const noexcept { return lines_; }
    std::size_t postselections() const noexcept { return postselections_; }
    std::size_t columns() const noexcept { return columns_; }

    Complex &at(std::size_t line, std::size_t k, std::size_t column) {
        return w_.at((line * postselections_ + k) * columns_ + column);
    }
    Complex at(std::size_t line, std::size_t k, std::size_t column) const {
        return w_.at((line * postselections_ + k) * columns_ + column);
    }
    double &probability(std::size_t k) { return p_.at(k); }
    double probability(std::size_t k) const { return p_.at(k); }
    bool skipped(std::size_t k) const { return skipped_.at(k); }
    void mark_skipped(std::size_t k) { skipped_.at(k) = true; }

    std::vector<std::size_t> skipped_indices() const {
        std::vector<std::size_t> out;
        for (std::size_t k = 0; k < postselections_; ++k) {
            if (skipped_[k]) {
                out.push_back(k);
            }
        }
        return out;
    }

    /// Per-postselection terms P_k sum_i |W_0ki - prod_j W_jki|; zero for skipped k.
    std::vector<double> correlation_terms() const {
        std::vector<double> out(postselections_, 0.0);
        for (std::size_t k = 0; k < postselections_; ++k) {
            if (skipped_[k]) {
                continue;
            }
            double s = 0.0;
            for (std::size_t i = 0; i < columns_; ++i) {
                Complex prod = 1.0;
                for (std::size_t line = 1; line < lines_; ++line) {
                    prod *= at(line, k, i);
                }
                s += std::abs(at(0, k, i) - prod);
            }
            out[k] = p_[k] * s;
        }
        return out;
    }

    /// max_i |sum_k P_k W_0ki - rho_ii|.
    double completeness_residual(const DensityMatrix &rho) const {
        double worst = 0.0;
        for (std::size_t i = 0; i < columns_; ++i) {
            Complex acc = 0.0;
            for (std::size_t k = 0; k < postselections_; ++k) {
                if (!skipped_[k]) {
                    acc += p_[k] * at(0, k, i);
                }
            }
            worst = std::max(worst, std::abs(acc - rho(i, i)));
        }
        return worst;
    }

   private:
    std::size_t lines_, postselections_, columns_;
    std::vector<Complex> w_;
    std::vector<double> p_;
    std::vector<bool> skipped_;
};

/// Line 0 from the joint state with b_k; line p+1 from party p's marginal with
/// the p-th tensor factor of b_k.
inline WeakValueTable analytic_weak_value_table(const DensityMatrix &rho, const DeviceTable &table,
                                                const BasisSet &postselection) {
    require_same_dims(rho.dims(), table.dims());
    require_same_dims(postselection.dims(), table.dims());
    if (!postselection.is_product()) {
        throw Error("non-factorable-postselection", "analytic backend needs product postselection states");
    }
    const auto margs = marginals(rho);
    WeakValueTable out(table.lines(), postselection.size(), table.columns());
    for (std::size_t k = 0; k < postselection.size(); ++k) {
        const auto &b = postselection[k];
        double p = postselection_probability(rho, b);
        out.probability(k) = p;
        if (p < tol::null_probability) {
            out.mark_skipped(k);
            continue;
        }
        const auto &factors = postselection.factors(k);
        bool ok = true;
        for (std::size_t party = 0; party < table.parties() && ok; ++party) {
            ok = postselection_probability(margs[party], factors[party]) >= tol::null_probability;
        }
        if (!ok) {
            out.mark_skipped(k);
            continue;
        }
        for (std::size_t i = 0; i < table.columns(); ++i) {
            out.at(0, k, i) = analytic_weak_value(rho, table.projector(0, i), b);
            for (std::size_t line = 1; line < table.lines(); ++line) {
                out.at(line, k, i) = analytic_weak_value(margs[line - 1], table.projector(line, i), factors[line - 1]);
            }
        }
    }
    return out;
}

/// sum_i |rho_ii - prod_X (rho_X)_{x_i x_i}|: twice the computational-basis
/// diagonal distance between rho and the product of its marginals.
inline double correlation_oracle_diag(const DensityMatrix &rho) {
    const auto margs = marginals(rho);
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.dim(); ++i) {
        auto digits = unravel(i, rho.dims());
        double prod = 1.0;
        for (std::size_t p = 0; p < margs.size(); ++p) {
            prod *= margs[p](digits[p], digits[p]).real();
        }
        acc += std::abs(rho(i, i).real() - prod);
    }
    return acc;
}

enum class Backend { analytic, circuit };

inline std::string to_string(Backend b) {
    return b == Backend::analytic ? "analytic" : "circuit";
}

struct CorrelationOptions {
    Backend backend = Backend::analytic;
    ConveyanceMode mode = ConveyanceMode::idealized;
    PointerConfig pointer;
    /// Conveyance readings, one per party except the last; empty means all zero.
    std::vector<std::size_t> conveyance_outcomes;
    /// Broadcast reading shared by every copy.
    std::size_t broadcast_outcome = 0;
    /// Couple the single-party lines directly to the conveyed particles instead of copies.
    bool skip_broadcast = false;
    /// Defaults to the Hadamard-product basis.
    std::optional<BasisSet> postselection;
    /// Apply the conveyance relabeling to the postselection basis as well.
    bool relabel_postselection = true;
};

struct CorrelationReport {
    double correlation = 0.0;
    std::vector<double> per_k;
    WeakValueTable table{0, 0, 0};
    std::vector<std::string> postselection_labels;
    Backend backend = Backend::analytic;
    ConveyanceMode mode = ConveyanceMode::idealized;
    double oracle_diag = 0.0;
    double max_completeness_residual = 0.0;
    double min_postselection_probability = 0.0;
    std::vector<std::size_t> skipped;
    std::vector<std::size_t> conveyance_outcomes;
    std::size_t broadcast_outcome = 0;
    /// Born probability of the recorded strong-meter readings.
    double outcome_probability = 1.0;
    /// Circuit backend only: max |extracted W - limiting W| over all devices.
    double max_weak_value_residual = 0.0;
};

namespace detail {

inline void require_qubits(const Dims &dims) {
    for (auto d : dims) {
        if (d != 2) {
            throw Error("bad-size", "the built-in postselection basis needs qubit parties");
        }
    }
}

}  // namespace detail

/// The correlation functional C = sum_k P_k sum_i |W_0ki - prod_j W_jki|.
inline CorrelationReport correlation(const DensityMatrix &rho, const CorrelationOptions &opts = {}) {
    const Dims &dims = rho.dims();
    if (dims.size() < 2) {
        throw Error("bad-size", "correlation needs at least two parties");
    }
    opts.pointer.validate();
    std::vector<std::size_t> nu = opts.conveyance_outcomes;
    if (nu.empty()) {
        nu.assign(dims.size() - 1, 0);
    }

    BasisSet basis = opts.postselection ? *opts.postselection : (detail::require_qubits(dims), hadamard_mub(dims.size()));
    require_same_dims(basis.dims(), dims);
    if (opts.relabel_postselection) {
        basis = relabeled(basis, outcome_relabeling(dims, nu));
    }
    const auto table = device_table(dims);
    auto conveyed = convey(rho, nu, opts.mode);

    CorrelationReport report;
    report.backend = opts.backend;
    report.mode = opts.mode;
    report.conveyance_outcomes = nu;
    report.broadcast_outcome = opts.broadcast_outcome;
    report.oracle_diag = correlation_oracle_diag(rho);
    report.postselection_labels = basis.labels();
    report.outcome_probability = conveyed.probability;

    if (opts.backend == Backend::analytic) {
        report.table = analytic_weak_value_table(conveyed.state, table, basis);
    } else {
        DensityMatrix line_state = conveyed.state;
        CouplingLayout layout;
        layout.line_parties = dims.size();
        layout.copies = !opts.skip_broadcast;
        layout.copy_outcome = opts.broadcast_outcome;
        if (layout.copies) {
            auto bc = broadcast_all(conveyed.state, opts.broadcast_outcome);
            line_state = std::move(bc.state);
            report.outcome_probability *= bc.probability;
        }
        auto bs = couple_all(line_state, table, opts.pointer, layout);
        WeakValueTable wt(table.lines(), basis.size(), table.columns());
        for (std::size_t k = 0; k < basis.size(); ++k) {
            try {
                auto readings = postselect_and_read(bs, basis[k], opts.pointer);
                auto limit = limiting_weak_values(bs, basis[k]);
                wt.probability(k) = readings.postselection_probability;
                for (std::size_t d = 0; d < readings.devices.size(); ++d) {
                    const auto &dev = readings.devices[d];
                    Complex w = extract_weak_value(readings.delta_q[d], readings.delta_p[d], opts.pointer);
                    wt.at(dev.line, k, dev.column) = w;
                    report.max_weak_value_residual = std::max(report.max_weak_value_residual, std::abs(w - limit[d]));
                }
            } catch (const Error &e) {
                if (e.code() != "null-postselection") {
                    throw;
                }
                wt.probability(k) = std::max(0.0, postselection_probability(conveyed.state, basis[k]));
                wt.mark_skipped(k);
            }
        }
        report.table = std::move(wt);
    }

    report.per_k = report.table.correlation_terms();
    report.correlation = 0.0;
    for (double t : report.per_k) {
        report.correlation += t;
    }
    report.skipped = report.table.skipped_indices();
    report.max_completeness_residual = report.table.completeness_residual(conveyed.state);
    report.min_postselection_probability = 1.0;
    for (std::size_t k = 0; k < basis.size(); ++k) {
        report.min_postselection_probability =
            std::min(report.min_postselection_probability, report.table.probability(k));
    }
    return report;
}

}  // namespace wcorr

#endif  // WCORR_ESTIMATOR_HPP
