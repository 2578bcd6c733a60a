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

#ifndef WCORR_POINTER_HPP
#define WCORR_POINTER_HPP

// Weak-coupling device matrix with Gaussian pointers.
//
// Every weak-measured operator here is a computational-basis projector A, so
// exp(-i g A (x) P) = (I - A) (x) I + A (x) T_g exactly, with T_g translating
// the pointer by g. A joint computational label therefore fixes which pointers
// moved, and the coupled state is carried as (label, shift pattern) branches
// plus the original coherence matrix. Nothing is truncated at any order in g.

#include <cmath>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "wcorr/bases.hpp"
#include "wcorr/conveyance.hpp"
#include "wcorr/error.hpp"
#include "wcorr/qcore.hpp"

namespace wcorr {

struct PointerConfig {
    double g = 1e-3;
    double sigma = 1.0 / std::sqrt(2.0);

    void validate() const {
        if (!(g > 0.0) || !std::isfinite(g)) {
            throw InvariantViolation("coupling-positive", "g must be a positive finite number");
        }
        if (!(sigma > 0.0) || !std::isfinite(sigma)) {
            throw InvariantViolation("sigma-positive", "sigma must be a positive finite number");
        }
    }
};

/// One weak-coupling device: a projector onto the labels whose digits satisfy
/// every (subsystem, digit) condition.
struct Device {
    std::size_t line = 0;
    std::size_t column = 0;
    std::vector<std::pair<std::size_t, std::size_t>> conditions;

    bool satisfied_by(std::span<const std::size_t> digits) const {
        for (auto [s, d] : conditions) {
            if (digits[s] != d) {
                return false;
            }
        }
        return true;
    }
};

/// How the device table maps onto a state's subsystems.
struct CouplingLayout {
    /// Parties the line-0 devices (and the postselection) act on.
    std::size_t line_parties = 0;
    /// Whether lines 1..n read dedicated copy subsystems appended after the line-0 parties.
    bool copies = true;
    /// Broadcast reading, used to translate a column's party digit into the copy's label.
    std::size_t copy_outcome = 0;
    AncillaVariant variant = AncillaVariant::standard;

    Dims expected_dims(const DeviceTable &table) const {
        Dims d = table.dims();
        if (copies) {
            d = concat(d, table.dims());
        }
        return d;
    }
};

inline std::vector<Device> devices_for(const DeviceTable &table, const CouplingLayout &layout) {
    const std::size_t n = table.parties();
    std::vector<Device> out;
    out.reserve(table.lines() * table.columns());
    for (std::size_t line = 0; line < table.lines(); ++line) {
        for (std::size_t i = 0; i < table.columns(); ++i) {
            const auto &bits = table.party_bits(i);
            Device d{line, i, {}};
            if (line == 0) {
                for (std::size_t p = 0; p < n; ++p) {
                    d.conditions.emplace_back(p, bits[p]);
                }
            } else {
                std::size_t p = line - 1;
                if (layout.copies) {
                    d.conditions.emplace_back(
                        n + p, copy_label(table.dims()[p], bits[p], layout.copy_outcome, layout.variant));
                } else {
                    d.conditions.emplace_back(p, bits[p]);
                }
            }
            out.push_back(std::move(d));
        }
    }
    return out;
}

struct Branch {
    std::size_t label;
    std::vector<std::uint8_t> shifts;  ///< 1 where the device's pointer was translated by g
};

/// Coupled system + pointers, before postselection.
class BranchState {
   public:
    BranchState(Dims dims, std::size_t line_parties, std::vector<Device> devices, std::vector<Branch> branches,
                ComplexMatrix weights)
        : dims_(std::move(dims)),
          line_parties_(line_parties),
          devices_(std::move(devices)),
          branches_(std::move(branches)),
          weights_(std::move(weights)) {}

    const Dims &dims() const noexcept { return dims_; }
    std::size_t line_parties() const noexcept { return line_parties_; }
    const std::vector<Device> &devices() const noexcept { return devices_; }
    const std::vector<Branch> &branches() const noexcept { return branches_; }
    /// weights()(a, b) is the coefficient of |label_a><label_b| in the system state.
    const ComplexMatrix &weights() const noexcept { return weights_; }

    /// System state with every pointer traced out before any translation (g = 0).
    DensityMatrix assemble() const {
        auto d = static_cast<Eigen::Index>(total_dim(dims_));
        ComplexMatrix m = ComplexMatrix::Zero(d, d);
        for (std::size_t a = 0; a < branches_.size(); ++a) {
            for (std::size_t b = 0; b < branches_.size(); ++b) {
                m(static_cast<Eigen::Index>(branches_[a].label), static_cast<Eigen::Index>(branches_[b].label)) =
                    weights_(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(b));
            }
        }
        return DensityMatrix::trusted(dims_, std::move(m));
    }

   private:
    Dims dims_;
    std::size_t line_parties_;
    std::vector<Device> devices_;
    std::vector<Branch> branches_;
    ComplexMatrix weights_;
};

/// Couples an explicit device list. Devices act on the state's computational
/// labels; the first `line_parties` subsystems are the ones later postselected.
inline BranchState couple(const DensityMatrix &state, std::vector<Device> devices, std::size_t line_parties,
                          const PointerConfig &cfg) {
    cfg.validate();
    const Dims &dims = state.dims();
    if (line_parties == 0 || line_parties > dims.size()) {
        throw Error("layout-mismatch", "line parties must be a nonempty prefix of the subsystems");
    }
    for (const auto &d : devices) {
        for (auto [s, digit] : d.conditions) {
            if (s >= dims.size() || digit >= dims[s]) {
                throw Error("layout-mismatch", "device condition outside the state's subsystems");
            }
        }
    }
    const auto &m = state.matrix();
    std::vector<std::size_t> support;
    for (Eigen::Index x = 0; x < m.rows(); ++x) {
        if (m.row(x).cwiseAbs().maxCoeff() > 0.0) {
            support.push_back(static_cast<std::size_t>(x));
        }
    }
    std::vector<Branch> branches;
    branches.reserve(support.size());
    for (std::size_t x : support) {
        auto digits = unravel(x, dims);
        Branch b{x, std::vector<std::uint8_t>(devices.size(), 0)};
        for (std::size_t d = 0; d < devices.size(); ++d) {
            b.shifts[d] = devices[d].satisfied_by(digits) ? 1 : 0;
        }
        branches.push_back(std::move(b));
    }
    auto s = static_cast<Eigen::Index>(support.size());
    ComplexMatrix weights(s, s);
    for (Eigen::Index a = 0; a < s; ++a) {
        for (Eigen::Index b = 0; b < s; ++b) {
            weights(a, b) = m(static_cast<Eigen::Index>(support[a]), static_cast<Eigen::Index>(support[b]));
        }
    }
    return BranchState(dims, line_parties, std::move(devices), std::move(branches), std::move(weights));
}

/// Couples every device of `table`; see CouplingLayout for the subsystem map.
inline BranchState couple_all(const DensityMatrix &state, const DeviceTable &table, const PointerConfig &cfg,
                              const CouplingLayout &layout) {
    if (state.dims() != layout.expected_dims(table)) {
        throw Error("layout-mismatch", "state subsystems do not match the device table layout");
    }
    return couple(state, devices_for(table, layout), table.parties(), cfg);
}

inline BranchState couple_all(const DensityMatrix &state, const DeviceTable &table, const PointerConfig &cfg) {
    CouplingLayout layout;
    layout.line_parties = table.parties();
    layout.copies = state.parties() == 2 * table.parties();
    return couple_all(state, table, cfg, layout);
}

/// Mean pointer shifts under one postselection, one entry per device.
struct DeviceReadings {
    std::vector<Device> devices;
    std::vector<double> delta_q;
    std::vector<double> delta_p;
    double postselection_probability = 0.0;

    /// Index of device (line, column) in the reading vectors.
    std::size_t index(std::size_t line, std::size_t column) const {
        for (std::size_t d = 0; d < devices.size(); ++d) {
            if (devices[d].line == line && devices[d].column == column) {
                return d;
            }
        }
        throw Error("bad-device", "no device at line " + std::to_string(line) + ", column " + std::to_string(column));
    }
    double q(std::size_t line, std::size_t column) const { return delta_q[index(line, column)]; }
    double p(std::size_t line, std::size_t column) const { return delta_p[index(line, column)]; }
};

namespace detail {

/// Flat index of the line-party part and of the remainder of a label.
inline std::pair<std::size_t, std::size_t> split_label(std::size_t label, std::size_t rest_dim) {
    return {label / rest_dim, label % rest_dim};
}

inline std::size_t rest_dim(const BranchState &bs) {
    std::size_t r = 1;
    for (std::size_t s = bs.line_parties(); s < bs.dims().size(); ++s) {
        r *= bs.dims()[s];
    }
    return r;
}

inline void require_postselection_layout(const BranchState &bs, const PureState &b) {
    Dims line(bs.dims().begin(), bs.dims().begin() + static_cast<std::ptrdiff_t>(bs.line_parties()));
    if (b.dims() != line) {
        throw Error("layout-mismatch", "postselection state must live on the line-0 parties");
    }
}

}  // namespace detail

/// Projects the line-0 parties onto `b`, traces the rest of the system, and
/// returns exact conditional pointer means.
///
/// Gaussian pointer rules, phi_x the initial packet translated by x:
///   <phi_a|phi_b>       = exp(-(a-b)^2 / (8 sigma^2))
///   <phi_a|q|phi_b>     = (a+b)/2 <phi_a|phi_b>
///   <phi_a|p|phi_b>     = i (a-b) / (4 sigma^2) <phi_a|phi_b>
inline DeviceReadings postselect_and_read(const BranchState &bs, const PureState &b, const PointerConfig &cfg) {
    cfg.validate();
    detail::require_postselection_layout(bs, b);
    const auto rest = detail::rest_dim(bs);
    const auto &branches = bs.branches();
    const auto &w = bs.weights();
    const std::size_t nd = bs.devices().size();
    const double g = cfg.g;
    const double decay = std::exp(-g * g / (8.0 * cfg.sigma * cfg.sigma));
    const double p_scale = g / (4.0 * cfg.sigma * cfg.sigma);

    std::vector<std::size_t> y(branches.size()), z(branches.size());
    for (std::size_t a = 0; a < branches.size(); ++a) {
        std::tie(y[a], z[a]) = detail::split_label(branches[a].label, rest);
    }

    double prob = 0.0;
    std::vector<double> q_acc(nd, 0.0), p_acc(nd, 0.0);
    for (std::size_t a = 0; a < branches.size(); ++a) {
        for (std::size_t c = 0; c < branches.size(); ++c) {
            if (z[a] != z[c]) {
                continue;
            }
            // ket branch a, bra branch c
            Complex coeff = std::conj(b[y[a]]) * w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) * b[y[c]];
            if (coeff == Complex(0.0)) {
                continue;
            }
            const auto &sa = branches[a].shifts;
            const auto &sc = branches[c].shifts;
            int mismatched = 0;
            for (std::size_t d = 0; d < nd; ++d) {
                mismatched += sa[d] != sc[d];
            }
            Complex e = coeff * std::pow(decay, mismatched);
            prob += e.real();
            for (std::size_t d = 0; d < nd; ++d) {
                if (sa[d] == 0 && sc[d] == 0) {
                    continue;
                }
                // tr(|phi_ga><phi_gc| X) = <phi_gc| X |phi_ga>, in units of g
                q_acc[d] += sa[d] && sc[d] ? e.real() : 0.5 * e.real();
                p_acc[d] += (e * Complex(0.0, static_cast<double>(sc[d]) - sa[d])).real();
            }
        }
    }
    if (!(prob >= tol::null_probability)) {
        throw Error("null-postselection", "postselection probability " + std::to_string(prob));
    }
    DeviceReadings out;
    out.devices = bs.devices();
    out.delta_q.resize(nd);
    out.delta_p.resize(nd);
    for (std::size_t d = 0; d < nd; ++d) {
        out.delta_q[d] = g * (q_acc[d] / prob);
        out.delta_p[d] = p_scale * (p_acc[d] / prob);
    }
    out.postselection_probability = prob;
    return out;
}

/// The weak-coupling limit of the readings: tr(P_b A_d rho) / tr(P_b rho)
/// evaluated on the branch representation, per device.
inline std::vector<Complex> limiting_weak_values(const BranchState &bs, const PureState &b) {
    detail::require_postselection_layout(bs, b);
    const auto rest = detail::rest_dim(bs);
    const auto &branches = bs.branches();
    const auto &w = bs.weights();
    const std::size_t nd = bs.devices().size();
    Complex prob = 0.0;
    std::vector<Complex> num(nd, 0.0);
    for (std::size_t a = 0; a < branches.size(); ++a) {
        auto [ya, za] = detail::split_label(branches[a].label, rest);
        for (std::size_t c = 0; c < branches.size(); ++c) {
            auto [yc, zc] = detail::split_label(branches[c].label, rest);
            if (za != zc) {
                continue;
            }
            Complex coeff = std::conj(b[ya]) * w(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(c)) * b[yc];
            prob += coeff;
            for (std::size_t d = 0; d < nd; ++d) {
                if (branches[a].shifts[d]) {
                    num[d] += coeff;
                }
            }
        }
    }
    if (!(prob.real() >= tol::null_probability)) {
        throw Error("null-postselection", "postselection probability " + std::to_string(prob.real()));
    }
    for (auto &v : num) {
        v /= prob.real();
    }
    return num;
}

/// Inverts the pointer calibration: Re W = dq / g, Im W = 2 sigma^2 dp / g.
inline Complex extract_weak_value(double delta_q, double delta_p, const PointerConfig &cfg) {
    cfg.validate();
    return {delta_q / cfg.g, 2.0 * cfg.sigma * cfg.sigma * delta_p / cfg.g};
}

}  // namespace wcorr

#endif  // WCORR_POINTER_HPP
