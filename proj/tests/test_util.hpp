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

#ifndef WCORR_TEST_UTIL_HPP
#define WCORR_TEST_UTIL_HPP

#include <cmath>
#include <string>

#include "wcorr/error.hpp"
#include "wcorr/qcore.hpp"

namespace wcorr::test {

inline PureState ket(const std::string &bits) {
    Dims dims(bits.size(), 2);
    std::size_t index = 0;
    for (char c : bits) {
        index = 2 * index + static_cast<std::size_t>(c - '0');
    }
    return PureState::basis(dims, index);
}

inline PureState ghz(std::size_t n = 3) {
    Dims dims(n, 2);
    ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(total_dim(dims)));
    v(0) = v(v.size() - 1) = 1.0 / std::sqrt(2.0);
    return PureState(dims, v);
}

inline DensityMatrix ghz_dm(std::size_t n = 3) { return DensityMatrix::from_pure(ghz(n)); }

/// (|000><000| + |111><111|) / 2.
inline DensityMatrix classical_ghz_dm() {
    ComplexMatrix m = ComplexMatrix::Zero(8, 8);
    m(0, 0) = m(7, 7) = 0.5;
    return DensityMatrix({2, 2, 2}, m);
}

inline DensityMatrix random_product_state(std::size_t parties, std::uint64_t seed) {
    DensityMatrix out = random_density_matrix({2}, seed * 131 + 1);
    for (std::size_t p = 1; p < parties; ++p) {
        out = tensor_product(out, random_density_matrix({2}, seed * 131 + 1 + p));
    }
    return out;
}

inline double max_abs_diff(const ComplexMatrix &a, const ComplexMatrix &b) {
    return (a - b).cwiseAbs().maxCoeff();
}

template <typename F>
std::string error_code_of(F &&f) {
    try {
        f();
    } catch (const Error &e) {
        return e.code();
    }
    return "<no error>";
}

}  // namespace wcorr::test

#endif  // WCORR_TEST_UTIL_HPP
