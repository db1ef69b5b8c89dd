#pragma once

#include <algorithm>
#include <array>
#include <complex>
#include <random>
#include <vector>

#include "ptdimer/linalg.hpp"

namespace testsupport {

using ptdimer::cplx;

/// Max distance after greedy pairing; an independent re-implementation so
/// tests do not rely on the library's matcher.
template <class A, class B>
double multiset_distance(const A& a, const B& b) {
    std::vector<cplx> rest(b.begin(), b.end());
    double worst = 0.0;
    for (const cplx& x : a) {
        auto it = std::min_element(rest.begin(), rest.end(),
                                   [&](cplx l, cplx r) { return std::abs(l - x) < std::abs(r - x); });
        worst = std::max(worst, std::abs(*it - x));
        rest.erase(it);
    }
    return worst;
}

inline std::mt19937_64& rng() {
    static std::mt19937_64 gen(20240611);
    return gen;
}

inline double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng()); }

template <std::size_t N>
ptdimer::Matrix<N> random_matrix(bool real_only = false) {
    ptdimer::Matrix<N> m;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) m(i, j) = cplx(uniform(-1, 1), real_only ? 0.0 : uniform(-1, 1));
    return m;
}

/// Inverse by solving against unit vectors with the library LU.
template <std::size_t N>
ptdimer::Matrix<N> inverse(const ptdimer::Matrix<N>& m) {
    const ptdimer::detail::Lu<N> lu(m);
    ptdimer::Matrix<N> out;
    for (std::size_t j = 0; j < N; ++j) {
        ptdimer::Vec<N> e{};
        e[j] = 1.0;
        const auto col = lu.solve(e);
        for (std::size_t i = 0; i < N; ++i) out(i, j) = col[i];
    }
    return out;
}

} // namespace testsupport
