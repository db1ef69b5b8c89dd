#pragma once

// Small dense complex linear algebra: fixed-size matrices, closed-form 2x2
// eigenpairs, characteristic polynomials, Durand-Kerner root finding and the
// 4x4 eigenvalue route built from them.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ptdimer/error.hpp"

namespace ptdimer {

using cplx = std::complex<double>;

inline constexpr cplx kI{0.0, 1.0};

template <std::size_t N>
using Vec = std::array<cplx, N>;

inline bool is_finite(cplx z) { return std::isfinite(z.real()) && std::isfinite(z.imag()); }

template <std::size_t N>
class Matrix {
public:
    static constexpr std::size_t dim = N;

    Matrix() = default;

    /// Row-major construction: Matrix<2>{{a, b}, {c, d}}.
    Matrix(std::initializer_list<std::initializer_list<cplx>> rows) {
        if (rows.size() != N) throw Error(ErrorKind::InvalidArgument, "matrix row count mismatch");
        std::size_t r = 0;
        for (const auto& row : rows) {
            if (row.size() != N) throw Error(ErrorKind::InvalidArgument, "matrix column count mismatch");
            std::size_t c = 0;
            for (const auto& x : row) a_[r * N + c++] = x;
            ++r;
        }
    }

    static Matrix identity() {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = 1.0;
        return m;
    }

    static Matrix diagonal(const Vec<N>& d) {
        Matrix m;
        for (std::size_t i = 0; i < N; ++i) m(i, i) = d[i];
        return m;
    }

    cplx& operator()(std::size_t r, std::size_t c) { return a_[r * N + c]; }
    const cplx& operator()(std::size_t r, std::size_t c) const { return a_[r * N + c]; }

    std::span<const cplx, N * N> data() const { return a_; }

    Matrix& operator+=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) a_[i] += o.a_[i];
        return *this;
    }
    Matrix& operator-=(const Matrix& o) {
        for (std::size_t i = 0; i < N * N; ++i) a_[i] -= o.a_[i];
        return *this;
    }
    Matrix& operator*=(cplx s) {
        for (auto& x : a_) x *= s;
        return *this;
    }

    friend Matrix operator+(Matrix l, const Matrix& r) { return l += r; }
    friend Matrix operator-(Matrix l, const Matrix& r) { return l -= r; }
    friend Matrix operator-(Matrix m) { return m *= -1.0; }
    friend Matrix operator*(Matrix m, cplx s) { return m *= s; }
    friend Matrix operator*(cplx s, Matrix m) { return m *= s; }

    friend Matrix operator*(const Matrix& l, const Matrix& r) {
        Matrix out;
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t k = 0; k < N; ++k) {
                const cplx lik = l(i, k);
                for (std::size_t j = 0; j < N; ++j) out(i, j) += lik * r(k, j);
            }
        return out;
    }

    friend Vec<N> operator*(const Matrix& m, const Vec<N>& x) {
        Vec<N> y{};
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t j = 0; j < N; ++j) y[i] += m(i, j) * x[j];
        return y;
    }

private:
    std::array<cplx, N * N> a_{};
};

template <std::size_t N>
Matrix<N> conj(const Matrix<N>& m) {
    Matrix<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out(i, j) = std::conj(m(i, j));
    return out;
}

template <std::size_t N>
Matrix<N> transpose(const Matrix<N>& m) {
    Matrix<N> out;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) out(i, j) = m(j, i);
    return out;
}

template <std::size_t N>
Matrix<N> adjoint(const Matrix<N>& m) {
    return conj(transpose(m));
}

template <std::size_t N>
cplx trace(const Matrix<N>& m) {
    cplx t = 0.0;
    for (std::size_t i = 0; i < N; ++i) t += m(i, i);
    return t;
}

/// Maximum absolute row sum.
template <std::size_t N>
double norm_inf(const Matrix<N>& m) {
    double best = 0.0;
    for (std::size_t i = 0; i < N; ++i) {
        double s = 0.0;
        for (std::size_t j = 0; j < N; ++j) s += std::abs(m(i, j));
        best = std::max(best, s);
    }
    return best;
}

/// Largest entrywise modulus of the difference.
template <std::size_t N>
double max_abs_diff(const Matrix<N>& a, const Matrix<N>& b) {
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j) d = std::max(d, std::abs(a(i, j) - b(i, j)));
    return d;
}

template <std::size_t N>
bool is_finite(const Matrix<N>& m) {
    return std::all_of(m.data().begin(), m.data().end(), [](cplx z) { return is_finite(z); });
}

template <std::size_t N>
double norm_inf(const Vec<N>& x) {
    double best = 0.0;
    for (const auto& z : x) best = std::max(best, std::abs(z));
    return best;
}

template <std::size_t N>
double norm2(const Vec<N>& x) {
    double s = 0.0;
    for (const auto& z : x) s += std::norm(z);
    return std::sqrt(s);
}

template <std::size_t N>
Vec<N> scaled(Vec<N> x, cplx s) {
    for (auto& z : x) z *= s;
    return x;
}

template <std::size_t N>
cplx dot(const Vec<N>& x, const Vec<N>& y) {  // conjugate-linear in x
    cplx s = 0.0;
    for (std::size_t i = 0; i < N; ++i) s += std::conj(x[i]) * y[i];
    return s;
}

/// Unit Euclidean length with the first non-negligible component real-positive.
template <std::size_t N>
Vec<N> normalize_phase_first(Vec<N> x) {
    const double n = norm2(x);
    if (n == 0.0) return x;
    for (auto& z : x) z /= n;
    for (const auto& z : x) {
        if (std::abs(z) > 1e-14) {
            const cplx ph = std::abs(z) / z;
            for (auto& w : x) w *= ph;
            break;
        }
    }
    return x;
}

/// Unit Euclidean length with component k real-positive.
template <std::size_t N>
Vec<N> normalize_phase_at(Vec<N> x, std::size_t k) {
    const double n = norm2(x);
    if (n == 0.0 || x[k] == cplx{0.0}) return x;
    const cplx ph = std::abs(x[k]) / (x[k] * n);
    for (auto& z : x) z *= ph;
    return x;
}

template <std::size_t N>
std::size_t largest_component(const Vec<N>& x) {
    std::size_t k = 0;
    for (std::size_t i = 1; i < N; ++i)
        if (std::abs(x[i]) > std::abs(x[k])) k = i;
    return k;
}

/// Unit Euclidean length with the largest-modulus component real-positive.
template <std::size_t N>
Vec<N> normalize_phase_largest(Vec<N> x) {
    return normalize_phase_at(x, largest_component(x));
}

/// Distance between the rays of x and ref: both normalized and rotated so
/// that the component where ref is largest is real-positive (the pivot is
/// taken from ref alone so near-ties cannot pick different components).
template <std::size_t N>
double phase_aligned_distance(const Vec<N>& x, const Vec<N>& ref) {
    const std::size_t k = largest_component(ref);
    const Vec<N> a = normalize_phase_at(x, k);
    const Vec<N> b = normalize_phase_at(ref, k);
    double d = 0.0;
    for (std::size_t i = 0; i < N; ++i) d = std::max(d, std::abs(a[i] - b[i]));
    return d;
}

inline Matrix<4> block_diag(const Matrix<2>& upper, const Matrix<2>& lower) {
    Matrix<4> m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            m(i, j) = upper(i, j);
            m(i + 2, j + 2) = lower(i, j);
        }
    return m;
}

inline Matrix<4> from_blocks(const Matrix<2>& b11, const Matrix<2>& b12, const Matrix<2>& b21,
                             const Matrix<2>& b22) {
    Matrix<4> m;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) {
            m(i, j) = b11(i, j);
            m(i, j + 2) = b12(i, j);
            m(i + 2, j) = b21(i, j);
            m(i + 2, j + 2) = b22(i, j);
        }
    return m;
}

/// Extract the 2x2 block (bi, bj), bi/bj in {0, 1}.
inline Matrix<2> block(const Matrix<4>& m, std::size_t bi, std::size_t bj) {
    Matrix<2> b;
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j) b(i, j) = m(2 * bi + i, 2 * bj + j);
    return b;
}

namespace detail {

/// In-place LU with partial pivoting. Exactly zero pivots are replaced by a
/// tiny multiple of the matrix scale so shifted solves stay finite.
template <std::size_t N>
struct Lu {
    Matrix<N> lu;
    std::array<std::size_t, N> perm{};
    int sign = 1;

    explicit Lu(const Matrix<N>& m) : lu(m) {
        const double floor = std::numeric_limits<double>::epsilon() * std::max(norm_inf(m), 1e-300);
        std::iota(perm.begin(), perm.end(), std::size_t{0});
        for (std::size_t k = 0; k < N; ++k) {
            std::size_t p = k;
            for (std::size_t i = k + 1; i < N; ++i)
                if (std::abs(lu(i, k)) > std::abs(lu(p, k))) p = i;
            if (p != k) {
                for (std::size_t j = 0; j < N; ++j) std::swap(lu(k, j), lu(p, j));
                std::swap(perm[k], perm[p]);
                sign = -sign;
            }
            if (std::abs(lu(k, k)) < floor) lu(k, k) = floor;
            for (std::size_t i = k + 1; i < N; ++i) {
                lu(i, k) /= lu(k, k);
                for (std::size_t j = k + 1; j < N; ++j) lu(i, j) -= lu(i, k) * lu(k, j);
            }
        }
    }

    Vec<N> solve(const Vec<N>& b) const {
        Vec<N> y{};
        for (std::size_t i = 0; i < N; ++i) {
            cplx s = b[perm[i]];
            for (std::size_t j = 0; j < i; ++j) s -= lu(i, j) * y[j];
            y[i] = s;
        }
        for (std::size_t i = N; i-- > 0;) {
            cplx s = y[i];
            for (std::size_t j = i + 1; j < N; ++j) s -= lu(i, j) * y[j];
            y[i] = s / lu(i, i);
        }
        return y;
    }
};

template <std::size_t N>
constexpr Vec<N> start_vector() {
    // Generic enough not to be orthogonal to any eigenvector met in practice.
    constexpr std::array<cplx, 4> seed{cplx{1.0, 0.0}, cplx{0.71, 0.23}, cplx{0.37, -0.61},
                                       cplx{-0.53, 0.41}};
    Vec<N> x{};
    for (std::size_t i = 0; i < N; ++i) x[i] = seed[i % seed.size()];
    return x;
}

} // namespace detail

template <std::size_t N>
cplx det(const Matrix<N>& m) {
    if constexpr (N == 1) {
        return m(0, 0);
    } else if constexpr (N == 2) {
        return m(0, 0) * m(1, 1) - m(0, 1) * m(1, 0);
    } else {
        // Laplace expansion along the first row; exact zeros stay exact.
        cplx d = 0.0;
        for (std::size_t c = 0; c < N; ++c) {
            Matrix<N - 1> minor;
            for (std::size_t i = 1; i < N; ++i) {
                std::size_t cc = 0;
                for (std::size_t j = 0; j < N; ++j) {
                    if (j == c) continue;
                    minor(i - 1, cc++) = m(i, j);
                }
            }
            const double s = (c % 2 == 0) ? 1.0 : -1.0;
            d += s * m(0, c) * det(minor);
        }
        return d;
    }
}

// ---------------------------------------------------------------------------
// 2x2 eigenpairs
// ---------------------------------------------------------------------------

struct Eig2 {
    std::array<cplx, 2> values{};
    std::array<Vec<2>, 2> vectors{};
    /// Repeated eigenvalue with a single eigenvector (exceptional point).
    bool defective = false;
};

inline Vec<2> eigenvector2(const Matrix<2>& m, cplx lambda) {
    const Vec<2> from_row0{m(0, 1), lambda - m(0, 0)};
    const Vec<2> from_row1{lambda - m(1, 1), m(1, 0)};
    const Vec<2>& x = norm2(from_row0) >= norm2(from_row1) ? from_row0 : from_row1;
    return normalize_phase_first(x);
}

inline Eig2 eig2(const Matrix<2>& m) {
    if (!is_finite(m)) throw Error(ErrorKind::NonFinite, "eig2: non-finite matrix entry");
    const cplx half_tr = 0.5 * (m(0, 0) + m(1, 1));
    const cplx half_diff = 0.5 * (m(0, 0) - m(1, 1));
    const cplx root = std::sqrt(half_diff * half_diff + m(0, 1) * m(1, 0));

    Eig2 out;
    out.values = {half_tr + root, half_tr - root};

    const double scale = 1.0 + norm_inf(m);
    const bool repeated = 2.0 * std::abs(root) <= 1e-12 * scale;
    const bool offdiag = std::abs(m(0, 1)) > 1e-14 * scale || std::abs(m(1, 0)) > 1e-14 * scale ||
                         std::abs(half_diff) > 1e-14 * scale;
    if (repeated && !offdiag) {
        // Scalar matrix: every vector is an eigenvector.
        out.values = {half_tr, half_tr};
        out.vectors = {Vec<2>{1.0, 0.0}, Vec<2>{0.0, 1.0}};
        return out;
    }
    if (repeated) {
        out.defective = true;
        out.values = {half_tr, half_tr};
        const Vec<2> x = eigenvector2(m, half_tr);
        out.vectors = {x, x};
        return out;
    }
    out.vectors = {eigenvector2(m, out.values[0]), eigenvector2(m, out.values[1])};
    return out;
}

// ---------------------------------------------------------------------------
// Characteristic polynomial and polynomial roots
// ---------------------------------------------------------------------------

/// Monic characteristic polynomial det(lambda I - m), leading coefficient
/// first, via Faddeev-LeVerrier.
template <std::size_t N>
std::vector<cplx> char_poly(const Matrix<N>& m) {
    std::vector<cplx> coeffs(N + 1);
    coeffs[0] = 1.0;
    Matrix<N> mk;  // M_0 = 0
    for (std::size_t k = 1; k <= N; ++k) {
        mk = m * mk + coeffs[k - 1] * Matrix<N>::identity();
        coeffs[k] = -trace(m * mk) / static_cast<double>(k);
    }
    return coeffs;
}

/// Horner evaluation, leading coefficient first.
inline cplx poly_eval(std::span<const cplx> coeffs, cplx z) {
    cplx acc = 0.0;
    for (const auto& a : coeffs) acc = acc * z + a;
    return acc;
}

/// Rounding-error bound of poly_eval at z.
inline double poly_eval_bound(std::span<const cplx> coeffs, cplx z) {
    const double az = std::abs(z);
    double acc = 0.0;
    for (const auto& a : coeffs) acc = acc * az + std::abs(a);
    return 4.0 * static_cast<double>(coeffs.size()) * std::numeric_limits<double>::epsilon() * acc;
}

struct PolynomialRoots {
    std::vector<cplx> coefficients;
    std::vector<cplx> roots;
    std::vector<double> residuals;
    int iterations = 0;

    double max_residual() const {
        return residuals.empty() ? 0.0 : *std::max_element(residuals.begin(), residuals.end());
    }
};

inline constexpr int kRootMaxSweeps = 500;
inline constexpr double kRootUpdateTol = 1e-14;

/// All complex roots by Durand-Kerner simultaneous iteration, seeded with the
/// powers of 0.4+0.9i. Stops when every update is below 1e-14 (relative to
/// max(1, |root|)) or every residual is down to the rounding level of the
/// evaluation, where further updates are noise.
inline PolynomialRoots poly_roots(std::span<const cplx> coefficients) {
    if (coefficients.size() < 2 || coefficients.size() > 5)
        throw Error(ErrorKind::InvalidArgument, "poly_roots: degree must be 1..4");
    if (coefficients.front() == cplx{0.0})
        throw Error(ErrorKind::InvalidArgument, "poly_roots: leading coefficient is zero");
    for (const auto& a : coefficients)
        if (!is_finite(a)) throw Error(ErrorKind::NonFinite, "poly_roots: non-finite coefficient");

    PolynomialRoots out;
    out.coefficients.assign(coefficients.begin(), coefficients.end());

    std::vector<cplx> monic(coefficients.begin(), coefficients.end());
    const cplx lead = monic.front();
    for (auto& a : monic) a /= lead;

    const std::size_t n = monic.size() - 1;
    std::vector<cplx> z(n);
    const cplx seed{0.4, 0.9};
    cplx p = 1.0;
    for (std::size_t i = 0; i < n; ++i) {
        z[i] = p;
        p *= seed;
    }

    bool converged = false;
    int sweep = 0;
    while (sweep < kRootMaxSweeps) {
        ++sweep;
        double max_update = 0.0;
        bool at_noise_floor = true;
        for (std::size_t i = 0; i < n; ++i) {
            cplx denom = 1.0;
            for (std::size_t j = 0; j < n; ++j)
                if (j != i) denom *= z[i] - z[j];
            if (denom == cplx{0.0}) denom = std::numeric_limits<double>::epsilon();
            const cplx pz = poly_eval(monic, z[i]);
            if (std::abs(pz) > poly_eval_bound(monic, z[i])) at_noise_floor = false;
            const cplx dz = pz / denom;
            z[i] -= dz;
            max_update = std::max(max_update, std::abs(dz) / std::max(1.0, std::abs(z[i])));
        }
        if (!std::isfinite(max_update))
            throw Error(ErrorKind::IterationLimit, "poly_roots: iteration diverged");
        if (max_update < kRootUpdateTol || at_noise_floor) {
            converged = true;
            break;
        }
    }
    if (!converged)
        throw Error(ErrorKind::IterationLimit,
                    "poly_roots: no convergence after " + std::to_string(kRootMaxSweeps) + " sweeps");

    out.iterations = sweep;
    out.roots = std::move(z);
    out.residuals.reserve(n);
    for (const auto& r : out.roots) out.residuals.push_back(std::abs(poly_eval(coefficients, r)));
    return out;
}

// ---------------------------------------------------------------------------
// Eigenvectors and 4x4 eigenvalues
// ---------------------------------------------------------------------------

/// Eigenvector for an (approximate) eigenvalue by shifted inverse iteration,
/// unit length, largest component real-positive.
template <std::size_t N>
Vec<N> eigenvector(const Matrix<N>& m, cplx lambda, int sweeps = 3) {
    const detail::Lu<N> lu(m - lambda * Matrix<N>::identity());
    Vec<N> x = detail::start_vector<N>();
    for (int s = 0; s < sweeps; ++s) {
        x = lu.solve(x);
        const double n = norm2(x);
        if (!(n > 0.0) || !std::isfinite(n)) throw Error(ErrorKind::NonFinite, "eigenvector: breakdown");
        for (auto& z : x) z /= n;
    }
    return normalize_phase_largest(x);
}

namespace detail {

/// Polish a root of the characteristic polynomial against the matrix itself
/// (inverse iteration + Rayleigh quotient). Recovers full accuracy for
/// semisimple repeated eigenvalues, where polynomial roots of multiplicity k
/// only reach eps^(1/k). The polished value is kept only when its eigenpair
/// residual is at rounding level and it stays within the worst-case root
/// error (eps^(1/4) scale), so defective eigenvalues are left untouched.
template <std::size_t N>
cplx polish_eigenvalue(const Matrix<N>& m, cplx lambda) {
    const double scale = 1.0 + norm_inf(m);
    const Vec<N> x = eigenvector(m, lambda);
    const cplx rq = dot(x, m * x) / dot(x, x);
    if (!is_finite(rq)) return lambda;
    if (std::abs(rq - lambda) > 2e-4 * scale) return lambda;
    const Vec<N> mx = m * x;
    double res = 0.0;
    for (std::size_t i = 0; i < N; ++i) res = std::max(res, std::abs(mx[i] - rq * x[i]));
    if (res > 1e-12 * scale) return lambda;
    return rq;
}

} // namespace detail

/// Eigenvalues of a 4x4 matrix: Faddeev-LeVerrier characteristic polynomial,
/// Durand-Kerner roots, then a matrix-level polish of each root.
inline std::array<cplx, 4> eig4(const Matrix<4>& m) {
    if (!is_finite(m)) throw Error(ErrorKind::NonFinite, "eig4: non-finite matrix entry");
    const auto coeffs = char_poly(m);
    const auto pr = poly_roots(coeffs);
    std::array<cplx, 4> out{};
    for (std::size_t i = 0; i < 4; ++i) out[i] = detail::polish_eigenvalue(m, pr.roots[i]);
    return out;
}

// ---------------------------------------------------------------------------
// Multiset matching
// ---------------------------------------------------------------------------

struct Pairing {
    std::vector<std::pair<std::size_t, std::size_t>> pairs;  // (index in a, index in b)
    std::vector<double> distances;
    double max_distance = 0.0;
};

/// Greedy minimal-distance pairing of two equally sized multisets.
inline Pairing match_greedy(std::span<const cplx> a, std::span<const cplx> b) {
    if (a.size() != b.size()) throw Error(ErrorKind::InvalidArgument, "match_greedy: size mismatch");
    const std::size_t n = a.size();
    std::vector<bool> used_a(n, false), used_b(n, false);
    Pairing out;
    for (std::size_t round = 0; round < n; ++round) {
        double best = std::numeric_limits<double>::infinity();
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (used_a[i]) continue;
            for (std::size_t j = 0; j < n; ++j) {
                if (used_b[j]) continue;
                const double d = std::abs(a[i] - b[j]);
                if (d < best) {
                    best = d;
                    bi = i;
                    bj = j;
                }
            }
        }
        used_a[bi] = used_b[bj] = true;
        out.pairs.emplace_back(bi, bj);
        out.distances.push_back(best);
        out.max_distance = std::max(out.max_distance, best);
    }
    return out;
}

} // namespace ptdimer
