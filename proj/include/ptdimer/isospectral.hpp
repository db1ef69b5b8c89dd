#pragma once

// The block-diagonal linear 4x4 matrix whose spectrum equals the continued
// nonlinear spectrum, plus the checks built on it.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <vector>

#include "ptdimer/error.hpp"
#include "ptdimer/linalg.hpp"
#include "ptdimer/model.hpp"
#include "ptdimer/stationary.hpp"

namespace ptdimer {

/// Upper block: the linear two-level Hamiltonian. Lower block:
/// [[c - i gamma, i gamma v/(c + i gamma)], [-i gamma v/(c - i gamma), c + i gamma]].
inline Matrix<4> build_M(const ModelParams& p) {
    require_finite(p);
    if (p.c == 0.0 && p.gamma == 0.0)
        throw Error(ErrorKind::SingularDenominator, "build_M: c = gamma = 0 makes c +- i gamma vanish");
    const cplx g = kI * p.gamma;
    const Matrix<2> upper{{-g, p.v}, {p.v, g}};
    const Matrix<2> lower{{p.c - g, g * p.v / (p.c + g)}, {-g * p.v / (p.c - g), p.c + g}};
    return block_diag(upper, lower);
}

inline std::array<cplx, 4> mus_of(const Spectrum& s) {
    if (s.states.size() != 4) throw Error(ErrorKind::InvalidArgument, "expected four states");
    return {s.states[0].mu, s.states[1].mu, s.states[2].mu, s.states[3].mu};
}

struct IsospectralCheck {
    double max_distance = 0.0;
    bool pass = false;
};

/// Greedy-paired distance between eig4(M) and the continued chemical potentials.
inline IsospectralCheck check_isospectral(const ModelParams& p, double tol) {
    const auto ev = eig4(build_M(p));
    const auto mus = mus_of(solve_continued(p));
    const Pairing pr = match_greedy(ev, mus);
    return {pr.max_distance, pr.max_distance <= tol};
}

enum class TMode { Conjugation, HermitianConjugation };

/// Tests P T(m) P == m entrywise (<= 1e-14) with P the swap matrix and T
/// either complex conjugation or Hermitian conjugation.
inline bool pt_check(const Matrix<2>& m, TMode mode) {
    const Matrix<2> swap{{0.0, 1.0}, {1.0, 0.0}};
    const Matrix<2> t = mode == TMode::Conjugation ? conj(m) : adjoint(m);
    return max_abs_diff(swap * t * swap, m) <= 1e-14;
}

struct EmbeddingReport {
    double max_vanishing = 0.0;  // largest modulus among components that must vanish
    double max_deviation = 0.0;  // phase-aligned distance to the nonlinear eigenstate
};

inline constexpr double kDegenerateGap = 1e-8;

/// Checks that every eigenvector of M is a continued nonlinear eigenstate
/// padded with two zeros (upper block for the kappa = 0 pair, lower block for
/// the self-trapping pair).
inline EmbeddingReport eigenvector_embedding(const ModelParams& p) {
    const Matrix<4> m = build_M(p);
    const auto ev = eig4(m);
    for (std::size_t i = 0; i < 4; ++i)
        for (std::size_t j = i + 1; j < 4; ++j)
            if (std::abs(ev[i] - ev[j]) < kDegenerateGap)
                throw Error(ErrorKind::DegenerateSpectrum, "eigenvalues of M closer than 1e-8");

    const Spectrum cont = solve_continued(p);
    const auto mus = mus_of(cont);
    const Pairing pr = match_greedy(ev, mus);

    EmbeddingReport rep;
    for (const auto& [i, j] : pr.pairs) {
        const Vec<4> x = eigenvector(m, ev[i]);
        const StationaryState& s = cont.states[j];
        const std::size_t lo = is_symmetric(s.branch) ? 0 : 2;
        const std::size_t off = is_symmetric(s.branch) ? 2 : 0;
        rep.max_vanishing = std::max({rep.max_vanishing, std::abs(x[off]), std::abs(x[off + 1])});

        const double dev = phase_aligned_distance(Vec<2>{x[lo], x[lo + 1]}, s.phi());
        rep.max_deviation = std::max(rep.max_deviation, dev);
    }
    return rep;
}

struct LinearVerdict {
    Branch branch;
    cplx eigenvalue;
    Verdict verdict;
};

inline constexpr double kImagTieTol = 1e-12;

/// Projective stability under i psi' = M psi: with equal imaginary parts every
/// eigenstate is stable; otherwise only the eigenstate(s) of the single
/// eigenvalue with the largest imaginary part (the global sink) are.
inline std::vector<LinearVerdict> linear_stability(const ModelParams& p) {
    build_M(p);  // precondition check
    const Spectrum cont = solve_continued(p);

    double max_im = -std::numeric_limits<double>::infinity();
    double min_im = std::numeric_limits<double>::infinity();
    for (const auto& s : cont.states) {
        max_im = std::max(max_im, s.mu.imag());
        min_im = std::min(min_im, s.mu.imag());
    }

    std::vector<LinearVerdict> out;
    if (max_im - min_im <= kImagTieTol) {
        for (const auto& s : cont.states) out.push_back({s.branch, s.mu, Verdict::Stable});
        return out;
    }

    const StationaryState* top = nullptr;
    for (const auto& s : cont.states) {
        if (max_im - s.mu.imag() > kImagTieTol) continue;
        if (top && std::abs(top->mu - s.mu) > kImagTieTol)
            throw Error(ErrorKind::TiedMaximum, "two distinct eigenvalues share the largest imaginary part");
        top = &s;
    }
    for (const auto& s : cont.states) {
        const bool sink = std::abs(s.mu - top->mu) <= kImagTieTol;
        out.push_back({s.branch, s.mu, sink ? Verdict::Stable : Verdict::Unstable});
    }
    return out;
}

} // namespace ptdimer
