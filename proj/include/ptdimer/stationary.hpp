#pragma once

// Closed-form stationary states: physical spectra (real kappa and q only),
// analytically continued spectra (always four states), the imbalance quartic
// and the critical gain/loss values.

#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include "ptdimer/error.hpp"
#include "ptdimer/linalg.hpp"
#include "ptdimer/model.hpp"

namespace ptdimer {

namespace detail {

inline void require_nondegenerate(const ModelParams& p) {
    require_finite(p);
    if (p.v == 0.0 && p.gamma == 0.0 && p.c == 0.0)
        throw Error(ErrorKind::DegenerateModel, "v = gamma = c = 0: every state is stationary");
}

/// c^2 + gamma^2 - v^2, snapped to exactly zero when it is within a few ulps
/// of the operands (the boundary of the self-trapping region).
inline double self_trap_gap(const ModelParams& p) {
    const double r2 = p.c * p.c + p.gamma * p.gamma;
    const double v2 = p.v * p.v;
    const double gap = r2 - v2;
    if (std::abs(gap) <= 4.0 * std::numeric_limits<double>::epsilon() * (r2 + v2)) return 0.0;
    return gap;
}

/// v^2 - gamma^2 evaluated as a product to keep accuracy near |gamma| = |v|.
inline double linear_radicand(const ModelParams& p) { return (p.v - p.gamma) * (p.v + p.gamma); }

/// q of the kappa = 0 branch whose chemical potential is +sqrt(v^2 - gamma^2).
/// Solves e^{2iq} = (sqrt(v^2 - gamma^2) + i gamma) / v, which gives
/// sin 2q = gamma / v; real whenever |gamma| <= |v|.
inline cplx symmetric_q_plus(const ModelParams& p) {
    if (p.v == 0.0) return 0.0;  // only reached for gamma = 0: any q is stationary
    const double rad = linear_radicand(p);
    if (rad >= 0.0) {
        const double s = std::sqrt(rad);
        return 0.5 * std::atan2(p.gamma / p.v, s / p.v);
    }
    const cplx s = std::sqrt(cplx(rad));
    return -0.5 * kI * std::log((s + kI * p.gamma) / p.v);
}

/// q of both self-trapping states: cos 2q and sin 2q proportional to
/// sign(v) c and sign(v) gamma. Requires c^2 + gamma^2 > 0.
inline double self_trap_q(const ModelParams& p) {
    const double sv = p.v < 0.0 ? -1.0 : 1.0;
    return 0.5 * std::atan2(sv * p.gamma, sv * p.c);
}

inline std::vector<StationaryState> symmetric_pair(const ModelParams& p) {
    const cplx q = symmetric_q_plus(p);
    return {state_from_kappa_q(p, Branch::SymmetricPlus, 0.0, q),
            state_from_kappa_q(p, Branch::SymmetricMinus, 0.0, std::numbers::pi / 2.0 - q)};
}

inline std::vector<StationaryState> self_trap_pair(const ModelParams& p) {
    const double r2 = p.c * p.c + p.gamma * p.gamma;
    const cplx kappa = std::sqrt(cplx(self_trap_gap(p) / r2));
    const double q = self_trap_q(p);
    return {state_from_kappa_q(p, Branch::SelfTrapPlus, kappa, q),
            state_from_kappa_q(p, Branch::SelfTrapMinus, -kappa, q)};
}

} // namespace detail

/// Stationary states with real (kappa, q): the kappa = 0 pair when
/// |gamma| <= |v| and the self-trapping pair when c^2 + gamma^2 >= v^2.
inline Spectrum solve_physical(const ModelParams& p) {
    detail::require_nondegenerate(p);
    Spectrum out{p, {}, SpectrumMode::Physical};
    if (std::abs(p.gamma) <= std::abs(p.v)) {
        for (auto& s : detail::symmetric_pair(p)) out.states.push_back(s);
    }
    const double r2 = p.c * p.c + p.gamma * p.gamma;
    if (r2 > 0.0 && detail::self_trap_gap(p) >= 0.0) {
        for (auto& s : detail::self_trap_pair(p)) out.states.push_back(s);
    }
    for (const auto& s : out.states)
        if (!s.physical) throw Error(ErrorKind::InvalidArgument, "solve_physical produced a complex state");
    return out;
}

/// Analytic continuation: all four (kappa, q) of the closed-form solution set,
/// complex where necessary. Chemical potentials are
///   +-sqrt(v^2 - gamma^2)  and  c -+ i gamma kappa = c +- gamma sqrt(v^2/(c^2+gamma^2) - 1).
/// At c = gamma = 0 the self-trapping pair is replaced by its c -> 0 limit, a
/// copy of the linear pair, flagged non-physical.
inline Spectrum solve_continued(const ModelParams& p) {
    detail::require_nondegenerate(p);
    if (p.v == 0.0)
        throw Error(ErrorKind::DegenerateModel, "continued spectrum needs v != 0 (kappa = 0 branch undefined)");
    Spectrum out{p, detail::symmetric_pair(p), SpectrumMode::Continued};
    if (p.c == 0.0 && p.gamma == 0.0) {
        for (auto s : detail::symmetric_pair(p)) {
            s.branch = s.branch == Branch::SymmetricPlus ? Branch::SelfTrapPlus : Branch::SelfTrapMinus;
            s.physical = false;
            out.states.push_back(s);
        }
    } else {
        for (auto& s : detail::self_trap_pair(p)) out.states.push_back(s);
    }
    return out;
}

inline Spectrum solve(const ModelParams& p, SpectrumMode mode) {
    return mode == SpectrumMode::Physical ? solve_physical(p) : solve_continued(p);
}

/// Roots of (c^2 + gamma^2) kappa^4 + (v^2 - c^2 - gamma^2) kappa^2; the
/// quadratic v^2 kappa^2 when c = gamma = 0.
inline PolynomialRoots kappa_quartic(const ModelParams& p) {
    detail::require_nondegenerate(p);
    const double r2 = p.c * p.c + p.gamma * p.gamma;
    if (r2 == 0.0) {
        const std::vector<cplx> quad{p.v * p.v, 0.0, 0.0};
        return poly_roots(quad);
    }
    const std::vector<cplx> quartic{r2, 0.0, -detail::self_trap_gap(p), 0.0, 0.0};
    return poly_roots(quartic);
}

struct CriticalGammas {
    double gamma_pt = 0.0;                // |v|: exceptional point of the kappa = 0 pair
    std::optional<double> gamma_branch;   // sqrt(v^2 - c^2): onset of self-trapping
};

inline CriticalGammas critical_gammas(const ModelParams& p) {
    require_finite(p);
    CriticalGammas out;
    out.gamma_pt = std::abs(p.v);
    if (std::abs(p.c) <= std::abs(p.v)) out.gamma_branch = std::sqrt((p.v - p.c) * (p.v + p.c));
    return out;
}

/// Infinity norm of H(kappa) phi - mu phi. Physical states use the imbalance
/// of their amplitudes; continued states use their (complex) kappa.
inline double residual(const ModelParams& p, const StationaryState& s) {
    const cplx kappa = s.physical ? cplx(std::norm(s.phi1) - std::norm(s.phi2)) : s.kappa;
    const Vec<2> phi = s.phi();
    const Vec<2> h_phi = hamiltonian(p, kappa) * phi;
    return std::max(std::abs(h_phi[0] - s.mu * phi[0]), std::abs(h_phi[1] - s.mu * phi[1]));
}

} // namespace ptdimer
