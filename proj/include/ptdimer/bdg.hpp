#pragma once

// Bogoliubov-de Gennes stability of physical stationary states.

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include "ptdimer/error.hpp"
#include "ptdimer/linalg.hpp"
#include "ptdimer/model.hpp"

namespace ptdimer {

/// Frequencies with |omega| below this are treated as the two zero modes
/// (global phase and norm direction).
inline constexpr double kZeroModeTol = 1e-8;
/// Default threshold on Im(omega) for an Unstable verdict.
inline constexpr double kStabilityTol = 1e-9;

struct BdgMatrix {
    Matrix<4> b;
    StationaryState state;
    ModelParams params;
};

/// Projector orthogonal to the stationary amplitudes, Q = 1 - phi phi^dagger.
inline Matrix<2> build_Q(const StationaryState& s) {
    if (!s.physical) throw Error(ErrorKind::NonPhysicalState, "projector requires a physical state");
    const cplx p1 = s.phi1, p2 = s.phi2;
    return Matrix<2>{{1.0 - std::norm(p1), -p1 * std::conj(p2)}, {-std::conj(p1) * p2, 1.0 - std::norm(p2)}};
}

/// Stability matrix acting on (delta_phi_minus, delta_phi_plus):
///
///   [ H0 - mu + c Q A Q          c Q D Q*            ]
///   [ -c Q* D* Q                 -H0* + mu* - c Q* A* Q* ]
///
/// with A = [[|phi1|^2, -phi1 phi2*], [-phi1* phi2, |phi2|^2]] and
/// D = [[phi1^2, -phi1 phi2], [-phi1 phi2, phi2^2]].
inline BdgMatrix build_B(const ModelParams& p, const StationaryState& s) {
    require_finite(p);
    const Matrix<2> q = build_Q(s);
    const Matrix<2> qc = conj(q);
    const cplx p1 = s.phi1, p2 = s.phi2;
    const cplx c1 = std::conj(p1), c2 = std::conj(p2);

    const Matrix<2> h0 = hamiltonian(p, std::norm(p1) - std::norm(p2));
    const Matrix<2> id = Matrix<2>::identity();

    const Matrix<2> a{{std::norm(p1), -p1 * c2}, {-c1 * p2, std::norm(p2)}};
    const Matrix<2> d{{p1 * p1, -p1 * p2}, {-p1 * p2, p2 * p2}};

    const Matrix<2> b11 = h0 - s.mu * id + p.c * (q * a * q);
    const Matrix<2> b12 = p.c * (q * d * qc);
    const Matrix<2> b21 = -p.c * (qc * conj(d) * q);
    const Matrix<2> b22 = -conj(h0) + std::conj(s.mu) * id - p.c * (qc * conj(a) * qc);

    return {from_blocks(b11, b12, b21, b22), s, p};
}

inline StabilityReport stability(const ModelParams& p, const StationaryState& s, double tol = kStabilityTol) {
    const BdgMatrix bdg = build_B(p, s);
    StabilityReport r;
    r.state = s;
    r.omegas = eig4(bdg.b);

    double max_nonzero = -std::numeric_limits<double>::infinity();
    double max_all = -std::numeric_limits<double>::infinity();
    for (const auto& w : r.omegas) {
        max_all = std::max(max_all, w.imag());
        if (std::abs(w) >= kZeroModeTol) max_nonzero = std::max(max_nonzero, w.imag());
    }
    r.max_im = std::isfinite(max_nonzero) ? max_nonzero : max_all;
    r.verdict = r.max_im > tol ? Verdict::Unstable : Verdict::Stable;
    return r;
}

/// Roots of omega^4 + 4 (gamma^2 - v^2 + sign c sqrt(v^2 - gamma^2)) omega^2 = 0
/// for the kappa = 0 state with mu = sign sqrt(v^2 - gamma^2).
inline std::array<cplx, 4> analytic_omega_symmetric(const ModelParams& p, int sign) {
    require_finite(p);
    if (std::abs(p.gamma) > std::abs(p.v))
        throw Error(ErrorKind::BranchAbsent, "kappa = 0 states do not exist for |gamma| > |v|");
    const double sg = sign >= 0 ? 1.0 : -1.0;
    const double s = std::sqrt((p.v - p.gamma) * (p.v + p.gamma));
    const double omega_sq = -4.0 * (p.gamma * p.gamma - p.v * p.v + sg * p.c * s);
    const cplx w = std::sqrt(cplx(omega_sq));
    return {0.0, 0.0, w, -w};
}

} // namespace ptdimer
