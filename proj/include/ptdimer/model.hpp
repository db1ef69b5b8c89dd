#pragma once

// Domain types of the PT-symmetric two-mode condensate and the closed-form
// construction of a stationary state from its (kappa, q) parameters.

#include <cmath>
#include <optional>
#include <string_view>
#include <vector>

#include "ptdimer/error.hpp"
#include "ptdimer/linalg.hpp"

namespace ptdimer {

/// Coupling v, gain/loss rate gamma and effective nonlinearity c = g/2.
struct ModelParams {
    double v = 1.0;
    double gamma = 0.0;
    double c = 0.0;

    bool finite() const { return std::isfinite(v) && std::isfinite(gamma) && std::isfinite(c); }
};

inline void require_finite(const ModelParams& p) {
    if (!p.finite()) throw Error(ErrorKind::NonFinite, "model parameters must be finite");
}

enum class Branch { SymmetricPlus, SymmetricMinus, SelfTrapPlus, SelfTrapMinus };

inline constexpr std::array<Branch, 4> kAllBranches{Branch::SymmetricPlus, Branch::SymmetricMinus,
                                                    Branch::SelfTrapPlus, Branch::SelfTrapMinus};

constexpr std::string_view to_string(Branch b) {
    switch (b) {
        case Branch::SymmetricPlus: return "symmetric-plus";
        case Branch::SymmetricMinus: return "symmetric-minus";
        case Branch::SelfTrapPlus: return "self-trap-plus";
        case Branch::SelfTrapMinus: return "self-trap-minus";
    }
    return "?";
}

inline std::optional<Branch> parse_branch(std::string_view s) {
    for (Branch b : kAllBranches)
        if (to_string(b) == s) return b;
    return std::nullopt;
}

constexpr bool is_symmetric(Branch b) { return b == Branch::SymmetricPlus || b == Branch::SymmetricMinus; }

/// Absolute tolerance on imaginary parts for calling (kappa, q) real.
inline constexpr double kRealTol = 1e-12;

struct StationaryState {
    Branch branch = Branch::SymmetricPlus;
    cplx kappa;   // population imbalance |phi1|^2 - |phi2|^2
    cplx q;       // relative phase parameter
    cplx phi1;
    cplx phi2;
    cplx mu;      // chemical potential (nonlinear eigenvalue)
    cplx energy;
    bool physical = false;

    Vec<2> phi() const { return {phi1, phi2}; }
};

enum class SpectrumMode { Physical, Continued };

struct Spectrum {
    ModelParams params;
    std::vector<StationaryState> states;
    SpectrumMode mode = SpectrumMode::Physical;

    const StationaryState* find(Branch b) const {
        for (const auto& s : states)
            if (s.branch == b) return &s;
        return nullptr;
    }
};

enum class Verdict { Stable, Unstable };

constexpr std::string_view to_string(Verdict v) { return v == Verdict::Stable ? "Stable" : "Unstable"; }

struct StabilityReport {
    StationaryState state;
    std::array<cplx, 4> omegas{};
    double max_im = 0.0;
    Verdict verdict = Verdict::Stable;
};

struct Trajectory {
    std::vector<double> times;
    std::vector<Vec<2>> psi;
    std::vector<double> norm;              // |psi1|^2 + |psi2|^2
    std::vector<double> kappa_normalized;  // (|psi1|^2 - |psi2|^2) / norm
};

/// Shifted nonlinear Hamiltonian with the imbalance entering as a parameter:
/// diag(-i gamma + c kappa, i gamma - c kappa), off-diagonal v.
inline Matrix<2> hamiltonian(const ModelParams& p, cplx kappa) {
    return Matrix<2>{{-kI * p.gamma + p.c * kappa, p.v}, {p.v, kI * p.gamma - p.c * kappa}};
}

/// Builds amplitudes, chemical potential and energy from (kappa, q) using
/// principal square roots:
///   phi1 = sqrt((1+kappa)/2) e^{-iq},  phi2 = sqrt((1-kappa)/2) e^{iq}
///   mu   = (-i gamma + c kappa) kappa + v sqrt(1-kappa^2) cos 2q
///   E    = -i gamma kappa + v sqrt(1-kappa^2) cos 2q + (c/2) kappa^2
inline StationaryState state_from_kappa_q(const ModelParams& p, Branch branch, cplx kappa, cplx q) {
    require_finite(p);
    if (!is_finite(kappa) || !is_finite(q)) throw Error(ErrorKind::NonFinite, "kappa and q must be finite");

    StationaryState s;
    s.branch = branch;
    s.kappa = kappa;
    s.q = q;
    s.phi1 = std::sqrt((1.0 + kappa) / 2.0) * std::exp(-kI * q);
    s.phi2 = std::sqrt((1.0 - kappa) / 2.0) * std::exp(kI * q);

    const cplx hopping = p.v * std::sqrt(1.0 - kappa * kappa) * std::cos(2.0 * q);
    s.mu = (-kI * p.gamma + p.c * kappa) * kappa + hopping;
    s.energy = -kI * p.gamma * kappa + hopping + 0.5 * p.c * kappa * kappa;
    s.physical = std::abs(kappa.imag()) <= kRealTol && std::abs(q.imag()) <= kRealTol &&
                 std::abs(kappa.real()) <= 1.0 + kRealTol;
    return s;
}

} // namespace ptdimer
