#pragma once

// Mean-field dynamics with the norm-normalized nonlinearity
//   i psi' = [[2c|psi1|^2/n - i gamma, v], [v, 2c|psi2|^2/n + i gamma]] psi,
// n = |psi1|^2 + |psi2|^2, integrated with fixed-step classical RK4.
//
// The equation carries no -(g/2) n shift, so a stationary state rotates at
// mu + c rather than mu. Only phase-independent quantities (norm, imbalance,
// projective distance) are meaningful for comparisons.

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "ptdimer/bdg.hpp"
#include "ptdimer/error.hpp"
#include "ptdimer/linalg.hpp"
#include "ptdimer/model.hpp"

namespace ptdimer {

inline constexpr double kMinNorm = 1e-300;

inline Vec<2> rhs(const ModelParams& p, const Vec<2>& psi) {
    const double a1 = std::norm(psi[0]);
    const double a2 = std::norm(psi[1]);
    const double n = a1 + a2;
    if (!std::isfinite(n)) throw Error(ErrorKind::NonFinite, "rhs: norm overflowed");
    if (!(n >= kMinNorm)) throw Error(ErrorKind::ZeroNorm, "rhs: norm vanished");
    const cplx h11 = 2.0 * p.c * a1 / n - kI * p.gamma;
    const cplx h22 = 2.0 * p.c * a2 / n + kI * p.gamma;
    return {-kI * (h11 * psi[0] + p.v * psi[1]), -kI * (p.v * psi[0] + h22 * psi[1])};
}

inline Vec<2> rk4_step(const ModelParams& p, const Vec<2>& y, double h) {
    auto axpy = [](const Vec<2>& x, double a, const Vec<2>& k) { return Vec<2>{x[0] + a * k[0], x[1] + a * k[1]}; };
    const Vec<2> k1 = rhs(p, y);
    const Vec<2> k2 = rhs(p, axpy(y, 0.5 * h, k1));
    const Vec<2> k3 = rhs(p, axpy(y, 0.5 * h, k2));
    const Vec<2> k4 = rhs(p, axpy(y, h, k3));
    return {y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1])};
}

/// Fixed-step integration from t = 0 to t_end. The step is dt, shortened
/// uniformly when t_end is not a multiple of it; every step is sampled.
inline Trajectory integrate(const ModelParams& p, const Vec<2>& psi0, double t_end, double dt) {
    require_finite(p);
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::InvalidArgument, "integrate: dt must be > 0");
    if (!(t_end >= 0.0) || !std::isfinite(t_end))
        throw Error(ErrorKind::InvalidArgument, "integrate: t_end must be >= 0");
    if (!is_finite(psi0[0]) || !is_finite(psi0[1])) throw Error(ErrorKind::NonFinite, "integrate: non-finite psi0");

    const auto steps = static_cast<std::size_t>(std::ceil(t_end / dt - 1e-9));
    const double h = steps == 0 ? 0.0 : t_end / static_cast<double>(steps);

    Trajectory tr;
    tr.times.reserve(steps + 1);
    tr.psi.reserve(steps + 1);
    tr.norm.reserve(steps + 1);
    tr.kappa_normalized.reserve(steps + 1);

    auto record = [&](double t, const Vec<2>& y) {
        if (!is_finite(y[0]) || !is_finite(y[1])) throw Error(ErrorKind::NonFinite, "integrate: state overflowed");
        const double a1 = std::norm(y[0]);
        const double a2 = std::norm(y[1]);
        const double n = a1 + a2;
        if (!std::isfinite(n)) throw Error(ErrorKind::NonFinite, "integrate: norm overflowed");
        if (!(n >= kMinNorm)) throw Error(ErrorKind::ZeroNorm, "integrate: norm fell below 1e-300");
        tr.times.push_back(t);
        tr.psi.push_back(y);
        tr.norm.push_back(n);
        tr.kappa_normalized.push_back((a1 - a2) / n);
    };

    Vec<2> y = psi0;
    record(0.0, y);
    for (std::size_t k = 1; k <= steps; ++k) {
        y = rk4_step(p, y, h);
        record(static_cast<double>(k) * h, y);
    }
    return tr;
}

/// sin of the angle between the rays of a and b; zero iff a is a complex
/// multiple of b.
inline double projective_distance(const Vec<2>& a, const Vec<2>& b) {
    const double na = std::norm(a[0]) + std::norm(a[1]);
    const double nb = std::norm(b[0]) + std::norm(b[1]);
    const double overlap = std::norm(dot(a, b)) / (na * nb);
    return std::sqrt(std::max(0.0, 1.0 - overlap));
}

/// Unit perturbation direction orthogonal to the state: the Q-projected
/// most-unstable BdG mode (delta_minus + conj(delta_plus)) when one exists,
/// otherwise the largest column of Q.
inline Vec<2> perturbation_direction(const ModelParams& p, const StationaryState& s) {
    const Matrix<2> q = build_Q(s);
    const StabilityReport rep = stability(p, s);

    Vec<2> delta{};
    if (rep.verdict == Verdict::Unstable) {
        cplx worst = 0.0;
        double best_im = -std::numeric_limits<double>::infinity();
        for (const auto& w : rep.omegas)
            if (std::abs(w) >= kZeroModeTol && w.imag() > best_im) {
                best_im = w.imag();
                worst = w;
            }
        const Vec<4> mode = eigenvector(build_B(p, s).b, worst);
        delta = q * Vec<2>{mode[0] + std::conj(mode[2]), mode[1] + std::conj(mode[3])};
    }
    if (norm2(delta) < 1e-12) {
        const Vec<2> col0{q(0, 0), q(1, 0)};
        const Vec<2> col1{q(0, 1), q(1, 1)};
        delta = norm2(col0) >= norm2(col1) ? col0 : col1;
    }
    return scaled(delta, 1.0 / norm2(delta));
}

struct ProbeResult {
    double growth_rate = 0.0;
    bool agrees_with_bdg = false;
    Verdict bdg_verdict = Verdict::Stable;
    bool window_fit = false;  // rate from the exponential-growth window
    std::size_t window_samples = 0;
};

/// Growth rates at or below this count as "no growth" when comparing with the
/// BdG verdict; it absorbs envelope jitter of bounded oscillations.
inline constexpr double kGrowthFloor = 1e-3;

namespace detail {

inline double lsq_slope(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

} // namespace detail

/// Kicks the state by epsilon along perturbation_direction, integrates, and
/// measures the growth of the projective distance to the stationary ray.
/// When the distance passes through [10 epsilon, 0.1] the rate is a least
/// squares fit of log(distance) there; otherwise it compares the maximum
/// distance over the second half of the run with the first half.
inline ProbeResult perturbation_probe(const ModelParams& p, const StationaryState& s, double epsilon, double t_end,
                                      double dt = 1e-3) {
    if (!(epsilon >= 1e-8 && epsilon <= 1e-2))
        throw Error(ErrorKind::InvalidArgument, "perturbation_probe: epsilon must lie in [1e-8, 1e-2]");
    const Vec<2> phi = s.phi();
    const Vec<2> dir = perturbation_direction(p, s);
    const Vec<2> psi0{phi[0] + epsilon * dir[0], phi[1] + epsilon * dir[1]};
    const Trajectory tr = integrate(p, psi0, t_end, dt);

    ProbeResult res;
    res.bdg_verdict = stability(p, s).verdict;

    std::vector<double> d(tr.psi.size());
    for (std::size_t k = 0; k < d.size(); ++k) d[k] = projective_distance(tr.psi[k], phi);

    std::vector<double> wt, wl;
    for (std::size_t k = 0; k < d.size(); ++k) {
        if (d[k] > 0.1) break;
        if (d[k] >= 10.0 * epsilon) {
            wt.push_back(tr.times[k]);
            wl.push_back(std::log(d[k]));
        }
    }
    if (wt.size() >= 20) {
        res.growth_rate = detail::lsq_slope(wt, wl);
        res.window_fit = true;
        res.window_samples = wt.size();
    } else {
        const std::size_t mid = d.size() / 2;
        const double first = *std::max_element(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(mid));
        const double second = *std::max_element(d.begin() + static_cast<std::ptrdiff_t>(mid), d.end());
        const double span = tr.times.back() - tr.times[mid];
        res.growth_rate = std::log(second / first) / span;
    }
    const bool grows = res.growth_rate > kGrowthFloor;
    res.agrees_with_bdg = grows == (res.bdg_verdict == Verdict::Unstable);
    return res;
}

} // namespace ptdimer
