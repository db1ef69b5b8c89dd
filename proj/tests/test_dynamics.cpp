#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ptdimer/dynamics.hpp"
#include "ptdimer/stationary.hpp"
#include "support.hpp"

using namespace ptdimer;

TEST_CASE("right-hand side examples") {
    const auto a = rhs({1.0, 0.0, 0.0}, {1.0, 0.0});
    CHECK(std::abs(a[0]) == 0.0);
    CHECK(a[1] == cplx(0.0, -1.0));
    const auto b = rhs({1.0, 0.5, 0.0}, {1.0, 0.0});
    CHECK(std::abs(b[0] - cplx(-0.5, 0.0)) < 1e-16);
    CHECK(b[1] == cplx(0.0, -1.0));
    CHECK_THROWS_AS(rhs({1.0, 0.5, 0.0}, {0.0, 0.0}), Error);
}

TEST_CASE("stationary states rotate at mu + c") {
    for (int trial = 0; trial < 100; ++trial) {
        const ModelParams p{1.0, testsupport::uniform(-2, 2), testsupport::uniform(-2, 2)};
        for (const auto& s : solve_physical(p).states) {
            const auto f = rhs(p, s.phi());
            const cplx w = s.mu + p.c;
            CHECK(std::abs(f[0] + kI * w * s.phi1) < 1e-12);
            CHECK(std::abs(f[1] + kI * w * s.phi2) < 1e-12);
        }
    }
}

TEST_CASE("integrate argument checks") {
    const ModelParams p{1.0, 0.2, 0.3};
    CHECK_THROWS_AS(integrate(p, {1.0, 0.0}, 1.0, 0.0), Error);
    CHECK_THROWS_AS(integrate(p, {1.0, 0.0}, -1.0, 0.1), Error);
    CHECK_THROWS_AS(integrate(p, {std::nan(""), 0.0}, 1.0, 0.1), Error);
    CHECK_THROWS_AS(integrate(p, {0.0, 0.0}, 1.0, 0.1), Error);
    const auto tr = integrate(p, {1.0, 0.0}, 0.0, 0.1);
    CHECK(tr.times.size() == 1);
}

TEST_CASE("overflow is reported") {
    // norm grows like e^{2 * 50 t}
    try {
        integrate({1.0, 50.0, 0.0}, {0.3, 0.1}, 20.0, 1e-3);
        FAIL("expected NonFinite");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::NonFinite);
    }
}

TEST_CASE("trajectory samples") {
    const auto tr = integrate({1.0, 0.3, 0.5}, {0.6, 0.8}, 1.05, 0.1);
    REQUIRE(tr.times.size() == 12);  // 11 uniform steps of 1.05/11
    CHECK(tr.times.back() == Catch::Approx(1.05).epsilon(1e-15));
    for (std::size_t k = 1; k < tr.times.size(); ++k) CHECK(tr.times[k] > tr.times[k - 1]);
    for (double n : tr.norm) CHECK(n > 0.0);
    for (std::size_t k = 0; k < tr.times.size(); ++k) {
        const auto& y = tr.psi[k];
        CHECK(tr.norm[k] == std::norm(y[0]) + std::norm(y[1]));
    }
}

TEST_CASE("symmetric stationary state is a fixed point") {
    const ModelParams p{1.0, 0.3, 0.0};
    const auto s = *solve_physical(p).find(Branch::SymmetricPlus);
    const auto tr = integrate(p, s.phi(), 10.0, 1e-3);
    for (std::size_t k = 0; k < tr.psi.size(); k += 50) {
        CHECK(projective_distance(tr.psi[k], s.phi()) <= 1e-6);
        CHECK(std::abs(tr.norm[k] - 1.0) <= 1e-6);
    }
}

TEST_CASE("norm law on stationary states") {
    const ModelParams p{1.0, 0.7, 0.9};
    for (Branch b : {Branch::SelfTrapPlus, Branch::SelfTrapMinus, Branch::SymmetricPlus, Branch::SymmetricMinus}) {
        const auto s = *solve_physical(p).find(b);
        const auto tr = integrate(p, s.phi(), 5.0, 1e-3);
        for (std::size_t k = 0; k < tr.times.size(); k += 100) {
            const double expect = std::exp(2.0 * s.mu.imag() * tr.times[k]);
            CHECK(std::abs(tr.norm[k] / tr.norm[0] - expect) <= 1e-5 * expect);
        }
    }
    CHECK(solve_physical(p).find(Branch::SelfTrapPlus)->mu.imag() == Catch::Approx(-0.336268).margin(2e-6));
}

TEST_CASE("Hermitian dynamics conserves the norm") {
    for (int trial = 0; trial < 20; ++trial) {
        const ModelParams p{testsupport::uniform(-2, 2), 0.0, testsupport::uniform(-2, 2)};
        const Vec<2> y0{cplx(testsupport::uniform(-1, 1), testsupport::uniform(-1, 1)),
                        cplx(testsupport::uniform(-1, 1), testsupport::uniform(-1, 1))};
        const auto tr = integrate(p, y0, 10.0, 1e-3);
        for (double n : tr.norm) CHECK(std::abs(n - tr.norm[0]) <= 1e-9 * tr.norm[0]);
    }
}

TEST_CASE("mode swap maps gamma to -gamma") {
    const ModelParams p{1.0, 0.5, 0.7};
    const ModelParams m{1.0, -0.5, 0.7};
    const Vec<2> y0{0.8, cplx(0.1, 0.3)};
    const auto a = integrate(p, y0, 3.0, 1e-3);
    const auto b = integrate(m, {y0[1], y0[0]}, 3.0, 1e-3);
    for (std::size_t k = 0; k < a.psi.size(); ++k) {
        CHECK(std::abs(a.psi[k][0] - b.psi[k][1]) <= 1e-8);
        CHECK(std::abs(a.psi[k][1] - b.psi[k][0]) <= 1e-8);
    }
}

TEST_CASE("conjugation with time reversal maps gamma to -gamma") {
    const ModelParams p{1.0, 0.5, 0.7};
    const ModelParams m{1.0, -0.5, 0.7};
    const Vec<2> y0{0.8, cplx(0.1, 0.3)};
    const auto fwd = integrate(p, y0, 2.0, 1e-3).psi.back();
    const auto back = integrate(m, {std::conj(fwd[0]), std::conj(fwd[1])}, 2.0, 1e-3).psi.back();
    CHECK(std::abs(back[0] - std::conj(y0[0])) <= 1e-8);
    CHECK(std::abs(back[1] - std::conj(y0[1])) <= 1e-8);
}

TEST_CASE("broken linear phase relaxes to the global sink") {
    const ModelParams p{1.0, 1.5, 0.0};
    const auto e = eig2(hamiltonian(p, 0.0));
    const std::size_t sink = e.values[0].imag() > e.values[1].imag() ? 0 : 1;
    const auto& x = e.vectors[sink];
    const double kappa_sink = (std::norm(x[0]) - std::norm(x[1])) / (std::norm(x[0]) + std::norm(x[1]));
    const auto tr = integrate(p, {cplx(0.3, 0.2), cplx(-0.5, 0.6)}, 20.0, 1e-3);
    CHECK(std::abs(tr.kappa_normalized.back() - kappa_sink) <= 1e-9);
}

TEST_CASE("RK4 error drops by about 16 per halving") {
    const ModelParams p{1.0, 0.5, 0.5};
    const Vec<2> y0{1.0, 0.0};
    auto end = [&](double dt) { return integrate(p, y0, 1.0, dt).psi.back(); };
    const auto ref = end(1e-4);
    auto err = [&](double dt) {
        const auto y = end(dt);
        return std::max(std::abs(y[0] - ref[0]), std::abs(y[1] - ref[1]));
    };
    for (double dt : {0.1, 0.05}) {
        const double ratio = err(dt) / err(dt / 2);
        CHECK(ratio >= 14.0);
        CHECK(ratio <= 18.0);
    }
}

TEST_CASE("projective distance") {
    const Vec<2> a{cplx(0.3, 0.4), cplx(-0.2, 0.1)};
    CHECK(projective_distance(a, scaled(a, std::polar(3.0, 0.7))) < 1e-7);
    CHECK(projective_distance(Vec<2>{1.0, 0.0}, Vec<2>{0.0, 1.0}) == 1.0);
    const Vec<2> b{cplx(0.1, -0.9), 0.5};
    CHECK(projective_distance(a, b) == Catch::Approx(projective_distance(b, a)).margin(1e-15));
}

TEST_CASE("perturbation probe agrees with BdG at gamma = 0.7") {
    const ModelParams p{1.0, 0.7, 0.9};
    const auto s = solve_physical(p);

    const auto lower = perturbation_probe(p, *s.find(Branch::SymmetricMinus), 1e-6, 30.0);
    CHECK(lower.agrees_with_bdg);
    CHECK(lower.growth_rate <= kGrowthFloor);

    const auto upper = perturbation_probe(p, *s.find(Branch::SymmetricPlus), 1e-6, 30.0);
    CHECK(upper.agrees_with_bdg);
    CHECK(upper.window_fit);
    CHECK(std::abs(upper.growth_rate - 0.728639) <= 0.1 * 0.728639);

    const auto source = perturbation_probe(p, *s.find(Branch::SelfTrapPlus), 1e-6, 30.0);
    CHECK(source.bdg_verdict == Verdict::Unstable);
    CHECK(source.growth_rate > 0.0);
    CHECK(source.agrees_with_bdg);

    const auto sink = perturbation_probe(p, *s.find(Branch::SelfTrapMinus), 1e-6, 30.0);
    CHECK(sink.bdg_verdict == Verdict::Stable);
    CHECK(sink.agrees_with_bdg);

    CHECK_THROWS_AS(perturbation_probe(p, *s.find(Branch::SymmetricPlus), 0.5, 1.0), Error);
}

TEST_CASE("perturbation direction is orthogonal to the state") {
    const ModelParams p{1.0, 0.7, 0.9};
    for (const auto& s : solve_physical(p).states) {
        const auto d = perturbation_direction(p, s);
        CHECK(std::abs(norm2(d) - 1.0) < 1e-14);
        CHECK(std::abs(dot(s.phi(), d)) < 1e-12);
    }
}
