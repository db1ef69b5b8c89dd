#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "ptdimer/model.hpp"

using namespace ptdimer;

TEST_CASE("Hermitian symmetric state") {
    const auto s = state_from_kappa_q({1.0, 0.0, 0.0}, Branch::SymmetricPlus, 0.0, 0.0);
    CHECK(std::abs(s.phi1 - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s.phi2 - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s.mu - 1.0) < 1e-15);
    CHECK(std::abs(s.energy - 1.0) < 1e-15);
    CHECK(s.physical);
}

TEST_CASE("self-trapping state chemical potential") {
    const ModelParams p{1.0, 0.7, 0.9};
    const double r2 = p.c * p.c + p.gamma * p.gamma;
    const double kappa = std::sqrt(1.0 - 1.0 / r2);
    const double q = 0.5 * std::atan2(p.gamma, p.c);
    CHECK(kappa == Catch::Approx(0.480384).margin(1e-6));
    CHECK(q == Catch::Approx(0.330517).margin(1e-5));
    const auto s = state_from_kappa_q(p, Branch::SelfTrapPlus, kappa, q);
    CHECK(std::abs(s.mu.real() - 0.9) < 1e-15);
    CHECK(std::abs(s.mu.imag() + p.gamma * kappa) < 1e-15);
    CHECK(s.mu.imag() == Catch::Approx(-0.336268).margin(2e-6));
    CHECK(s.physical);
}

TEST_CASE("energy differs from chemical potential") {
    const double kappa = std::sqrt(3.0) / 2.0;
    const auto s = state_from_kappa_q({1.0, 0.0, 2.0}, Branch::SelfTrapPlus, kappa, 0.0);
    CHECK(std::abs(s.mu - 2.0) < 1e-14);
    CHECK(std::abs(s.energy - 1.25) < 1e-14);
}

TEST_CASE("amplitudes carry unit norm and the requested imbalance") {
    for (double kappa : {-1.0, -0.7, 0.0, 0.3, 0.999, 1.0}) {
        for (double q : {-1.0, 0.0, 0.4, 2.5}) {
            const auto s = state_from_kappa_q({1.0, 0.3, 0.5}, Branch::SelfTrapPlus, kappa, q);
            CHECK(std::norm(s.phi1) + std::norm(s.phi2) == Catch::Approx(1.0).epsilon(1e-15));
            CHECK(std::norm(s.phi1) - std::norm(s.phi2) == Catch::Approx(kappa).margin(1e-15));
            CHECK(s.physical);
        }
    }
}

TEST_CASE("physical flag separates complex parameters") {
    const ModelParams p{1.0, 0.5, 0.5};
    CHECK_FALSE(state_from_kappa_q(p, Branch::SelfTrapPlus, cplx(0.0, 0.3), 0.2).physical);
    CHECK_FALSE(state_from_kappa_q(p, Branch::SymmetricPlus, 0.0, cplx(0.7, 0.1)).physical);
    CHECK_FALSE(state_from_kappa_q(p, Branch::SelfTrapPlus, 1.5, 0.0).physical);
    CHECK(state_from_kappa_q(p, Branch::SymmetricPlus, cplx(0.0, 1e-13), 0.2).physical);
}

TEST_CASE("non-finite inputs are rejected") {
    const double nan = std::nan("");
    CHECK_THROWS_AS(state_from_kappa_q({nan, 0.0, 0.0}, Branch::SymmetricPlus, 0.0, 0.0), Error);
    CHECK_THROWS_AS(state_from_kappa_q({1.0, 0.0, 0.0}, Branch::SymmetricPlus, nan, 0.0), Error);
    CHECK_THROWS_AS(require_finite({1.0, INFINITY, 0.0}), Error);
}

TEST_CASE("branch labels round-trip") {
    for (Branch b : kAllBranches) {
        const auto parsed = parse_branch(to_string(b));
        REQUIRE(parsed);
        CHECK(*parsed == b);
    }
    CHECK_FALSE(parse_branch("upper"));
    CHECK(is_symmetric(Branch::SymmetricMinus));
    CHECK_FALSE(is_symmetric(Branch::SelfTrapMinus));
}

TEST_CASE("hamiltonian entries") {
    const auto h = hamiltonian({2.0, 0.3, 0.5}, 0.4);
    CHECK(h(0, 0) == cplx(0.2, -0.3));
    CHECK(h(1, 1) == cplx(-0.2, 0.3));
    CHECK(h(0, 1) == cplx(2.0));
    CHECK(h(1, 0) == cplx(2.0));
}

TEST_CASE("error kinds are named") {
    const Error e(ErrorKind::BranchAbsent, "gone");
    CHECK(e.kind() == ErrorKind::BranchAbsent);
    CHECK(std::string(e.what()).find("BranchAbsent") != std::string::npos);
    CHECK(to_string(Verdict::Unstable) == "Unstable");
}
