#include <catch2/catch.hpp>

#include "mnewt/problems.hpp"

using namespace mnewt;

TEST_CASE("rosenbrock evaluators") {
    const Problem p = rosenbrock();
    SECTION("known minimizer") {
        CHECK(p.f({1, 1}) == 0.0);
        CHECK(p.grad({1, 1}) == Vec{0, 0});
    }
    SECTION("gradient at the default start point") {
        const Vec g = p.grad({-1.9, 2.0});
        CHECK(g[0] == Approx(-1229.4));
        CHECK(g[1] == Approx(-322.0));
    }
    SECTION("Hessian at the default start point") {
        const SymMatrix h = p.hess({-1.9, 2.0});
        CHECK(h(0, 0) == Approx(3534.0));
        CHECK(h(0, 1) == Approx(760.0));
        CHECK(h(1, 1) == Approx(200.0));
    }
}

TEST_CASE("Toeplitz matrix construction") {
    const SymMatrix m = toeplitz_rayleigh();
    REQUIRE(m.size() == 16);
    CHECK(m(0, 0) == 1.00000000);
    CHECK(m(0, 15) == -0.24512650);
    CHECK(m(3, 7) == m(9, 13));  // constant along diagonals
    SECTION("construction is bit-stable") {
        const SymMatrix m2 = toeplitz_rayleigh();
        CHECK(m.data() == m2.data());
    }
}

TEST_CASE("quadratic problem") {
    SECTION("identity with zero rhs") {
        const Problem p = quadratic(SymMatrix::identity(2), {0, 0});
        REQUIRE(p.known_min);
        CHECK(p.known_min->first == Vec{0, 0});
        CHECK(p.known_min->second == 0.0);
    }
    SECTION("diagonal instance") {
        const Problem p = quadratic(SymMatrix::diagonal({1, 2}), {1, 2});
        REQUIRE(p.known_min);
        CHECK(p.known_min->first[0] == Approx(1.0));
        CHECK(p.known_min->first[1] == Approx(1.0));
        CHECK(norm2(p.grad(p.known_min->first)) <= 1e-12);
    }
    SECTION("non-PD matrix is rejected") {
        CHECK_THROWS_AS(quadratic(SymMatrix::diagonal({1, -1}), {0, 0}), std::invalid_argument);
    }
}

TEST_CASE("standard problems hit their stated minima") {
    for (const Problem& p : standard_set()) {
        INFO(p.name);
        REQUIRE(p.known_min);
        const auto& [xstar, fstar] = *p.known_min;
        CHECK(p.f(xstar) == Approx(fstar).margin(1e-12));
        CHECK(norm2(p.grad(xstar)) <= 1e-10 * (1.0 + std::abs(fstar)));
        CHECK(std::isfinite(p.f(p.x0_default)));
    }
    CHECK(beale().f({3.0, 0.5}) == 0.0);
    CHECK(cube().grad({1.0, 1.0}) == Vec{0, 0});
    CHECK(sisser().grad({0.0, 0.0}) == Vec{0, 0});
}

TEST_CASE("finite-difference gradient") {
    SECTION("constant function") {
        const Vec g = fd_gradient([](const Vec&) { return 4.2; }, {1, 2, 3}, 1e-6);
        for (double x : g) CHECK(x == Approx(0.0).margin(1e-9));
    }
    SECTION("quadratic bowl") {
        const Vec g = fd_gradient([](const Vec& x) { return dot(x, x); }, {1, 2}, 1e-6);
        CHECK(g[0] == Approx(2.0).margin(1e-8));
        CHECK(g[1] == Approx(4.0).margin(1e-8));
    }
    SECTION("matches the analytic rosenbrock gradient") {
        const Problem p = rosenbrock();
        const Vec g = fd_gradient(p.f, {-1.9, 2.0}, 1e-5);
        CHECK(g[0] == Approx(-1229.4).margin(1e-3));
        CHECK(g[1] == Approx(-322.0).margin(1e-3));
    }
    SECTION("non-finite stencil") {
        auto f = [](const Vec& x) { return std::log(x[0]); };  // NaN just left of 0
        CHECK_THROWS_AS(fd_gradient(f, {0.0}, 1e-6), std::runtime_error);
        CHECK_THROWS_AS(fd_gradient(f, {1.0}, -1.0), std::invalid_argument);
    }
}

TEST_CASE("derivative checker") {
    SECTION("quadratic derivatives are exact") {
        const Problem p = quadratic(SymMatrix::diagonal({1, 2}), {1, 2});
        const DerivativeReport rep = check_derivatives(p, {0.3, -0.7});
        CHECK(rep.grad_rel_err < 1e-8);
        CHECK(rep.hess_rel_err < 1e-8);
        CHECK(rep.ok());
    }
    SECTION("rosenbrock passes at the start point") {
        CHECK(check_derivatives(rosenbrock(), {-1.9, 2.0}).ok());
    }
    SECTION("a deliberately wrong gradient fails loudly") {
        const Problem bad = badgrad_fixture();
        const DerivativeReport rep = check_derivatives(bad, {-1.9, 2.0});
        CHECK(rep.grad_rel_err > 1e-3);
        CHECK_FALSE(rep.ok());
    }
}

TEST_CASE("every shipped problem passes the derivative check everywhere") {
    for (const Problem& p : standard_set()) {
        INFO(p.name);
        CHECK(check_derivatives(p, p.x0_default).ok());
        for (const Vec& x : check_points(p)) CHECK(check_derivatives(p, x).ok());
    }
}

TEST_CASE("problem lookup") {
    CHECK(find_problem("rosenbr"));
    CHECK(find_problem("beale"));
    CHECK(find_problem("cube"));
    CHECK(find_problem("sisser"));
    CHECK(find_problem("quadratic"));
    CHECK(find_problem("badgrad"));
    CHECK_FALSE(find_problem("nosuch"));
    // the fault fixture is not part of the shipped suite
    for (const Problem& p : standard_set()) CHECK(p.name != "badgrad");
}
