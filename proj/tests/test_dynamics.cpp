// test_dynamics.cpp: Displacement and commutator observables

#include <doctest.h>

#include <cmath>

#include "oracles/oracle_values.hpp"
#include "qbm/constants.hpp"
#include "qbm/dynamics.hpp"
#include "qbm/errors.hpp"
#include "qbm/specfun.hpp"
#include "test_support.hpp"

using namespace qbm;
using qbm::test::ohmic;
using qbm::test::rel_err;
using qbm::test::srt;

TEST_CASE("zero-temperature displacement: oracle values") {
    CHECK(msd_zero_t(srt(0.1), 0.0) == 0.0);
    CHECK(rel_err(msd_zero_t(srt(0.1), 1.0), oracle::srt01_msd_t1) < 1e-13);
    CHECK(rel_err(msd_zero_t(ohmic(), 1.0), oracle::ohmic_msd_t1) < 1e-13);
    CHECK(msd_zero_t(srt(1e-8), 1.0) == doctest::Approx(0.335369).epsilon(1e-5));
    CHECK_THROWS_AS(msd_zero_t(srt(0.1), -1.0), ValidationError);
}

TEST_CASE("SI-style parameters scale as hbar / zeta") {
    const FreeParticle p{BathModel::single_relaxation_time(2.0, 0.05), 3.0, 0.7};
    const FreeParticle unit{BathModel::single_relaxation_time(1.0, 2.0 * 0.05 / 3.0), 1.0, 1.0};
    // t in units of m / zeta = 1.5.
    for (double t : {0.01, 1.0, 30.0}) {
        CHECK(rel_err(msd_zero_t(p, t), 0.7 / 2.0 * msd_zero_t(unit, t / 1.5)) < 1e-12);
        CHECK(rel_err(commutator_magnitude(p, t), 0.7 / 2.0 * commutator_magnitude(unit, t / 1.5)) < 1e-12);
    }
}

TEST_CASE("finite temperature reduces to the closed form at theta = 0") {
    for (double t : {0.0, 0.3, 3.0}) {
        const auto q = msd_finite_t(srt(0.05), t, 0.0);
        CHECK(q.converged);
        if (t == 0.0) {
            CHECK(q.value == 0.0);
        } else {
            CHECK(rel_err(q.value, msd_zero_t(srt(0.05), t)) < 1e-8);
        }
    }
    CHECK(msd(srt(0.1), 0.0, 3.0) == 0.0);
    CHECK(rel_err(msd(srt(0.1), 1.0, 1.0), oracle::srt01_msd_t1_theta1) < 1e-8);
    CHECK_THROWS_AS(msd(srt(0.1), 1.0, -1.0), ValidationError);
}

TEST_CASE("displacement grows with temperature") {
    for (double t : {0.01, 1.0, 20.0}) {
        double prev = msd(srt(0.01), t, 0.0);
        for (double theta : {0.05, 0.5, 5.0}) {
            const double s = msd(srt(0.01), t, theta);
            CHECK(s >= prev);
            prev = s;
        }
    }
}

TEST_CASE("high temperature approaches the classical diffusion law") {
    // s -> (2 theta kappa) [t - (1 - e^{-t})] for the Ohmic bath when theta >> 1.
    const double theta = 1e3;
    const double t = 5.0;
    const double classical = 2.0 * theta * (t + std::expm1(-t));
    CHECK(rel_err(msd(ohmic(), t, theta), classical) < 1e-2);
}

TEST_CASE("closed form and quadrature agree on random parameters") {
    qbm::test::Draws draws(101);
    for (int i = 0; i < 25; ++i) {
        const auto p = srt(draws.log_uniform(1e-6, 0.2), draws.log_uniform(1e-3, 1e3));
        const double t = draws.log_uniform(1e-2, 1e2);
        quadrature::QuadratureConfig cfg;
        cfg.rel_tol = 1e-11;
        CHECK(rel_err(msd_finite_t(p, t, 0.0, cfg).value, msd_zero_t(p, t)) < 1e-8);
        CHECK(rel_err(commutator_quadrature(p, t, cfg).value, commutator_magnitude(p, t)) < 1e-8);
    }
}

TEST_CASE("near-degenerate rates use the limiting form") {
    const double tau_at = 0.25 * (1.0 - 1e-14);
    const double tau_off = 0.25 * (1.0 - 1e-8); // delta = 1e-4, regular branch
    for (double t : {0.01, 0.5, 2.0, 10.0, 100.0}) {
        const double s_at = msd_zero_t(srt(tau_at), t);
        const double s_off = msd_zero_t(srt(tau_off), t);
        CHECK(rel_err(s_at, s_off) < 1e-6);
        const double c_at = commutator_magnitude(srt(tau_at), t);
        const double c_off = commutator_magnitude(srt(tau_off), t);
        CHECK(rel_err(c_at, c_off) < 1e-6);
        quadrature::QuadratureConfig cfg;
        cfg.rel_tol = 1e-11;
        CHECK(rel_err(msd_finite_t(srt(tau_at), t, 0.0, cfg).value, s_at) < 1e-8);
    }
}

TEST_CASE("commutator limits") {
    CHECK(commutator_magnitude(srt(0.1), 0.0) == 0.0);
    CHECK(rel_err(commutator_magnitude(srt(0.1), 1.0), oracle::srt01_commutator_t1) < 1e-13);
    CHECK(commutator_magnitude(srt(0.1), 200.0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(commutator_magnitude(ohmic(), 1.0) == doctest::Approx(1.0 - std::exp(-1.0)).epsilon(1e-15));
    // Free-particle commutator hbar t / m while zeta t / m << 1 and t >> tau.
    CHECK(rel_err(commutator_magnitude(srt(1e-8), 1e-4), 1e-4) < 1e-3);
    CHECK(rel_err(commutator_magnitude(ohmic(), 1e-6), 1e-6) < 1e-6);
}

TEST_CASE("packet variance") {
    CHECK(packet_variance(srt(0.1), 0.0, 1.3, 0.0) == doctest::Approx(1.69).epsilon(1e-15));
    CHECK(rel_err(packet_variance(srt(1e-5), 1e-4, 1.0, 0.0), 1.0) < 1e-6);
    // Weak coupling: s is negligible and the free spreading law remains.
    const FreeParticle weak{BathModel::ohmic(1e-9), 1.0, 1.0};
    const double sigma = 0.8;
    const double t = 2.0;
    const auto point = trajectory_point(weak, t, sigma, 0.0);
    CHECK(point.s < 1e-7);
    const double free_width = sigma * sigma + std::pow(t / (2.0 * sigma), 2);
    CHECK(rel_err(point.w2 - point.s, free_width) < 1e-8);
    CHECK_THROWS_AS(packet_variance(srt(0.1), 1.0, 0.0, 0.0), ValidationError);
}

TEST_CASE("mean square velocity") {
    CHECK(mean_square_velocity(srt(0.1)) == doctest::Approx(0.8480).epsilon(1e-3));
    CHECK(rel_err(mean_square_velocity(srt(0.1)), oracle::srt01_mean_square_velocity) < 1e-14);
    CHECK_THROWS_WITH_AS(mean_square_velocity(ohmic()), doctest::Contains("logarithmically divergent"),
                         ValidationError);
    double prev_gap = 1.0;
    for (double tau : {1e-2, 1e-3, 1e-4, 1e-6, 1e-9}) {
        const double gap = std::abs(mean_square_velocity(srt(tau)) / mean_square_velocity_log_approx(srt(tau)) - 1.0);
        CHECK(gap < prev_gap);
        prev_gap = gap;
    }
    CHECK(prev_gap < 1e-6);
    // Continuous across the degenerate point.
    CHECK(rel_err(mean_square_velocity(srt(0.25 * (1.0 - 1e-15))), mean_square_velocity(srt(0.25 * (1.0 - 1e-9)))) < 1e-4);
}

TEST_CASE("short-time law") {
    for (double tau : {1e-6, 1e-3, 0.1, 0.2}) {
        const double t = 1e-3 * tau;
        CHECK(std::abs(msd_short_time(srt(tau), t) / msd_zero_t(srt(tau), t) - 1.0) < 0.01);
    }
}

TEST_CASE("intermediate-time law") {
    // t = 10 tau with zeta t / m = 0.1.
    CHECK(rel_err(msd_intermediate(srt(0.01), 0.1), msd_zero_t(srt(0.01), 0.1)) < 0.05);
    CHECK(msd_intermediate(srt(0.01), 1e-3) > 0.0);
    CHECK(msd_intermediate(srt(0.01), 0.0) == 0.0);
    // Sign change at zeta t / m = e^{3/2 - gamma_E}.
    const double turn = std::exp(1.5 - euler_gamma);
    CHECK(msd_intermediate(srt(0.01), 0.99 * turn) > 0.0);
    CHECK(msd_intermediate(srt(0.01), 1.01 * turn) < 0.0);
}

TEST_CASE("long-time growth") {
    // Leading behaviour (2 hbar / pi zeta)(log gamma t + gamma_E), checked where the fast-rate
    // correction is below the tolerance.
    {
        const auto p = srt(1e-3);
        const double g = rates(p.bath, 1.0).slow;
        const double t = 1e3 / g;
        CHECK(std::abs(msd_zero_t(p, t) - 2.0 / pi * (std::log(g * t) + euler_gamma)) < 1e-3);
    }
    // Full asymptote including the constant offset from the fast rate.
    for (double tau : {1e-3, 0.1, 0.2}) {
        const auto p = srt(tau);
        const auto r = rates(p.bath, 1.0);
        const double t = 1e3 / r.slow;
        const double offset = r.slow * r.slow * std::log(r.fast / r.slow) / (r.fast * r.fast - r.slow * r.slow);
        const double asymptote = 2.0 / pi * (std::log(r.slow * t) + euler_gamma - offset);
        CHECK(std::abs(msd_zero_t(p, t) - asymptote) < 1e-5);
    }
}

TEST_CASE("s, C and w^2 are non-decreasing on random parameters") {
    qbm::test::Draws draws(5);
    for (int i = 0; i < 20; ++i) {
        const auto p = srt(draws.log_uniform(1e-6, 0.2), draws.log_uniform(1e-3, 10.0));
        const double sigma = draws.log_uniform(0.1, 10.0);
        TrajectoryPoint prev = trajectory_point(p, 0.0, sigma, 0.0);
        for (int k = 0; k <= 80; ++k) {
            const auto cur = trajectory_point(p, std::pow(10.0, -7.0 + 10.0 * k / 80.0), sigma, 0.0);
            CHECK(cur.s >= prev.s);
            CHECK(cur.C >= prev.C);
            CHECK(cur.w2 >= prev.w2);
            prev = cur;
        }
    }
}

TEST_CASE("particle validation") {
    FreeParticle p = srt(0.1);
    p.hbar = 0.0;
    CHECK_THROWS_AS(p.validate(), ValidationError);
    p = srt(0.1);
    p.mass = 0.3; // 4 zeta tau / m > 1
    CHECK_THROWS_AS(msd_zero_t(p, 1.0), UnderdampedBathError);
}
