#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "valmod/scenarios.hpp"
#include "valmod/textio.hpp"

using namespace valmod;

TEST_CASE("counterexample certificate") {
    SUBCASE("p = 2 at precision 64") {
        TowerContext tw(2);
        Config cfg;
        Certificate cert = run_counterexample(tw, cfg);
        REQUIRE(cert.checks.size() == 6);
        for (const auto& c : cert.checks) {
            INFO(c.name, ": ", c.detail);
            CHECK(c.pass);
        }
        CHECK(cert.all_pass());
    }
    SUBCASE("p = 3: three solutions, one positive") {
        TowerContext tw(3);
        Config cfg;
        cfg.p = 3;
        Certificate cert = run_counterexample(tw, cfg);
        for (const auto& c : cert.checks) {
            INFO(c.name, ": ", c.detail);
            CHECK(c.pass);
        }
    }
    SUBCASE("certificates are deterministic") {
        TowerContext tw(2);
        Config cfg;
        Certificate a = run_counterexample(tw, cfg);
        Certificate b = run_counterexample(tw, cfg);
        CHECK(textio::print_certificate(a) == textio::print_certificate(b));
    }
}

TEST_CASE("bounded hull membership") {
    TowerContext tw(2);
    Config cfg;
    const SeriesElem u = series_u_pow(tw, Value::integer(1, 2));
    const SeriesElem one_plus_u = series_add(tw, series_const(tw, tw.one(1)), u);

    SUBCASE("an element is in its own hull with witness (1, 1)") {
        auto w = hull_contains_bounded(tw, cfg, one_plus_u, one_plus_u, 2);
        REQUIRE(w.has_value());
        CHECK(w->r == poly_one(tw, 1));
        CHECK(w->s == poly_one(tw, 1));
        CHECK(tw.is_zero(w->torsion));
    }
    SUBCASE("u lies in the hull of (1+u).R + torsion") {
        auto w = hull_contains_bounded(tw, cfg, one_plus_u, u, 2);
        REQUIRE(w.has_value());
        CHECK_FALSE(is_zero(w->r));
        // verify by direct action
        SeriesElem lhs = series_act(tw, u, w->r);
        SeriesElem rhs = series_add(tw, series_act(tw, one_plus_u, w->s),
                                    series_const(tw, w->torsion));
        CHECK(equal_at_precision(tw, lhs, rhs));
        // the direct identity u = (1+u) - 1 makes (1, 1, torsion 1) the least witness
        CHECK(w->r == poly_one(tw, 1));
        CHECK(w->s == poly_one(tw, 1));
        CHECK(w->torsion == tw.one(1));
    }
    SUBCASE("t-root relation: z = u^(1/2) against a = u") {
        const SeriesElem z = t_root(tw, cfg, u);
        auto w = hull_contains_bounded(tw, cfg, u, z, 2);
        REQUIRE(w.has_value());
        CHECK(w->r == poly_t(tw, 1));
        CHECK(w->s == poly_one(tw, 1));
        CHECK(tw.is_zero(w->torsion));
        SeriesElem lhs = series_act(tw, z, w->r);
        SeriesElem rhs = series_act(tw, u, w->s);
        CHECK(equal_at_precision(tw, lhs, rhs));
    }
    SUBCASE("the hull is closed under division: t-root chains stay inside") {
        // u^(1/2) and u^(1/4) both land in the hull of u.R + torsion, with
        // witnesses t and t^2 (the value set of the hull closes under the
        // inverse of tau)
        SeriesElem z1 = t_root(tw, cfg, u);
        SeriesElem z2 = t_root(tw, cfg, z1);
        auto w1 = hull_contains_bounded(tw, cfg, u, z1, 2);
        auto w2 = hull_contains_bounded(tw, cfg, u, z2, 2);
        REQUIRE(w1.has_value());
        REQUIRE(w2.has_value());
        CHECK(w1->r == poly_t(tw, 1));
        CHECK(w2->r == poly_t_pow(tw, 2, 1));
        CHECK(w2->s == poly_one(tw, 1));
    }
    SUBCASE("witnesses always verify by direct action") {
        Config c2 = cfg;
        std::vector<std::pair<SeriesElem, SeriesElem>> cases = {
            {u, series_act(tw, u, make_poly(tw, 1, {tw.one(1), tw.one(1)}))},
            {one_plus_u, series_add(tw, u, series_const(tw, tw.generator(2)))},
        };
        for (const auto& [a, z] : cases) {
            auto w = hull_contains_bounded(tw, c2, a, z, 3);
            if (!w) continue;
            SeriesElem lhs = series_act(tw, z, w->r);
            SeriesElem rhs = series_add(tw, series_act(tw, a, w->s),
                                        series_const(tw, w->torsion));
            CHECK(equal_at_precision(tw, lhs, rhs));
            CHECK_FALSE(is_zero(w->r));
        }
    }
}
