#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "valmod/pptheory.hpp"

using namespace valmod;

namespace {

Value val_int(std::int64_t n) { return Value::integer(n, 2); }

SkewPoly random_poly(const TowerContext& tw, std::uint32_t m, int max_deg, std::mt19937_64& rng,
                     bool nonzero = false) {
    for (;;) {
        const int d = static_cast<int>(rng() % (max_deg + 1));
        std::vector<FieldElem> c;
        for (int i = 0; i <= d; ++i) c.push_back(tw.elem_at(m, rng() % tw.field_size(m)));
        SkewPoly q = make_poly(tw, m, std::move(c));
        if (!nonzero || !is_zero(q)) return q;
    }
}

bool lower_triangular_shape(const TowerContext&, const Triangularization& tri) {
    const auto& r = tri.paq;
    for (std::size_t j = 0; j < tri.pivots; ++j) {
        if (is_zero(r.at(j, j))) return false;
        for (std::size_t i = 0; i < j; ++i)
            if (!is_zero(r.at(i, j))) return false;
    }
    for (std::size_t i = 0; i < r.rows; ++i)
        for (std::size_t j = tri.pivots; j < r.cols; ++j)
            if (!is_zero(r.at(i, j))) return false;
    return true;
}

MatrixOverR apply_perm(const MatrixOverR& a, const std::vector<std::size_t>& perm) {
    MatrixOverR out(a.rows, a.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) out.at(i, j) = a.at(perm[i], j);
    return out;
}

SeriesElem random_point(const TowerContext& tw, std::mt19937_64& rng) {
    SeriesElem x{2, {}, Value::integer(64, tw.p())};
    const int n = static_cast<int>(rng() % 4);
    for (int i = 0; i < n; ++i) {
        std::int64_t num = static_cast<std::int64_t>(rng() % 9) - 4;
        std::uint32_t k = rng() % 3;
        x.terms.push_back(
            SeriesTerm{Value::fraction(num, k, tw.p()), tw.elem_at(2, rng() % 4)});
    }
    return series_normalize(tw, std::move(x));
}

}  // namespace

TEST_CASE("triangularization") {
    TowerContext tw(2);
    const FieldElem g = tw.generator(2);

    SUBCASE("already lower triangular: no motion") {
        MatrixOverR a(2, 2, 1);
        a.at(0, 0) = poly_t(tw, 1);
        a.at(1, 0) = poly_one(tw, 1);
        a.at(1, 1) = poly_t(tw, 1);
        Triangularization tri = triangularize(tw, a);
        CHECK(tri.pivots == 2);
        CHECK(tri.paq == a);
        CHECK(tri.q == identity_over_r(tw, 2, 1));
        CHECK(tri.perm == std::vector<std::size_t>{0, 1});
    }
    SUBCASE("[t, 1] reduces to [1, 0]") {
        MatrixOverR a(1, 2, 1);
        a.at(0, 0) = poly_t(tw, 1);
        a.at(0, 1) = poly_one(tw, 1);
        Triangularization tri = triangularize(tw, a);
        CHECK(tri.pivots == 1);
        CHECK(tri.paq.at(0, 0) == poly_one(tw, 1));
        CHECK(is_zero(tri.paq.at(0, 1)));
        CHECK(mat_mul(tw, tri.q, tri.q_inv) == identity_over_r(tw, 2, 1));
        CHECK(mat_mul(tw, apply_perm(a, tri.perm), tri.q) == tri.paq);
    }
    SUBCASE("zero matrix has an empty pivot block") {
        MatrixOverR a(2, 3, 1);
        Triangularization tri = triangularize(tw, a);
        CHECK(tri.pivots == 0);
        CHECK(lower_triangular_shape(tw, tri));
    }
    SUBCASE("shape and unimodularity on 50 random 2x3 matrices over F_4") {
        std::mt19937_64 rng(30);
        for (int i = 0; i < 50; ++i) {
            MatrixOverR a(2, 3, 2);
            for (auto& e : a.e) e = random_poly(tw, 2, 3, rng);
            Triangularization tri = triangularize(tw, a);
            CHECK(lower_triangular_shape(tw, tri));
            CHECK(mat_mul(tw, apply_perm(a, tri.perm), tri.q) == tri.paq);
            const std::uint32_t m = tri.q.e.front().field_degree;
            CHECK(mat_mul(tw, tri.q, tri.q_inv) == identity_over_r(tw, 3, m));
            CHECK(mat_mul(tw, tri.q_inv, tri.q) == identity_over_r(tw, 3, m));
        }
    }
}

TEST_CASE("reduction to atomic systems") {
    TowerContext tw(2);
    SkewPoly t1 = make_poly(tw, 1, {tw.one(1), tw.one(1)});

    SUBCASE("EX y : (y.q = x and x.r = 0) keeps only x.r = 0") {
        // equations: y q - x = 0 ; x r = 0
        PPFormula f;
        f.a = MatrixOverR(1, 2, 1);
        f.a.at(0, 0) = mul(tw, poly_t(tw, 1), t1);  // q = t(t+1)
        f.b = MatrixOverR(1, 2, 1);
        f.b.at(0, 0) = poly_one(tw, 1);
        f.b.at(0, 1) = neg(tw, t1);  // x.r = 0 written as y.0 = x.(-r)
        AtomicSystem at = pp_to_atomic(tw, f);
        REQUIRE(at.single.has_value());
        CHECK(*at.single == t1);
    }
    SUBCASE("EX y : y.1 = x imposes nothing") {
        PPFormula f;
        f.a = MatrixOverR(1, 1, 1);
        f.a.at(0, 0) = poly_one(tw, 1);
        f.b = MatrixOverR(1, 1, 1);
        f.b.at(0, 0) = poly_one(tw, 1);
        AtomicSystem at = pp_to_atomic(tw, f);
        REQUIRE(at.single.has_value());
        CHECK(is_zero(*at.single));
    }
    SUBCASE("two atomic constraints collapse through the gcd") {
        PPFormula f;
        f.a = MatrixOverR(0, 2, 1);
        f.b = MatrixOverR(1, 2, 1);
        f.b.at(0, 0) = t1;                                          // x.(t+1) = 0
        f.b.at(0, 1) = make_poly(tw, 1, {tw.one(1), tw.zero(1), tw.one(1)});  // x.(t^2+1) = 0
        AtomicSystem at = pp_to_atomic(tw, f);
        REQUIRE(at.single.has_value());
        CHECK(*at.single == t1);
    }
}

TEST_CASE("satisfaction in the series model") {
    TowerContext tw(2);
    Config cfg;
    SkewPoly t1 = make_poly(tw, 1, {tw.one(1), tw.one(1)});
    SeriesElem u = series_u_pow(tw, val_int(1));

    SUBCASE("EX y : y.(t+1) = x holds at x = u, witnessed by the lift") {
        PPFormula f;
        f.a = MatrixOverR(1, 1, 1);
        f.a.at(0, 0) = t1;
        f.b = MatrixOverR(1, 1, 1);
        f.b.at(0, 0) = poly_one(tw, 1);
        SatResult r = pp_satisfies(tw, cfg, f, {u});
        REQUIRE(r.satisfied);
        REQUIRE(r.witness.size() == 1);
        CHECK(equal_at_precision(tw, series_act(tw, r.witness[0], t1), u));
    }
    SUBCASE("x.(t+1) = 0 fails at x = u") {
        PPFormula f;
        f.a = MatrixOverR(0, 1, 1);
        f.b = MatrixOverR(1, 1, 1);
        f.b.at(0, 0) = t1;
        SatResult r = pp_satisfies(tw, cfg, f, {u});
        CHECK_FALSE(r.satisfied);
    }
    SUBCASE("every formula holds at the zero point with witness 0") {
        std::mt19937_64 rng(31);
        for (int i = 0; i < 30; ++i) {
            PPFormula f;
            f.a = MatrixOverR(2, 2, 1);
            f.b = MatrixOverR(1, 2, 1);
            for (auto& e : f.a.e) e = random_poly(tw, 1, 2, rng);
            for (auto& e : f.b.e) e = random_poly(tw, 1, 2, rng);
            SatResult r = pp_satisfies(tw, cfg, f, {series_zero(tw)});
            CHECK(r.satisfied);
        }
    }
    SUBCASE("original formula and atomic form agree at random points, witnesses verified") {
        std::mt19937_64 rng(32);
        Config wide = cfg;
        wide.k_max = 16;  // headroom for chained t-roots through the pivots
        int checked = 0;
        for (int i = 0; i < 30; ++i) {
            PPFormula f;
            const std::size_t k = 1 + rng() % 2, m = 1 + rng() % 3;
            f.a = MatrixOverR(k, m, 2);
            f.b = MatrixOverR(1, m, 2);
            for (auto& e : f.a.e) e = random_poly(tw, 2, 2, rng);
            for (auto& e : f.b.e) e = random_poly(tw, 2, 2, rng);
            AtomicSystem at = pp_to_atomic(tw, f);
            REQUIRE(at.single.has_value());
            for (int j = 0; j < 10; ++j) {
                SeriesElem x = random_point(tw, rng);
                SatResult r;
                try {
                    r = pp_satisfies(tw, wide, f, {x});
                } catch (const DomainError& e) {
                    CHECK(std::string(e.name()) == "denominator-budget-exhausted");
                    continue;
                }
                const bool atomic_holds = series_act(tw, x, *at.single).terms.empty();
                CHECK(r.satisfied == atomic_holds);
                if (r.satisfied) {
                    // verify the witness column by column
                    for (std::size_t col = 0; col < m; ++col) {
                        SeriesElem lhs = series_zero(tw);
                        for (std::size_t row = 0; row < k; ++row)
                            lhs = series_add(tw, lhs,
                                             series_act(tw, r.witness[row], f.a.at(row, col)));
                        SeriesElem rhs = series_act(tw, x, f.b.at(0, col));
                        CHECK(equal_at_precision(tw, lhs, rhs));
                    }
                }
                ++checked;
            }
        }
        CHECK(checked >= 280);
    }
}

TEST_CASE("quotient invariants") {
    TowerContext tw(2);
    Config cfg;
    SkewPoly t1 = make_poly(tw, 1, {tw.one(1), tw.one(1)});
    TheoryDescriptor T = theory_of_bigmodel(tw, cfg, 1, 2);

    SUBCASE("q = (t+1)^2, s = t+1 gives r' = t+1 and 4 = 2*2") {
        QuotientResult r = quotient_invariant(tw, cfg, mul(tw, t1, t1), t1, T);
        CHECK(r.r_prime == t1);
        CHECK(r.precondition_checked);
        CHECK(eta(tw, cfg, mul(tw, t1, t1)).count ==
              eta(tw, cfg, t1).count * eta(tw, cfg, r.r_prime).count);
    }
    SUBCASE("q = s gives r' = 1") {
        QuotientResult r = quotient_invariant(tw, cfg, t1, t1, T);
        CHECK(r.r_prime == poly_one(tw, 1));
    }
    SUBCASE("q = t(t+1), s = t goes through the rootless-head path") {
        SkewPoly q = mul(tw, poly_t(tw, 1), t1);
        QuotientResult r = quotient_invariant(tw, cfg, q, poly_t(tw, 1), T);
        CHECK(eta(tw, cfg, r.r_prime).count == 2);
        CHECK(eta(tw, cfg, q).count ==
              eta(tw, cfg, poly_t(tw, 1)).count * eta(tw, cfg, r.r_prime).count);
    }
    SUBCASE("contract eta(q) = eta(s) eta(r') over valid pairs of degree <= 2") {
        std::vector<SkewPoly> polys;
        for (std::uint32_t d = 1; d <= 2; ++d)
            for_each_monic(tw, 1, d, [&](const SkewPoly& q) {
                polys.push_back(q);
                return true;
            });
        for (const auto& q : polys)
            for (const auto& s : polys) {
                // validity: every root of s kills q
                AnnSet as = ann_roots(tw, cfg, s);
                bool valid = true;
                for (const auto& x : as.roots)
                    valid = valid && tw.is_zero(const_act(tw, x, q));
                if (!valid) continue;
                QuotientResult r = quotient_invariant(tw, cfg, q, s, T);
                CHECK(eta(tw, cfg, q).count ==
                      eta(tw, cfg, s).count * eta(tw, cfg, r.r_prime).count);
            }
    }
    SUBCASE("contract also holds over F_4") {
        Config wide = cfg;
        wide.m_max = 40;
        TowerContext tw4(2, 1, wide.m_max);
        TheoryDescriptor T4 = theory_of_bigmodel(tw4, wide, 2, 2);
        std::vector<SkewPoly> polys;
        for (std::uint32_t d = 1; d <= 2; ++d)
            for_each_monic(tw4, 2, d, [&](const SkewPoly& q) {
                polys.push_back(q);
                return true;
            });
        std::mt19937_64 rng(35);
        int valid_checked = 0;
        for (int i = 0; i < 120 && valid_checked < 40; ++i) {
            const SkewPoly& q = polys[rng() % polys.size()];
            const SkewPoly& s = polys[rng() % polys.size()];
            AnnSet as = ann_roots(tw4, wide, s);
            bool valid = true;
            for (const auto& x : as.roots)
                valid = valid && tw4.is_zero(const_act(tw4, x, q));
            if (!valid) continue;
            QuotientResult r = quotient_invariant(tw4, wide, q, s, T4);
            CHECK(eta(tw4, wide, q).count ==
                  eta(tw4, wide, s).count * eta(tw4, wide, r.r_prime).count);
            ++valid_checked;
        }
        CHECK(valid_checked >= 20);
    }
}

TEST_CASE("pp indexes") {
    TowerContext tw(2);
    Config cfg;
    SkewPoly t1 = make_poly(tw, 1, {tw.one(1), tw.one(1)});
    TheoryDescriptor T = theory_of_bigmodel(tw, cfg, 1, 2);
    auto atomic_formula = [&](const SkewPoly& q) {
        PPFormula f;
        f.a = MatrixOverR(0, 1, 1);
        f.b = MatrixOverR(1, 1, 1);
        f.b.at(0, 0) = q;
        return f;
    };

    SUBCASE("|ann((t+1)^2) / ann(t+1)| = 2") {
        EtaCount idx = pp_index(tw, cfg, atomic_formula(t1), atomic_formula(mul(tw, t1, t1)), T);
        CHECK_FALSE(idx.infinite);
        CHECK(idx.value == 2);
    }
    SUBCASE("phi = psi gives 1") {
        EtaCount idx = pp_index(tw, cfg, atomic_formula(t1), atomic_formula(t1), T);
        CHECK(idx.value == 1);
    }
    SUBCASE("x.0 = 0 over a torsion condition is infinite") {
        EtaCount idx = pp_index(tw, cfg, atomic_formula(t1), atomic_formula(poly_zero(1)), T);
        CHECK(idx.infinite);
    }
    SUBCASE("multi-variable formulas are rejected") {
        PPFormula f;
        f.a = MatrixOverR(0, 1, 1);
        f.b = MatrixOverR(2, 1, 1);
        CHECK_THROWS_AS(pp_index(tw, cfg, f, f, T), DomainError);
    }
}

TEST_CASE("theory descriptors") {
    TowerContext tw(2);
    Config cfg;

    SUBCASE("the degree-1 table over F_2 is {t -> 1, t+1 -> 2}") {
        TheoryDescriptor t = theory_of_bigmodel(tw, cfg, 1, 1);
        REQUIRE(t.table.size() == 2);
        CHECK(t.table[0].first == poly_t(tw, 1));
        CHECK(t.table[0].second == EtaCount::finite(1));
        CHECK(t.table[1].first == make_poly(tw, 1, {tw.one(1), tw.one(1)}));
        CHECK(t.table[1].second == EtaCount::finite(2));
        CHECK(t.theta_realized == true);
    }
    SUBCASE("entries are powers of |K_0|") {
        for (std::uint32_t kdeg : {1u, 2u}) {
            TheoryDescriptor t = theory_of_bigmodel(tw, cfg, kdeg, 2);
            const std::uint64_t k0 = tw.fixed_subfield_size(kdeg);
            for (const auto& [key, v] : t.table) {
                REQUIRE_FALSE(v.infinite);
                std::uint64_t w = v.value;
                while (w > 1) {
                    CHECK(w % k0 == 0);
                    w /= k0;
                }
            }
        }
    }
    SUBCASE("over F_4 the orbit {t+c} collapses to the single key t+1") {
        TheoryDescriptor t = theory_of_bigmodel(tw, cfg, 2, 1);
        REQUIRE(t.table.size() == 2);
        CHECK(t.table[0].first == poly_t(tw, 2));
        CHECK(t.table[1].first == make_poly(tw, 2, {tw.one(2), tw.one(2)}));
        // the annihilator of t+1 over F_4 with phi = squaring is F_2
        CHECK(t.table[1].second == EtaCount::finite(2));
    }
}

TEST_CASE("equivalence deciders") {
    TowerContext tw(2);
    Config cfg;
    TheoryDescriptor T1 = theory_of_bigmodel(tw, cfg, 1, 2);

    SUBCASE("reflexivity") {
        EquivResult r = decide_equiv_divisible(T1, T1);
        CHECK(r.equivalent);
        CHECK(decide_equiv_ake(T1, T1).equivalent);
    }
    SUBCASE("a planted disagreement is found at the least key") {
        TheoryDescriptor T2 = T1;
        // bump the entry of t+1 (the least non-t key)
        for (auto& [k, v] : T2.table)
            if (k == make_poly(tw, 1, {tw.one(1), tw.one(1)})) v = EtaCount::finite(4);
        EquivResult r = decide_equiv_divisible(T1, T2);
        CHECK_FALSE(r.equivalent);
        REQUIRE(r.disagreement.has_value());
        CHECK(*r.disagreement == make_poly(tw, 1, {tw.one(1), tw.one(1)}));
        CHECK_FALSE(decide_equiv_ake(T1, T2).equivalent);
    }
    SUBCASE("contained key ranges compare on the shared part") {
        TheoryDescriptor Tsmall = theory_of_bigmodel(tw, cfg, 1, 1);
        EquivResult r = decide_equiv_divisible(T1, Tsmall);
        CHECK(r.equivalent);
    }
    SUBCASE("private keys on both sides are incomparable") {
        TheoryDescriptor Ta = theory_of_bigmodel(tw, cfg, 1, 1);
        TheoryDescriptor Tb = Ta;
        SkewPoly extra_a = make_poly(tw, 1, {tw.one(1), tw.one(1), tw.one(1)});
        SkewPoly extra_b = make_poly(tw, 1, {tw.one(1), tw.zero(1), tw.one(1), tw.one(1)});
        Ta.table.emplace_back(extra_a, EtaCount::finite(4));
        Tb.table.emplace_back(extra_b, EtaCount::finite(8));
        Ta.sort_table();
        Tb.sort_table();
        CHECK_THROWS_AS(decide_equiv_divisible(Ta, Tb), DomainError);
    }
    SUBCASE("AKE needs matching value-set tags") {
        TheoryDescriptor T2 = T1;
        T2.valueset_tag = "some-other-chain";
        CHECK(decide_equiv_divisible(T1, T2).equivalent);
        CHECK_FALSE(decide_equiv_ake(T1, T2).equivalent);
        TheoryDescriptor T3 = T1;
        T3.valueset_tag.reset();
        CHECK_THROWS_AS(decide_equiv_ake(T1, T3), DomainError);
    }
    SUBCASE("equivalence relation over a generated family") {
        std::vector<TheoryDescriptor> family = {T1, theory_of_bigmodel(tw, cfg, 1, 2),
                                                theory_of_bigmodel(tw, cfg, 1, 2)};
        TheoryDescriptor other = T1;
        for (auto& [k, v] : other.table)
            if (k == poly_t(tw, 1)) v = EtaCount::finite(2);
        family.push_back(other);
        for (const auto& a : family) CHECK(decide_equiv_divisible(a, a).equivalent);
        for (const auto& a : family)
            for (const auto& b : family)
                CHECK(decide_equiv_divisible(a, b).equivalent ==
                      decide_equiv_divisible(b, a).equivalent);
        for (const auto& a : family)
            for (const auto& b : family)
                for (const auto& c : family)
                    if (decide_equiv_divisible(a, b).equivalent &&
                        decide_equiv_divisible(b, c).equivalent)
                        CHECK(decide_equiv_divisible(a, c).equivalent);
    }
}
