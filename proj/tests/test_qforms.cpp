#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <set>

#include "selberg/oracle.hpp"
#include "selberg/qforms.hpp"

using namespace selberg;
using qforms::Mat2i;
using qforms::Mat2z;
using qforms::QuadForm;

namespace {

bool valid_disc(long long d) {
    long long r = d % 4;
    if (d < 5 || (r != 0 && r != 1)) return false;
    return !arith::isqrt_u64(static_cast<std::uint64_t>(d)).exact;
}

// random word in the standard generators, entries kept small
Mat2i random_word(std::mt19937_64& rng, int len) {
    Mat2i g;
    for (int i = 0; i < len; ++i) {
        long long m11 = g.m11, m12 = g.m12, m21 = g.m21, m22 = g.m22;
        switch (rng() % 3) {
            case 0:  // right-multiply by T = [[1,1],[0,1]]
                g = Mat2i{m11, m11 + m12, m21, m21 + m22};
                break;
            case 1:  // T^-1
                g = Mat2i{m11, m12 - m11, m21, m22 - m21};
                break;
            default:  // S = [[0,1],[-1,0]]
                g = Mat2i{-m12, m11, -m22, m21};
                break;
        }
    }
    return g;
}

const QuadForm kSeed{1, 1, -1};

}  // namespace

TEST_CASE("discriminant on fixed forms") {
    CHECK(qforms::discriminant(QuadForm{1, 1, -1}).value() == 5);
    CHECK(qforms::discriminant(QuadForm{1, 2, -2}).value() == 12);
    CHECK(qforms::discriminant(QuadForm{1, 4, -4}).value() == 32);
    CHECK_THROWS_AS(qforms::discriminant(QuadForm{1, 0, 1}), std::invalid_argument);  // -4
    CHECK_THROWS_AS(qforms::discriminant(QuadForm{1, 3, 0}), std::invalid_argument);  // 9
}

TEST_CASE("apply_transform identity, worked example, and invariants") {
    Mat2i id;
    CHECK(qforms::apply_transform(kSeed, id) == kSeed);

    Mat2i S{0, 1, -1, 0};
    CHECK(qforms::apply_transform(kSeed, S) == QuadForm{-1, -1, 1});

    Mat2i notuni{1, 0, 0, -1};
    CHECK_THROWS_AS(qforms::apply_transform(kSeed, notuni), std::invalid_argument);

    std::mt19937_64 rng(2024);
    for (int i = 0; i < 1000; ++i) {
        long long d = 5 + static_cast<long long>(rng() % 995);
        if (!valid_disc(d)) continue;
        auto forms = qforms::reduced_forms(arith::Discriminant(d));
        QuadForm q = forms[rng() % forms.size()];
        Mat2i g = random_word(rng, 1 + static_cast<int>(rng() % 8));
        QuadForm q2 = qforms::apply_transform(q, g);
        CHECK(qforms::disc_raw(q2) == d);
        CHECK(qforms::is_primitive(q2));
    }
}

TEST_CASE("rho_step cycles: D=5 closes, D=12 has two disjoint cycles") {
    QuadForm q = kSeed;
    int steps = 0;
    do {
        q = qforms::rho_step(q);
        CHECK(qforms::disc_raw(q) == 5);
        ++steps;
        REQUIRE(steps < 100);
    } while (!(q == kSeed));
    CHECK(steps % 2 == 0);

    QuadForm start{1, 2, -2};
    QuadForm other{-1, 2, 2};
    q = start;
    steps = 0;
    do {
        q = qforms::rho_step(q);
        CHECK(!(q == other));
        ++steps;
        REQUIRE(steps < 100);
    } while (!(q == start));

    CHECK_THROWS_AS(qforms::rho_step(QuadForm{1, 0, -5}), std::invalid_argument);
}

TEST_CASE("rho permutes the reduced forms of every D <= 1000") {
    for (long long d = 5; d <= 1000; ++d) {
        if (!valid_disc(d)) continue;
        auto forms = qforms::reduced_forms(arith::Discriminant(d));
        std::set<QuadForm> images;
        for (const auto& f : forms) {
            CHECK(qforms::is_reduced(f));
            images.insert(qforms::rho_step(f));
        }
        CHECK_MESSAGE(images.size() == forms.size(), "D=", d);
        CHECK(std::set<QuadForm>(forms.begin(), forms.end()) == images);
    }
}

TEST_CASE("reduce lands in the right cycle and terminates") {
    auto cycles5 = qforms::reduced_cycles(arith::Discriminant(5));
    REQUIRE(cycles5.size() == 1);
    QuadForm r = qforms::reduce(kSeed);
    bool in_cycle = false;
    for (const auto& f : cycles5[0]) in_cycle |= (f == r);
    CHECK(in_cycle);

    QuadForm big = qforms::reduce(QuadForm{1, 0, -5});
    CHECK(qforms::is_reduced(big));
    CHECK(qforms::disc_raw(big) == 20);

    // reduce(Q.g) is equivalent to reduce(Q): same rho-cycle
    std::mt19937_64 rng(7);
    for (int i = 0; i < 300; ++i) {
        long long d = 5 + static_cast<long long>(rng() % 495);
        if (!valid_disc(d)) continue;
        auto forms = qforms::reduced_forms(arith::Discriminant(d));
        QuadForm q = forms[rng() % forms.size()];
        Mat2i g = random_word(rng, 1 + static_cast<int>(rng() % 10));
        QuadForm a = qforms::reduce(qforms::apply_transform(q, g));
        QuadForm b = qforms::reduce(q);
        QuadForm cur = b;
        bool found = false;
        for (int k = 0; k < 10000; ++k) {
            if (cur == a) {
                found = true;
                break;
            }
            cur = qforms::rho_step(cur);
            if (cur == b) break;
        }
        CHECK_MESSAGE(found, "d=", d, " i=", i);
    }
}

TEST_CASE("class numbers match the orbit oracle on fixed values and a sweep") {
    oracle::OracleBudget budget;
    // oracle-first: the fixed values are pinned by the independent oracle
    auto h5 = oracle::brute_class_number(arith::Discriminant(5), budget);
    auto h12 = oracle::brute_class_number(arith::Discriminant(12), budget);
    auto h32 = oracle::brute_class_number(arith::Discriminant(32), budget);
    REQUIRE(h5.has_value());
    REQUIRE(h12.has_value());
    REQUIRE(h32.has_value());
    CHECK(*h5 == 1);
    CHECK(*h12 == 2);
    CHECK(*h32 == 2);
    CHECK(qforms::class_number(arith::Discriminant(5)) == 1);
    CHECK(qforms::class_number(arith::Discriminant(12)) == 2);
    CHECK(qforms::class_number(arith::Discriminant(32)) == 2);

    for (long long d = 5; d <= 150; ++d) {
        if (!valid_disc(d)) continue;
        auto oracle_h = oracle::brute_class_number(arith::Discriminant(d), budget);
        REQUIRE_MESSAGE(oracle_h.has_value(), "D=", d);
        CHECK_MESSAGE(qforms::class_number(arith::Discriminant(d)) == *oracle_h, "D=", d);
    }
}

TEST_CASE("class_number >= 1 and the analytic formula rounds to it") {
    CHECK(qforms::class_number_via_formula(arith::Discriminant(5)) ==
          doctest::Approx(1.0).epsilon(1e-3));
    CHECK(qforms::class_number_via_formula(arith::Discriminant(12)) ==
          doctest::Approx(2.0).epsilon(1e-3));
    for (long long d = 5; d <= 2000; ++d) {
        if (!valid_disc(d)) continue;
        long long h = qforms::class_number(arith::Discriminant(d));
        CHECK(h >= 1);
        double via = qforms::class_number_via_formula(arith::Discriminant(d));
        CHECK_MESSAGE(std::llround(via) == h, "D=", d, " via=", via);
    }
}

TEST_CASE("divisor and congruence enumerations agree across the switch region") {
    std::mt19937_64 rng(5);
    auto check = [](long long d) {
        if (!valid_disc(d)) return;
        arith::Discriminant D(d);
        CHECK_MESSAGE(qforms::detail::reduced_forms_divisor_path(D) ==
                          qforms::detail::reduced_forms_congruence_path(D),
                      "D=", d);
    };
    for (long long d = 5; d <= 1200; ++d) check(d);
    for (long long d = 3999900; d <= 4000100; ++d) check(d);
    for (int i = 0; i < 25; ++i) check(5 + static_cast<long long>(rng() % 50000000));
}

TEST_CASE("form/matrix correspondence and round trips") {
    arith::PellSolution sol;
    sol.t = 3;
    sol.u = 1;
    sol.D = 5;
    sol.j = 1;
    auto g = qforms::form_to_matrix(kSeed, sol);
    CHECK(g.m11 == 2);
    CHECK(g.m12 == 1);
    CHECK(g.m21 == 1);
    CHECK(g.m22 == 1);
    CHECK(qforms::det(g) == 1);
    CHECK(qforms::trace(g) == 3);

    auto back = qforms::matrix_to_form(g);
    CHECK(back.q == kSeed);
    CHECK(back.t == 3);
    CHECK(back.u == 1);

    Mat2z nothyp;
    nothyp.m11 = 1;
    nothyp.m12 = 1;
    nothyp.m21 = 0;
    nothyp.m22 = 1;
    CHECK_THROWS_AS(qforms::matrix_to_form(nothyp), std::invalid_argument);

    // round trip across random (Q, eps_1^j) with trace <= 1000
    std::mt19937_64 rng(100);
    int done = 0;
    while (done < 1000) {
        long long d = 5 + static_cast<long long>(rng() % 995);
        if (!valid_disc(d)) continue;
        auto fund = arith::pell_fundamental(arith::Discriminant(d));
        long long j = 1 + static_cast<long long>(rng() % 3);
        arith::PellSolution sj = arith::pell_power(fund, j);
        if (sj.t > 1000) continue;
        auto forms = qforms::reduced_forms(arith::Discriminant(d));
        QuadForm q = forms[rng() % forms.size()];
        auto mat = qforms::form_to_matrix(q, sj);
        CHECK(qforms::det(mat) == 1);
        CHECK(qforms::trace(mat) == sj.t);
        auto rt = qforms::matrix_to_form(mat);
        CHECK(rt.q == q);
        CHECK(rt.t == sj.t);
        CHECK(rt.u == sj.u);
        // the discriminant identity (t^2-4)/u^2 = b^2-4ac
        mpz_class lhs = (rt.t * rt.t - 4) / (rt.u * rt.u);
        CHECK(lhs == arith::to_mpz(qforms::disc_raw(rt.q)));
        ++done;
    }
}
