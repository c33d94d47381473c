#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "selberg/oracle.hpp"
#include "selberg/qforms.hpp"
#include "selberg/spectrum.hpp"
#include "selberg/spectrum_io.hpp"

using namespace selberg;
using spectrum::WeightMode;

namespace {

std::filesystem::path temp_file(const std::string& name) {
    auto dir = std::filesystem::temp_directory_path() / "selberg-spectrum-tests";
    std::filesystem::create_directories(dir);
    return dir / name;
}

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

TEST_CASE("u_set on the worked examples") {
    using P = std::pair<long long, long long>;
    CHECK(spectrum::u_set(3) == std::vector<P>{{1, 5}});
    CHECK(spectrum::u_set(4) == std::vector<P>{{1, 12}});         // u=2 gives D=3, excluded
    CHECK(spectrum::u_set(6) == std::vector<P>{{1, 32}, {2, 8}});  // u=4 gives D=2, excluded
    for (long long n = 3; n <= 500; ++n) {
        for (auto [u, d] : spectrum::u_set(n)) {
            CHECK(u * u * d == n * n - 4);
            long long r = d % 4;
            CHECK((r == 0 || r == 1));
        }
    }
}

TEST_CASE("j_index on the worked examples and consistency") {
    CHECK(spectrum::j_index(3, 1, 5) == 1);
    CHECK(spectrum::j_index(7, 3, 5) == 2);
    CHECK(spectrum::j_index(6, 2, 8) == 1);
    // each (u,D) of u_set(n) admits a power index, and eps_j = eps(n)
    for (long long n = 3; n <= 120; ++n) {
        for (auto [u, d] : spectrum::u_set(n)) {
            long long j = spectrum::j_index(n, u, d);
            auto fund = arith::pell_fundamental(arith::Discriminant(d));
            auto powed = arith::pell_power(fund, j);
            CHECK(powed.t == static_cast<long>(n));
            CHECK(powed.u == static_cast<long>(u));
        }
    }
}

TEST_CASE("multiplicity matches the oracle on spot values and a range") {
    oracle::OracleBudget budget;
    WeightMode unity = WeightMode::unity();

    auto m3 = oracle::brute_multiplicity(3, budget);
    auto m4 = oracle::brute_multiplicity(4, budget);
    auto m7 = oracle::brute_multiplicity(7, budget);
    REQUIRE(m3.has_value());
    REQUIRE(m4.has_value());
    REQUIRE(m7.has_value());
    CHECK(*m3 == 1);
    CHECK(*m4 == 2);

    CHECK(spectrum::multiplicity(3, unity).first == *m3);
    CHECK(spectrum::multiplicity(4, unity).first == *m4);

    // m(7) = h(45) + 1/2
    long long h45 = qforms::class_number(arith::Discriminant(45));
    mpq_class expect7 = mpq_class(static_cast<long>(h45)) + mpq_class(1, 2);
    CHECK(spectrum::multiplicity(7, unity).first == expect7);
    CHECK(*m7 == expect7);

    for (long long n = 3; n <= 60; ++n) {
        auto oracle_m = oracle::brute_multiplicity(n, budget);
        REQUIRE_MESSAGE(oracle_m.has_value(), "n=", n);
        CHECK_MESSAGE(spectrum::multiplicity(n, unity).first == *oracle_m, "n=", n);
    }
}

TEST_CASE("weight modes: unity, index bound, table") {
    WeightMode unity = WeightMode::unity();
    WeightMode bound = WeightMode::index_bound(6);
    CHECK(bound.is_bound_mode());
    for (long long n : {3LL, 4LL, 6LL, 7LL, 25LL}) {
        mpq_class mu = spectrum::multiplicity(n, unity).first;
        mpq_class mb = spectrum::multiplicity(n, bound).first;
        CHECK(mb == 6 * mu);
    }

    std::map<long long, mpq_class> lam;
    lam[5] = mpq_class(3, 2);
    WeightMode table = WeightMode::from_table(lam, "table:inline");
    auto [m3, comps3] = spectrum::multiplicity(3, table);
    CHECK(m3 == mpq_class(3, 2));  // lambda(5) * h(5) / 1
    // n=4 needs lambda(12): hard error, not a silent zero
    CHECK_THROWS_AS(spectrum::multiplicity(4, table), std::runtime_error);

    CHECK_THROWS_AS(WeightMode::index_bound(0), std::invalid_argument);
    std::map<long long, mpq_class> neg;
    neg[5] = mpq_class(-1);
    CHECK_THROWS_AS(WeightMode::from_table(neg, "table:neg"), std::invalid_argument);
}

TEST_CASE("scalar helpers: eps, lambda_bar, lambda_bar_x") {
    for (long long n = 3; n <= 2000; ++n) {
        double eps = spectrum::eps_of(n);
        CHECK(std::fabs(eps + 1.0 / eps - static_cast<double>(n)) <= 1e-12 * n);
        // eps solves eps^2 - n eps + 1 = 0
        CHECK(std::fabs(eps * eps - n * eps + 1.0) <= 1e-10 * eps * eps);
        CHECK(spectrum::lambda_bar(n) > 0);
    }
    double e3 = spectrum::eps_of(3);
    CHECK(spectrum::lambda_bar(3) == doctest::Approx(2.25366).epsilon(1e-5));
    CHECK(spectrum::lambda_bar_x(3, e3 * e3) == doctest::Approx(0.0));
    CHECK(spectrum::lambda_bar_x(3, 1e18) == doctest::Approx(spectrum::lambda_bar(3)));
    double expect = spectrum::lambda_bar(3) * (1.0 - e3 * e3 / 1e6);
    CHECK(spectrum::lambda_bar_x(3, 1e6) == doctest::Approx(expect).epsilon(1e-14));
    // negative beyond the cutoff
    CHECK(spectrum::lambda_bar_x(3, 5.0) < 0);
}

TEST_CASE("build_table ranges, positivity, determinism across threads") {
    WeightMode unity = WeightMode::unity();
    auto t35 = spectrum::build_table(3.5, unity);
    REQUIRE(t35.entries.size() == 1);
    CHECK(t35.entries[0].n == 3);

    auto t10 = spectrum::build_table(10.0, unity);
    REQUIRE(t10.entries.size() == 7);  // n = 3..9
    for (const auto& e : t10.entries) CHECK(e.m >= 1);

    // integral X excludes its own endpoint
    auto t9 = spectrum::build_table(9.0, unity);
    CHECK(t9.entries.back().n == 8);

    auto a = spectrum::build_table(120.0, unity, 1);
    auto b = spectrum::build_table(120.0, unity, 4);
    REQUIRE(a.entries.size() == b.entries.size());
    for (std::size_t i = 0; i < a.entries.size(); ++i) {
        CHECK(a.entries[i].m == b.entries[i].m);
        CHECK(a.entries[i].log_eps == b.entries[i].log_eps);
        CHECK(a.entries[i].components.size() == b.entries[i].components.size());
    }

    // exact rational reconstruction from components
    for (const auto& e : a.entries) {
        mpq_class sum = 0;
        for (const auto& c : e.components)
            sum += c.lambda * static_cast<long>(c.h) / mpq_class(static_cast<long>(c.j));
        CHECK(sum == e.m);
    }

    CHECK_THROWS_AS(spectrum::build_table(3.0, unity), std::invalid_argument);
}

TEST_CASE("cache io: round trip is byte-identical and reproduces the table") {
    WeightMode unity = WeightMode::unity();
    auto table = spectrum::build_table(80.0, unity, 2);
    auto p1 = temp_file("roundtrip1.csv");
    auto p2 = temp_file("roundtrip2.csv");
    spectrum::write_cache(table, p1);
    auto loaded = spectrum::read_cache(p1);
    CHECK(loaded.X == table.X);
    CHECK(loaded.weight.spec == table.weight.spec);
    REQUIRE(loaded.entries.size() == table.entries.size());
    for (std::size_t i = 0; i < table.entries.size(); ++i) {
        CHECK(loaded.entries[i].n == table.entries[i].n);
        CHECK(loaded.entries[i].m == table.entries[i].m);
        CHECK(loaded.entries[i].log_eps == table.entries[i].log_eps);
        CHECK(loaded.entries[i].lambda_bar == table.entries[i].lambda_bar);
        REQUIRE(loaded.entries[i].components.size() == table.entries[i].components.size());
        for (std::size_t k = 0; k < table.entries[i].components.size(); ++k) {
            const auto& x = loaded.entries[i].components[k];
            const auto& y = table.entries[i].components[k];
            CHECK(x.u == y.u);
            CHECK(x.D == y.D);
            CHECK(x.j == y.j);
            CHECK(x.h == y.h);
            CHECK(x.lambda == y.lambda);
        }
    }
    spectrum::write_cache(loaded, p2);
    CHECK(slurp(p1) == slurp(p2));
}

TEST_CASE("cache io: malformed input is rejected with a line number") {
    auto p = temp_file("bad.csv");
    {
        std::ofstream out(p);
        out << "# selberg-spectrum v1 X=10 weight=unity\n";
        out << "n,m_num,m_den,log_eps,lambda_bar,components\n";
        out << "3,1,1,0.96,2.25,1:5:1:1:1\n";
        out << "4,2,oops,1.31,2.83,1:12:1:2:1\n";
    }
    try {
        spectrum::read_cache(p);
        FAIL("expected a parse failure");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()).find(":4:") != std::string::npos);
    }
}

TEST_CASE("weight table file parsing") {
    auto p = temp_file("weights.csv");
    {
        std::ofstream out(p);
        out << "# quaternion-style weights\n";
        out << "5,2\n";
        out << "12, 1.5\n";
        out << "32,0\n";
    }
    auto values = spectrum::read_weight_table(p);
    REQUIRE(values.size() == 3);
    CHECK(values[5] == 2);
    CHECK(values[12] == mpq_class(3, 2));
    CHECK(values[32] == 0);

    auto bad = temp_file("weights_bad.csv");
    {
        std::ofstream out(bad);
        out << "5,2\n12\n";
    }
    CHECK_THROWS_AS(spectrum::read_weight_table(bad), std::runtime_error);

    // a zero weight keeps the entry with m = 0
    std::map<long long, mpq_class> z;
    z[5] = 0;
    WeightMode wz = WeightMode::from_table(z, "table:zero");
    auto t = spectrum::build_table(3.5, wz);
    REQUIRE(t.entries.size() == 1);
    CHECK(t.entries[0].m == 0);
}

TEST_CASE("rational parsing corner cases") {
    CHECK(spectrum::parse_rational("2") == 2);
    CHECK(spectrum::parse_rational("1/3") == mpq_class(1, 3));
    CHECK(spectrum::parse_rational("0.25") == mpq_class(1, 4));
    CHECK(spectrum::parse_rational("-1.5") == mpq_class(-3, 2));
    CHECK_THROWS_AS(spectrum::parse_rational("1.2.3"), std::runtime_error);
    CHECK_THROWS_AS(spectrum::parse_rational(""), std::runtime_error);
}
