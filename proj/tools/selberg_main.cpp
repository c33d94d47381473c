// selberg: compute and cache length spectra, evaluate the smoothed
// explicit-formula sum and its mean square, and run the verification
// suites.  Exit codes: 0 success, 1 verification failure, 2 usage/IO.
#include <cmath>
#include <complex>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "selberg/arith.hpp"
#include "selberg/oracle.hpp"
#include "selberg/parallel.hpp"
#include "selberg/qforms.hpp"
#include "selberg/spectrum.hpp"
#include "selberg/spectrum_io.hpp"
#include "selberg/zeta.hpp"

namespace {

using nlohmann::ordered_json;
using selberg::arith::Discriminant;
using selberg::spectrum::SpectrumTable;
using selberg::spectrum::WeightMode;

std::string fmt(double v) { return selberg::spectrum::format_double(v); }

WeightMode parse_weight(const std::string& spec) {
    if (spec == "unity") return WeightMode::unity();
    if (spec.rfind("index:", 0) == 0) {
        long long k = std::stoll(spec.substr(6));
        return WeightMode::index_bound(k);
    }
    if (spec.rfind("table:", 0) == 0) {
        auto path = spec.substr(6);
        auto values = selberg::spectrum::read_weight_table(path);
        return WeightMode::from_table(std::move(values), spec);
    }
    throw std::runtime_error("bad --weight '" + spec + "' (unity | index:<k> | table:<path>)");
}

SpectrumTable load_cache(const std::string& path) {
    return selberg::spectrum::read_cache(path);
}

int cmd_spectrum(double xmax, const std::string& weight_spec, const std::string& out_path,
                 int threads) {
    if (!(xmax > 3)) throw std::runtime_error("--xmax must be > 3");
    WeightMode w = parse_weight(weight_spec);
    if (std::filesystem::exists(out_path)) {
        try {
            SpectrumTable existing = load_cache(out_path);
            if (existing.X == xmax && existing.weight.spec == w.spec) {
                mpq_class max_m = 0;
                for (const auto& e : existing.entries) max_m = std::max(max_m, e.m);
                std::cout << "cache up-to-date: " << out_path
                          << " entries=" << existing.entries.size()
                          << " max_m=" << fmt(mpq_get_d(max_m.get_mpq_t())) << "\n";
                return 0;
            }
        } catch (const std::exception&) {
            // stale or foreign file: rebuild below
        }
    }
    SpectrumTable table = selberg::spectrum::build_table(xmax, w, threads);
    selberg::spectrum::write_cache(table, out_path);
    mpq_class max_m = 0;
    for (const auto& e : table.entries) max_m = std::max(max_m, e.m);
    std::cout << "wrote " << out_path << " entries=" << table.entries.size()
              << " max_m=" << fmt(mpq_get_d(max_m.get_mpq_t())) << "\n";
    return 0;
}

int cmd_phi(double sigma, double t, double x, const std::string& cache,
            const std::string& format) {
    SpectrumTable table = load_cache(cache);
    std::complex<double> v = selberg::zeta::phi({sigma, t, x}, table);
    if (format == "json") {
        ordered_json j;
        j["sigma"] = sigma;
        j["t"] = t;
        j["x"] = x;
        j["re"] = v.real();
        j["im"] = v.imag();
        j["abs"] = std::abs(v);
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "re,im,abs\n"
                  << fmt(v.real()) << "," << fmt(v.imag()) << "," << fmt(std::abs(v)) << "\n";
    }
    return 0;
}

int cmd_sqint(double sigma, double T, double x, const std::string& cache,
              const std::string& format, int threads) {
    SpectrumTable table = load_cache(cache);
    auto r = selberg::zeta::square_integral_mean(sigma, T, x, table, threads);
    if (format == "json") {
        ordered_json j;
        j["sigma"] = r.sigma;
        j["T"] = r.T;
        j["x"] = r.x;
        j["mean"] = r.mean;
        j["diagonal"] = r.diagonal;
        j["offdiagonal"] = r.offdiagonal;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "sigma,T,x,mean,diagonal,offdiagonal\n"
                  << fmt(r.sigma) << "," << fmt(r.T) << "," << fmt(r.x) << "," << fmt(r.mean)
                  << "," << fmt(r.diagonal) << "," << fmt(r.offdiagonal) << "\n";
    }
    return 0;
}

int cmd_cconst(double sigma, long long N, const std::string& cache, const std::string& format) {
    SpectrumTable table = load_cache(cache);
    auto r = selberg::zeta::c_constant(sigma, table, N);
    if (format == "json") {
        ordered_json j;
        j["sigma"] = sigma;
        j["N"] = N;
        j["partial"] = r.partial;
        j["tail_bound"] = r.tail_bound;
        j["tail_heuristic"] = true;
        std::cout << j.dump() << "\n";
    } else {
        std::cout << "sigma,N,partial,tail_bound,tail_heuristic\n"
                  << fmt(sigma) << "," << N << "," << fmt(r.partial) << "," << fmt(r.tail_bound)
                  << ",heuristic\n";
    }
    return 0;
}

int cmd_pgt(double xmax, const std::string& weight_spec, const std::string& cache,
            const std::string& format) {
    if (!(xmax > 5)) throw std::runtime_error("--xmax must be > 5");
    SpectrumTable table = load_cache(cache);
    if (!weight_spec.empty() && weight_spec != table.weight.spec)
        throw std::runtime_error("--weight '" + weight_spec + "' does not match cache weight '" +
                                 table.weight.spec + "'");
    if (selberg::zeta::cutoff_X(xmax) > table.X)
        throw std::runtime_error("cache does not cover xmax (needs X >= " +
                                 std::to_string(selberg::zeta::cutoff_X(xmax)) + ")");
    // log grid: 8 points per decade starting at 5
    std::vector<double> grid;
    for (int i = 0;; ++i) {
        double x = 5.0 * std::pow(10.0, static_cast<double>(i) / 8.0);
        if (x > xmax) break;
        grid.push_back(x);
    }
    if (format == "json") {
        ordered_json rows = ordered_json::array();
        for (double x : grid) {
            double count = selberg::zeta::prime_geodesic_count(x, table);
            double lix = selberg::zeta::li(x);
            ordered_json j;
            j["x"] = x;
            j["count"] = count;
            j["li"] = lix;
            j["count_minus_li"] = count - lix;
            rows.push_back(j);
        }
        std::cout << rows.dump() << "\n";
    } else {
        std::cout << "x,count,li,count_minus_li\n";
        for (double x : grid) {
            double count = selberg::zeta::prime_geodesic_count(x, table);
            double lix = selberg::zeta::li(x);
            std::cout << fmt(x) << "," << fmt(count) << "," << fmt(lix) << ","
                      << fmt(count - lix) << "\n";
        }
    }
    return 0;
}

struct VerifyReport {
    int failures = 0;
    void check(const std::string& name, bool ok, const std::string& detail = "") {
        if (ok) {
            std::cout << name << ": PASS\n";
        } else {
            ++failures;
            std::cout << name << ": FAIL" << (detail.empty() ? "" : " (" + detail + ")") << "\n";
        }
    }
};

void verify_pell(VerifyReport& rep, const selberg::oracle::OracleBudget& budget, long long dmax) {
    long long checked = 0, skipped = 0;
    std::string bad;
    for (long long d = 5; d <= dmax; ++d) {
        long long r = d % 4;
        if (r != 0 && r != 1) continue;
        if (selberg::arith::isqrt_u64(static_cast<std::uint64_t>(d)).exact) continue;
        Discriminant D(d);
        auto oracle = selberg::oracle::brute_pell(D, budget);
        if (!oracle) {
            ++skipped;
            continue;
        }
        auto fast = selberg::arith::pell_fundamental(D);
        ++checked;
        if (fast.t != oracle->t || fast.u != oracle->u) {
            bad = "D=" + std::to_string(d);
            break;
        }
    }
    rep.check("pell:cf-vs-brute[D<=" + std::to_string(dmax) + "]", bad.empty(),
              bad.empty() ? ""
                          : bad + " mismatch; checked=" + std::to_string(checked) +
                                " skipped=" + std::to_string(skipped));
    std::cout << "  # conclusive=" << checked << " inconclusive=" << skipped << "\n";
}

void verify_class(VerifyReport& rep, const selberg::oracle::OracleBudget& budget,
                  long long dmax_orbit, long long dmax_formula) {
    std::string bad;
    for (long long d = 5; d <= dmax_orbit; ++d) {
        long long r = d % 4;
        if (r != 0 && r != 1) continue;
        if (selberg::arith::isqrt_u64(static_cast<std::uint64_t>(d)).exact) continue;
        Discriminant D(d);
        auto oracle = selberg::oracle::brute_class_number(D, budget);
        if (!oracle) continue;
        if (selberg::qforms::class_number(D) != *oracle) {
            bad = "D=" + std::to_string(d);
            break;
        }
    }
    rep.check("class:cycles-vs-orbits[D<=" + std::to_string(dmax_orbit) + "]", bad.empty(), bad);

    std::string bad2;
    for (long long d = 5; d <= dmax_formula; ++d) {
        long long r = d % 4;
        if (r != 0 && r != 1) continue;
        if (selberg::arith::isqrt_u64(static_cast<std::uint64_t>(d)).exact) continue;
        Discriminant D(d);
        double viaL = selberg::qforms::class_number_via_formula(D);
        if (std::llround(viaL) != selberg::qforms::class_number(D)) {
            bad2 = "D=" + std::to_string(d) + " formula=" + fmt(viaL);
            break;
        }
    }
    rep.check("class:formula-roundtrip[D<=" + std::to_string(dmax_formula) + "]", bad2.empty(),
              bad2);
}

void verify_mult(VerifyReport& rep, const selberg::oracle::OracleBudget& budget, long long nmax) {
    std::string bad;
    WeightMode unity = WeightMode::unity();
    for (long long n = 3; n <= nmax; ++n) {
        auto oracle = selberg::oracle::brute_multiplicity(n, budget);
        if (!oracle) continue;
        auto [m, comps] = selberg::spectrum::multiplicity(n, unity);
        if (m != *oracle) {
            bad = "n=" + std::to_string(n);
            break;
        }
    }
    rep.check("mult:eq34-vs-oracle[n<=" + std::to_string(nmax) + "]", bad.empty(), bad);
}

void verify_quad(VerifyReport& rep, const selberg::oracle::OracleBudget& budget, int threads) {
    WeightMode unity = WeightMode::unity();
    SpectrumTable table = selberg::spectrum::build_table(50.0, unity, threads);
    std::string bad;
    for (double sigma : {0.6, 0.75, 0.9}) {
        for (double T : {10.0, 50.0}) {
            for (double x : {100.0, 2000.0}) {
                auto analytic = selberg::zeta::square_integral_mean(sigma, T, x, table, threads);
                selberg::oracle::OracleBudget b = budget;
                b.quad_tol = std::max(budget.quad_tol, 3e-8 * std::fabs(analytic.mean));
                double quad = selberg::oracle::quad_square_integral(sigma, T, x, table, b);
                double rel = std::fabs(analytic.mean - quad) / std::max(1e-300, std::fabs(quad));
                if (rel > 1e-6) {
                    bad = "sigma=" + fmt(sigma) + " T=" + fmt(T) + " x=" + fmt(x) +
                          " rel=" + fmt(rel);
                    break;
                }
            }
            if (!bad.empty()) break;
        }
        if (!bad.empty()) break;
    }
    rep.check("quad:closed-form-vs-quadrature", bad.empty(), bad);
}

void verify_cache(VerifyReport& rep, const std::string& cache_path, int threads) {
    SpectrumTable table = load_cache(cache_path);
    WeightMode w = table.weight;
    if (w.kind == WeightMode::Kind::table)
        w = parse_weight(w.spec);  // reload lambda values from the table file
    std::string bad;
    std::vector<std::string> field(table.entries.size());
    selberg::parallel_for(0, static_cast<long long>(table.entries.size()), threads,
                          [&](long long i) {
        const auto& e = table.entries[static_cast<std::size_t>(i)];
        auto [m, comps] = selberg::spectrum::multiplicity(e.n, w);
        std::string why;
        if (m != e.m) why = "m";
        if (why.empty() && comps.size() != e.components.size()) why = "components";
        if (why.empty()) {
            for (std::size_t k = 0; k < comps.size(); ++k) {
                const auto& a = comps[k];
                const auto& b = e.components[k];
                if (a.u != b.u || a.D != b.D || a.j != b.j || a.h != b.h ||
                    a.lambda != b.lambda) {
                    why = "components";
                    break;
                }
            }
        }
        if (why.empty() && e.log_eps != selberg::spectrum::log_eps_of(e.n)) why = "log_eps";
        if (why.empty() && e.lambda_bar != selberg::spectrum::lambda_bar(e.n)) why = "lambda_bar";
        field[static_cast<std::size_t>(i)] = why;
    });
    for (std::size_t i = 0; i < field.size(); ++i) {
        if (!field[i].empty()) {
            bad = "n=" + std::to_string(table.entries[i].n) + " field=" + field[i];
            break;
        }
    }
    rep.check("cache:" + cache_path, bad.empty(), bad);
}

int cmd_verify(const std::string& suite, const std::string& cache,
               const selberg::oracle::OracleBudget& budget, int threads) {
    VerifyReport rep;
    bool all = suite == "all";
    if (all || suite == "pell") verify_pell(rep, budget, 10000);
    if (all || suite == "class") verify_class(rep, budget, 500, 2000);
    if (all || suite == "mult") verify_mult(rep, budget, 120);
    if (all || suite == "quad") verify_quad(rep, budget, threads);
    if (suite == "cache" || (all && !cache.empty())) {
        if (cache.empty()) throw std::runtime_error("verify --suite cache needs --cache");
        verify_cache(rep, cache, threads);
    }
    if (rep.failures == 0) {
        std::cout << "verify: all checks passed\n";
        return 0;
    }
    std::cout << "verify: " << rep.failures << " check(s) failed\n";
    return 1;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"length spectrum and Selberg zeta square-integral toolkit"};
    app.require_subcommand(1);

    double sigma = 0.9, tval = 0.0, Tval = 100.0, x = 10000.0, xmax = 100.0, tol = 1e-9;
    long long N = 1000;
    int threads = 0;
    std::string weight = "unity", format = "csv", cache, out, suite = "all";
    long long max_u = 100000, max_entry = 0;

    auto* sp = app.add_subcommand("spectrum", "build and cache a spectrum table");
    sp->add_option("--xmax", xmax, "table cutoff X (entries 3 <= n < X)")->required();
    sp->add_option("--weight", weight, "unity | index:<k> | table:<path>");
    sp->add_option("-o,--out", out, "output cache path")->required();
    sp->add_option("--threads", threads, "worker threads (0 = auto)");

    auto* ph = app.add_subcommand("phi", "evaluate the smoothed explicit-formula sum");
    ph->add_option("--sigma", sigma)->required();
    ph->add_option("--t", tval)->required();
    ph->add_option("--x", x)->required();
    ph->add_option("--cache", cache)->required();
    ph->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* sq = app.add_subcommand("sqint", "mean square integral over t in [1,T]");
    sq->add_option("--sigma", sigma)->required();
    sq->add_option("--T", Tval)->required();
    sq->add_option("--x", x)->required();
    sq->add_option("--cache", cache)->required();
    sq->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));
    sq->add_option("--threads", threads);

    auto* cc = app.add_subcommand("cconst", "partial sums of the limiting constant");
    cc->add_option("--sigma", sigma)->required();
    cc->add_option("--N", N)->required();
    cc->add_option("--cache", cache)->required();
    cc->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* pg = app.add_subcommand("pgt", "prime geodesic counts against li(x)");
    pg->add_option("--xmax", xmax)->required();
    pg->add_option("--weight", weight, "must match the cache weight");
    pg->add_option("--cache", cache)->required();
    pg->add_option("--format", format)->check(CLI::IsMember({"csv", "json"}));

    auto* vf = app.add_subcommand("verify", "run oracle cross-validation suites");
    vf->add_option("--suite", suite)->check(CLI::IsMember({"pell", "class", "mult", "quad",
                                                           "cache", "all"}));
    vf->add_option("--cache", cache, "cache file for the cache suite");
    vf->add_option("--max-u", max_u, "Pell search budget");
    vf->add_option("--max-entry", max_entry, "BFS coefficient budget (0 = auto)");
    vf->add_option("--tol", tol, "quadrature tolerance");
    vf->add_option("--threads", threads);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (sp->parsed()) return cmd_spectrum(xmax, weight, out, threads);
        if (ph->parsed()) return cmd_phi(sigma, tval, x, cache, format);
        if (sq->parsed()) return cmd_sqint(sigma, Tval, x, cache, format, threads);
        if (cc->parsed()) return cmd_cconst(sigma, N, cache, format);
        if (pg->parsed()) {
            std::string wspec = pg->count("--weight") ? weight : "";
            return cmd_pgt(xmax, wspec, cache, format);
        }
        if (vf->parsed()) {
            selberg::oracle::OracleBudget budget;
            budget.max_u = max_u;
            budget.max_entry = max_entry;
            budget.quad_tol = tol;
            return cmd_verify(suite, cache, budget, threads);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
