#include "selberg/spectrum.hpp"

#include <cmath>
#include <stdexcept>

#include "selberg/parallel.hpp"
#include "selberg/qforms.hpp"

namespace selberg::spectrum {

WeightMode WeightMode::unity() {
    WeightMode w;
    w.kind = Kind::unity;
    w.spec = "unity";
    return w;
}

WeightMode WeightMode::index_bound(long long k) {
    if (k < 1) throw std::invalid_argument("WeightMode::index_bound: k >= 1 required");
    WeightMode w;
    w.kind = Kind::index_bound;
    w.k = k;
    w.spec = "index:" + std::to_string(k);
    return w;
}

WeightMode WeightMode::from_table(std::map<long long, mpq_class> values, std::string spec_string) {
    for (auto& [d, lam] : values)
        if (lam < 0) throw std::invalid_argument("WeightMode::from_table: lambda >= 0 required");
    WeightMode w;
    w.kind = Kind::table;
    w.table = std::move(values);
    w.spec = std::move(spec_string);
    return w;
}

mpq_class WeightMode::lambda(long long D) const {
    switch (kind) {
        case Kind::unity:
            return 1;
        case Kind::index_bound:
            return mpq_class(static_cast<long>(k));
        case Kind::table: {
            auto it = table.find(D);
            if (it == table.end())
                throw std::runtime_error("weight table has no entry for D=" + std::to_string(D));
            return it->second;
        }
    }
    throw std::logic_error("WeightMode::lambda: bad kind");
}

const SpectrumEntry& SpectrumTable::at(long long n) const {
    if (n < 3 || entries.empty() || n - 3 >= static_cast<long long>(entries.size()))
        throw std::out_of_range("SpectrumTable::at: n outside the table");
    const SpectrumEntry& e = entries[static_cast<std::size_t>(n - 3)];
    if (e.n != n) throw std::logic_error("SpectrumTable::at: table not dense");
    return e;
}

double eps_of(long long n) {
    double nd = static_cast<double>(n);
    return (nd + std::sqrt(nd * nd - 4.0)) / 2.0;
}

double log_eps_of(long long n) { return std::log(eps_of(n)); }

double lambda_bar(long long n) {
    double eps = eps_of(n);
    double inv2 = 1.0 / (eps * eps);
    return 2.0 * std::log(eps) / (1.0 - inv2);
}

double lambda_bar_x(long long n, double x) {
    if (!(x > 0)) throw std::invalid_argument("lambda_bar_x: x > 0 required");
    double eps = eps_of(n);
    return lambda_bar(n) * (1.0 - eps * eps / x);
}

std::vector<std::pair<long long, long long>> u_set(long long n) {
    if (n < 3) throw std::invalid_argument("u_set: n >= 3 required");
    std::vector<std::pair<long long, long long>> out;
    long long nn = n * n - 4;
    for (long long u : arith::square_divisors(n)) {
        long long d = nn / (u * u);
        long long r = d % 4;
        if (r == 0 || r == 1) out.emplace_back(u, d);
    }
    return out;
}

long long j_index(long long n, long long u, long long D) {
    arith::PellSolution fund = arith::pell_fundamental(arith::Discriminant(D));
    // eps_j(D) = eps(n) means (t_j, u_j) = (n, u); walk the powers upward.
    arith::PellSolution cur = fund;
    long ln = static_cast<long>(n);
    for (long long j = 1; cur.t <= ln; ++j) {
        if (cur.t == ln) {
            if (cur.u != static_cast<long>(u))
                throw std::logic_error("j_index: trace matches but u differs (solver bug)");
            return j;
        }
        cur = arith::pell_compose(cur, fund);
    }
    throw std::logic_error("j_index: no power of the fundamental solution matches");
}

std::pair<mpq_class, std::vector<Component>> multiplicity(long long n, const WeightMode& w) {
    mpq_class m = 0;
    std::vector<Component> comps;
    for (auto [u, d] : u_set(n)) {
        Component c;
        c.u = u;
        c.D = d;
        c.h = qforms::class_number(arith::Discriminant(d));
        c.j = j_index(n, u, d);
        c.lambda = w.lambda(d);
        m += c.lambda * static_cast<long>(c.h) / mpq_class(static_cast<long>(c.j));
        comps.push_back(std::move(c));
    }
    mpq_class check = 0;
    for (const auto& c : comps) check += c.lambda * static_cast<long>(c.h) / mpq_class(static_cast<long>(c.j));
    if (check != m) throw std::logic_error("multiplicity: inconsistent rational assembly");
    return {m, comps};
}

SpectrumTable build_table(double X, const WeightMode& w, int threads) {
    if (!(X > 3)) throw std::invalid_argument("build_table: X > 3 required");
    long long n_last = static_cast<long long>(std::floor(X));
    if (static_cast<double>(n_last) >= X) --n_last;  // strict n < X
    SpectrumTable table;
    table.X = X;
    table.weight = w;
    if (n_last < 3) return table;
    table.entries.resize(static_cast<std::size_t>(n_last - 2));
    parallel_for(3, n_last + 1, threads, [&](long long n) {
        try {
            SpectrumEntry e;
            e.n = n;
            auto [m, comps] = multiplicity(n, w);
            e.m = std::move(m);
            e.components = std::move(comps);
            e.eps = eps_of(n);
            e.log_eps = log_eps_of(n);
            e.lambda_bar = lambda_bar(n);
            table.entries[static_cast<std::size_t>(n - 3)] = std::move(e);
        } catch (const std::exception& ex) {
            throw std::runtime_error("build_table: entry n=" + std::to_string(n) + ": " +
                                     ex.what());
        }
    });
    return table;
}

}  // namespace selberg::spectrum
