#include "selberg/oracle.hpp"

#include <cmath>
#include <cstdlib>
#include <deque>
#include <functional>
#include <numeric>
#include <stdexcept>
#include <unordered_set>

#include "selberg/zeta.hpp"

namespace selberg::oracle {

using qforms::QuadForm;

std::optional<arith::PellSolution> brute_pell(arith::Discriminant D, const OracleBudget& budget) {
    long long d = D.value();
    // u64 fast path while D u^2 + 4 fits; mpz beyond
    std::uint64_t u = 1;
    auto du = static_cast<unsigned __int128>(d);
    for (; static_cast<long long>(u) <= budget.max_u; ++u) {
        unsigned __int128 v = du * u * u + 4;
        if (v > std::uint64_t(-1)) break;
        auto r = arith::isqrt_u64(static_cast<std::uint64_t>(v));
        if (r.exact) {
            arith::PellSolution s;
            s.t = mpz_class(static_cast<unsigned long>(r.root));
            s.u = mpz_class(static_cast<unsigned long>(u));
            s.D = d;
            s.j = 1;
            return s;
        }
    }
    for (; static_cast<long long>(u) <= budget.max_u; ++u) {
        mpz_class v = arith::to_mpz(d) * static_cast<unsigned long>(u) * static_cast<unsigned long>(u) + 4;
        arith::IsqrtResultZ r = arith::isqrt(v);
        if (r.exact) {
            arith::PellSolution s;
            s.t = r.root;
            s.u = mpz_class(static_cast<unsigned long>(u));
            s.D = d;
            s.j = 1;
            return s;
        }
    }
    return std::nullopt;
}

namespace {

struct FormHash {
    std::size_t operator()(const QuadForm& q) const {
        std::size_t h = std::hash<long long>{}(q.a);
        h ^= std::hash<long long>{}(q.b) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        h ^= std::hash<long long>{}(q.c) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
        return h;
    }
};

// neighbors under the generators S, T, T^-1 (right action on forms)
//   T:      [a, b, c] -> [a + b + c, b + 2c, c]
//   T^-1:   [a, b, c] -> [a - b + c, b - 2c, c]
//   S:      [a, b, c] -> [c, -b, a]
void push_neighbors(const QuadForm& q, std::vector<QuadForm>& out) {
    out.push_back({q.a + q.b + q.c, q.b + 2 * q.c, q.c});
    out.push_back({q.a - q.b + q.c, q.b - 2 * q.c, q.c});
    out.push_back({q.c, -q.b, q.a});
}

bool within(const QuadForm& q, long long bound) {
    return std::llabs(q.a) <= bound && std::llabs(q.b) <= bound && std::llabs(q.c) <= bound;
}

long long auto_entry_bound(long long d) {
    auto s = static_cast<long long>(std::sqrt(static_cast<double>(d)));
    return d / 4 + s + 64;
}

// Breadth-first orbit exploration from `start`, bounded by max_entry.
// Visits every reachable form within the coefficient box; returns the set.
std::unordered_set<QuadForm, FormHash> explore(const QuadForm& start, long long bound,
                                               const QuadForm* target = nullptr,
                                               bool* found = nullptr) {
    std::unordered_set<QuadForm, FormHash> seen;
    std::deque<QuadForm> queue;
    seen.insert(start);
    queue.push_back(start);
    std::vector<QuadForm> next;
    while (!queue.empty()) {
        QuadForm cur = queue.front();
        queue.pop_front();
        if (target && cur == *target) {
            if (found) *found = true;
            return seen;
        }
        next.clear();
        push_neighbors(cur, next);
        for (const auto& nb : next) {
            if (!within(nb, bound)) continue;
            if (seen.insert(nb).second) queue.push_back(nb);
        }
    }
    if (found) *found = false;
    return seen;
}

}  // namespace

Equiv brute_equivalent(const QuadForm& q1, const QuadForm& q2, const OracleBudget& budget) {
    long long d1 = q1.b * q1.b - 4 * q1.a * q1.c;
    long long d2 = q2.b * q2.b - 4 * q2.a * q2.c;
    if (d1 != d2) throw std::invalid_argument("brute_equivalent: discriminants differ");
    long long bound = budget.max_entry > 0 ? budget.max_entry : auto_entry_bound(d1);
    bool found = false;
    explore(q1, bound, &q2, &found);
    return found ? Equiv::yes : Equiv::no_within_budget;
}

std::optional<long long> brute_class_number(arith::Discriminant D, const OracleBudget& budget) {
    long long d = D.value();
    auto s = static_cast<long long>(std::sqrt(static_cast<double>(d)));
    while ((s + 1) * (s + 1) <= d) ++s;
    while (s * s > d) --s;

    // independent reduced-form enumeration: a straight double loop
    std::vector<QuadForm> reduced;
    for (long long b = 1; b <= s; ++b) {
        if ((d - b * b) % 4 != 0) continue;
        long long M = (d - b * b) / 4;  // = -ac > 0
        for (long long a = -M; a <= M; ++a) {
            if (a == 0 || M % a != 0) continue;
            long long c = -M / a;
            QuadForm q{a, b, c};
            long long twoa = 2 * std::llabs(a);
            bool red = (b >= 1 && b <= s && twoa + b >= s + 1 && twoa - b <= s);
            if (!red) continue;
            if (std::gcd(std::gcd(std::llabs(a), b), std::llabs(c)) != 1) continue;
            reduced.push_back(q);
        }
    }

    // Partition by bounded generator-word search.  Equivalent reduced forms
    // lie on one rho-cycle, and each rho step is realized by T^m then S with
    // intermediate coefficients at most (D/4, sqrt(D), sqrt(D)), so a budget
    // of at least D/4 + sqrt(D) (plus slack) makes the partition exact.
    // Below that the count is not trusted.
    long long bound = budget.max_entry > 0 ? budget.max_entry : auto_entry_bound(d);
    bool conclusive = bound >= auto_entry_bound(d);

    std::unordered_set<QuadForm, FormHash> visited;
    long long classes = 0;
    for (const auto& q : reduced) {
        if (visited.count(q)) continue;
        ++classes;
        auto component = explore(q, bound);
        for (const auto& f : component) visited.insert(f);
    }
    if (!conclusive) return std::nullopt;
    return classes;
}

std::optional<mpq_class> brute_multiplicity(long long n, const OracleBudget& budget) {
    if (n < 3) throw std::invalid_argument("brute_multiplicity: n >= 3 required");
    long long nn = n * n - 4;
    mpq_class m = 0;
    for (long long u = 1; u * u <= nn; ++u) {
        if (nn % (u * u) != 0) continue;
        long long d = nn / (u * u);
        long long r = d % 4;
        if (r != 0 && r != 1) continue;
        auto h = brute_class_number(arith::Discriminant(d), budget);
        if (!h) return std::nullopt;
        auto fund = brute_pell(arith::Discriminant(d), budget);
        if (!fund) return std::nullopt;
        // walk eps_1^j with a local unit product until the trace reaches n
        mpz_class t = fund->t, uu = fund->u;
        long long j = 1;
        while (t < static_cast<long>(n)) {
            mpz_class t2 = (fund->t * t + arith::to_mpz(d) * fund->u * uu) / 2;
            uu = (fund->t * uu + fund->u * t) / 2;
            t = t2;
            ++j;
        }
        if (t != static_cast<long>(n) || uu != static_cast<long>(u))
            throw std::logic_error("brute_multiplicity: no unit power matches the trace");
        m += mpq_class(static_cast<long>(*h)) / mpq_class(static_cast<long>(j));
    }
    return m;
}

double quad_square_integral(double sigma, double T, double x,
                            const spectrum::SpectrumTable& table, const OracleBudget& budget) {
    if (!(T > 1)) throw std::invalid_argument("quad_square_integral: T > 1 required");
    double X = zeta::cutoff_X(x);
    if (X > table.X)
        throw std::runtime_error("quad_square_integral: table too small for requested x");

    // local |phi|^2; shares only the table data with the analytic path
    std::vector<double> w, L;
    for (const auto& e : table.entries) {
        if (static_cast<double>(e.n) >= X) break;
        double m = mpq_get_d(e.m.get_mpq_t());
        w.push_back(m * e.lambda_bar * (1.0 - e.eps * e.eps / x) *
                    std::exp(-2.0 * sigma * e.log_eps));
        L.push_back(e.log_eps);
    }
    auto phi_sq = [&](double t) {
        double re = 0.0, im = 0.0;
        for (std::size_t i = 0; i < w.size(); ++i) {
            re += w[i] * std::cos(2.0 * t * L[i]);
            im -= w[i] * std::sin(2.0 * t * L[i]);
        }
        return re * re + im * im;
    };
    if (w.empty()) return 0.0;

    // panels sized to the fastest oscillation 2 log eps(n_max)
    double omega = 2.0 * L.back();
    double width = std::min(T - 1.0, 3.141592653589793 / (2.0 * omega));
    auto panels = static_cast<long long>(std::ceil((T - 1.0) / width));
    if (panels > 4'000'000) throw std::runtime_error("quad_square_integral: panel budget");

    // adaptive Simpson per panel (recursive bisection, Richardson check)
    struct Rec {
        const std::function<double(double)>& f;
        double tol_scale;
        double run(double a, double b, double fa, double fb, double fm, double tol,
                   int depth) const {
            double mid = (a + b) / 2;
            double flm = f((a + mid) / 2), frm = f((mid + b) / 2);
            double h = b - a;
            double whole = h / 6.0 * (fa + 4.0 * fm + fb);
            double left = h / 12.0 * (fa + 4.0 * flm + fm);
            double right = h / 12.0 * (fm + 4.0 * frm + fb);
            double delta = left + right - whole;
            if (std::fabs(delta) <= 15.0 * tol) return left + right + delta / 15.0;
            if (depth <= 0)
                throw std::runtime_error("quad_square_integral: tolerance unreachable");
            return run(a, mid, fa, fm, flm, tol / 2, depth - 1) +
                   run(mid, b, fm, fb, frm, tol / 2, depth - 1);
        }
    };
    std::function<double(double)> f = phi_sq;
    Rec rec{f, 0.0};
    double total = 0.0;
    double tol_per = budget.quad_tol * T / static_cast<double>(panels);
    for (long long i = 0; i < panels; ++i) {
        double a = 1.0 + (T - 1.0) * static_cast<double>(i) / static_cast<double>(panels);
        double b = 1.0 + (T - 1.0) * static_cast<double>(i + 1) / static_cast<double>(panels);
        total += rec.run(a, b, phi_sq(a), phi_sq(b), phi_sq((a + b) / 2), tol_per, 48);
    }
    return total / T;
}

}  // namespace selberg::oracle
