#include "selberg/arith.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "selberg/modular.hpp"

namespace selberg::arith {

IsqrtResult isqrt_u64(std::uint64_t n) {
    auto r = static_cast<std::uint64_t>(std::sqrt(static_cast<double>(n)));
    while (r > 0 && (unsigned __int128)r * r > n) --r;
    while ((unsigned __int128)(r + 1) * (r + 1) <= n) ++r;
    return {r, r * r == n};
}

IsqrtResultZ isqrt(const mpz_class& n) {
    if (n < 0) throw std::invalid_argument("isqrt: negative input");
    IsqrtResultZ out;
    mpz_class rem;
    mpz_sqrtrem(out.root.get_mpz_t(), rem.get_mpz_t(), n.get_mpz_t());
    out.exact = (rem == 0);
    return out;
}

int kronecker(long long D, long long m) {
    thread_local mpz_class a, b;
    a = static_cast<long>(D);
    b = static_cast<long>(m);
    return mpz_kronecker(a.get_mpz_t(), b.get_mpz_t());
}

int kronecker(const mpz_class& D, const mpz_class& m) {
    return mpz_kronecker(D.get_mpz_t(), m.get_mpz_t());
}

std::vector<long long> square_divisors(long long n) {
    if (n < 3) throw std::invalid_argument("square_divisors: n >= 3 required");
    // n^2-4 = (n-2)(n+2); factor the two halves and merge exponents.
    long long lo = n - 2, hi = n + 2;
    std::vector<std::pair<long long, int>> fac;
    auto absorb = [&fac](long long v) {
        for (long long p = 2; p * p <= v; p += (p == 2) ? 1 : 2) {
            if (v % p) continue;
            int e = 0;
            while (v % p == 0) { v /= p; ++e; }
            fac.emplace_back(p, e);
        }
        if (v > 1) fac.emplace_back(v, 1);
    };
    absorb(lo);
    absorb(hi);
    std::sort(fac.begin(), fac.end());
    std::vector<std::pair<long long, int>> merged;
    for (auto [p, e] : fac) {
        if (!merged.empty() && merged.back().first == p)
            merged.back().second += e;
        else
            merged.emplace_back(p, e);
    }
    std::vector<long long> us{1};
    for (auto [p, e] : merged) {
        int half = e / 2;
        if (half == 0) continue;
        std::size_t base = us.size();
        long long pk = 1;
        for (int i = 1; i <= half; ++i) {
            pk *= p;
            for (std::size_t j = 0; j < base; ++j) us.push_back(us[j] * pk);
        }
    }
    std::sort(us.begin(), us.end());
    return us;
}

Discriminant::Discriminant(long long d) : d_(d) {
    long long r = ((d % 4) + 4) % 4;
    if (d < 5 || (r != 0 && r != 1))
        throw std::invalid_argument("Discriminant: need D >= 5 with D = 0,1 (mod 4)");
    if (isqrt_u64(static_cast<std::uint64_t>(d)).exact)
        throw std::invalid_argument("Discriminant: D must not be a perfect square");
}

namespace {

// Continued fraction machinery for sqrt(N), N > 1 non-square.  The state
// (P,Q) follows a_i = floor((P_i + sqrt(N))/Q_i), P_{i+1} = a_i Q_i - P_i,
// Q_{i+1} = (N - P_{i+1}^2)/Q_i, starting from (0,1).  From i = 1 on the
// state is purely periodic, and the convergent p/q just before the period
// closes satisfies p^2 - N q^2 = (-1)^period.
struct SqrtCfResult {
    mpz_class x;  // minimal with x^2 - N y^2 = +-1
    mpz_class y;
    int norm;  // +1 or -1
};

SqrtCfResult sqrt_cf_minimal(long long N) {
    long long s = static_cast<long long>(isqrt_u64(static_cast<std::uint64_t>(N)).root);
    long long P = 0, Q = 1;
    long long P1 = 0, Q1 = 0;
    mpz_class pm1 = 1, pm2 = 0;  // p_{-1}, p_{-2}
    mpz_class qm1 = 0, qm2 = 1;
    for (long long i = 0;; ++i) {
        long long a = (P + s) / Q;  // Q stays positive for sqrt expansions
        long la = static_cast<long>(a);
        mpz_class p = la * pm1 + pm2;
        mpz_class q = la * qm1 + qm2;
        pm2 = pm1; pm1 = p;
        qm2 = qm1; qm1 = q;
        P = a * Q - P;
        Q = (N - P * P) / Q;
        if (Q <= 0) throw std::logic_error("sqrt_cf_minimal: nonpositive Q");
        if (i == 0) {
            P1 = P;
            Q1 = Q;
        } else if (P == P1 && Q == Q1) {
            // period closed after a_i; the minimal solution is the convergent
            // p_{i-1}/q_{i-1}, i.e. the pair shifted out one iteration ago
            SqrtCfResult out;
            out.x = pm2;
            out.y = qm2;
            mpz_class check = out.x * out.x - to_mpz(N) * out.y * out.y;
            if (check == 1)
                out.norm = 1;
            else if (check == -1)
                out.norm = -1;
            else
                throw std::logic_error("sqrt_cf_minimal: convergent misses x^2-Ny^2=+-1");
            return out;
        }
        if (i > 8'000'000)
            throw std::runtime_error("sqrt_cf_minimal: period budget exceeded");
    }
}

}  // namespace

PellSolution pell_compose(const PellSolution& x, const PellSolution& y) {
    if (x.D != y.D) throw std::invalid_argument("pell_compose: mismatched discriminants");
    PellSolution out;
    out.D = x.D;
    out.j = x.j + y.j;
    out.t = (x.t * y.t + to_mpz(x.D) * x.u * y.u) / 2;
    out.u = (x.t * y.u + x.u * y.t) / 2;
    return out;
}

PellSolution pell_power(const PellSolution& base, long long k) {
    if (base.j != 1) throw std::invalid_argument("pell_power: base must be fundamental (j=1)");
    if (k < 1) throw std::invalid_argument("pell_power: k >= 1 required");
    PellSolution cur = base;
    for (long long i = 1; i < k; ++i) cur = pell_compose(cur, base);
    cur.j = k;
    return cur;
}

// pell_fundamental: minimal (t,u) with t^2 - D u^2 = 4.
//
// D = 0 (mod 4): t is forced even; with d = D/4 the map t = 2x, u = y is a
// bijection onto x^2 - d y^2 = 1, so the CF of sqrt(d) settles it (squaring
// the norm -1 minimum when the period is odd).
//
// D = 1 (mod 4): the CF of sqrt(D) gives the minimal integral unit
// eta = X + Y sqrt(D).  The order of discriminant D may contain a smaller
// half-integral unit eps0 = (t0 + u0 sqrt(D))/2 with eps0^3 = eta (unit
// index 3, only possible for D = 5 mod 8).  Taking traces, t0 solves
// t^3 - 3 n t = 2X with n = norm(eta), an exact integer cubic solved by
// mpz_root plus a local scan; u0 is recovered from t0^2 - D u0^2 = 4n and
// both must be odd.  Whichever unit wins, a norm -1 result is squared to
// land on norm +1.
PellSolution pell_fundamental(Discriminant D) {
    long long d = D.value();
    PellSolution fund;
    fund.D = d;
    fund.j = 1;
    if (d % 4 == 0) {
        SqrtCfResult r = sqrt_cf_minimal(d / 4);
        mpz_class x = r.x, y = r.y;
        if (r.norm == -1) {
            // (x + y sqrt(d/4))^2
            mpz_class x2 = x * x + to_mpz(d / 4) * y * y;
            y = 2 * x * y;
            x = x2;
        }
        fund.t = 2 * x;
        fund.u = y;
    } else {
        SqrtCfResult r = sqrt_cf_minimal(d);
        mpz_class T = 2 * r.x, U = 2 * r.y;  // eta as a +-4 solution
        int norm = r.norm;
        // half-integral cube root test: t0^3 - 3 norm t0 = 2X
        mpz_class rhs = 2 * r.x;
        mpz_class t0;
        mpz_root(t0.get_mpz_t(), rhs.get_mpz_t(), 3);
        for (mpz_class cand = t0 - 1; cand <= t0 + 2; ++cand) {
            if (cand < 1) continue;
            if (cand * cand * cand - 3 * norm * cand != rhs) continue;
            mpz_class tt = cand * cand - 4 * norm;  // = D u0^2
            if (tt <= 0 || !mpz_divisible_ui_p(tt.get_mpz_t(), static_cast<unsigned long>(d)))
                continue;
            mpz_class usq = tt / static_cast<long>(d);
            IsqrtResultZ u0 = isqrt(usq);
            if (!u0.exact) continue;
            if (mpz_even_p(cand.get_mpz_t()) || mpz_even_p(u0.root.get_mpz_t()))
                continue;  // genuine half-integral units have odd t and u
            T = cand;
            U = u0.root;
            break;
        }
        if (norm == -1) {
            // square: (t,u) -> ((t^2 + D u^2)/2, t u) = (t^2 + 2, t u) using t^2 - D u^2 = -4
            mpz_class t2 = T * T + 2;
            U = T * U;
            T = t2;
        }
        fund.t = T;
        fund.u = U;
    }
    mpz_class check = fund.t * fund.t - to_mpz(d) * fund.u * fund.u;
    if (check != 4) throw std::logic_error("pell_fundamental: t^2 - D u^2 != 4");
    return fund;
}

double log_unit(const PellSolution& s) {
    // log((t + u sqrt(D))/2) = log(t/2) + log1p(sqrt(1 - 4/t^2)); the only
    // large quantity is t, handled through its mantissa/exponent split.
    signed long exp2 = 0;
    double mant = mpz_get_d_2exp(&exp2, s.t.get_mpz_t());
    double log_t = std::log(mant) + static_cast<double>(exp2) * std::numbers::ln2;
    double ratio;  // 4/t^2, zero once t is astronomically large
    if (exp2 > 600) {
        ratio = 0.0;
    } else {
        double td = mpz_get_d(s.t.get_mpz_t());
        ratio = 4.0 / (td * td);
    }
    return log_t - std::numbers::ln2 + std::log1p(std::sqrt(1.0 - ratio));
}

L1Result dirichlet_L1(Discriminant D, double tol) {
    if (!(tol > 0)) throw std::invalid_argument("dirichlet_L1: tol > 0 required");
    long long d = D.value();
    // full periods K with tail bound D/(K D + 1) <= tol
    double need = static_cast<double>(d) / tol;
    if (!(need < static_cast<double>(kL1MaxTerms)))
        throw std::runtime_error("dirichlet_L1: tol unreachable within term budget");
    long long periods = static_cast<long long>(1.0 / tol) + 1;
    long long terms = periods * d;
    if (terms > kL1MaxTerms || terms <= 0)
        throw std::runtime_error("dirichlet_L1: tol unreachable within term budget");

    std::vector<signed char> chi(static_cast<std::size_t>(d) + 1, 0);
    {
        // chi is completely multiplicative; fill from primes via a local sieve.
        static thread_local SpfSieve sieve;
        sieve.ensure(d);
        chi[1] = 1;
        for (long long n = 2; n <= d; ++n) {
            long long p = sieve.spf(n);
            if (n == p)
                chi[n] = static_cast<signed char>(kronecker(d, p));
            else
                chi[n] = static_cast<signed char>(chi[p] * chi[n / p]);
        }
    }

    // Kahan summation: float rounding must stay far below certified tails.
    double sum = 0.0, comp = 0.0;
    long long idx = 0;
    for (long long k = 0; k < periods; ++k) {
        for (long long r = 1; r <= d; ++r) {
            ++idx;
            signed char c = chi[r];
            if (!c) continue;
            double term = static_cast<double>(c) / static_cast<double>(idx);
            double y = term - comp;
            double t = sum + y;
            comp = (t - sum) - y;
            sum = t;
        }
    }
    L1Result out;
    out.value = sum;
    out.tail_bound = static_cast<double>(d) / static_cast<double>(terms + 1);
    out.terms = terms;
    return out;
}

}  // namespace selberg::arith
