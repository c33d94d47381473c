// Exact integer arithmetic layer: integer square roots, Kronecker symbols,
// square divisors of n^2-4, Pell fundamental solutions via continued
// fractions, unit powers, and truncated Dirichlet L(1,chi_D) values.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <gmpxx.h>

namespace selberg::arith {

// gmpxx predates long long overloads; route through long (LP64 here)
static_assert(sizeof(long) == sizeof(long long), "LP64 assumed");
inline mpz_class to_mpz(long long v) { return mpz_class(static_cast<long>(v)); }

struct IsqrtResult {
    std::uint64_t root = 0;
    bool exact = false;
};

// floor(sqrt(n)) with an exactness flag; fixed-width fast path.
IsqrtResult isqrt_u64(std::uint64_t n);

struct IsqrtResultZ {
    mpz_class root;
    bool exact = false;
};

// Arbitrary-precision floor square root. Throws std::invalid_argument for n < 0.
IsqrtResultZ isqrt(const mpz_class& n);

// Kronecker symbol (D/m), completely multiplicative in m.
int kronecker(long long D, long long m);
int kronecker(const mpz_class& D, const mpz_class& m);

// Ascending list of all u >= 1 with u^2 | n^2-4.  Requires n >= 3.
std::vector<long long> square_divisors(long long n);

// A positive non-square integer D >= 5 with D = 0 or 1 (mod 4), i.e. a
// valid discriminant of a real quadratic order.  Construction validates;
// operations may trust it.
class Discriminant {
public:
    explicit Discriminant(long long d);
    long long value() const { return d_; }

private:
    long long d_;
};

// One positive solution of t^2 - D u^2 = 4; j is its power index, so
// (t,u) represents eps_j(D) = eps_1(D)^j = (t + u sqrt(D))/2.
struct PellSolution {
    mpz_class t;
    mpz_class u;
    long long D = 0;
    long long j = 1;
};

// Minimal positive solution of t^2 - D u^2 = 4 (fundamental unit of the
// order of discriminant D in the narrow sense), by continued fractions.
PellSolution pell_fundamental(Discriminant D);

// k-th power of a fundamental solution via the exact integer recurrence
// t' = (t1 t + D u1 u)/2, u' = (t1 u + u1 t)/2.  Requires base.j == 1, k >= 1.
PellSolution pell_power(const PellSolution& base, long long k);

// Unit product (t,u)*(t',u') within the same order; used for the
// composition-law property checks.
PellSolution pell_compose(const PellSolution& x, const PellSolution& y);

// log((t + u sqrt(D))/2) computed from the bit-length decomposition of t,
// so t far beyond double range is fine.  Relative error <= 1e-12.
double log_unit(const PellSolution& s);

struct L1Result {
    double value = 0.0;
    double tail_bound = 0.0;   // D / (first omitted index)
    long long terms = 0;       // number of summed terms (complete periods)
};

// Truncated L(1,chi_D) = sum (D/n)/n over complete periods of length D.
// The tail after a complete period is bounded by D divided by the first
// omitted index (partial summation; full-period character sums vanish).
// Throws std::runtime_error if tol needs more than the term budget.
L1Result dirichlet_L1(Discriminant D, double tol);

// Term budget for dirichlet_L1.
inline constexpr long long kL1MaxTerms = 4'000'000'000LL;

}  // namespace selberg::arith
