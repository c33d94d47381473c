// Brute-force reference implementations, independent of the fast paths:
// exhaustive Pell search, generator-word form equivalence, orbit class
// numbers, oracle multiplicities, and adaptive quadrature of |phi|^2.
// Budget exhaustion surfaces as "inconclusive", never as a wrong answer.
#pragma once

#include <optional>

#include "selberg/qforms.hpp"
#include "selberg/spectrum.hpp"

namespace selberg::oracle {

struct OracleBudget {
    long long max_u = 100000;    // Pell search bound on u
    long long max_entry = 0;     // BFS coefficient bound; 0 = auto (D/4 + sqrt(D) + 64)
    double quad_tol = 1e-9;      // quadrature absolute tolerance
};

// Minimal (t,u) with t^2 - D u^2 = 4 by scanning u; nullopt when the
// fundamental u exceeds the budget.
std::optional<arith::PellSolution> brute_pell(arith::Discriminant D, const OracleBudget& budget);

enum class Equiv { yes, no_within_budget };

// Breadth-first search over words in S, T, T^-1 applied to q1, pruning
// forms with a coefficient beyond max_entry.
Equiv brute_equivalent(const qforms::QuadForm& q1, const qforms::QuadForm& q2,
                       const OracleBudget& budget);

// Class count by partitioning the reduced forms under brute_equivalent.
// Conclusive only when the coefficient budget provably covers the
// generator paths between equivalent reduced forms (see the .cpp note).
std::optional<long long> brute_class_number(arith::Discriminant D, const OracleBudget& budget);

// Multiplicity m(n) for the modular group evaluated with only brute_pell
// and brute_class_number.
std::optional<mpq_class> brute_multiplicity(long long n, const OracleBudget& budget);

// Adaptive Simpson quadrature of |phi_{sigma+it}(x)|^2 / T over [1, T],
// subdivided to resolve the top oscillation frequency 2 log eps(n_max).
// Throws std::runtime_error when quad_tol is unreachable.
double quad_square_integral(double sigma, double T, double x,
                            const spectrum::SpectrumTable& table, const OracleBudget& budget);

}  // namespace selberg::oracle
