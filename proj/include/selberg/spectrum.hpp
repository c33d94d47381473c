// The length spectrum of the modular group: U(n), D_{n,u}, power indices
// j_{n,u}, exact multiplicities m(n) with pluggable discriminant weights,
// the scalars eps(n), Lambda-bar, and the dense spectrum table.
#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include <gmpxx.h>

#include "selberg/arith.hpp"

namespace selberg::spectrum {

// Discriminant weight lambda(D):
//   unity       - the modular group itself (lambda = 1)
//   index_bound - subgroup upper-bound mode, lambda = k = [Gbar:G]
//   table       - explicit per-D weights; a required D missing is an error
struct WeightMode {
    enum class Kind { unity, index_bound, table };

    Kind kind = Kind::unity;
    long long k = 1;
    std::map<long long, mpq_class> table;
    std::string spec;  // canonical flag string: "unity", "index:<k>", "table:<path>"

    static WeightMode unity();
    static WeightMode index_bound(long long k);
    static WeightMode from_table(std::map<long long, mpq_class> values, std::string spec_string);

    // exact lambda(D); throws std::runtime_error for a missing table key
    mpq_class lambda(long long D) const;

    bool is_bound_mode() const { return kind == Kind::index_bound; }
};

// One (u, D, j) component of m(n) together with its class number and weight.
struct Component {
    long long u = 0;
    long long D = 0;
    long long j = 0;
    long long h = 0;
    mpq_class lambda;
};

struct SpectrumEntry {
    long long n = 0;
    mpq_class m;                        // sum of lambda * h / j, exact
    std::vector<Component> components;  // ascending in u
    double eps = 0.0;                   // (n + sqrt(n^2-4))/2
    double log_eps = 0.0;
    double lambda_bar = 0.0;            // 2 log eps / (1 - eps^-2)
};

struct SpectrumTable {
    double X = 0.0;
    WeightMode weight;
    std::vector<SpectrumEntry> entries;  // all integers 3 <= n < X, ascending

    const SpectrumEntry& at(long long n) const;  // throws if out of range
};

double eps_of(long long n);
double log_eps_of(long long n);
double lambda_bar(long long n);

// Lambda-bar(n) * (1 - eps(n)^2/x); negative when eps(n)^2 > x.
double lambda_bar_x(long long n, double x);

// All (u, D_{n,u}) with u^2 | n^2-4 and D = 0,1 (mod 4), ascending in u.
std::vector<std::pair<long long, long long>> u_set(long long n);

// The unique j with pell_power(pell_fundamental(D), j) = (n, u).
// Throws std::logic_error when no j matches (solver inconsistency).
long long j_index(long long n, long long u, long long D);

// Exact multiplicity m(n) under the given weight, with its components.
std::pair<mpq_class, std::vector<Component>> multiplicity(long long n, const WeightMode& w);

// Dense table over 3 <= n < X; entries may be computed in parallel, the
// result is deterministic regardless of thread count.  Requires X > 3.
SpectrumTable build_table(double X, const WeightMode& w, int threads = 1);

}  // namespace selberg::spectrum
