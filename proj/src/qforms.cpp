#include "selberg/qforms.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "selberg/modular.hpp"

namespace selberg::qforms {

namespace {

using arith::isqrt_u64;

long long checked_ll(__int128 v, const char* what) {
    if (v > std::numeric_limits<long long>::max() || v < std::numeric_limits<long long>::min())
        throw std::overflow_error(what);
    return static_cast<long long>(v);
}

long long floor_sqrt_disc(long long D) {
    return static_cast<long long>(isqrt_u64(static_cast<std::uint64_t>(D)).root);
}

}  // namespace

bool is_primitive(const QuadForm& q) {
    return std::gcd(std::gcd(q.a, q.b), q.c) == 1;
}

long long disc_raw(const QuadForm& q) {
    __int128 d = (__int128)q.b * q.b - 4 * (__int128)q.a * q.c;
    return checked_ll(d, "disc_raw: overflow");
}

arith::Discriminant discriminant(const QuadForm& q) {
    return arith::Discriminant(disc_raw(q));
}

QuadForm apply_transform(const QuadForm& q, const Mat2i& g) {
    __int128 det = (__int128)g.m11 * g.m22 - (__int128)g.m12 * g.m21;
    if (det != 1) throw std::invalid_argument("apply_transform: det g must be 1");
    __int128 a = q.a, b = q.b, c = q.c;
    __int128 a2 = a * g.m11 * g.m11 + b * g.m11 * g.m12 + c * g.m12 * g.m12;
    __int128 c2 = a * g.m21 * g.m21 + b * g.m21 * g.m22 + c * g.m22 * g.m22;
    __int128 b2 = 2 * a * g.m11 * g.m21 + b * ((__int128)g.m11 * g.m22 + (__int128)g.m12 * g.m21) +
                  2 * c * g.m12 * g.m22;
    return {checked_ll(a2, "apply_transform: overflow"),
            checked_ll(b2, "apply_transform: overflow"),
            checked_ll(c2, "apply_transform: overflow")};
}

bool is_reduced(const QuadForm& q) {
    long long D = disc_raw(q);
    if (D <= 0) return false;
    if (q.a == 0 || q.c == 0) return false;
    long long s = floor_sqrt_disc(D);
    if (s * s == D) return false;
    long long absa2 = 2 * std::llabs(q.a);
    // 0 < b < sqrt(D),  sqrt(D) - b < 2|a| < sqrt(D) + b, in integer form
    return q.b >= 1 && q.b <= s && absa2 + q.b >= s + 1 && absa2 - q.b <= s;
}

namespace {

// The canonical neighbor target: the representative of -b (mod 2|c|)
// closest below sqrt(D), i.e. in (sqrt(D) - 2|c|, sqrt(D)).
long long neighbor_b(long long b, long long c, long long s) {
    long long m = 2 * std::llabs(c);
    long long r = (s + b) % m;
    if (r < 0) r += m;
    return s - r;
}

}  // namespace

QuadForm rho_step(const QuadForm& q) {
    if (!is_reduced(q)) throw std::invalid_argument("rho_step: input must be reduced");
    long long D = disc_raw(q);
    long long s = floor_sqrt_disc(D);
    long long b2 = neighbor_b(q.b, q.c, s);
    long long c2 = (b2 * b2 - D) / (4 * q.c);
    QuadForm out{q.c, b2, c2};
    if (!is_reduced(out)) throw std::logic_error("rho_step: neighbor not reduced");
    return out;
}

QuadForm reduce(const QuadForm& q) {
    long long D = disc_raw(q);
    arith::Discriminant check(D);  // validates positive non-square
    (void)check;
    long long s = floor_sqrt_disc(D);
    QuadForm cur = q;
    for (int iter = 0; iter < 1 << 20; ++iter) {
        if (is_reduced(cur)) return cur;
        if (cur.c == 0)
            throw std::invalid_argument("reduce: degenerate form (c = 0, square discriminant)");
        long long m = 2 * std::llabs(cur.c);
        long long b2;
        if (std::llabs(cur.c) > s) {
            // absolute least residue of -b (mod 2|c|): in (-|c|, |c|]
            long long r = ((-cur.b) % m + m) % m;
            b2 = (r > m / 2) ? r - m : r;
        } else {
            b2 = neighbor_b(cur.b, cur.c, s);
        }
        long long c2 = (b2 * b2 - D) / (4 * cur.c);
        cur = QuadForm{cur.c, b2, c2};
    }
    throw std::logic_error("reduce: failed to terminate");
}

namespace {

constexpr long long kSmallEnumLimit = 4'000'000;

// Divisor-window enumeration, following the definition directly: for each
// 0 < b <= s with b = D (mod 2), every |a| dividing (D-b^2)/4 inside the
// reduction window gives the two forms [|a|, b, -M/|a|], [-|a|, b, M/|a|].
void enumerate_small(long long D, long long s, std::vector<QuadForm>& out) {
    for (long long b = 2 - (D & 1); b <= s; b += 2) {
        long long M = (D - b * b) / 4;
        long long lo = std::max(1LL, (s + 1 - b + 1) / 2);  // ceil((s+1-b)/2)
        long long hi = (s + b) / 2;
        for (long long A = lo; A <= hi; ++A) {
            if (M % A) continue;
            long long C = M / A;
            if (std::gcd(std::gcd(A, b), C) != 1) continue;
            out.push_back({A, b, -C});
            out.push_back({-A, b, C});
        }
    }
}

// Congruence enumeration for large D: for each |a| = A the b-window has
// width at most 2A, so each square root class of D mod 4A contributes at
// most one b.  Same output set as enumerate_small at ~sqrt(D) cost per A.
void enumerate_large(long long D, long long s, std::vector<QuadForm>& out) {
    static thread_local arith::SpfSieve sieve;
    sieve.ensure(4 * s + 4);

    // Square roots of D modulo prime powers, memoized per prime with epoch
    // stamps so the slots survive across calls without a per-call reset.
    struct RootCache {
        std::uint64_t epoch = 0;
        std::vector<std::pair<long long, std::vector<long long>>> entries;  // (p^k, roots)
    };
    static thread_local std::vector<RootCache> cache;
    static thread_local std::uint64_t epoch = 0;
    ++epoch;
    if (cache.size() < static_cast<std::size_t>(4 * s + 5))
        cache.resize(static_cast<std::size_t>(4 * s + 5));

    auto roots_for = [&](long long p, int k, long long pk) -> const std::vector<long long>& {
        auto& slot = cache[static_cast<std::size_t>(p)];
        if (slot.epoch != epoch) {
            slot.epoch = epoch;
            slot.entries.clear();
        }
        for (auto& e : slot.entries)
            if (e.first == pk) return e.second;
        std::vector<long long> roots = (p == 2) ? arith::sqrt_mod_two_power(D, k)
                                                : arith::sqrt_mod_odd_prime_power(D, p, k);
        slot.entries.emplace_back(pk, std::move(roots));
        return slot.entries.back().second;
    };

    std::vector<long long> residues, merged;
    for (long long A = 1; A <= s; ++A) {
        long long b_min = std::max({1LL, s + 1 - 2 * A, 2 * A - s});
        if (b_min > s) continue;
        long long m = 4 * A;

        // combine root classes of all prime powers of 4A by CRT
        residues.assign(1, 0);
        long long mod_so_far = 1;
        bool solvable = true;
        long long mm = m;
        while (mm > 1) {
            long long p = sieve.spf(mm);
            long long pk = 1;
            int k = 0;
            while (mm % p == 0) { mm /= p; pk *= p; ++k; }
            const auto& roots = roots_for(p, k, pk);
            if (roots.empty()) { solvable = false; break; }
            merged.clear();
            if (mod_so_far == 1) {
                merged = roots;
            } else {
                long long inv = [&] {
                    long long g0 = mod_so_far % pk, g1 = pk, x0 = 1, x1 = 0;
                    while (g1) {
                        long long qq = g0 / g1;
                        g0 -= qq * g1; std::swap(g0, g1);
                        x0 -= qq * x1; std::swap(x0, x1);
                    }
                    return ((x0 % pk) + pk) % pk;
                }();
                for (long long r : residues)
                    for (long long rt : roots) {
                        long long diff = (rt - r) % pk;
                        if (diff < 0) diff += pk;
                        merged.push_back(r + mod_so_far * ((diff * inv) % pk));
                    }
            }
            residues.swap(merged);
            mod_so_far *= pk;
        }
        if (!solvable) continue;

        for (long long r : residues) {
            long long b = s - ((s - r) % m + m) % m;
            if (b < b_min) continue;
            long long M = (D - b * b) / 4;
            long long C = M / A;
            if (std::gcd(std::gcd(A, b), C) != 1) continue;
            out.push_back({A, b, -C});
            out.push_back({-A, b, C});
        }
    }
}

}  // namespace

std::vector<QuadForm> reduced_forms(arith::Discriminant D) {
    long long d = D.value();
    long long s = floor_sqrt_disc(d);
    std::vector<QuadForm> out;
    if (d <= kSmallEnumLimit)
        enumerate_small(d, s, out);
    else
        enumerate_large(d, s, out);
    std::sort(out.begin(), out.end());
    return out;
}

namespace detail {

std::vector<QuadForm> reduced_forms_divisor_path(arith::Discriminant D) {
    std::vector<QuadForm> out;
    enumerate_small(D.value(), floor_sqrt_disc(D.value()), out);
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<QuadForm> reduced_forms_congruence_path(arith::Discriminant D) {
    std::vector<QuadForm> out;
    enumerate_large(D.value(), floor_sqrt_disc(D.value()), out);
    std::sort(out.begin(), out.end());
    return out;
}

}  // namespace detail

std::vector<std::vector<QuadForm>> reduced_cycles(arith::Discriminant D) {
    std::vector<QuadForm> forms = reduced_forms(D);
    std::vector<std::vector<QuadForm>> cycles;
    std::vector<bool> visited(forms.size(), false);
    auto index_of = [&forms](const QuadForm& f) {
        auto it = std::lower_bound(forms.begin(), forms.end(), f);
        if (it == forms.end() || !(*it == f))
            throw std::logic_error("reduced_cycles: rho left the reduced set");
        return static_cast<std::size_t>(it - forms.begin());
    };
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (visited[i]) continue;
        std::vector<QuadForm> cycle;
        QuadForm cur = forms[i];
        for (;;) {
            std::size_t idx = index_of(cur);
            if (visited[idx]) break;
            visited[idx] = true;
            cycle.push_back(cur);
            cur = rho_step(cur);
        }
        // canonical rotation: start at the smallest member
        auto smallest = std::min_element(cycle.begin(), cycle.end());
        std::rotate(cycle.begin(), smallest, cycle.end());
        cycles.push_back(std::move(cycle));
    }
    std::sort(cycles.begin(), cycles.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    return cycles;
}

long long class_number(arith::Discriminant D) {
    std::vector<QuadForm> forms = reduced_forms(D);
    std::vector<bool> visited(forms.size(), false);
    auto index_of = [&forms](const QuadForm& f) {
        auto it = std::lower_bound(forms.begin(), forms.end(), f);
        if (it == forms.end() || !(*it == f))
            throw std::logic_error("class_number: rho left the reduced set");
        return static_cast<std::size_t>(it - forms.begin());
    };
    long long count = 0;
    for (std::size_t i = 0; i < forms.size(); ++i) {
        if (visited[i]) continue;
        ++count;
        QuadForm cur = forms[i];
        for (;;) {
            std::size_t idx = index_of(cur);
            if (visited[idx]) break;
            visited[idx] = true;
            cur = rho_step(cur);
        }
    }
    return count;
}

double class_number_via_formula(arith::Discriminant D) {
    arith::PellSolution fund = arith::pell_fundamental(D);
    double reg = arith::log_unit(fund);
    double sqrt_d = std::sqrt(static_cast<double>(D.value()));
    // |sqrt(D)/reg * (L_hat - L)| < 0.5 certifies the rounding
    double tol = 0.45 * reg / sqrt_d;
    arith::L1Result l1 = arith::dirichlet_L1(D, tol);
    return sqrt_d * l1.value / reg;
}

mpz_class det(const Mat2z& g) { return g.m11 * g.m22 - g.m12 * g.m21; }
mpz_class trace(const Mat2z& g) { return g.m11 + g.m22; }

Mat2z form_to_matrix(const QuadForm& q, const arith::PellSolution& sol) {
    if (disc_raw(q) != sol.D)
        throw std::invalid_argument("form_to_matrix: discriminant mismatch");
    mpz_class bu = static_cast<long>(q.b) * sol.u;
    if (mpz_odd_p(mpz_class(sol.t + bu).get_mpz_t()))
        throw std::invalid_argument("form_to_matrix: parity violation (t + bu odd)");
    Mat2z g;
    g.m11 = (sol.t + bu) / 2;
    g.m12 = static_cast<long>(-q.c) * sol.u;
    g.m21 = static_cast<long>(q.a) * sol.u;
    g.m22 = (sol.t - bu) / 2;
    if (det(g) != 1) throw std::logic_error("form_to_matrix: determinant != 1");
    return g;
}

FormTU matrix_to_form(const Mat2z& g) {
    mpz_class t = trace(g);
    if (abs(t) <= 2) throw std::invalid_argument("matrix_to_form: |trace| > 2 required");
    if (det(g) != 1) throw std::invalid_argument("matrix_to_form: det must be 1");
    mpz_class u = gcd(gcd(g.m21, g.m11 - g.m22), mpz_class(-g.m12));
    if (u == 0) throw std::logic_error("matrix_to_form: zero gcd for hyperbolic input");
    mpz_class az = g.m21 / u, bz = (g.m11 - g.m22) / u, cz = mpz_class(-g.m12) / u;
    if (!az.fits_slong_p() || !bz.fits_slong_p() || !cz.fits_slong_p())
        throw std::overflow_error("matrix_to_form: form coefficients overflow");
    FormTU out;
    out.q = QuadForm{az.get_si(), bz.get_si(), cz.get_si()};
    out.t = t;
    out.u = u;
    return out;
}

}  // namespace selberg::qforms
