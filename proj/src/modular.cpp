#include "selberg/modular.hpp"

#include <algorithm>
#include <stdexcept>

namespace selberg::arith {

void SpfSieve::ensure(long long limit) {
    if (limit < 1) limit = 1;
    if (limit <= this->limit()) return;
    std::size_t n = static_cast<std::size_t>(limit);
    spf_.assign(n + 1, 0);
    primes_.clear();
    spf_[0] = 0;
    if (n >= 1) spf_[1] = 1;
    for (std::size_t i = 2; i <= n; ++i) {
        if (spf_[i] == 0) {
            spf_[i] = static_cast<std::uint32_t>(i);
            primes_.push_back(static_cast<long long>(i));
        }
        for (long long p : primes_) {
            if (p > spf_[i]) break;
            std::size_t j = i * static_cast<std::size_t>(p);
            if (j > n) break;
            spf_[j] = static_cast<std::uint32_t>(p);
        }
    }
}

std::vector<std::pair<long long, int>> SpfSieve::factor(long long n) const {
    if (n < 1 || n > limit()) throw std::invalid_argument("SpfSieve::factor: out of range");
    std::vector<std::pair<long long, int>> out;
    while (n > 1) {
        long long p = spf(n);
        int e = 0;
        while (n % p == 0) { n /= p; ++e; }
        out.emplace_back(p, e);
    }
    return out;
}

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
    return static_cast<std::uint64_t>((unsigned __int128)a * b % m);
}

std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod_u64(r, a, m);
        a = mulmod_u64(a, a, m);
        e >>= 1;
    }
    return r;
}

namespace {

long long mod_ll(long long a, long long m) {
    long long r = a % m;
    return r < 0 ? r + m : r;
}

// extended gcd inverse, m > 1, gcd(a,m) = 1
long long invmod_ll(long long a, long long m) {
    long long g0 = mod_ll(a, m), g1 = m;
    long long x0 = 1, x1 = 0;
    while (g1) {
        long long q = g0 / g1;
        g0 -= q * g1; std::swap(g0, g1);
        x0 -= q * x1; std::swap(x0, x1);
    }
    if (g0 != 1) throw std::invalid_argument("invmod_ll: not invertible");
    return mod_ll(x0, m);
}

}  // namespace

std::vector<long long> sqrt_mod_odd_prime(long long a, long long p) {
    a = mod_ll(a, p);
    if (a == 0) return {0};
    auto ap = static_cast<std::uint64_t>(a);
    auto pp = static_cast<std::uint64_t>(p);
    if (powmod_u64(ap, (pp - 1) / 2, pp) != 1) return {};
    std::uint64_t x;
    if (p % 4 == 3) {
        x = powmod_u64(ap, (pp + 1) / 4, pp);
    } else {
        // Tonelli-Shanks
        std::uint64_t q = pp - 1;
        int s = 0;
        while ((q & 1) == 0) { q >>= 1; ++s; }
        std::uint64_t z = 2;
        while (powmod_u64(z, (pp - 1) / 2, pp) != pp - 1) ++z;
        std::uint64_t m = s;
        std::uint64_t c = powmod_u64(z, q, pp);
        std::uint64_t t = powmod_u64(ap, q, pp);
        std::uint64_t r = powmod_u64(ap, (q + 1) / 2, pp);
        while (t != 1) {
            std::uint64_t t2 = t;
            std::uint64_t i = 0;
            while (t2 != 1) { t2 = mulmod_u64(t2, t2, pp); ++i; }
            std::uint64_t b = powmod_u64(c, std::uint64_t(1) << (m - i - 1), pp);
            m = i;
            c = mulmod_u64(b, b, pp);
            t = mulmod_u64(t, c, pp);
            r = mulmod_u64(r, b, pp);
        }
        x = r;
    }
    auto x1 = static_cast<long long>(x);
    long long x2 = p - x1;
    if (x1 == x2) return {x1};
    if (x1 > x2) std::swap(x1, x2);
    return {x1, x2};
}

std::vector<long long> sqrt_mod_odd_prime_power(long long a, long long p, int k) {
    long long pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    a = mod_ll(a, pk);
    if (k == 1) return sqrt_mod_odd_prime(a, p);

    if (a == 0) {
        // x = 0 mod p^ceil(k/2)
        long long step = 1;
        for (int i = 0; i < (k + 1) / 2; ++i) step *= p;
        std::vector<long long> out;
        for (long long x = 0; x < pk; x += step) out.push_back(x);
        return out;
    }

    // strip the p-part of a: a = p^v * a0 with p not dividing a0
    int v = 0;
    long long a0 = a;
    while (a0 % p == 0) { a0 /= p; ++v; }
    if (v > 0) {
        if (v % 2 == 1) return {};
        // x = p^{v/2} z with z^2 = a0 (mod p^{k-v}); z defined mod p^{k-v},
        // lifts freely mod p^{k-v/2}, giving p^{v/2} residues mod p^k each.
        long long half = 1;
        for (int i = 0; i < v / 2; ++i) half *= p;
        long long pk_sub = pk;
        for (int i = 0; i < v; ++i) pk_sub /= p;  // p^{k-v}
        auto zs = sqrt_mod_odd_prime_power(a0, p, k - v);
        std::vector<long long> out;
        long long lift_count = 1;
        for (int i = 0; i < v / 2; ++i) lift_count *= p;
        for (long long z : zs)
            for (long long l = 0; l < lift_count; ++l)
                out.push_back(mod_ll(half * (z + l * pk_sub), pk));
        std::sort(out.begin(), out.end());
        out.erase(std::unique(out.begin(), out.end()), out.end());
        return out;
    }

    // Hensel: nondegenerate since gcd(2x, p) = 1
    auto base = sqrt_mod_odd_prime(a % p, p);
    if (base.empty()) return {};
    std::vector<long long> out;
    for (long long x : base) {
        long long mod = p;
        long long cur = x;
        while (mod < pk) {
            long long next_mod = mod * p;
            long long num = mod_ll(a - cur * cur, next_mod) / mod;
            long long inv = invmod_ll(mod_ll(2 * cur, p), p);
            long long delta = mod_ll(num * inv, p);
            cur = mod_ll(cur + delta * mod, next_mod);
            mod = next_mod;
        }
        out.push_back(cur);
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<long long> sqrt_mod_two_power(long long a, int k) {
    long long m = 1LL << k;
    a = mod_ll(a, m);
    // small moduli by scan; k <= 5 keeps this cheap and covers the base cases
    if (k <= 5) {
        std::vector<long long> out;
        for (long long x = 0; x < m; ++x)
            if (mod_ll(x * x - a, m) == 0) out.push_back(x);
        return out;
    }
    // lift solutions mod 2^{k-1} to mod 2^k: each x with x^2 = a (mod 2^{k-1})
    // extends through x or x + 2^{k-1}
    auto prev = sqrt_mod_two_power(a, k - 1);
    long long half = m / 2;
    std::vector<long long> out;
    for (long long x : prev) {
        for (long long cand : {x, x + half}) {
            long long c = mod_ll(cand, m);
            if (mod_ll(c * c - a, m) == 0) out.push_back(c);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

std::vector<long long> sqrt_mod(long long a, long long m, const SpfSieve& sieve) {
    if (m <= 0) throw std::invalid_argument("sqrt_mod: m > 0 required");
    if (m == 1) return {0};
    auto factors = sieve.factor(m);
    std::vector<long long> residues{0};
    long long mod_so_far = 1;
    for (auto [p, k] : factors) {
        long long pk = 1;
        for (int i = 0; i < k; ++i) pk *= p;
        std::vector<long long> roots =
            (p == 2) ? sqrt_mod_two_power(a, k) : sqrt_mod_odd_prime_power(a, p, k);
        if (roots.empty()) return {};
        std::vector<long long> merged;
        merged.reserve(residues.size() * roots.size());
        if (mod_so_far == 1) {
            merged = roots;
        } else {
            // CRT: x = r (mod mod_so_far), x = s (mod pk)
            long long inv = invmod_ll(mod_so_far % pk, pk);
            for (long long r : residues) {
                for (long long s : roots) {
                    long long diff = mod_ll(s - r % pk, pk);
                    long long x = r + mod_so_far * mod_ll(diff * inv % pk, pk);
                    merged.push_back(x);
                }
            }
        }
        residues = std::move(merged);
        mod_so_far *= pk;
    }
    std::sort(residues.begin(), residues.end());
    return residues;
}

}  // namespace selberg::arith
