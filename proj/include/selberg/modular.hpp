// Modular square roots and factorization helpers backing the large-D
// reduced-form enumeration.
#pragma once

#include <cstdint>
#include <vector>

namespace selberg::arith {

// Smallest-prime-factor sieve; grows on demand (not thread-safe while
// growing, callers size it up front before parallel sections).
class SpfSieve {
public:
    explicit SpfSieve(long long limit = 2) { ensure(limit); }
    void ensure(long long limit);
    long long limit() const { return static_cast<long long>(spf_.size()) - 1; }
    std::uint32_t spf(long long n) const { return spf_[static_cast<std::size_t>(n)]; }

    // Prime-power factorization p1^e1 * p2^e2 * ... with p1 < p2 < ...
    std::vector<std::pair<long long, int>> factor(long long n) const;

    const std::vector<long long>& primes() const { return primes_; }

private:
    std::vector<std::uint32_t> spf_{0, 1};
    std::vector<long long> primes_;
};

std::uint64_t mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod_u64(std::uint64_t a, std::uint64_t e, std::uint64_t m);

// Square roots of a modulo an odd prime p (Tonelli-Shanks).  Returns the
// sorted residues in [0,p); empty when a is a non-residue.
std::vector<long long> sqrt_mod_odd_prime(long long a, long long p);

// Square roots of a modulo p^k for odd prime p, handling p | a.
// Returns all residues in [0, p^k), sorted.
std::vector<long long> sqrt_mod_odd_prime_power(long long a, long long p, int k);

// Square roots of a modulo 2^k, k >= 1, by the standard lift.
std::vector<long long> sqrt_mod_two_power(long long a, int k);

// All residues x in [0,m) with x^2 = a (mod m); m factored via the sieve.
std::vector<long long> sqrt_mod(long long a, long long m, const SpfSieve& sieve);

}  // namespace selberg::arith
