#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>
#include <vector>

#include "eiscong/errors.hpp"

namespace eiscong {

using Int = mpz_class;
using Rat = mpq_class;

inline Rat make_rat(const Int& num, const Int& den) {
    if (den == 0) fail(errc::division_by_zero, "rational with zero denominator");
    Rat r(num, den);
    r.canonicalize();
    return r;
}

inline Int rat_num(const Rat& r) { return r.get_num(); }
inline Int rat_den(const Rat& r) { return r.get_den(); }

Int pow_int(const Int& base, unsigned long e);
Rat pow_rat(const Rat& base, long e);

/// Floor division a/b for exact integers (b != 0).
Int fdiv(const Int& a, const Int& b);
Int fmod(const Int& a, const Int& b);

/// v_p(n) for n != 0.
long valuation(Int n, const Int& p);

bool is_prime(const Int& n);

/// Prime factorization by trial division, smallest factor first.
std::vector<std::pair<Int, long>> factor_integer(Int n);

std::vector<long> primes_below(long bound);

/// a^e mod m with e >= 0.
Int pow_mod(Int a, Int e, const Int& m);
/// Inverse of a mod m; fails if gcd(a, m) != 1.
Int inv_mod(const Int& a, const Int& m);

/// Multiplicative order of a modulo m (gcd(a,m)=1 required).
long mult_order(const Int& a, const Int& m);

long euler_phi(long n);
std::vector<long> divisors_of(long n);

double to_double(const Rat& r);

std::string to_string(const Int& n);
std::string to_string(const Rat& r);

/// B_0..B_n as exact rationals (B_1 = -1/2).
std::vector<Rat> bernoulli_numbers(int n);
/// Bernoulli polynomial B_n(x) evaluated exactly.
Rat bernoulli_poly(int n, const Rat& x, const std::vector<Rat>& bern);

} // namespace eiscong
