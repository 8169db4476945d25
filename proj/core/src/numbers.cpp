#include "eiscong/numbers.hpp"

#include <algorithm>
#include <sstream>

namespace eiscong {

Int pow_int(const Int& base, unsigned long e) {
    Int r;
    mpz_pow_ui(r.get_mpz_t(), base.get_mpz_t(), e);
    return r;
}

Rat pow_rat(const Rat& base, long e) {
    if (e == 0) return Rat(1);
    if (base == 0) {
        if (e < 0) fail(errc::division_by_zero, "0^negative");
        return Rat(0);
    }
    unsigned long a = (unsigned long)(e < 0 ? -e : e);
    Rat r = make_rat(pow_int(rat_num(base), a), pow_int(rat_den(base), a));
    if (e < 0) r = 1 / r;
    return r;
}

Int fdiv(const Int& a, const Int& b) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return q;
}

Int fmod(const Int& a, const Int& b) {
    Int r;
    mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), b.get_mpz_t());
    return r;
}

long valuation(Int n, const Int& p) {
    if (n == 0) fail(errc::zero_input, "valuation of 0");
    long v = 0;
    while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
        n /= p;
        ++v;
    }
    return v;
}

bool is_prime(const Int& n) {
    if (n < 2) return false;
    return mpz_probab_prime_p(n.get_mpz_t(), 40) != 0;
}

std::vector<std::pair<Int, long>> factor_integer(Int n) {
    if (n == 0) fail(errc::zero_input, "factor of 0");
    if (n < 0) n = -n;
    std::vector<std::pair<Int, long>> out;
    for (Int p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
        if (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            long e = 0;
            while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
                n /= p;
                ++e;
            }
            out.emplace_back(p, e);
        }
    }
    if (n > 1) out.emplace_back(n, 1);
    return out;
}

std::vector<long> primes_below(long bound) {
    std::vector<long> out;
    if (bound < 3) return out;
    std::vector<bool> sieve(bound, true);
    for (long i = 2; i < bound; ++i) {
        if (sieve[i]) {
            out.push_back(i);
            for (long j = 2 * i; j < bound; j += i) sieve[j] = false;
        }
    }
    return out;
}

Int pow_mod(Int a, Int e, const Int& m) {
    Int r;
    mpz_powm(r.get_mpz_t(), a.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
    return r;
}

Int inv_mod(const Int& a, const Int& m) {
    Int r;
    if (!mpz_invert(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t()))
        fail(errc::division_by_zero, "non-invertible residue " + to_string(a) + " mod " + to_string(m));
    return r;
}

long mult_order(const Int& a, const Int& m) {
    Int x = fmod(a, m);
    Int one = 1;
    if (x == 0) fail(errc::zero_input, "order of 0");
    Int acc = x;
    long k = 1;
    while (acc != one) {
        acc = acc * x % m;
        ++k;
        if (k > 4 * 1000 * 1000) fail(errc::internal_error, "mult_order runaway");
    }
    return k;
}

long euler_phi(long n) {
    long r = n;
    for (auto& [p, e] : factor_integer(Int(n))) {
        long pl = (long)p.get_si();
        r = r / pl * (pl - 1);
    }
    return r;
}

std::vector<long> divisors_of(long n) {
    std::vector<long> out{1};
    for (auto& [p, e] : factor_integer(Int(n))) {
        long pl = (long)p.get_si();
        size_t sz = out.size();
        long pe = 1;
        for (long i = 1; i <= e; ++i) {
            pe *= pl;
            for (size_t j = 0; j < sz; ++j) out.push_back(out[j] * pe);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

double to_double(const Rat& r) { return r.get_d(); }

std::string to_string(const Int& n) { return n.get_str(); }
std::string to_string(const Rat& r) { return r.get_str(); }

std::vector<Rat> bernoulli_numbers(int n) {
    // Recurrence sum_{k=0}^{m} C(m+1,k) B_k = 0.
    std::vector<Rat> b(n + 1);
    b[0] = 1;
    for (int m = 1; m <= n; ++m) {
        Rat s = 0;
        Int binom = 1; // C(m+1, 0)
        for (int k = 0; k < m; ++k) {
            s += Rat(binom) * b[k];
            binom = binom * (m + 1 - k) / (k + 1);
        }
        b[m] = -s / Rat(binom); // binom = C(m+1, m) = m+1
    }
    return b;
}

Rat bernoulli_poly(int n, const Rat& x, const std::vector<Rat>& bern) {
    Rat s = 0;
    Int binom = 1;
    // B_n(x) = sum_k C(n,k) B_{n-k} x^k
    std::vector<Rat> xpow(n + 1);
    xpow[0] = 1;
    for (int k = 1; k <= n; ++k) xpow[k] = xpow[k - 1] * x;
    for (int k = 0; k <= n; ++k) {
        s += Rat(binom) * bern[n - k] * xpow[k];
        if (k < n) binom = binom * (n - k) / (k + 1);
    }
    return s;
}

const char* errc_name(errc c) {
    switch (c) {
        case errc::not_squarefree: return "NotSquarefree";
        case errc::narrow_class_number_not_one: return "NarrowClassNumberNotOne";
        case errc::zero_ideal: return "ZeroIdeal";
        case errc::not_integral: return "NotIntegral";
        case errc::level_not_coprime: return "LevelNotCoprime";
        case errc::zero_modulus: return "ZeroModulus";
        case errc::not_primitive: return "NotPrimitive";
        case errc::division_by_zero: return "DivisionByZero";
        case errc::denominator_not_coprime: return "DenominatorNotCoprime";
        case errc::zero_input: return "ZeroInput";
        case errc::ramified_prime: return "RamifiedPrime";
        case errc::unsupported_argument: return "UnsupportedArgument";
        case errc::odd_weight_unsupported: return "OddWeightUnsupported";
        case errc::all_constant_terms_zero: return "AllConstantTermsZero";
        case errc::data_mismatch: return "DataMismatch";
        case errc::missing_eigenvalue: return "MissingEigenvalue";
        case errc::parity_mismatch: return "ParityMismatch";
        case errc::conductor_not_coprime: return "ConductorNotCoprime";
        case errc::schema_mismatch: return "SchemaMismatch";
        case errc::duplicate_prime: return "DuplicatePrime";
        case errc::malformed_value: return "MalformedValue";
        case errc::network_error: return "NetworkError";
        case errc::translation_error: return "TranslationError";
        case errc::usage_error: return "UsageError";
        case errc::internal_error: return "InternalError";
    }
    return "UnknownError";
}

} // namespace eiscong
