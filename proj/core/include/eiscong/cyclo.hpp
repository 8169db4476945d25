#pragma once

#include <complex>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "eiscong/numbers.hpp"

namespace eiscong {

/// Per-level structure of Q(zeta_N) as the tensor product of the prime-power
/// cyclotomic subfields Q(zeta_{p^e}) for p^e || N. Coefficient vectors are
/// indexed mixed-radix over the per-factor power bases.
struct CycloLevel {
    long n = 1;
    long phi = 1;
    // one entry per prime power q = p^e dividing n exactly: (p, q, phi(q), stride)
    struct Factor {
        long p;
        long q;
        long phi;
        long stride;
        long crt_inv; // inverse of n/q modulo q
    };
    std::vector<Factor> factors;
    // reduction rows: for exponent a in [phi(q), q): expansion of zeta_q^a
    // over the power basis, as (exponent, sign) pairs
    std::vector<std::vector<std::vector<std::pair<long, int>>>> red_rows;

    static const CycloLevel& get(long n);
};

/// Exact element of Q(zeta_N). Canonical representative: integer coefficient
/// vector over the tensor power basis with positive denominator and content 1.
class CycloNumber {
public:
    CycloNumber() : level_(1), coef_(1, Int(0)), den_(1) {}
    explicit CycloNumber(const Rat& r);
    explicit CycloNumber(const Int& n);
    explicit CycloNumber(long n) : CycloNumber(Int(n)) {}

    /// zeta_n^k scaled by a rational.
    static CycloNumber root_of_unity(long n, long k, const Rat& scale = Rat(1));
    static CycloNumber zero() { return CycloNumber(); }
    static CycloNumber one() { return CycloNumber(Int(1)); }

    /// Builds sum_i scale_i * zeta_n^{k_i}.
    static CycloNumber from_monomials(long n, const std::vector<std::pair<long, Rat>>& terms);

    long level() const { return level_; }
    bool is_zero() const;
    bool is_rational() const;
    /// Value as a rational; fails when the element is irrational.
    Rat to_rational() const;

    CycloNumber& operator+=(const CycloNumber& o);
    CycloNumber& operator-=(const CycloNumber& o);
    CycloNumber& operator*=(const CycloNumber& o);
    friend CycloNumber operator+(CycloNumber a, const CycloNumber& b) { return a += b; }
    friend CycloNumber operator-(CycloNumber a, const CycloNumber& b) { return a -= b; }
    friend CycloNumber operator*(CycloNumber a, const CycloNumber& b) { return a *= b; }
    CycloNumber operator-() const;

    CycloNumber inverse() const;
    CycloNumber operator/(const CycloNumber& o) const { return *this * o.inverse(); }

    CycloNumber& operator*=(const Rat& r);
    friend CycloNumber operator*(CycloNumber a, const Rat& r) { return a *= r; }

    bool operator==(const CycloNumber& o) const;
    bool operator!=(const CycloNumber& o) const { return !(*this == o); }

    /// Galois automorphism zeta -> zeta^a, gcd(a, level) = 1.
    CycloNumber galois(long a) const;
    /// Complex conjugation (zeta -> zeta^{-1}).
    CycloNumber conj() const { return galois_minus_one(); }

    /// Value under zeta_N -> exp(2*pi*i/N). `precision_bits` >= 53; evaluation
    /// uses extended double arithmetic, error <= 2^{1-precision} * sum |coef|/den.
    std::complex<double> embed(int precision_bits = 53) const;

    /// Re-expresses the value in Q(zeta_m); fails if the value does not lie there.
    CycloNumber coerce_to_level(long m) const;

    /// The same value at the smallest cyclotomic level containing it.
    CycloNumber minimize_level() const;

    /// Serialization `N:[c0,c1,...]/den` over the power basis 1, zeta_N, ...,
    /// zeta_N^{phi(N)-1}.
    std::string serialize() const;
    static CycloNumber parse(const std::string& text);

    /// Coefficients over the power basis (length phi(N)); used by serialize().
    std::vector<Int> power_basis_coefficients() const;
    const Int& den() const { return den_; }

    /// Internal tensor-basis access for residue maps.
    const std::vector<Int>& tensor_coefficients() const { return coef_; }

private:
    CycloNumber galois_minus_one() const;
    void normalize();
    static void add_monomial(std::vector<Int>& coef, const CycloLevel& lv,
                             std::vector<long>& exps, const Int& c, size_t var);

    long level_;
    std::vector<Int> coef_;
    Int den_;

    friend CycloNumber coerce_up(const CycloNumber& x, long n);
};

/// Least common level with both values embedded.
long lcm_level(long a, long b);

/// Exact square root of the field discriminant in Q(zeta_{lcm(8, disc)}),
/// with positive real embedding.
CycloNumber sqrt_of_discriminant(long disc);

/// Polynomial arithmetic helpers over F_p (dense, lowest degree first).
namespace fp {
using Poly = std::vector<Int>;
Poly mul(const Poly& a, const Poly& b, const Int& p);
Poly mod(Poly a, const Poly& m, const Int& p);
Poly gcd(Poly a, Poly b, const Int& p);
Poly pow_mod(const Poly& a, Int e, const Poly& m, const Int& p);
} // namespace fp

/// Cyclotomic polynomial Phi_N, exact integer coefficients.
const std::vector<Int>& cyclotomic_polynomial(long n);

/// Reduction of Q(zeta_N) modulo a fixed prime above p (p odd, p not dividing N).
/// The chosen irreducible factor of Phi_N mod p is the lexicographically least
/// monic factor; residue field F_{p^f} with f = ord_N(p).
class ResidueMap {
public:
    ResidueMap(long level, const Int& p);

    long level() const { return level_; }
    const Int& p() const { return p_; }
    long residue_degree() const { return f_; }
    /// |F_{p^f}|
    Int residue_field_size() const { return pow_int(p_, (unsigned long)f_); }
    const std::vector<Int>& factor() const { return factor_; }

    /// Element of F_{p^f} as a polynomial of degree < f over F_p.
    using Fq = std::vector<Int>;
    Fq reduce(const CycloNumber& x) const;
    std::string fq_to_string(const Fq& a) const;

    /// Valuation at the chosen prime above p, normalized with v(p) = 1.
    long valuation(const CycloNumber& x) const;

    std::string describe() const;

private:
    long level_;
    Int p_;
    long f_;
    std::vector<Int> factor_;              // chosen irreducible factor mod p
    std::vector<std::vector<Int>> zeta_pows_; // y^j mod factor, j in [0, level)
    // Hensel data, filled lazily by valuation()
    mutable long hensel_k_ = 0;
    mutable Int hensel_mod_;
    mutable std::vector<Int> hensel_factor_;
    mutable std::vector<std::vector<Int>> hensel_zeta_pows_;
    void ensure_hensel(long k) const;
};

/// v_p of x at the canonical residue map prime; fails on x = 0 or p | level.
long valuation_at_p(const CycloNumber& x, const Int& p);

} // namespace eiscong
