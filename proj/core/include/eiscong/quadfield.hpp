#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "eiscong/numbers.hpp"

namespace eiscong {

class QuadField;

/// Element a + b*omega of F = Q(sqrt d), omega the integral-basis generator
/// (sqrt d, or (1+sqrt d)/2 when d = 1 mod 4).
class FieldElement {
public:
    FieldElement() : field_(nullptr) {}
    FieldElement(const QuadField& f, Rat a, Rat b);

    const Rat& a() const { return a_; }
    const Rat& b() const { return b_; }
    const QuadField& field() const;

    Rat norm() const;
    Rat trace() const;
    FieldElement conj() const;

    bool is_zero() const { return a_ == 0 && b_ == 0; }
    bool is_integral() const;
    /// signs at the two real embeddings (+1/-1); first embedding sends sqrt d to +sqrt d
    std::array<int, 2> signs() const;
    bool totally_positive() const;

    FieldElement operator+(const FieldElement& o) const;
    FieldElement operator-(const FieldElement& o) const;
    FieldElement operator*(const FieldElement& o) const;
    FieldElement operator/(const FieldElement& o) const;
    FieldElement operator-() const;
    bool operator==(const FieldElement& o) const;
    bool operator!=(const FieldElement& o) const { return !(*this == o); }

    FieldElement pow(long e) const;

    double embed1() const;
    double embed2() const;

    std::string str() const;

private:
    const QuadField* field_;
    Rat a_, b_;
};

/// Fractional ideal of O_F in Hermite normal form: (1/den) * (Z*a + Z*(b + c*omega))
/// with c | a, c | b, 0 <= b < a; the zero ideal is not representable.
class OIdeal {
public:
    OIdeal() : field_(nullptr) {}

    static OIdeal from_hnf(const QuadField& f, Int a, Int b, Int c, Int den = 1);
    /// Z-module generated by coordinate pairs (x, y) <-> x + y*omega, scaled by 1/den;
    /// the module must already be closed under multiplication by omega.
    static OIdeal from_basis(const QuadField& f, std::vector<std::pair<Int, Int>> gens, Int den = 1);
    /// Principal ideal (alpha), alpha != 0.
    static OIdeal principal(const QuadField& f, const FieldElement& alpha);
    static OIdeal ring_of_integers(const QuadField& f);
    /// Ideal generated by several elements (ignores zero generators).
    static OIdeal generated_by(const QuadField& f, const std::vector<FieldElement>& gens);

    const QuadField& field() const;
    const Int& a() const { return a_; }
    const Int& b() const { return b_; }
    const Int& c() const { return c_; }
    const Int& den() const { return den_; }

    bool is_integral() const { return den_ == 1; }
    bool is_ring() const;
    Rat norm() const;

    OIdeal operator*(const OIdeal& o) const;
    OIdeal operator+(const OIdeal& o) const; // ideal gcd
    OIdeal intersect(const OIdeal& o) const;
    OIdeal inverse() const;
    OIdeal conj() const;
    OIdeal pow(long e) const;

    bool operator==(const OIdeal& o) const;
    bool operator!=(const OIdeal& o) const { return !(*this == o); }
    /// total order for use as a map key (by norm, then HNF tuple)
    bool operator<(const OIdeal& o) const;

    bool contains(const FieldElement& x) const;
    bool divides(const OIdeal& o) const; // this | o, i.e. o subset of this
    bool is_coprime_to(const OIdeal& o) const;
    long valuation_at(const OIdeal& prime) const;

    /// Factorization into prime ideals with integer exponents (negative allowed
    /// for fractional ideals), sorted by (norm, hnf).
    std::vector<std::pair<OIdeal, long>> factor() const;

    /// A generator (exists since the fields in play have h_F^+ = 1).
    FieldElement any_generator() const;
    /// The distinguished totally positive generator: minimal trace, ties broken
    /// by smaller |b| then |a| coefficient.
    FieldElement totally_positive_generator() const;

    std::string serialize() const; // [[a,b],[0,c]]/den
    static OIdeal parse(const QuadField& f, const std::string& text);

private:
    const QuadField* field_;
    Int a_, b_, c_, den_;
    void normalize();
};

/// splitting type of a rational prime
enum class SplitType { split, inert, ramified };

struct PrimeFactorization {
    SplitType type;
    std::vector<OIdeal> primes; // one or two primes above p
    long residue_degree;        // per prime
};

/// Cusp as alpha = (x beta; y delta) in SL2(O_F) with cusp value x/y (alpha * infinity).
struct Cusp {
    FieldElement x, beta, y, delta;
    std::string label;

    bool is_infinity() const { return y.is_zero(); }
    std::string str() const;
};

/// Real quadratic field of narrow class number one.
class QuadField {
public:
    /// Fails with NotSquarefree / NarrowClassNumberNotOne.
    static const QuadField& make(long d);

    long d() const { return d_; }
    long disc() const { return disc_; }
    /// Tr(omega) and N(omega): omega^2 = trace_omega * omega - norm_omega.
    long trace_omega() const { return t_; }
    long norm_omega() const { return n_; }

    FieldElement element(Rat a, Rat b) const { return FieldElement(*this, a, b); }
    FieldElement from_rational(const Rat& r) const { return element(r, 0); }
    FieldElement omega() const { return element(0, 1); }
    FieldElement sqrt_d() const; // 2*omega - t scaled: the element sqrt(d)

    const FieldElement& fundamental_unit() const { return fund_unit_; }
    int fundamental_unit_norm() const { return fund_unit_norm_; }
    /// totally positive fundamental unit
    const FieldElement& tp_unit() const { return tp_unit_; }
    /// generator of the different ideal: 2*omega - Tr(omega) = sqrt(disc)
    const FieldElement& different_gen() const { return different_gen_; }
    OIdeal different() const;

    PrimeFactorization factor_rational_prime(const Int& p) const;
    /// All prime ideals of norm <= bound, sorted by (norm, generator order).
    std::vector<OIdeal> primes_up_to(const Int& bound) const;
    /// All nonzero integral ideals of norm <= bound, sorted by (norm, hnf).
    std::vector<OIdeal> ideals_up_to(const Int& bound) const;

    /// Cusp representatives for Gamma_1(O_F, n); n integral coprime to 6*disc.
    std::vector<Cusp> cusp_representatives(const OIdeal& n) const;

    std::string descriptor() const; // QF(d=..)

private:
    QuadField() = default;
    long d_ = 0, disc_ = 0, t_ = 0, n_ = 0;
    FieldElement fund_unit_, tp_unit_, different_gen_;
    int fund_unit_norm_ = 0;
    void init(long d);
    void check_narrow_class_number() const;
};

/// Solves x*delta - y*beta = 1 over O_F for coprime integral x, y.
std::pair<FieldElement, FieldElement> complete_to_sl2(const QuadField& f, const FieldElement& x,
                                                      const FieldElement& y);

} // namespace eiscong
