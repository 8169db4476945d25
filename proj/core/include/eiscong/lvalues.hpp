#pragma once

#include <complex>
#include <map>

#include "eiscong/rayclass.hpp"

namespace eiscong {

/// Integral ideals of norm <= bound with factorization data, cached per field.
class IdealTable {
public:
    struct Entry {
        OIdeal ideal;
        long norm;
        std::vector<std::pair<size_t, long>> factors; // (prime index, exponent)
    };
    static const IdealTable& get(const QuadField& f, long bound);

    const std::vector<OIdeal>& primes() const { return primes_; }
    const std::vector<Entry>& entries() const { return entries_; } // sorted by (norm, hnf)

    /// chi at every prime of the table (primitive evaluation), then multiplied
    /// out over the entries; entries not coprime to the conductor give 0
    std::vector<std::complex<double>> character_values(const RayCharacter& chi) const;

private:
    std::vector<OIdeal> primes_;
    std::vector<Entry> entries_;
};

/// Shintani cone decomposition data for a modulus m: for each unit residue
/// class, the cone coordinates of the fundamental-parallelepiped lattice points.
struct ShintaniData {
    const QuadField* field;
    OIdeal modulus;
    FieldElement w1, w2; // scaled cone generators M1*1 and M2*eps_+
    // unit residue (ring index) -> cone coordinates (x1 in (0,1], x2 in [0,1))
    std::map<long, std::vector<std::pair<Rat, Rat>>> cosets;

    static const ShintaniData& get(const QuadField& f, const OIdeal& m);
};

/// Value at 1-k of the Shintani cone zeta attached to generators (w1, w2) and
/// cone coordinates x = (x1, x2); exact rational (trace of the cone sum).
Rat shintani_cone_zeta(const FieldElement& w1, const FieldElement& w2, const Rat& x1,
                       const Rat& x2, long k);

/// Exact Hecke L-value L_m(s, chi) at s = 1-k <= 0, summed over ideals coprime
/// to the modulus of chi. UnsupportedArgument for s > 0 and for the trivial
/// character at s = 0.
CycloNumber l_value_nonpositive(const RayCharacter& chi, long s);

struct LNumericResult {
    std::complex<double> value;
    double error_estimate;
};

/// Truncated Dirichlet series over ideals of norm <= terms (modulus-level chi).
LNumericResult l_value_numeric_direct(const RayCharacter& chi, std::complex<double> s, long terms);

/// Analytic continuation via the completed L-function (smoothed Bessel sums);
/// chi must be primitive (the trivial character runs through a Hurwitz-zeta
/// factorization over Q instead). NotPrimitive otherwise.
LNumericResult l_value_numeric_continued(const RayCharacter& chi, double s, long terms);

/// Partial Euler product over primes of norm <= bound (independent oracle).
std::complex<double> euler_product_numeric(const RayCharacter& chi, std::complex<double> s,
                                           long bound);

/// Hurwitz zeta by Euler-Maclaurin (s != 1), usable at negative s.
double hurwitz_zeta(double s, double x);

/// Dedekind zeta of the field via zeta(s) * L(s, kronecker(disc)); s != 1.
double dedekind_zeta_numeric(const QuadField& f, double s);

} // namespace eiscong
