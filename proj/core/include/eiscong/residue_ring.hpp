#pragma once

#include <vector>

#include "eiscong/quadfield.hpp"

namespace eiscong {

/// Finite ring O_F / m for an integral nonzero ideal m, elements as canonical
/// coordinate pairs (x, y) <-> x + y*omega with 0 <= x < a, 0 <= y < c.
class ResidueRing {
public:
    ResidueRing(const QuadField& f, const OIdeal& m);

    const OIdeal& modulus() const { return m_; }
    const QuadField& field() const { return *field_; }
    Int size() const { return a_ * c_; }

    using Elem = std::pair<Int, Int>;

    Elem reduce(const Int& x, const Int& y) const;
    Elem reduce(const FieldElement& e) const; // requires integral coordinates
    Elem zero() const { return {Int(0), Int(0)}; }
    Elem one() const { return reduce(Int(1), Int(0)); }

    Elem add(const Elem& u, const Elem& v) const;
    Elem neg(const Elem& u) const;
    Elem mul(const Elem& u, const Elem& v) const;
    Elem pow(Elem base, Int e) const;

    bool is_unit(const Elem& u) const;
    /// Multiplicative inverse of a unit (solved by integer linear algebra).
    Elem inverse(const Elem& u) const;

    /// All ring elements in a fixed deterministic order.
    std::vector<Elem> elements() const;
    /// All units, same order filter.
    std::vector<Elem> units() const;
    Int unit_count() const;

    /// index of an element in the deterministic enumeration
    long index_of(const Elem& u) const;

    FieldElement lift(const Elem& u) const;

private:
    const QuadField* field_;
    OIdeal m_;
    Int a_, b_, c_; // HNF of m (den = 1)
    std::vector<OIdeal> prime_divisors_;
};

} // namespace eiscong
