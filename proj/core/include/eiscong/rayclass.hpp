#pragma once

#include <array>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "eiscong/cyclo.hpp"
#include "eiscong/quadfield.hpp"
#include "eiscong/residue_ring.hpp"

namespace eiscong {

/// The narrow ray class group Cl^+_F(m) = [(O/m)^x x {+-1}^2] / image(O_F^x),
/// computed by enumeration and presented by elementary divisors.
class RayClassGroup {
public:
    static std::shared_ptr<const RayClassGroup> make(const QuadField& f, const OIdeal& m);

    const QuadField& field() const { return *field_; }
    const OIdeal& modulus() const { return modulus_; }
    const ResidueRing& ring() const { return *ring_; }

    /// elementary divisors d_1 | d_2 | ... (only entries > 1)
    const std::vector<Int>& divisors() const { return divisors_; }
    Int order() const;
    Int exponent() const { return divisors_.empty() ? Int(1) : divisors_.back(); }

    /// discrete log of the class of (residue, sign vector)
    std::vector<Int> dlog_pair(const ResidueRing::Elem& r, int s1, int s2) const;
    /// class of a principal ideal (alpha), alpha integral and coprime to m
    std::vector<Int> dlog_element(const FieldElement& alpha) const;
    /// class of an arbitrary fractional ideal coprime to m
    std::vector<Int> dlog_ideal(const OIdeal& a) const;

    /// instance of an O_F-element generating the i-th group generator's class,
    /// chosen coprime to `aux` (and to the modulus)
    FieldElement generator_element(size_t i, const OIdeal& aux) const;

    /// deterministic element with the given residue and signs, coprime to aux
    FieldElement find_element(const ResidueRing::Elem& residue, int s1, int s2,
                              const OIdeal& aux) const;

    /// units u of O/m with u = 1 mod mp (cached; shared by conductor tests)
    const std::vector<ResidueRing::Elem>& units_congruent_to_one(const OIdeal& mp) const;
    /// factorization of the modulus (cached)
    const std::vector<std::pair<OIdeal, long>>& modulus_factors() const;

private:
    RayClassGroup() = default;
    const QuadField* field_ = nullptr;
    OIdeal modulus_;
    std::shared_ptr<ResidueRing> ring_;
    std::vector<Int> divisors_;           // all SNF divisors > 1
    std::vector<std::vector<Int>> snf_u_; // class(x) = U x mod divisors
    std::vector<std::vector<Int>> snf_u_inv_;
    size_t raw_rank_ = 0;
    // raw dlog over the polycyclic generating set, keyed by packed element
    std::map<std::array<long, 4>, std::vector<long>> raw_dlog_;
    std::vector<std::array<long, 4>> raw_gens_;
    mutable std::map<OIdeal, std::vector<Int>> prime_dlog_cache_;
    mutable std::map<std::string, std::vector<ResidueRing::Elem>> kernel_units_cache_;
    mutable std::vector<std::pair<OIdeal, long>> modulus_factors_;
    mutable bool factors_ready_ = false;
    mutable std::mutex cache_mutex_;

    std::array<long, 4> pack(const ResidueRing::Elem& r, int s1, int s2) const;
    std::vector<Int> project(const std::vector<long>& raw) const;
};

/// Narrow ray class character: exponent vector against the group's divisors.
class RayCharacter {
public:
    RayCharacter(std::shared_ptr<const RayClassGroup> group, std::vector<Int> exponents);

    static RayCharacter trivial(const QuadField& f);

    const RayClassGroup& group() const { return *group_; }
    const std::vector<Int>& exponents() const { return exps_; }
    const OIdeal& modulus() const { return group_->modulus(); }

    Int order() const;
    bool is_trivial() const { return order() == 1; }
    /// sign vector r in {0,1}^2
    std::array<int, 2> sign() const;
    bool totally_even() const;
    bool totally_odd() const;

    /// value on a class given by its dlog vector
    CycloNumber eval_class(const std::vector<Int>& dlog) const;
    /// value on the class of (residue, signs); residue must be a unit mod m
    CycloNumber eval_pair(const ResidueRing::Elem& r, int s1, int s2) const;
    /// modulus-level value: 0 on ideals not coprime to the modulus
    CycloNumber eval_ideal_modulus_level(const OIdeal& a) const;

    OIdeal conductor() const;
    bool is_primitive() const;
    RayCharacter primitivize() const;

    RayCharacter inverse() const;

    /// stable label F<d>-m<idealHNF>-e<exponents>-r<r1r2>
    std::string label() const;

    bool operator==(const RayCharacter& o) const;

private:
    std::shared_ptr<const RayClassGroup> group_;
    std::vector<Int> exps_;
    // lazily filled, accessed via atomic shared_ptr loads; duplicate
    // computation across threads yields identical values
    mutable std::shared_ptr<const OIdeal> conductor_cache_;
};

/// chi(m) via the primitivization of chi: exact root of unity when m is coprime
/// to the conductor, exact zero otherwise.
CycloNumber chi_eval(const RayCharacter& chi, const OIdeal& m);

/// Pointwise product as a character modulo lcm of the moduli.
RayCharacter char_product(const RayCharacter& a, const RayCharacter& b);

/// All characters of the group, ordered lexicographically by exponent vector.
std::vector<RayCharacter> all_characters(std::shared_ptr<const RayClassGroup> group);

/// Characters of Cl^+(cond) whose conductor is exactly cond.
std::vector<RayCharacter> primitive_characters(const QuadField& f, const OIdeal& cond);

/// The unique totally even quadratic character of the given conductor; fails
/// if there is none or several.
RayCharacter quadratic_character_of_conductor(const QuadField& f, const OIdeal& cond);

/// Gauss sum tau(psi) of a primitive character, an exact cyclotomic number.
CycloNumber gauss_sum(const RayCharacter& psi);

/// #(O_{F,+}^x / O_{F,n}^{x2})
Int unit_index(const QuadField& f, const OIdeal& n);

} // namespace eiscong
