#include "doctest.h"

#include <random>
#include <set>

#include "eiscong/rayclass.hpp"

using namespace eiscong;

namespace {

std::mt19937_64 rng(424242);

// independent order oracle: |(O/m)^x x {+-1}^2| / |<image of -1, image of eps_0>|
Int ray_class_order_oracle(const QuadField& f, const OIdeal& m) {
    ResidueRing R(f, m);
    auto units = R.units();
    struct El {
        ResidueRing::Elem r;
        int s1, s2;
        bool operator<(const El& o) const {
            if (r != o.r) return r < o.r;
            if (s1 != o.s1) return s1 < o.s1;
            return s2 < o.s2;
        }
    };
    auto mul = [&](const El& a, const El& b) {
        return El{R.mul(a.r, b.r), a.s1 * b.s1, a.s2 * b.s2};
    };
    FieldElement m1 = f.from_rational(-1), e0 = f.fundamental_unit();
    auto sm = m1.signs(), se = e0.signs();
    std::vector<El> gens{{R.reduce(m1), sm[0], sm[1]}, {R.reduce(e0), se[0], se[1]}};
    std::set<El> sub{{R.one(), 1, 1}};
    bool grew = true;
    while (grew) {
        grew = false;
        std::vector<El> cur(sub.begin(), sub.end());
        for (auto& x : cur)
            for (auto& g : gens) {
                El y = mul(x, g);
                if (sub.insert(y).second) grew = true;
            }
    }
    return Int((long)(units.size() * 4)) / Int((long)sub.size());
}

OIdeal ideal_of_int(const QuadField& f, long n) { return OIdeal::principal(f, f.from_rational(n)); }

} // namespace

TEST_CASE("ray class group orders against brute-force oracle") {
    const QuadField& f2 = QuadField::make(2);
    const QuadField& f5 = QuadField::make(5);

    auto g_triv = RayClassGroup::make(f2, OIdeal::ring_of_integers(f2));
    CHECK(g_triv->order() == 1);

    auto g5 = RayClassGroup::make(f2, ideal_of_int(f2, 5));
    CHECK(g5->order() == ray_class_order_oracle(f2, ideal_of_int(f2, 5)));

    auto g2_5 = RayClassGroup::make(f5, ideal_of_int(f5, 2));
    CHECK(g2_5->order() == ray_class_order_oracle(f5, ideal_of_int(f5, 2)));

    for (long n : {3L, 7L, 9L, 11L}) {
        auto g = RayClassGroup::make(f2, ideal_of_int(f2, n));
        CHECK(g->order() == ray_class_order_oracle(f2, ideal_of_int(f2, n)));
        Int prod = 1;
        for (auto& d : g->divisors()) prod *= d;
        CHECK(prod == g->order());
    }
}

TEST_CASE("dlog is a homomorphism") {
    const QuadField& f = QuadField::make(2);
    auto g = RayClassGroup::make(f, ideal_of_int(f, 5));
    auto ideals = f.ideals_up_to(Int(300));
    std::vector<OIdeal> coprime;
    for (auto& I : ideals)
        if (I.is_coprime_to(g->modulus())) coprime.push_back(I);
    std::uniform_int_distribution<size_t> pick(0, coprime.size() - 1);
    for (int i = 0; i < 500; ++i) {
        const OIdeal &I = coprime[pick(rng)], &J = coprime[pick(rng)];
        auto a = g->dlog_ideal(I), b = g->dlog_ideal(J), c = g->dlog_ideal(I * J);
        for (size_t k = 0; k < a.size(); ++k)
            CHECK(fmod(a[k] + b[k], g->divisors()[k]) == c[k]);
    }
}

TEST_CASE("chi((alpha)) = sgn(alpha)^r for alpha = 1 mod m") {
    const QuadField& f = QuadField::make(2);
    auto g = RayClassGroup::make(f, ideal_of_int(f, 5));
    for (auto& chi : all_characters(g)) {
        auto r = chi.sign();
        int checked = 0;
        for (long i = -4; i <= 4 && checked < 100; ++i)
            for (long j = -4; j <= 4 && checked < 100; ++j) {
                FieldElement alpha =
                    f.from_rational(1) + f.element(Rat(5 * i), Rat(5 * j)); // alpha = 1 mod (5)
                if (alpha.is_zero()) continue;
                OIdeal a = OIdeal::principal(f, alpha);
                if (!a.is_coprime_to(g->modulus())) continue;
                ++checked;
                auto s = alpha.signs();
                int expect = ((r[0] && s[0] < 0) ? -1 : 1) * ((r[1] && s[1] < 0) ? -1 : 1);
                CycloNumber v = chi.eval_ideal_modulus_level(a);
                CHECK(v == (expect > 0 ? CycloNumber::one() : -CycloNumber::one()));
            }
        CHECK(checked >= 50);
    }
}

TEST_CASE("chi5: the quadratic character of conductor (5) over Q(sqrt 2)") {
    const QuadField& f = QuadField::make(2);
    OIdeal five = ideal_of_int(f, 5);
    RayCharacter chi5 = quadratic_character_of_conductor(f, five);
    CHECK(chi5.order() == 2);
    CHECK(chi5.totally_even());
    CHECK(chi5.conductor() == five);
    CHECK(chi5.is_primitive());

    // chi5((sqrt 2)) = -1
    OIdeal sq2 = OIdeal::principal(f, f.omega());
    CHECK(chi_eval(chi5, sq2) == -CycloNumber::one());
    // non-coprime rule
    CHECK(chi_eval(chi5, five) == CycloNumber::zero());
    // trivial character evaluates to 1 everywhere
    RayCharacter triv = RayCharacter::trivial(f);
    CHECK(chi_eval(triv, sq2) == CycloNumber::one());
    CHECK(chi_eval(triv, five) == CycloNumber::one());

    // chi5 agrees with the Legendre symbol of the ideal norm mod 5
    for (auto& q : f.primes_up_to(Int(60))) {
        if (!q.is_coprime_to(five)) continue;
        Int n = rat_num(q.norm());
        Int leg = pow_mod(n, Int(2), Int(5)); // n^2 mod 5: 1 for QR, 4 for non-QR
        CycloNumber expect = (leg == 1) ? CycloNumber::one() : -CycloNumber::one();
        CHECK(chi_eval(chi5, q) == expect);
    }
}

TEST_CASE("conductor computation") {
    const QuadField& f = QuadField::make(2);
    OIdeal five = ideal_of_int(f, 5);
    auto g5 = RayClassGroup::make(f, five);
    // trivial character mod (5) has conductor O_F
    RayCharacter triv5(g5, std::vector<Int>(g5->divisors().size(), Int(0)));
    CHECK(triv5.conductor() == OIdeal::ring_of_integers(f));
    CHECK(!triv5.is_primitive());

    RayCharacter chi5 = quadratic_character_of_conductor(f, five);
    CHECK(chi5.conductor() == five);

    // lift chi5 to modulus (25): conductor still (5), primitivization round-trips
    OIdeal twenty5 = ideal_of_int(f, 25);
    auto g25 = RayClassGroup::make(f, twenty5);
    bool found_lift = false;
    for (auto& chi : all_characters(g25)) {
        if (chi.order() != 2) continue;
        if (!(chi.conductor() == five)) continue;
        if (!chi.totally_even()) continue;
        RayCharacter prim = chi.primitivize();
        CHECK(prim.modulus() == five);
        CHECK(prim == chi5);
        // primitivization is idempotent
        CHECK(prim.primitivize() == prim);
        // values agree on coprime ideals
        for (auto& q : f.primes_up_to(Int(40))) {
            if (!q.is_coprime_to(twenty5)) continue;
            CHECK(chi.eval_ideal_modulus_level(q) == chi5.eval_ideal_modulus_level(q));
        }
        found_lift = true;
        break;
    }
    CHECK(found_lift);
}

TEST_CASE("character orthogonality") {
    const QuadField& f = QuadField::make(2);
    for (long n : {5L, 7L, 9L, 11L, 13L}) {
        auto g = RayClassGroup::make(f, ideal_of_int(f, n));
        // enumerate all classes via exponent boxes and generator elements
        std::vector<std::vector<Int>> classes;
        std::vector<Int> v(g->divisors().size(), Int(0));
        while (true) {
            classes.push_back(v);
            size_t i = 0;
            while (i < v.size()) {
                v[i] += 1;
                if (v[i] < g->divisors()[i]) break;
                v[i] = 0;
                ++i;
            }
            if (i == v.size()) break;
        }
        CHECK(Int((long)classes.size()) == g->order());
        for (auto& chi : all_characters(g)) {
            if (chi.order() == 1) continue;
            CycloNumber sum = CycloNumber::zero();
            for (auto& cls : classes) sum += chi.eval_class(cls);
            CHECK(sum.is_zero());
        }
    }
}

TEST_CASE("chi_eval is completely multiplicative on coprime ideals") {
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    auto ideals = f.ideals_up_to(Int(120));
    std::uniform_int_distribution<size_t> pick(0, ideals.size() - 1);
    int done = 0;
    for (int i = 0; i < 5000 && done < 500; ++i) {
        const OIdeal &I = ideals[pick(rng)], &J = ideals[pick(rng)];
        if (!I.is_coprime_to(J)) continue;
        ++done;
        CHECK(chi_eval(chi5, I * J) == chi_eval(chi5, I) * chi_eval(chi5, J));
    }
    CHECK(done == 500);
}

TEST_CASE("character products and inverses") {
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    RayCharacter inv = chi5.inverse();
    CHECK(inv == chi5); // quadratic
    RayCharacter triv = RayCharacter::trivial(f);
    RayCharacter prod = char_product(chi5, triv);
    CHECK(prod.conductor() == chi5.conductor());
    for (auto& q : f.primes_up_to(Int(30)))
        CHECK(chi_eval(prod, q) == chi_eval(chi5, q));
    // chi5 * chi5 is trivial (conductor O_F)
    RayCharacter sq = char_product(chi5, chi5);
    CHECK(sq.conductor() == OIdeal::ring_of_integers(f));
}

TEST_CASE("gauss sum of chi5 is +-5") {
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    CycloNumber tau = gauss_sum(chi5);
    CHECK(tau * tau == CycloNumber(Int(25))); // sgn(-1)^r N(m) with r = (0,0)
    CHECK(tau.is_rational());                 // real quadratic even character here
    Rat value = tau.to_rational();
    CHECK((value == 5 || value == -5));
    auto e = tau.embed();
    CHECK(std::abs(std::norm(e) - 25.0) < 1e-10);

    CHECK(gauss_sum(RayCharacter::trivial(f)) == CycloNumber::one());

    // NotPrimitive on an imprimitive character
    auto g25 = RayClassGroup::make(f, ideal_of_int(f, 25));
    RayCharacter triv25(g25, std::vector<Int>(g25->divisors().size(), Int(0)));
    CHECK_THROWS_WITH_AS(gauss_sum(triv25), doctest::Contains("NotPrimitive"), Error);
}

TEST_CASE("gauss sum identities for conductors of norm <= 60") {
    for (long d : {2L, 5L}) {
        const QuadField& f = QuadField::make(d);
        for (auto& m : f.ideals_up_to(Int(60))) {
            if (m.is_ring()) continue;
            for (auto& psi : primitive_characters(f, m)) {
                CycloNumber tau = gauss_sum(psi);
                CycloNumber tau_bar = gauss_sum(psi.inverse());
                auto r = psi.sign();
                int sgn = ((r[0] + r[1]) % 2 == 0) ? 1 : -1;
                CycloNumber expect = CycloNumber(Int(rat_num(m.norm()) * sgn));
                CHECK(tau * tau_bar == expect);
                auto e = tau.embed();
                CHECK(std::abs(std::norm(e) - to_double(m.norm())) < 1e-9);
            }
        }
    }
}

TEST_CASE("unit index") {
    const QuadField& f2 = QuadField::make(2);
    CHECK(unit_index(f2, OIdeal::ring_of_integers(f2)) == 1);

    // oracle: smallest j with eps_+^j a square of a unit congruent to 1 mod n
    auto oracle = [](const QuadField& f, const OIdeal& n) {
        ResidueRing R(f, n);
        auto one = R.one(), m1 = R.reduce(f.from_rational(-1));
        long e = (f.fundamental_unit_norm() == -1) ? 2 : 1;
        for (long j = 1;; ++j) {
            if ((e * j) % 2 != 0) continue;
            auto p = R.pow(R.reduce(f.fundamental_unit()), Int(e * j / 2));
            if (p == one || p == m1) return Int(j);
            if (j > 1000000) fail(errc::internal_error, "oracle runaway");
        }
    };
    const QuadField& f5 = QuadField::make(5);
    for (long n : {5L, 7L, 9L, 11L, 13L}) {
        OIdeal I2 = OIdeal::principal(f2, f2.from_rational(n));
        CHECK(unit_index(f2, I2) == oracle(f2, I2));
        OIdeal I5 = OIdeal::principal(f5, f5.from_rational(n));
        CHECK(unit_index(f5, I5) == oracle(f5, I5));
    }
    CHECK(unit_index(f2, OIdeal::principal(f2, f2.from_rational(5))) == 6);
    CHECK(unit_index(f5, OIdeal::principal(f5, f5.from_rational(11))) ==
          oracle(f5, OIdeal::principal(f5, f5.from_rational(11))));
}

TEST_CASE("character labels are stable and distinct") {
    const QuadField& f = QuadField::make(2);
    auto g = RayClassGroup::make(f, ideal_of_int(f, 5));
    std::set<std::string> labels;
    for (auto& chi : all_characters(g)) labels.insert(chi.label());
    CHECK(labels.size() == (size_t)g->order().get_si());
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    CHECK(chi5.label() == quadratic_character_of_conductor(f, ideal_of_int(f, 5)).label());
}

TEST_CASE("totally even characters are generator-independent") {
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    int done = 0;
    for (auto& I : f.ideals_up_to(Int(150))) {
        if (!I.is_coprime_to(chi5.modulus()) || I.is_ring()) continue;
        FieldElement g1 = I.totally_positive_generator();
        FieldElement g2 = g1 * f.fundamental_unit();        // same ideal, other generator
        FieldElement g3 = -g1 * f.tp_unit();
        auto via = [&](const FieldElement& gen) {
            auto s = gen.signs();
            return chi5.eval_pair(RayClassGroup::make(f, chi5.modulus())->ring().reduce(gen), s[0],
                                  s[1]);
        };
        CHECK(via(g1) == via(g2));
        CHECK(via(g1) == via(g3));
        if (++done > 200) break;
    }
    CHECK(done >= 50);
}

TEST_CASE("generator elements have standard-basis dlogs") {
    const QuadField& f = QuadField::make(2);
    for (long n : {5L, 7L, 9L}) {
        auto g = RayClassGroup::make(f, ideal_of_int(f, n));
        for (size_t i = 0; i < g->divisors().size(); ++i) {
            FieldElement alpha = g->generator_element(i, OIdeal::ring_of_integers(f));
            auto v = g->dlog_element(alpha);
            for (size_t j = 0; j < v.size(); ++j) CHECK(v[j] == (i == j ? 1 : 0));
        }
    }
}
