#include "doctest.h"

#include <random>
#include <set>

#include "eiscong/quadfield.hpp"
#include "eiscong/residue_ring.hpp"

using namespace eiscong;

namespace {
std::mt19937_64 rng(777);
}

TEST_CASE("field construction") {
    const QuadField& f2 = QuadField::make(2);
    CHECK(f2.disc() == 8);
    CHECK(f2.fundamental_unit() == f2.element(1, 1)); // 1 + sqrt(2)
    CHECK(f2.fundamental_unit_norm() == -1);
    CHECK(f2.tp_unit() == f2.element(3, 2)); // 3 + 2 sqrt 2
    CHECK(f2.different_gen() * f2.different_gen() == f2.from_rational(8));

    const QuadField& f5 = QuadField::make(5);
    CHECK(f5.disc() == 5);
    CHECK(f5.fundamental_unit() == f5.element(0, 1)); // (1+sqrt5)/2 = omega
    CHECK(f5.fundamental_unit_norm() == -1);

    CHECK_THROWS_WITH_AS(QuadField::make(4), doctest::Contains("NotSquarefree"), Error);
    CHECK_THROWS_WITH_AS(QuadField::make(12), doctest::Contains("NotSquarefree"), Error);
    // d = 3: fundamental unit 2 + sqrt(3) has norm +1, narrow class number 2
    CHECK_THROWS_WITH_AS(QuadField::make(3), doctest::Contains("NarrowClassNumberNotOne"), Error);

    const QuadField& f13 = QuadField::make(13);
    CHECK(f13.fundamental_unit_norm() == -1);
}

TEST_CASE("N(eps_plus - 1) for Q(sqrt2) is -4") {
    const QuadField& f = QuadField::make(2);
    FieldElement em1 = f.tp_unit() - f.from_rational(1);
    CHECK(em1.norm() == Rat(-4));
}

TEST_CASE("ideal norms") {
    const QuadField& f = QuadField::make(2);
    OIdeal five = OIdeal::principal(f, f.from_rational(5));
    CHECK(five.norm() == Rat(25));
    CHECK(OIdeal::ring_of_integers(f).norm() == Rat(1));
    OIdeal sq2 = OIdeal::principal(f, f.omega());
    CHECK(sq2.norm() == Rat(2));
    CHECK_THROWS_AS(OIdeal::principal(f, f.from_rational(0)), Error);
}

TEST_CASE("prime splitting in Q(sqrt2)") {
    const QuadField& f = QuadField::make(2);
    auto p5 = f.factor_rational_prime(Int(5));
    CHECK(p5.type == SplitType::inert);
    CHECK(p5.primes.size() == 1);
    CHECK(p5.primes[0].norm() == Rat(25));

    auto p2 = f.factor_rational_prime(Int(2));
    CHECK(p2.type == SplitType::ramified);
    CHECK(p2.primes[0] == OIdeal::principal(f, f.omega()));
    CHECK(p2.primes[0] * p2.primes[0] == OIdeal::principal(f, f.from_rational(2)));

    auto p7 = f.factor_rational_prime(Int(7));
    CHECK(p7.type == SplitType::split);
    CHECK(p7.primes.size() == 2);
    CHECK(p7.primes[0].norm() == Rat(7));
    CHECK(p7.primes[1].norm() == Rat(7));
    CHECK(p7.primes[0] != p7.primes[1]);
    CHECK(p7.primes[0] * p7.primes[1] == OIdeal::principal(f, f.from_rational(7)));
}

TEST_CASE("primes_up_to") {
    const QuadField& f = QuadField::make(2);
    auto ps3 = f.primes_up_to(Int(3));
    REQUIRE(ps3.size() == 1);
    CHECK(ps3[0].norm() == Rat(2));

    CHECK(f.primes_up_to(Int(1)).empty());

    auto ps30 = f.primes_up_to(Int(30));
    int inert25 = 0;
    for (auto& q : ps30)
        if (q.norm() == Rat(25)) ++inert25;
    CHECK(inert25 == 1);
    // residue degrees above every unramified p <= 100 multiply to 2
    for (long p : primes_below(101)) {
        if (8 % p == 0) continue;
        auto pf = f.factor_rational_prime(Int(p));
        long total = (long)pf.primes.size() * pf.residue_degree;
        CHECK(total == 2);
    }
}

TEST_CASE("ideal norm multiplicativity on random pairs") {
    const QuadField& f = QuadField::make(2);
    auto ideals = f.ideals_up_to(Int(60));
    std::uniform_int_distribution<size_t> pick(0, ideals.size() - 1);
    for (int i = 0; i < 1000; ++i) {
        const OIdeal &I = ideals[pick(rng)], &J = ideals[pick(rng)];
        CHECK((I * J).norm() == I.norm() * J.norm());
    }
}

TEST_CASE("ideal arithmetic identities") {
    const QuadField& f = QuadField::make(5);
    auto ideals = f.ideals_up_to(Int(40));
    std::uniform_int_distribution<size_t> pick(0, ideals.size() - 1);
    for (int i = 0; i < 200; ++i) {
        const OIdeal &I = ideals[pick(rng)], &J = ideals[pick(rng)];
        OIdeal g = I + J, l = I.intersect(J);
        CHECK(g.divides(I));
        CHECK(g.divides(J));
        CHECK(I.divides(l));
        CHECK(J.divides(l));
        CHECK(g * l == I * J);
        CHECK(I * I.inverse() == OIdeal::ring_of_integers(f));
    }
}

TEST_CASE("totally positive generators exist and generate") {
    for (long d : {2L, 5L}) {
        const QuadField& f = QuadField::make(d);
        for (auto& I : f.ideals_up_to(Int(500))) {
            FieldElement g = I.totally_positive_generator();
            CHECK(g.totally_positive());
            CHECK(OIdeal::principal(f, g) == I);
        }
    }
}

TEST_CASE("ideal factorization round trip") {
    const QuadField& f = QuadField::make(2);
    auto ideals = f.ideals_up_to(Int(200));
    std::uniform_int_distribution<size_t> pick(0, ideals.size() - 1);
    for (int i = 0; i < 100; ++i) {
        const OIdeal& I = ideals[pick(rng)];
        OIdeal prod = OIdeal::ring_of_integers(f);
        for (auto& [q, e] : I.factor()) prod = prod * q.pow(e);
        CHECK(prod == I);
    }
    // fractional ideal factorization
    OIdeal frac = ideals[17] * ideals[23].inverse();
    OIdeal prod = OIdeal::ring_of_integers(f);
    for (auto& [q, e] : frac.factor()) prod = prod * q.pow(e);
    CHECK(prod == frac);
}

TEST_CASE("element signs") {
    const QuadField& f = QuadField::make(2);
    FieldElement eps = f.fundamental_unit(); // 1 + sqrt2: embeddings 2.41, -0.41
    auto s = eps.signs();
    CHECK(s[0] == 1);
    CHECK(s[1] == -1);
    CHECK(f.tp_unit().totally_positive());
    CHECK(!(-f.tp_unit()).totally_positive());
    CHECK(f.from_rational(-3).signs() == std::array<int, 2>{-1, -1});
}

TEST_CASE("ideal serialization") {
    const QuadField& f = QuadField::make(2);
    OIdeal five = OIdeal::principal(f, f.from_rational(5));
    OIdeal back = OIdeal::parse(f, five.serialize());
    CHECK(back == five);
    for (auto& I : f.ideals_up_to(Int(50))) CHECK(OIdeal::parse(f, I.serialize()) == I);
    OIdeal frac = five.inverse();
    CHECK(OIdeal::parse(f, frac.serialize()) == frac);
}

TEST_CASE("cusp representatives") {
    const QuadField& f = QuadField::make(2);
    auto trivial = f.cusp_representatives(OIdeal::ring_of_integers(f));
    REQUIRE(trivial.size() == 1);
    CHECK(trivial[0].is_infinity());

    OIdeal five = OIdeal::principal(f, f.from_rational(5));
    auto cusps = f.cusp_representatives(five);
    REQUIRE(cusps.size() >= 2);
    CHECK(cusps[0].label == "oo");
    CHECK(cusps[1].label == "0");
    // every representative is a genuine SL2(O_F) matrix
    for (auto& c : cusps) {
        FieldElement det = c.x * c.delta - c.y * c.beta;
        CHECK(det == f.from_rational(1));
        CHECK(c.x.is_integral());
        CHECK(c.y.is_integral());
        CHECK(c.beta.is_integral());
        CHECK(c.delta.is_integral());
    }
    CHECK_THROWS_WITH_AS(f.cusp_representatives(OIdeal::principal(f, f.from_rational(2))),
                         doctest::Contains("LevelNotCoprime"), Error);

    // determinism across runs
    auto cusps2 = f.cusp_representatives(five);
    REQUIRE(cusps.size() == cusps2.size());
    for (size_t i = 0; i < cusps.size(); ++i) {
        CHECK(cusps[i].x == cusps2[i].x);
        CHECK(cusps[i].y == cusps2[i].y);
    }
}

TEST_CASE("residue ring basics") {
    const QuadField& f = QuadField::make(2);
    OIdeal five = OIdeal::principal(f, f.from_rational(5));
    ResidueRing R(f, five);
    CHECK(R.size() == 25);
    CHECK(R.unit_count() == 24);
    CHECK(R.units().size() == 24);
    // inverse on all units
    for (auto& u : R.units()) {
        auto v = R.inverse(u);
        CHECK(R.mul(u, v) == R.one());
    }
    // eps_0 has multiplicative order 12 mod (5)
    auto e = R.reduce(f.fundamental_unit());
    int ord = 1;
    auto acc = e;
    while (acc != R.one()) {
        acc = R.mul(acc, e);
        ++ord;
    }
    CHECK(ord == 12);
}
