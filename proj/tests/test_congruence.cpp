#include "doctest.h"

#include <random>

#include "eiscong/congruence.hpp"

using namespace eiscong;

namespace {
OIdeal ideal_of_int(const QuadField& f, long n) { return OIdeal::principal(f, f.from_rational(n)); }

EisensteinSeries e2_chi5_triv() {
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    return EisensteinSeries(chi5, RayCharacter::trivial(f), 2);
}

EisensteinSeries e2_triv_chi5() {
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    return EisensteinSeries(RayCharacter::trivial(f), chi5, 2);
}

std::string fixture_path() { return std::string(EISCONG_DATA_DIR) + "/qsqrt2-level25-k2.json"; }

/// fixture assembled from an Eisenstein series itself (rational eigenvalues)
CuspFormData data_of(const EisensteinSeries& E, long bound) {
    CuspFormData d;
    d.d = E.field().d();
    d.level = E.level();
    d.weight = E.weight();
    d.character_label = E.character().label();
    d.declared_bound = bound;
    d.provenance = "self";
    for (auto& [q, v] : E.hecke_eigenvalues(bound)) d.eigenvalues.emplace_back(q, v);
    return d;
}

} // namespace

TEST_CASE("c-constant of E_2(chi5,1) at p=7") {
    EisensteinSeries e = e2_chi5_triv();
    CConstant cc = c_constant(e, Int(7));
    CHECK(cc.valuation == 1);
    CHECK(!cc.value.is_zero());
    // cusp 0 realizes the minimum: v_7(+-7/5000) = 1
    CHECK(cc.cusp.label == "0");
    CHECK(congruence_module_order(e, Int(7)) == 7);

    // E_2(1, chi5): the infinity cusp already gives 7/40, v_7 = 1
    EisensteinSeries e2 = e2_triv_chi5();
    CConstant cc2 = c_constant(e2, Int(7));
    CHECK(cc2.valuation == 1);

    CHECK_THROWS_AS(c_constant(e, Int(2)), Error);  // p | disc
    CHECK_THROWS_AS(c_constant(e, Int(5)), Error);  // p | level
    CHECK_THROWS_AS(c_constant(e, Int(3)), Error);  // p | 6
}

TEST_CASE("c-constant valuation is invariant under p-unit rescaling") {
    EisensteinSeries e = e2_chi5_triv();
    CConstant cc = c_constant(e, Int(7));
    // rescaling E by a 7-unit rational rescales every constant term alike
    for (Rat u : {make_rat(3, 4), make_rat(10, 9), Rat(25)}) {
        CycloNumber scaled = cc.value * u;
        CHECK(valuation_at_p(scaled, Int(7)) == cc.valuation);
    }
}

TEST_CASE("congruence-module order at p=11 is trivial") {
    EisensteinSeries e = e2_chi5_triv();
    CConstant cc = c_constant(e, Int(11));
    CHECK(cc.valuation == 0);
    CHECK(congruence_module_order(e, Int(11)) == 1);
}

TEST_CASE("self-congruence passes for every constructed E and several p") {
    auto run = [](const EisensteinSeries& e) {
        for (long p : {7L, 11L, 13L}) {
            CuspFormData d = data_of(e, 60);
            auto rep = check_fourier_congruence(e, d, Int(p), 60);
            CHECK(rep.verdict);
            CHECK(!rep.first_mismatch.has_value());
        }
    };
    run(e2_chi5_triv());
    run(e2_triv_chi5());
}

TEST_CASE("fixture congruence at p=7 passes to norm 100, fails at p=11") {
    EisensteinSeries e = e2_chi5_triv();
    CuspFormData f = parse_eigenvalue_file(fixture_path());
    CHECK(f.d == 2);
    CHECK(f.declared_bound == 100);
    CHECK(f.eigenvalues.size() == 25);

    auto rep = check_fourier_congruence(e, f, Int(7), 100);
    CHECK(rep.verdict);
    CHECK(rep.rows.size() >= 60);

    auto rep11 = check_fourier_congruence(e, f, Int(11), 100);
    CHECK(!rep11.verdict);
    CHECK(rep11.first_mismatch.has_value());

    // report serialization carries the schema tag
    CHECK(rep.to_json().find("eiscong.report.v1") != std::string::npos);

    // weight mismatch is rejected; same level/weight/nebentypus with different
    // coefficients is a legitimate run that simply fails
    const QuadField& F = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(F, ideal_of_int(F, 5));
    EisensteinSeries e4(chi5, RayCharacter::trivial(F), 4);
    CHECK_THROWS_WITH_AS(check_fourier_congruence(e4, f, Int(7), 50),
                         doctest::Contains("DataMismatch"), Error);
    EisensteinSeries other = e2_triv_chi5();
    auto rep_other = check_fourier_congruence(other, f, Int(7), 50);
    CHECK(!rep_other.verdict);
}

TEST_CASE("missing eigenvalue is reported") {
    EisensteinSeries e = e2_chi5_triv();
    CuspFormData d = data_of(e, 30);
    CHECK_THROWS_WITH_AS(check_fourier_congruence(e, d, Int(7), 90),
                         doctest::Contains("MissingEigenvalue"), Error);
}

TEST_CASE("verdicts do not depend on the residue-map factor for rational data") {
    // residues of rational values are factor-independent, so self-congruence
    // style configurations must produce identical verdicts for every level the
    // values are coerced to
    EisensteinSeries e = e2_triv_chi5();
    std::mt19937_64 rng(31337);
    for (int trial = 0; trial < 20; ++trial) {
        long p = std::vector<long>{7, 11, 13, 17, 19}[trial % 5];
        CuspFormData d = data_of(e, 40);
        if (trial % 2 == 1) {
            // corrupt one row to force a definite mismatch
            size_t k = (size_t)(rng() % d.eigenvalues.size());
            d.eigenvalues[k].second += CycloNumber::one();
        }
        auto rep = check_fourier_congruence(e, d, Int(p), 40);
        CHECK(rep.verdict == (trial % 2 == 0));
    }
}

TEST_CASE("criterion report for (Q(sqrt2), n=(5), p=7)") {
    EisensteinSeries e = e2_chi5_triv();
    CuspFormData f = parse_eigenvalue_file(fixture_path());
    CriterionReport rep = criterion_report(e, Int(7), &f, true);
    REQUIRE(rep.lines.size() >= 5);

    // (1) unit index 6 is coprime to 7
    CHECK(rep.lines[0].status == "pass");
    CHECK(rep.lines[0].witness.find("unit index = 6") != std::string::npos);
    // (2) N(eps_+ - 1) = -4, 7 does not divide 4
    CHECK(rep.lines[1].status == "pass");
    CHECK(rep.lines[1].witness.find("N(eps_+ - 1) = -4") != std::string::npos);
    // (3) the literal computation 25 = 25 mod 7 FAILS and is flagged
    CHECK(rep.lines[2].status == "fail");
    CHECK(rep.lines[2].flagged);
    CHECK(rep.lines[2].witness.find("4") != std::string::npos); // 25 = 4 mod 7 on both sides
    // (4) v_7(C) = 1
    CHECK(rep.lines[3].status == "pass");
    CHECK(rep.lines[3].witness.find("v_p(C) = 1") != std::string::npos);
    // the fixture congruence line
    bool found_cong = false;
    for (auto& l : rep.lines)
        if (l.name.find("Fourier congruence") != std::string::npos) {
            CHECK(l.status == "pass");
            found_cong = true;
        }
    CHECK(found_cong);
    CHECK(rep.to_text().find("FLAGGED") != std::string::npos);
    CHECK(rep.to_json().find("criterion") != std::string::npos);
}

TEST_CASE("eigenvalue file round trip") {
    std::mt19937_64 rng(777777);
    const QuadField& f = QuadField::make(2);
    RayCharacter chi5 = quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    auto primes = f.primes_up_to(Int(60));
    for (int trial = 0; trial < 200; ++trial) {
        CuspFormData d;
        d.d = 2;
        d.level = ideal_of_int(f, 5);
        d.weight = 2;
        d.character_label = chi5.label();
        d.declared_bound = 60;
        d.provenance = "round-trip trial " + std::to_string(trial);
        for (auto& q : primes) {
            long c0 = (long)(rng() % 19) - 9;
            long c1 = (long)(rng() % 19) - 9;
            CycloNumber v = CycloNumber(Int(c0)) +
                            CycloNumber::root_of_unity(8, 1, make_rat(Int(c1), Int(2)));
            d.eigenvalues.emplace_back(q, v);
        }
        CuspFormData back = parse_eigenvalue_text(serialize_eigenvalue_file(d));
        CHECK(back.d == d.d);
        CHECK(back.level == d.level);
        CHECK(back.weight == d.weight);
        CHECK(back.character_label == d.character_label);
        CHECK(back.provenance == d.provenance);
        REQUIRE(back.eigenvalues.size() == d.eigenvalues.size());
        for (size_t i = 0; i < d.eigenvalues.size(); ++i) {
            CHECK(back.eigenvalues[i].first == d.eigenvalues[i].first);
            CHECK(back.eigenvalues[i].second == d.eigenvalues[i].second);
        }
    }
}

TEST_CASE("eigenvalue file error paths") {
    CHECK_THROWS_WITH_AS(parse_eigenvalue_text("{\"schema\":\"other.v9\"}"),
                         doctest::Contains("SchemaMismatch"), Error);
    CHECK_THROWS_WITH_AS(parse_eigenvalue_text("not json at all"),
                         doctest::Contains("MalformedValue"), Error);
    // empty rows are fine
    CuspFormData empty = parse_eigenvalue_text(
        R"({"schema":"eiscong.hmf.v1","field":{"d":2},"level":"[[5,0],[0,5]]/1",
            "weight":2,"character":"x","bound":10,"primes":[],"provenance":""})");
    CHECK(empty.eigenvalues.empty());
    // duplicated prime row
    std::string dup = R"({"schema":"eiscong.hmf.v1","field":{"d":2},"level":"[[5,0],[0,5]]/1",
        "weight":2,"character":"x","bound":10,"primes":[
        {"gen":["2","1"],"norm":2,"ap":"1:[1]/1"},
        {"gen":["2","1"],"norm":2,"ap":"1:[2]/1"}],"provenance":""})";
    CHECK_THROWS_WITH_AS(parse_eigenvalue_text(dup), doctest::Contains("DuplicatePrime"), Error);
}

TEST_CASE("public row translation") {
    std::string row = R"({
        "field": {"degree": 2, "disc": 8},
        "level": {"gen": ["5", "0"]},
        "weight": 2,
        "character": "trivial",
        "label": "demo-row",
        "hecke": [{"gen": ["2","1"], "ap": "1:[-1]/1"}]
    })";
    std::string native = translate_public_row(row);
    CuspFormData d = parse_eigenvalue_text(native);
    CHECK(d.d == 2);
    CHECK(d.weight == 2);
    CHECK(d.eigenvalues.size() == 1);
    CHECK(d.provenance.find("demo-row") != std::string::npos);
    CHECK_THROWS_WITH_AS(translate_public_row("{}"), doctest::Contains("TranslationError"), Error);
    CHECK_THROWS_WITH_AS(translate_public_row("garbage"), doctest::Contains("TranslationError"),
                         Error);
}
