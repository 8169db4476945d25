#include "eiscong/congruence.hpp"

#include <algorithm>
#include <sstream>

#include "json.hpp"

namespace eiscong {

using nlohmann::json;

namespace {

void require_good_prime(const EisensteinSeries& E, const Int& p) {
    const QuadField& f = E.field();
    if (!is_prime(p)) fail(errc::unsupported_argument, "p must be prime");
    if (Int(6) % p == 0 || Int(f.disc()) % p == 0)
        fail(errc::unsupported_argument, "p must be coprime to 6 and the discriminant");
    OIdeal pid = OIdeal::principal(f, f.from_rational(Rat(p)));
    if (!pid.is_coprime_to(E.level()))
        fail(errc::unsupported_argument, "p must be coprime to the level");
}

} // namespace

CConstant c_constant(const EisensteinSeries& E, const Int& p) {
    require_good_prime(E, p);
    const QuadField& f = E.field();
    auto cusps = f.cusp_representatives(E.level());
    std::vector<std::pair<Cusp, CycloNumber>> nonzero;
    for (auto& c : cusps) {
        auto ct = E.constant_term_at_cusp(c);
        if (!ct.value.is_zero()) nonzero.emplace_back(c, ct.value);
    }
    if (nonzero.empty())
        fail(errc::all_constant_terms_zero, "every cusp constant term of E vanishes");
    long level = 1;
    for (auto& [c, v] : nonzero) level = lcm_level(level, v.level());
    ResidueMap rm(level, p);
    std::optional<CConstant> best;
    for (auto& [c, v] : nonzero) {
        long val = rm.valuation(v);
        if (!best || val < best->valuation) best = CConstant{c, v, val, rm.describe()};
    }
    return *best;
}

Int congruence_module_order(const EisensteinSeries& E, const Int& p) {
    CConstant cc = c_constant(E, p);
    if (cc.valuation <= 0) return 1;
    ResidueMap rm(cc.value.level(), p);
    return pow_int(rm.residue_field_size(), (unsigned long)cc.valuation);
}

CongruenceReport check_fourier_congruence(const EisensteinSeries& E, const CuspFormData& fdata,
                                          const Int& p, long bound) {
    const QuadField& f = E.field();
    if (fdata.d != f.d()) fail(errc::data_mismatch, "field mismatch");
    if (!(fdata.level == E.level())) fail(errc::data_mismatch, "level mismatch");
    if (fdata.weight != E.weight()) fail(errc::data_mismatch, "weight mismatch");
    if (fdata.character_label != E.character().label())
        fail(errc::data_mismatch, "nebentypus mismatch");
    require_good_prime(E, p);

    const IdealTable& tab = IdealTable::get(f, bound);
    // cusp-form side at primes, from the fixture
    std::vector<CycloNumber> ap_at_prime;
    for (auto& q : tab.primes()) {
        auto v = fdata.eigenvalue_at(q);
        if (!v) fail(errc::missing_eigenvalue, "fixture lacks the prime " + q.serialize());
        ap_at_prime.push_back(*v);
    }
    // extend to prime powers by the Hecke recursion, sharing E's character
    const RayCharacter& chi = E.character();
    std::vector<std::vector<CycloNumber>> powers(tab.primes().size());
    auto ap_power = [&](size_t pi, long e) -> const CycloNumber& {
        auto& vec = powers[pi];
        if (vec.empty()) vec = {CycloNumber::one(), ap_at_prime[pi]};
        const OIdeal& q = tab.primes()[pi];
        while ((long)vec.size() <= e) {
            long n = (long)vec.size();
            if (!q.is_coprime_to(E.level())) {
                vec.push_back(vec[n - 1] * ap_at_prime[pi]);
            } else {
                CycloNumber nq_pow(pow_rat(q.norm(), E.weight() - 1));
                vec.push_back(vec[n - 1] * ap_at_prime[pi] -
                              vec[n - 2] * chi_eval(chi, q) * nq_pow);
            }
        }
        return vec[e];
    };

    // residue map level: lcm over all values in play
    long level = 1;
    std::vector<CycloNumber> lhs(tab.entries().size()), rhs(tab.entries().size());
    for (size_t i = 0; i < tab.entries().size(); ++i) {
        lhs[i] = E.coefficient(tab.entries()[i].ideal).minimize_level();
        CycloNumber v = CycloNumber::one();
        for (auto& [pi, e] : tab.entries()[i].factors) v *= ap_power(pi, e);
        rhs[i] = v.minimize_level();
        level = lcm_level(level, lcm_level(lhs[i].level(), rhs[i].level()));
    }
    ResidueMap rm(level, p);
    CongruenceReport rep;
    rep.p = p;
    rep.bound = bound;
    rep.residue_map = rm.describe();
    rep.verdict = true;
    for (size_t i = 0; i < tab.entries().size(); ++i) {
        CongruenceRow row;
        row.ideal = tab.entries()[i].ideal;
        auto rl = rm.reduce(lhs[i]);
        auto rr = rm.reduce(rhs[i]);
        row.eis_residue = rm.fq_to_string(rl);
        row.cusp_residue = rm.fq_to_string(rr);
        row.match = (rl == rr);
        if (!row.match && rep.verdict) {
            rep.verdict = false;
            rep.first_mismatch = row.ideal;
        }
        rep.rows.push_back(std::move(row));
    }
    return rep;
}

std::string CongruenceReport::to_json() const {
    json j;
    j["schema"] = "eiscong.report.v1";
    j["p"] = p.get_str();
    j["residue_map"] = residue_map;
    j["bound"] = bound;
    j["verdict"] = verdict;
    if (first_mismatch) j["first_mismatch"] = first_mismatch->serialize();
    j["rows"] = json::array();
    for (auto& r : rows)
        j["rows"].push_back({{"ideal", r.ideal.serialize()},
                             {"eis", r.eis_residue},
                             {"cusp", r.cusp_residue},
                             {"match", r.match}});
    return j.dump(2);
}

CriterionReport criterion_report(const EisensteinSeries& E, const Int& p, const CuspFormData* f,
                                 bool mu_invariants_vanish) {
    const QuadField& F = E.field();
    const OIdeal& n = E.level();
    CriterionReport rep;
    rep.p = p;
    if (!is_prime(p)) fail(errc::unsupported_argument, "p must be prime");

    // (i) p coprime to 6 n and to the unit index #(O_+^x / O_{n}^{x2})
    {
        OIdeal pid = OIdeal::principal(F, F.from_rational(Rat(p)));
        bool c6 = (Int(6) % p != 0) && pid.is_coprime_to(n);
        Int ui = unit_index(F, n);
        bool cu = (ui % p != 0);
        std::ostringstream w;
        w << "unit index = " << ui.get_str() << ", p = " << p.get_str();
        rep.lines.push_back({"(1) p coprime to 6n and to the unit index",
                             (c6 && cu) ? "pass" : "fail", w.str(), false});
    }
    // (ii) n prime, coprime to 6*disc, and p coprime to N(eps_+ - 1)
    {
        auto fac = n.factor();
        bool nprime = (fac.size() == 1 && fac[0].second == 1);
        OIdeal sixd = OIdeal::principal(F, F.from_rational(Rat(6 * F.disc())));
        bool cop = n.is_coprime_to(sixd);
        Rat neps = (F.tp_unit() - F.from_rational(1)).norm();
        Int nn = rat_num(neps);
        bool pok = (nn % p != 0);
        std::ostringstream w;
        w << "N(eps_+ - 1) = " << to_string(neps);
        rep.lines.push_back({"(2) n prime, coprime to 6*disc, p coprime to N(eps_+ - 1)",
                             (nprime && cop && pok) ? "pass" : "fail", w.str(), false});
    }
    // (iii) some prime q | n with C(q, E) != N(q) mod the session prime
    {
        bool any = false;
        std::ostringstream w;
        long level = 1;
        std::vector<std::pair<OIdeal, CycloNumber>> eigs;
        for (auto& [q, e] : n.factor()) {
            CycloNumber cq = E.coefficient(q).minimize_level();
            eigs.emplace_back(q, cq);
            level = lcm_level(level, cq.level());
        }
        ResidueMap rm(level, p);
        bool first = true;
        for (auto& [q, cq] : eigs) {
            auto r1 = rm.reduce(cq);
            auto r2 = rm.reduce(CycloNumber(q.norm()));
            bool differs = !(r1 == r2);
            any = any || differs;
            if (!first) w << "; ";
            first = false;
            w << "C(" << q.serialize() << ",E) = " << rm.fq_to_string(r1) << " vs N(q) = "
              << rm.fq_to_string(r2) << " (mod " << p.get_str() << ")";
        }
        CriterionLine line{"(3) C(q,E) != N(q) mod p for some q | n", any ? "pass" : "fail",
                           w.str(), !any};
        if (!any)
            line.witness += " -- condition fails as literally stated: "
                            "the U(q)-eigenvalue is congruent to N(q)";
        rep.lines.push_back(line);
    }
    // (iv) the C-constant ideal (C) is neither 0 nor the unit ideal
    {
        try {
            CConstant cc = c_constant(E, p);
            bool ok = cc.valuation > 0;
            std::ostringstream w;
            w << "v_p(C) = " << cc.valuation << " at cusp " << cc.cusp.label;
            rep.lines.push_back({"(4) 0 < v_p(C) < infinity", ok ? "pass" : "fail", w.str(), false});
        } catch (const Error& e) {
            rep.lines.push_back({"(4) 0 < v_p(C) < infinity", "fail", e.what(), true});
        }
    }
    // torsion-freeness of the cohomology groups is not desk-computable
    rep.lines.push_back({"(a/b) torsion-freeness of boundary and compact-support cohomology",
                         "hypothesis", "user-asserted; implied by (1) and (2) for prime level",
                         false});
    rep.lines.push_back({"(Eis condition) vanishing Iwasawa mu-invariants", "hypothesis",
                         mu_invariants_vanish ? "user-asserted: true (abelian splitting fields)"
                                              : "user-asserted: false",
                         false});
    if (f) {
        CongruenceReport cr = check_fourier_congruence(E, *f, p, f->declared_bound);
        std::ostringstream w;
        w << "checked " << cr.rows.size() << " ideals up to norm " << cr.bound;
        if (cr.first_mismatch) w << ", first mismatch " << cr.first_mismatch->serialize();
        rep.lines.push_back({"(a) Fourier congruence f = E against the supplied data",
                             cr.verdict ? "pass" : "fail", w.str(), false});
    }
    return rep;
}

std::string CriterionReport::to_json() const {
    json j;
    j["schema"] = "eiscong.report.v1";
    j["kind"] = "criterion";
    j["p"] = p.get_str();
    j["lines"] = json::array();
    for (auto& l : lines)
        j["lines"].push_back(
            {{"name", l.name}, {"status", l.status}, {"witness", l.witness}, {"flagged", l.flagged}});
    return j.dump(2);
}

std::string CriterionReport::to_text() const {
    std::ostringstream os;
    os << "criterion report at p = " << p.get_str() << "\n";
    for (auto& l : lines) {
        os << "  [" << l.status << "] " << l.name;
        if (!l.witness.empty()) os << " :: " << l.witness;
        if (l.flagged) os << "  [FLAGGED]";
        os << "\n";
    }
    return os.str();
}

} // namespace eiscong
