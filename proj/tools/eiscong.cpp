// eiscong: exact Eisenstein congruence toolkit for real quadratic fields
#include <complex>
#include <iostream>

#include "CLI11.hpp"
#include "eiscong/cache.hpp"
#include "eiscong/congruence.hpp"
#include "eiscong/specialvalues.hpp"
#include "json.hpp"

using namespace eiscong;
using nlohmann::json;

namespace {

OIdeal ideal_of_int(const QuadField& f, long n) {
    return OIdeal::principal(f, f.from_rational(n));
}

RayCharacter parse_character(const QuadField& f, const std::string& spec) {
    if (spec == "triv" || spec == "trivial") return RayCharacter::trivial(f);
    if (spec == "chi5") return quadratic_character_of_conductor(f, ideal_of_int(f, 5));
    if (spec.rfind("quad:", 0) == 0)
        return quadratic_character_of_conductor(f, ideal_of_int(f, std::stol(spec.substr(5))));
    // "<cond>:<index>" into the character enumeration of Cl^+((cond))
    auto colon = spec.find(':');
    if (colon != std::string::npos) {
        long cond = std::stol(spec.substr(0, colon));
        long index = std::stol(spec.substr(colon + 1));
        auto g = RayClassGroup::make(f, ideal_of_int(f, cond));
        auto chars = all_characters(g);
        if (index < 0 || index >= (long)chars.size())
            fail(errc::usage_error, "character index out of range (group order " +
                                        g->order().get_str() + ")");
        return chars[index];
    }
    fail(errc::usage_error, "unknown character spec '" + spec +
                                "' (use triv, chi5, quad:<n>, or <cond>:<index>)");
}

std::string print_value(const CycloNumber& v) {
    CycloNumber m = v.minimize_level();
    if (m.is_rational()) return to_string(m.to_rational());
    return m.serialize();
}

int run(int argc, char** argv) {
    CLI::App app{"exact Hilbert Eisenstein series, Hecke L-values and congruence checks over "
                 "real quadratic fields of narrow class number one"};
    app.require_subcommand(1);
    app.fallthrough();
    long d = 2;
    bool as_json = false;
    double tolerance = 1e-6;
    long terms = 10000;
    app.add_option("--d", d, "squarefree d of the field Q(sqrt d)")->capture_default_str();
    app.add_flag("--json", as_json, "machine-readable output");
    app.add_option("--tolerance", tolerance, "numeric oracle tolerance")->capture_default_str();
    app.add_option("--terms", terms, "truncation for numeric oracles")->capture_default_str();

    auto* c_field = app.add_subcommand("field", "structural constants of the field");

    auto* c_ray = app.add_subcommand("ray-class", "narrow ray class group and its characters");
    long ray_mod = 1;
    c_ray->add_option("--mod", ray_mod, "rational generator of the modulus")->required();

    auto* c_lv = app.add_subcommand("lvalue", "exact Hecke L-value at a non-positive integer");
    long lv_cond = 1, lv_index = 0, lv_s = -1;
    bool lv_numeric = false;
    c_lv->add_option("--cond", lv_cond, "rational generator of the modulus")->required();
    c_lv->add_option("--char-index", lv_index, "index into the character enumeration");
    c_lv->add_option("--s", lv_s, "argument, a non-positive integer")->required();
    c_lv->add_flag("--numeric", lv_numeric, "also print the analytic continuation oracle");

    auto* c_gauss = app.add_subcommand("gauss-sum", "exact Gauss sum of a primitive character");
    long gs_cond = 5, gs_index = 0;
    c_gauss->add_option("--cond", gs_cond)->required();
    c_gauss->add_option("--char-index", gs_index);

    auto* c_eis = app.add_subcommand("eis", "q-expansion of the Eisenstein series");
    std::string eis_phi = "chi5", eis_psi = "triv";
    long eis_k = 2, eis_bound = 1;
    c_eis->add_option("--phi", eis_phi);
    c_eis->add_option("--psi", eis_psi);
    c_eis->add_option("--k", eis_k);
    c_eis->add_option("--bound", eis_bound, "norm bound for the expansion");

    auto* c_ct = app.add_subcommand("const-terms", "constant terms at all cusps");
    std::string ct_phi = "chi5", ct_psi = "triv";
    long ct_k = 2;
    c_ct->add_option("--phi", ct_phi);
    c_ct->add_option("--psi", ct_psi);
    c_ct->add_option("--k", ct_k);

    auto* c_cc = app.add_subcommand("c-constant", "minimally p-valued cusp constant term");
    std::string cc_phi = "chi5", cc_psi = "triv";
    long cc_k = 2, cc_p = 7;
    c_cc->add_option("--phi", cc_phi);
    c_cc->add_option("--psi", cc_psi);
    c_cc->add_option("--k", cc_k);
    c_cc->add_option("--p", cc_p)->required();

    auto* c_cong = app.add_subcommand("check-congruence", "Fourier congruence against a fixture");
    std::string cg_phi = "chi5", cg_psi = "triv", cg_fixture;
    long cg_k = 2, cg_p = 7, cg_bound = 100;
    c_cong->add_option("--phi", cg_phi);
    c_cong->add_option("--psi", cg_psi);
    c_cong->add_option("--k", cg_k);
    c_cong->add_option("--p", cg_p)->required();
    c_cong->add_option("--fixture", cg_fixture, "eiscong.hmf.v1 file")->required();
    c_cong->add_option("--bound", cg_bound);

    auto* c_crit = app.add_subcommand("criterion", "criterion report for a congruence at p");
    long cr_level = 5, cr_p = 7;
    std::string cr_fixture;
    bool cr_mu = true;
    c_crit->add_option("--level", cr_level, "rational generator of the (prime) level")->required();
    c_crit->add_option("--p", cr_p)->required();
    c_crit->add_option("--fixture", cr_fixture, "optional eigenvalue fixture");
    c_crit->add_flag("--mu-vanishes,!--no-mu-vanishes", cr_mu,
                     "assert the Iwasawa mu-invariants vanish");

    auto* c_sv = app.add_subcommand("special-value", "Eisenstein special value and its oracle");
    std::string sv_phi = "chi5", sv_psi = "triv", sv_theta;
    long sv_k = 2;
    std::vector<long> sv_ps;
    c_sv->add_option("--phi", sv_phi);
    c_sv->add_option("--psi", sv_psi);
    c_sv->add_option("--k", sv_k);
    c_sv->add_option("--theta", sv_theta, "twisting character spec")->required();
    c_sv->add_option("--p", sv_ps, "primes for mod-p nonvanishing flags");

    auto* c_cache = app.add_subcommand("cache", "show the result cache");

    auto* c_fetch = app.add_subcommand("fetch", "fetch an eigenvalue table from a remote endpoint");
    std::string fetch_label, fetch_endpoint;
    c_fetch->add_option("--label", fetch_label)->required();
    c_fetch->add_option("--endpoint", fetch_endpoint, "e.g. http://host:port")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    const QuadField& f = QuadField::make(d);
    CacheStore cache = CacheStore::from_environment();

    if (c_field->parsed()) {
        json j;
        j["descriptor"] = f.descriptor();
        j["disc"] = f.disc();
        j["fundamental_unit"] = f.fundamental_unit().str();
        j["fundamental_unit_norm"] = f.fundamental_unit_norm();
        j["totally_positive_unit"] = f.tp_unit().str();
        j["different"] = f.different().serialize();
        j["narrow_class_number"] = 1;
        if (as_json) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << f.descriptor() << " disc=" << f.disc()
                      << " eps0=" << f.fundamental_unit().str()
                      << " N(eps0)=" << f.fundamental_unit_norm() << " eps+=" << f.tp_unit().str()
                      << " different=" << f.different().serialize() << " h+=1\n";
        }
        return 0;
    }
    if (c_ray->parsed()) {
        auto g = RayClassGroup::make(f, ideal_of_int(f, ray_mod));
        auto chars = all_characters(g);
        if (as_json) {
            json j;
            j["modulus"] = g->modulus().serialize();
            j["order"] = g->order().get_str();
            j["divisors"] = json::array();
            for (auto& dv : g->divisors()) j["divisors"].push_back(dv.get_str());
            j["characters"] = json::array();
            for (size_t i = 0; i < chars.size(); ++i)
                j["characters"].push_back({{"index", i},
                                           {"label", chars[i].label()},
                                           {"order", chars[i].order().get_str()},
                                           {"conductor", chars[i].conductor().serialize()}});
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "Cl+(" << g->modulus().serialize() << ") order " << g->order().get_str()
                      << " divisors";
            for (auto& dv : g->divisors()) std::cout << " " << dv.get_str();
            std::cout << "\n";
            for (size_t i = 0; i < chars.size(); ++i)
                std::cout << "  [" << i << "] " << chars[i].label() << " order "
                          << chars[i].order().get_str() << " conductor "
                          << chars[i].conductor().serialize() << "\n";
        }
        return 0;
    }
    if (c_lv->parsed()) {
        auto g = RayClassGroup::make(f, ideal_of_int(f, lv_cond));
        auto chars = all_characters(g);
        if (lv_index < 0 || lv_index >= (long)chars.size())
            fail(errc::usage_error, "character index out of range");
        const RayCharacter& chi = chars[lv_index];
        std::string key = "lvalue-" + chi.label() + "-s" + std::to_string(lv_s);
        std::string exact_text;
        CycloNumber exact;
        bool have_exact = false;
        if (auto cached = cache.get(key)) {
            exact_text = json::parse(*cached).at("value").get<std::string>();
        } else {
            exact = l_value_nonpositive(chi, lv_s);
            have_exact = true;
            exact_text = print_value(exact);
            json rec{{"character", chi.label()},
                     {"s", lv_s},
                     {"value", exact_text},
                     {"method", "shintani"}};
            cache.put(key, rec.dump());
        }
        double residual = -1;
        bool flagged = false;
        if (lv_numeric) {
            if (!have_exact) exact = l_value_nonpositive(chi, lv_s);
            auto n = l_value_numeric_continued(chi.primitivize(), (double)lv_s, terms);
            residual = std::abs(n.value - exact.embed());
            flagged = !(residual < tolerance);
            json rec{{"character", chi.label()}, {"s", lv_s},       {"value", exact_text},
                     {"method", "shintani"},     {"oracle_residual", residual},
                     {"flagged", flagged}};
            cache.put(key, rec.dump());
        }
        if (as_json) {
            json j{{"character", chi.label()}, {"s", lv_s}, {"value", exact_text}};
            if (lv_numeric) {
                j["oracle_residual"] = residual;
                j["flagged"] = flagged;
            }
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << exact_text << "\n";
            if (lv_numeric)
                std::cout << "oracle residual: " << residual << (flagged ? "  (FLAGGED)" : "")
                          << "\n";
        }
        return flagged ? 1 : 0;
    }
    if (c_gauss->parsed()) {
        auto g = RayClassGroup::make(f, ideal_of_int(f, gs_cond));
        auto chars = all_characters(g);
        if (gs_index < 0 || gs_index >= (long)chars.size())
            fail(errc::usage_error, "character index out of range");
        CycloNumber tau = gauss_sum(chars[gs_index]);
        auto e = tau.embed();
        if (as_json) {
            json j{{"character", chars[gs_index].label()},
                   {"tau", print_value(tau)},
                   {"abs_squared", std::norm(e)}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << print_value(tau) << "\n|tau|^2 = " << std::norm(e) << "\n";
        }
        return 0;
    }

    auto build_series = [&](const std::string& p, const std::string& q, long k) {
        return EisensteinSeries(parse_character(f, p), parse_character(f, q), k);
    };

    if (c_eis->parsed()) {
        EisensteinSeries E = build_series(eis_phi, eis_psi, eis_k);
        json rows = json::array();
        for (auto& entry : f.ideals_up_to(Int(eis_bound))) {
            CycloNumber c = E.coefficient(entry);
            std::string name = entry.is_ring() ? "O_F" : entry.serialize();
            if (as_json)
                rows.push_back({{"ideal", entry.serialize()}, {"value", print_value(c)}});
            else
                std::cout << name << "\t" << print_value(c) << "\n";
        }
        if (as_json) std::cout << rows.dump(2) << "\n";
        return 0;
    }
    if (c_ct->parsed()) {
        EisensteinSeries E = build_series(ct_phi, ct_psi, ct_k);
        json j;
        j["constant_term_infinity_normalized"] = print_value(E.constant_term_infinity());
        j["t1_class"] = f.different().inverse().serialize();
        j["cusps"] = json::array();
        for (auto& c : f.cusp_representatives(E.level())) {
            auto ct = E.constant_term_at_cusp(c);
            j["cusps"].push_back({{"cusp", c.label},
                                  {"alpha", "[[" + c.x.str() + "," + c.beta.str() + "],[" +
                                                c.y.str() + "," + c.delta.str() + "]]"},
                                  {"value", print_value(ct.value)},
                                  {"vanishing_case", ct.vanishing_case}});
        }
        if (as_json) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "C_infty(0,E) = "
                      << j["constant_term_infinity_normalized"].get<std::string>()
                      << "   ([t1] = d_F^{-1} = " << f.different().inverse().serialize() << ")\n";
            for (auto& row : j["cusps"])
                std::cout << "  cusp " << row["cusp"].get<std::string>() << "  alpha = "
                          << row["alpha"].get<std::string>() << "  a_c(0,E_1) = "
                          << row["value"].get<std::string>()
                          << (row["vanishing_case"].get<bool>() ? "  (vanishing case)" : "")
                          << "\n";
        }
        return 0;
    }
    if (c_cc->parsed()) {
        EisensteinSeries E = build_series(cc_phi, cc_psi, cc_k);
        CConstant cc = c_constant(E, Int(cc_p));
        Int order = congruence_module_order(E, Int(cc_p));
        if (as_json) {
            json j{{"cusp", cc.cusp.label},
                   {"value", print_value(cc.value)},
                   {"valuation", cc.valuation},
                   {"residue_map", cc.residue_map},
                   {"congruence_module_order", order.get_str()}};
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "C = " << print_value(cc.value) << " at cusp " << cc.cusp.label
                      << ", v_p(C) = " << cc.valuation << ", |O/C| = " << order.get_str() << "\n";
        }
        return 0;
    }
    if (c_cong->parsed()) {
        EisensteinSeries E = build_series(cg_phi, cg_psi, cg_k);
        CuspFormData data = parse_eigenvalue_file(cg_fixture);
        CongruenceReport rep = check_fourier_congruence(E, data, Int(cg_p), cg_bound);
        if (as_json) {
            std::cout << rep.to_json() << "\n";
        } else {
            std::cout << "congruence mod " << cg_p << " over " << rep.rows.size()
                      << " ideals of norm <= " << cg_bound << ": "
                      << (rep.verdict ? "PASS" : "FAIL") << "\n";
            if (rep.first_mismatch)
                std::cout << "first mismatch at " << rep.first_mismatch->serialize() << "\n";
        }
        return rep.verdict ? 0 : 1;
    }
    if (c_crit->parsed()) {
        RayCharacter phi = quadratic_character_of_conductor(f, ideal_of_int(f, cr_level));
        EisensteinSeries E(phi, RayCharacter::trivial(f), 2);
        CuspFormData data;
        CuspFormData* data_ptr = nullptr;
        if (!cr_fixture.empty()) {
            data = parse_eigenvalue_file(cr_fixture);
            data_ptr = &data;
        }
        CriterionReport rep = criterion_report(E, Int(cr_p), data_ptr, cr_mu);
        std::cout << (as_json ? rep.to_json() : rep.to_text()) << "\n";
        return 0;
    }
    if (c_sv->parsed()) {
        EisensteinSeries E = build_series(sv_phi, sv_psi, sv_k);
        RayCharacter theta = parse_character(f, sv_theta);
        SpecialValueRecord rec = eisenstein_special_value(E, theta);
        double resid = verify_special_value_numeric(E, theta, rec, terms);
        json j{{"phi", rec.phi_label},
               {"psi", rec.psi_label},
               {"theta", rec.theta_label},
               {"eta", rec.eta_label},
               {"level_divides_eta_conductor", rec.level_divides_eta_conductor},
               {"exact", print_value(rec.exact)},
               {"numeric_residual", resid}};
        json flags = json::array();
        for (long p : sv_ps)
            flags.push_back({{"p", p}, {"nonvanishing", mod_p_nonvanishing(rec, Int(p))}});
        j["mod_p_nonvanishing"] = flags;
        if (as_json) {
            std::cout << j.dump(2) << "\n";
        } else {
            std::cout << "exact = " << j["exact"].get<std::string>() << "\n"
                      << "numeric residual = " << resid
                      << (resid < tolerance ? "  (ok)" : "  (FAIL)") << "\n";
            for (auto& fl : flags)
                std::cout << "v_" << fl["p"] << " = 0: "
                          << (fl["nonvanishing"].get<bool>() ? "yes" : "no") << "\n";
        }
        return resid < tolerance ? 0 : 1;
    }
    if (c_cache->parsed()) {
        std::cout << "cache root: " << cache.root() << "\n";
        return 0;
    }
    if (c_fetch->parsed()) {
        std::string payload = fetch_remote(fetch_label, fetch_endpoint, cache.root());
        std::cout << payload << "\n";
        return 0;
    }
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    try {
        return run(argc, argv);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return e.code() == errc::usage_error ? 2 : 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
