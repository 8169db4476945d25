#include "eiscong/hmf_io.hpp"

#include <ctime>
#include <fstream>
#include <sstream>

#include "eiscong/cache.hpp"
#include "httplib.h"
#include "json.hpp"

namespace eiscong {

using nlohmann::json;

std::optional<CycloNumber> CuspFormData::eigenvalue_at(const OIdeal& prime) const {
    for (auto& [q, v] : eigenvalues)
        if (q == prime) return v;
    return std::nullopt;
}

namespace {

FieldElement parse_gen(const QuadField& f, const json& j) {
    if (!j.is_array() || j.size() != 2) fail(errc::malformed_value, "generator must be [a, b]");
    try {
        Rat a(j[0].get<std::string>());
        Rat b(j[1].get<std::string>());
        a.canonicalize();
        b.canonicalize();
        return f.element(a, b);
    } catch (const std::invalid_argument&) {
        fail(errc::malformed_value, "bad rational in generator");
    }
}

} // namespace

CuspFormData parse_eigenvalue_text(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        fail(errc::malformed_value, std::string("bad JSON: ") + e.what());
    }
    if (!j.contains("schema") || j["schema"] != "eiscong.hmf.v1")
        fail(errc::schema_mismatch, "expected schema eiscong.hmf.v1");
    CuspFormData out;
    try {
        out.d = j.at("field").at("d").get<long>();
        const QuadField& f = QuadField::make(out.d);
        out.level = OIdeal::parse(f, j.at("level").get<std::string>());
        out.weight = j.at("weight").get<long>();
        out.character_label = j.at("character").get<std::string>();
        out.declared_bound = j.at("bound").get<long>();
        out.provenance = j.value("provenance", std::string());
        for (auto& row : j.at("primes")) {
            FieldElement gen = parse_gen(f, row.at("gen"));
            OIdeal q = OIdeal::principal(f, gen);
            long norm = row.at("norm").get<long>();
            if (Rat(norm) != q.norm())
                fail(errc::malformed_value, "row norm does not match its generator");
            if (rat_num(q.norm()) > out.declared_bound)
                fail(errc::malformed_value, "row norm above the declared bound");
            CycloNumber ap = CycloNumber::parse(row.at("ap").get<std::string>());
            for (auto& [q2, v2] : out.eigenvalues)
                if (q2 == q) fail(errc::duplicate_prime, "duplicate prime row " + q.serialize());
            out.eigenvalues.emplace_back(q, ap);
        }
    } catch (const json::exception& e) {
        fail(errc::malformed_value, std::string("missing or bad field: ") + e.what());
    }
    std::sort(out.eigenvalues.begin(), out.eigenvalues.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    return out;
}

CuspFormData parse_eigenvalue_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) fail(errc::malformed_value, "cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_eigenvalue_text(ss.str());
}

std::string serialize_eigenvalue_file(const CuspFormData& data) {
    json j;
    j["schema"] = "eiscong.hmf.v1";
    j["field"] = {{"d", data.d}};
    j["level"] = data.level.serialize();
    j["weight"] = data.weight;
    j["character"] = data.character_label;
    j["bound"] = data.declared_bound;
    j["provenance"] = data.provenance;
    j["primes"] = json::array();
    for (auto& [q, v] : data.eigenvalues) {
        FieldElement g = q.totally_positive_generator();
        j["primes"].push_back({{"gen", {to_string(g.a()), to_string(g.b())}},
                               {"norm", rat_num(q.norm()).get_si()},
                               {"ap", v.serialize()}});
    }
    return j.dump(2);
}

std::string translate_public_row(const std::string& text) {
    // Documented mapping from a public-database row (see README):
    //   { "field": {"degree": 2, "disc": 8},  -- or "field_disc"
    //     "level": {"gen": ["a","b"]},
    //     "weight": 2,
    //     "character": "<native label>" | "trivial",
    //     "hecke": [ {"gen": ["a","b"], "ap": "<cyclo>"} , ... ],
    //     "label": "<source label>" }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error&) {
        fail(errc::translation_error, "remote row is not valid JSON");
    }
    try {
        long disc = j.contains("field") ? j["field"].at("disc").get<long>()
                                        : j.at("field_disc").get<long>();
        long d = (disc % 4 == 0) ? disc / 4 : disc;
        const QuadField& f = QuadField::make(d);
        if (f.disc() != disc) fail(errc::translation_error, "discriminant is not fundamental");
        FieldElement lg = parse_gen(f, j.at("level").at("gen"));
        OIdeal level = OIdeal::principal(f, lg);
        json out;
        out["schema"] = "eiscong.hmf.v1";
        out["field"] = {{"d", d}};
        out["level"] = level.serialize();
        out["weight"] = j.at("weight").get<long>();
        std::string chr = j.at("character").get<std::string>();
        out["character"] = (chr == "trivial") ? RayCharacter::trivial(f).label() : chr;
        long bound = 0;
        out["primes"] = json::array();
        for (auto& row : j.at("hecke")) {
            FieldElement g = parse_gen(f, row.at("gen"));
            OIdeal q = OIdeal::principal(f, g);
            long n = rat_num(q.norm()).get_si();
            bound = std::max(bound, n);
            out["primes"].push_back({{"gen", {to_string(g.a()), to_string(g.b())}},
                                     {"norm", n},
                                     {"ap", row.at("ap").get<std::string>()}});
        }
        out["bound"] = bound;
        out["provenance"] = "translated from public row " + j.value("label", std::string("?"));
        return out.dump(2);
    } catch (const json::exception& e) {
        fail(errc::translation_error, std::string("row does not match the documented shape: ") + e.what());
    } catch (const Error& e) {
        if (e.code() == errc::translation_error) throw;
        fail(errc::translation_error, e.what());
    }
}

std::string fetch_remote(const std::string& label, const std::string& endpoint,
                         const std::string& cache_dir) {
    httplib::Client cli(endpoint);
    cli.set_connection_timeout(10);
    std::string path = "/" + label + ".json";
    auto res = cli.Get(path);
    if (!res) fail(errc::network_error, "cannot reach " + endpoint);
    if (res->status != 200)
        fail(errc::network_error, "HTTP " + std::to_string(res->status) + " for " + path);
    std::string native = translate_public_row(res->body);
    json j = json::parse(native);
    std::time_t now = std::time(nullptr);
    char stamp[32];
    std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
    j["provenance"] = j.value("provenance", std::string()) + "; fetched " + endpoint + path +
                      " at " + stamp;
    std::string payload = j.dump(2);
    // round-trip contract before caching
    (void)parse_eigenvalue_text(payload);
    CacheStore store(cache_dir);
    store.put("hmf-" + label, payload);
    return payload;
}

} // namespace eiscong
