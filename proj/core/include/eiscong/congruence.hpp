#pragma once

#include "eiscong/hmf_io.hpp"

namespace eiscong {

struct CConstant {
    Cusp cusp;          // the cusp s_0 of minimal valuation
    CycloNumber value;  // C = a_{s_0}(0, E_1)
    long valuation;     // v_p(C) at the session residue prime
    std::string residue_map;
};

/// The minimally p-valued nonzero cusp constant term of E; AllConstantTermsZero
/// when every cusp constant term vanishes. Requires p coprime to 6 n disc.
CConstant c_constant(const EisensteinSeries& E, const Int& p);

/// |O / C| = (residue field size)^{v(C)} for the session residue map.
Int congruence_module_order(const EisensteinSeries& E, const Int& p);

struct CongruenceRow {
    OIdeal ideal;
    std::string eis_residue;
    std::string cusp_residue;
    bool match;
};

struct CongruenceReport {
    Int p;
    std::string residue_map;
    long bound = 0;
    std::vector<CongruenceRow> rows;
    bool verdict = false;
    std::optional<OIdeal> first_mismatch;
    std::string to_json() const; // schema eiscong.report.v1
};

/// Row-by-row comparison of C(m, E) and C(m, f) modulo the session prime above
/// p, over all integral ideals of norm <= bound; the cusp-form side is extended
/// from the prime rows by the shared Hecke recursion.
CongruenceReport check_fourier_congruence(const EisensteinSeries& E, const CuspFormData& f,
                                          const Int& p, long bound);

struct CriterionLine {
    std::string name;
    std::string status; // "pass" / "fail" / "hypothesis"
    std::string witness;
    bool flagged = false;
};

struct CriterionReport {
    Int p;
    std::vector<CriterionLine> lines;
    std::string to_json() const;
    std::string to_text() const;
};

/// Desk-computable criterion conditions for a congruence with a cusp form at p.
CriterionReport criterion_report(const EisensteinSeries& E, const Int& p,
                                 const CuspFormData* f = nullptr,
                                 bool mu_invariants_vanish = true);

} // namespace eiscong
