#include "eiscong/specialvalues.hpp"

#include <cmath>

namespace eiscong {

SpecialValueRecord eisenstein_special_value(const EisensteinSeries& E, const RayCharacter& theta,
                                            bool allow_parity_violation) {
    const QuadField& f = E.field();
    RayCharacter th = theta.primitivize();
    if (!th.modulus().is_coprime_to(E.level()))
        fail(errc::conductor_not_coprime, "m_theta must be coprime to the level");
    RayCharacter th_psi_inv = char_product(th, E.psi().inverse()).primitivize();
    RayCharacter th_phi_inv = char_product(th, E.phi().inverse()).primitivize();
    if (!th_psi_inv.totally_odd() || !th_phi_inv.totally_odd()) {
        if (!allow_parity_violation)
            fail(errc::parity_mismatch,
                 "theta psi^{-1} and theta phi^{-1} must be totally odd for a nonvanishing value");
        if (th_psi_inv.is_trivial() || th_phi_inv.is_trivial())
            fail(errc::parity_mismatch, "trivial L-factor argument at s = 0");
    }

    // ((-1)^n / 2^n sqrt(disc)) with n = 2
    CycloNumber front = sqrt_of_discriminant(f.disc()).inverse() * make_rat(1, 4);
    CycloNumber tau_chi = gauss_sum(E.character());
    CycloNumber tau_psi = gauss_sum(E.psi());
    OIdeal m_theta = th.modulus();
    CycloNumber num = tau_chi * chi_eval(E.character(), m_theta) * chi_eval(th, E.psi().modulus());
    CycloNumber den = tau_psi * chi_eval(E.psi(), m_theta) * chi_eval(th, E.level());
    RayCharacter theta_inv_psi = char_product(th.inverse(), E.psi()).primitivize();
    CycloNumber l1 = l_value_nonpositive(theta_inv_psi, 0);
    CycloNumber l2 = l_value_nonpositive(th_phi_inv, 0);

    SpecialValueRecord rec;
    rec.phi_label = E.phi().label();
    rec.psi_label = E.psi().label();
    rec.theta_label = th.label();
    RayCharacter eta = char_product(th, E.character().inverse()).primitivize();
    rec.eta_label = eta.label();
    // n | m_eta iff every prime power of n divides m_eta
    rec.level_divides_eta_conductor = true;
    for (auto& [q, e] : E.level().factor())
        if (eta.modulus().valuation_at(q) < e) rec.level_divides_eta_conductor = false;
    rec.exact = (front * num * den.inverse() * l1 * l2).minimize_level();
    return rec;
}

namespace {

// finite Euler factor relating the literal twisted series to the primitive L:
// sum over ideals of chi1 chi2 (m) N(m)^{-s} = L(s, (chi1 chi2)^0) * this
std::complex<double> euler_correction(const RayCharacter& prod, const RayCharacter& prim,
                                      double s) {
    std::complex<double> v = 1.0;
    for (auto& [q, e] : prod.modulus().factor()) {
        if (!q.is_coprime_to(prim.modulus())) continue;
        v *= 1.0 - chi_eval(prim, q).embed() * std::pow(to_double(q.norm()), -s);
    }
    return v;
}

} // namespace

double verify_special_value_numeric(const EisensteinSeries& E, const RayCharacter& theta,
                                    const SpecialValueRecord& rec, long terms) {
    if (terms < 1000) fail(errc::unsupported_argument, "need at least 10^3 terms");
    RayCharacter th = theta.primitivize();
    RayCharacter eta = char_product(th, E.character().inverse()).primitivize();
    // literal twisted series: D(1, E, eta) = L(1, phi eta) L(0, psi eta) over
    // ideals coprime to the conductors, i.e. primitive L-values times finite
    // Euler factors; the identity under test holds for the primitive product,
    // so the factors are divided back out
    RayCharacter prod1 = char_product(E.phi(), eta);
    RayCharacter prim1 = prod1.primitivize();
    RayCharacter prod0 = char_product(E.psi(), eta);
    RayCharacter prim0 = prod0.primitivize();
    std::complex<double> d1 =
        l_value_numeric_continued(prim1, 1.0, terms).value * euler_correction(prod1, prim1, 1.0);
    std::complex<double> d0 =
        l_value_numeric_continued(prim0, 0.0, terms).value * euler_correction(prod0, prim0, 0.0);
    std::complex<double> literal_d = d1 * d0;
    std::complex<double> primitive_d =
        literal_d / (euler_correction(prod1, prim1, 1.0) * euler_correction(prod0, prim0, 0.0));
    std::complex<double> tau_eta_inv = gauss_sum(eta.inverse()).embed();
    double two_pi = 2.0 * M_PI;
    std::complex<double> numeric = -tau_eta_inv * primitive_d / (two_pi * two_pi);
    return std::abs(numeric - rec.exact.embed());
}

bool mod_p_nonvanishing(const SpecialValueRecord& rec, const Int& p) {
    if (rec.exact.is_zero()) fail(errc::zero_input, "special value is zero");
    return valuation_at_p(rec.exact, p) == 0;
}

std::vector<RayCharacter> admissible_twists(const EisensteinSeries& E, long conductor_bound) {
    const QuadField& f = E.field();
    std::vector<RayCharacter> out;
    for (auto& m : f.ideals_up_to(Int(conductor_bound))) {
        if (m.is_ring()) continue;
        if (!m.is_coprime_to(E.level())) continue;
        for (auto& chi : primitive_characters(f, m))
            if (chi.totally_odd()) out.push_back(chi);
    }
    return out;
}

} // namespace eiscong
