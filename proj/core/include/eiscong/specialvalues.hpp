#pragma once

#include "eiscong/eisenstein.hpp"

namespace eiscong {

/// Exact Eisenstein special value attached to a twisting character theta:
///   ((-1)^n / 2^n sqrt(disc)) * (tau(phi psi) phi psi(m_theta) theta(m_psi))
///   / (tau(psi) psi(m_theta) theta(m_{phi psi})) * L(0, theta^{-1} psi) L(0, theta phi^{-1})
/// which equals tau(eta^{-1}) D(1, E, eta) / (2 pi i)^n with eta = theta phi^{-1} psi^{-1}.
struct SpecialValueRecord {
    std::string phi_label, psi_label, theta_label, eta_label;
    CycloNumber exact;
    bool level_divides_eta_conductor = false;
};

/// ParityMismatch unless theta psi^{-1} and theta phi^{-1} are totally odd;
/// ConductorNotCoprime unless m_theta is coprime to the level.
SpecialValueRecord eisenstein_special_value(const EisensteinSeries& E, const RayCharacter& theta,
                                            bool allow_parity_violation = false);

/// |numeric - exact| where the numeric side evaluates
/// -tau(eta^{-1}) D(1, E, eta) / (2 pi)^2 through the Dirichlet factorization
/// D(s, E, eta) = L(s, phi eta) L(s-1, psi eta) with finite Euler corrections,
/// continued to s = 1 by the completed-L oracle.
double verify_special_value_numeric(const EisensteinSeries& E, const RayCharacter& theta,
                                    const SpecialValueRecord& rec, long terms);

/// true iff v_p(exact) = 0; ZeroInput on a vanishing record.
bool mod_p_nonvanishing(const SpecialValueRecord& rec, const Int& p);

/// Totally odd primitive characters with conductor coprime to the level, by
/// increasing conductor norm (the admissible twists for a totally even pair).
std::vector<RayCharacter> admissible_twists(const EisensteinSeries& E, long conductor_bound);

} // namespace eiscong
