#pragma once

#include <map>
#include <mutex>
#include <optional>

#include "eiscong/lvalues.hpp"

namespace eiscong {

/// Hilbert Eisenstein series E_k(phi, psi) of parallel even weight k with
/// coefficients C(m) = sum_{c | m} phi(m/c) psi(c) N(c)^{k-1}. The characters
/// are stored primitive; the level is m_phi * m_psi.
class EisensteinSeries {
public:
    /// Requires m_{phi psi} = m_phi m_psi and the parity (k,k) = q + r mod 2.
    EisensteinSeries(const RayCharacter& phi, const RayCharacter& psi, long k);

    const RayCharacter& phi() const { return phi_; }
    const RayCharacter& psi() const { return psi_; }
    long weight() const { return k_; }
    const OIdeal& level() const { return level_; }
    const QuadField& field() const { return phi_.group().field(); }
    /// nebentypus phi*psi as a primitive character
    const RayCharacter& character() const { return chi_; }

    /// C(m, E), exact; cached by HNF key
    CycloNumber coefficient(const OIdeal& m) const;

    /// T(q)/U(q)-eigenvalues phi(q) + psi(q) N(q)^{k-1} for primes of norm <= bound
    std::vector<std::pair<OIdeal, CycloNumber>> hecke_eigenvalues(long bound) const;

    /// Hecke-normalized constant term C_{infty,1}(0, E)
    CycloNumber constant_term_infinity() const;

    struct ConstantTerm {
        Cusp cusp;
        CycloNumber value; // a_c(0, E_1)
        bool vanishing_case;
    };
    /// raw Fourier constant term at the cusp alpha(infinity)
    ConstantTerm constant_term_at_cusp(const Cusp& c) const;

    /// |sum_{N(m)<=terms} C(m) N(m)^{-s} - matched truncation of L(s,phi)L(s-k+1,psi)|
    double dirichlet_factorization_residual(long s, long terms) const;

private:
    RayCharacter phi_, psi_, chi_;
    long k_;
    OIdeal level_;
    mutable std::map<OIdeal, CycloNumber> coef_cache_;
    mutable std::map<OIdeal, CycloNumber> phi_primes_, psi_primes_;
    mutable std::mutex mutex_;

    CycloNumber char_value_from_factors(const RayCharacter& chi,
                                        std::map<OIdeal, CycloNumber>& prime_cache,
                                        const std::vector<std::pair<OIdeal, long>>& factors) const;
};

} // namespace eiscong
