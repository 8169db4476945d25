#include "eiscong/eisenstein.hpp"

#include <algorithm>
#include <cmath>

namespace eiscong {

EisensteinSeries::EisensteinSeries(const RayCharacter& phi, const RayCharacter& psi, long k)
    : phi_(phi.primitivize()), psi_(psi.primitivize()), chi_(phi_), k_(k),
      level_(OIdeal::ring_of_integers(phi.group().field())) {
    if (k < 2) fail(errc::unsupported_argument, "weight must be >= 2");
    chi_ = char_product(phi_, psi_).primitivize();
    level_ = phi_.modulus() * psi_.modulus();
    // standing hypothesis m_{phi psi} = m_phi m_psi
    if (!(chi_.conductor() == level_))
        fail(errc::conductor_not_coprime,
             "conductors of phi and psi must multiply to the conductor of phi*psi");
    // parity (k,...,k) = q + r mod 2 at both places
    auto q = phi_.sign(), r = psi_.sign();
    for (int i = 0; i < 2; ++i)
        if (((k % 2) + 2) % 2 != (q[i] + r[i]) % 2)
            fail(errc::parity_mismatch, "weight parity does not match the character signs");
}

CycloNumber EisensteinSeries::char_value_from_factors(
    const RayCharacter& chi, std::map<OIdeal, CycloNumber>& prime_cache,
    const std::vector<std::pair<OIdeal, long>>& factors) const {
    CycloNumber v = CycloNumber::one();
    for (auto& [q, e] : factors) {
        CycloNumber qc;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            auto it = prime_cache.find(q);
            if (it != prime_cache.end()) {
                qc = it->second;
            } else {
                // primitive evaluation: zero on primes dividing the conductor
                if (!q.is_coprime_to(chi.modulus()))
                    qc = CycloNumber::zero();
                else
                    qc = chi.eval_class(chi.group().dlog_ideal(q));
                prime_cache[q] = qc;
            }
        }
        if (qc.is_zero()) return CycloNumber::zero();
        for (long i = 0; i < e; ++i) v *= qc;
    }
    return v;
}

CycloNumber EisensteinSeries::coefficient(const OIdeal& m) const {
    if (!m.is_integral()) fail(errc::not_integral, "coefficients are indexed by integral ideals");
    {
        std::lock_guard<std::mutex> lock(mutex_);
        auto it = coef_cache_.find(m);
        if (it != coef_cache_.end()) return it->second;
    }
    auto factors = m.factor();
    // enumerate divisors c | m by exponent boxes
    std::vector<long> exps(factors.size(), 0);
    CycloNumber total = CycloNumber::zero();
    while (true) {
        std::vector<std::pair<OIdeal, long>> cfac, comp;
        Rat nc = 1;
        for (size_t i = 0; i < factors.size(); ++i) {
            if (exps[i] > 0) cfac.emplace_back(factors[i].first, exps[i]);
            if (factors[i].second - exps[i] > 0)
                comp.emplace_back(factors[i].first, factors[i].second - exps[i]);
            nc *= pow_rat(factors[i].first.norm(), exps[i]);
        }
        CycloNumber term = char_value_from_factors(phi_, phi_primes_, comp) *
                           char_value_from_factors(psi_, psi_primes_, cfac);
        if (!term.is_zero()) {
            term *= pow_rat(nc, k_ - 1);
            total += term;
        }
        size_t i = 0;
        while (i < factors.size()) {
            if (exps[i] < factors[i].second) {
                ++exps[i];
                break;
            }
            exps[i] = 0;
            ++i;
        }
        if (i == factors.size()) break;
    }
    std::lock_guard<std::mutex> lock(mutex_);
    coef_cache_[m] = total;
    return total;
}

std::vector<std::pair<OIdeal, CycloNumber>> EisensteinSeries::hecke_eigenvalues(long bound) const {
    std::vector<std::pair<OIdeal, CycloNumber>> out;
    for (auto& q : field().primes_up_to(Int(bound))) {
        CycloNumber v = chi_eval(phi_, q) + chi_eval(psi_, q) * CycloNumber(pow_rat(q.norm(), k_ - 1));
        out.emplace_back(q, v);
    }
    return out;
}

CycloNumber EisensteinSeries::constant_term_infinity() const {
    if (!phi_.modulus().is_ring()) return CycloNumber::zero();
    const QuadField& f = field();
    OIdeal t1 = f.different().inverse(); // the chosen class representative [t_1]
    CycloNumber phi_inv_t1 = chi_eval(phi_.inverse(), t1);
    RayCharacter ratio = char_product(phi_.inverse(), psi_).primitivize();
    CycloNumber lv = l_value_nonpositive(ratio, 1 - k_);
    CycloNumber out = phi_inv_t1 * lv * make_rat(1, 4);
    return out.minimize_level();
}

EisensteinSeries::ConstantTerm EisensteinSeries::constant_term_at_cusp(const Cusp& c) const {
    if (k_ % 2 != 0) fail(errc::odd_weight_unsupported, "cusp constant terms need even weight");
    const QuadField& f = field();
    const FieldElement &x = c.x, &y = c.y;
    bool psi_trivial = psi_.is_trivial();
    if (!psi_trivial && !psi_.modulus().contains(y)) return {c, CycloNumber::zero(), true};

    auto q = phi_.sign(), r = psi_.sign();
    RayCharacter psi_inv = psi_.inverse();
    RayCharacter phi_psi_inv = char_product(phi_, psi_inv).primitivize();
    RayCharacter phi_inv_psi = char_product(phi_.inverse(), psi_).primitivize();

    // sgn(-y)^q phi((-y) m_psi^{-1})
    CycloNumber f_phi;
    if (phi_.is_trivial()) {
        f_phi = CycloNumber::one();
    } else if (y.is_zero()) {
        f_phi = CycloNumber::zero();
    } else {
        OIdeal arg = OIdeal::principal(f, y) * psi_.modulus().inverse();
        f_phi = chi_eval(phi_, arg);
        auto sy = (-y).signs();
        int sgn = ((q[0] && sy[0] < 0) ? -1 : 1) * ((q[1] && sy[1] < 0) ? -1 : 1);
        if (sgn < 0) f_phi = -f_phi;
    }
    // sgn(-x)^r psi^{-1}(-x)
    CycloNumber f_psi;
    if (psi_trivial) {
        f_psi = CycloNumber::one();
    } else if (x.is_zero()) {
        f_psi = CycloNumber::zero();
    } else {
        f_psi = chi_eval(psi_inv, OIdeal::principal(f, x));
        auto sx = (-x).signs();
        int sgn = ((r[0] && sx[0] < 0) ? -1 : 1) * ((r[1] && sx[1] < 0) ? -1 : 1);
        if (sgn < 0) f_psi = -f_psi;
    }
    if (f_phi.is_zero() || f_psi.is_zero()) return {c, CycloNumber::zero(), false};

    CycloNumber tau_ratio = gauss_sum(phi_psi_inv) * gauss_sum(psi_inv).inverse();
    Rat norm_ratio = pow_rat(psi_.modulus().norm() / phi_psi_inv.modulus().norm(), k_);
    CycloNumber euler = CycloNumber::one();
    for (auto& [qq, e] : level_.factor()) {
        if (!qq.is_coprime_to(phi_psi_inv.modulus())) continue;
        euler *= CycloNumber::one() - chi_eval(phi_psi_inv, qq) *
                                          CycloNumber(pow_rat(qq.norm(), -k_));
    }
    CycloNumber lv = l_value_nonpositive(phi_inv_psi, 1 - k_);
    Rat front = make_rat(1, 4) * pow_rat(Rat(f.disc()), -k_ / 2);
    CycloNumber value = tau_ratio * f_phi * f_psi * euler * lv;
    value *= front * norm_ratio;
    return {c, value.minimize_level(), false};
}

double EisensteinSeries::dirichlet_factorization_residual(long s, long terms) const {
    if (terms <= 0) return 0.0;
    const QuadField& f = field();
    const IdealTable& tab = IdealTable::get(f, terms);
    const auto& entries = tab.entries();
    // left side: coefficients via the divisor sums
    std::complex<double> lhs = 0.0;
    for (auto& e : entries) {
        CycloNumber cm = coefficient(e.ideal);
        if (cm.is_zero()) continue;
        lhs += cm.embed() * std::pow((double)e.norm, -(double)s);
    }
    // right side: sum over pairs (a, b) with N(a) N(b) <= terms of
    // phi(a) N(a)^{-s} psi(b) N(b)^{k-1-s}, by an independent code path
    std::vector<std::complex<double>> pv = tab.character_values(phi_);
    std::vector<std::complex<double>> qv = tab.character_values(psi_);
    std::complex<double> rhs = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (pv[i] == std::complex<double>(0.0)) continue;
        double na = std::pow((double)entries[i].norm, -(double)s);
        long cap = terms / entries[i].norm;
        for (size_t j = 0; j < entries.size() && entries[j].norm <= cap; ++j) {
            if (qv[j] == std::complex<double>(0.0)) continue;
            rhs += pv[i] * na * qv[j] * std::pow((double)entries[j].norm, (double)(k_ - 1 - s));
        }
    }
    return std::abs(lhs - rhs);
}

} // namespace eiscong
