#include "eiscong/cyclo.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <mutex>
#include <numeric>
#include <sstream>

namespace eiscong {

namespace {
std::mutex g_level_mutex;
std::mutex g_phi_mutex;
} // namespace

const CycloLevel& CycloLevel::get(long n) {
    if (n < 1) fail(errc::internal_error, "bad cyclotomic level");
    std::lock_guard<std::mutex> lock(g_level_mutex);
    static std::map<long, std::unique_ptr<CycloLevel>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return *it->second;

    auto lv = std::make_unique<CycloLevel>();
    lv->n = n;
    long stride = 1;
    for (auto& [pz, e] : factor_integer(Int(n))) {
        long p = (long)pz.get_si();
        long q = 1;
        for (long i = 0; i < e; ++i) q *= p;
        Factor f;
        f.p = p;
        f.q = q;
        f.phi = q / p * (p - 1);
        f.stride = stride;
        f.crt_inv = (long)inv_mod(Int(n / q), Int(q)).get_si();
        stride *= f.phi;
        lv->factors.push_back(f);
    }
    lv->phi = stride;
    // one-step reduction rows: zeta_q^a = -sum_{j<p-1} zeta_q^{(a-phi) + j q/p}
    lv->red_rows.resize(lv->factors.size());
    for (size_t i = 0; i < lv->factors.size(); ++i) {
        auto& f = lv->factors[i];
        long step = f.q / f.p;
        lv->red_rows[i].resize(f.q - f.phi);
        for (long a = f.phi; a < f.q; ++a) {
            auto& row = lv->red_rows[i][a - f.phi];
            long r = a - f.phi;
            for (long j = 0; j + 1 < f.p; ++j) row.emplace_back(r + j * step, -1);
        }
    }
    const CycloLevel& ref = *lv;
    cache[n] = std::move(lv);
    return ref;
}

long lcm_level(long a, long b) {
    long g = std::gcd(a, b);
    long l = a / g * b;
    if (l <= 0 || l > (1L << 40)) fail(errc::internal_error, "cyclotomic level overflow");
    return l;
}

void CycloNumber::add_monomial(std::vector<Int>& coef, const CycloLevel& lv,
                               std::vector<long>& exps, const Int& c, size_t var) {
    if (c == 0) return;
    for (size_t i = var; i < lv.factors.size(); ++i) {
        const auto& f = lv.factors[i];
        long e = exps[i];
        if (e >= f.q) {
            e %= f.q;
            exps[i] = e;
        }
        if (e >= f.phi) {
            const auto& row = lv.red_rows[i][e - f.phi];
            for (auto& [e2, s] : row) {
                exps[i] = e2;
                add_monomial(coef, lv, exps, s > 0 ? c : Int(-c), i + 1);
            }
            exps[i] = e;
            return;
        }
    }
    long idx = 0;
    for (size_t i = 0; i < lv.factors.size(); ++i) idx += exps[i] * lv.factors[i].stride;
    coef[idx] += c;
}

namespace {

// decode mixed-radix index into per-factor exponents
inline void decode_index(const CycloLevel& lv, long idx, std::vector<long>& exps) {
    for (size_t i = 0; i < lv.factors.size(); ++i) {
        exps[i] = (idx / lv.factors[i].stride) % lv.factors[i].phi;
    }
}

// power-of-zeta_N exponent for a basis monomial
inline long monomial_angle(const CycloLevel& lv, const std::vector<long>& exps) {
    long t = 0;
    for (size_t i = 0; i < lv.factors.size(); ++i) {
        long contrib = (long)((__int128)(lv.n / lv.factors[i].q) * exps[i] % lv.n);
        t = (t + contrib) % lv.n;
    }
    return t;
}

// zeta_N^t as per-factor exponents (not yet basis-reduced)
inline void crt_exponents(const CycloLevel& lv, long t, std::vector<long>& exps) {
    t %= lv.n;
    if (t < 0) t += lv.n;
    for (size_t i = 0; i < lv.factors.size(); ++i) {
        const auto& f = lv.factors[i];
        exps[i] = (long)((__int128)(t % f.q) * f.crt_inv % f.q);
    }
}

} // namespace

CycloNumber::CycloNumber(const Rat& r) : level_(1), coef_(1), den_(rat_den(r)) {
    coef_[0] = rat_num(r);
}

CycloNumber::CycloNumber(const Int& n) : level_(1), coef_(1), den_(1) { coef_[0] = n; }

CycloNumber CycloNumber::root_of_unity(long n, long k, const Rat& scale) {
    return from_monomials(n, {{k, scale}});
}

CycloNumber CycloNumber::from_monomials(long n, const std::vector<std::pair<long, Rat>>& terms) {
    const CycloLevel& lv = CycloLevel::get(n);
    CycloNumber x;
    x.level_ = n;
    x.coef_.assign(lv.phi, Int(0));
    Int den = 1;
    for (auto& [e, r] : terms) den = lcm(den, rat_den(r));
    x.den_ = den;
    std::vector<long> exps(lv.factors.size());
    for (auto& [e, r] : terms) {
        crt_exponents(lv, e, exps);
        add_monomial(x.coef_, lv, exps, rat_num(r) * (den / rat_den(r)), 0);
    }
    x.normalize();
    return x;
}

void CycloNumber::normalize() {
    Int g = den_;
    for (auto& c : coef_) {
        if (c != 0) g = gcd(g, c);
        if (g == 1) break;
    }
    if (g > 1) {
        den_ /= g;
        for (auto& c : coef_) c /= g;
    }
    bool zero = true;
    for (auto& c : coef_)
        if (c != 0) {
            zero = false;
            break;
        }
    if (zero) den_ = 1;
}

bool CycloNumber::is_zero() const {
    for (auto& c : coef_)
        if (c != 0) return false;
    return true;
}

bool CycloNumber::is_rational() const {
    for (size_t i = 1; i < coef_.size(); ++i)
        if (coef_[i] != 0) return false;
    return true;
}

Rat CycloNumber::to_rational() const {
    if (!is_rational()) fail(errc::unsupported_argument, "value is not rational");
    return make_rat(coef_[0], den_);
}

CycloNumber coerce_up(const CycloNumber& x, long n) {
    if (x.level_ == n) return x;
    if (n % x.level_ != 0) fail(errc::internal_error, "coerce_up: level mismatch");
    const CycloLevel& src = CycloLevel::get(x.level_);
    const CycloLevel& dst = CycloLevel::get(n);
    CycloNumber y;
    y.level_ = n;
    y.coef_.assign(dst.phi, Int(0));
    y.den_ = x.den_;
    std::vector<long> se(src.factors.size()), de(dst.factors.size());
    for (long idx = 0; idx < (long)x.coef_.size(); ++idx) {
        if (x.coef_[idx] == 0) continue;
        decode_index(src, idx, se);
        // per prime: zeta_{p^e} = zeta_{p^E}^{p^{E-e}}; exponents stay below phi
        std::fill(de.begin(), de.end(), 0);
        for (size_t i = 0; i < src.factors.size(); ++i) {
            long p = src.factors[i].p;
            for (size_t j = 0; j < dst.factors.size(); ++j) {
                if (dst.factors[j].p == p) {
                    de[j] = se[i] * (dst.factors[j].q / src.factors[i].q);
                    break;
                }
            }
        }
        long didx = 0;
        for (size_t j = 0; j < dst.factors.size(); ++j) didx += de[j] * dst.factors[j].stride;
        y.coef_[didx] = x.coef_[idx];
    }
    return y;
}

CycloNumber& CycloNumber::operator+=(const CycloNumber& o) {
    long n = lcm_level(level_, o.level_);
    CycloNumber a = coerce_up(*this, n);
    CycloNumber b = coerce_up(o, n);
    Int den = lcm(a.den_, b.den_);
    Int ma = den / a.den_, mb = den / b.den_;
    for (size_t i = 0; i < a.coef_.size(); ++i) a.coef_[i] = a.coef_[i] * ma + b.coef_[i] * mb;
    a.den_ = den;
    a.normalize();
    *this = std::move(a);
    return *this;
}

CycloNumber& CycloNumber::operator-=(const CycloNumber& o) { return *this += -o; }

CycloNumber CycloNumber::operator-() const {
    CycloNumber x = *this;
    for (auto& c : x.coef_) c = -c;
    return x;
}

CycloNumber& CycloNumber::operator*=(const CycloNumber& o) {
    long n = lcm_level(level_, o.level_);
    CycloNumber a = coerce_up(*this, n);
    CycloNumber b = coerce_up(o, n);
    const CycloLevel& lv = CycloLevel::get(n);
    std::vector<long> nza, nzb;
    for (long i = 0; i < (long)a.coef_.size(); ++i)
        if (a.coef_[i] != 0) nza.push_back(i);
    for (long i = 0; i < (long)b.coef_.size(); ++i)
        if (b.coef_[i] != 0) nzb.push_back(i);
    CycloNumber r;
    r.level_ = n;
    r.coef_.assign(lv.phi, Int(0));
    r.den_ = a.den_ * b.den_;
    std::vector<long> ea(lv.factors.size()), eb(lv.factors.size()), es(lv.factors.size());
    for (long ia : nza) {
        decode_index(lv, ia, ea);
        const Int& ca = a.coef_[ia];
        for (long ib : nzb) {
            decode_index(lv, ib, eb);
            for (size_t i = 0; i < es.size(); ++i) es[i] = ea[i] + eb[i];
            add_monomial(r.coef_, lv, es, ca * b.coef_[ib], 0);
        }
    }
    r.normalize();
    *this = std::move(r);
    return *this;
}

CycloNumber& CycloNumber::operator*=(const Rat& q) {
    if (q == 0) {
        std::fill(coef_.begin(), coef_.end(), Int(0));
        den_ = 1;
        return *this;
    }
    Int num = rat_num(q);
    for (auto& c : coef_) c *= num;
    den_ *= rat_den(q);
    normalize();
    return *this;
}

bool CycloNumber::operator==(const CycloNumber& o) const {
    long n = lcm_level(level_, o.level_);
    CycloNumber a = coerce_up(*this, n);
    CycloNumber b = coerce_up(o, n);
    return a.den_ == b.den_ && a.coef_ == b.coef_;
}

CycloNumber CycloNumber::galois(long a) const {
    long n = level_;
    a %= n;
    if (a < 0) a += n;
    if (n == 1) return *this;
    if (std::gcd(a, n) != 1) fail(errc::unsupported_argument, "galois exponent not coprime to level");
    const CycloLevel& lv = CycloLevel::get(n);
    CycloNumber r;
    r.level_ = n;
    r.coef_.assign(lv.phi, Int(0));
    r.den_ = den_;
    std::vector<long> e(lv.factors.size()), e2(lv.factors.size());
    for (long idx = 0; idx < (long)coef_.size(); ++idx) {
        if (coef_[idx] == 0) continue;
        decode_index(lv, idx, e);
        for (size_t i = 0; i < e.size(); ++i)
            e2[i] = (long)((__int128)e[i] * a % lv.factors[i].q);
        add_monomial(r.coef_, lv, e2, coef_[idx], 0);
    }
    r.normalize();
    return r;
}

CycloNumber CycloNumber::galois_minus_one() const {
    if (level_ == 1) return *this;
    return galois(level_ - 1);
}

CycloNumber CycloNumber::inverse() const {
    if (is_zero()) fail(errc::division_by_zero, "inverse of zero");
    if (is_rational()) return CycloNumber(1 / to_rational());
    // monomial fast path: (r * zeta^t)^{-1} = (1/r) zeta^{-t}
    long nz = -1;
    bool monomial = true;
    for (long i = 0; i < (long)coef_.size(); ++i) {
        if (coef_[i] != 0) {
            if (nz >= 0) {
                monomial = false;
                break;
            }
            nz = i;
        }
    }
    const CycloLevel& lv = CycloLevel::get(level_);
    if (monomial) {
        std::vector<long> e(lv.factors.size());
        decode_index(lv, nz, e);
        long t = monomial_angle(lv, e);
        CycloNumber r = root_of_unity(level_, (level_ - t) % level_, make_rat(den_, coef_[nz]));
        return r;
    }
    if (lv.phi > 512) fail(errc::unsupported_argument, "inverse at large cyclotomic level");
    // product of the nontrivial conjugates divided by the rational norm
    CycloNumber prod = CycloNumber::one();
    for (long a = 2; a <= level_; ++a) {
        if (std::gcd(a, level_) != 1) continue;
        prod *= galois(a);
    }
    CycloNumber norm = prod * (*this);
    if (!norm.is_rational()) fail(errc::internal_error, "field norm not rational");
    Rat nr = norm.to_rational();
    if (nr == 0) fail(errc::division_by_zero, "inverse of zero");
    prod *= (1 / nr);
    return prod;
}

std::complex<double> CycloNumber::embed(int precision_bits) const {
    if (precision_bits < 53) fail(errc::unsupported_argument, "precision below 53 bits");
    const CycloLevel& lv = CycloLevel::get(level_);
    long double re = 0, im = 0;
    std::vector<long> e(lv.factors.size());
    const long double two_pi = 6.28318530717958647692L;
    for (long idx = 0; idx < (long)coef_.size(); ++idx) {
        if (coef_[idx] == 0) continue;
        decode_index(lv, idx, e);
        long t = monomial_angle(lv, e);
        long double ang = two_pi * (long double)t / (long double)level_;
        long double c = coef_[idx].get_d();
        re += c * cosl(ang);
        im += c * sinl(ang);
    }
    long double d = den_.get_d();
    return {(double)(re / d), (double)(im / d)};
}

CycloNumber CycloNumber::coerce_to_level(long m) const {
    long n = lcm_level(level_, m);
    CycloNumber up = coerce_up(*this, n);
    if (n == m) return up;
    // descend: value must lie in Q(zeta_m); express via the m-basis inside n
    const CycloLevel& lvn = CycloLevel::get(n);
    const CycloLevel& lvm = CycloLevel::get(m);
    CycloNumber down;
    down.level_ = m;
    down.coef_.assign(lvm.phi, Int(0));
    down.den_ = up.den_;
    // basis monomials of level m map injectively into level-n basis (see coerce_up);
    // invert that index map and require all other coefficients to vanish.
    std::map<long, long> back;
    std::vector<long> me(lvm.factors.size());
    for (long idx = 0; idx < lvm.phi; ++idx) {
        decode_index(lvm, idx, me);
        long nidx = 0;
        for (size_t i = 0; i < lvm.factors.size(); ++i) {
            long p = lvm.factors[i].p;
            for (size_t j = 0; j < lvn.factors.size(); ++j) {
                if (lvn.factors[j].p == p) {
                    nidx += me[i] * (lvn.factors[j].q / lvm.factors[i].q) * lvn.factors[j].stride;
                    break;
                }
            }
        }
        back[nidx] = idx;
    }
    for (long idx = 0; idx < (long)up.coef_.size(); ++idx) {
        if (up.coef_[idx] == 0) continue;
        auto it = back.find(idx);
        if (it == back.end())
            fail(errc::unsupported_argument, "value does not lie in the requested cyclotomic field");
        down.coef_[it->second] = up.coef_[idx];
    }
    down.normalize();
    return down;
}

CycloNumber CycloNumber::minimize_level() const {
    CycloNumber cur = *this;
    bool changed = true;
    while (changed && cur.level_ > 1) {
        changed = false;
        for (auto& [pz, e] : factor_integer(Int(cur.level_))) {
            long cand = cur.level_ / (long)pz.get_si();
            try {
                cur = cur.coerce_to_level(cand);
                changed = true;
                break;
            } catch (const Error& err) {
                if (err.code() != errc::unsupported_argument) throw;
            }
        }
    }
    return cur;
}

std::vector<Int> CycloNumber::power_basis_coefficients() const {
    const CycloLevel& lv = CycloLevel::get(level_);
    std::vector<Int> acc(std::max<long>(level_, 1), Int(0));
    std::vector<long> e(lv.factors.size());
    for (long idx = 0; idx < (long)coef_.size(); ++idx) {
        if (coef_[idx] == 0) continue;
        decode_index(lv, idx, e);
        acc[monomial_angle(lv, e)] += coef_[idx];
    }
    const std::vector<Int>& phi_poly = cyclotomic_polynomial(level_);
    long deg_phi = (long)phi_poly.size() - 1;
    for (long d = (long)acc.size() - 1; d >= deg_phi; --d) {
        if (acc[d] == 0) continue;
        Int c = acc[d];
        for (long j = 0; j <= deg_phi; ++j) acc[d - deg_phi + j] -= c * phi_poly[j];
    }
    acc.resize(deg_phi);
    return acc;
}

std::string CycloNumber::serialize() const {
    std::ostringstream os;
    os << level_ << ":[";
    auto pc = power_basis_coefficients();
    for (size_t i = 0; i < pc.size(); ++i) {
        if (i) os << ",";
        os << pc[i].get_str();
    }
    os << "]/" << den_.get_str();
    return os.str();
}

CycloNumber CycloNumber::parse(const std::string& text) {
    auto bad = [&]() { fail(errc::malformed_value, "bad CycloNumber literal: " + text); };
    size_t colon = text.find(':');
    size_t lb = text.find('[');
    size_t rb = text.find(']');
    size_t slash = text.rfind('/');
    if (colon == std::string::npos || lb == std::string::npos || rb == std::string::npos ||
        slash == std::string::npos || slash < rb)
        bad();
    long n = 0;
    try {
        n = std::stol(text.substr(0, colon));
    } catch (...) {
        bad();
    }
    if (n < 1) bad();
    std::string body = text.substr(lb + 1, rb - lb - 1);
    Int den;
    try {
        den = Int(text.substr(slash + 1));
    } catch (const std::invalid_argument&) {
        bad();
    }
    if (den <= 0) bad();
    std::stringstream ss(body);
    std::string tok;
    long j = 0;
    std::vector<std::pair<long, Rat>> monos;
    try {
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            Int c(tok);
            if (c != 0) monos.emplace_back(j, Rat(c));
            ++j;
        }
    } catch (const std::invalid_argument&) {
        bad();
    }
    CycloNumber x = from_monomials(n, monos);
    x *= make_rat(1, den);
    return x;
}

// ---------------------------------------------------------------------------
// cyclotomic polynomials

const std::vector<Int>& cyclotomic_polynomial(long n) {
    std::lock_guard<std::mutex> lock(g_phi_mutex);
    static std::map<long, std::vector<Int>> cache;
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;

    std::function<std::vector<Int>(long)> compute = [&](long m) -> std::vector<Int> {
        auto found = cache.find(m);
        if (found != cache.end()) return found->second;
        // (x^m - 1) / prod_{d | m, d < m} Phi_d, exact division
        std::vector<Int> num(m + 1, Int(0));
        num[0] = -1;
        num[m] = 1;
        for (long d : divisors_of(m)) {
            if (d == m) continue;
            std::vector<Int> phi_d = compute(d);
            // num /= phi_d
            std::vector<Int> q(num.size() - phi_d.size() + 1, Int(0));
            for (long i = (long)q.size() - 1; i >= 0; --i) {
                Int c = num[i + phi_d.size() - 1];
                q[i] = c; // phi_d monic
                if (c == 0) continue;
                for (size_t j = 0; j < phi_d.size(); ++j) num[i + j] -= c * phi_d[j];
            }
            num = std::move(q);
        }
        cache[m] = num;
        return num;
    };
    compute(n);
    return cache[n];
}

// ---------------------------------------------------------------------------
// polynomial arithmetic over Z/p

namespace fp {

static void trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly mul(const Poly& a, const Poly& b, const Int& p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    for (auto& c : r) c = fmod(c, p);
    trim(r);
    return r;
}

Poly mod(Poly a, const Poly& m, const Int& p) {
    trim(a);
    if (m.empty()) fail(errc::division_by_zero, "poly mod zero");
    Int lead_inv = inv_mod(m.back(), p);
    while (a.size() >= m.size()) {
        Int c = fmod(a.back() * lead_inv, p);
        size_t shift = a.size() - m.size();
        if (c != 0)
            for (size_t j = 0; j < m.size(); ++j) a[shift + j] = fmod(a[shift + j] - c * m[j], p);
        a.pop_back();
        trim(a);
    }
    return a;
}

Poly gcd(Poly a, Poly b, const Int& p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        Poly r = mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        Int inv = inv_mod(a.back(), p);
        for (auto& c : a) c = fmod(c * inv, p);
    }
    return a;
}

Poly pow_mod(const Poly& a, Int e, const Poly& m, const Int& p) {
    Poly base = mod(a, m, p);
    Poly r{Int(1)};
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mod(mul(r, base, p), m, p);
        base = mod(mul(base, base, p), m, p);
        e >>= 1;
    }
    return r;
}

} // namespace fp

// ---------------------------------------------------------------------------
// ResidueMap

namespace {

// deterministic splitting of a squarefree product of degree-f irreducibles
std::vector<fp::Poly> equal_degree_factor(const fp::Poly& poly, long f, const Int& p) {
    std::vector<fp::Poly> done;
    std::vector<fp::Poly> work{poly};
    unsigned long long seed = 0x9e3779b97f4a7c15ull;
    auto next = [&seed]() {
        seed ^= seed << 13;
        seed ^= seed >> 7;
        seed ^= seed << 17;
        return seed;
    };
    Int exponent = (pow_int(p, (unsigned long)f) - 1) / 2;
    while (!work.empty()) {
        fp::Poly g = std::move(work.back());
        work.pop_back();
        long deg = (long)g.size() - 1;
        if (deg == f) {
            Int inv = inv_mod(g.back(), p);
            for (auto& c : g) c = fmod(c * inv, p);
            done.push_back(std::move(g));
            continue;
        }
        // Cantor-Zassenhaus split with a deterministic pseudo-random element
        bool split_found = false;
        while (!split_found) {
            fp::Poly r(deg, Int(0));
            for (long i = 0; i < deg; ++i) r[i] = fmod(Int((unsigned long)(next() % 1000000007ull)), p);
            fp::trim(r);
            if (r.size() < 2) continue;
            fp::Poly s = fp::pow_mod(r, exponent, g, p);
            if (s.empty()) continue;
            s[0] = fmod(s[0] - 1, p);
            fp::Poly h = fp::gcd(s, g, p);
            long dh = (long)h.size() - 1;
            if (dh <= 0 || dh >= deg) continue;
            // g / h
            fp::Poly quot;
            {
                fp::Poly rem = g;
                Int lead_inv = inv_mod(h.back(), p);
                quot.assign(rem.size() - h.size() + 1, Int(0));
                for (long i = (long)quot.size() - 1; i >= 0; --i) {
                    Int c = fmod(rem[i + h.size() - 1] * lead_inv, p);
                    quot[i] = c;
                    if (c == 0) continue;
                    for (size_t j = 0; j < h.size(); ++j) rem[i + j] = fmod(rem[i + j] - c * h[j], p);
                }
            }
            work.push_back(std::move(h));
            work.push_back(std::move(quot));
            split_found = true;
        }
    }
    std::sort(done.begin(), done.end(), [](const fp::Poly& a, const fp::Poly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        for (size_t i = 0; i < a.size(); ++i)
            if (a[i] != b[i]) return a[i] < b[i];
        return false;
    });
    return done;
}

} // namespace

ResidueMap::ResidueMap(long level, const Int& p) : level_(level), p_(p) {
    if (!is_prime(p) || p == 2) fail(errc::unsupported_argument, "residue map needs an odd prime");
    if (level < 1) fail(errc::internal_error, "bad level");
    if (Int(level) % p == 0) fail(errc::ramified_prime, "p divides the cyclotomic level");
    f_ = (level == 1) ? 1 : mult_order(p, Int(level));
    const std::vector<Int>& phi_poly = cyclotomic_polynomial(level_);
    fp::Poly pp(phi_poly.size());
    for (size_t i = 0; i < phi_poly.size(); ++i) pp[i] = fmod(phi_poly[i], p_);
    auto factors = equal_degree_factor(pp, f_, p_);
    if (factors.empty()) fail(errc::internal_error, "cyclotomic factorization failed");
    factor_ = factors.front();
    zeta_pows_.resize(level_);
    fp::Poly y{Int(0), Int(1)};
    fp::Poly acc{Int(1)};
    for (long j = 0; j < level_; ++j) {
        zeta_pows_[j] = acc;
        acc = fp::mod(fp::mul(acc, y, p_), factor_, p_);
    }
}

ResidueMap::Fq ResidueMap::reduce(const CycloNumber& x) const {
    if (x.level() != level_) {
        return reduce(x.coerce_to_level(level_));
    }
    if (gcd(x.den(), p_) != 1)
        fail(errc::denominator_not_coprime, "denominator shares a factor with p");
    const CycloLevel& lv = CycloLevel::get(level_);
    Fq out(f_, Int(0));
    std::vector<long> e(lv.factors.size());
    const auto& coef = x.tensor_coefficients();
    for (long idx = 0; idx < (long)coef.size(); ++idx) {
        if (coef[idx] == 0) continue;
        decode_index(lv, idx, e);
        long t = monomial_angle(lv, e);
        const fp::Poly& zp = zeta_pows_[t];
        Int cm = fmod(coef[idx], p_);
        for (size_t j = 0; j < zp.size(); ++j) out[j] = fmod(out[j] + cm * zp[j], p_);
    }
    Int dinv = inv_mod(fmod(x.den(), p_), p_);
    for (auto& c : out) c = fmod(c * dinv, p_);
    return out;
}

std::string ResidueMap::fq_to_string(const Fq& a) const {
    std::ostringstream os;
    bool first = true;
    for (long j = (long)a.size() - 1; j >= 0; --j) {
        if (a[j] == 0) continue;
        if (!first) os << " + ";
        first = false;
        if (j == 0 || a[j] != 1) os << a[j].get_str();
        if (j >= 1) {
            if (a[j] != 1) os << "*";
            os << "y";
            if (j > 1) os << "^" << j;
        }
    }
    if (first) os << "0";
    return os.str();
}

namespace {

// poly helpers modulo an integer m (not necessarily prime)
fp::Poly poly_mod_int(const fp::Poly& a, const Int& m) {
    fp::Poly r(a.size());
    for (size_t i = 0; i < a.size(); ++i) r[i] = fmod(a[i], m);
    fp::trim(r);
    return r;
}

fp::Poly poly_mul_int(const fp::Poly& a, const fp::Poly& b, const Int& m) {
    if (a.empty() || b.empty()) return {};
    fp::Poly r(a.size() + b.size() - 1, Int(0));
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    return poly_mod_int(r, m);
}

fp::Poly poly_sub_int(fp::Poly a, const fp::Poly& b, const Int& m) {
    if (a.size() < b.size()) a.resize(b.size(), Int(0));
    for (size_t i = 0; i < b.size(); ++i) a[i] -= b[i];
    return poly_mod_int(a, m);
}

// remainder by a monic divisor, coefficients mod m
fp::Poly poly_rem_monic(fp::Poly a, const fp::Poly& d, const Int& m) {
    a = poly_mod_int(a, m);
    while (a.size() >= d.size()) {
        Int c = a.back();
        size_t shift = a.size() - d.size();
        if (c != 0)
            for (size_t j = 0; j < d.size(); ++j) a[shift + j] = fmod(a[shift + j] - c * d[j], m);
        a.pop_back();
        fp::trim(a);
    }
    return a;
}

// quotient of division by a monic divisor mod m
std::pair<fp::Poly, fp::Poly> poly_divmod_monic(fp::Poly a, const fp::Poly& d, const Int& m) {
    a = poly_mod_int(a, m);
    if (a.size() < d.size()) return {{}, a};
    fp::Poly q(a.size() - d.size() + 1, Int(0));
    while (a.size() >= d.size()) {
        Int c = a.back();
        size_t shift = a.size() - d.size();
        q[shift] = c;
        if (c != 0)
            for (size_t j = 0; j < d.size(); ++j) a[shift + j] = fmod(a[shift + j] - c * d[j], m);
        a.pop_back();
        fp::trim(a);
    }
    fp::trim(q);
    return {q, a};
}

} // namespace

void ResidueMap::ensure_hensel(long k) const {
    // guarded by the caller (valuation)
    if (hensel_k_ >= k) return;
    // linear Hensel lift of Phi = G * H from mod p to mod p^k, G monic of degree f
    const std::vector<Int>& phi_poly = cyclotomic_polynomial(level_);
    fp::Poly phi(phi_poly.begin(), phi_poly.end());
    fp::Poly g = factor_;
    // cofactor mod p
    fp::Poly h;
    {
        auto [q, r] = poly_divmod_monic(poly_mod_int(phi, p_), g, p_);
        if (!r.empty()) fail(errc::internal_error, "factor does not divide Phi mod p");
        h = q;
    }
    // Bezout s*g + t*h = 1 mod p via extended Euclid over F_p
    fp::Poly s, t;
    {
        fp::Poly r0 = g, r1 = h;
        fp::Poly s0{Int(1)}, s1{}, t0{}, t1{Int(1)};
        while (!r1.empty()) {
            Int lead_inv = inv_mod(r1.back(), p_);
            fp::Poly scaled(r1.size());
            for (size_t i = 0; i < r1.size(); ++i) scaled[i] = fmod(r1[i] * lead_inv, p_);
            auto [q, r] = poly_divmod_monic(r0, scaled, p_);
            for (auto& c : q) c = fmod(c * lead_inv, p_);
            fp::Poly s2 = poly_sub_int(s0, poly_mul_int(q, s1, p_), p_);
            fp::Poly t2 = poly_sub_int(t0, poly_mul_int(q, t1, p_), p_);
            r0 = std::move(r1);
            r1 = r;
            s0 = std::move(s1);
            s1 = std::move(s2);
            t0 = std::move(t1);
            t1 = std::move(t2);
        }
        if (r0.size() != 1) fail(errc::internal_error, "factor and cofactor not coprime mod p");
        Int inv = inv_mod(r0[0], p_);
        for (auto& c : s0) c = fmod(c * inv, p_);
        for (auto& c : t0) c = fmod(c * inv, p_);
        s = s0;
        t = t0;
    }
    fp::Poly G = g, H = h;
    Int mod_now = p_;
    for (long step = 1; step < k; ++step) {
        Int mod_next = mod_now * p_;
        // E = (Phi - G*H) / p^step  (exact), taken mod p
        fp::Poly prod = poly_mul_int(G, H, mod_next);
        fp::Poly diff = poly_sub_int(poly_mod_int(phi, mod_next), prod, mod_next);
        fp::Poly E(diff.size());
        for (size_t i = 0; i < diff.size(); ++i) E[i] = fmod(diff[i] / mod_now, p_);
        fp::trim(E);
        // solve u*h + v*g = E over F_p with deg u < f: u = (E t) mod g,
        // then v = (E - u h)/g exactly
        fp::Poly Et = poly_mod_int(poly_mul_int(E, t, p_), p_);
        fp::Poly u = poly_rem_monic(Et, g, p_);
        fp::Poly diff2 = poly_sub_int(E, poly_mul_int(u, h, p_), p_);
        auto [v, rem2] = poly_divmod_monic(diff2, g, p_);
        if (!rem2.empty()) fail(errc::internal_error, "hensel correction not divisible");
        // G += p^step * u ; H += p^step * v
        if (G.size() < u.size()) G.resize(u.size(), Int(0));
        for (size_t i = 0; i < u.size(); ++i) G[i] = fmod(G[i] + mod_now * u[i], mod_next);
        if (H.size() < v.size()) H.resize(v.size(), Int(0));
        for (size_t i = 0; i < v.size(); ++i) H[i] = fmod(H[i] + mod_now * v[i], mod_next);
        mod_now = mod_next;
    }
    hensel_k_ = k;
    hensel_mod_ = mod_now;
    hensel_factor_ = G;
    hensel_zeta_pows_.assign(level_, {});
    fp::Poly y{Int(0), Int(1)};
    fp::Poly acc{Int(1)};
    for (long j = 0; j < level_; ++j) {
        hensel_zeta_pows_[j] = acc;
        acc = poly_rem_monic(poly_mul_int(acc, y, mod_now), G, mod_now);
    }
}

long ResidueMap::valuation(const CycloNumber& x) const {
    if (x.is_zero()) fail(errc::zero_input, "valuation of zero");
    if (x.level() != level_) {
        return valuation(x.coerce_to_level(level_));
    }
    static std::mutex hensel_mutex;
    std::lock_guard<std::mutex> lock(hensel_mutex);
    long vden = (x.den() == 1) ? 0 : eiscong::valuation(x.den(), p_);
    const CycloLevel& lv = CycloLevel::get(level_);
    for (long k = 24; k <= 3072; k *= 2) {
        ensure_hensel(k);
        std::vector<Int> out(f_, Int(0));
        std::vector<long> e(lv.factors.size());
        const auto& coef = x.tensor_coefficients();
        for (long idx = 0; idx < (long)coef.size(); ++idx) {
            if (coef[idx] == 0) continue;
            decode_index(lv, idx, e);
            long tt = monomial_angle(lv, e);
            const fp::Poly& zp = hensel_zeta_pows_[tt];
            for (size_t j = 0; j < zp.size(); ++j) out[j] = fmod(out[j] + coef[idx] * zp[j], hensel_mod_);
        }
        long best = -1;
        for (auto& c : out) {
            if (c == 0) continue;
            long v = eiscong::valuation(c, p_);
            if (best < 0 || v < best) best = v;
        }
        if (best >= 0 && best < k - 2) return best - vden;
    }
    fail(errc::internal_error, "valuation exceeds lifting precision");
}

std::string ResidueMap::describe() const {
    std::ostringstream os;
    os << "p=" << p_.get_str() << " level=" << level_ << " f=" << f_ << " factor=[";
    for (size_t i = 0; i < factor_.size(); ++i) {
        if (i) os << ",";
        os << factor_[i].get_str();
    }
    os << "]";
    return os.str();
}

long valuation_at_p(const CycloNumber& x, const Int& p) {
    if (x.is_zero()) fail(errc::zero_input, "valuation of zero");
    if (Int(x.level()) % p == 0) fail(errc::ramified_prime, "p ramifies in the cyclotomic field");
    if (x.is_rational()) {
        Rat r = x.to_rational();
        return valuation(rat_num(r), p) - (rat_den(r) == 1 ? 0 : valuation(rat_den(r), p));
    }
    ResidueMap rm(x.level(), p);
    return rm.valuation(x);
}

// ---------------------------------------------------------------------------
// square root of a field discriminant

CycloNumber sqrt_of_discriminant(long disc) {
    if (disc <= 0) fail(errc::unsupported_argument, "discriminant must be positive");
    CycloNumber r = CycloNumber::one();
    long i_power = 0; // accumulated factors of i from p = 3 mod 4 Gauss sums
    long two_val = 0;
    long m = disc;
    while (m % 2 == 0) {
        m /= 2;
        ++two_val;
    }
    Int scale = pow_int(Int(2), (unsigned long)(two_val / 2));
    if (two_val % 2 == 1) {
        // sqrt(2) = zeta_8 + zeta_8^{-1}
        r *= CycloNumber::from_monomials(8, {{1, Rat(1)}, {7, Rat(1)}});
    }
    for (auto& [pz, e] : factor_integer(Int(m))) {
        long p = (long)pz.get_si();
        if (e != 1) fail(errc::unsupported_argument, "discriminant with square odd factor");
        std::vector<std::pair<long, Rat>> terms;
        for (long t = 1; t < p; ++t) {
            long leg = (long)pow_mod(Int(t), Int((p - 1) / 2), Int(p)).get_si();
            terms.emplace_back(t, leg == 1 ? Rat(1) : Rat(-1));
        }
        r *= CycloNumber::from_monomials(p, terms);
        if (p % 4 == 3) ++i_power; // Gauss sum equals i*sqrt(p)
    }
    if (i_power % 4 != 0) {
        // divide by i^{i_power}: multiply by zeta_4^{-i_power}
        r *= CycloNumber::root_of_unity(4, (4 - (i_power % 4)) % 4);
    }
    r *= Rat(scale);
    if (r.embed().real() < 0) r = -r;
    return r;
}

} // namespace eiscong
