#include "eiscong/lvalues.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>

namespace eiscong {

// ---------------------------------------------------------------------------
// IdealTable

namespace {
std::mutex g_table_mutex;
}

const IdealTable& IdealTable::get(const QuadField& f, long bound) {
    std::lock_guard<std::mutex> lock(g_table_mutex);
    static std::map<std::pair<long, long>, std::unique_ptr<IdealTable>> cache;
    auto key = std::make_pair(f.d(), bound);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    auto tab = std::make_unique<IdealTable>();
    tab->primes_ = f.primes_up_to(Int(bound));
    struct Item {
        OIdeal ideal;
        long norm;
        std::vector<std::pair<size_t, long>> factors;
    };
    std::vector<Item> items{{OIdeal::ring_of_integers(f), 1, {}}};
    for (size_t pi = 0; pi < tab->primes_.size(); ++pi) {
        long np = rat_num(tab->primes_[pi].norm()).get_si();
        size_t sz = items.size();
        for (size_t i = 0; i < sz; ++i) {
            Item cur = items[i];
            long e = 0;
            while (cur.norm <= bound / np) {
                cur.ideal = cur.ideal * tab->primes_[pi];
                cur.norm *= np;
                ++e;
                auto fac = items[i].factors;
                fac.emplace_back(pi, e);
                items.push_back({cur.ideal, cur.norm, fac});
            }
        }
    }
    std::sort(items.begin(), items.end(), [](const Item& a, const Item& b) {
        if (a.norm != b.norm) return a.norm < b.norm;
        return a.ideal < b.ideal;
    });
    for (auto& it2 : items) tab->entries_.push_back({it2.ideal, it2.norm, it2.factors});
    const IdealTable& ref = *tab;
    cache[key] = std::move(tab);
    return ref;
}

std::vector<std::complex<double>> IdealTable::character_values(const RayCharacter& chi) const {
    RayCharacter prim = chi.primitivize();
    std::vector<std::complex<double>> at_prime(primes_.size());
    for (size_t i = 0; i < primes_.size(); ++i) {
        if (!primes_[i].is_coprime_to(prim.modulus()))
            at_prime[i] = 0.0;
        else
            at_prime[i] = prim.eval_class(prim.group().dlog_ideal(primes_[i])).embed();
    }
    std::vector<std::complex<double>> out(entries_.size());
    for (size_t j = 0; j < entries_.size(); ++j) {
        std::complex<double> v = 1.0;
        for (auto& [pi, e] : entries_[j].factors)
            for (long k = 0; k < e; ++k) v *= at_prime[pi];
        out[j] = v;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Shintani data

namespace {
std::mutex g_shintani_mutex;

Int rat_floor(const Rat& r) { return fdiv(rat_num(r), rat_den(r)); }
Int rat_ceil(const Rat& r) { return -fdiv(-rat_num(r), rat_den(r)); }

} // namespace

const ShintaniData& ShintaniData::get(const QuadField& f, const OIdeal& m) {
    if (!m.is_integral()) fail(errc::not_integral, "Shintani modulus must be integral");
    if (m.norm() > 100000) fail(errc::unsupported_argument, "conductor norm above enumeration bound");
    std::lock_guard<std::mutex> lock(g_shintani_mutex);
    static std::map<std::pair<long, std::string>, std::unique_ptr<ShintaniData>> cache;
    auto key = std::make_pair(f.d(), m.serialize());
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;

    auto sd = std::make_unique<ShintaniData>();
    sd->field = &f;
    sd->modulus = m;
    // minimal positive integers with M1 * 1 and M2 * eps_+ inside m
    long M1 = m.a().get_si();
    FieldElement eps = f.tp_unit();
    long M2 = 0;
    for (long t = 1; t <= M1 * m.c().get_si() + 1; ++t) {
        if (m.contains(eps * f.from_rational(t))) {
            M2 = t;
            break;
        }
    }
    if (M2 == 0) fail(errc::internal_error, "cone generator scaling not found");
    sd->w1 = f.from_rational(M1);
    sd->w2 = eps * f.from_rational(M2);
    // lattice Z w1 + Z w2 in coordinates: columns (M1, 0), (M2*ea, M2*eb)
    Int ea = rat_num(eps.a()), eb = rat_num(eps.b());
    Int t12 = M2 * ea, t22 = M2 * eb;
    ResidueRing R(f, m);
    // coset representatives (i, j), 0 <= i < M1, 0 <= j < |t22|
    for (Int i = 0; i < M1; ++i) {
        for (Int j = 0; j < abs(t22); ++j) {
            auto residue = R.reduce(i, j);
            if (!R.is_unit(residue)) continue;
            // coordinates of i + j w in the basis (w1, w2)
            Rat beta = make_rat(j, t22);
            Rat alpha = (Rat(i) - beta * Rat(t12)) / Rat(M1);
            Rat a1 = alpha - Rat(rat_ceil(alpha)) + 1; // (0, 1]
            Rat b1 = beta - Rat(rat_floor(beta));      // [0, 1)
            sd->cosets[R.index_of(residue)].emplace_back(a1, b1);
        }
    }
    const ShintaniData& ref = *sd;
    cache[key] = std::move(sd);
    return ref;
}

// ---------------------------------------------------------------------------
// Shintani cone zeta at non-positive integers

Rat shintani_cone_zeta(const FieldElement& w1, const FieldElement& w2, const Rat& x1,
                       const Rat& x2, long k) {
    if (k < 1) fail(errc::unsupported_argument, "cone zeta needs k >= 1");
    const QuadField& f = w1.field();
    static thread_local std::vector<Rat> bern;
    if ((long)bern.size() < 2 * k + 1) bern = bernoulli_numbers(2 * (int)k + 2);
    // V_j(u) = w_j + u * conj(w_j); Taylor coefficients of V1^{p-1} V2^{q-1}
    // up to degree k-1, computed in F; the swapped-embedding half is the
    // conjugate, so the total is a trace.
    FieldElement A1 = w1, B1 = w1.conj(), A2 = w2, B2 = w2.conj();
    auto taylor_pow = [&](const FieldElement& A, const FieldElement& B, long e) {
        // coefficients of (A + B u)^e up to degree k-1 (e >= -1)
        std::vector<FieldElement> c((size_t)k, f.from_rational(0));
        if (e == -1) {
            // 1/(A+Bu) = sum (-1)^i B^i A^{-i-1} u^i
            FieldElement Ainv = f.from_rational(1) / A;
            FieldElement cur = Ainv;
            for (long i = 0; i < k; ++i) {
                c[i] = cur;
                cur = cur * B * Ainv;
                cur = -cur;
            }
        } else {
            Rat binom = 1;
            FieldElement Apow = A.pow(e); // A^{e-i} B^i, i <= min(e, k-1)
            FieldElement cur = Apow;
            for (long i = 0; i <= std::min(e, k - 1); ++i) {
                c[i] = cur * f.from_rational(binom);
                binom = binom * (e - i) / (i + 1);
                if (i + 1 <= std::min(e, k - 1)) cur = (cur / A) * B;
            }
        }
        return c;
    };
    FieldElement S = f.from_rational(0);
    std::vector<Rat> fact(2 * k + 1);
    fact[0] = 1;
    for (long i = 1; i <= 2 * k; ++i) fact[i] = fact[i - 1] * i;
    for (long p = 0; p <= 2 * k; ++p) {
        long q = 2 * k - p;
        Rat bp = bernoulli_poly((int)p, 1 - x1, bern);
        Rat bq = bernoulli_poly((int)q, 1 - x2, bern);
        if (bp == 0 || bq == 0) continue;
        auto c1 = taylor_pow(A1, B1, p - 1);
        auto c2 = taylor_pow(A2, B2, q - 1);
        FieldElement coef = f.from_rational(0);
        for (long i = 0; i < k; ++i) coef = coef + c1[i] * c2[k - 1 - i];
        S = S + coef * f.from_rational(bp / fact[p] * bq / fact[q]);
    }
    // zeta = ((k-1)!^2 / 2) * (S + conj(S)) = ((k-1)!^2 / 2) * Tr(S)
    Rat tr = S.trace();
    return fact[k - 1] * fact[k - 1] / 2 * tr;
}

namespace {

// cone-zeta sums per unit residue class, shared across the characters of a
// common modulus; keyed by (d, modulus, k)
const std::map<long, Rat>& shintani_class_sums(const QuadField& f, const OIdeal& m, long k) {
    static std::mutex mutex;
    std::lock_guard<std::mutex> lock(mutex);
    static std::map<std::tuple<long, std::string, long>, std::unique_ptr<std::map<long, Rat>>> cache;
    auto key = std::make_tuple(f.d(), m.serialize(), k);
    auto it = cache.find(key);
    if (it != cache.end()) return *it->second;
    const ShintaniData& sd = ShintaniData::get(f, m);
    auto sums = std::make_unique<std::map<long, Rat>>();
    for (auto& [ridx, pts] : sd.cosets) {
        Rat sum = 0;
        for (auto& [x1, x2] : pts) sum += shintani_cone_zeta(sd.w1, sd.w2, x1, x2, k);
        (*sums)[ridx] = sum;
    }
    const auto& ref = *sums;
    cache[key] = std::move(sums);
    return ref;
}

} // namespace

CycloNumber l_value_nonpositive(const RayCharacter& chi, long s) {
    if (s > 0) fail(errc::unsupported_argument, "only non-positive integer arguments");
    long k = 1 - s;
    if (k == 1 && chi.is_trivial())
        fail(errc::unsupported_argument, "s = 0 is not exposed for the trivial character");
    const QuadField& f = chi.group().field();
    const auto& sums = shintani_class_sums(f, chi.modulus(), k);
    Int a = chi.modulus().a();
    CycloNumber total = CycloNumber::zero();
    for (auto& [ridx, sum] : sums) {
        if (sum == 0) continue;
        Int y = Int(ridx) / a, x = Int(ridx) % a;
        CycloNumber v = chi.eval_pair({x, y}, 1, 1);
        total += v * CycloNumber(sum);
    }
    return total.minimize_level();
}

// ---------------------------------------------------------------------------
// numeric oracles

LNumericResult l_value_numeric_direct(const RayCharacter& chi, std::complex<double> s,
                                      long terms) {
    if (terms <= 0) return {0.0, 0.0};
    const QuadField& f = chi.group().field();
    const IdealTable& tab = IdealTable::get(f, terms);
    // modulus-level values: zero out entries not coprime to the modulus
    RayCharacter prim = chi.primitivize();
    std::vector<std::complex<double>> vals = tab.character_values(chi);
    const auto& entries = tab.entries();
    std::complex<double> acc = 0.0;
    for (size_t i = 0; i < entries.size(); ++i) {
        if (vals[i] == std::complex<double>(0.0)) continue;
        bool coprime = true;
        if (!(prim.modulus() == chi.modulus())) {
            for (auto& [pi, e] : entries[i].factors)
                if (!tab.primes()[pi].is_coprime_to(chi.modulus())) {
                    coprime = false;
                    break;
                }
        }
        if (!coprime) continue;
        acc += vals[i] * std::exp(-s * std::log((double)entries[i].norm));
    }
    // crude tail estimate: sum_{n > terms} 4 d(n) n^{-Re s}
    double re = s.real();
    double tail = (re > 1.0) ? 8.0 * std::log((double)terms + 2.0) *
                                   std::pow((double)terms, 1.0 - re) / (re - 1.0)
                             : HUGE_VAL;
    return {acc, tail};
}

std::complex<double> euler_product_numeric(const RayCharacter& chi, std::complex<double> s,
                                           long bound) {
    const QuadField& f = chi.group().field();
    RayCharacter prim = chi.primitivize();
    std::complex<double> acc = 1.0;
    for (auto& q : f.primes_up_to(Int(bound))) {
        std::complex<double> cv = 0.0;
        if (q.is_coprime_to(chi.modulus()))
            cv = prim.eval_class(prim.group().dlog_ideal(q)).embed();
        double nq = to_double(q.norm());
        acc *= 1.0 / (1.0 - cv * std::exp(-s * std::log(nq)));
    }
    return acc;
}

// --- Hurwitz zeta and the Dedekind zeta factorization over Q ---------------

double hurwitz_zeta(double s, double x) {
    if (s == 1.0) fail(errc::unsupported_argument, "pole at s = 1");
    const int N = 25;
    const int M = 10;
    static const double bern2[] = {1.0 / 6,  -1.0 / 30,  1.0 / 42,  -1.0 / 30,  5.0 / 66,
                                   -691.0 / 2730, 7.0 / 6, -3617.0 / 510, 43867.0 / 798,
                                   -174611.0 / 330};
    double acc = 0;
    for (int n = 0; n < N; ++n) acc += std::pow(n + x, -s);
    double Nx = N + x;
    acc += std::pow(Nx, 1.0 - s) / (s - 1.0);
    acc += 0.5 * std::pow(Nx, -s);
    // Euler-Maclaurin correction terms
    double poch = s; // (s)_{2j-1} running product
    double npow = std::pow(Nx, -s - 1.0);
    double fact2 = 2.0;
    for (int j = 1; j <= M; ++j) {
        acc += bern2[j - 1] / fact2 * poch * npow;
        // update: multiply pochhammer by (s+2j-1)(s+2j), power by Nx^{-2}, fact by (2j+1)(2j+2)
        poch *= (s + 2 * j - 1) * (s + 2 * j);
        npow /= Nx * Nx;
        fact2 *= (2 * j + 1) * (2 * j + 2);
    }
    return acc;
}

double dedekind_zeta_numeric(const QuadField& f, double s) {
    long D = f.disc();
    // zeta(s) * L(s, chi_D) with the Kronecker character mod D
    double zeta = hurwitz_zeta(s, 1.0);
    double l = 0;
    for (long a = 1; a <= D; ++a) {
        int chi = mpz_kronecker(Int(D).get_mpz_t(), Int(a).get_mpz_t());
        if (chi == 0) continue;
        l += chi * hurwitz_zeta(s, (double)a / (double)D) * std::pow((double)D, -s);
    }
    return zeta * l;
}

// --- completed L-function with Bessel-smoothed sums -------------------------

namespace {

// inverse Mellin kernel of Gamma_R(z + r1) Gamma_R(z + r2)
double kernel_phi(int r1, int r2, double y) {
    double u = 2 * M_PI * y;
    if (r1 + r2 == 1) return 2.0 * std::exp(-u);
    if (u > 600.0) return 0.0;
    double k0 = std::cyl_bessel_k(0.0, u);
    if (r1 + r2 == 0) return 4.0 * k0;
    return 4.0 * y * k0; // r = (1,1)
}

// G_s(x) = int_1^inf phi(x t) t^{s-1} dt = x^{-s} int_x^inf phi(u) u^{s-1} du,
// integrated on a log scale near 0 where the Bessel kernel is log-singular
double incomplete_kernel(int r1, int r2, double s, double x) {
    static const double gl_x[8] = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                   -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                   0.7966664774136267,  0.9602898564975363};
    static const double gl_w[8] = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                   0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                   0.2223810344533745, 0.1012285362903763};
    auto panels = [&](double a, double b, double width, auto&& fn) {
        double total = 0;
        long n = std::max(1L, (long)std::ceil((b - a) / width));
        double h = (b - a) / (double)n;
        for (long p = 0; p < n; ++p) {
            double mid = a + (p + 0.5) * h, half = 0.5 * h;
            double acc = 0;
            for (int i = 0; i < 8; ++i) acc += gl_w[i] * fn(mid + half * gl_x[i]);
            total += acc * half;
        }
        return total;
    };
    double total = 0;
    double lo = x;
    if (x < 1.0) {
        // u = x e^v on [x, 1]
        double L = std::log(1.0 / x);
        total += panels(0.0, L, 0.20, [&](double v) {
            double u = x * std::exp(v);
            return kernel_phi(r1, r2, u) * std::pow(u, s);
        });
        lo = 1.0;
    }
    double hi = std::max(lo + 0.5, 80.0 / (2 * M_PI)); // e^{-2 pi u} below 1e-34 past here
    total += panels(lo, hi, 0.20,
                    [&](double u) { return kernel_phi(r1, r2, u) * std::pow(u, s - 1.0); });
    return std::pow(x, -s) * total;
}

double gamma_r(double s) {
    double half = s / 2.0;
    if (half <= 0.0 && half == std::floor(half)) return HUGE_VAL; // pole
    return std::pow(M_PI, -half) * std::tgamma(half);
}

} // namespace

LNumericResult l_value_numeric_continued(const RayCharacter& chi, double s, long terms) {
    const QuadField& f = chi.group().field();
    if (chi.is_trivial() && chi.modulus().is_ring()) {
        double v = dedekind_zeta_numeric(f, s);
        return {{v, 0.0}, 1e-10};
    }
    if (!chi.is_primitive()) fail(errc::not_primitive, "continuation needs a primitive character");
    auto r = chi.sign();
    long nf = rat_num(chi.conductor().norm()).get_si();
    double A = std::sqrt((double)f.disc() * (double)nf);
    // root number from the exact Gauss sum
    std::complex<double> tau = gauss_sum(chi).embed();
    std::complex<double> i_pow = std::pow(std::complex<double>(0, 1), (double)(r[0] + r[1]));
    std::complex<double> eps = tau / (i_pow * std::sqrt((double)nf));

    long cutoff = std::min<long>(terms, (long)(A * 9.0) + 40);
    const IdealTable& tab = IdealTable::get(f, cutoff);
    std::vector<std::complex<double>> av = tab.character_values(chi);
    RayCharacter inv = chi.inverse();
    std::vector<std::complex<double>> bv = tab.character_values(inv);

    std::complex<double> lambda = 0.0;
    const auto& entries = tab.entries();
    for (size_t i = 0; i < entries.size(); ++i) {
        double x = (double)entries[i].norm / A;
        if (av[i] != std::complex<double>(0.0))
            lambda += av[i] * incomplete_kernel(r[0], r[1], s, x);
        if (bv[i] != std::complex<double>(0.0))
            lambda += eps * bv[i] * incomplete_kernel(r[0], r[1], 1.0 - s, x);
    }
    double g = gamma_r(s + r[0]) * gamma_r(s + r[1]);
    if (std::isinf(g)) return {{0.0, 0.0}, 1e-12};
    std::complex<double> value = lambda / (std::pow(A, s) * g);
    double err = std::exp(-2 * M_PI * (cutoff + 1) / A) * 10.0 + 1e-12;
    return {value, err};
}

} // namespace eiscong
