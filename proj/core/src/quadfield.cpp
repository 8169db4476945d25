#include "eiscong/quadfield.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <sstream>

#include "eiscong/residue_ring.hpp"

namespace eiscong {

// ---------------------------------------------------------------------------
// FieldElement

FieldElement::FieldElement(const QuadField& f, Rat a, Rat b)
    : field_(&f), a_(std::move(a)), b_(std::move(b)) {}

const QuadField& FieldElement::field() const {
    if (!field_) fail(errc::internal_error, "uninitialized field element");
    return *field_;
}

Rat FieldElement::norm() const {
    const QuadField& f = field();
    return a_ * a_ + a_ * b_ * f.trace_omega() + b_ * b_ * f.norm_omega();
}

Rat FieldElement::trace() const { return 2 * a_ + Rat(field().trace_omega()) * b_; }

FieldElement FieldElement::conj() const {
    return FieldElement(field(), a_ + Rat(field().trace_omega()) * b_, -b_);
}

bool FieldElement::is_integral() const { return rat_den(a_) == 1 && rat_den(b_) == 1; }

std::array<int, 2> FieldElement::signs() const {
    // alpha = (u + v*sqrt(disc))/2 with u = 2a + t*b, v = b
    const QuadField& f = field();
    Rat u = 2 * a_ + Rat(f.trace_omega()) * b_;
    auto sign_of = [&](const Rat& uu, const Rat& vv) -> int {
        int su = sgn(uu), sv = sgn(vv);
        if (su == 0 && sv == 0) return 0;
        if (su >= 0 && sv >= 0) return 1;
        if (su <= 0 && sv <= 0) return -1;
        int sc = sgn(uu * uu - vv * vv * f.disc());
        if (su > 0) return sc > 0 ? 1 : -1;
        return sc > 0 ? -1 : 1;
    };
    return {sign_of(u, b_), sign_of(u, -b_)};
}

bool FieldElement::totally_positive() const {
    auto s = signs();
    return s[0] > 0 && s[1] > 0;
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    return FieldElement(field(), a_ + o.a_, b_ + o.b_);
}
FieldElement FieldElement::operator-(const FieldElement& o) const {
    return FieldElement(field(), a_ - o.a_, b_ - o.b_);
}
FieldElement FieldElement::operator*(const FieldElement& o) const {
    const QuadField& f = field();
    Rat a = a_ * o.a_ - Rat(f.norm_omega()) * b_ * o.b_;
    Rat b = a_ * o.b_ + b_ * o.a_ + Rat(f.trace_omega()) * b_ * o.b_;
    return FieldElement(f, a, b);
}
FieldElement FieldElement::operator/(const FieldElement& o) const {
    Rat n = o.norm();
    if (n == 0) fail(errc::division_by_zero, "division by zero field element");
    FieldElement num = *this * o.conj();
    return FieldElement(field(), num.a() / n, num.b() / n);
}
FieldElement FieldElement::operator-() const { return FieldElement(field(), -a_, -b_); }

bool FieldElement::operator==(const FieldElement& o) const { return a_ == o.a_ && b_ == o.b_; }

FieldElement FieldElement::pow(long e) const {
    FieldElement base = *this;
    if (e < 0) {
        base = field().from_rational(1) / base;
        e = -e;
    }
    FieldElement r = field().from_rational(1);
    while (e) {
        if (e & 1) r = r * base;
        base = base * base;
        e >>= 1;
    }
    return r;
}

double FieldElement::embed1() const {
    const QuadField& f = field();
    double w1 = (f.trace_omega() + std::sqrt((double)f.disc())) / 2.0;
    return to_double(a_) + to_double(b_) * w1;
}
double FieldElement::embed2() const {
    const QuadField& f = field();
    double w2 = (f.trace_omega() - std::sqrt((double)f.disc())) / 2.0;
    return to_double(a_) + to_double(b_) * w2;
}

std::string FieldElement::str() const {
    std::ostringstream os;
    os << to_string(a_);
    if (b_ != 0) os << (sgn(b_) > 0 ? "+" : "") << to_string(b_) << "*w";
    return os.str();
}

// ---------------------------------------------------------------------------
// HNF of a rank-2 Z-module in coordinates (x, y) <-> x + y*omega

namespace {

struct Hnf {
    Int a, b, c;
};

Hnf hnf_of(const std::vector<std::pair<Int, Int>>& gens) {
    Int u = 0, v = 0;
    for (auto& [x, y] : gens) {
        if (y == 0) continue;
        if (v == 0) {
            u = x;
            v = y;
            continue;
        }
        Int g, s, t;
        mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), v.get_mpz_t(), y.get_mpz_t());
        u = s * u + t * x;
        v = g;
    }
    if (v < 0) {
        v = -v;
        u = -u;
    }
    Int a = 0;
    for (auto& [x, y] : gens) {
        Int x_red = (v == 0) ? x : Int(x - (y / v) * u);
        if (x_red != 0) a = (a == 0) ? Int(abs(x_red)) : gcd(a, x_red);
    }
    if (v == 0 || a == 0) fail(errc::zero_ideal, "module of rank < 2");
    return {a, fmod(u, a), v};
}

} // namespace

// ---------------------------------------------------------------------------
// OIdeal

void OIdeal::normalize() {
    if (a_ <= 0 || c_ <= 0 || den_ <= 0) fail(errc::internal_error, "bad HNF state");
    b_ = fmod(b_, a_);
    Int g = gcd(gcd(a_, b_), gcd(c_, den_));
    if (g > 1) {
        a_ /= g;
        b_ /= g;
        c_ /= g;
        den_ /= g;
    }
}

OIdeal OIdeal::from_hnf(const QuadField& f, Int a, Int b, Int c, Int den) {
    OIdeal I;
    I.field_ = &f;
    I.a_ = std::move(a);
    I.b_ = std::move(b);
    I.c_ = std::move(c);
    I.den_ = std::move(den);
    I.normalize();
    auto contains_xy = [&](const Int& x, const Int& y) {
        if (!mpz_divisible_p(y.get_mpz_t(), I.c_.get_mpz_t())) return false;
        Int x2 = x - y / I.c_ * I.b_;
        return mpz_divisible_p(x2.get_mpz_t(), I.a_.get_mpz_t()) != 0;
    };
    Int t = f.trace_omega(), n = f.norm_omega();
    // closure under omega: w*a and w*(b + c*w) stay inside
    if (!contains_xy(Int(0), I.a_) || !contains_xy(-n * I.c_, I.b_ + t * I.c_))
        fail(errc::internal_error, "HNF module is not an O_F-ideal");
    return I;
}

OIdeal OIdeal::from_basis(const QuadField& f, std::vector<std::pair<Int, Int>> gens, Int den) {
    Hnf h = hnf_of(gens);
    return from_hnf(f, h.a, h.b, h.c, den);
}

OIdeal OIdeal::principal(const QuadField& f, const FieldElement& alpha) {
    if (alpha.is_zero()) fail(errc::zero_ideal, "principal ideal of zero");
    return generated_by(f, {alpha});
}

OIdeal OIdeal::ring_of_integers(const QuadField& f) { return from_hnf(f, 1, 0, 1, 1); }

OIdeal OIdeal::generated_by(const QuadField& f, const std::vector<FieldElement>& gens) {
    Int den = 1;
    for (auto& g : gens)
        if (!g.is_zero()) den = lcm(den, lcm(rat_den(g.a()), rat_den(g.b())));
    std::vector<std::pair<Int, Int>> rows;
    Int t = f.trace_omega(), n = f.norm_omega();
    for (auto& g : gens) {
        if (g.is_zero()) continue;
        Int x = rat_num(g.a() * den), y = rat_num(g.b() * den);
        rows.push_back({x, y});
        rows.push_back({-n * y, x + t * y});
    }
    if (rows.empty()) fail(errc::zero_ideal, "ideal generated by zero");
    return from_basis(f, std::move(rows), den);
}

const QuadField& OIdeal::field() const {
    if (!field_) fail(errc::internal_error, "uninitialized ideal");
    return *field_;
}

bool OIdeal::is_ring() const { return a_ == 1 && b_ == 0 && c_ == 1 && den_ == 1; }

Rat OIdeal::norm() const { return make_rat(a_ * c_, den_ * den_); }

OIdeal OIdeal::operator*(const OIdeal& o) const {
    const QuadField& f = field();
    Int t = f.trace_omega(), n = f.norm_omega();
    auto mul_xy = [&](const Int& x1, const Int& y1, const Int& x2,
                      const Int& y2) -> std::pair<Int, Int> {
        return {x1 * x2 - n * y1 * y2, x1 * y2 + x2 * y1 + t * y1 * y2};
    };
    std::vector<std::pair<Int, Int>> rows;
    rows.push_back(mul_xy(a_, 0, o.a_, 0));
    rows.push_back(mul_xy(a_, 0, o.b_, o.c_));
    rows.push_back(mul_xy(b_, c_, o.a_, 0));
    rows.push_back(mul_xy(b_, c_, o.b_, o.c_));
    return from_basis(f, std::move(rows), den_ * o.den_);
}

OIdeal OIdeal::operator+(const OIdeal& o) const {
    Int den = lcm(den_, o.den_);
    Int s1 = den / den_, s2 = den / o.den_;
    std::vector<std::pair<Int, Int>> rows{{a_ * s1, Int(0)},
                                          {b_ * s1, c_ * s1},
                                          {o.a_ * s2, Int(0)},
                                          {o.b_ * s2, o.c_ * s2}};
    return from_basis(field(), std::move(rows), den);
}

OIdeal OIdeal::conj() const {
    const QuadField& f = field();
    Int t = f.trace_omega();
    std::vector<std::pair<Int, Int>> rows{{a_, Int(0)}, {b_ + t * c_, -c_}};
    return from_basis(f, std::move(rows), den_);
}

OIdeal OIdeal::inverse() const {
    // I * conj(I) = (N(I))
    OIdeal r = conj();
    Rat n = norm();
    r.a_ *= rat_den(n);
    r.b_ *= rat_den(n);
    r.c_ *= rat_den(n);
    r.den_ *= rat_num(n);
    r.normalize();
    return r;
}

OIdeal OIdeal::intersect(const OIdeal& o) const { return (*this * o) * (*this + o).inverse(); }

OIdeal OIdeal::pow(long e) const {
    if (e == 0) return ring_of_integers(field());
    OIdeal base = e > 0 ? *this : inverse();
    long k = e > 0 ? e : -e;
    OIdeal r = ring_of_integers(field());
    while (k) {
        if (k & 1) r = r * base;
        base = base * base;
        k >>= 1;
    }
    return r;
}

bool OIdeal::operator==(const OIdeal& o) const {
    return a_ == o.a_ && b_ == o.b_ && c_ == o.c_ && den_ == o.den_;
}

bool OIdeal::operator<(const OIdeal& o) const {
    Rat n1 = norm(), n2 = o.norm();
    if (n1 != n2) return n1 < n2;
    if (a_ != o.a_) return a_ < o.a_;
    if (b_ != o.b_) return b_ < o.b_;
    if (c_ != o.c_) return c_ < o.c_;
    return den_ < o.den_;
}

bool OIdeal::contains(const FieldElement& x) const {
    Rat xa = x.a() * den_, xb = x.b() * den_;
    if (rat_den(xa) != 1 || rat_den(xb) != 1) return false;
    Int u = rat_num(xa), v = rat_num(xb);
    if (!mpz_divisible_p(v.get_mpz_t(), c_.get_mpz_t())) return false;
    Int u2 = u - v / c_ * b_;
    return mpz_divisible_p(u2.get_mpz_t(), a_.get_mpz_t()) != 0;
}

bool OIdeal::divides(const OIdeal& o) const {
    const QuadField& f = field();
    FieldElement g1 = f.element(make_rat(o.a_, o.den_), Rat(0));
    FieldElement g2 = f.element(make_rat(o.b_, o.den_), make_rat(o.c_, o.den_));
    return contains(g1) && contains(g2);
}

bool OIdeal::is_coprime_to(const OIdeal& o) const { return (*this + o).is_ring(); }

long OIdeal::valuation_at(const OIdeal& prime) const {
    if (den_ != 1) {
        // the stored HNF module is den * I, an integral ideal
        OIdeal numer = *this;
        Int d = den_;
        numer.den_ = 1;
        numer.normalize();
        // prime cap Z = (p) with p = prime.a()
        Int p = prime.a_;
        long e = (Int(field().disc()) % p == 0) ? 2 : 1;
        return numer.valuation_at(prime) - e * ((d % p == 0) ? valuation(d, p) : 0);
    }
    long v = 0;
    OIdeal cur = *this;
    OIdeal pinv = prime.inverse();
    while (prime.divides(cur)) {
        cur = cur * pinv;
        ++v;
    }
    return v;
}

std::vector<std::pair<OIdeal, long>> OIdeal::factor() const {
    const QuadField& f = field();
    std::map<OIdeal, long> acc;
    OIdeal numer = *this; // HNF module = den * I
    Int d = den_;
    numer.den_ = 1;
    numer.normalize();
    Int nn = rat_num(numer.norm());
    if (nn != 1)
        for (auto& [p, e] : factor_integer(nn)) {
            auto pf = f.factor_rational_prime(p);
            for (auto& q : pf.primes) {
                long v = numer.valuation_at(q);
                if (v != 0) acc[q] += v;
            }
        }
    if (d != 1)
        for (auto& [p, e] : factor_integer(d)) {
            auto pf = f.factor_rational_prime(p);
            long mult = (pf.type == SplitType::ramified) ? 2 : 1;
            for (auto& q : pf.primes) acc[q] -= mult * e;
        }
    std::vector<std::pair<OIdeal, long>> out;
    for (auto& [q, v] : acc)
        if (v != 0) out.emplace_back(q, v);
    return out;
}

std::string OIdeal::serialize() const {
    std::ostringstream os;
    os << "[[" << a_.get_str() << "," << b_.get_str() << "],[0," << c_.get_str() << "]]/"
       << den_.get_str();
    return os.str();
}

OIdeal OIdeal::parse(const QuadField& f, const std::string& text) {
    auto bad = [&]() { fail(errc::malformed_value, "bad ideal literal: " + text); };
    Int a, b, c, den = 1;
    try {
        size_t p0 = text.find("[[");
        if (p0 == std::string::npos) bad();
        size_t comma1 = text.find(',', p0);
        size_t close1 = text.find(']', comma1);
        size_t zero = text.find("[0,", close1);
        if (comma1 == std::string::npos || close1 == std::string::npos || zero == std::string::npos)
            bad();
        size_t close2 = text.find("]]", zero);
        if (close2 == std::string::npos) bad();
        a = Int(text.substr(p0 + 2, comma1 - p0 - 2));
        b = Int(text.substr(comma1 + 1, close1 - comma1 - 1));
        c = Int(text.substr(zero + 3, close2 - zero - 3));
        size_t slash = text.find('/', close2);
        if (slash != std::string::npos) den = Int(text.substr(slash + 1));
    } catch (const std::invalid_argument&) {
        bad();
    }
    if (a <= 0 || c <= 0 || den <= 0) bad();
    return from_hnf(f, a, b, c, den);
}

// ---------------------------------------------------------------------------
// generator search

namespace {

// visit elements of I with both embeddings in (lo, hi)
template <typename Fn>
void scan_embedding_box(const QuadField& f, const OIdeal& I, double lo, double hi, Fn&& visit) {
    double sd = std::sqrt((double)f.disc());
    double w1 = (f.trace_omega() + sd) / 2.0, w2 = (f.trace_omega() - sd) / 2.0;
    double da = to_double(make_rat(I.a(), I.den()));
    double dc = to_double(make_rat(I.c(), I.den()));
    double ybound = (hi - lo) / (w1 - w2) + 2;
    long ylo = (long)std::floor(-ybound / dc) - 1, yhi = (long)std::ceil(ybound / dc) + 1;
    for (long ys = ylo; ys <= yhi; ++ys) {
        Rat y = make_rat(I.c() * ys, I.den());
        Rat x0 = make_rat(I.b() * ys, I.den());
        double dy = to_double(y);
        double xlo = std::max(lo - dy * w1, lo - dy * w2);
        double xhi = std::min(hi - dy * w1, hi - dy * w2);
        if (xhi < xlo) continue;
        long klo = (long)std::floor((xlo - to_double(x0)) / da) - 1;
        long khi = (long)std::ceil((xhi - to_double(x0)) / da) + 1;
        for (long k = klo; k <= khi; ++k) {
            Rat x = x0 + make_rat(I.a() * k, I.den());
            FieldElement alpha = f.element(x, y);
            if (alpha.is_zero()) continue;
            visit(alpha);
        }
    }
}

} // namespace

FieldElement OIdeal::totally_positive_generator() const {
    const QuadField& f = field();
    Rat nv = norm();
    // some unit translate of a totally positive generator has embedding ratio in
    // [1/u, u] with u = tp_unit, hence trace at most 2 sqrt(N u); scan that box
    double u1 = std::max(f.tp_unit().embed1(), f.tp_unit().embed2());
    double bound = 2.0 * std::sqrt(to_double(nv) * u1) + 2;
    std::optional<FieldElement> best;
    auto better = [&](const FieldElement& cand, const FieldElement& cur) {
        Rat t1 = cand.trace(), t2 = cur.trace();
        if (t1 != t2) return t1 < t2;
        Rat b1 = abs(cand.b()), b2 = abs(cur.b());
        if (b1 != b2) return b1 < b2;
        Rat a1 = abs(cand.a()), a2 = abs(cur.a());
        if (a1 != a2) return a1 < a2;
        if (cand.b() != cur.b()) return cand.b() > cur.b();
        return cand.a() > cur.a();
    };
    scan_embedding_box(f, *this, 0.0, bound, [&](const FieldElement& alpha) {
        if (alpha.norm() != nv || !alpha.totally_positive()) return;
        if (!best || better(alpha, *best)) best = alpha;
    });
    if (!best) fail(errc::narrow_class_number_not_one, "no totally positive generator found");
    return *best;
}

FieldElement OIdeal::any_generator() const {
    const QuadField& f = field();
    Rat nv = norm();
    Rat abs_nv = abs(nv);
    double u1 = std::max(f.tp_unit().embed1(), f.tp_unit().embed2());
    double bound = 2.0 * std::sqrt(to_double(abs_nv) * u1) + 2;
    std::optional<FieldElement> found;
    scan_embedding_box(f, *this, -bound, bound, [&](const FieldElement& alpha) {
        if (found) return;
        if (abs(alpha.norm()) == abs_nv) found = alpha;
    });
    if (!found) fail(errc::narrow_class_number_not_one, "ideal is not principal");
    return *found;
}

// ---------------------------------------------------------------------------
// QuadField

namespace {
std::mutex g_field_mutex;
}

const QuadField& QuadField::make(long d) {
    std::lock_guard<std::mutex> lock(g_field_mutex);
    static std::map<long, std::unique_ptr<QuadField>> cache;
    auto it = cache.find(d);
    if (it != cache.end()) return *it->second;
    std::unique_ptr<QuadField> f(new QuadField());
    f->init(d);
    const QuadField& ref = *f;
    cache[d] = std::move(f);
    return ref;
}

void QuadField::init(long d) {
    if (d <= 1) fail(errc::not_squarefree, "d must be a squarefree integer > 1");
    for (long q = 2; q * q <= d; ++q)
        if (d % (q * q) == 0)
            fail(errc::not_squarefree, "d = " + std::to_string(d) + " is not squarefree");
    d_ = d;
    if (d % 4 == 1) {
        disc_ = d;
        t_ = 1;
        n_ = (1 - d) / 4;
    } else {
        disc_ = 4 * d;
        t_ = 0;
        n_ = -d;
    }
    // fundamental unit: smallest b > 0 with disc*b^2 +- 4 a perfect square
    bool found = false;
    for (long b = 1; b < 20'000'000 && !found; ++b) {
        for (int sign : {-1, +1}) {
            Int val = Int(disc_) * b * b + 4 * sign;
            if (val <= 0) continue;
            Int root = sqrt(val);
            if (root * root != val) continue;
            FieldElement u = element(make_rat(root - t_ * b, 2), Rat(b));
            if (!u.is_integral() || abs(u.norm()) != 1) continue;
            fund_unit_ = u;
            fund_unit_norm_ = (u.norm() == 1) ? 1 : -1;
            found = true;
            break;
        }
    }
    if (!found) fail(errc::internal_error, "fundamental unit search exhausted");
    if (fund_unit_norm_ == 1)
        tp_unit_ = fund_unit_.totally_positive() ? fund_unit_ : -fund_unit_;
    else
        tp_unit_ = fund_unit_ * fund_unit_;
    if (!tp_unit_.totally_positive()) fail(errc::internal_error, "tp unit not totally positive");
    different_gen_ = element(Rat(-t_), Rat(2));
    if (different_gen_.embed1() < 0) different_gen_ = -different_gen_;
    check_narrow_class_number();
}

void QuadField::check_narrow_class_number() const {
    // h^+ = 1 iff h = 1 and N(eps_0) = -1; h = 1 checked on primes below the
    // Minkowski bound
    if (fund_unit_norm_ != -1)
        fail(errc::narrow_class_number_not_one,
             "fundamental unit has norm +1 (h^+ >= 2) for d=" + std::to_string(d_));
    long mink = (long)(std::sqrt((double)disc_) / 2.0);
    for (const OIdeal& q : primes_up_to(Int(mink))) {
        try {
            (void)q.any_generator();
        } catch (const Error&) {
            fail(errc::narrow_class_number_not_one,
                 "non-principal prime of norm " + to_string(rat_num(q.norm())));
        }
    }
}

FieldElement QuadField::sqrt_d() const {
    if (d_ % 4 == 1) return element(make_rat(-1, 1), Rat(2)); // 2*omega - 1
    return omega();
}

OIdeal QuadField::different() const { return OIdeal::principal(*this, different_gen_); }

PrimeFactorization QuadField::factor_rational_prime(const Int& p) const {
    static std::mutex prime_mutex;
    static std::map<std::pair<long, Int>, PrimeFactorization> cache;
    {
        std::lock_guard<std::mutex> lock(prime_mutex);
        auto it = cache.find({d_, p});
        if (it != cache.end()) return it->second;
    }
    if (!is_prime(p)) fail(errc::unsupported_argument, "not a prime: " + to_string(p));
    PrimeFactorization out;
    Int t = t_, n = n_;
    std::vector<Int> roots;
    for (Int r = 0; r < p; ++r) {
        if (fmod(r * r - t * r + n, p) == 0) roots.push_back(r);
        if (roots.size() == 2) break;
    }
    auto prime_at = [&](const Int& r) {
        std::vector<std::pair<Int, Int>> gens{{p, Int(0)}, {Int(0), p}, {-r, Int(1)}, {-n, t - r}};
        return OIdeal::from_basis(*this, std::move(gens), 1);
    };
    if (Int(disc_) % p == 0) {
        out.type = SplitType::ramified;
        out.residue_degree = 1;
        if (roots.empty()) fail(errc::internal_error, "ramified prime without root");
        out.primes = {prime_at(roots[0])};
    } else if (roots.empty()) {
        out.type = SplitType::inert;
        out.residue_degree = 2;
        out.primes = {OIdeal::from_hnf(*this, p, 0, p, 1)};
    } else {
        out.type = SplitType::split;
        out.residue_degree = 1;
        OIdeal q1 = prime_at(roots[0]), q2 = prime_at(roots[1]);
        if (q2 < q1) std::swap(q1, q2);
        out.primes = {q1, q2};
    }
    {
        std::lock_guard<std::mutex> lock(prime_mutex);
        cache[{d_, p}] = out;
    }
    return out;
}

std::vector<OIdeal> QuadField::primes_up_to(const Int& bound) const {
    std::vector<OIdeal> out;
    if (bound < 2) return out;
    long b = (long)bound.get_si();
    for (long p : primes_below(b + 1)) {
        auto pf = factor_rational_prime(Int(p));
        if (pf.type == SplitType::inert) {
            if (Int(p) * p <= bound) out.push_back(pf.primes[0]);
        } else {
            for (auto& q : pf.primes) out.push_back(q);
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::vector<OIdeal> QuadField::ideals_up_to(const Int& bound) const {
    std::vector<OIdeal> primes = primes_up_to(bound);
    std::vector<OIdeal> out{OIdeal::ring_of_integers(*this)};
    Rat rbound{bound};
    for (auto& q : primes) {
        Rat nq = q.norm();
        size_t sz = out.size();
        for (size_t i = 0; i < sz; ++i) {
            OIdeal cur = out[i];
            while (cur.norm() * nq <= rbound) {
                cur = cur * q;
                out.push_back(cur);
            }
        }
    }
    std::sort(out.begin(), out.end());
    return out;
}

std::string QuadField::descriptor() const { return "QF(d=" + std::to_string(d_) + ")"; }

// ---------------------------------------------------------------------------
// SL2 completion

namespace {

struct HnfTransform {
    std::vector<std::vector<Int>> H; // 2 x m, staircase
    std::vector<std::vector<Int>> U; // m x m with A U = H
};

HnfTransform column_hnf(std::vector<std::vector<Int>> A) {
    size_t rows = A.size(), cols = A[0].size();
    std::vector<std::vector<Int>> U(cols, std::vector<Int>(cols, Int(0)));
    for (size_t i = 0; i < cols; ++i) U[i][i] = 1;
    size_t pivot = 0;
    for (size_t r = 0; r < rows && pivot < cols; ++r) {
        while (true) {
            size_t nz = cols;
            for (size_t j = pivot + 1; j < cols; ++j)
                if (A[r][j] != 0) {
                    nz = j;
                    break;
                }
            if (nz == cols) break;
            if (A[r][pivot] == 0) {
                for (size_t i = 0; i < rows; ++i) std::swap(A[i][pivot], A[i][nz]);
                for (size_t i = 0; i < cols; ++i) std::swap(U[i][pivot], U[i][nz]);
                continue;
            }
            Int g, s, t;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), A[r][pivot].get_mpz_t(),
                       A[r][nz].get_mpz_t());
            Int u1 = A[r][pivot] / g, u2 = A[r][nz] / g;
            for (size_t i = 0; i < rows; ++i) {
                Int cp = A[i][pivot], cz = A[i][nz];
                A[i][pivot] = s * cp + t * cz;
                A[i][nz] = u1 * cz - u2 * cp;
            }
            for (size_t i = 0; i < cols; ++i) {
                Int cp = U[i][pivot], cz = U[i][nz];
                U[i][pivot] = s * cp + t * cz;
                U[i][nz] = u1 * cz - u2 * cp;
            }
        }
        if (A[r][pivot] != 0) ++pivot;
    }
    return {A, U};
}

} // namespace

std::pair<FieldElement, FieldElement> complete_to_sl2(const QuadField& f, const FieldElement& x,
                                                      const FieldElement& y) {
    if (!x.is_integral() || !y.is_integral())
        fail(errc::unsupported_argument, "non-integral cusp pair");
    Int t = f.trace_omega(), n = f.norm_omega();
    Int x1 = rat_num(x.a()), x2 = rat_num(x.b());
    Int y1 = rat_num(y.a()), y2 = rat_num(y.b());
    // x*(d1 + d2 w) - y*(b1 + b2 w) = 1, unknowns (d1, d2, b1, b2)
    std::vector<std::vector<Int>> A(2, std::vector<Int>(4));
    A[0] = {x1, -n * x2, -y1, n * y2};
    A[1] = {x2, x1 + t * x2, -y2, -(y1 + t * y2)};
    auto ht = column_hnf(A);
    Int h00 = ht.H[0][0];
    if (abs(h00) != 1) fail(errc::internal_error, "cusp pair not coprime");
    Int w0 = (h00 == 1) ? 1 : -1;
    Int rem = -ht.H[1][0] * w0;
    Int h11 = ht.H[1][1];
    Int w1 = 0;
    if (h11 == 0) {
        if (rem != 0) fail(errc::internal_error, "sl2 completion: rank deficiency");
    } else {
        if (!mpz_divisible_p(rem.get_mpz_t(), h11.get_mpz_t()))
            fail(errc::internal_error, "sl2 completion: no integer solution");
        w1 = rem / h11;
    }
    std::vector<Int> v(4);
    for (size_t i = 0; i < 4; ++i) v[i] = ht.U[i][0] * w0 + ht.U[i][1] * w1;
    FieldElement delta = f.element(Rat(v[0]), Rat(v[1]));
    FieldElement beta = f.element(Rat(v[2]), Rat(v[3]));
    FieldElement det = x * delta - y * beta;
    if (!(det.a() == 1 && det.b() == 0)) fail(errc::internal_error, "sl2 completion failed");
    return {delta, beta};
}

std::string Cusp::str() const {
    if (is_infinity()) return "oo";
    return "(" + x.str() + ")/(" + y.str() + ")";
}

// ---------------------------------------------------------------------------
// cusps of Gamma_1(O_F, n)

std::vector<Cusp> QuadField::cusp_representatives(const OIdeal& n) const {
    if (!n.is_integral()) fail(errc::not_integral, "level must be integral");
    OIdeal six_disc = OIdeal::principal(*this, from_rational(Rat(6 * disc_)));
    if (!n.is_ring() && !n.is_coprime_to(six_disc))
        fail(errc::level_not_coprime, "level must be coprime to 6*disc");
    Rat nn = n.norm();
    if (nn > 2000) fail(errc::unsupported_argument, "level too large for cusp enumeration");
    if (n.is_ring()) {
        // SL2(O_F) acts transitively on P^1(F) when h_F^+ = 1
        Cusp c;
        c.x = from_rational(1);
        c.y = from_rational(0);
        c.beta = from_rational(0);
        c.delta = from_rational(1);
        c.label = "oo";
        return {c};
    }

    ResidueRing R(*this, n);
    auto elems = R.elements();
    long long m = (long long)elems.size();
    auto key = [&](const ResidueRing::Elem& u, const ResidueRing::Elem& v) {
        return R.index_of(u) * m + R.index_of(v);
    };
    std::vector<OIdeal> nprimes;
    for (auto& [q, e] : n.factor()) nprimes.push_back(q);
    auto unimodular = [&](const ResidueRing::Elem& u, const ResidueRing::Elem& v) {
        FieldElement lu = R.lift(u), lv = R.lift(v);
        for (auto& q : nprimes)
            if (q.contains(lu) && q.contains(lv)) return false;
        return true;
    };

    std::map<long long, long long> parent;
    std::function<long long(long long)> find = [&](long long a) -> long long {
        auto it = parent.find(a);
        if (it == parent.end() || it->second == a) return a;
        long long r = find(it->second);
        parent[a] = r;
        return r;
    };
    auto unite = [&](long long a, long long b) {
        long long ra = find(a), rb = find(b);
        if (ra != rb) parent[std::max(ra, rb)] = std::min(ra, rb);
    };

    std::vector<std::pair<ResidueRing::Elem, ResidueRing::Elem>> pairs;
    for (auto& u : elems)
        for (auto& v : elems) {
            if (u == R.zero() && v == R.zero()) continue;
            if (!unimodular(u, v)) continue;
            pairs.emplace_back(u, v);
            parent[key(u, v)] = key(u, v);
        }
    ResidueRing::Elem gen1 = R.reduce(Int(1), Int(0));
    ResidueRing::Elem genw = R.reduce(Int(0), Int(1));
    ResidueRing::Elem um1 = R.reduce(Int(-1), Int(0));
    ResidueRing::Elem ueps = R.reduce(fundamental_unit());
    for (auto& [u, v] : pairs) {
        long long k0 = key(u, v);
        unite(k0, key(R.add(u, R.mul(gen1, v)), v));
        unite(k0, key(R.add(u, R.mul(genw, v)), v));
        unite(k0, key(R.mul(um1, u), R.mul(um1, v)));
        unite(k0, key(R.mul(ueps, u), R.mul(ueps, v)));
    }
    std::map<long long, std::vector<std::pair<ResidueRing::Elem, ResidueRing::Elem>>> orbits;
    for (auto& pr : pairs) orbits[find(key(pr.first, pr.second))].push_back(pr);

    ResidueRing::Elem one = R.one(), zero = R.zero();
    std::vector<Cusp> out;
    for (auto& [root, members] : orbits) {
        auto rep = members.front();
        bool has_inf = false, has_zero = false;
        for (auto& pr : members) {
            if (pr.first == one && pr.second == zero) has_inf = true;
            if (pr.first == zero && pr.second == one) has_zero = true;
            if (key(pr.first, pr.second) < key(rep.first, rep.second)) rep = pr;
        }
        Cusp c;
        if (has_inf) {
            c.x = from_rational(1);
            c.y = from_rational(0);
            c.beta = from_rational(0);
            c.delta = from_rational(1);
            c.label = "oo";
        } else if (has_zero) {
            c.x = from_rational(0);
            c.y = from_rational(1);
            c.beta = from_rational(-1);
            c.delta = from_rational(0);
            c.label = "0";
        } else {
            FieldElement gx = R.lift(rep.first);
            FieldElement gy = R.lift(rep.second);
            FieldElement gn = n.totally_positive_generator();
            auto coprime = [&](const FieldElement& xx, const FieldElement& yy) {
                if (xx.is_zero() && yy.is_zero()) return false;
                if (xx.is_zero()) return abs(yy.norm()) == 1;
                if (yy.is_zero()) return abs(xx.norm()) == 1;
                return OIdeal::generated_by(*this, {xx, yy}).is_ring();
            };
            bool done = false;
            for (int attempt = 0; attempt < 4000 && !done; ++attempt) {
                // deterministic ladder: adjust y (and occasionally x) by multiples of gn
                long sy = attempt % 8, wy = (attempt / 8) % 8, sx = attempt / 64;
                FieldElement xx = gx + gn * element(Rat(sx), Rat(0));
                FieldElement yy = gy + gn * element(Rat(sy), Rat(wy));
                if (coprime(xx, yy)) {
                    auto [delta, beta] = complete_to_sl2(*this, xx, yy);
                    c.x = xx;
                    c.y = yy;
                    c.delta = delta;
                    c.beta = beta;
                    done = true;
                }
            }
            if (!done) fail(errc::internal_error, "cusp lift failed");
            c.label = "(" + gx.str() + ":" + gy.str() + ")";
        }
        out.push_back(std::move(c));
    }
    std::sort(out.begin(), out.end(), [](const Cusp& l, const Cusp& r) {
        auto rank = [](const Cusp& c) { return c.label == "oo" ? 0 : (c.label == "0" ? 1 : 2); };
        if (rank(l) != rank(r)) return rank(l) < rank(r);
        return l.label < r.label;
    });
    return out;
}

} // namespace eiscong
