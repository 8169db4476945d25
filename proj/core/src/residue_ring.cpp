#include "eiscong/residue_ring.hpp"

#include <algorithm>

namespace eiscong {

ResidueRing::ResidueRing(const QuadField& f, const OIdeal& m) : field_(&f), m_(m) {
    if (!m.is_integral()) fail(errc::not_integral, "modulus must be integral");
    if (m.norm() == 0) fail(errc::zero_modulus, "zero modulus");
    a_ = m.a();
    b_ = m.b();
    c_ = m.c();
    for (auto& [q, e] : m.factor()) prime_divisors_.push_back(q);
}

ResidueRing::Elem ResidueRing::reduce(const Int& x, const Int& y) const {
    Int yr = fmod(y, c_);
    Int q = (y - yr) / c_;
    Int xr = fmod(x - q * b_, a_);
    return {xr, yr};
}

ResidueRing::Elem ResidueRing::reduce(const FieldElement& e) const {
    if (!e.is_integral()) fail(errc::not_integral, "non-integral element");
    return reduce(rat_num(e.a()), rat_num(e.b()));
}

ResidueRing::Elem ResidueRing::add(const Elem& u, const Elem& v) const {
    return reduce(u.first + v.first, u.second + v.second);
}

ResidueRing::Elem ResidueRing::neg(const Elem& u) const { return reduce(-u.first, -u.second); }

ResidueRing::Elem ResidueRing::mul(const Elem& u, const Elem& v) const {
    Int t = field_->trace_omega(), n = field_->norm_omega();
    Int x = u.first * v.first - n * u.second * v.second;
    Int y = u.first * v.second + u.second * v.first + t * u.second * v.second;
    return reduce(x, y);
}

ResidueRing::Elem ResidueRing::pow(Elem base, Int e) const {
    Elem r = one();
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
        base = mul(base, base);
        e >>= 1;
    }
    return r;
}

bool ResidueRing::is_unit(const Elem& u) const {
    FieldElement x = lift(u);
    for (auto& q : prime_divisors_)
        if (q.contains(x)) return false;
    return true;
}

ResidueRing::Elem ResidueRing::inverse(const Elem& u) const {
    // solve u * v = 1 + lattice(m) over Z: unknowns v = (v1, v2) and lattice coords
    Int t = field_->trace_omega(), n = field_->norm_omega();
    Int u1 = u.first, u2 = u.second;
    // columns: v1, v2, lattice a, lattice (b + c w)
    // u*(v1 + v2 w) = u1 v1 - n u2 v2 + (u1 v2 + u2 v1 + t u2 v2) w
    std::vector<std::vector<Int>> A{{u1, -n * u2, a_, b_}, {u2, u1 + t * u2, Int(0), c_}};
    // brute extended solve: iterate candidates via the HNF-free approach:
    // use the generic 2x4 integer solve from complete_to_sl2-style elimination
    // (reimplemented compactly here)
    size_t cols = 4;
    std::vector<std::vector<Int>> U(cols, std::vector<Int>(cols, Int(0)));
    for (size_t i = 0; i < cols; ++i) U[i][i] = 1;
    size_t pivot = 0;
    for (size_t r = 0; r < 2 && pivot < cols; ++r) {
        while (true) {
            size_t nz = cols;
            for (size_t j = pivot + 1; j < cols; ++j)
                if (A[r][j] != 0) {
                    nz = j;
                    break;
                }
            if (nz == cols) break;
            if (A[r][pivot] == 0) {
                for (size_t i = 0; i < 2; ++i) std::swap(A[i][pivot], A[i][nz]);
                for (size_t i = 0; i < cols; ++i) std::swap(U[i][pivot], U[i][nz]);
                continue;
            }
            Int g, s, tt;
            mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), tt.get_mpz_t(), A[r][pivot].get_mpz_t(),
                       A[r][nz].get_mpz_t());
            Int q1 = A[r][pivot] / g, q2 = A[r][nz] / g;
            for (size_t i = 0; i < 2; ++i) {
                Int cp = A[i][pivot], cz = A[i][nz];
                A[i][pivot] = s * cp + tt * cz;
                A[i][nz] = q1 * cz - q2 * cp;
            }
            for (size_t i = 0; i < cols; ++i) {
                Int cp = U[i][pivot], cz = U[i][nz];
                U[i][pivot] = s * cp + tt * cz;
                U[i][nz] = q1 * cz - q2 * cp;
            }
        }
        if (A[r][pivot] != 0) ++pivot;
    }
    Int h00 = A[0][0];
    if (h00 == 0 || abs(h00) != 1) fail(errc::division_by_zero, "element is not a unit");
    Int w0 = (h00 == 1) ? 1 : -1;
    Int rem = -A[1][0] * w0;
    Int h11 = A[1][1], w1 = 0;
    if (h11 == 0) {
        if (rem != 0) fail(errc::division_by_zero, "element is not a unit");
    } else {
        if (!mpz_divisible_p(rem.get_mpz_t(), h11.get_mpz_t()))
            fail(errc::division_by_zero, "element is not a unit");
        w1 = rem / h11;
    }
    Int v1 = U[0][0] * w0 + U[0][1] * w1;
    Int v2 = U[1][0] * w0 + U[1][1] * w1;
    Elem inv = reduce(v1, v2);
    if (mul(u, inv) != one()) fail(errc::internal_error, "inverse verification failed");
    return inv;
}

std::vector<ResidueRing::Elem> ResidueRing::elements() const {
    std::vector<Elem> out;
    out.reserve((size_t)size().get_ui());
    for (Int y = 0; y < c_; ++y)
        for (Int x = 0; x < a_; ++x) out.push_back({x, y});
    return out;
}

std::vector<ResidueRing::Elem> ResidueRing::units() const {
    std::vector<Elem> out;
    for (auto& e : elements())
        if (is_unit(e)) out.push_back(e);
    return out;
}

Int ResidueRing::unit_count() const {
    Int n = 1;
    for (auto& [q, e] : m_.factor()) {
        Int nq = rat_num(q.norm());
        n *= pow_int(nq, (unsigned long)(e - 1)) * (nq - 1);
    }
    return n;
}

long ResidueRing::index_of(const Elem& u) const {
    return (long)(u.second.get_si() * a_.get_si() + u.first.get_si());
}

FieldElement ResidueRing::lift(const Elem& u) const {
    return field_->element(Rat(u.first), Rat(u.second));
}

} // namespace eiscong
