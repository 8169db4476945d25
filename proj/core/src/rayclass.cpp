#include "eiscong/rayclass.hpp"

#include <algorithm>
#include <sstream>

namespace eiscong {

// ---------------------------------------------------------------------------
// Smith normal form with left transform (class(x) = U x mod diag)

namespace {

struct Snf {
    std::vector<Int> diag;
    std::vector<std::vector<Int>> u;     // rows x rows
    std::vector<std::vector<Int>> u_inv; // rows x rows
};

Snf smith_normal_form(std::vector<std::vector<Int>> a) {
    size_t rows = a.size();
    size_t cols = rows ? a[0].size() : 0;
    Snf out;
    out.u.assign(rows, std::vector<Int>(rows, Int(0)));
    out.u_inv.assign(rows, std::vector<Int>(rows, Int(0)));
    for (size_t i = 0; i < rows; ++i) out.u[i][i] = out.u_inv[i][i] = 1;

    auto row_op = [&](size_t i, size_t j, const Int& q) {
        // row_i -= q * row_j; U_inv col_j += q * col_i
        for (size_t k = 0; k < cols; ++k) a[i][k] -= q * a[j][k];
        for (size_t k = 0; k < rows; ++k) out.u[i][k] -= q * out.u[j][k];
        for (size_t k = 0; k < rows; ++k) out.u_inv[k][j] += q * out.u_inv[k][i];
    };
    auto row_swap = [&](size_t i, size_t j) {
        std::swap(a[i], a[j]);
        std::swap(out.u[i], out.u[j]);
        for (size_t k = 0; k < rows; ++k) std::swap(out.u_inv[k][i], out.u_inv[k][j]);
    };
    auto row_neg = [&](size_t i) {
        for (size_t k = 0; k < cols; ++k) a[i][k] = -a[i][k];
        for (size_t k = 0; k < rows; ++k) out.u[i][k] = -out.u[i][k];
        for (size_t k = 0; k < rows; ++k) out.u_inv[k][i] = -out.u_inv[k][i];
    };
    auto col_op = [&](size_t j, size_t l, const Int& q) {
        for (size_t k = 0; k < rows; ++k) a[k][j] -= q * a[k][l];
    };
    auto col_swap = [&](size_t j, size_t l) {
        for (size_t k = 0; k < rows; ++k) std::swap(a[k][j], a[k][l]);
    };

    size_t t = 0;
    while (t < rows && t < cols) {
        bool any = false;
        size_t pi = t, pj = t;
        for (size_t i = t; i < rows; ++i)
            for (size_t j = t; j < cols; ++j) {
                if (a[i][j] == 0) continue;
                if (!any || abs(a[i][j]) < abs(a[pi][pj])) {
                    pi = i;
                    pj = j;
                    any = true;
                }
            }
        if (!any) break;
        if (pi != t) row_swap(t, pi);
        if (pj != t) col_swap(t, pj);
        bool clean = true;
        for (size_t i = t + 1; i < rows; ++i) {
            if (a[i][t] == 0) continue;
            Int q = fdiv(a[i][t], a[t][t]);
            if (q != 0) row_op(i, t, q);
            if (a[i][t] != 0) clean = false;
        }
        for (size_t j = t + 1; j < cols; ++j) {
            if (a[t][j] == 0) continue;
            Int q = fdiv(a[t][j], a[t][t]);
            if (q != 0) col_op(j, t, q);
            if (a[t][j] != 0) clean = false;
        }
        if (!clean) continue;
        bool fixed = true;
        for (size_t i = t + 1; i < rows && fixed; ++i)
            for (size_t j = t + 1; j < cols && fixed; ++j)
                if (!mpz_divisible_p(a[i][j].get_mpz_t(), a[t][t].get_mpz_t())) {
                    row_op(t, i, Int(-1)); // row_t += row_i, then redo the pivot
                    fixed = false;
                }
        if (!fixed) continue;
        if (a[t][t] < 0) row_neg(t);
        ++t;
    }
    out.diag.assign(rows, Int(0));
    for (size_t i = 0; i < rows && i < cols; ++i) out.diag[i] = a[i][i];
    return out;
}

std::array<long, 4> pack_pair(const ResidueRing::Elem& r, int s1, int s2) {
    return {r.first.get_si(), r.second.get_si(), s1, s2};
}

} // namespace

// ---------------------------------------------------------------------------
// RayClassGroup

std::array<long, 4> RayClassGroup::pack(const ResidueRing::Elem& r, int s1, int s2) const {
    return pack_pair(r, s1, s2);
}

std::shared_ptr<const RayClassGroup> RayClassGroup::make(const QuadField& f, const OIdeal& m) {
    if (!m.is_integral()) fail(errc::not_integral, "modulus must be integral");
    auto g = std::shared_ptr<RayClassGroup>(new RayClassGroup());
    g->field_ = &f;
    g->modulus_ = m;
    g->ring_ = std::make_shared<ResidueRing>(f, m);
    const ResidueRing& R = *g->ring_;

    struct El {
        ResidueRing::Elem r;
        int s1, s2;
    };
    auto mul = [&](const El& x, const El& y) {
        return El{R.mul(x.r, y.r), x.s1 * y.s1, x.s2 * y.s2};
    };
    El id{R.one(), 1, 1};

    std::vector<El> candidates;
    for (auto& u : R.units())
        for (int s1 : {1, -1})
            for (int s2 : {1, -1}) candidates.push_back({u, s1, s2});

    auto& dlog = g->raw_dlog_;
    dlog[pack_pair(id.r, id.s1, id.s2)] = {};
    std::vector<std::vector<long>> relations;
    std::vector<El> gens;
    for (auto& cand : candidates) {
        if (dlog.count(pack_pair(cand.r, cand.s1, cand.s2))) continue;
        El p = cand;
        long e = 1;
        while (!dlog.count(pack_pair(p.r, p.s1, p.s2))) {
            p = mul(p, cand);
            ++e;
        }
        std::vector<long> tail = dlog[pack_pair(p.r, p.s1, p.s2)];
        std::vector<long> rel(gens.size() + 1, 0);
        for (size_t j = 0; j < tail.size(); ++j) rel[j] = -tail[j];
        rel[gens.size()] = e;
        relations.push_back(rel);
        std::vector<std::pair<std::array<long, 4>, std::vector<long>>> snapshot(dlog.begin(),
                                                                                dlog.end());
        El power = cand;
        for (long i = 1; i < e; ++i) {
            for (auto& [key, vec] : snapshot) {
                El h{{Int(key[0]), Int(key[1])}, (int)key[2], (int)key[3]};
                El combined = mul(h, power);
                std::vector<long> v = vec;
                v.resize(gens.size(), 0);
                v.push_back(i);
                dlog[pack_pair(combined.r, combined.s1, combined.s2)] = std::move(v);
            }
            power = mul(power, cand);
        }
        gens.push_back(cand);
    }
    size_t r = gens.size();
    g->raw_rank_ = r;
    for (auto& [key, vec] : dlog) vec.resize(r, 0);
    for (auto& gg : gens) g->raw_gens_.push_back(pack_pair(gg.r, gg.s1, gg.s2));
    if (r == 0) return g;

    std::vector<std::vector<Int>> a(r);
    auto add_col = [&](const std::vector<long>& rel) {
        for (size_t i = 0; i < r; ++i) a[i].push_back(Int(i < rel.size() ? rel[i] : 0));
    };
    for (auto& rel : relations) add_col(rel);
    for (const FieldElement& u : {f.from_rational(-1), f.fundamental_unit()}) {
        auto s = u.signs();
        auto it = dlog.find(pack_pair(R.reduce(u), s[0], s[1]));
        if (it == dlog.end()) fail(errc::internal_error, "unit image missing from dlog table");
        add_col(it->second);
    }
    Snf snf = smith_normal_form(a);
    for (size_t i = 0; i < r; ++i)
        if (snf.diag[i] == 0) fail(errc::internal_error, "ray class group not finite");
    std::vector<size_t> kept;
    for (size_t i = 0; i < r; ++i)
        if (snf.diag[i] > 1) kept.push_back(i);
    for (size_t idx : kept) g->divisors_.push_back(snf.diag[idx]);
    g->snf_u_.assign(kept.size(), std::vector<Int>(r));
    for (size_t k = 0; k < kept.size(); ++k) g->snf_u_[k] = snf.u[kept[k]];
    g->snf_u_inv_.assign(r, std::vector<Int>(kept.size()));
    for (size_t i = 0; i < r; ++i)
        for (size_t k = 0; k < kept.size(); ++k) g->snf_u_inv_[i][k] = snf.u_inv[i][kept[k]];
    return g;
}

Int RayClassGroup::order() const {
    Int n = 1;
    for (auto& d : divisors_) n *= d;
    return n;
}

std::vector<Int> RayClassGroup::project(const std::vector<long>& raw) const {
    std::vector<Int> out(divisors_.size(), Int(0));
    for (size_t i = 0; i < divisors_.size(); ++i) {
        Int acc = 0;
        for (size_t j = 0; j < raw_rank_; ++j) acc += snf_u_[i][j] * raw[j];
        out[i] = fmod(acc, divisors_[i]);
    }
    return out;
}

std::vector<Int> RayClassGroup::dlog_pair(const ResidueRing::Elem& r, int s1, int s2) const {
    auto it = raw_dlog_.find(pack(r, s1, s2));
    if (it == raw_dlog_.end()) fail(errc::internal_error, "dlog of a non-unit residue");
    return project(it->second);
}

std::vector<Int> RayClassGroup::dlog_element(const FieldElement& alpha) const {
    auto s = alpha.signs();
    return dlog_pair(ring_->reduce(alpha), s[0], s[1]);
}

std::vector<Int> RayClassGroup::dlog_ideal(const OIdeal& a) const {
    std::vector<Int> out(divisors_.size(), Int(0));
    if (a.is_ring() || divisors_.empty()) return out;
    if (a.is_integral() && a.is_coprime_to(modulus_)) return dlog_element(a.any_generator());
    for (auto& [q, e] : a.factor()) {
        if (!q.is_coprime_to(modulus_))
            fail(errc::internal_error, "dlog of an ideal sharing a factor with the modulus");
        std::vector<Int> v;
        bool have = false;
        {
            std::lock_guard<std::mutex> lock(cache_mutex_);
            auto it = prime_dlog_cache_.find(q);
            if (it != prime_dlog_cache_.end()) {
                v = it->second;
                have = true;
            }
        }
        if (!have) {
            v = dlog_element(q.totally_positive_generator());
            std::lock_guard<std::mutex> lock(cache_mutex_);
            prime_dlog_cache_[q] = v;
        }
        for (size_t i = 0; i < out.size(); ++i) out[i] = fmod(out[i] + e * v[i], divisors_[i]);
    }
    return out;
}

FieldElement RayClassGroup::find_element(const ResidueRing::Elem& residue, int s1, int s2,
                                         const OIdeal& aux) const {
    const QuadField& f = *field_;
    FieldElement base = ring_->lift(residue);
    FieldElement g1 = f.element(Rat(modulus_.a()), Rat(0));
    FieldElement g2 = f.element(Rat(modulus_.b()), Rat(modulus_.c()));
    for (long radius = 0; radius <= 400; ++radius) {
        for (long i = -radius; i <= radius; ++i) {
            for (long j = -radius; j <= radius; ++j) {
                if (std::max(std::labs(i), std::labs(j)) != radius) continue;
                FieldElement cand =
                    base + g1 * f.element(Rat(i), Rat(0)) + g2 * f.element(Rat(j), Rat(0));
                if (cand.is_zero()) continue;
                auto s = cand.signs();
                if (s[0] != s1 || s[1] != s2) continue;
                OIdeal c = OIdeal::principal(f, cand);
                if (!c.is_coprime_to(modulus_)) continue;
                if (!aux.is_ring() && !c.is_coprime_to(aux)) continue;
                return cand;
            }
        }
    }
    fail(errc::internal_error, "element with prescribed residue and signs not found");
}

const std::vector<ResidueRing::Elem>& RayClassGroup::units_congruent_to_one(
    const OIdeal& mp) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    std::string key = mp.serialize();
    auto it = kernel_units_cache_.find(key);
    if (it != kernel_units_cache_.end()) return it->second;
    const QuadField& f = *field_;
    std::vector<ResidueRing::Elem> out;
    for (auto& u : ring_->units()) {
        FieldElement lu = ring_->lift(u) - f.from_rational(1);
        if (lu.is_zero() || mp.contains(lu)) out.push_back(u);
    }
    return kernel_units_cache_.emplace(key, std::move(out)).first->second;
}

const std::vector<std::pair<OIdeal, long>>& RayClassGroup::modulus_factors() const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    if (!factors_ready_) {
        modulus_factors_ = modulus_.factor();
        factors_ready_ = true;
    }
    return modulus_factors_;
}

FieldElement RayClassGroup::generator_element(size_t i, const OIdeal& aux) const {
    if (i >= divisors_.size()) fail(errc::internal_error, "generator index out of range");
    const ResidueRing& R = *ring_;
    ResidueRing::Elem r = R.one();
    int s1 = 1, s2 = 1;
    for (size_t j = 0; j < raw_rank_; ++j) {
        Int e = snf_u_inv_[j][i];
        if (e == 0) continue;
        ResidueRing::Elem gr{Int(raw_gens_[j][0]), Int(raw_gens_[j][1])};
        int gs1 = (int)raw_gens_[j][2], gs2 = (int)raw_gens_[j][3];
        long ord = 1;
        {
            ResidueRing::Elem p = gr;
            int ps1 = gs1, ps2 = gs2;
            while (!(p == R.one() && ps1 == 1 && ps2 == 1)) {
                p = R.mul(p, gr);
                ps1 *= gs1;
                ps2 *= gs2;
                ++ord;
            }
        }
        long el = fmod(e, Int(ord)).get_si();
        for (long k = 0; k < el; ++k) {
            r = R.mul(r, gr);
            s1 *= gs1;
            s2 *= gs2;
        }
    }
    return find_element(r, s1, s2, aux);
}

// ---------------------------------------------------------------------------
// RayCharacter

RayCharacter::RayCharacter(std::shared_ptr<const RayClassGroup> group, std::vector<Int> exponents)
    : group_(std::move(group)), exps_(std::move(exponents)) {
    if (exps_.size() != group_->divisors().size())
        fail(errc::internal_error, "character exponent vector has wrong length");
    for (size_t i = 0; i < exps_.size(); ++i) exps_[i] = fmod(exps_[i], group_->divisors()[i]);
}

RayCharacter RayCharacter::trivial(const QuadField& f) {
    auto g = RayClassGroup::make(f, OIdeal::ring_of_integers(f));
    return RayCharacter(g, std::vector<Int>(g->divisors().size(), Int(0)));
}

Int RayCharacter::order() const {
    Int o = 1;
    for (size_t i = 0; i < exps_.size(); ++i) {
        Int d = group_->divisors()[i];
        o = lcm(o, d / gcd(exps_[i], d));
    }
    return o;
}

CycloNumber RayCharacter::eval_class(const std::vector<Int>& dlog) const {
    const auto& div = group_->divisors();
    Int e = group_->exponent();
    Int k = 0;
    for (size_t i = 0; i < exps_.size(); ++i) k += exps_[i] * dlog[i] * (e / div[i]);
    k = fmod(k, e);
    if (k == 0) return CycloNumber::one();
    Int g = gcd(k, e);
    return CycloNumber::root_of_unity(Int(e / g).get_si(), Int(k / g).get_si());
}

CycloNumber RayCharacter::eval_pair(const ResidueRing::Elem& r, int s1, int s2) const {
    return eval_class(group_->dlog_pair(r, s1, s2));
}

CycloNumber RayCharacter::eval_ideal_modulus_level(const OIdeal& a) const {
    for (auto& [q, e] : a.factor())
        if (!q.is_coprime_to(modulus())) return CycloNumber::zero();
    return eval_class(group_->dlog_ideal(a));
}

std::array<int, 2> RayCharacter::sign() const {
    const ResidueRing& R = group_->ring();
    auto val = [&](int s1, int s2) -> int {
        CycloNumber v = eval_pair(R.one(), s1, s2);
        if (v == CycloNumber::one()) return 0;
        if (v == -CycloNumber::one()) return 1;
        fail(errc::internal_error, "sign class has non-quadratic character value");
    };
    return {val(-1, 1), val(1, -1)};
}

bool RayCharacter::totally_even() const {
    auto r = sign();
    return r[0] == 0 && r[1] == 0;
}

bool RayCharacter::totally_odd() const {
    auto r = sign();
    return r[0] == 1 && r[1] == 1;
}

OIdeal RayCharacter::conductor() const {
    if (auto cached = std::atomic_load(&conductor_cache_)) return *cached;
    const QuadField& f = group_->field();
    auto factors_through = [&](const OIdeal& mp) {
        for (auto& u : group_->units_congruent_to_one(mp))
            if (!(eval_pair(u, 1, 1) == CycloNumber::one())) return false;
        return true;
    };
    const auto& factors = group_->modulus_factors();
    OIdeal cond = OIdeal::ring_of_integers(f);
    for (auto& [q, e] : factors) {
        long emin = e;
        for (long cand = 0; cand < e; ++cand) {
            OIdeal mp = q.pow(cand);
            for (auto& [q2, e2] : factors)
                if (!(q2 == q)) mp = mp * q2.pow(e2);
            if (factors_through(mp)) {
                emin = cand;
                break;
            }
        }
        cond = cond * q.pow(emin);
    }
    if (!factors_through(cond)) fail(errc::internal_error, "conductor verification failed");
    std::atomic_store(&conductor_cache_, std::make_shared<const OIdeal>(cond));
    return cond;
}

bool RayCharacter::is_primitive() const { return conductor() == modulus(); }

namespace {

Int match_root_of_unity(const CycloNumber& v, const Int& d) {
    long dl = d.get_si();
    for (long c = 0; c < dl; ++c)
        if (v == CycloNumber::root_of_unity(dl, c)) return Int(c);
    fail(errc::internal_error, "value is not a root of unity of the expected order");
}

} // namespace

RayCharacter RayCharacter::primitivize() const {
    OIdeal cond = conductor();
    if (cond == modulus()) return *this;
    auto g2 = RayClassGroup::make(group_->field(), cond);
    std::vector<Int> exps(g2->divisors().size(), Int(0));
    for (size_t i = 0; i < g2->divisors().size(); ++i) {
        FieldElement alpha = g2->generator_element(i, modulus());
        CycloNumber v = eval_class(group_->dlog_element(alpha));
        exps[i] = match_root_of_unity(v, g2->divisors()[i]);
    }
    return RayCharacter(g2, std::move(exps));
}

RayCharacter RayCharacter::inverse() const {
    std::vector<Int> e(exps_.size());
    for (size_t i = 0; i < e.size(); ++i) e[i] = fmod(-exps_[i], group_->divisors()[i]);
    return RayCharacter(group_, std::move(e));
}

std::string RayCharacter::label() const {
    std::ostringstream os;
    os << "F" << group_->field().d() << "-m" << modulus().serialize() << "-e[";
    for (size_t i = 0; i < exps_.size(); ++i) {
        if (i) os << ",";
        os << exps_[i].get_str();
    }
    auto r = sign();
    os << "]-r" << r[0] << r[1];
    return os.str();
}

bool RayCharacter::operator==(const RayCharacter& o) const {
    return group_->field().d() == o.group_->field().d() && modulus() == o.modulus() &&
           exps_ == o.exps_;
}

CycloNumber chi_eval(const RayCharacter& chi, const OIdeal& m) {
    RayCharacter prim = chi.primitivize();
    for (auto& [q, e] : m.factor())
        if (!q.is_coprime_to(prim.modulus())) return CycloNumber::zero();
    return prim.eval_class(prim.group().dlog_ideal(m));
}

RayCharacter char_product(const RayCharacter& a, const RayCharacter& b) {
    const QuadField& f = a.group().field();
    OIdeal m = a.modulus().intersect(b.modulus());
    auto g = RayClassGroup::make(f, m);
    std::vector<Int> exps(g->divisors().size(), Int(0));
    for (size_t i = 0; i < g->divisors().size(); ++i) {
        FieldElement alpha = g->generator_element(i, OIdeal::ring_of_integers(f));
        CycloNumber v = a.eval_class(a.group().dlog_element(alpha)) *
                        b.eval_class(b.group().dlog_element(alpha));
        exps[i] = match_root_of_unity(v, g->divisors()[i]);
    }
    return RayCharacter(g, std::move(exps));
}

std::vector<RayCharacter> all_characters(std::shared_ptr<const RayClassGroup> group) {
    std::vector<RayCharacter> out;
    const auto& div = group->divisors();
    std::vector<Int> exps(div.size(), Int(0));
    while (true) {
        out.emplace_back(group, exps);
        size_t i = 0;
        while (i < div.size()) {
            exps[i] += 1;
            if (exps[i] < div[i]) break;
            exps[i] = 0;
            ++i;
        }
        if (i == div.size()) break;
    }
    return out;
}

std::vector<RayCharacter> primitive_characters(const QuadField& f, const OIdeal& cond) {
    auto g = RayClassGroup::make(f, cond);
    std::vector<RayCharacter> out;
    for (auto& chi : all_characters(g))
        if (chi.conductor() == cond) out.push_back(chi);
    return out;
}

RayCharacter quadratic_character_of_conductor(const QuadField& f, const OIdeal& cond) {
    std::vector<RayCharacter> found;
    for (auto& chi : primitive_characters(f, cond))
        if (chi.order() == 2 && chi.totally_even()) found.push_back(chi);
    if (found.size() != 1)
        fail(errc::unsupported_argument,
             "expected exactly one totally even quadratic character, found " +
                 std::to_string(found.size()));
    return found.front();
}

// ---------------------------------------------------------------------------
// Gauss sums

namespace {

// coset representatives of the sublattice l2 inside l1, as field elements
std::vector<FieldElement> lattice_cosets(const QuadField& f, const OIdeal& l1, const OIdeal& l2) {
    Int den = lcm(l1.den(), l2.den());
    Int s1 = den / l1.den(), s2 = den / l2.den();
    Int a1 = l1.a() * s1, b1 = l1.b() * s1, c1 = l1.c() * s1;
    Int a2 = l2.a() * s2, b2 = l2.b() * s2, c2 = l2.c() * s2;
    // T = B1^{-1} B2 with B = [[a, b], [0, c]] (columns a*1 and b + c*w)
    Int det1 = a1 * c1;
    Int t11 = c1 * a2, t12 = c1 * b2 - b1 * c2, t22 = a1 * c2;
    for (Int* v : {&t11, &t12, &t22}) {
        if (!mpz_divisible_p(v->get_mpz_t(), det1.get_mpz_t()))
            fail(errc::internal_error, "lattice_cosets: second lattice not inside the first");
        *v /= det1;
    }
    Int A = abs(t11), C = abs(t22);
    std::vector<FieldElement> out;
    for (Int i = 0; i < A; ++i)
        for (Int j = 0; j < C; ++j)
            out.push_back(f.element(make_rat(a1 * i + b1 * j, den), make_rat(c1 * j, den)));
    return out;
}

} // namespace

CycloNumber gauss_sum(const RayCharacter& psi) {
    if (!psi.is_primitive()) fail(errc::not_primitive, "gauss sum needs a primitive character");
    if (psi.is_trivial()) return CycloNumber::one();
    const QuadField& f = psi.group().field();
    const OIdeal m = psi.modulus();
    OIdeal dif = f.different();
    OIdeal dinv = dif.inverse();
    OIdeal h = (m * dif).inverse();
    auto r = psi.sign();
    CycloNumber tau = CycloNumber::zero();
    for (const FieldElement& x : lattice_cosets(f, h, dinv)) {
        if (x.is_zero()) continue;
        OIdeal a = OIdeal::principal(f, x) * m * dif;
        if (!a.is_integral()) fail(errc::internal_error, "gauss sum: non-integral term ideal");
        if (!a.is_coprime_to(m)) continue;
        auto s = x.signs();
        int sgn_factor = 1;
        if (r[0] == 1 && s[0] < 0) sgn_factor = -sgn_factor;
        if (r[1] == 1 && s[1] < 0) sgn_factor = -sgn_factor;
        CycloNumber val = psi.eval_class(psi.group().dlog_ideal(a));
        Rat tr = x.trace();
        long tden = rat_den(tr).get_si();
        long tnum = fmod(rat_num(tr), rat_den(tr)).get_si();
        CycloNumber term = val * CycloNumber::root_of_unity(tden, tnum);
        if (sgn_factor < 0) term = -term;
        tau += term;
    }
    return tau.minimize_level();
}

// ---------------------------------------------------------------------------
// unit index

Int unit_index(const QuadField& f, const OIdeal& n) {
    if (!n.is_integral()) fail(errc::not_integral, "modulus must be integral");
    ResidueRing R(f, n);
    auto one = R.one();
    auto minus_one = R.reduce(f.from_rational(-1));
    auto eps = R.reduce(f.fundamental_unit());
    long t = 1;
    auto p = eps;
    while (!(p == one || p == minus_one)) {
        p = R.mul(p, eps);
        ++t;
        if (t > 8'000'000) fail(errc::internal_error, "unit order runaway");
    }
    long e = (f.fundamental_unit_norm() == -1) ? 2 : 1;
    return Int(2 * t / e);
}

} // namespace eiscong
