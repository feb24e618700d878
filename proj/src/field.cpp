#include "betamorph/field.hpp"

#include <algorithm>
#include <sstream>

namespace betamorph {

namespace {

// Sturm chain of a squarefree polynomial; variation counts give exact root
// counts in half-open intervals.
std::vector<QPoly> sturm_chain(const QPoly& p) {
    std::vector<QPoly> chain;
    chain.push_back(p);
    chain.push_back(p.derivative());
    while (!chain.back().is_zero() && chain.back().degree() > 0) {
        QPoly r = QPoly::divmod(chain[chain.size() - 2], chain.back()).second;
        if (r.is_zero()) break;
        chain.push_back(-r);
    }
    return chain;
}

int sign_variations(const std::vector<QPoly>& chain, const Rat& x) {
    int vars = 0, prev = 0;
    for (const QPoly& q : chain) {
        int s = sgn(q.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++vars;
        prev = s;
    }
    return vars;
}

// Number of roots in (a, b], endpoints assumed finite rationals with a < b.
int roots_in(const std::vector<QPoly>& chain, const Rat& a, const Rat& b) {
    return sign_variations(chain, a) - sign_variations(chain, b);
}

Rat pow2_inv(int e) {
    Int t;
    mpz_ui_pow_ui(t.get_mpz_t(), 2, static_cast<unsigned long>(e));
    return Rat(1) / Rat(t);
}

Rat rat_floor(const Rat& x) {
    Int q;
    mpz_fdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return Rat(q);
}

Rat rat_ceil(const Rat& x) {
    Int q;
    mpz_cdiv_q(q.get_mpz_t(), x.get_num().get_mpz_t(), x.get_den().get_mpz_t());
    return Rat(q);
}

// Simplest rational in the closed interval [a, b] (continued-fraction walk).
Rat simplest_in(const Rat& a, const Rat& b) {
    if (a == b) return a;
    if (a > b) return simplest_in(b, a);
    Rat ca = rat_ceil(a);
    if (ca <= b) return ca;
    Rat fa = rat_floor(a);
    return fa + Rat(1) / simplest_in(Rat(1) / (b - fa), Rat(1) / (a - fa));
}

}  // namespace

FieldPtr AlgebraicField::make(const IntPoly& p, std::optional<RatInterval> hint,
                              int precision_limit) {
    if (precision_limit < 1) throw InputError("precision limit must be positive");
    IntPoly sf = p.squarefree_part();
    if (sf.degree() < 1) throw InputError("defining polynomial must be nonconstant");

    auto field = std::shared_ptr<AlgebraicField>(new AlgebraicField());
    field->minpoly_ = sf;
    field->precision_limit_ = precision_limit;
    field->precision_floor_ = pow2_inv(precision_limit);

    Rat lo(1), hi(2);
    if (hint) {
        lo = std::max(lo, hint->lo);
        hi = std::min(hi, hint->hi);
        if (!(lo < hi))
            throw NoRootError("hint interval does not meet (1,2)");
    }

    if (sf.degree() == 1) {
        Rat root = Rat(-sf.coeffs()[0]) / Rat(sf.coeffs()[1]);
        root.canonicalize();
        if (!(root > lo && root < hi))
            throw NoRootError("no root of " + sf.to_string() + " in the admissible interval");
        field->lo_ = field->hi_ = root;
        field->sign_at_lo_ = 0;
        return field;
    }

    QPoly q(sf);
    std::vector<QPoly> chain = sturm_chain(q);

    // Nudge endpoints off roots without changing the interior count.
    auto open_count = [&](const Rat& a, const Rat& b) {
        int c = roots_in(chain, a, b);
        if (q.eval(b) == 0) --c;
        return c;
    };
    const int target = open_count(lo, hi);
    Rat eps = (hi - lo) / 1024;
    while (q.eval(lo) == 0) {
        while (open_count(lo + eps, hi) != target) eps /= 2;
        lo += eps;
    }
    eps = (hi - lo) / 1024;
    while (q.eval(hi) == 0) {
        while (open_count(lo, hi - eps) != target) eps /= 2;
        hi -= eps;
    }

    const int n_roots = roots_in(chain, lo, hi);
    if (n_roots == 0)
        throw NoRootError("no root of " + sf.to_string() + " in the admissible interval");
    if (n_roots > 1)
        throw AmbiguousRootError(sf.to_string() + " has " + std::to_string(n_roots) +
                                 " roots in the admissible interval; pass a hint");

    // Shrink to a sign-change bracket [lo, hi] isolating the unique root.
    while (true) {
        int slo = sgn(q.eval(lo)), shi = sgn(q.eval(hi));
        if (slo != 0 && shi != 0 && slo != shi) break;
        // A squarefree polynomial changes sign across its single simple root,
        // so this only runs if an endpoint slipped onto a root again.
        Rat mid = (lo + hi) / 2;
        if (roots_in(chain, lo, mid) == 1)
            hi = mid;
        else
            lo = mid;
    }
    field->lo_ = lo;
    field->hi_ = hi;
    field->sign_at_lo_ = sgn(q.eval(lo));
    return field;
}

Rat AlgebraicField::rational_value() const {
    if (!is_rational()) throw InputError("field is not rational");
    return lo_;
}

RatInterval AlgebraicField::interval() const {
    std::lock_guard<std::mutex> lock(mu_);
    return {lo_, hi_};
}

void AlgebraicField::refine_once() const {
    std::lock_guard<std::mutex> lock(mu_);
    refine_once_locked();
}

void AlgebraicField::refine_once_locked() const {
    if (is_rational() || lo_ == hi_) return;
    Rat mid = (lo_ + hi_) / 2;
    int s = sgn(QPoly(minpoly_).eval(mid));
    if (s == 0) {
        // The isolated root is exactly mid (possible only for a degenerate
        // defining polynomial with a rational root); straddle it tightly.
        lo_ = (lo_ + mid) / 2;
        hi_ = (mid + hi_) / 2;
    } else if (s == sign_at_lo_) {
        lo_ = mid;
    } else {
        hi_ = mid;
    }
}

RatInterval AlgebraicField::ensure_width(const Rat& width) const {
    if (width <= 0) throw InputError("width must be positive");
    if (width < precision_floor_)
        throw PrecisionExceededError("requested width below precision floor 2^-" +
                                     std::to_string(precision_limit_));
    std::lock_guard<std::mutex> lock(mu_);
    while (hi_ - lo_ > width) refine_once_locked();
    return {lo_, hi_};
}

FieldElement::FieldElement(FieldPtr f, std::vector<Rat> r)
    : field_(std::move(f)), residue_(std::move(r)) {
    reduce();
}

void FieldElement::reduce() {
    const int d = field_->degree();
    if (static_cast<int>(residue_.size()) > d) {
        QPoly rem = QPoly::divmod(QPoly(residue_), QPoly(field_->minpoly())).second;
        residue_ = rem.coeffs();
    }
    while (!residue_.empty() && residue_.back() == 0) residue_.pop_back();
}

FieldElement FieldElement::zero(const FieldPtr& f) { return FieldElement(f, {}); }

FieldElement FieldElement::one(const FieldPtr& f) { return FieldElement(f, {Rat(1)}); }

FieldElement FieldElement::beta(const FieldPtr& f) { return FieldElement(f, {Rat(0), Rat(1)}); }

FieldElement FieldElement::from_rat(const FieldPtr& f, const Rat& v) {
    Rat c = v;
    c.canonicalize();
    return FieldElement(f, {c});
}

FieldElement FieldElement::from_int(const FieldPtr& f, long v) {
    return from_rat(f, Rat(v));
}

FieldElement FieldElement::from_int_poly(const FieldPtr& f, const IntPoly& p) {
    std::vector<Rat> r;
    for (const Int& v : p.coeffs()) r.emplace_back(v);
    return FieldElement(f, std::move(r));
}

FieldElement FieldElement::from_qpoly(const FieldPtr& f, const QPoly& p) {
    return FieldElement(f, p.coeffs());
}

void FieldElement::check_same_field(const FieldElement& o) const {
    if (field_.get() != o.field_.get())
        throw InputError("elements belong to different field instances");
}

int FieldElement::sign() const {
    if (residue_.empty()) return 0;
    if (residue_.size() == 1) return sgn(residue_[0]);
    QPoly r(residue_);
    for (int step = 0; step <= field_->precision_limit(); ++step) {
        RatInterval iv = field_->interval();
        auto [l, u] = r.eval_interval(iv.lo, iv.hi);
        if (sgn(l) > 0) return 1;
        if (sgn(u) < 0) return -1;
        field_->refine_once();
    }
    throw UndecidableComparisonError(
        "sign of nonzero residue did not resolve within the bisection budget; "
        "the defining polynomial is not faithful for this element");
}

FieldElement FieldElement::operator+(const FieldElement& o) const {
    check_same_field(o);
    std::vector<Rat> r(std::max(residue_.size(), o.residue_.size()), Rat(0));
    for (std::size_t i = 0; i < residue_.size(); ++i) r[i] += residue_[i];
    for (std::size_t i = 0; i < o.residue_.size(); ++i) r[i] += o.residue_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator-(const FieldElement& o) const {
    check_same_field(o);
    std::vector<Rat> r(std::max(residue_.size(), o.residue_.size()), Rat(0));
    for (std::size_t i = 0; i < residue_.size(); ++i) r[i] += residue_[i];
    for (std::size_t i = 0; i < o.residue_.size(); ++i) r[i] -= o.residue_[i];
    return FieldElement(field_, std::move(r));
}

FieldElement FieldElement::operator*(const FieldElement& o) const {
    check_same_field(o);
    QPoly prod = QPoly(residue_) * QPoly(o.residue_);
    return FieldElement(field_, prod.coeffs());
}

FieldElement FieldElement::operator/(const FieldElement& o) const {
    return *this * o.inverse();
}

FieldElement FieldElement::operator-() const {
    std::vector<Rat> r = residue_;
    for (Rat& v : r) v = -v;
    return FieldElement(field_, std::move(r));
}

FieldElement& FieldElement::operator+=(const FieldElement& o) {
    *this = *this + o;
    return *this;
}

FieldElement& FieldElement::operator-=(const FieldElement& o) {
    *this = *this - o;
    return *this;
}

FieldElement FieldElement::inverse() const {
    if (is_zero()) throw InputError("division by zero field element");
    // Extended Euclid in Q[x]: r0 = minpoly, r1 = residue; track s with
    // r_i = s_i * residue (mod minpoly).
    QPoly r0(field_->minpoly()), r1(residue_);
    QPoly s0, s1({Rat(1)});
    while (!r1.is_zero()) {
        auto [q, r] = QPoly::divmod(r0, r1);
        QPoly s2 = s0 - q * s1;
        r0 = r1;
        r1 = r;
        s0 = s1;
        s1 = s2;
    }
    if (r0.degree() != 0)
        throw Error("residue is a zero divisor; defining polynomial is not irreducible over "
                    "this element");
    QPoly inv = s0.scaled(Rat(1) / r0.coeffs()[0]);
    return FieldElement(field_, inv.coeffs());
}

FieldElement FieldElement::pow(unsigned k) const {
    FieldElement acc = one(field_);
    FieldElement base = *this;
    while (k) {
        if (k & 1u) acc = acc * base;
        base = base * base;
        k >>= 1u;
    }
    return acc;
}

bool FieldElement::operator==(const FieldElement& o) const {
    check_same_field(o);
    return residue_ == o.residue_;
}

bool FieldElement::operator<(const FieldElement& o) const { return compare(*this, o) < 0; }
bool FieldElement::operator<=(const FieldElement& o) const { return compare(*this, o) <= 0; }
bool FieldElement::operator>(const FieldElement& o) const { return compare(*this, o) > 0; }
bool FieldElement::operator>=(const FieldElement& o) const { return compare(*this, o) >= 0; }

RatInterval FieldElement::enclosure(const Rat& width) const {
    if (width <= 0) throw InputError("width must be positive");
    if (width < pow2_inv(field_->precision_limit()))
        throw PrecisionExceededError("requested width below precision floor 2^-" +
                                     std::to_string(field_->precision_limit()));
    if (residue_.empty()) return {Rat(0), Rat(0)};
    if (residue_.size() == 1) return {residue_[0], residue_[0]};
    QPoly r(residue_);
    for (long step = 0;; ++step) {
        RatInterval iv = field_->interval();
        auto [l, u] = r.eval_interval(iv.lo, iv.hi);
        if (u - l <= width) return {l, u};
        if (step > (1L << 20))
            throw Error("enclosure refinement failed to converge");
        field_->refine_once();
    }
}

std::optional<Rat> FieldElement::as_rational() const {
    if (residue_.empty()) return Rat(0);
    if (residue_.size() == 1) return residue_[0];
    if (field_->is_rational()) return QPoly(residue_).eval(field_->rational_value());
    return std::nullopt;
}

double FieldElement::approx() const {
    RatInterval iv = enclosure(Rat(1, 1L << 40));
    return Rat((iv.lo + iv.hi) / 2).get_d();
}

std::string FieldElement::poly_string(const std::string& var) const {
    return poly_display(residue_, var);
}

std::string FieldElement::exact_string() const {
    if (auto r = as_rational()) {
        Rat v = *r;
        v.canonicalize();
        return v.get_str();
    }
    return poly_string();
}

int compare(const FieldElement& a, const FieldElement& b) { return (a - b).sign(); }

RatInterval refine(const FieldElement& x, const Rat& width) { return x.enclosure(width); }

std::string to_string(const BetaClass& c) {
    switch (c.kind) {
        case BetaClass::Kind::Exact:
            return "Exact(" + std::to_string(c.n) + ")";
        case BetaClass::Kind::Gap:
            return "Gap(" + std::to_string(c.n) + ")";
        case BetaClass::Kind::SubGolden:
            return "SubGolden";
    }
    return "?";
}

BetaClass classify_beta(const FieldPtr& field) {
    constexpr int kMaxIndex = 64;
    for (int m = 2; m <= kMaxIndex; ++m) {
        int s = FieldElement::from_int_poly(field, multinacci_poly(m)).sign();
        if (s == 0) return {BetaClass::Kind::Exact, m};
        if (s < 0) {
            if (m == 2) return {BetaClass::Kind::SubGolden, 2};
            return {BetaClass::Kind::Gap, m};
        }
    }
    throw Error("beta classification did not terminate; is beta inside (1,2)?");
}

FieldPtr parse_beta_spec(const std::string& spec) {
    auto starts_with = [&](const char* p) { return spec.rfind(p, 0) == 0; };
    if (starts_with("multinacci:")) {
        int n;
        try {
            n = std::stoi(spec.substr(11));
        } catch (const std::exception&) {
            throw InputError("bad multinacci index in '" + spec + "'");
        }
        return AlgebraicField::make(multinacci_poly(n));
    }
    if (starts_with("rational:")) {
        std::string body = spec.substr(9);
        Rat v;
        try {
            v = Rat(body);
            v.canonicalize();
        } catch (const std::exception&) {
            throw InputError("bad rational '" + body + "'");
        }
        if (!(v > 1 && v < 2)) throw InputError("beta must lie in (1,2), got " + v.get_str());
        return AlgebraicField::make(IntPoly::from_rational(v));
    }
    if (starts_with("poly:")) return AlgebraicField::make(IntPoly::parse(spec.substr(5)));
    if (spec.find(',') != std::string::npos) return AlgebraicField::make(IntPoly::parse(spec));
    throw InputError("unrecognized beta spec '" + spec +
                     "' (expected multinacci:N, rational:P/Q, or poly:c0,c1,...)");
}

Rat rational_in_gap(int n) {
    if (n < 2) throw InputError("gap index must be >= 2");
    const Rat step(1, 1024);
    Rat left;
    if (n == 2) {
        left = Rat(9, 8);
    } else {
        FieldPtr below = AlgebraicField::make(multinacci_poly(n - 1));
        left = below->ensure_width(step).hi;
    }
    FieldPtr above = AlgebraicField::make(multinacci_poly(n));
    Rat width = step;
    Rat right = above->ensure_width(width).lo;
    while (!(left < right)) {
        width /= 1024;
        right = above->ensure_width(width).lo;
        if (n > 2) {
            FieldPtr below = AlgebraicField::make(multinacci_poly(n - 1));
            left = below->ensure_width(width).hi;
        }
    }
    return simplest_in(left, right);
}

}  // namespace betamorph
