#include "betamorph/maps.hpp"

namespace betamorph {

PLMap PLMap::make(const FieldPtr& f, Orientation o) {
    PLMap m;
    m.field_ = f;
    m.orient_ = o;
    FieldElement zero = FieldElement::zero(f);
    FieldElement one = FieldElement::one(f);
    FieldElement two = FieldElement::from_int(f, 2);
    m.crit_ = FieldElement::beta(f).inverse();
    if (o == Orientation::Positive) {
        m.branches_.push_back({zero, m.crit_, +1, zero});
        m.branches_.push_back({m.crit_, one, +1, -one});
    } else {
        m.branches_.push_back({zero, m.crit_, -1, one});
        m.branches_.push_back({m.crit_, one, -1, two});
    }
    return m;
}

PLMap make_map(const FieldPtr& f, Orientation o) { return PLMap::make(f, o); }

int PLMap::branch_index(const FieldElement& x) const {
    if (x.sign() < 0 || compare(x, FieldElement::one(field_)) > 0)
        throw MapDomainError("point " + x.exact_string() + " outside [0,1]");
    return compare(x, crit_) < 0 ? 0 : 1;
}

FieldElement PLMap::apply(const FieldElement& x) const {
    const MapBranch& b = branches_[branch_index(x)];
    FieldElement bx = FieldElement::beta(field_) * x;
    return (b.slope_sign > 0 ? bx : -bx) + b.intercept;
}

OrbitTable orbit_of_one(const PLMap& map, int depth) {
    if (depth < 0) throw InputError("orbit depth must be nonnegative");
    OrbitTable t;
    t.map_letter = map.letter();
    t.points.reserve(depth + 1);
    t.points.push_back(FieldElement::one(map.field()));
    for (int k = 1; k <= depth; ++k) t.points.push_back(map.apply(t.points.back()));
    return t;
}

FieldElement fixed_point_small(const FieldPtr& f) {
    return (FieldElement::beta(f) + FieldElement::one(f)).inverse();
}

FieldElement fixed_point_large(const FieldPtr& f) {
    return fixed_point_small(f) + fixed_point_small(f);
}

FieldElement s_closed_form(const FieldPtr& f, int k) {
    BetaClass cls = classify_beta(f);
    int kmax = 0;
    if (cls.kind == BetaClass::Kind::Exact) kmax = cls.n - 1;
    if (cls.kind == BetaClass::Kind::Gap) kmax = cls.n - 2;
    if (k < 1 || k > kmax)
        throw ValidityRangeError("closed form for S^k(1) needs 1 <= k <= " +
                                 std::to_string(kmax) + " in regime " + to_string(cls) +
                                 ", got k = " + std::to_string(k));
    const int outer = (k % 2 == 0) ? 1 : -1;
    std::vector<Rat> c(k + 1);
    for (int j = 0; j <= k; ++j) c[j] = Rat(outer * (((k - j) % 2 == 0) ? 1 : -2));
    return FieldElement::from_qpoly(f, QPoly(std::move(c)));
}

namespace {

std::string iterate_name(char letter, int k) {
    return std::string(1, letter) + "^" + std::to_string(k) + "(1)";
}

}  // namespace

OrbitBoundReport verify_orbit_bounds(const FieldPtr& f, int n) {
    if (n < 2) throw InputError("orbit bound index must be >= 2");
    FieldElement pn = FieldElement::from_int_poly(f, multinacci_poly(n));
    int sn = pn.sign();
    if (sn < 0)
        throw HypothesisError("beta is below the " + std::to_string(n) +
                              "-th multinacci number");

    OrbitBoundReport rep;
    rep.n = n;
    rep.at_multinacci = (sn == 0);

    PLMap S = make_map(f, Orientation::Negative);
    OrbitTable orb = orbit_of_one(S, n - 1);
    FieldElement xs = fixed_point_small(f);
    FieldElement xl = fixed_point_large(f);

    bool all = true;
    for (int k = 1; k <= n - 2; ++k) {
        bool even = (k % 2 == 0);
        int cmp = compare(orb.points[k], even ? xl : xs);
        bool ok = even ? (cmp > 0) : (cmp < 0);
        rep.items.push_back({k, iterate_name('S', k) + (even ? " > x_l" : " < x_s"), ok});
        all = all && ok;
    }
    {
        const int k = n - 1;
        bool odd_n = (n % 2 == 1);
        int cmp = compare(orb.points[k], odd_n ? xl : xs);
        bool ok = odd_n ? (cmp >= 0) : (cmp <= 0);
        rep.equality_at_end = (cmp == 0);
        rep.items.push_back({k, iterate_name('S', k) + (odd_n ? " >= x_l" : " <= x_s"), ok});
        all = all && ok;
        bool iff = (rep.equality_at_end == rep.at_multinacci);
        rep.items.push_back({k, "equality holds exactly at the multinacci number", iff});
        all = all && iff;
    }
    rep.all_ok = all;
    return rep;
}

OrbitOrderReport orbit_order_check(const FieldPtr& f) {
    OrbitOrderReport rep;
    rep.cls = classify_beta(f);
    PLMap S = make_map(f, Orientation::Negative);
    FieldElement xs = fixed_point_small(f);
    FieldElement xl = fixed_point_large(f);
    FieldElement crit = S.branch_point();

    bool all = true;
    auto expect = [&](const std::string& rel, bool ok) {
        rep.checks.push_back({rel, ok});
        all = all && ok;
    };
    auto lt = [&](const std::string& an, const FieldElement& a, const std::string& bn,
                  const FieldElement& b) { expect(an + " < " + bn, compare(a, b) < 0); };

    lt("x_s", xs, "1/beta", crit);
    lt("1/beta", crit, "x_l", xl);

    if (rep.cls.kind == BetaClass::Kind::SubGolden) {
        FieldElement s1 = S.apply(FieldElement::one(f));
        lt("x_s", xs, "S^1(1)", s1);
        lt("S^1(1)", s1, "1/beta", crit);
        rep.all_ok = all;
        return rep;
    }

    const int n = rep.cls.n;
    OrbitTable orb = orbit_of_one(S, n - 1);

    // Ascending chain: 0, odd iterates, x_s, (gap middle), x_l, even iterates
    // descending, 1.
    std::vector<std::pair<std::string, FieldElement>> chain;
    chain.emplace_back("0", FieldElement::zero(f));
    const int odd_top = (n % 2 == 0) ? n - 3 : n - 2;
    for (int k = 1; k <= odd_top; k += 2) chain.emplace_back(iterate_name('S', k), orb.points[k]);
    chain.emplace_back("x_s", xs);
    if (rep.cls.kind == BetaClass::Kind::Gap)
        chain.emplace_back(iterate_name('S', n - 1), orb.points[n - 1]);
    chain.emplace_back("x_l", xl);
    const int even_top = (n % 2 == 0) ? n - 2 : n - 3;
    for (int k = even_top; k >= 2; k -= 2) chain.emplace_back(iterate_name('S', k), orb.points[k]);
    chain.emplace_back("1", FieldElement::one(f));

    for (std::size_t i = 0; i + 1 < chain.size(); ++i)
        lt(chain[i].first, chain[i].second, chain[i + 1].first, chain[i + 1].second);

    if (rep.cls.kind == BetaClass::Kind::Exact) {
        const char* fp = (n % 2 == 0) ? "x_s" : "x_l";
        const FieldElement& fpv = (n % 2 == 0) ? xs : xl;
        expect(iterate_name('S', n - 1) + " = " + fp, orb.points[n - 1] == fpv);
    }
    rep.all_ok = all;
    return rep;
}

}  // namespace betamorph
