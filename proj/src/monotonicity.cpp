#include "betamorph/monotonicity.hpp"

#include <algorithm>
#include <map>

namespace betamorph {

namespace {

FieldElement affine_at(const FieldElement& beta_pow, int sign, const FieldElement& intercept,
                       const FieldElement& x) {
    FieldElement v = beta_pow * x;
    return (sign > 0 ? v : -v) + intercept;
}

// Orbit of 1 extended affinely through the branch point: ties take the first
// branch, which is what the affine continuation of a cell endpoint does.
std::vector<FieldElement> extended_orbit(const FieldPtr& f, Orientation o, int depth) {
    FieldElement beta = FieldElement::beta(f);
    FieldElement one = FieldElement::one(f);
    FieldElement two = FieldElement::from_int(f, 2);
    FieldElement crit = beta.inverse();
    std::vector<FieldElement> w;
    w.reserve(depth + 1);
    w.push_back(one);
    for (int j = 0; j < depth; ++j) {
        const FieldElement& x = w.back();
        FieldElement bx = beta * x;
        if (o == Orientation::Positive)
            w.push_back(compare(x, crit) <= 0 ? bx : bx - one);
        else
            w.push_back(compare(x, crit) <= 0 ? one - bx : two - bx);
    }
    return w;
}

}  // namespace

BranchDecomposition decompose(const PLMap& map, int n) {
    if (n < 1) throw InputError("decomposition level must be >= 1");
    if (n > kMaxDecomposeLevel)
        throw ResourceError("decomposition level " + std::to_string(n) +
                            " exceeds the budget of " + std::to_string(kMaxDecomposeLevel));

    const FieldPtr& f = map.field();
    const FieldElement beta = FieldElement::beta(f);
    const FieldElement zero = FieldElement::zero(f);
    const FieldElement one = FieldElement::one(f);
    const FieldElement& crit = map.branch_point();
    const bool positive = map.orientation() == Orientation::Positive;
    // True value of the first iterate; the negative map's relabeling below
    // compares child images against (0,1) and (S(1),1).
    const FieldElement first_iterate = map.apply(one);

    BranchDecomposition d;
    d.field = f;
    d.orient = map.orientation();
    d.level = 1;
    int t = 0;
    for (const MapBranch& mb : map.branches()) {
        FieldElement a = affine_at(beta, mb.slope_sign, mb.intercept, mb.lo);
        FieldElement b = affine_at(beta, mb.slope_sign, mb.intercept, mb.hi);
        if (mb.slope_sign < 0) std::swap(a, b);
        d.branches.push_back({mb.lo, mb.hi, mb.slope_sign, mb.intercept, a, b, t++});
    }

    for (int level = 1; level < n; ++level) {
        FieldElement slope_inv = beta.pow(level).inverse();
        std::vector<MonotoneBranch> next;
        next.reserve(d.branches.size() * 2);

        // Composes the F-branch `fb` with the parent restricted to
        // (dlo, dhi), whose image under the parent is (ilo, ihi).
        auto emit = [&](const MonotoneBranch& br, const MapBranch& fb, FieldElement dlo,
                        FieldElement dhi, const FieldElement& ilo, const FieldElement& ihi,
                        int type) {
            int s = br.slope_sign * fb.slope_sign;
            FieldElement c = (fb.slope_sign > 0 ? beta * br.intercept : -(beta * br.intercept)) +
                             fb.intercept;
            FieldElement p = (fb.slope_sign > 0 ? beta * ilo : -(beta * ilo)) + fb.intercept;
            FieldElement q = (fb.slope_sign > 0 ? beta * ihi : -(beta * ihi)) + fb.intercept;
            if (fb.slope_sign < 0) std::swap(p, q);
            next.push_back({std::move(dlo), std::move(dhi), s, std::move(c), std::move(p),
                            std::move(q), type});
        };

        for (const MonotoneBranch& br : d.branches) {
            const int j = br.type_id;
            bool split = compare(br.img_lo, crit) < 0 && compare(crit, br.img_hi) < 0;
            if (split) {
                FieldElement xstar = (crit - br.intercept) * slope_inv;
                if (br.slope_sign < 0) xstar = -xstar;
                int low_type, high_type;  // children through F-branch 0 / 1
                if (positive) {
                    low_type = 0;
                    high_type = j + 1;
                } else if (j % 2 == 0) {
                    low_type = 0;
                    high_type = j + 1;
                } else {
                    low_type = j + 1;
                    high_type = 1;
                }
                if (br.slope_sign > 0) {
                    emit(br, map.branches()[0], br.dom_lo, xstar, br.img_lo, crit, low_type);
                    emit(br, map.branches()[1], xstar, br.dom_hi, crit, br.img_hi, high_type);
                } else {
                    emit(br, map.branches()[1], br.dom_lo, xstar, crit, br.img_hi, high_type);
                    emit(br, map.branches()[0], xstar, br.dom_hi, br.img_lo, crit, low_type);
                }
            } else {
                int fb = compare(br.img_hi, crit) <= 0 ? 0 : 1;
                emit(br, map.branches()[fb], br.dom_lo, br.dom_hi, br.img_lo, br.img_hi, j + 1);
                if (!positive) {
                    // A child whose image coincides with a full or first-level
                    // image shape is counted under that earlier type.
                    MonotoneBranch& child = next.back();
                    if (child.img_lo == zero && child.img_hi == one)
                        child.type_id = 0;
                    else if (child.img_lo == first_iterate && child.img_hi == one)
                        child.type_id = 1;
                }
            }
        }
        d.branches = std::move(next);
        d.level = level + 1;
    }
    return d;
}

void validate_decomposition(const BranchDecomposition& d) {
    if (d.branches.empty()) throw ClassificationError("decomposition has no branches");
    const FieldPtr& f = d.field;
    const bool positive = d.orient == Orientation::Positive;
    const FieldElement zero = FieldElement::zero(f);
    const FieldElement one = FieldElement::one(f);
    const FieldElement beta_pow = FieldElement::beta(f).pow(d.level);
    const FieldElement crit = FieldElement::beta(f).inverse();
    std::vector<FieldElement> w = extended_orbit(f, d.orient, d.level);

    auto fail = [](std::size_t i, const std::string& what) {
        throw ClassificationError("branch " + std::to_string(i) + ": " + what);
    };

    if (d.branches.front().dom_lo != zero) fail(0, "leftmost cell does not start at 0");
    if (d.branches.back().dom_hi != one)
        fail(d.branches.size() - 1, "rightmost cell does not end at 1");

    const int expected_sign = positive ? 1 : (d.level % 2 == 0 ? 1 : -1);
    for (std::size_t i = 0; i < d.branches.size(); ++i) {
        const MonotoneBranch& br = d.branches[i];
        if (i + 1 < d.branches.size() && !(br.dom_hi == d.branches[i + 1].dom_lo))
            fail(i, "cells do not tile: gap or overlap at the right endpoint");
        if (!(compare(br.dom_lo, br.dom_hi) < 0)) fail(i, "empty cell");
        if (br.slope_sign != expected_sign) fail(i, "slope sign disagrees with the level parity");

        FieldElement a = affine_at(beta_pow, br.slope_sign, br.intercept, br.dom_lo);
        FieldElement b = affine_at(beta_pow, br.slope_sign, br.intercept, br.dom_hi);
        if (br.slope_sign < 0) std::swap(a, b);
        if (!(a == br.img_lo && b == br.img_hi)) fail(i, "stored image disagrees with the affine formula");
        if (!(compare(br.img_lo, br.img_hi) < 0)) fail(i, "empty image");
        if (br.img_lo.sign() < 0 || compare(br.img_hi, one) > 0) fail(i, "image leaves [0,1]");

        const int t = br.type_id;
        if (t < 0 || t > d.level) fail(i, "type out of range");
        bool ok;
        if (positive) {
            ok = br.img_lo == zero && br.img_hi == w[t];
        } else if (t == 0) {
            ok = br.img_lo == zero && br.img_hi == one;
        } else if (t % 2 == 1) {
            ok = br.img_lo == w[t] && br.img_hi == one;
        } else {
            ok = (br.img_lo == zero || br.img_lo == w[1]) && br.img_hi == w[t];
        }
        if (!ok) fail(i, "image does not match the shape of type " + std::to_string(t));
    }
}

std::vector<long> type_census(const BranchDecomposition& d) {
    std::vector<long> counts(d.level + 1, 0);
    for (const MonotoneBranch& br : d.branches) ++counts[br.type_id];
    return counts;
}

std::vector<long> kappa_closed(int n, int m) {
    if (n < 2 || m < 1 || m > n || n > 62) throw InputError("kappa_closed needs 2 <= n <= 62, 1 <= m <= n");
    std::vector<long> r(m + 1, 0);
    if (m < n) {
        for (int j = 0; j < m; ++j) r[j] = 1L << (m - 1 - j);
        r[m] = 1;
    } else {
        r[0] = (1L << (n - 1)) - 1;
        for (int j = 1; j < n; ++j) r[j] = 1L << (n - 1 - j);
        r[n] = 1;
    }
    return r;
}

std::vector<long> iota_closed(int m) {
    if (m < 1 || m > 62) throw InputError("iota_closed needs 1 <= m <= 62");
    if (m == 1) return {1, 1};
    std::vector<long> r(m + 1, 0);
    r[0] = 1L << (m - 2);
    for (int j = 1; j <= m - 2; ++j) r[j] = 3L << (m - 2 - j);
    r[m - 1] = 2;
    r[m] = 1;
    return r;
}

std::string to_string(CaseTag t) {
    switch (t) {
        case CaseTag::C1: return "C1";
        case CaseTag::C2: return "C2";
        case CaseTag::C3: return "C3";
        case CaseTag::C1s: return "C1s";
        case CaseTag::C2s: return "C2s";
        case CaseTag::C3s: return "C3s";
    }
    return "?";
}

CaseTag select_case(const FieldPtr& f, int n) {
    BetaClass cls = classify_beta(f);
    if (cls.kind == BetaClass::Kind::SubGolden)
        throw WrongRegimeError("case selection is defined for Gap and Exact regimes only");
    if (cls.n != n)
        throw InputError("regime index is " + std::to_string(cls.n) + ", not " +
                         std::to_string(n));
    PLMap S = make_map(f, Orientation::Negative);
    OrbitTable orb = orbit_of_one(S, n - 1);
    int cmp = compare(orb.points[n - 1], S.branch_point());
    if (n % 2 == 0) return cmp < 0 ? CaseTag::C1 : (cmp == 0 ? CaseTag::C2 : CaseTag::C3);
    return cmp < 0 ? CaseTag::C1s : (cmp == 0 ? CaseTag::C2s : CaseTag::C3s);
}

std::vector<long> iota_n_closed(int n, CaseTag tag) {
    if (n < 2 || n > 62) throw InputError("iota_n_closed needs 2 <= n <= 62");
    bool starred = tag == CaseTag::C1s || tag == CaseTag::C2s || tag == CaseTag::C3s;
    if (starred != (n % 2 == 1))
        throw InputError("case " + to_string(tag) + " does not occur at step " +
                         std::to_string(n));
    std::vector<long> r(n + 1, 0);
    r[0] = 1L << (n - 2);
    for (int j = 1; j <= n - 2; ++j) r[j] = 3L << (n - 2 - j);
    r[n - 1] = 2;
    r[n] = 1;
    switch (tag) {
        case CaseTag::C1:
        case CaseTag::C3s: break;
        case CaseTag::C2:
        case CaseTag::C2s: r[n] = 0; break;
        case CaseTag::C1s: r[0] -= 1; break;
        case CaseTag::C3: r[1] -= 1; break;
    }
    return r;
}

PreimageSpectrum preimage_spectrum(const PLMap& map, int n) {
    BranchDecomposition d = decompose(map, n);
    const FieldPtr& f = map.field();

    std::vector<FieldElement> pts;
    pts.reserve(2 * d.branches.size() + 2);
    pts.push_back(FieldElement::zero(f));
    pts.push_back(FieldElement::one(f));
    for (const MonotoneBranch& br : d.branches) {
        pts.push_back(br.img_lo);
        pts.push_back(br.img_hi);
    }
    std::sort(pts.begin(), pts.end(),
              [](const FieldElement& a, const FieldElement& b) { return compare(a, b) < 0; });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const FieldElement& a, const FieldElement& b) { return a == b; }),
              pts.end());

    auto index_of = [&](const FieldElement& x) {
        auto it = std::lower_bound(
            pts.begin(), pts.end(), x,
            [](const FieldElement& a, const FieldElement& b) { return compare(a, b) < 0; });
        return static_cast<std::size_t>(it - pts.begin());
    };

    std::vector<long> diff(pts.size(), 0);
    for (const MonotoneBranch& br : d.branches) {
        ++diff[index_of(br.img_lo)];
        --diff[index_of(br.img_hi)];
    }

    PreimageSpectrum spec;
    spec.field = f;
    spec.orient = map.orientation();
    spec.level = n;
    spec.values.reserve(pts.size() - 1);
    long running = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        running += diff[i];
        spec.values.push_back(running);
    }
    spec.breakpoints = std::move(pts);
    return spec;
}

FieldElement level_set(const PreimageSpectrum& spec, long k) {
    FieldElement total = FieldElement::zero(spec.field);
    for (std::size_t i = 0; i < spec.values.size(); ++i)
        if (spec.values[i] == k) total += spec.breakpoints[i + 1] - spec.breakpoints[i];
    return total;
}

FieldElement spectrum_mass(const PreimageSpectrum& spec) {
    FieldElement total = FieldElement::zero(spec.field);
    for (std::size_t i = 0; i < spec.values.size(); ++i)
        total += FieldElement::from_int(spec.field, spec.values[i]) *
                 (spec.breakpoints[i + 1] - spec.breakpoints[i]);
    return total;
}

std::vector<int> parity_profile(const PreimageSpectrum& spec) {
    std::vector<int> p;
    p.reserve(spec.values.size());
    for (long v : spec.values) p.push_back(static_cast<int>(((v % 2) + 2) % 2));
    return p;
}

std::string to_string(Verdict::Kind k) {
    switch (k) {
        case Verdict::Kind::IsomorphicMultinacci: return "isomorphic_multinacci";
        case Verdict::Kind::NotIsomorphic: return "not_isomorphic";
        case Verdict::Kind::Inconclusive: return "inconclusive";
    }
    return "?";
}

Verdict obstruction_check(const FieldPtr& f, int forced_iterate) {
    Verdict v;
    v.cls = classify_beta(f);
    const bool exact = v.cls.kind == BetaClass::Kind::Exact;
    const bool subgolden = v.cls.kind == BetaClass::Kind::SubGolden;
    v.iterate = forced_iterate > 0 ? forced_iterate : (subgolden ? 3 : v.cls.n);
    if (!subgolden) {
        v.case_tag = select_case(f, v.cls.n);
        v.boundary_markov =
            !exact && (*v.case_tag == CaseTag::C2 || *v.case_tag == CaseTag::C2s);
    }

    PreimageSpectrum plus = preimage_spectrum(make_map(f, Orientation::Positive), v.iterate);
    PreimageSpectrum minus = preimage_spectrum(make_map(f, Orientation::Negative), v.iterate);

    std::map<long, int> seen;
    for (long k : plus.values) seen[k] = 1;
    for (long k : minus.values) seen[k] = 1;
    for (auto& [k, unused] : seen) {
        FieldElement lp = level_set(plus, k);
        FieldElement lm = level_set(minus, k);
        if (!(lp == lm)) v.witnesses.push_back({k, lp, lm});
    }

    if (exact) {
        if (!v.witnesses.empty())
            throw Error("preimage spectra of a multinacci beta disagree; internal invariant broken");
        v.kind = Verdict::Kind::IsomorphicMultinacci;
    } else {
        v.kind = v.witnesses.empty() ? Verdict::Kind::Inconclusive
                                     : Verdict::Kind::NotIsomorphic;
    }
    return v;
}

std::vector<long> predicted_witnesses(const BetaClass& cls, std::optional<CaseTag> tag) {
    if (cls.kind == BetaClass::Kind::Exact) return {};
    if (cls.kind == BetaClass::Kind::SubGolden) return {2};
    if (!tag) throw InputError("a gap regime needs its case tag to predict witnesses");
    const int n = cls.n;
    if (n == 3) {
        switch (*tag) {
            case CaseTag::C1s: return {6};
            case CaseTag::C2s: return {3, 6};
            case CaseTag::C3s: return {3};
            default: throw InputError("case " + to_string(*tag) + " does not occur at step 3");
        }
    }
    switch (*tag) {
        case CaseTag::C1: return {(1L << n) - 3, 1L << (n - 1)};
        case CaseTag::C3s: return {(1L << n) - 3, 3L << (n - 2)};
        default: return {(1L << n) - 2};
    }
}

}  // namespace betamorph
