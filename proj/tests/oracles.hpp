#pragma once

// Independent cross-check routines for the tests.  Everything here works from
// first principles on exact rationals (or plain doubles) and deliberately
// avoids PLMap, decompose and preimage_spectrum, so agreement between these
// and the library is evidence for both.

#include <algorithm>
#include <stdexcept>
#include <vector>

#include <betamorph/polynomial.hpp>

namespace oracle {

using betamorph::Rat;

// Bisection root of a polynomial with double coefficients (ascending) on
// [lo, hi]; requires a sign change.
inline double bisect_root(const std::vector<double>& coeffs, double lo, double hi) {
    auto eval = [&](double x) {
        double v = 0.0;
        for (auto it = coeffs.rbegin(); it != coeffs.rend(); ++it) v = v * x + *it;
        return v;
    };
    double flo = eval(lo);
    if (flo == 0.0) return lo;
    if (flo * eval(hi) > 0.0) throw std::logic_error("bisect_root: no sign change");
    for (int i = 0; i < 200; ++i) {
        double mid = 0.5 * (lo + hi);
        double fm = eval(mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fm;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// One exact step of the positive map: beta*x, minus 1 from beta*x >= 1 on
// (the second branch owns the branch point).
inline Rat step_pos(const Rat& beta, const Rat& x) {
    Rat y = beta * x;
    if (y >= 1) y -= 1;
    return y;
}

// One exact step of the negative map: 1 - beta*x below the branch point,
// 2 - beta*x from it on.
inline Rat step_neg(const Rat& beta, const Rat& x) {
    Rat y = beta * x;
    return y < 1 ? Rat(1) - y : Rat(2) - y;
}

// All one-step preimages of x within [0,1], by inverting each affine branch
// and testing membership in its half-open domain.
inline std::vector<Rat> preimages_pos(const Rat& beta, const Rat& x) {
    std::vector<Rat> out;
    if (x < 0 || x > 1) return out;
    if (x < 1) out.push_back(x / beta);             // y in [0, 1/beta)
    if (x + 1 <= beta) out.push_back((x + 1) / beta);  // y in [1/beta, 1]
    return out;
}

inline std::vector<Rat> preimages_neg(const Rat& beta, const Rat& x) {
    std::vector<Rat> out;
    if (x < 0 || x > 1) return out;
    if (x > 0) out.push_back((Rat(1) - x) / beta);     // y in [0, 1/beta)
    if (Rat(2) - x <= beta) out.push_back((Rat(2) - x) / beta);  // y in [1/beta, 1]
    return out;
}

// #{ y : F^n y = x } by recursive branch inversion.
inline long count_preimages(char map, const Rat& beta, const Rat& x, int n) {
    if (n == 0) return (x >= 0 && x <= 1) ? 1 : 0;
    long total = 0;
    auto pre = map == 'T' ? preimages_pos(beta, x) : preimages_neg(beta, x);
    for (const Rat& y : pre) total += count_preimages(map, beta, y, n - 1);
    return total;
}

// Type census of F^m recovered from the jumps of the preimage-count function
// at the orbit points of 1.  Positive map: a type-j branch has image
// (0, F^j 1), so the count drops by the number of type-j branches when x
// crosses F^j 1 rightward, and the count next to 1 is the number of type-0
// branches.  Negative map: odd types have image (F^j 1, 1) and even types
// (0, F^j 1), so the jump direction alternates and the type-0 count comes
// from the cell at 1 minus the odd types.  Requires the first m orbit points
// to be distinct and interior, which holds for every sample the tests use.
inline std::vector<long> census_from_jumps(char map, const Rat& beta, int m) {
    std::vector<Rat> orbit{Rat(1)};
    for (int k = 1; k <= m; ++k)
        orbit.push_back(map == 'T' ? step_pos(beta, orbit.back()) : step_neg(beta, orbit.back()));

    std::vector<Rat> cuts{Rat(0), Rat(1)};
    for (int j = 1; j <= m; ++j) {
        const Rat& p = orbit[j];
        if (p <= 0 || p >= 1) throw std::logic_error("census oracle: orbit point not interior");
        for (int i = 1; i <= j - 1; ++i)
            if (orbit[i] == p) throw std::logic_error("census oracle: repeated orbit point");
        cuts.push_back(p);
    }
    std::sort(cuts.begin(), cuts.end());

    // Preimage count on each open cell, evaluated at the midpoint.
    std::vector<long> cell(cuts.size() - 1);
    for (size_t i = 0; i + 1 < cuts.size(); ++i)
        cell[i] = count_preimages(map, beta, (cuts[i] + cuts[i + 1]) / 2, m);
    auto left_of = [&](const Rat& b) {
        for (size_t i = 1; i + 1 < cuts.size(); ++i)
            if (cuts[i] == b) return cell[i - 1];
        throw std::logic_error("census oracle: breakpoint not found");
    };
    auto right_of = [&](const Rat& b) {
        for (size_t i = 1; i + 1 < cuts.size(); ++i)
            if (cuts[i] == b) return cell[i];
        throw std::logic_error("census oracle: breakpoint not found");
    };

    std::vector<long> census(m + 1, 0);
    if (map == 'T') {
        for (int j = 1; j <= m; ++j) census[j] = left_of(orbit[j]) - right_of(orbit[j]);
        census[0] = cell.back();
    } else {
        for (int j = 1; j <= m; ++j) {
            long jump = right_of(orbit[j]) - left_of(orbit[j]);
            census[j] = (j % 2 == 1) ? jump : -jump;
        }
        long odd = 0, even = 0;
        for (int j = 1; j <= m; ++j) (j % 2 ? odd : even) += census[j];
        census[0] = cell.back() - odd;
        if (cell.front() != census[0] + even)
            throw std::logic_error("census oracle: cell counts are inconsistent");
    }
    return census;
}

}  // namespace oracle
