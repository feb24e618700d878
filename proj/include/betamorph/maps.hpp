#pragma once

#include <string>
#include <vector>

#include "betamorph/field.hpp"

namespace betamorph {

// Positive: x |-> beta*x (mod 1) with T(1/beta) = 0 and T(1) = beta - 1.
// Negative: x |-> 1 - beta*x on [0, 1/beta), 2 - beta*x on [1/beta, 1].
enum class Orientation { Positive, Negative };

// Affine piece value(x) = slope_sign * beta * x + intercept on [lo, hi).
// The last branch of a map also owns its right endpoint.
struct MapBranch {
    FieldElement lo, hi;
    int slope_sign;  // +1 or -1
    FieldElement intercept;
};

// A two-branch beta-map on [0,1] with the branch point at 1/beta, which the
// second branch owns in both orientations.
class PLMap {
  public:
    static PLMap make(const FieldPtr& f, Orientation o);

    const FieldPtr& field() const { return field_; }
    Orientation orientation() const { return orient_; }
    char letter() const { return orient_ == Orientation::Positive ? 'T' : 'S'; }
    const std::vector<MapBranch>& branches() const { return branches_; }
    const FieldElement& branch_point() const { return crit_; }

    // 0 for x in [0, 1/beta), 1 for x in [1/beta, 1]; MapDomainError outside.
    int branch_index(const FieldElement& x) const;
    FieldElement apply(const FieldElement& x) const;

  private:
    PLMap() = default;
    FieldPtr field_;
    Orientation orient_;
    std::vector<MapBranch> branches_;
    FieldElement crit_;  // 1/beta
};

PLMap make_map(const FieldPtr& f, Orientation o);

// points[k] = F^k(1) for k = 0..depth.
struct OrbitTable {
    char map_letter;
    std::vector<FieldElement> points;
};

OrbitTable orbit_of_one(const PLMap& map, int depth);

// Fixed points of the negative map: 1/(beta+1) on the left branch and
// 2/(beta+1) on the right branch; always x_s < 1/beta < x_l.
FieldElement fixed_point_small(const FieldPtr& f);
FieldElement fixed_point_large(const FieldPtr& f);

// Closed form for S^k(1) as a polynomial in beta, valid while the first k
// iterates alternate across the branch point: coefficient of beta^j is
// (-1)^k * (1 if k-j even else -2).  Valid for 1 <= k <= n-1 in Exact(n) and
// 1 <= k <= n-2 in Gap(n); ValidityRangeError outside, and for SubGolden.
FieldElement s_closed_form(const FieldPtr& f, int k);

struct OrbitBoundItem {
    int k;
    std::string relation;
    bool ok;
};

// For beta >= beta_n: S^k(1) > x_l for even k <= n-2, S^k(1) < x_s for odd
// k <= n-2, and S^{n-1}(1) lands at or beyond x_l (n odd) / x_s (n even),
// with equality exactly at beta = beta_n.
struct OrbitBoundReport {
    int n = 0;
    bool at_multinacci = false;   // beta equals the n-th multinacci number
    bool equality_at_end = false; // S^{n-1}(1) meets its bound exactly
    std::vector<OrbitBoundItem> items;
    bool all_ok = false;
};

// Throws HypothesisError when beta < beta_n.
OrbitBoundReport verify_orbit_bounds(const FieldPtr& f, int n);

struct OrderCheck {
    std::string relation;
    bool ok;
};

// Full ordering of {S^k(1)} against the fixed points for the regime of beta:
// odd iterates ascend below x_s, even iterates descend above x_l, and
// S^{n-1}(1) sits strictly between them (Gap) or on a fixed point (Exact).
struct OrbitOrderReport {
    BetaClass cls;
    std::vector<OrderCheck> checks;
    bool all_ok = false;
};

OrbitOrderReport orbit_order_check(const FieldPtr& f);

}  // namespace betamorph
