#include "betamorph/markov.hpp"

#include <mpfr.h>

#include <algorithm>
#include <map>
#include <utility>

#include "betamorph/errors.hpp"

namespace betamorph {

namespace {

void require_cuts(const FieldPtr& f, const std::vector<FieldElement>& cuts) {
    if (cuts.size() < 2) throw InputError("cut set needs at least two points");
    if (cuts.front() != FieldElement::zero(f) || cuts.back() != FieldElement::one(f))
        throw InputError("cut set must start at 0 and end at 1");
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        if (compare(cuts[i], cuts[i + 1]) >= 0)
            throw InputError("cut set must be strictly increasing");
}

// Index of x in the sorted cut vector, or -1.
int cut_index(const std::vector<FieldElement>& cuts, const FieldElement& x) {
    int lo = 0, hi = static_cast<int>(cuts.size()) - 1;
    while (lo <= hi) {
        int mid = lo + (hi - lo) / 2;
        int c = compare(cuts[mid], x);
        if (c == 0) return mid;
        if (c < 0)
            lo = mid + 1;
        else
            hi = mid - 1;
    }
    return -1;
}

FieldElement branch_value(const PLMap& map, const MapBranch& br, const FieldElement& x) {
    FieldElement bx = FieldElement::beta(map.field()) * x;
    return br.slope_sign > 0 ? bx + br.intercept : br.intercept - bx;
}

// Sorted image endpoints of the branch restricted to [a, b].
std::pair<FieldElement, FieldElement> branch_image(const PLMap& map, const MapBranch& br,
                                                  const FieldElement& a, const FieldElement& b) {
    FieldElement u = branch_value(map, br, a);
    FieldElement v = branch_value(map, br, b);
    if (br.slope_sign < 0) std::swap(u, v);
    return {u, v};
}

// Overlap of [lo, hi] with the branch domain, if it has interior.
std::optional<std::pair<FieldElement, FieldElement>> branch_overlap(const MapBranch& br,
                                                                    const FieldElement& lo,
                                                                    const FieldElement& hi) {
    FieldElement a = compare(lo, br.lo) > 0 ? lo : br.lo;
    FieldElement b = compare(hi, br.hi) < 0 ? hi : br.hi;
    if (compare(a, b) >= 0) return std::nullopt;
    return std::make_pair(a, b);
}

Rat pow2_neg(unsigned long bits) {
    Rat r(1);
    mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), bits);
    return r;
}

Rat rat_from_mpfr(mpfr_t x) {
    if (mpfr_zero_p(x)) return Rat(0);
    Int m;
    mpfr_exp_t e = mpfr_get_z_2exp(m.get_mpz_t(), x);
    Rat r(m);
    if (e >= 0)
        mpq_mul_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(e));
    else
        mpq_div_2exp(r.get_mpq_t(), r.get_mpq_t(), static_cast<unsigned long>(-e));
    return r;
}

// Directed log: rnd = MPFR_RNDD gives a lower bound of log x, MPFR_RNDU an
// upper bound (x > 0; monotonicity carries the conversion rounding through).
Rat log_directed(const Rat& x, mpfr_prec_t prec, mpfr_rnd_t rnd) {
    mpfr_t t;
    mpfr_init2(t, prec);
    mpfr_set_q(t, x.get_mpq_t(), rnd);
    mpfr_log(t, t, rnd);
    Rat r = rat_from_mpfr(t);
    mpfr_clear(t);
    return r;
}

// Row-echelon kernel of an n x n matrix over Q(beta); engages only when the
// kernel is one-dimensional, returning a spanning vector.
std::optional<std::vector<FieldElement>> kernel_vector(const FieldPtr& f,
                                                       std::vector<std::vector<FieldElement>> A) {
    const int n = static_cast<int>(A.size());
    std::vector<int> pivot_col;
    int row = 0;
    for (int col = 0; col < n && row < n; ++col) {
        int sel = -1;
        for (int i = row; i < n; ++i)
            if (!A[i][col].is_zero()) {
                sel = i;
                break;
            }
        if (sel < 0) continue;
        std::swap(A[row], A[sel]);
        for (int i = row + 1; i < n; ++i) {
            if (A[i][col].is_zero()) continue;
            FieldElement factor = A[i][col] / A[row][col];
            for (int j = col; j < n; ++j) A[i][j] -= factor * A[row][j];
        }
        pivot_col.push_back(col);
        ++row;
    }
    if (static_cast<int>(pivot_col.size()) != n - 1) return std::nullopt;

    int free_col = 0;
    {
        std::vector<bool> is_pivot(n, false);
        for (int c : pivot_col) is_pivot[c] = true;
        for (int c = 0; c < n; ++c)
            if (!is_pivot[c]) free_col = c;
    }
    std::vector<FieldElement> x(n, FieldElement::zero(f));
    x[free_col] = FieldElement::one(f);
    for (int r = static_cast<int>(pivot_col.size()) - 1; r >= 0; --r) {
        int pc = pivot_col[r];
        FieldElement sum = FieldElement::zero(f);
        for (int j = pc + 1; j < n; ++j)
            if (!A[r][j].is_zero()) sum += A[r][j] * x[j];
        x[pc] = -(sum / A[r][pc]);
    }
    return x;
}

void require_square(const TransitionMatrix& M) {
    for (const auto& row : M.m)
        if (row.size() != M.m.size()) throw InputError("transition matrix must be square");
}

std::vector<std::vector<long>> mat_mul(const std::vector<std::vector<long>>& a,
                                       const std::vector<std::vector<long>>& b) {
    const int n = static_cast<int>(a.size());
    std::vector<std::vector<long>> r(n, std::vector<long>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k)
            if (a[i][k])
                for (int j = 0; j < n; ++j) r[i][j] += a[i][k] * b[k][j];
    return r;
}

}  // namespace

bool is_markov(const PLMap& map, const std::vector<FieldElement>& cuts) {
    require_cuts(map.field(), cuts);
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        for (const MapBranch& br : map.branches()) {
            auto seg = branch_overlap(br, cuts[i], cuts[i + 1]);
            if (!seg) continue;
            auto [u, v] = branch_image(map, br, seg->first, seg->second);
            if (cut_index(cuts, u) < 0 || cut_index(cuts, v) < 0) return false;
        }
    return true;
}

std::optional<MarkovPartition> detect_markov(const PLMap& map, int max_depth) {
    if (max_depth < 1) throw InputError("orbit depth must be positive");
    const FieldPtr& f = map.field();

    std::vector<FieldElement> orbit{FieldElement::one(f)};
    bool closed = false;
    for (int k = 1; k <= max_depth && !closed; ++k) {
        FieldElement next = map.apply(orbit.back());
        for (const FieldElement& seen : orbit)
            if (seen == next) {
                closed = true;
                break;
            }
        if (!closed) orbit.push_back(std::move(next));
    }
    if (!closed) return std::nullopt;

    auto sorted_unique = [](std::vector<FieldElement> pts) {
        std::sort(pts.begin(), pts.end(),
                  [](const FieldElement& a, const FieldElement& b) { return compare(a, b) < 0; });
        pts.erase(std::unique(pts.begin(), pts.end(),
                              [](const FieldElement& a, const FieldElement& b) { return a == b; }),
                  pts.end());
        return pts;
    };

    std::vector<FieldElement> cuts = orbit;
    cuts.push_back(FieldElement::zero(f));
    cuts.push_back(FieldElement::one(f));
    cuts = sorted_unique(std::move(cuts));
    if (is_markov(map, cuts)) return MarkovPartition{map, std::move(cuts)};

    std::vector<FieldElement> extended = cuts;
    extended.push_back(map.branch_point());
    extended.push_back(fixed_point_small(f));
    extended.push_back(fixed_point_large(f));
    extended = sorted_unique(std::move(extended));
    if (is_markov(map, extended)) return MarkovPartition{map, std::move(extended)};

    return std::nullopt;
}

TransitionMatrix transition_matrix(const MarkovPartition& part) {
    const auto& cuts = part.cuts;
    require_cuts(part.map.field(), cuts);
    const int n = part.piece_count();
    TransitionMatrix M;
    M.m.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i)
        for (const MapBranch& br : part.map.branches()) {
            auto seg = branch_overlap(br, cuts[i], cuts[i + 1]);
            if (!seg) continue;
            auto [u, v] = branch_image(part.map, br, seg->first, seg->second);
            int ju = cut_index(cuts, u);
            int jv = cut_index(cuts, v);
            if (ju < 0 || jv < 0)
                throw NotMarkovError("piece image endpoint is not a cut point");
            for (int j = ju; j < jv; ++j) ++M.m[i][j];
        }
    return M;
}

TransitionMatrix companion_matrix(int n) {
    if (n < 1) throw InputError("matrix size must be positive");
    TransitionMatrix M;
    M.m.assign(n, std::vector<int>(n, 0));
    for (int j = 0; j < n; ++j) M.m[0][j] = 1;
    for (int i = 1; i < n; ++i) M.m[i][i - 1] = 1;
    return M;
}

Labeling chain_labeling(const TransitionMatrix& M) {
    require_square(M);
    const int n = M.size();
    if (n == 0) throw InputError("empty transition matrix");

    auto is_full = [&](int i) {
        for (int j = 0; j < n; ++j)
            if (M.m[i][j] == 0) return false;
        return true;
    };
    auto maps_exactly_onto = [&](int i, int target) {
        for (int j = 0; j < n; ++j) {
            if (j == target ? M.m[i][j] == 0 : M.m[i][j] != 0) return false;
        }
        return true;
    };

    Labeling L;
    int full_count = 0;
    for (int i = 0; i < n; ++i)
        if (is_full(i)) {
            L.order.push_back(i);
            ++full_count;
        }
    if (full_count != 1)
        throw CertificateError("chain labeling needs exactly one full-image state, found " +
                               std::to_string(full_count));
    L.order.resize(1);

    std::vector<bool> used(n, false);
    used[L.order[0]] = true;
    for (int a = 1; a < n; ++a) {
        int target = L.order[a - 1];
        int found = -1, count = 0;
        for (int i = 0; i < n; ++i)
            if (maps_exactly_onto(i, target)) {
                found = i;
                ++count;
            }
        if (count != 1)
            throw CertificateError("chain labeling step " + std::to_string(a) +
                                   " is not unique (" + std::to_string(count) + " candidates)");
        if (used[found])
            throw CertificateError("chain labeling closed on itself before covering every state");
        used[found] = true;
        L.order.push_back(found);
    }
    return L;
}

TransitionMatrix relabel(const TransitionMatrix& M, const Labeling& L) {
    require_square(M);
    const int n = M.size();
    if (static_cast<int>(L.order.size()) != n) throw InputError("labeling size mismatch");
    std::vector<bool> seen(n, false);
    for (int i : L.order) {
        if (i < 0 || i >= n || seen[i]) throw InputError("labeling is not a permutation");
        seen[i] = true;
    }
    TransitionMatrix R;
    R.m.assign(n, std::vector<int>(n, 0));
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) R.m[a][b] = M.m[L.order[a]][L.order[b]];
    return R;
}

std::optional<std::vector<int>> permutation_equivalence(const TransitionMatrix& A,
                                                        const TransitionMatrix& B) {
    require_square(A);
    require_square(B);
    if (A.size() != B.size()) return std::nullopt;
    const int n = A.size();
    if (n > 8) throw ResourceError("permutation search is limited to matrices of size 8");
    std::vector<int> perm(n);
    for (int i = 0; i < n; ++i) perm[i] = i;
    do {
        bool ok = true;
        for (int i = 0; i < n && ok; ++i)
            for (int j = 0; j < n && ok; ++j)
                if (A.m[perm[i]][perm[j]] != B.m[i][j]) ok = false;
        if (ok) return perm;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return std::nullopt;
}

R1Report check_r1(const FieldPtr& f, const TransitionMatrix& M) {
    require_square(M);
    const int n = M.size();
    if (n == 0) throw InputError("empty transition matrix");
    R1Report rep;

    // Strong connectivity: 0 reaches everything forward and backward.
    auto reaches_all = [&](bool forward) {
        std::vector<bool> vis(n, false);
        std::vector<int> stack{0};
        vis[0] = true;
        while (!stack.empty()) {
            int i = stack.back();
            stack.pop_back();
            for (int j = 0; j < n; ++j) {
                int edge = forward ? M.m[i][j] : M.m[j][i];
                if (edge != 0 && !vis[j]) {
                    vis[j] = true;
                    stack.push_back(j);
                }
            }
        }
        return std::all_of(vis.begin(), vis.end(), [](bool b) { return b; });
    };
    rep.irreducible = reaches_all(true) && reaches_all(false);

    rep.rows_contiguous = true;
    for (int i = 0; i < n; ++i) {
        int first = -1, last = -1;
        for (int j = 0; j < n; ++j)
            if (M.m[i][j] != 0) {
                if (first < 0) first = j;
                last = j;
            }
        if (first < 0) {
            rep.rows_contiguous = false;
            continue;
        }
        for (int j = first; j <= last; ++j)
            if (M.m[i][j] == 0) rep.rows_contiguous = false;
    }

    // Characteristic polynomial of M by the trace recursion, exactly over Q.
    {
        std::vector<std::vector<Rat>> B(n, std::vector<Rat>(n, 0));
        for (int i = 0; i < n; ++i) B[i][i] = 1;
        std::vector<Rat> coeffs(n + 1, Rat(0));
        coeffs[n] = 1;
        for (int k = 1; k <= n; ++k) {
            std::vector<std::vector<Rat>> C(n, std::vector<Rat>(n, 0));
            for (int i = 0; i < n; ++i)
                for (int l = 0; l < n; ++l)
                    if (M.m[i][l] != 0)
                        for (int j = 0; j < n; ++j) C[i][j] += Rat(M.m[i][l]) * B[l][j];
            Rat tr(0);
            for (int i = 0; i < n; ++i) tr += C[i][i];
            Rat ck = -tr / k;
            coeffs[n - k] = ck;
            B = std::move(C);
            for (int i = 0; i < n; ++i) B[i][i] += ck;
        }
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j)
                if (B[i][j] != 0) throw Error("characteristic polynomial recursion failed");
        rep.charpoly = QPoly(std::move(coeffs));
    }

    {
        auto [q, r] = QPoly::divmod(rep.charpoly, QPoly(f->minpoly()));
        (void)q;
        rep.minpoly_divides_charpoly = r.is_zero();
    }

    // One-dimensional eigenspace of beta with a positive vector, on each side.
    FieldElement beta = FieldElement::beta(f);
    auto eigen = [&](bool right_side) -> std::pair<bool, std::vector<FieldElement>> {
        std::vector<std::vector<FieldElement>> A(
            n, std::vector<FieldElement>(n, FieldElement::zero(f)));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                int entry = right_side ? M.m[i][j] : M.m[j][i];
                A[i][j] = FieldElement::from_int(f, entry);
                if (i == j) A[i][j] -= beta;
            }
        auto x = kernel_vector(f, std::move(A));
        if (!x) return {false, {}};
        if (x->back().is_zero()) return {false, *x};
        FieldElement scale = x->back().inverse();
        for (FieldElement& e : *x) e = e * scale;
        bool positive = std::all_of(x->begin(), x->end(),
                                    [](const FieldElement& e) { return e.sign() > 0; });
        return {positive, *x};
    };
    auto [rpos, rvec] = eigen(true);
    auto [lpos, lvec] = eigen(false);
    rep.right_eigenvector_positive = rpos;
    rep.left_eigenvector_positive = lpos;
    rep.right = std::move(rvec);
    rep.left = std::move(lvec);

    rep.all_ok = rep.irreducible && rep.rows_contiguous && rep.minpoly_divides_charpoly &&
                 rep.right_eigenvector_positive && rep.left_eigenvector_positive;
    return rep;
}

MarkovMeasure parry_measure(const FieldPtr& f, const TransitionMatrix& M) {
    R1Report r1 = check_r1(f, M);
    if (!r1.all_ok)
        throw CertificateError("transition matrix fails the spectral-radius certificate");
    const int n = M.size();
    FieldElement beta = FieldElement::beta(f);
    FieldElement zero = FieldElement::zero(f);
    FieldElement one = FieldElement::one(f);

    MarkovMeasure mu;
    mu.field = f;
    mu.matrix = M;
    mu.u = r1.left;
    mu.v = r1.right;
    mu.P.assign(n, std::vector<FieldElement>(n, zero));
    for (int i = 0; i < n; ++i) {
        FieldElement denom = beta * mu.v[i];
        for (int j = 0; j < n; ++j)
            if (M.m[i][j] != 0)
                mu.P[i][j] = FieldElement::from_int(f, M.m[i][j]) * mu.v[j] / denom;
    }
    FieldElement z = zero;
    for (int i = 0; i < n; ++i) z += mu.u[i] * mu.v[i];
    mu.q.reserve(n);
    for (int i = 0; i < n; ++i) mu.q.push_back(mu.u[i] * mu.v[i] / z);

    // The eigenvector identities make these exact; any failure is a bug.
    for (int i = 0; i < n; ++i) {
        FieldElement row = zero;
        for (int j = 0; j < n; ++j) row += mu.P[i][j];
        if (row != one) throw Error("stochastic row sum is not 1");
    }
    FieldElement qsum = zero;
    for (int i = 0; i < n; ++i) {
        if (mu.q[i].sign() <= 0) throw Error("stationary weight is not positive");
        qsum += mu.q[i];
    }
    if (qsum != one) throw Error("stationary weights do not sum to 1");
    for (int j = 0; j < n; ++j) {
        FieldElement s = zero;
        for (int i = 0; i < n; ++i) s += mu.q[i] * mu.P[i][j];
        if (s != mu.q[j]) throw Error("stationary vector is not invariant");
    }
    return mu;
}

FieldElement cylinder_measure(const MarkovMeasure& mu, const std::vector<int>& word) {
    const int n = static_cast<int>(mu.q.size());
    if (word.empty()) return FieldElement::one(mu.field);
    for (int w : word)
        if (w < 0 || w >= n) throw InputError("cylinder word symbol out of range");
    FieldElement acc = mu.q[word[0]];
    for (std::size_t i = 0; i + 1 < word.size(); ++i) {
        if (acc.is_zero()) break;
        acc = acc * mu.P[word[i]][word[i + 1]];
    }
    return acc;
}

std::pair<Rat, Rat> entropy(const MarkovMeasure& mu, const Rat& width) {
    if (width <= 0) throw InputError("entropy enclosure width must be positive");
    const int n = static_cast<int>(mu.q.size());
    const Rat one(1);

    for (int round = 0; round < 48; ++round) {
        const Rat delta = pow2_neg(64ul * (round + 1));
        const mpfr_prec_t prec = 128 * (round + 1);

        Rat lo(0), hi(0);
        bool usable = true;
        for (int i = 0; i < n && usable; ++i) {
            RatInterval qi = mu.q[i].enclosure(delta);
            if (qi.lo < 0) qi.lo = 0;
            for (int j = 0; j < n && usable; ++j) {
                if (mu.matrix.m[i][j] == 0) continue;
                RatInterval pij = mu.P[i][j].enclosure(delta);
                if (pij.hi > one) pij.hi = one;
                if (pij.lo <= 0) {
                    usable = false;
                    break;
                }
                // -p log p over [pij.lo, pij.hi], logs rounded outward.
                Rat term_lo = -log_directed(pij.hi, prec, MPFR_RNDU);
                Rat term_hi = -log_directed(pij.lo, prec, MPFR_RNDD);
                lo += qi.lo * pij.lo * term_lo;
                hi += qi.hi * pij.hi * term_hi;
            }
        }
        if (usable && hi - lo <= width) return {lo, hi};
    }
    throw ResourceError("entropy enclosure did not reach the requested width");
}

std::pair<Rat, Rat> log_enclosure(const FieldPtr& f, const Rat& width) {
    if (width <= 0) throw InputError("log enclosure width must be positive");
    Rat target = width / 4;
    const Rat floor = pow2_neg(static_cast<unsigned long>(f->precision_limit()));
    for (int round = 0; round < 48; ++round) {
        if (target < floor) target = floor;
        RatInterval iv = f->ensure_width(target);
        if (iv.lo <= 0) throw Error("isolating interval escaped the positive axis");
        const mpfr_prec_t prec = 128 * (round + 1);
        Rat lo = log_directed(iv.lo, prec, MPFR_RNDD);
        Rat hi = log_directed(iv.hi, prec, MPFR_RNDU);
        if (hi - lo <= width) return {lo, hi};
        target /= 16;
    }
    throw ResourceError("log enclosure did not reach the requested width");
}

namespace {

struct Cell {
    FieldElement lo, hi;
};

// Pullback of [t_lo, t_hi] into the given piece: the x in the piece with
// F(x) in the target, one interval per branch that contributes.
std::vector<Cell> pull_into_piece(const PLMap& map, const FieldElement& piece_lo,
                                  const FieldElement& piece_hi, const FieldElement& t_lo,
                                  const FieldElement& t_hi) {
    std::vector<Cell> out;
    FieldElement inv_beta = map.branch_point();  // 1/beta
    for (const MapBranch& br : map.branches()) {
        auto seg = branch_overlap(br, piece_lo, piece_hi);
        if (!seg) continue;
        auto [u, v] = branch_image(map, br, seg->first, seg->second);
        FieldElement a = compare(u, t_lo) > 0 ? u : t_lo;
        FieldElement b = compare(v, t_hi) < 0 ? v : t_hi;
        if (compare(a, b) >= 0) continue;
        FieldElement xa = (a - br.intercept) * inv_beta;
        FieldElement xb = (b - br.intercept) * inv_beta;
        if (br.slope_sign < 0) {
            xa = -xa;
            xb = -xb;
            std::swap(xa, xb);
        }
        out.push_back({std::move(xa), std::move(xb)});
    }
    std::sort(out.begin(), out.end(),
              [](const Cell& x, const Cell& y) { return compare(x.lo, y.lo) < 0; });
    return out;
}

}  // namespace

CodingReport coding_check(const MarkovPartition& part, const TransitionMatrix& M, int depth) {
    if (depth < 1) throw InputError("coding depth must be positive");
    require_square(M);
    const int n = part.piece_count();
    if (M.size() != n) throw InputError("matrix size does not match the partition");
    const FieldPtr& f = part.map.field();
    const PLMap& map = part.map;
    const FieldElement one = FieldElement::one(f);
    const FieldElement crit = map.branch_point();

    CodingReport rep;
    rep.depth = depth;
    rep.cells_ok = rep.disjoint_ok = rep.lengths_ok = rep.shift_ok = true;

    // Entry sums of M^{L-1} count the admissible words of length L.
    {
        std::vector<std::vector<long>> base(n, std::vector<long>(n, 0)), pw(n, std::vector<long>(n, 0));
        for (int i = 0; i < n; ++i) {
            pw[i][i] = 1;
            for (int j = 0; j < n; ++j) base[i][j] = M.m[i][j];
        }
        for (int L = 1; L <= depth; ++L) {
            long total = 0;
            for (const auto& row : pw)
                for (long e : row) total += e;
            rep.expected_counts.push_back(total);
            if (L < depth) pw = mat_mul(pw, base);
        }
    }

    // Word cells, built by pulling each suffix cell back one step.
    std::map<std::vector<int>, Cell> prev;
    for (int j = 0; j < n; ++j) prev.emplace(std::vector<int>{j}, Cell{part.cuts[j], part.cuts[j + 1]});

    for (int L = 1; L <= depth; ++L) {
        if (L > 1) {
            std::map<std::vector<int>, Cell> next;
            for (const auto& [word, cell] : prev) {
                for (int a = 0; a < n; ++a) {
                    if (M.m[a][word[0]] == 0) continue;
                    auto pulled = pull_into_piece(map, part.cuts[a], part.cuts[a + 1], cell.lo, cell.hi);
                    if (pulled.empty()) continue;
                    if (pulled.size() != 1) {
                        rep.cells_ok = false;
                        continue;
                    }
                    std::vector<int> w{a};
                    w.insert(w.end(), word.begin(), word.end());

                    // Shift compatibility: the branch image of the cell must
                    // cover the suffix cell.
                    const Cell& c = pulled.front();
                    if (compare(c.hi, crit) <= 0 || compare(c.lo, crit) >= 0) {
                        const MapBranch& br = map.branches()[compare(c.lo, crit) >= 0 ? 1 : 0];
                        auto [u, v] = branch_image(map, br, c.lo, c.hi);
                        if (compare(u, cell.lo) > 0 || compare(v, cell.hi) < 0) rep.shift_ok = false;
                    } else {
                        rep.shift_ok = false;
                    }
                    next.emplace(std::move(w), c);
                }
            }
            prev = std::move(next);
        }

        rep.word_counts.push_back(static_cast<long>(prev.size()));

        std::vector<const Cell*> cells;
        cells.reserve(prev.size());
        FieldElement total = FieldElement::zero(f);
        for (const auto& [word, cell] : prev) {
            if (compare(cell.lo, cell.hi) >= 0) rep.cells_ok = false;
            total += cell.hi - cell.lo;
            cells.push_back(&cell);
        }
        std::sort(cells.begin(), cells.end(),
                  [](const Cell* x, const Cell* y) { return compare(x->lo, y->lo) < 0; });
        for (std::size_t i = 0; i + 1 < cells.size(); ++i)
            if (compare(cells[i]->hi, cells[i + 1]->lo) > 0) rep.disjoint_ok = false;
        if (total != one) rep.lengths_ok = false;
    }

    rep.counts_ok = (rep.word_counts == rep.expected_counts);
    rep.all_ok = rep.counts_ok && rep.cells_ok && rep.disjoint_ok && rep.lengths_ok && rep.shift_ok;
    return rep;
}

Certificate certify_isomorphism(const FieldPtr& f) {
    BetaClass cls = classify_beta(f);
    if (cls.kind != BetaClass::Kind::Exact)
        throw WrongRegimeError("isomorphism certificate requires a multinacci beta; regime is " +
                               to_string(cls));
    const int n = cls.n;

    Certificate cert;
    cert.n = n;
    cert.cls = cls;

    auto build = [&](Orientation o, std::vector<FieldElement>& cuts_out, Labeling& label_out) {
        const char* name = o == Orientation::Positive ? "positive" : "negative";
        auto part = detect_markov(make_map(f, o), 2 * n + 8);
        if (!part)
            throw CertificateError(std::string("no Markov partition detected for the ") + name +
                                   " map");
        TransitionMatrix raw = transition_matrix(*part);
        try {
            label_out = chain_labeling(raw);
        } catch (const CertificateError& e) {
            throw CertificateError(std::string(name) + " map: " + e.what());
        }
        cuts_out = part->cuts;
        return relabel(raw, label_out);
    };

    TransitionMatrix pos = build(Orientation::Positive, cert.cuts_pos, cert.label_pos);
    TransitionMatrix neg = build(Orientation::Negative, cert.cuts_neg, cert.label_neg);
    TransitionMatrix target = companion_matrix(n);

    if (!(pos == target) || !(neg == target)) {
        std::string diag;
        try {
            auto perm = permutation_equivalence(pos, neg);
            diag = perm ? "the two labeled matrices are permutation-equivalent"
                        : "the two labeled matrices are not permutation-equivalent";
        } catch (const ResourceError&) {
            diag = "permutation diagnostic skipped (size exceeds brute-force bound)";
        }
        throw CertificateError("labeled transition matrices do not both match the companion form; " +
                               diag);
    }

    cert.matrix = target;
    cert.r1 = check_r1(f, target);
    if (!cert.r1.all_ok)
        throw CertificateError("companion matrix failed the spectral-radius certificate");
    cert.ok = true;
    return cert;
}

}  // namespace betamorph
