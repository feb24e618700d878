#pragma once

#include <optional>
#include <string>
#include <vector>

#include "betamorph/maps.hpp"

namespace betamorph {

// One monotone branch of F^n: the affine formula
//   F^n(x) = slope_sign * beta^level * x + intercept
// on the open cell (dom_lo, dom_hi), with open image (img_lo, img_hi).
// type_id tracks the image shape through the construction:
//   positive map: type j has image (0, u_j);
//   negative map: even types (0, v_j), odd types (v_j, 1), where u/v is the
//   orbit of 1 extended affinely through the branch point.
struct MonotoneBranch {
    FieldElement dom_lo, dom_hi;
    int slope_sign;
    FieldElement intercept;
    FieldElement img_lo, img_hi;
    int type_id;
};

struct BranchDecomposition {
    FieldPtr field;
    Orientation orient;
    int level = 0;
    std::vector<MonotoneBranch> branches;  // ordered left to right
};

// Branch count doubles per level at worst; this caps the work at ~4M branches.
inline constexpr int kMaxDecomposeLevel = 22;

// Splits F^n into its monotone branches by iterating the one-step refinement:
// a branch splits exactly when 1/beta lies strictly inside its image.
// Throws ResourceError above kMaxDecomposeLevel.
BranchDecomposition decompose(const PLMap& map, int n);

// Independent pass over a finished decomposition: cells tile (0,1), images
// match the affine formula on the cell endpoints, and every branch's image is
// the shape its type claims.  ClassificationError on any mismatch.
void validate_decomposition(const BranchDecomposition& d);

// counts[j] = number of branches of type j; size level+1.
std::vector<long> type_census(const BranchDecomposition& d);

// Predicted census of T^m for beta in Gap(n) or Exact(n), valid for m <= n:
// below level n every branch splits, at level n the next-to-last type fails to
// split, losing one branch.
std::vector<long> kappa_closed(int n, int m);

// Predicted census of S^m while every branch splits (valid for m = 1 and, for
// beta in Gap(n) / Exact(n), for m <= n-1).
std::vector<long> iota_closed(int m);

// At step n the census depends on the parity of n and the position of
// S^{n-1}(1) relative to 1/beta: below / at / above.
enum class CaseTag { C1, C2, C3, C1s, C2s, C3s };

std::string to_string(CaseTag t);

// Decides the level-n case for beta in Gap(n) or Exact(n); WrongRegimeError
// for SubGolden.
CaseTag select_case(const FieldPtr& f, int n);

// Predicted census of S^n for the given case.
std::vector<long> iota_n_closed(int n, CaseTag tag);

// Preimage-count step function of F^n: values[i] counts the branches of F^n
// whose image covers the open cell (breakpoints[i], breakpoints[i+1]).
struct PreimageSpectrum {
    FieldPtr field;
    Orientation orient;
    int level = 0;
    std::vector<FieldElement> breakpoints;  // 0 = b_0 < ... < b_M = 1
    std::vector<long> values;               // size M
};

PreimageSpectrum preimage_spectrum(const PLMap& map, int n);

// Total length of { x : spectrum value at x == k }.
FieldElement level_set(const PreimageSpectrum& spec, long k);

// Sum of value * cell length; equals beta^level exactly.
FieldElement spectrum_mass(const PreimageSpectrum& spec);

// values[i] mod 2 per cell.
std::vector<int> parity_profile(const PreimageSpectrum& spec);

// A preimage count attained on sets of different total length by the two
// maps' n-th powers; any one of these rules out a measure isomorphism.
struct Witness {
    long k;
    FieldElement length_plus;   // total length where the positive map attains k
    FieldElement length_minus;  // same for the negative map
};

struct Verdict {
    enum class Kind { IsomorphicMultinacci, NotIsomorphic, Inconclusive };
    Kind kind = Kind::Inconclusive;
    BetaClass cls;
    int iterate = 0;  // spectra were compared at this power
    std::vector<Witness> witnesses;
    std::optional<CaseTag> case_tag;
    // The negative map's orbit of 1 closes (S^{n-1}(1) = 1/beta) even though
    // the maps are not isomorphic.
    bool boundary_markov = false;
};

std::string to_string(Verdict::Kind k);

// Multinacci beta: reports the isomorphic verdict (the certificate itself is
// built by the transition-matrix machinery).  Otherwise compares the preimage
// spectra at the regime's iterate (3 for SubGolden, n for Gap(n)) and returns
// every witness found.  forced_iterate overrides the iterate when positive.
Verdict obstruction_check(const FieldPtr& f, int forced_iterate = 0);

// The witness values the case analysis promises; always a subset of what the
// scan finds.  Empty for Exact.
std::vector<long> predicted_witnesses(const BetaClass& cls, std::optional<CaseTag> tag);

}  // namespace betamorph
