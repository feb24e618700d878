#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "betamorph/maps.hpp"

namespace betamorph {

// A finite cut set 0 = cuts[0] < ... < cuts[m] = 1 whose open pieces the map
// sends, branch by branch, exactly onto unions of pieces.
struct MarkovPartition {
    PLMap map;
    std::vector<FieldElement> cuts;

    int piece_count() const { return static_cast<int>(cuts.size()) - 1; }
};

// True when every piece, restricted to each map branch it meets, has its
// image endpoints in the cut set.
bool is_markov(const PLMap& map, const std::vector<FieldElement>& cuts);

// Follows the orbit of 1 to an exact repeat (at most max_depth steps), then
// tries the closed orbit together with {0,1} as the cut set; if that fails,
// retries with 1/beta and both fixed points of the negative map added.
// nullopt when the orbit does not close or neither candidate is Markov.
std::optional<MarkovPartition> detect_markov(const PLMap& map, int max_depth);

// counts[i][j] = how many times piece i covers piece j (0 or 1 in every case
// this tool produces).
struct TransitionMatrix {
    std::vector<std::vector<int>> m;

    int size() const { return static_cast<int>(m.size()); }
    bool operator==(const TransitionMatrix&) const = default;
};

TransitionMatrix transition_matrix(const MarkovPartition& part);

// n x n 0/1 matrix with first row all ones and ones on the subdiagonal; its
// spectral radius is the n-th multinacci number.
TransitionMatrix companion_matrix(int n);

// order[a] = index of the piece labeled E_{a+1} by the chain rule: E_1 is the
// unique piece with full image, E_{a+1} the unique piece mapping exactly onto
// E_a.  CertificateError when the chain is not unique or incomplete.
struct Labeling {
    std::vector<int> order;
};

Labeling chain_labeling(const TransitionMatrix& M);

TransitionMatrix relabel(const TransitionMatrix& M, const Labeling& L);

// Finds a permutation carrying A to B by brute force (sizes up to 8);
// nullopt when none exists.
std::optional<std::vector<int>> permutation_equivalence(const TransitionMatrix& A,
                                                        const TransitionMatrix& B);

// Certifies that beta is the spectral radius: the matrix is irreducible, its
// rows have contiguous ones, the field's defining polynomial divides the
// characteristic polynomial, and both one-dimensional eigenspaces for beta
// carry strictly positive eigenvectors (Perron-Frobenius then pins the
// spectral radius to beta).
struct R1Report {
    bool irreducible = false;
    bool rows_contiguous = false;
    bool minpoly_divides_charpoly = false;
    bool right_eigenvector_positive = false;
    bool left_eigenvector_positive = false;
    QPoly charpoly;
    std::vector<FieldElement> right, left;  // normalized: last entry 1
    bool all_ok = false;
};

R1Report check_r1(const FieldPtr& f, const TransitionMatrix& M);

// Stationary Markov chain of the matrix: P_ij = M_ij v_j / (beta v_i) and
// q_i = u_i v_i / <u,v>, with u, v the positive left/right eigenvectors.
// Row sums and stationarity are verified exactly on construction.
struct MarkovMeasure {
    FieldPtr field;
    TransitionMatrix matrix;
    std::vector<std::vector<FieldElement>> P;
    std::vector<FieldElement> q;
    std::vector<FieldElement> u, v;
};

MarkovMeasure parry_measure(const FieldPtr& f, const TransitionMatrix& M);

// Measure of the cylinder [w_0 ... w_{L-1}]: q_{w_0} * prod P_{w_i w_{i+1}}.
// Zero exactly on forbidden words.
FieldElement cylinder_measure(const MarkovMeasure& mu, const std::vector<int>& word);

// Rational enclosure of the entropy -sum_i q_i sum_j P_ij log P_ij, at most
// `width` wide.  All arithmetic is exact except the logarithms, which are
// rounded outward.
std::pair<Rat, Rat> entropy(const MarkovMeasure& mu, const Rat& width);

// Rational enclosure of log beta, at most `width` wide.
std::pair<Rat, Rat> log_enclosure(const FieldPtr& f, const Rat& width);

// Compares the symbolic dynamics of the partition against the matrix: for
// every length L <= depth, the nonempty word cells of the refinement are
// counted by the entry sum of M^{L-1}, are pairwise disjoint intervals of
// positive total length 1, and shift into each other's successors.
struct CodingReport {
    int depth = 0;
    std::vector<long> word_counts;      // per length 1..depth
    std::vector<long> expected_counts;  // entry sums of M^{L-1}
    bool counts_ok = false;
    bool cells_ok = false;      // every nonempty cell is one positive interval
    bool disjoint_ok = false;   // cells of equal length do not overlap
    bool lengths_ok = false;    // cell lengths sum to 1 at every depth
    bool shift_ok = false;      // image of a cell covers its shifted cell
    bool all_ok = false;
};

CodingReport coding_check(const MarkovPartition& part, const TransitionMatrix& M, int depth);

// Full certificate for a multinacci beta: both maps admit Markov partitions
// on the closed orbit of 1, the chain labeling carries both transition
// matrices onto the same companion matrix, and that matrix passes check_r1.
struct Certificate {
    int n = 0;
    BetaClass cls;
    std::vector<FieldElement> cuts_pos, cuts_neg;
    Labeling label_pos, label_neg;
    TransitionMatrix matrix;  // common labeled matrix
    R1Report r1;
    bool ok = false;
};

// WrongRegimeError for non-multinacci beta; CertificateError when any stage
// fails (the message includes a permutation-equivalence diagnostic when the
// labeled matrices disagree).
Certificate certify_isomorphism(const FieldPtr& f);

}  // namespace betamorph
