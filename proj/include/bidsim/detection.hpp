#pragma once
#include <set>
#include <vector>

#include "bidsim/model.hpp"

namespace bidsim {

// Bids with own-paper entries zeroed, plus the authorship map needed by the
// ring detector.
struct DetectionInput {
    BidMatrix bids;
    std::vector<std::set<int>> authored;  // reviewer -> authored paper ids

    static DetectionInput from(const BidMatrix& bids, const std::vector<std::set<int>>& authored);
};

struct SuspicionRanking {
    std::vector<int> order;      // index 0 = most suspicious reviewer id
    std::vector<double> scores;  // raw per-reviewer score

    int rank_of(int reviewer) const;
    double normalized_rank(int reviewer) const;  // rank / R
};

SuspicionRanking counting_detect(const DetectionInput& input);
SuspicionRanking ring_detect(const DetectionInput& input);
SuspicionRanking lowrank_detect(const DetectionInput& input, int rank = 3);

// Deterministic truncated SVD used by lowrank_detect; exposed for testing.
// Returns the rank-k projection L of B minimizing the Frobenius error.
std::vector<double> lowrank_approximation(const BidMatrix& bids, int rank);

}  // namespace bidsim
