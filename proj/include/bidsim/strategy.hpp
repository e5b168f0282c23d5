#pragma once
#include <string>
#include <vector>

#include "bidsim/dataset_io.hpp"
#include "bidsim/model.hpp"
#include "bidsim/rng.hpp"

namespace bidsim {

enum class StrategyKind { Basic = 0, NegativeInArea = 1, Overlap = 2, Cycle = 3, Popularity = 4 };

const std::string& strategy_name(StrategyKind kind);
StrategyKind parse_strategy(const std::string& name);  // accepts canonical names, case-insensitive

// Bid counts of one model reviewer over the in-topic / out-of-topic paper
// partition, excluding the model's own papers.
struct BidProfileStats {
    int pos_in_topic = 0;
    int pos_out_topic = 0;
    int neg_in_topic = 0;
    int neg_out_topic = 0;
};

BidProfileStats extract_stats(const ReviewerProfile& model_reviewer, const BidMatrix& model_bids,
                              const ConferenceInstance& instance);

// Honest bid row: positive counts copied verbatim, negative counts scaled by
// paper_ratio (round half up), both capped at partition size; never bids on
// the reviewer's own papers.
std::vector<BidLevel> generate_honest_bids(const ReviewerProfile& reviewer,
                                           const ConferenceInstance& instance,
                                           const BidProfileStats& model_stats, double paper_ratio,
                                           Rng& rng);

// Per-member bid rows: honest-style background from same-strategy models in
// `source`, then strategy-specific target overrides.
std::vector<std::vector<BidLevel>> generate_malicious_bids(const std::vector<int>& group,
                                                           StrategyKind strategy,
                                                           const ConferenceInstance& instance,
                                                           const Dataset& source, Rng& rng);

struct SyntheticConfig {
    int n = 500;  // reviewers = papers
    int group_size = 2;
    StrategyKind strategy = StrategyKind::Basic;
    std::uint64_t seed = 0;
};

struct SyntheticInstance {
    ConferenceInstance instance;
    BidMatrix bids;
    std::vector<int> malicious;  // reviewer ids of the planted group, in cycle order
};

SyntheticInstance build_synthetic_instance(const SyntheticConfig& config, const Dataset& source);

}  // namespace bidsim
