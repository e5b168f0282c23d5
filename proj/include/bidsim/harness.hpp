#pragma once
#include <cstdint>
#include <string>
#include <vector>

#include "bidsim/dataset_io.hpp"
#include "bidsim/model.hpp"
#include "bidsim/rng.hpp"
#include "bidsim/strategy.hpp"

namespace bidsim {

// One evaluation unit of the real-data protocol: a colluding group's
// responding malicious members, or a single solo attacker.
struct TrialUnit {
    std::string name;
    std::vector<int> malicious;    // annotated malicious responders, ascending
    std::vector<int> all_members;  // excluded from the honest filler pool
    std::uint64_t key = 0;         // stable seed key
};

std::vector<TrialUnit> real_units(const Dataset& ds);

// A resampled 28-reviewer population sharing the dataset's papers.
struct TrialPopulation {
    ConferenceInstance instance;  // reviewers renumbered 0..R-1
    BidMatrix bids;
    std::vector<int> original_ids;  // local id -> dataset reviewer id
    std::vector<int> malicious;     // local ids
};

TrialPopulation build_trial_population(const Dataset& ds, const TrialUnit& unit, Rng& rng);

// success flag per population.malicious entry
std::vector<bool> run_success_trial(const TrialPopulation& population, std::uint64_t tie_seed);

struct DetectionRanks {
    std::vector<int> counting;  // per population.malicious entry
    std::vector<int> ring;
    std::vector<int> lowrank;
};

DetectionRanks run_detection_trial(const TrialPopulation& population, int svd_rank = 3);

enum class ExperimentMode { Real, Synthetic };

struct ExperimentConfig {
    ExperimentMode mode = ExperimentMode::Real;
    int trials = 100;
    std::uint64_t master_seed = 7;
    int jobs = 1;  // 0 = hardware concurrency
    int svd_rank = 3;
    // synthetic mode
    std::vector<int> sizes = {2, 3, 4};
    std::vector<int> ns = {500};
    std::vector<StrategyKind> strategies = {StrategyKind::Basic, StrategyKind::NegativeInArea,
                                            StrategyKind::Overlap, StrategyKind::Cycle};
};

struct AggregateRow {
    std::string metric;    // success | counting_rank | ... | counting_norm | ...
    std::string strategy;  // strategy name, "none", or "Overall"
    int group_size = 0;    // 0 in real mode
    int n = 0;
    double mean = 0.0;
    double sem = 0.0;  // 0 when trials < 2
    int trials = 0;
};

struct AggregateReport {
    std::vector<AggregateRow> rows;

    const AggregateRow* find(const std::string& metric, const std::string& strategy,
                             int group_size = 0, int n = 0) const;
};

AggregateReport run_experiment(const ExperimentConfig& config, const Dataset& source);

std::string report_to_csv(const AggregateReport& report);

}  // namespace bidsim
