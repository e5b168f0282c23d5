#pragma once
#include <filesystem>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "bidsim/model.hpp"

namespace bidsim {

// I/O and parse failures (CLI exit code 2), as opposed to domain findings.
struct IoError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct StrategyAnnotation {
    std::string name;
    int strategy = -1;  // index into {Basic, Negative-in-area, Overlap, Cycle, Popularity}, -1 undiscerned
    std::optional<bool> discussed;
};

extern const std::vector<std::string> kStrategyNames;

struct Dataset {
    ConferenceInstance instance;
    BidMatrix honest_bids;
    BidMatrix malicious_bids;
    std::set<int> honest_responders;
    std::set<int> malicious_responders;
    std::vector<StrategyAnnotation> annotations;
    std::map<std::string, int> reviewer_by_name;

    // annotated strategy index for reviewer id, or nullopt if not annotated
    std::optional<int> strategy_of(int reviewer) const;
};

Dataset load_dataset(const std::filesystem::path& dir);
void write_dataset(const Dataset& ds, const std::filesystem::path& dir);

struct Finding {
    std::string message;
};

std::vector<Finding> validate_dataset(const Dataset& ds);

// Minimal CSV support (quoted fields, embedded commas/quotes).
std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& file);
std::string csv_escape(const std::string& cell);

BidLevel parse_bid_string(const std::string& raw);  // vocabulary + empty -> {-1,0,1,0}
const std::string& bid_string(BidLevel level);

}  // namespace bidsim
