#include "bidsim/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <thread>

#include "bidsim/assignment.hpp"
#include "bidsim/detection.hpp"

namespace bidsim {

std::vector<TrialUnit> real_units(const Dataset& ds) {
    std::vector<TrialUnit> units;
    for (const auto& [gid, members] : ds.instance.groups) {
        TrialUnit unit;
        unit.name = "G" + std::to_string(gid);
        unit.key = static_cast<std::uint64_t>(gid);
        unit.all_members = members;
        for (int r : members)
            if (ds.malicious_responders.count(r) && ds.strategy_of(r)) unit.malicious.push_back(r);
        std::sort(unit.malicious.begin(), unit.malicious.end());
        if (!unit.malicious.empty()) units.push_back(std::move(unit));
    }
    for (const ReviewerProfile& rev : ds.instance.reviewers) {
        if (rev.group || rev.target_papers.empty()) continue;  // solos: targets, no group
        if (!ds.malicious_responders.count(rev.id) || !ds.strategy_of(rev.id)) continue;
        TrialUnit unit;
        unit.name = "s" + std::to_string(rev.id);
        unit.key = 100000ULL + static_cast<std::uint64_t>(rev.id);
        unit.malicious = {rev.id};
        unit.all_members = {rev.id};
        units.push_back(std::move(unit));
    }
    return units;
}

TrialPopulation build_trial_population(const Dataset& ds, const TrialUnit& unit, Rng& rng) {
    int P = static_cast<int>(ds.instance.papers.size());
    int need = P - static_cast<int>(unit.malicious.size());
    if (need < 0) throw std::invalid_argument("group larger than the population size");
    std::vector<int> pool;
    for (int r : ds.honest_responders)
        if (std::find(unit.all_members.begin(), unit.all_members.end(), r) ==
            unit.all_members.end())
            pool.push_back(r);
    if (static_cast<int>(pool.size()) < need)
        throw std::runtime_error("insufficient honest responders to fill the population");
    std::vector<int> fillers = rng.sample(pool, static_cast<std::size_t>(need));

    TrialPopulation pop;
    pop.original_ids = unit.malicious;
    pop.original_ids.insert(pop.original_ids.end(), fillers.begin(), fillers.end());
    std::sort(pop.original_ids.begin(), pop.original_ids.end());

    pop.instance.taxonomy = ds.instance.taxonomy;
    pop.instance.papers = ds.instance.papers;
    pop.instance.paper_load = ds.instance.paper_load;
    pop.instance.reviewer_load = ds.instance.reviewer_load;
    pop.bids = BidMatrix(static_cast<int>(pop.original_ids.size()), P);
    for (std::size_t i = 0; i < pop.original_ids.size(); ++i) {
        int orig = pop.original_ids[i];
        ReviewerProfile rev = ds.instance.reviewers[orig];
        rev.id = static_cast<int>(i);
        pop.instance.reviewers.push_back(std::move(rev));
        bool mal = std::find(unit.malicious.begin(), unit.malicious.end(), orig) !=
                   unit.malicious.end();
        if (mal) pop.malicious.push_back(static_cast<int>(i));
        const BidMatrix& src = mal ? ds.malicious_bids : ds.honest_bids;
        for (int p = 0; p < P; ++p) pop.bids.set(static_cast<int>(i), p, src(orig, p));
    }
    return pop;
}

namespace {

AssignmentProblem make_problem(const ConferenceInstance& instance, const BidMatrix& bids) {
    AssignmentProblem prob;
    prob.similarity = build_similarity_matrix(instance, bids);
    prob.paper_load = instance.paper_load;
    prob.reviewer_load = instance.reviewer_load;
    for (const ReviewerProfile& rev : instance.reviewers)
        for (int p : rev.authored_papers) prob.conflicts.emplace_back(rev.id, p);
    return prob;
}

std::vector<std::set<int>> authored_map(const ConferenceInstance& instance) {
    std::vector<std::set<int>> authored;
    authored.reserve(instance.reviewers.size());
    for (const ReviewerProfile& rev : instance.reviewers) authored.push_back(rev.authored_papers);
    return authored;
}

}  // namespace

std::vector<bool> run_success_trial(const TrialPopulation& population, std::uint64_t tie_seed) {
    Assignment assignment = solve(make_problem(population.instance, population.bids), tie_seed);
    std::vector<bool> flags;
    flags.reserve(population.malicious.size());
    for (int r : population.malicious)
        flags.push_back(success_metric(assignment, population.instance.reviewers[r]));
    return flags;
}

DetectionRanks run_detection_trial(const TrialPopulation& population, int svd_rank) {
    DetectionInput input = DetectionInput::from(population.bids, authored_map(population.instance));
    SuspicionRanking counting = counting_detect(input);
    SuspicionRanking ring = ring_detect(input);
    SuspicionRanking lowrank = lowrank_detect(input, svd_rank);
    DetectionRanks ranks;
    for (int r : population.malicious) {
        ranks.counting.push_back(counting.rank_of(r));
        ranks.ring.push_back(ring.rank_of(r));
        ranks.lowrank.push_back(lowrank.rank_of(r));
    }
    return ranks;
}

namespace {

constexpr int kNumMetrics = 7;
const std::array<const char*, kNumMetrics> kMetricNames = {
    "success",       "counting_rank", "ring_rank",   "lowrank_rank",
    "counting_norm", "ring_norm",     "lowrank_norm"};

// per-(unit, trial) per-label means; label = strategy index, 5 = "none",
// 6 = "Overall"
constexpr int kNumLabels = 7;

std::string label_name(int label) {
    if (label < 5) return kStrategyNames[static_cast<std::size_t>(label)];
    return label == 5 ? "none" : "Overall";
}

struct LabelMeans {
    std::array<std::optional<std::array<double, kNumMetrics>>, kNumLabels> by_label;
};

struct Accumulator {
    int count = 0;
    double mean = 0.0, m2 = 0.0;
    void add(double x) {  // Welford; merge order is fixed by the caller
        ++count;
        double d = x - mean;
        mean += d / count;
        m2 += d * (x - mean);
    }
    double sem() const {
        if (count < 2) return 0.0;
        return std::sqrt(m2 / (count - 1)) / std::sqrt(static_cast<double>(count));
    }
};

void run_items(int jobs, std::size_t total, const std::function<void(std::size_t)>& work) {
    if (jobs == 0) jobs = static_cast<int>(std::thread::hardware_concurrency());
    jobs = std::max(1, jobs);
    if (jobs == 1 || total <= 1) {
        for (std::size_t i = 0; i < total; ++i) work(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= total) return;
            try {
                work(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!error) error = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> threads;
    for (int t = 0; t < jobs; ++t) threads.emplace_back(worker);
    for (std::thread& t : threads) t.join();
    if (error) std::rethrow_exception(error);
}

AggregateReport aggregate_real(const ExperimentConfig& config, const Dataset& source) {
    std::vector<TrialUnit> units = real_units(source);
    if (units.empty()) throw std::runtime_error("dataset has no evaluable malicious units");
    int P = static_cast<int>(source.instance.papers.size());
    std::size_t total = units.size() * static_cast<std::size_t>(config.trials);
    std::vector<LabelMeans> results(total);
    Rng base(config.master_seed);

    run_items(config.jobs, total, [&](std::size_t item) {
        const TrialUnit& unit = units[item / config.trials];
        int trial = static_cast<int>(item % config.trials);
        Rng rng = base.child(unit.key).child(static_cast<std::uint64_t>(trial));
        TrialPopulation pop = build_trial_population(source, unit, rng);
        std::uint64_t tie_seed = rng.next();
        std::vector<bool> success = run_success_trial(pop, tie_seed);
        DetectionRanks ranks = run_detection_trial(pop, config.svd_rank);
        int R = static_cast<int>(pop.original_ids.size());

        std::array<std::array<double, kNumMetrics>, kNumLabels> sums{};
        std::array<int, kNumLabels> counts{};
        for (std::size_t m = 0; m < pop.malicious.size(); ++m) {
            int strat = source.strategy_of(unit.malicious[m]).value();
            int label = strat < 0 ? 5 : strat;
            std::array<double, kNumMetrics> v{
                success[m] ? 1.0 : 0.0,
                static_cast<double>(ranks.counting[m]),
                static_cast<double>(ranks.ring[m]),
                static_cast<double>(ranks.lowrank[m]),
                ranks.counting[m] / static_cast<double>(R),
                ranks.ring[m] / static_cast<double>(R),
                ranks.lowrank[m] / static_cast<double>(R)};
            for (int label_id : {label, 6}) {
                for (int k = 0; k < kNumMetrics; ++k) sums[label_id][k] += v[k];
                ++counts[label_id];
            }
        }
        for (int label = 0; label < kNumLabels; ++label) {
            if (!counts[label]) continue;
            std::array<double, kNumMetrics> means{};
            for (int k = 0; k < kNumMetrics; ++k) means[k] = sums[label][k] / counts[label];
            results[item].by_label[label] = means;
        }
    });

    std::array<std::array<Accumulator, kNumMetrics>, kNumLabels> acc{};
    for (const LabelMeans& r : results)
        for (int label = 0; label < kNumLabels; ++label)
            if (r.by_label[label])
                for (int k = 0; k < kNumMetrics; ++k) acc[label][k].add((*r.by_label[label])[k]);

    AggregateReport report;
    for (int k = 0; k < kNumMetrics; ++k) {
        for (int label = 0; label < kNumLabels; ++label) {
            if (!acc[label][k].count) continue;
            AggregateRow row;
            row.metric = kMetricNames[static_cast<std::size_t>(k)];
            row.strategy = label_name(label);
            row.group_size = 0;
            row.n = P;
            row.mean = acc[label][k].mean;
            row.sem = acc[label][k].sem();
            row.trials = acc[label][k].count;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

AggregateReport aggregate_synthetic(const ExperimentConfig& config, const Dataset& source) {
    struct Cell {
        StrategyKind strategy;
        int size, n;
    };
    std::vector<Cell> cells;
    for (StrategyKind strategy : config.strategies)
        for (int size : config.sizes)
            for (int n : config.ns) cells.push_back({strategy, size, n});
    if (cells.empty()) throw std::invalid_argument("empty synthetic experiment grid");

    std::size_t total = cells.size() * static_cast<std::size_t>(config.trials);
    std::vector<std::array<double, kNumMetrics>> results(total);
    Rng base(config.master_seed);

    run_items(config.jobs, total, [&](std::size_t item) {
        const Cell& cell = cells[item / config.trials];
        int trial = static_cast<int>(item % config.trials);
        std::uint64_t cell_key =
            (static_cast<std::uint64_t>(cell.size) * 1000003ULL + cell.n) * 8ULL +
            static_cast<std::uint64_t>(cell.strategy);
        Rng rng = base.child(cell_key).child(static_cast<std::uint64_t>(trial));

        SyntheticConfig sc;
        sc.n = cell.n;
        sc.group_size = cell.size;
        sc.strategy = cell.strategy;
        sc.seed = rng.next();
        SyntheticInstance synth = build_synthetic_instance(sc, source);
        std::uint64_t tie_seed = rng.next();

        Assignment assignment = solve(make_problem(synth.instance, synth.bids), tie_seed);
        DetectionInput input = DetectionInput::from(synth.bids, authored_map(synth.instance));
        SuspicionRanking counting = counting_detect(input);
        SuspicionRanking ring = ring_detect(input);
        SuspicionRanking lowrank = lowrank_detect(input, config.svd_rank);

        std::array<double, kNumMetrics> sums{};
        for (int r : synth.malicious) {
            sums[0] += success_metric(assignment, synth.instance.reviewers[r]) ? 1.0 : 0.0;
            sums[1] += counting.rank_of(r);
            sums[2] += ring.rank_of(r);
            sums[3] += lowrank.rank_of(r);
            sums[4] += counting.normalized_rank(r);
            sums[5] += ring.normalized_rank(r);
            sums[6] += lowrank.normalized_rank(r);
        }
        for (int k = 0; k < kNumMetrics; ++k) results[item][k] = sums[k] / synth.malicious.size();
    });

    AggregateReport report;
    for (std::size_t c = 0; c < cells.size(); ++c) {
        std::array<Accumulator, kNumMetrics> acc{};
        for (int t = 0; t < config.trials; ++t)
            for (int k = 0; k < kNumMetrics; ++k)
                acc[k].add(results[c * config.trials + t][k]);
        for (int k = 0; k < kNumMetrics; ++k) {
            AggregateRow row;
            row.metric = kMetricNames[static_cast<std::size_t>(k)];
            row.strategy = strategy_name(cells[c].strategy);
            row.group_size = cells[c].size;
            row.n = cells[c].n;
            row.mean = acc[k].mean;
            row.sem = acc[k].sem();
            row.trials = acc[k].count;
            report.rows.push_back(std::move(row));
        }
    }
    return report;
}

}  // namespace

const AggregateRow* AggregateReport::find(const std::string& metric, const std::string& strategy,
                                          int group_size, int n) const {
    for (const AggregateRow& row : rows)
        if (row.metric == metric && row.strategy == strategy &&
            (group_size == 0 || row.group_size == group_size) && (n == 0 || row.n == n))
            return &row;
    return nullptr;
}

AggregateReport run_experiment(const ExperimentConfig& config, const Dataset& source) {
    if (config.trials < 1) throw std::invalid_argument("trials must be positive");
    return config.mode == ExperimentMode::Real ? aggregate_real(config, source)
                                               : aggregate_synthetic(config, source);
}

std::string report_to_csv(const AggregateReport& report) {
    std::string out = "metric,strategy,group_size,n,mean,sem,trials\n";
    char buf[160];
    for (const AggregateRow& row : report.rows) {
        std::snprintf(buf, sizeof buf, "%s,%s,%d,%d,%.10g,%.10g,%d\n", row.metric.c_str(),
                      row.strategy.c_str(), row.group_size, row.n, row.mean, row.sem, row.trials);
        out += buf;
    }
    return out;
}

}  // namespace bidsim
