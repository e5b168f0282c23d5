#include "bidsim/strategy.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <set>
#include <stdexcept>

namespace bidsim {

const std::string& strategy_name(StrategyKind kind) {
    return kStrategyNames.at(static_cast<std::size_t>(kind));
}

StrategyKind parse_strategy(const std::string& name) {
    auto fold = [](std::string s) {
        for (char& c : s) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        return s;
    };
    std::string needle = fold(name);
    for (std::size_t i = 0; i < kStrategyNames.size(); ++i)
        if (fold(kStrategyNames[i]) == needle) return static_cast<StrategyKind>(i);
    throw std::invalid_argument("unknown strategy: " + name);
}

namespace {

bool in_topic(const ReviewerProfile& reviewer, const Paper& paper, const Taxonomy& tax) {
    int pt = tax.topic_of(paper.subject_area);
    for (int a : reviewer.subject_areas)
        if (tax.topic_of(a) == pt) return true;
    return false;
}

}  // namespace

BidProfileStats extract_stats(const ReviewerProfile& model_reviewer, const BidMatrix& model_bids,
                              const ConferenceInstance& instance) {
    if (model_reviewer.id < 0 || model_reviewer.id >= model_bids.reviewers())
        throw std::invalid_argument("model reviewer has no bid row");
    BidProfileStats stats;
    for (const Paper& paper : instance.papers) {
        if (model_reviewer.authored_papers.count(paper.id)) continue;
        BidLevel b = model_bids(model_reviewer.id, paper.id);
        if (b == 0) continue;
        bool in = in_topic(model_reviewer, paper, instance.taxonomy);
        if (b > 0)
            (in ? stats.pos_in_topic : stats.pos_out_topic)++;
        else
            (in ? stats.neg_in_topic : stats.neg_out_topic)++;
    }
    return stats;
}

std::vector<BidLevel> generate_honest_bids(const ReviewerProfile& reviewer,
                                           const ConferenceInstance& instance,
                                           const BidProfileStats& model_stats, double paper_ratio,
                                           Rng& rng) {
    if (paper_ratio <= 0) throw std::invalid_argument("paper_ratio must be positive");
    std::vector<int> in_pool, out_pool;
    for (const Paper& paper : instance.papers) {
        if (reviewer.authored_papers.count(paper.id)) continue;
        (in_topic(reviewer, paper, instance.taxonomy) ? in_pool : out_pool).push_back(paper.id);
    }
    auto scaled = [paper_ratio](int count) {  // round half up
        return static_cast<int>(std::floor(count * paper_ratio + 0.5));
    };
    std::vector<BidLevel> row(instance.papers.size(), 0);
    auto place = [&](std::vector<int>& pool, int count, BidLevel level) {
        count = std::min<int>(count, static_cast<int>(pool.size()));
        for (int i = 0; i < count; ++i) {
            std::size_t j = i + static_cast<std::size_t>(rng.uniform(pool.size() - i));
            std::swap(pool[i], pool[j]);
            row[pool[i]] = level;
        }
        pool.erase(pool.begin(), pool.begin() + count);
    };
    place(in_pool, model_stats.pos_in_topic, 1);
    place(out_pool, model_stats.pos_out_topic, 1);
    place(in_pool, scaled(model_stats.neg_in_topic), -1);
    place(out_pool, scaled(model_stats.neg_out_topic), -1);
    return row;
}

std::vector<std::vector<BidLevel>> generate_malicious_bids(const std::vector<int>& group,
                                                           StrategyKind strategy,
                                                           const ConferenceInstance& instance,
                                                           const Dataset& source, Rng& rng) {
    if (strategy == StrategyKind::Popularity)
        throw std::invalid_argument("the Popularity strategy is not generated");
    if (group.size() < 2 &&
        (strategy == StrategyKind::Overlap || strategy == StrategyKind::Cycle))
        throw std::invalid_argument("Overlap/Cycle need a group of at least 2");

    std::vector<int> models;
    for (int r : source.malicious_responders)
        if (source.strategy_of(r) == static_cast<int>(strategy)) models.push_back(r);
    if (models.empty())
        throw std::runtime_error("no model reviewer annotated with strategy " +
                                 strategy_name(strategy));

    double ratio = static_cast<double>(instance.papers.size()) /
                   static_cast<double>(source.instance.papers.size());
    std::vector<std::vector<BidLevel>> rows;
    rows.reserve(group.size());
    for (int member : group) {
        int model = rng.choice(models);
        BidProfileStats stats =
            extract_stats(source.instance.reviewers[model], source.malicious_bids, source.instance);
        rows.push_back(
            generate_honest_bids(instance.reviewers[member], instance, stats, ratio, rng));
    }

    if (strategy == StrategyKind::Overlap) {
        // rewrite non-target positives onto one shared set, sized by the
        // largest individually generated positive count
        std::set<int> excluded;  // targets and members' own papers never shared
        for (int member : group) {
            const ReviewerProfile& rev = instance.reviewers[member];
            excluded.insert(rev.target_papers.begin(), rev.target_papers.end());
            excluded.insert(rev.authored_papers.begin(), rev.authored_papers.end());
        }
        int shared_size = 0;
        for (std::size_t i = 0; i < group.size(); ++i) {
            const ReviewerProfile& rev = instance.reviewers[group[i]];
            int pos = 0;
            for (std::size_t p = 0; p < rows[i].size(); ++p)
                if (rows[i][p] == 1 && !rev.target_papers.count(static_cast<int>(p))) ++pos;
            shared_size = std::max(shared_size, pos);
        }
        std::vector<int> pool;
        for (const Paper& paper : instance.papers) {
            if (excluded.count(paper.id)) continue;
            bool in = false;
            for (std::size_t i = 0; i < group.size() && !in; ++i)
                in = in_topic(instance.reviewers[group[i]], paper, instance.taxonomy);
            if (in) pool.push_back(paper.id);
        }
        if (static_cast<int>(pool.size()) < shared_size) {
            pool.clear();
            for (const Paper& paper : instance.papers)
                if (!excluded.count(paper.id)) pool.push_back(paper.id);
        }
        std::vector<int> shared = rng.sample(pool, static_cast<std::size_t>(shared_size));
        for (std::size_t i = 0; i < group.size(); ++i) {
            const ReviewerProfile& rev = instance.reviewers[group[i]];
            for (std::size_t p = 0; p < rows[i].size(); ++p)
                if (rows[i][p] == 1 && !rev.target_papers.count(static_cast<int>(p)))
                    rows[i][p] = 0;
            for (int p : shared) rows[i][p] = 1;
        }
    }

    // target overrides
    for (std::size_t i = 0; i < group.size(); ++i) {
        const ReviewerProfile& rev = instance.reviewers[group[i]];
        if (strategy == StrategyKind::Cycle) {
            int next = group[(i + 1) % group.size()];
            const std::set<int>& next_papers = instance.reviewers[next].authored_papers;
            if (next_papers.empty())
                throw std::runtime_error("cycle member authors no paper");
            int wanted = *next_papers.begin();
            for (int p : rev.target_papers) rows[i][p] = (p == wanted) ? 1 : 0;
        } else {
            for (int p : rev.target_papers) rows[i][p] = 1;
        }
    }
    return rows;
}

SyntheticInstance build_synthetic_instance(const SyntheticConfig& config, const Dataset& source) {
    if (config.n < config.group_size + 1)
        throw std::invalid_argument("synthetic instance too small for the group");
    std::vector<int> donor_groups;
    for (const auto& [gid, members] : source.instance.groups)
        if (static_cast<int>(members.size()) == config.group_size) donor_groups.push_back(gid);
    if (donor_groups.empty())
        throw std::runtime_error("source has no group of size " +
                                 std::to_string(config.group_size));

    Rng rng(config.seed);
    SyntheticInstance out;
    ConferenceInstance& inst = out.instance;
    inst.taxonomy = source.instance.taxonomy;
    inst.paper_load = 3;
    inst.reviewer_load = 3;
    inst.papers.resize(config.n);
    inst.reviewers.resize(config.n);
    for (int i = 0; i < config.n; ++i) {  // one-to-one authorship
        inst.papers[i].id = i;
        inst.papers[i].title = "Synthetic Paper " + std::to_string(i);
        inst.reviewers[i].id = i;
        inst.reviewers[i].name = "S" + std::to_string(i);
        inst.reviewers[i].authored_papers = {i};
    }

    auto paper_area_of = [&](const ReviewerProfile& original) {
        if (!original.authored_papers.empty())
            return source.instance.papers[*original.authored_papers.begin()].subject_area;
        return original.subject_areas[0];
    };

    // plant the malicious group: areas copied member-for-member from a random
    // same-size original group
    std::vector<int> ids(config.n);
    for (int i = 0; i < config.n; ++i) ids[i] = i;
    out.malicious = rng.sample(ids, static_cast<std::size_t>(config.group_size));
    int donor = rng.choice(donor_groups);
    const std::vector<int>& donor_members = source.instance.groups.at(donor);
    std::set<int> malicious_set(out.malicious.begin(), out.malicious.end());
    for (int j = 0; j < config.group_size; ++j) {
        const ReviewerProfile& original = source.instance.reviewers[donor_members[j]];
        ReviewerProfile& member = inst.reviewers[out.malicious[j]];
        member.subject_areas = original.subject_areas;
        member.group = 0;
        inst.papers[out.malicious[j]].subject_area = paper_area_of(original);
        for (int other : out.malicious)
            if (other != out.malicious[j]) member.target_papers.insert(other);
    }
    inst.groups[0] = out.malicious;

    // honest reviewers copy a random original reviewer's areas
    int n_source = static_cast<int>(source.instance.reviewers.size());
    for (int i = 0; i < config.n; ++i) {
        if (malicious_set.count(i)) continue;
        const ReviewerProfile& original =
            source.instance.reviewers[static_cast<int>(rng.uniform(n_source))];
        inst.reviewers[i].subject_areas = original.subject_areas;
        inst.papers[i].subject_area = paper_area_of(original);
    }

    // honest bids resampled from random honest responders
    std::vector<int> honest_models(source.honest_responders.begin(),
                                   source.honest_responders.end());
    if (honest_models.empty()) throw std::runtime_error("source has no honest responders");
    double ratio = static_cast<double>(config.n) /
                   static_cast<double>(source.instance.papers.size());
    out.bids = BidMatrix(config.n, config.n);
    for (int i = 0; i < config.n; ++i) {
        if (malicious_set.count(i)) continue;
        int model = rng.choice(honest_models);
        BidProfileStats stats =
            extract_stats(source.instance.reviewers[model], source.honest_bids, source.instance);
        std::vector<BidLevel> row =
            generate_honest_bids(inst.reviewers[i], inst, stats, ratio, rng);
        for (int p = 0; p < config.n; ++p)
            if (row[p] != 0) out.bids.set(i, p, row[p]);
    }

    std::vector<std::vector<BidLevel>> mal =
        generate_malicious_bids(out.malicious, config.strategy, inst, source, rng);
    for (std::size_t j = 0; j < out.malicious.size(); ++j)
        for (int p = 0; p < config.n; ++p)
            out.bids.set(out.malicious[j], p, mal[j][p]);
    return out;
}

}  // namespace bidsim
