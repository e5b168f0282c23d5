#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <set>
#include <string>
#include <vector>

#include "bidsim/dataset_io.hpp"
#include "bidsim/rng.hpp"
#include "bidsim/strategy.hpp"

using namespace bidsim;

namespace {

const std::string kMock28 = std::string(BIDSIM_DATA_DIR) + "/mock28";

// 6 areas over 3 topics: {0,1} -> t0, {2,3} -> t1, {4,5} -> t2
Taxonomy tiny_taxonomy() {
    return Taxonomy({"a0", "a1", "a2", "a3", "a4", "a5"}, {"t0", "t1", "t2"},
                    {0, 0, 1, 1, 2, 2});
}

// `papers` papers alternating between area 0 (reviewer's topic) and area 4
ConferenceInstance alternating_instance(int papers) {
    ConferenceInstance inst;
    inst.taxonomy = tiny_taxonomy();
    inst.papers.resize(papers);
    for (int p = 0; p < papers; ++p) {
        inst.papers[p].id = p;
        inst.papers[p].subject_area = (p % 2 == 0) ? 0 : 4;
    }
    return inst;
}

ReviewerProfile topic0_reviewer(int id = 0) {
    ReviewerProfile rev;
    rev.id = id;
    rev.subject_areas = {0, 1, 0};
    return rev;
}

struct RowCounts {
    int pos_in = 0, pos_out = 0, neg_in = 0, neg_out = 0;
};

RowCounts count_row(const std::vector<BidLevel>& row, const ConferenceInstance& inst) {
    RowCounts c;
    for (std::size_t p = 0; p < row.size(); ++p) {
        bool in = inst.papers[p].subject_area == 0;  // area 0 = topic 0, area 4 = topic 2
        if (row[p] == 1) (in ? c.pos_in : c.pos_out)++;
        if (row[p] == -1) (in ? c.neg_in : c.neg_out)++;
    }
    return c;
}

}  // namespace

TEST_CASE("strategy names parse case-insensitively and round-trip") {
    for (StrategyKind k : {StrategyKind::Basic, StrategyKind::NegativeInArea,
                           StrategyKind::Overlap, StrategyKind::Cycle, StrategyKind::Popularity})
        CHECK(parse_strategy(strategy_name(k)) == k);
    CHECK(parse_strategy("cycle") == StrategyKind::Cycle);
    CHECK(parse_strategy("NEGATIVE-IN-AREA") == StrategyKind::NegativeInArea);
    CHECK_THROWS_AS(parse_strategy("collusion"), std::invalid_argument);
}

TEST_CASE("extract_stats partitions bids by topic and skips own papers") {
    ConferenceInstance inst = alternating_instance(8);
    ReviewerProfile rev = topic0_reviewer();
    rev.authored_papers = {0};
    BidMatrix bids(1, 8);
    bids.set(0, 0, 1);   // own paper: ignored
    bids.set(0, 2, 1);   // in-topic positive
    bids.set(0, 4, -1);  // in-topic negative
    bids.set(0, 6, -1);  // in-topic negative
    bids.set(0, 1, 1);   // out-of-topic positive
    bids.set(0, 3, -1);  // out-of-topic negative
    BidProfileStats s = extract_stats(rev, bids, inst);
    CHECK(s.pos_in_topic == 1);
    CHECK(s.neg_in_topic == 2);
    CHECK(s.pos_out_topic == 1);
    CHECK(s.neg_out_topic == 1);

    BidProfileStats zero = extract_stats(topic0_reviewer(), BidMatrix(1, 8), inst);
    CHECK((zero.pos_in_topic == 0 && zero.pos_out_topic == 0 && zero.neg_in_topic == 0 &&
           zero.neg_out_topic == 0));

    ReviewerProfile bad = topic0_reviewer(5);  // no such bid row
    CHECK_THROWS_AS(extract_stats(bad, bids, inst), std::invalid_argument);
}

TEST_CASE("honest generation scales negatives by the paper ratio (2 -> 20 at 10x)") {
    // model conference: 28 papers, model reviewer with 2 in-topic negatives
    ConferenceInstance small = alternating_instance(28);
    ReviewerProfile model = topic0_reviewer();
    BidMatrix model_bids(1, 28);
    model_bids.set(0, 2, -1);
    model_bids.set(0, 4, -1);
    model_bids.set(0, 6, 1);  // plus one in-topic positive
    BidProfileStats stats = extract_stats(model, model_bids, small);
    CHECK(stats.neg_in_topic == 2);

    // ten-times-larger conference
    ConferenceInstance big = alternating_instance(280);
    double ratio = 280.0 / 28.0;
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        Rng rng(seed);
        RowCounts c = count_row(generate_honest_bids(topic0_reviewer(), big, stats, ratio, rng), big);
        CHECK(c.neg_in == 20);  // exactly 2 * 10
        CHECK(c.pos_in == 1);   // positives copied verbatim
        CHECK(c.neg_out == 0);
        CHECK(c.pos_out == 0);
    }
}

TEST_CASE("honest generation: ratio one is an exact count identity") {
    ConferenceInstance inst = alternating_instance(40);
    BidProfileStats stats{3, 1, 5, 2};
    Rng rng(99);
    RowCounts c = count_row(generate_honest_bids(topic0_reviewer(), inst, stats, 1.0, rng), inst);
    CHECK(c.pos_in == 3);
    CHECK(c.pos_out == 1);
    CHECK(c.neg_in == 5);
    CHECK(c.neg_out == 2);
}

TEST_CASE("honest generation rounds scaled negatives half up") {
    ConferenceInstance inst = alternating_instance(40);
    BidProfileStats stats{0, 0, 1, 0};
    Rng rng(7);
    // 1 * 2.5 = 2.5 rounds to 3
    CHECK(count_row(generate_honest_bids(topic0_reviewer(), inst, stats, 2.5, rng), inst).neg_in == 3);
    // 1 * 2.4 = 2.4 rounds to 2
    CHECK(count_row(generate_honest_bids(topic0_reviewer(), inst, stats, 2.4, rng), inst).neg_in == 2);
}

TEST_CASE("honest generation caps at partition size and skips own papers") {
    ConferenceInstance inst = alternating_instance(8);  // 4 in-topic, 4 out
    ReviewerProfile rev = topic0_reviewer();
    rev.authored_papers = {0, 2};  // leaves only 2 in-topic candidates
    BidProfileStats stats{9, 9, 9, 9};
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        Rng rng(seed);
        std::vector<BidLevel> row = generate_honest_bids(rev, inst, stats, 1.0, rng);
        CHECK(row[0] == 0);
        CHECK(row[2] == 0);
        RowCounts c = count_row(row, inst);
        CHECK(c.pos_in + c.neg_in == 2);  // whole partition used, no duplicates
        CHECK(c.pos_out + c.neg_out == 4);
        CHECK(c.pos_in == 2);  // positives placed before negatives
    }
    Rng rng(0);
    CHECK_THROWS_AS(generate_honest_bids(rev, inst, stats, 0.0, rng), std::invalid_argument);
}

TEST_CASE("synthetic instances: Basic groups bid on every target paper") {
    Dataset source = load_dataset(kMock28);
    for (int size : {2, 3, 4}) {
        SyntheticInstance syn = build_synthetic_instance(
            {.n = 100, .group_size = size, .strategy = StrategyKind::Basic, .seed = 5}, source);
        REQUIRE(static_cast<int>(syn.malicious.size()) == size);
        int target_positives = 0;
        for (int m : syn.malicious) {
            const ReviewerProfile& rev = syn.instance.reviewers[m];
            CHECK(static_cast<int>(rev.target_papers.size()) == size - 1);
            for (int p : rev.target_papers) {
                CHECK(syn.bids(m, p) == 1);
                ++target_positives;
            }
            CHECK(rev.group == 0);
        }
        CHECK(target_positives == size * (size - 1));
    }
}

TEST_CASE("synthetic instances: Cycle groups form one directed cycle of bids") {
    Dataset source = load_dataset(kMock28);
    for (int size : {2, 3, 4}) {
        SyntheticInstance syn = build_synthetic_instance(
            {.n = 100, .group_size = size, .strategy = StrategyKind::Cycle, .seed = 11}, source);
        for (int j = 0; j < size; ++j) {
            int m = syn.malicious[j];
            int next = syn.malicious[(j + 1) % size];
            const ReviewerProfile& rev = syn.instance.reviewers[m];
            // exactly one positive target bid, on the successor's paper
            for (int p : rev.target_papers)
                CHECK(syn.bids(m, p) == (p == next ? 1 : 0));
        }
    }
}

TEST_CASE("synthetic instances: Overlap groups share their non-target positives") {
    Dataset source = load_dataset(kMock28);
    SyntheticInstance syn = build_synthetic_instance(
        {.n = 100, .group_size = 3, .strategy = StrategyKind::Overlap, .seed = 3}, source);
    std::vector<std::set<int>> extra;
    for (int m : syn.malicious) {
        const ReviewerProfile& rev = syn.instance.reviewers[m];
        std::set<int> pos;
        for (int p = 0; p < 100; ++p)
            if (syn.bids(m, p) == 1 && !rev.target_papers.count(p)) pos.insert(p);
        // shared papers are never a member's own or a target paper
        for (int p : pos) CHECK(rev.authored_papers.count(p) == 0);
        extra.push_back(pos);
    }
    CHECK(extra[0] == extra[1]);
    CHECK(extra[1] == extra[2]);
    CHECK(!extra[0].empty());
    // targets still get positive bids
    for (int m : syn.malicious)
        for (int p : syn.instance.reviewers[m].target_papers) CHECK(syn.bids(m, p) == 1);
}

TEST_CASE("malicious generation rejects unsupported configurations") {
    Dataset source = load_dataset(kMock28);
    SyntheticInstance base = build_synthetic_instance(
        {.n = 50, .group_size = 2, .strategy = StrategyKind::Basic, .seed = 1}, source);
    Rng rng(0);
    CHECK_THROWS_AS(generate_malicious_bids(base.malicious, StrategyKind::Popularity,
                                            base.instance, source, rng),
                    std::invalid_argument);
    std::vector<int> solo = {base.malicious[0]};
    CHECK_THROWS_AS(generate_malicious_bids(solo, StrategyKind::Overlap, base.instance, source, rng),
                    std::invalid_argument);
    CHECK_THROWS_AS(generate_malicious_bids(solo, StrategyKind::Cycle, base.instance, source, rng),
                    std::invalid_argument);
    // solo Basic / Negative-in-area are fine
    CHECK(generate_malicious_bids(solo, StrategyKind::Basic, base.instance, source, rng).size() == 1);
}

TEST_CASE("synthetic construction is deterministic in the seed") {
    Dataset source = load_dataset(kMock28);
    SyntheticConfig cfg{.n = 80, .group_size = 3, .strategy = StrategyKind::NegativeInArea,
                        .seed = 21};
    SyntheticInstance a = build_synthetic_instance(cfg, source);
    SyntheticInstance b = build_synthetic_instance(cfg, source);
    CHECK(a.malicious == b.malicious);
    bool same = true;
    for (int r = 0; r < 80 && same; ++r)
        for (int p = 0; p < 80; ++p)
            if (a.bids(r, p) != b.bids(r, p)) { same = false; break; }
    CHECK(same);
    cfg.seed = 22;
    SyntheticInstance c = build_synthetic_instance(cfg, source);
    bool differs = (c.malicious != a.malicious);
    for (int r = 0; r < 80 && !differs; ++r)
        for (int p = 0; p < 80; ++p)
            if (a.bids(r, p) != c.bids(r, p)) { differs = true; break; }
    CHECK(differs);
}

TEST_CASE("synthetic construction validates its inputs") {
    Dataset source = load_dataset(kMock28);
    CHECK_THROWS_AS(build_synthetic_instance({.n = 3, .group_size = 3}, source),
                    std::invalid_argument);
    // the source has no colluding group of five
    CHECK_THROWS_AS(build_synthetic_instance({.n = 100, .group_size = 5}, source),
                    std::runtime_error);
}

TEST_CASE("synthetic instances have sound structure") {
    Dataset source = load_dataset(kMock28);
    SyntheticInstance syn = build_synthetic_instance(
        {.n = 120, .group_size = 4, .strategy = StrategyKind::Basic, .seed = 77}, source);
    CHECK(syn.instance.papers.size() == 120);
    CHECK(syn.instance.reviewers.size() == 120);
    CHECK(syn.instance.groups.size() == 1);
    CHECK(syn.instance.groups.at(0) == syn.malicious);
    std::set<int> mal(syn.malicious.begin(), syn.malicious.end());
    for (int i = 0; i < 120; ++i) {
        const ReviewerProfile& rev = syn.instance.reviewers[i];
        CHECK(rev.authored_papers == std::set<int>{i});
        CHECK(syn.bids(i, i) == 0);  // never bids on the own paper
        if (mal.count(i)) {
            std::set<int> expect(mal);
            expect.erase(i);
            CHECK(rev.target_papers == expect);
        } else {
            CHECK(rev.target_papers.empty());
            CHECK(!rev.group);
        }
    }
}
