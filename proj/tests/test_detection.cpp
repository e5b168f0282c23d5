#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <tuple>
#include <vector>

#include "bidsim/detection.hpp"
#include "bidsim/rng.hpp"

#if BIDSIM_HAVE_EIGEN
#include <Eigen/Dense>
#include <Eigen/SVD>
#endif

using namespace bidsim;

namespace {

struct RandomInstance {
    BidMatrix bids;
    std::vector<std::set<int>> authored;
};

RandomInstance random_instance(int R, int P, Rng& rng) {
    RandomInstance inst{BidMatrix(R, P), std::vector<std::set<int>>(R)};
    for (int r = 0; r < R; ++r) {
        for (int p = 0; p < P; ++p) {
            std::uint64_t roll = rng.uniform(10);
            if (roll < 2) inst.bids.set(r, p, 1);
            else if (roll < 4) inst.bids.set(r, p, -1);
        }
        inst.authored[r].insert(static_cast<int>(rng.uniform(P)));
        if (rng.uniform(2) == 0) inst.authored[r].insert(static_cast<int>(rng.uniform(P)));
    }
    return inst;
}

RandomInstance permute_reviewers(const RandomInstance& inst, const std::vector<int>& perm) {
    int R = inst.bids.reviewers(), P = inst.bids.papers();
    RandomInstance out{BidMatrix(R, P), std::vector<std::set<int>>(R)};
    for (int r = 0; r < R; ++r) {
        for (int p = 0; p < P; ++p) out.bids.set(perm[r], p, inst.bids(r, p));
        out.authored[perm[r]] = inst.authored[r];
    }
    return out;
}

// independent pair-enumeration oracle for the ring detector: every unordered
// pair is scored by (mutuality category, side-score sum) with low pair ids
// preferred, each reviewer inherits its best pair, ranking is by that key
// descending with ascending-id ties
std::vector<int> ring_oracle_order(const DetectionInput& in) {
    int R = in.bids.reviewers();
    auto pos_on = [&](int r, int q) {
        for (int p : in.authored[q])
            if (in.bids(r, p) == 1) return true;
        return false;
    };
    auto side = [&](int r, int q) {
        int s = 0;
        for (int p = 0; p < in.bids.papers(); ++p) {
            if (in.authored[q].count(p)) continue;
            s += (in.bids(r, p) == -1) - (in.bids(r, p) == 1);
        }
        return s;
    };
    using Key = std::tuple<int, int, int, int>;
    std::vector<Key> best(R, Key{-1, 0, 0, 0});
    for (int r = 0; r < R; ++r)
        for (int q = r + 1; q < R; ++q) {
            int cat = pos_on(r, q) && pos_on(q, r) ? 2 : (pos_on(r, q) || pos_on(q, r) ? 1 : 0);
            Key key{cat, side(r, q) + side(q, r), -r, -q};
            best[r] = std::max(best[r], key);
            best[q] = std::max(best[q], key);
        }
    std::vector<int> order(R);
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        if (best[a] != best[b]) return best[a] > best[b];
        return a < b;
    });
    return order;
}

}  // namespace

TEST_CASE("DetectionInput zeroes own-paper bids and keeps the rest") {
    BidMatrix bids(2, 3);
    bids.set(0, 0, 1);
    bids.set(0, 2, -1);
    bids.set(1, 0, -1);
    DetectionInput in = DetectionInput::from(bids, {{0}, {2}});
    CHECK(in.bids(0, 0) == 0);
    CHECK(in.bids(0, 2) == -1);
    CHECK(in.bids(1, 0) == -1);
    CHECK(in.bids(1, 2) == 0);
    CHECK_THROWS_AS(DetectionInput::from(bids, {{0}}), std::invalid_argument);
}

TEST_CASE("ranking accessors") {
    SuspicionRanking rk;
    rk.order = {2, 0, 1, 3};
    rk.scores = {1, 0, 5, -1};
    CHECK(rk.rank_of(2) == 0);
    CHECK(rk.rank_of(3) == 3);
    CHECK(rk.normalized_rank(0) == 0.25);
    CHECK_THROWS_AS(rk.rank_of(9), std::out_of_range);
}

TEST_CASE("counting detector: fixture arithmetic and tie-break") {
    BidMatrix bids(4, 8);
    for (int p = 0; p < 7; ++p) bids.set(0, p, -1);  // score 7
    for (int p = 0; p < 3; ++p) bids.set(2, p, 1);   // score -3
    bids.set(3, 0, -1);
    bids.set(3, 1, -1);  // score 2
    DetectionInput in = DetectionInput::from(bids, std::vector<std::set<int>>(4));
    SuspicionRanking rk = counting_detect(in);
    CHECK(rk.order == std::vector<int>{0, 3, 1, 2});
    CHECK(rk.scores == std::vector<double>{7, 0, -3, 2});

    // equal scores fall back to ascending reviewer id
    BidMatrix tied(3, 2);
    tied.set(0, 0, -1);
    tied.set(2, 1, -1);
    SuspicionRanking trk = counting_detect(DetectionInput::from(tied, std::vector<std::set<int>>(3)));
    CHECK(trk.order == std::vector<int>{0, 2, 1});
}

TEST_CASE("ring detector: a mutual pair outranks one-sided and honest reviewers") {
    // r0/r1 bid on each other's papers; r2 bids on r0 one-sidedly; r3 is clean
    BidMatrix bids(4, 4);
    bids.set(0, 1, 1);
    bids.set(1, 0, 1);
    bids.set(2, 0, 1);
    std::vector<std::set<int>> authored = {{0}, {1}, {2}, {3}};
    SuspicionRanking rk = ring_detect(DetectionInput::from(bids, authored));
    std::set<int> top = {rk.order[0], rk.order[1]};
    CHECK(top == std::set<int>{0, 1});
    CHECK(rk.rank_of(3) == 3);
}

TEST_CASE("ring detector: the reciprocal bid itself is excluded from the side score") {
    // two isolated mutual pairs; pair (2,3) carries extra negatives and must
    // win on side-score sum
    BidMatrix bids(4, 4);
    std::vector<std::set<int>> authored = {{0}, {1}, {2}, {3}};
    bids.set(0, 1, 1);
    bids.set(1, 0, 1);
    bids.set(2, 3, 1);
    bids.set(3, 2, 1);
    bids.set(2, 0, -1);
    bids.set(3, 1, -1);
    SuspicionRanking rk = ring_detect(DetectionInput::from(bids, authored));
    CHECK(std::set<int>{rk.order[0], rk.order[1]} == std::set<int>{2, 3});
    // both pairs' positive bids land on partner papers: excluded, so the
    // scores are pure negative counts
    CHECK(rk.scores[2] == 2);
    CHECK(rk.scores[0] == 0);
}

TEST_CASE("ring detector matches the pair-enumeration oracle on random instances") {
    Rng rng(0x0127);
    for (int i = 0; i < 60; ++i) {
        RandomInstance inst = random_instance(6 + static_cast<int>(rng.uniform(10)),
                                              8 + static_cast<int>(rng.uniform(12)), rng);
        DetectionInput in = DetectionInput::from(inst.bids, inst.authored);
        CHECK(ring_detect(in).order == ring_oracle_order(in));
    }
}

TEST_CASE("ring detector: a planted mutual pair tops a positive-free background") {
    Rng rng(0x512e);
    for (int i = 0; i < 50; ++i) {
        RandomInstance inst = random_instance(8, 12, rng);
        // strip every positive: all pairs drop to the no-bid category
        for (int r = 0; r < 8; ++r)
            for (int p = 0; p < 12; ++p)
                if (inst.bids(r, p) == 1) inst.bids.set(r, p, 0);
        int r = static_cast<int>(rng.uniform(8));
        int q = (r + 1 + static_cast<int>(rng.uniform(7))) % 8;
        // shared authorship would make a mutual bid impossible
        for (int p : inst.authored[r]) inst.authored[q].erase(p);
        for (int p = 0; inst.authored[q].empty(); ++p)
            if (!inst.authored[r].count(p)) inst.authored[q].insert(p);
        for (int p : inst.authored[q])
            if (!inst.authored[r].count(p)) inst.bids.set(r, p, 1);
        for (int p : inst.authored[r])
            if (!inst.authored[q].count(p)) inst.bids.set(q, p, 1);
        SuspicionRanking rk = ring_detect(DetectionInput::from(inst.bids, inst.authored));
        CHECK(std::set<int>{rk.order[0], rk.order[1]} == std::set<int>{r, q});
    }
}

TEST_CASE("detectors ignore own-paper bids entirely") {
    Rng rng(0x0715);
    for (int i = 0; i < 50; ++i) {
        RandomInstance inst = random_instance(10, 14, rng);
        RandomInstance noisy = inst;
        for (int r = 0; r < 10; ++r)
            for (int p : noisy.authored[r])
                noisy.bids.set(r, p, static_cast<BidLevel>(rng.uniform(3)) - 1);
        DetectionInput a = DetectionInput::from(inst.bids, inst.authored);
        DetectionInput b = DetectionInput::from(noisy.bids, noisy.authored);
        CHECK(counting_detect(a).order == counting_detect(b).order);
        CHECK(ring_detect(a).order == ring_detect(b).order);
        CHECK(lowrank_detect(a).order == lowrank_detect(b).order);
    }
}

TEST_CASE("detector scores are equivariant under reviewer relabeling") {
    Rng rng(0x9e12);
    for (int i = 0; i < 50; ++i) {
        int R = 8 + static_cast<int>(rng.uniform(6));
        RandomInstance inst = random_instance(R, 16, rng);
        std::vector<int> perm(R);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        RandomInstance moved = permute_reviewers(inst, perm);
        DetectionInput a = DetectionInput::from(inst.bids, inst.authored);
        DetectionInput b = DetectionInput::from(moved.bids, moved.authored);
        SuspicionRanking ca = counting_detect(a), cb = counting_detect(b);
        SuspicionRanking ra = ring_detect(a), rb = ring_detect(b);
        for (int r = 0; r < R; ++r) {
            CHECK(cb.scores[perm[r]] == ca.scores[r]);
            CHECK(rb.scores[perm[r]] == ra.scores[r]);
        }
    }

    // the low-rank scores are subspace projections, so the check needs a
    // clear spectral gap: planted rank-3 structure with sparse sign noise
    for (int i = 0; i < 50; ++i) {
        int R = 18, P = 24;
        std::vector<std::vector<BidLevel>> basis(3, std::vector<BidLevel>(P));
        for (auto& row : basis)
            for (int p = 0; p < P; ++p) row[p] = rng.uniform(2) ? 1 : -1;
        RandomInstance inst{BidMatrix(R, P), std::vector<std::set<int>>(R)};
        for (int r = 0; r < R; ++r) {
            for (int p = 0; p < P; ++p) {
                BidLevel b = basis[r % 3][p];
                if (rng.uniform(40) == 0) b = static_cast<BidLevel>(-b);
                inst.bids.set(r, p, b);
            }
        }
        std::vector<int> perm(R);
        std::iota(perm.begin(), perm.end(), 0);
        rng.shuffle(perm);
        RandomInstance moved = permute_reviewers(inst, perm);
        SuspicionRanking la = lowrank_detect(DetectionInput::from(inst.bids, inst.authored));
        SuspicionRanking lb = lowrank_detect(DetectionInput::from(moved.bids, moved.authored));
        for (int r = 0; r < R; ++r)
            CHECK(lb.scores[perm[r]] == doctest::Approx(la.scores[r]).epsilon(1e-6));
    }
}

TEST_CASE("low-rank detector: matrices of rank <= 3 have (near-)zero residuals") {
    Rng rng(0x10e4);
    for (int i = 0; i < 50; ++i) {
        int R = 12, P = 20;
        // three template rows, every reviewer copies one of them
        std::vector<std::vector<BidLevel>> basis(3, std::vector<BidLevel>(P, 0));
        for (auto& row : basis)
            for (int p = 0; p < P; ++p) row[p] = static_cast<BidLevel>(rng.uniform(3)) - 1;
        BidMatrix bids(R, P);
        for (int r = 0; r < R; ++r) {
            const auto& row = basis[r % 3];
            for (int p = 0; p < P; ++p) bids.set(r, p, row[p]);
        }
        SuspicionRanking rk = lowrank_detect(DetectionInput::from(bids, std::vector<std::set<int>>(R)), 3);
        for (double s : rk.scores) CHECK(s <= 1e-7);
    }
}

TEST_CASE("low-rank detector: rank equal to min dimension reproduces the bids") {
    BidMatrix bids(3, 5);
    bids.set(0, 0, 1);
    bids.set(1, 3, -1);
    bids.set(2, 4, 1);
    std::vector<double> L = lowrank_approximation(bids, 3);
    for (int r = 0; r < 3; ++r)
        for (int p = 0; p < 5; ++p) CHECK(L[r * 5 + p] == bids(r, p));
    SuspicionRanking rk = lowrank_detect(DetectionInput::from(bids, std::vector<std::set<int>>(3)));
    CHECK(rk.order == std::vector<int>{0, 1, 2});  // all-zero residuals, id order
}

TEST_CASE("low-rank detector recovers a planted off-subspace row") {
    Rng rng(0x91a2);
    for (int i = 0; i < 50; ++i) {
        int R = 15, P = 20;
        std::vector<BidLevel> v(P);
        for (int p = 0; p < P; ++p) v[p] = rng.uniform(2) ? 1 : -1;
        // orthogonal row: flip exactly half the signs
        std::vector<int> idx(P);
        std::iota(idx.begin(), idx.end(), 0);
        rng.shuffle(idx);
        std::vector<BidLevel> u = v;
        for (int j = 0; j < P / 2; ++j) u[idx[j]] = static_cast<BidLevel>(-u[idx[j]]);
        int planted = static_cast<int>(rng.uniform(R));
        BidMatrix bids(R, P);
        for (int r = 0; r < R; ++r) {
            const auto& row = (r == planted) ? u : v;
            for (int p = 0; p < P; ++p) bids.set(r, p, row[p]);
        }
        SuspicionRanking rk =
            lowrank_detect(DetectionInput::from(bids, std::vector<std::set<int>>(R)), 1);
        CHECK(rk.order[0] == planted);
        // the planted row is orthogonal to the dominant direction, so its
        // residual is the whole row
        CHECK(rk.scores[planted] == doctest::Approx(P).epsilon(1e-6));
    }
}

TEST_CASE("low-rank detector rejects out-of-bounds ranks") {
    BidMatrix bids(4, 6);
    CHECK_THROWS_AS(lowrank_approximation(bids, 0), std::invalid_argument);
    CHECK_THROWS_AS(lowrank_approximation(bids, 5), std::invalid_argument);
    CHECK_THROWS_AS(lowrank_detect(DetectionInput::from(bids, std::vector<std::set<int>>(4)), -1),
                    std::invalid_argument);
}

TEST_CASE("ring detector needs two reviewers") {
    BidMatrix bids(1, 3);
    CHECK_THROWS_AS(ring_detect(DetectionInput::from(bids, std::vector<std::set<int>>(1))),
                    std::invalid_argument);
}

#if BIDSIM_HAVE_EIGEN
TEST_CASE("truncated SVD matches Eigen's optimal rank-k error") {
    Rng rng(0xe16e);
    for (auto [R, P, k] : std::vector<std::tuple<int, int, int>>{
             {30, 45, 1}, {40, 28, 3}, {56, 28, 3}, {80, 60, 5}}) {
        // planted rank-k block structure plus sparse noise keeps the spectral
        // gap at sigma_k/sigma_{k+1} large, so the iteration converges fully
        std::vector<std::vector<BidLevel>> basis(k, std::vector<BidLevel>(P));
        for (auto& row : basis)
            for (int p = 0; p < P; ++p) row[p] = rng.uniform(2) ? 1 : -1;
        BidMatrix bids(R, P);
        for (int r = 0; r < R; ++r)
            for (int p = 0; p < P; ++p) {
                BidLevel b = basis[r % k][p];
                if (rng.uniform(50) == 0) b = static_cast<BidLevel>(rng.uniform(3)) - 1;
                bids.set(r, p, b);
            }
        std::vector<double> L = lowrank_approximation(bids, k);

        Eigen::MatrixXd B(R, P);
        for (int r = 0; r < R; ++r)
            for (int p = 0; p < P; ++p) B(r, p) = bids(r, p);
        Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
        double opt_sq = 0;
        for (int j = k; j < svd.singularValues().size(); ++j)
            opt_sq += svd.singularValues()[j] * svd.singularValues()[j];
        double opt = std::sqrt(opt_sq);

        double err_sq = 0;
        for (int r = 0; r < R; ++r)
            for (int p = 0; p < P; ++p) {
                double d = B(r, p) - L[static_cast<std::size_t>(r) * P + p];
                err_sq += d * d;
            }
        double err = std::sqrt(err_sq);
        CHECK(err == doctest::Approx(opt).epsilon(1e-7));

        // and the projection itself matches Eigen's truncated reconstruction
        Eigen::MatrixXd Lk = svd.matrixU().leftCols(k) *
                             svd.singularValues().head(k).asDiagonal() *
                             svd.matrixV().leftCols(k).transpose();
        double diff = 0;
        for (int r = 0; r < R; ++r)
            for (int p = 0; p < P; ++p)
                diff = std::max(diff, std::abs(Lk(r, p) - L[static_cast<std::size_t>(r) * P + p]));
        CHECK(diff <= 1e-6);
    }
}
#endif
