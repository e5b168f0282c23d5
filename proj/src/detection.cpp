#include "bidsim/detection.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <tuple>

#include "bidsim/rng.hpp"

namespace bidsim {

DetectionInput DetectionInput::from(const BidMatrix& bids, const std::vector<std::set<int>>& authored) {
    if (static_cast<int>(authored.size()) != bids.reviewers())
        throw std::invalid_argument("authorship map size mismatch");
    DetectionInput in{bids, authored};
    for (int r = 0; r < bids.reviewers(); ++r)
        for (int p : authored[r]) in.bids.set(r, p, 0);
    return in;
}

int SuspicionRanking::rank_of(int reviewer) const {
    for (std::size_t i = 0; i < order.size(); ++i)
        if (order[i] == reviewer) return static_cast<int>(i);
    throw std::out_of_range("reviewer not in ranking");
}

double SuspicionRanking::normalized_rank(int reviewer) const {
    return static_cast<double>(rank_of(reviewer)) / static_cast<double>(order.size());
}

namespace {

SuspicionRanking rank_by_score_desc(std::vector<double> scores) {
    SuspicionRanking out;
    out.order.resize(scores.size());
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
        if (scores[a] != scores[b]) return scores[a] > scores[b];
        return a < b;
    });
    out.scores = std::move(scores);
    return out;
}

}  // namespace

SuspicionRanking counting_detect(const DetectionInput& input) {
    int R = input.bids.reviewers(), P = input.bids.papers();
    std::vector<double> score(R, 0.0);
    for (int r = 0; r < R; ++r) {
        int neg = 0, pos = 0;
        for (int p = 0; p < P; ++p) {
            BidLevel b = input.bids(r, p);
            neg += (b == -1);
            pos += (b == 1);
        }
        score[r] = neg - pos;
    }
    return rank_by_score_desc(std::move(score));
}

SuspicionRanking ring_detect(const DetectionInput& input) {
    int R = input.bids.reviewers();
    if (R < 2) throw std::invalid_argument("ring_detect needs at least 2 reviewers");
    std::vector<int> base(R, 0);
    for (int r = 0; r < R; ++r) {
        int s = 0;
        for (int p = 0; p < input.bids.papers(); ++p) {
            BidLevel b = input.bids(r, p);
            s += (b == -1) - (b == 1);
        }
        base[r] = s;
    }
    auto pos_on = [&](int r, int q) {
        for (int p : input.authored[q])
            if (input.bids(r, p) == 1) return true;
        return false;
    };
    // side score: r's (#neg - #pos) not counting bids on q's papers
    auto side = [&](int r, int q) {
        int s = base[r];
        for (int p : input.authored[q]) {
            BidLevel b = input.bids(r, p);
            s -= (b == -1) - (b == 1);
        }
        return s;
    };
    // Pairs are ordered by (category desc, score sum desc, min id asc, max id asc);
    // a reviewer's rank position is driven by its best pair. Tracking each
    // reviewer's lexicographic best key avoids materializing the O(R^2) pair list.
    using Key = std::tuple<int, int, int, int>;  // (cat, sum, -min, -max), maximized
    std::vector<Key> best(R, Key{-1, 0, 0, 0});
    for (int r = 0; r < R; ++r) {
        for (int q = r + 1; q < R; ++q) {
            bool rq = pos_on(r, q), qr = pos_on(q, r);
            int cat = (rq && qr) ? 2 : ((rq || qr) ? 1 : 0);
            int sum = side(r, q) + side(q, r);
            Key k{cat, sum, -r, -q};
            if (k > best[r]) best[r] = k;
            if (k > best[q]) best[q] = k;
        }
    }
    SuspicionRanking out;
    out.order.resize(R);
    std::iota(out.order.begin(), out.order.end(), 0);
    std::stable_sort(out.order.begin(), out.order.end(), [&](int a, int b) {
        if (best[a] != best[b]) return best[a] > best[b];
        return a < b;
    });
    out.scores.resize(R);
    for (int r = 0; r < R; ++r) out.scores[r] = std::get<1>(best[r]);
    return out;
}

namespace {

// modified Gram-Schmidt; near-zero columns are replaced by deterministic
// fresh directions so the basis stays full-rank
void orthonormalize(std::vector<double>& X, int n, int k, std::uint64_t& salt) {
    for (int j = 0; j < k; ++j) {
        double* xj = &X[static_cast<std::size_t>(j) * n];
        for (int attempt = 0;; ++attempt) {
            for (int i = 0; i < j; ++i) {
                const double* xi = &X[static_cast<std::size_t>(i) * n];
                double dot = 0;
                for (int t = 0; t < n; ++t) dot += xi[t] * xj[t];
                for (int t = 0; t < n; ++t) xj[t] -= dot * xi[t];
            }
            double norm = 0;
            for (int t = 0; t < n; ++t) norm += xj[t] * xj[t];
            norm = std::sqrt(norm);
            if (norm > 1e-12) {
                for (int t = 0; t < n; ++t) xj[t] /= norm;
                break;
            }
            if (attempt > n + k) throw std::runtime_error("orthonormalization failed");
            for (int t = 0; t < n; ++t)
                xj[t] = static_cast<double>(splitmix64(salt) >> 11) / 9007199254740992.0 - 0.5;
        }
    }
}

}  // namespace

std::vector<double> lowrank_approximation(const BidMatrix& bids, int rank) {
    int R = bids.reviewers(), P = bids.papers();
    if (rank < 1 || rank > std::min(R, P))
        throw std::invalid_argument("svd rank out of bounds");
    std::vector<double> B(static_cast<std::size_t>(R) * P);
    for (int r = 0; r < R; ++r)
        for (int p = 0; p < P; ++p) B[static_cast<std::size_t>(r) * P + p] = bids(r, p);
    if (rank == std::min(R, P)) return B;

    // work on the Gram matrix of the smaller side; the rank-k projection of B
    // onto its top-k singular subspace equals the truncated SVD reconstruction
    bool left = R <= P;  // eigenvectors of B B^T (left) or B^T B (right)
    int n = left ? R : P;
    std::vector<double> G(static_cast<std::size_t>(n) * n, 0.0);
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            double dot = 0;
            if (left) {
                const double* bi = &B[static_cast<std::size_t>(i) * P];
                const double* bj = &B[static_cast<std::size_t>(j) * P];
                for (int t = 0; t < P; ++t) dot += bi[t] * bj[t];
            } else {
                for (int t = 0; t < R; ++t)
                    dot += B[static_cast<std::size_t>(t) * P + i] * B[static_cast<std::size_t>(t) * P + j];
            }
            G[static_cast<std::size_t>(i) * n + j] = dot;
            G[static_cast<std::size_t>(j) * n + i] = dot;
        }
    }

    int k = rank;
    std::uint64_t salt = 0x5eedf00dULL;
    std::vector<double> X(static_cast<std::size_t>(k) * n);
    for (double& v : X)
        v = static_cast<double>(splitmix64(salt) >> 11) / 9007199254740992.0 - 0.5;
    orthonormalize(X, n, k, salt);

    std::vector<double> Y(static_cast<std::size_t>(k) * n);
    std::vector<double> ray(k, 0.0), prev(k, 0.0);
    const int max_iters = 200;
    const double tol = 1e-10;
    for (int iter = 0; iter < max_iters; ++iter) {
        for (int j = 0; j < k; ++j) {
            const double* xj = &X[static_cast<std::size_t>(j) * n];
            double* yj = &Y[static_cast<std::size_t>(j) * n];
            for (int i = 0; i < n; ++i) {
                double acc = 0;
                const double* gi = &G[static_cast<std::size_t>(i) * n];
                for (int t = 0; t < n; ++t) acc += gi[t] * xj[t];
                yj[i] = acc;
            }
            double rq = 0;
            for (int i = 0; i < n; ++i) rq += xj[i] * yj[i];
            ray[j] = rq;
        }
        double scale = std::max(1.0, std::abs(ray[0]));
        double delta = 0;
        for (int j = 0; j < k; ++j) delta = std::max(delta, std::abs(ray[j] - prev[j]));
        prev = ray;
        X.swap(Y);
        orthonormalize(X, n, k, salt);
        if (iter > 0 && delta <= tol * scale) break;
    }
    // fix sign convention: largest-magnitude component positive (bit stability)
    for (int j = 0; j < k; ++j) {
        double* xj = &X[static_cast<std::size_t>(j) * n];
        int arg = 0;
        for (int i = 1; i < n; ++i)
            if (std::abs(xj[i]) > std::abs(xj[arg])) arg = i;
        if (xj[arg] < 0)
            for (int i = 0; i < n; ++i) xj[i] = -xj[i];
    }

    // project: L = U (U^T B) or (B V) V^T
    std::vector<double> L(static_cast<std::size_t>(R) * P, 0.0);
    if (left) {
        std::vector<double> C(static_cast<std::size_t>(k) * P, 0.0);  // U^T B
        for (int j = 0; j < k; ++j) {
            const double* uj = &X[static_cast<std::size_t>(j) * n];
            double* cj = &C[static_cast<std::size_t>(j) * P];
            for (int r = 0; r < R; ++r) {
                const double* br = &B[static_cast<std::size_t>(r) * P];
                double w = uj[r];
                if (w == 0) continue;
                for (int p = 0; p < P; ++p) cj[p] += w * br[p];
            }
        }
        for (int r = 0; r < R; ++r) {
            double* lr = &L[static_cast<std::size_t>(r) * P];
            for (int j = 0; j < k; ++j) {
                double w = X[static_cast<std::size_t>(j) * n + r];
                const double* cj = &C[static_cast<std::size_t>(j) * P];
                for (int p = 0; p < P; ++p) lr[p] += w * cj[p];
            }
        }
    } else {
        std::vector<double> C(static_cast<std::size_t>(R) * k, 0.0);  // B V
        for (int r = 0; r < R; ++r) {
            const double* br = &B[static_cast<std::size_t>(r) * P];
            for (int j = 0; j < k; ++j) {
                const double* vj = &X[static_cast<std::size_t>(j) * n];
                double acc = 0;
                for (int p = 0; p < P; ++p) acc += br[p] * vj[p];
                C[static_cast<std::size_t>(r) * k + j] = acc;
            }
        }
        for (int r = 0; r < R; ++r) {
            double* lr = &L[static_cast<std::size_t>(r) * P];
            for (int j = 0; j < k; ++j) {
                double w = C[static_cast<std::size_t>(r) * k + j];
                const double* vj = &X[static_cast<std::size_t>(j) * n];
                for (int p = 0; p < P; ++p) lr[p] += w * vj[p];
            }
        }
    }
    return L;
}

SuspicionRanking lowrank_detect(const DetectionInput& input, int rank) {
    int R = input.bids.reviewers(), P = input.bids.papers();
    std::vector<double> L = lowrank_approximation(input.bids, rank);
    std::vector<double> score(R, 0.0);
    for (int r = 0; r < R; ++r) {
        double s = 0;
        for (int p = 0; p < P; ++p)
            s += std::abs(input.bids(r, p) - L[static_cast<std::size_t>(r) * P + p]);
        score[r] = s;
    }
    return rank_by_score_desc(std::move(score));
}

}  // namespace bidsim
