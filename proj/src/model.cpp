#include "bidsim/model.hpp"

#include <cmath>

namespace bidsim {

double subject_score(const ReviewerProfile& reviewer, const Paper& paper, const Taxonomy& tax) {
    int area = paper.subject_area;
    int topic = tax.topic_of(area);
    bool topic_match = false;
    for (int a : reviewer.subject_areas) {
        if (a == area) return 1.0;
        if (tax.topic_of(a) == topic) topic_match = true;
    }
    return topic_match ? 0.5 : 0.0;
}

double similarity(double subject_score, BidLevel bid) {
    double base = 1.0 + subject_score;
    switch (bid) {
        case -1: return base * 0.5;
        case 0: return base;
        case 1: return base * 2.0;
        default: throw std::invalid_argument("bid level out of range");
    }
}

SimilarityMatrix build_similarity_matrix(const ConferenceInstance& instance, const BidMatrix& bids) {
    int R = static_cast<int>(instance.reviewers.size());
    int P = static_cast<int>(instance.papers.size());
    if (bids.reviewers() != R || bids.papers() != P)
        throw std::invalid_argument("bid matrix dimensions do not match the instance");
    SimilarityMatrix S(R, P);
    for (int r = 0; r < R; ++r) {
        const ReviewerProfile& rev = instance.reviewers[r];
        for (int p = 0; p < P; ++p) {
            double a = subject_score(rev, instance.papers[p], instance.taxonomy);
            S.set(r, p, similarity(a, bids(r, p)));
        }
    }
    return S;
}

}  // namespace bidsim
