#pragma once
#include <array>
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace bidsim {

// Subject-area taxonomy: fine-grained areas mapped onto high-level topics.
class Taxonomy {
public:
    Taxonomy() = default;
    Taxonomy(std::vector<std::string> area_names, std::vector<std::string> topic_names,
             std::vector<int> area_topic)
        : area_names_(std::move(area_names)), topic_names_(std::move(topic_names)),
          area_topic_(std::move(area_topic)) {}

    int num_areas() const { return static_cast<int>(area_topic_.size()); }
    int num_topics() const { return static_cast<int>(topic_names_.size()); }
    int topic_of(int area) const {
        if (area < 0 || area >= num_areas())
            throw std::out_of_range("subject area index out of range: " + std::to_string(area));
        return area_topic_[area];
    }
    const std::string& area_name(int area) const { return area_names_.at(area); }
    const std::string& topic_name(int topic) const { return topic_names_.at(topic); }

private:
    std::vector<std::string> area_names_;
    std::vector<std::string> topic_names_;
    std::vector<int> area_topic_;
};

struct Paper {
    int id = 0;
    int subject_area = 0;
    std::string title;
};

struct ReviewerProfile {
    int id = 0;
    std::string name;
    std::array<int, 3> subject_areas{};
    std::set<int> authored_papers;
    std::optional<int> group;
    std::set<int> target_papers;
};

// Bid levels: -1 negative ("Not willing"), 0 neutral, +1 positive ("Eager").
using BidLevel = int;

class BidMatrix {
public:
    BidMatrix() = default;
    BidMatrix(int reviewers, int papers) : rows_(reviewers), cols_(papers),
        data_(static_cast<std::size_t>(reviewers) * papers, 0) {}

    int reviewers() const { return rows_; }
    int papers() const { return cols_; }
    BidLevel operator()(int r, int p) const { return data_[idx(r, p)]; }
    void set(int r, int p, BidLevel b) {
        if (b < -1 || b > 1) throw std::invalid_argument("bid level out of range");
        data_[idx(r, p)] = static_cast<signed char>(b);
    }
    const signed char* row(int r) const { return data_.data() + idx(r, 0); }

private:
    std::size_t idx(int r, int p) const {
        return static_cast<std::size_t>(r) * cols_ + p;
    }
    int rows_ = 0, cols_ = 0;
    std::vector<signed char> data_;
};

struct ConferenceInstance {
    Taxonomy taxonomy;
    std::vector<Paper> papers;
    std::vector<ReviewerProfile> reviewers;
    int paper_load = 3;     // reviewers per paper (exactly)
    int reviewer_load = 3;  // papers per reviewer (at most)
    std::map<int, std::vector<int>> groups;  // group id -> member reviewer ids
};

// A-component of the similarity: 1 exact area match, 0.5 topic match, 0 otherwise.
double subject_score(const ReviewerProfile& reviewer, const Paper& paper, const Taxonomy& tax);

// S = (1 + A) * 2^B; all reachable values are exactly representable doubles.
double similarity(double subject_score, BidLevel bid);

class SimilarityMatrix {
public:
    SimilarityMatrix() = default;
    SimilarityMatrix(int reviewers, int papers) : rows_(reviewers), cols_(papers),
        data_(static_cast<std::size_t>(reviewers) * papers, 0.0) {}
    int reviewers() const { return rows_; }
    int papers() const { return cols_; }
    double operator()(int r, int p) const { return data_[static_cast<std::size_t>(r) * cols_ + p]; }
    void set(int r, int p, double v) { data_[static_cast<std::size_t>(r) * cols_ + p] = v; }

private:
    int rows_ = 0, cols_ = 0;
    std::vector<double> data_;
};

SimilarityMatrix build_similarity_matrix(const ConferenceInstance& instance, const BidMatrix& bids);

}  // namespace bidsim
