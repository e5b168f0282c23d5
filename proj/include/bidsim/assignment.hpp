#pragma once
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "bidsim/model.hpp"

namespace bidsim {

struct AssignmentProblem {
    SimilarityMatrix similarity;
    std::vector<std::pair<int, int>> conflicts;  // forbidden (reviewer, paper) pairs
    int paper_load = 3;     // exactly this many reviewers per paper
    int reviewer_load = 3;  // at most this many papers per reviewer
};

struct Assignment {
    std::vector<std::pair<int, int>> pairs;  // (reviewer, paper), sorted
    double objective = 0.0;
};

struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(int paper)
        : std::runtime_error("assignment infeasible: paper " + std::to_string(paper) +
                             " cannot receive its full reviewer load"),
          unsatisfiable_paper(paper) {}
    int unsatisfiable_paper;
};

// Maximum-total-similarity b-matching. Co-optimal ties are broken by a
// deterministic seeded scan order, so the result is a pure function of
// (problem, tie_seed).
Assignment solve(const AssignmentProblem& problem, std::uint64_t tie_seed);

struct RelaxedSolution {
    std::vector<double> x;  // row-major R x P fractional assignment
    double objective = 0.0;
};

// LP relaxation (diagnostic): fractional optimum matches solve()'s objective
// within 1e-9 by total unimodularity. Dense simplex; desk-scale inputs only.
RelaxedSolution solve_relaxed(const AssignmentProblem& problem);

bool success_metric(const Assignment& assignment, const ReviewerProfile& reviewer);

}  // namespace bidsim
