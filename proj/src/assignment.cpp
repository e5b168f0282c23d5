#include "bidsim/assignment.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "bidsim/rng.hpp"

namespace bidsim {

namespace {

constexpr int kInf = std::numeric_limits<int>::max() / 4;

// Min-cost-flow solver over the bipartite assignment network with the dense
// reviewer-paper edge layer kept implicit. Successive shortest paths with
// potentials; each Dijkstra phase is saturated with Dinic blocking flows on
// the zero-reduced-cost admissible subgraph.
class FlowSolver {
public:
    FlowSolver(const AssignmentProblem& pb, std::uint64_t tie_seed)
        : R_(pb.similarity.reviewers()), P_(pb.similarity.papers()),
          rl_(pb.reviewer_load), pl_(pb.paper_load),
          cost_(static_cast<std::size_t>(R_) * P_),
          x_(static_cast<std::size_t>(R_) * P_, 0),
          fs_(R_, 0), fp_(P_, 0) {
        for (int r = 0; r < R_; ++r) {
            for (int p = 0; p < P_; ++p) {
                // S in {0.5,...,4}; 4*(4-S) is an exact small integer
                double s = pb.similarity(r, p);
                cost_[idx(r, p)] = static_cast<signed char>(std::lround((4.0 - s) * 4.0));
            }
        }
        for (auto [r, p] : pb.conflicts) cost_[idx(r, p)] = kNoEdge;

        V_ = R_ + P_ + 2;
        s_node_ = 0;
        t_node_ = V_ - 1;
        phi_.assign(V_, 0);
        dist_.assign(V_, 0);
        level_.assign(V_, 0);
        ptr_.assign(V_, 0);

        // seeded scan-order rotations break co-optimal ties deterministically
        std::uint64_t st = tie_seed;
        splitmix64(st);
        off_s_ = R_ ? static_cast<int>(splitmix64(st) % R_) : 0;
        off_r_.resize(R_);
        for (int r = 0; r < R_; ++r) off_r_[r] = P_ ? static_cast<int>(splitmix64(st) % P_) : 0;
        off_p_.resize(P_);
        for (int p = 0; p < P_; ++p) off_p_[p] = R_ ? static_cast<int>(splitmix64(st) % R_) : 0;
    }

    // runs the flow; throws InfeasibleError if some paper cannot be loaded
    void run() {
        long long target = static_cast<long long>(P_) * pl_;
        long long flow = 0;
        if (static_cast<long long>(R_) * rl_ < target) throw InfeasibleError(first_unfilled());
        while (flow < target) {
            if (!dijkstra()) throw InfeasibleError(first_unfilled());
            for (int v = 0; v < V_; ++v)
                phi_[v] += std::min(dist_[v], dist_[t_node_]);
            for (;;) {
                if (!hop_bfs()) break;
                std::fill(ptr_.begin(), ptr_.end(), 0);
                long long pushed;
                while ((pushed = dfs(s_node_, kInf)) > 0) flow += pushed;
            }
        }
    }

    bool assigned(int r, int p) const { return x_[idx(r, p)] != 0; }

private:
    static constexpr signed char kNoEdge = -1;

    std::size_t idx(int r, int p) const { return static_cast<std::size_t>(r) * P_ + p; }
    int rnode(int r) const { return 1 + r; }
    int pnode(int p) const { return 1 + R_ + p; }

    int first_unfilled() const {
        for (int p = 0; p < P_; ++p)
            if (fp_[p] < pl_) return p;
        return 0;
    }

    // dense Dijkstra over the residual graph with reduced costs
    bool dijkstra() {
        std::vector<char> done(V_, 0);
        std::fill(dist_.begin(), dist_.end(), kInf);
        dist_[s_node_] = 0;
        for (int iter = 0; iter < V_; ++iter) {
            int u = -1, best = kInf;
            for (int v = 0; v < V_; ++v)
                if (!done[v] && dist_[v] < best) { best = dist_[v]; u = v; }
            if (u < 0) break;
            done[u] = 1;
            int du = dist_[u];
            if (u == s_node_) {
                for (int r = 0; r < R_; ++r) {
                    if (fs_[r] >= rl_) continue;
                    relax(rnode(r), du + phi_[s_node_] - phi_[rnode(r)]);
                }
            } else if (u == t_node_) {
                for (int p = 0; p < P_; ++p) {
                    if (fp_[p] <= 0) continue;
                    relax(pnode(p), du + phi_[t_node_] - phi_[pnode(p)]);
                }
            } else if (u < 1 + R_) {
                int r = u - 1;
                if (fs_[r] > 0) relax(s_node_, du + phi_[u] - phi_[s_node_]);
                const signed char* row = &cost_[idx(r, 0)];
                const signed char* xr = &x_[idx(r, 0)];
                for (int p = 0; p < P_; ++p) {
                    if (row[p] == kNoEdge || xr[p]) continue;
                    relax(pnode(p), du + row[p] + phi_[u] - phi_[pnode(p)]);
                }
            } else {
                int p = u - 1 - R_;
                if (fp_[p] < pl_) relax(t_node_, du + phi_[u] - phi_[t_node_]);
                for (int r = 0; r < R_; ++r) {
                    if (!x_[idx(r, p)]) continue;
                    relax(rnode(r), du - cost_[idx(r, p)] + phi_[u] - phi_[rnode(r)]);
                }
            }
        }
        return dist_[t_node_] < kInf;
    }

    void relax(int v, int nd) {
        if (nd < dist_[v]) dist_[v] = nd;
    }

    bool admissible(int u, int v, int edge_cost) const {
        return edge_cost + phi_[u] - phi_[v] == 0;
    }

    // BFS by hop count over admissible residual edges (Dinic level graph)
    bool hop_bfs() {
        std::fill(level_.begin(), level_.end(), -1);
        level_[s_node_] = 0;
        std::vector<int> queue{s_node_};
        for (std::size_t qi = 0; qi < queue.size(); ++qi) {
            int u = queue[qi];
            auto visit = [&](int v) {
                if (level_[v] < 0) { level_[v] = level_[u] + 1; queue.push_back(v); }
            };
            if (u == s_node_) {
                for (int r = 0; r < R_; ++r)
                    if (fs_[r] < rl_ && admissible(u, rnode(r), 0)) visit(rnode(r));
            } else if (u < 1 + R_) {
                int r = u - 1;
                const signed char* row = &cost_[idx(r, 0)];
                const signed char* xr = &x_[idx(r, 0)];
                for (int p = 0; p < P_; ++p)
                    if (row[p] != kNoEdge && !xr[p] && admissible(u, pnode(p), row[p]))
                        visit(pnode(p));
            } else if (u != t_node_) {
                int p = u - 1 - R_;
                if (fp_[p] < pl_ && admissible(u, t_node_, 0)) visit(t_node_);
                for (int r = 0; r < R_; ++r)
                    if (x_[idx(r, p)] && admissible(u, rnode(r), -cost_[idx(r, p)]))
                        visit(rnode(r));
            }
        }
        return level_[t_node_] >= 0;
    }

    long long dfs(int u, long long cap) {
        if (u == t_node_ || cap == 0) return cap;
        long long pushed = 0;
        if (u == s_node_) {
            for (int& i = ptr_[u]; i < R_; ++i) {
                int r = (i + off_s_) % R_;
                int v = rnode(r);
                if (fs_[r] >= rl_ || level_[v] != level_[u] + 1 || !admissible(u, v, 0)) continue;
                long long got = dfs(v, std::min<long long>(cap - pushed, rl_ - fs_[r]));
                fs_[r] += static_cast<int>(got);
                pushed += got;
                if (pushed == cap) return pushed;
            }
        } else if (u < 1 + R_) {
            int r = u - 1;
            for (int& i = ptr_[u]; i < P_; ++i) {
                int p = (i + off_r_[r]) % P_;
                std::size_t k = idx(r, p);
                int v = pnode(p);
                if (cost_[k] == kNoEdge || x_[k] || level_[v] != level_[u] + 1 ||
                    !admissible(u, v, cost_[k]))
                    continue;
                long long got = dfs(v, std::min<long long>(cap - pushed, 1));
                if (got > 0) {
                    x_[k] = 1;
                    pushed += got;
                    if (pushed == cap) return pushed;
                }
            }
        } else {
            int p = u - 1 - R_;
            for (int& i = ptr_[u]; i < R_ + 1; ++i) {
                if (i == 0) {
                    if (fp_[p] >= pl_ || level_[t_node_] != level_[u] + 1 ||
                        !admissible(u, t_node_, 0))
                        continue;
                    long long got = std::min<long long>(cap - pushed, pl_ - fp_[p]);
                    fp_[p] += static_cast<int>(got);
                    pushed += got;
                    if (pushed == cap) return pushed;
                } else {
                    int r = (i - 1 + off_p_[p]) % R_;
                    std::size_t k = idx(r, p);
                    int v = rnode(r);
                    if (!x_[k] || level_[v] != level_[u] + 1 ||
                        !admissible(u, v, -cost_[k]))
                        continue;
                    long long got = dfs(v, std::min<long long>(cap - pushed, 1));
                    if (got > 0) {
                        x_[k] = 0;
                        pushed += got;
                        if (pushed == cap) return pushed;
                    }
                }
            }
        }
        if (pushed == 0) level_[u] = -1;  // dead for this blocking flow
        return pushed;
    }

    int R_, P_, rl_, pl_;
    int V_ = 0, s_node_ = 0, t_node_ = 0;
    std::vector<signed char> cost_;
    std::vector<signed char> x_;
    std::vector<int> fs_, fp_;
    std::vector<int> phi_, dist_, level_, ptr_;
    int off_s_ = 0;
    std::vector<int> off_r_, off_p_;
};

}  // namespace

Assignment solve(const AssignmentProblem& problem, std::uint64_t tie_seed) {
    FlowSolver solver(problem, tie_seed);
    solver.run();
    Assignment out;
    int R = problem.similarity.reviewers(), P = problem.similarity.papers();
    for (int r = 0; r < R; ++r) {
        for (int p = 0; p < P; ++p) {
            if (solver.assigned(r, p)) {
                out.pairs.emplace_back(r, p);
                out.objective += problem.similarity(r, p);
            }
        }
    }
    return out;
}

bool success_metric(const Assignment& assignment, const ReviewerProfile& reviewer) {
    if (reviewer.target_papers.empty())
        throw std::logic_error("success_metric requires a nonempty target set");
    for (auto [r, p] : assignment.pairs)
        if (r == reviewer.id && reviewer.target_papers.count(p)) return true;
    return false;
}

namespace {

// Dense two-phase simplex: minimize c.x s.t. eq rows == b, le rows <= b, x >= 0.
// All b >= 0 in our construction. Bland's rule, so no cycling.
struct Simplex {
    int n = 0;                       // structural variables
    std::vector<std::vector<double>> rows;  // coefficients per constraint
    std::vector<double> rhs;
    std::vector<bool> is_eq;

    // returns {feasible, objective, x}
    bool solve(const std::vector<double>& obj, double& out_obj, std::vector<double>& out_x) {
        const double tol = 1e-9;
        int m = static_cast<int>(rows.size());
        int n_slack = 0;
        for (bool e : is_eq)
            if (!e) ++n_slack;
        int n_art = m;  // one artificial per row keeps the basis trivial
        int total = n + n_slack + n_art;
        std::vector<std::vector<double>> T(m + 1, std::vector<double>(total + 1, 0.0));
        std::vector<int> basis(m);
        int slack_at = n, art_at = n + n_slack;
        for (int i = 0, si = 0; i < m; ++i) {
            for (int j = 0; j < n; ++j) T[i][j] = rows[i][j];
            if (!is_eq[i]) T[i][slack_at + si++] = 1.0;
            T[i][art_at + i] = 1.0;
            basis[i] = art_at + i;
            T[i][total] = rhs[i];
        }
        // phase 1: minimize artificial sum (cost row +1 on artificials, then
        // zeroed on the initial basis)
        for (int i = 0; i < m; ++i) T[m][art_at + i] = 1.0;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j <= total; ++j) T[m][j] -= T[i][j];
        auto pivot = [&](int pr, int pc) {
            double pv = T[pr][pc];
            for (int j = 0; j <= total; ++j) T[pr][j] /= pv;
            for (int i = 0; i <= m; ++i) {
                if (i == pr || std::abs(T[i][pc]) < 1e-13) continue;
                double f = T[i][pc];
                for (int j = 0; j <= total; ++j) T[i][j] -= f * T[pr][j];
            }
            basis[pr] = pc;
        };
        auto run = [&](int limit_cols) -> bool {
            for (int iter = 0; iter < 50000; ++iter) {
                int pc = -1;
                for (int j = 0; j < limit_cols; ++j)
                    if (T[m][j] < -tol) { pc = j; break; }  // Bland: first improving
                if (pc < 0) return true;
                int pr = -1;
                double best = 0;
                for (int i = 0; i < m; ++i) {
                    if (T[i][pc] > tol) {
                        double ratio = T[i][total] / T[i][pc];
                        if (pr < 0 || ratio < best - 1e-12 ||
                            (ratio < best + 1e-12 && basis[i] < basis[pr])) {
                            pr = i;
                            best = ratio;
                        }
                    }
                }
                if (pr < 0) throw std::runtime_error("LP unbounded");
                pivot(pr, pc);
            }
            throw std::runtime_error("simplex iteration limit exceeded");
        };
        run(art_at + n_art);
        if (T[m][total] < -tol) return false;  // artificial sum > 0: infeasible
        // drive any residual artificial out of the basis if possible
        for (int i = 0; i < m; ++i) {
            if (basis[i] >= art_at && std::abs(T[i][total]) < tol) {
                for (int j = 0; j < art_at; ++j)
                    if (std::abs(T[i][j]) > tol) { pivot(i, j); break; }
            }
        }
        // phase 2
        std::fill(T[m].begin(), T[m].end(), 0.0);
        for (int j = 0; j < n; ++j) T[m][j] = obj[j];
        for (int i = 0; i < m; ++i) {
            if (basis[i] < art_at && std::abs(T[m][basis[i]]) > 0) {
                double f = T[m][basis[i]];
                for (int j = 0; j <= total; ++j) T[m][j] -= f * T[i][j];
            }
        }
        run(art_at);  // artificials barred from re-entering
        out_x.assign(n, 0.0);
        for (int i = 0; i < m; ++i)
            if (basis[i] < n) out_x[basis[i]] = T[i][total];
        out_obj = 0;
        for (int j = 0; j < n; ++j) out_obj += obj[j] * out_x[j];
        return true;
    }
};

}  // namespace

RelaxedSolution solve_relaxed(const AssignmentProblem& problem) {
    int R = problem.similarity.reviewers(), P = problem.similarity.papers();
    std::vector<char> conflict(static_cast<std::size_t>(R) * P, 0);
    for (auto [r, p] : problem.conflicts) conflict[static_cast<std::size_t>(r) * P + p] = 1;
    // variables: non-conflicted (r, p) pairs
    std::vector<int> var_r, var_p;
    std::vector<std::vector<int>> by_r(R), by_p(P);
    for (int r = 0; r < R; ++r) {
        for (int p = 0; p < P; ++p) {
            if (conflict[static_cast<std::size_t>(r) * P + p]) continue;
            by_r[r].push_back(static_cast<int>(var_r.size()));
            by_p[p].push_back(static_cast<int>(var_r.size()));
            var_r.push_back(r);
            var_p.push_back(p);
        }
    }
    int n = static_cast<int>(var_r.size());
    Simplex lp;
    lp.n = n;
    for (int p = 0; p < P; ++p) {  // paper load: equality
        std::vector<double> row(n, 0.0);
        for (int v : by_p[p]) row[v] = 1.0;
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(problem.paper_load);
        lp.is_eq.push_back(true);
    }
    for (int r = 0; r < R; ++r) {  // reviewer load: at most
        std::vector<double> row(n, 0.0);
        for (int v : by_r[r]) row[v] = 1.0;
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(problem.reviewer_load);
        lp.is_eq.push_back(false);
    }
    for (int v = 0; v < n; ++v) {  // pair capacity: x <= 1
        std::vector<double> row(n, 0.0);
        row[v] = 1.0;
        lp.rows.push_back(std::move(row));
        lp.rhs.push_back(1.0);
        lp.is_eq.push_back(false);
    }
    std::vector<double> obj(n);
    for (int v = 0; v < n; ++v) obj[v] = -problem.similarity(var_r[v], var_p[v]);
    double neg_obj = 0;
    std::vector<double> x;
    if (!lp.solve(obj, neg_obj, x)) {
        int bad = 0;
        for (int p = 0; p < P; ++p)
            if (static_cast<int>(by_p[p].size()) < problem.paper_load) { bad = p; break; }
        throw InfeasibleError(bad);
    }
    RelaxedSolution out;
    out.objective = -neg_obj;
    out.x.assign(static_cast<std::size_t>(R) * P, 0.0);
    for (int v = 0; v < n; ++v)
        out.x[static_cast<std::size_t>(var_r[v]) * P + var_p[v]] = x[v];
    return out;
}

}  // namespace bidsim
