#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bidsim/assignment.hpp"
#include "bidsim/dataset_io.hpp"
#include "bidsim/detection.hpp"
#include "bidsim/harness.hpp"
#include "bidsim/model.hpp"
#include "bidsim/strategy.hpp"
#include "bidsim/svg.hpp"

namespace fs = std::filesystem;
using bidsim::Dataset;
using nlohmann::json;

namespace {

// exit codes: 0 success, 1 domain findings / infeasibility, 2 I/O or parse
constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitIo = 2;

void write_file_atomic(const fs::path& path, const std::string& content) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary);
        if (!out) throw bidsim::IoError("cannot write to " + tmp.string());
        out << content;
        if (!out) throw bidsim::IoError("short write to " + tmp.string());
    }
    fs::rename(tmp, path);
}

// merged bid matrix: honest responders' phase-one rows, overridden by
// malicious responders' phase-two rows; non-responders stay neutral
bidsim::BidMatrix phase_bids(const Dataset& ds, const std::string& phase) {
    int R = static_cast<int>(ds.instance.reviewers.size());
    int P = static_cast<int>(ds.instance.papers.size());
    bidsim::BidMatrix bids(R, P);
    auto copy_rows = [&](const bidsim::BidMatrix& src, const std::set<int>& rows) {
        for (int r : rows)
            for (int p = 0; p < P; ++p) bids.set(r, p, src(r, p));
    };
    if (phase == "honest") {
        copy_rows(ds.honest_bids, ds.honest_responders);
    } else if (phase == "mixed") {
        copy_rows(ds.honest_bids, ds.honest_responders);
        copy_rows(ds.malicious_bids, ds.malicious_responders);
    } else {
        throw CLI::ValidationError("--phase must be honest or mixed");
    }
    return bids;
}

bidsim::AssignmentProblem problem_for(const Dataset& ds, const bidsim::BidMatrix& bids,
                                      int paper_load, int reviewer_load) {
    bidsim::AssignmentProblem prob;
    prob.similarity = bidsim::build_similarity_matrix(ds.instance, bids);
    prob.paper_load = paper_load;
    prob.reviewer_load = reviewer_load;
    for (const auto& rev : ds.instance.reviewers)
        for (int p : rev.authored_papers) prob.conflicts.emplace_back(rev.id, p);
    return prob;
}

std::string fmt(double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// chart emission shared by `experiment` and `report`
void emit_charts(const bidsim::AggregateReport& report, const fs::path& out_dir) {
    bool synthetic = false;
    for (const auto& row : report.rows)
        if (row.group_size > 0) synthetic = true;

    if (!synthetic) {
        static const std::vector<std::string> label_order = {
            "Basic", "Negative-in-area", "Overlap", "Cycle", "Popularity", "none", "Overall"};
        std::vector<std::string> cats;
        for (const std::string& label : label_order)
            if (report.find("success", label)) cats.push_back(label);

        bidsim::ChartSpec success;
        success.title = "Manipulation success rate by strategy";
        success.y_label = "mean success rate";
        success.categories = cats;
        bidsim::ChartSeries s{"success", {}, {}};
        for (const std::string& label : cats) {
            const auto* row = report.find("success", label);
            s.values.push_back(row->mean);
            s.sems.push_back(row->sem);
        }
        success.series.push_back(std::move(s));
        success.y_max = 1.1;
        write_file_atomic(out_dir / "success.svg", bidsim::render_bar_chart(success));

        bidsim::ChartSpec ranks;
        ranks.title = "Detection mean rank by strategy (0 = most suspicious)";
        ranks.y_label = "mean rank";
        ranks.categories = cats;
        for (const char* metric : {"counting_rank", "ring_rank", "lowrank_rank"}) {
            bidsim::ChartSeries series{metric, {}, {}};
            for (const std::string& label : cats) {
                const auto* row = report.find(metric, label);
                series.values.push_back(row ? row->mean : 0.0);
                series.sems.push_back(row ? row->sem : 0.0);
            }
            ranks.series.push_back(std::move(series));
        }
        write_file_atomic(out_dir / "detection_rank.svg", bidsim::render_bar_chart(ranks));
        return;
    }

    std::vector<std::string> strategies;
    std::set<int> sizes, ns;
    for (const auto& row : report.rows) {
        if (std::find(strategies.begin(), strategies.end(), row.strategy) == strategies.end())
            strategies.push_back(row.strategy);
        sizes.insert(row.group_size);
        ns.insert(row.n);
    }
    for (int n : ns) {
        for (const char* metric : {"success", "counting_norm", "ring_norm", "lowrank_norm"}) {
            bidsim::ChartSpec spec;
            spec.title = std::string(metric) + " at n=" + std::to_string(n);
            spec.y_label = metric;
            spec.categories = strategies;
            for (int size : sizes) {
                bidsim::ChartSeries series{"size " + std::to_string(size), {}, {}};
                bool any = false;
                for (const std::string& strat : strategies) {
                    const auto* row = report.find(metric, strat, size, n);
                    series.values.push_back(row ? row->mean : 0.0);
                    series.sems.push_back(row ? row->sem : 0.0);
                    any = any || row;
                }
                if (any) spec.series.push_back(std::move(series));
            }
            spec.y_max = 1.1;
            write_file_atomic(out_dir / (std::string(metric) + "_n" + std::to_string(n) + ".svg"),
                              bidsim::render_bar_chart(spec));
        }
    }
}

bidsim::AggregateReport parse_report_csv(const fs::path& file) {
    auto rows = bidsim::read_csv(file);
    if (rows.empty() || rows[0].size() != 7 || rows[0][0] != "metric")
        throw bidsim::IoError("not a report CSV: " + file.string());
    bidsim::AggregateReport report;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto& r = rows[i];
        if (r.size() != 7) throw bidsim::IoError("malformed report row in " + file.string());
        bidsim::AggregateRow row;
        row.metric = r[0];
        row.strategy = r[1];
        row.group_size = std::stoi(r[2]);
        row.n = std::stoi(r[3]);
        row.mean = std::stod(r[4]);
        row.sem = std::stod(r[5]);
        row.trials = std::stoi(r[6]);
        report.rows.push_back(std::move(row));
    }
    return report;
}

// config precedence: explicit flags > JSON --config file > built-in defaults
struct ConfigFile {
    json data = json::object();

    void load(const fs::path& path) {
        std::ifstream in(path);
        if (!in) throw bidsim::IoError("cannot open config file " + path.string());
        try {
            in >> data;
        } catch (const json::exception& e) {
            throw bidsim::IoError("invalid JSON in " + path.string() + ": " + e.what());
        }
    }

    template <typename T>
    void apply(const CLI::Option* opt, const char* key, T& var) const {
        if (opt && opt->count() > 0) return;
        if (data.contains(key)) var = data.at(key).get<T>();
    }
};

std::vector<bidsim::StrategyKind> parse_strategies(const std::vector<std::string>& names) {
    std::vector<bidsim::StrategyKind> out;
    for (const std::string& name : names) out.push_back(bidsim::parse_strategy(name));
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Paper-bidding manipulation simulator and detection benchmark"};
    app.require_subcommand(1);
    app.fallthrough();  // --config may appear after the subcommand name
    std::string config_path;
    app.add_option("--config", config_path, "JSON config file (flags take precedence)")
        ->expected(1);

    // validate
    auto* validate = app.add_subcommand("validate", "Check a dataset directory for rule violations");
    std::string v_dataset;
    validate->add_option("--dataset", v_dataset, "dataset directory")->required();

    // ingest
    auto* ingest = app.add_subcommand("ingest", "Load a dataset and write a normalized copy");
    std::string i_dataset, i_out;
    ingest->add_option("--dataset", i_dataset, "dataset directory")->required();
    ingest->add_option("--out", i_out, "output directory")->required();

    // gen
    auto* gen = app.add_subcommand("gen", "Generate a synthetic instance to disk");
    std::string g_dataset, g_out, g_strategy = "Basic";
    int g_n = 500, g_size = 2;
    std::uint64_t g_seed = 0;
    gen->add_option("--dataset", g_dataset, "source dataset directory")->required();
    gen->add_option("--out", g_out, "output directory")->required();
    auto* g_n_opt = gen->add_option("--n", g_n, "reviewers = papers");
    auto* g_size_opt = gen->add_option("--size", g_size, "malicious group size");
    auto* g_strat_opt = gen->add_option("--strategy", g_strategy, "malicious strategy");
    auto* g_seed_opt = gen->add_option("--seed", g_seed, "random seed");

    // assign
    auto* assign = app.add_subcommand("assign", "Compute the max-similarity assignment");
    std::string a_dataset, a_out, a_phase = "mixed";
    int a_paper_load = 3, a_reviewer_load = 3;
    std::uint64_t a_seed = 0;
    assign->add_option("--dataset", a_dataset, "dataset directory")->required();
    assign->add_option("--out", a_out, "assignment CSV path");
    auto* a_phase_opt = assign->add_option("--phase", a_phase, "bid phase: honest | mixed");
    auto* a_pl_opt = assign->add_option("--paper-load", a_paper_load, "reviewers per paper");
    auto* a_rl_opt = assign->add_option("--reviewer-load", a_reviewer_load, "papers per reviewer");
    auto* a_seed_opt = assign->add_option("--seed", a_seed, "tie-breaking seed");

    // detect
    auto* detect = app.add_subcommand("detect", "Rank reviewers by suspicion");
    std::string d_dataset, d_out, d_phase = "mixed";
    int d_rank = 3;
    std::vector<std::string> d_detectors = {"counting", "ring", "lowrank"};
    detect->add_option("--dataset", d_dataset, "dataset directory")->required();
    detect->add_option("--out", d_out, "ranking CSV path");
    auto* d_phase_opt = detect->add_option("--phase", d_phase, "bid phase: honest | mixed");
    auto* d_rank_opt = detect->add_option("--rank", d_rank, "SVD rank for the low-rank detector");
    auto* d_det_opt = detect->add_option("--detectors", d_detectors, "subset of counting,ring,lowrank")
                          ->delimiter(',');

    // experiment
    auto* experiment = app.add_subcommand("experiment", "Run the trial protocol and write reports");
    std::string e_dataset, e_out_dir = ".", e_mode = "real";
    int e_trials = 100, e_jobs = 0, e_rank = 3;
    std::uint64_t e_seed = 7;
    std::vector<int> e_sizes = {2, 3, 4}, e_ns = {500};
    std::vector<std::string> e_strategies = {"Basic", "Negative-in-area", "Overlap", "Cycle"};
    experiment->add_option("--dataset", e_dataset, "dataset directory")->required();
    experiment->add_option("--out-dir", e_out_dir, "output directory");
    auto* e_mode_opt = experiment->add_option("--mode", e_mode, "real | synthetic");
    auto* e_trials_opt = experiment->add_option("--trials", e_trials, "trials per unit/cell");
    auto* e_seed_opt = experiment->add_option("--seed", e_seed, "master seed");
    auto* e_jobs_opt =
        experiment->add_option("--jobs", e_jobs, "worker threads (0 = hardware concurrency)");
    auto* e_rank_opt = experiment->add_option("--rank", e_rank, "SVD rank");
    auto* e_sizes_opt =
        experiment->add_option("--sizes", e_sizes, "synthetic group sizes")->delimiter(',');
    auto* e_ns_opt = experiment->add_option("--ns", e_ns, "synthetic instance sizes")->delimiter(',');
    auto* e_strat_opt =
        experiment->add_option("--strategies", e_strategies, "synthetic strategies")->delimiter(',');

    // report
    auto* report_cmd = app.add_subcommand("report", "Render SVG charts from a report CSV");
    std::string r_in, r_out_dir = ".";
    report_cmd->add_option("--in", r_in, "report CSV path")->required();
    report_cmd->add_option("--out-dir", r_out_dir, "output directory");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? kExitOk : kExitIo;
    }

    try {
        ConfigFile cfg;
        if (!config_path.empty()) cfg.load(config_path);

        if (*validate) {
            Dataset ds = bidsim::load_dataset(v_dataset);
            std::vector<bidsim::Finding> findings = bidsim::validate_dataset(ds);
            for (const auto& f : findings) std::cout << "finding: " << f.message << "\n";
            std::cout << (findings.empty() ? "ok" : "violations found") << "\n";
            return findings.empty() ? kExitOk : kExitDomain;
        }

        if (*ingest) {
            Dataset ds = bidsim::load_dataset(i_dataset);
            bidsim::write_dataset(ds, i_out);
            std::cout << "wrote " << i_out << "\n";
            return kExitOk;
        }

        if (*gen) {
            cfg.apply(g_n_opt, "n", g_n);
            cfg.apply(g_size_opt, "size", g_size);
            cfg.apply(g_strat_opt, "strategy", g_strategy);
            cfg.apply(g_seed_opt, "seed", g_seed);
            Dataset source = bidsim::load_dataset(g_dataset);
            bidsim::SyntheticConfig sc;
            sc.n = g_n;
            sc.group_size = g_size;
            sc.strategy = bidsim::parse_strategy(g_strategy);
            sc.seed = g_seed;
            bidsim::SyntheticInstance synth = bidsim::build_synthetic_instance(sc, source);

            Dataset out;
            out.instance = synth.instance;
            out.honest_bids = bidsim::BidMatrix(sc.n, sc.n);
            out.malicious_bids = bidsim::BidMatrix(sc.n, sc.n);
            std::set<int> malicious(synth.malicious.begin(), synth.malicious.end());
            for (int r = 0; r < sc.n; ++r) {
                bool mal = malicious.count(r) > 0;
                (mal ? out.malicious_responders : out.honest_responders).insert(r);
                bidsim::BidMatrix& dst = mal ? out.malicious_bids : out.honest_bids;
                for (int p = 0; p < sc.n; ++p) dst.set(r, p, synth.bids(r, p));
                if (mal)
                    out.annotations.push_back({out.instance.reviewers[r].name,
                                               static_cast<int>(sc.strategy), std::nullopt});
            }
            bidsim::write_dataset(out, g_out);
            std::string labels = "reviewer_id,is_malicious,strategy\n";
            for (int r = 0; r < sc.n; ++r)
                labels += std::to_string(r) + "," + (malicious.count(r) ? "1" : "0") + "," +
                          (malicious.count(r) ? bidsim::strategy_name(sc.strategy) : "") + "\n";
            write_file_atomic(fs::path(g_out) / "labels.csv", labels);
            std::cout << "wrote " << g_out << "\n";
            return kExitOk;
        }

        if (*assign) {
            cfg.apply(a_phase_opt, "phase", a_phase);
            cfg.apply(a_pl_opt, "paper_load", a_paper_load);
            cfg.apply(a_rl_opt, "reviewer_load", a_reviewer_load);
            cfg.apply(a_seed_opt, "seed", a_seed);
            Dataset ds = bidsim::load_dataset(a_dataset);
            bidsim::BidMatrix bids = phase_bids(ds, a_phase);
            bidsim::AssignmentProblem prob = problem_for(ds, bids, a_paper_load, a_reviewer_load);
            bidsim::Assignment assignment;
            try {
                assignment = bidsim::solve(prob, a_seed);
            } catch (const bidsim::InfeasibleError& e) {
                std::cerr << "error: " << e.what() << "\n";
                return kExitDomain;
            }
            std::string csv = "reviewer,reviewer_name,paper,paper_title\n";
            for (auto [r, p] : assignment.pairs)
                csv += std::to_string(r) + "," +
                       bidsim::csv_escape(ds.instance.reviewers[r].name) + "," +
                       std::to_string(p) + "," + bidsim::csv_escape(ds.instance.papers[p].title) +
                       "\n";
            if (!a_out.empty()) write_file_atomic(a_out, csv);
            std::cout << "objective," << fmt(assignment.objective) << "\n";
            std::cout << "pairs," << assignment.pairs.size() << "\n";
            return kExitOk;
        }

        if (*detect) {
            cfg.apply(d_phase_opt, "phase", d_phase);
            cfg.apply(d_rank_opt, "rank", d_rank);
            cfg.apply(d_det_opt, "detectors", d_detectors);
            Dataset ds = bidsim::load_dataset(d_dataset);
            bidsim::BidMatrix bids = phase_bids(ds, d_phase);
            std::vector<std::set<int>> authored;
            for (const auto& rev : ds.instance.reviewers) authored.push_back(rev.authored_papers);
            bidsim::DetectionInput input = bidsim::DetectionInput::from(bids, authored);
            std::string csv = "detector,rank,reviewer,name,score\n";
            for (const std::string& det : d_detectors) {
                bidsim::SuspicionRanking ranking;
                if (det == "counting")
                    ranking = bidsim::counting_detect(input);
                else if (det == "ring")
                    ranking = bidsim::ring_detect(input);
                else if (det == "lowrank")
                    ranking = bidsim::lowrank_detect(input, d_rank);
                else
                    throw CLI::ValidationError("unknown detector: " + det);
                for (std::size_t i = 0; i < ranking.order.size(); ++i) {
                    int r = ranking.order[i];
                    csv += det + "," + std::to_string(i) + "," + std::to_string(r) + "," +
                           bidsim::csv_escape(ds.instance.reviewers[r].name) + "," +
                           fmt(ranking.scores[r]) + "\n";
                }
            }
            if (!d_out.empty())
                write_file_atomic(d_out, csv);
            else
                std::cout << csv;
            return kExitOk;
        }

        if (*experiment) {
            cfg.apply(e_mode_opt, "mode", e_mode);
            cfg.apply(e_trials_opt, "trials", e_trials);
            cfg.apply(e_seed_opt, "seed", e_seed);
            cfg.apply(e_jobs_opt, "jobs", e_jobs);
            cfg.apply(e_rank_opt, "rank", e_rank);
            cfg.apply(e_sizes_opt, "sizes", e_sizes);
            cfg.apply(e_ns_opt, "ns", e_ns);
            cfg.apply(e_strat_opt, "strategies", e_strategies);
            Dataset ds = bidsim::load_dataset(e_dataset);
            bidsim::ExperimentConfig ec;
            if (e_mode == "real")
                ec.mode = bidsim::ExperimentMode::Real;
            else if (e_mode == "synthetic")
                ec.mode = bidsim::ExperimentMode::Synthetic;
            else
                throw CLI::ValidationError("--mode must be real or synthetic");
            ec.trials = e_trials;
            ec.master_seed = e_seed;
            ec.jobs = e_jobs;
            ec.svd_rank = e_rank;
            ec.sizes = e_sizes;
            ec.ns = e_ns;
            ec.strategies = parse_strategies(e_strategies);
            bidsim::AggregateReport report = bidsim::run_experiment(ec, ds);
            write_file_atomic(fs::path(e_out_dir) / "report.csv", bidsim::report_to_csv(report));
            emit_charts(report, e_out_dir);
            std::cout << "wrote " << (fs::path(e_out_dir) / "report.csv").string() << "\n";
            return kExitOk;
        }

        if (*report_cmd) {
            bidsim::AggregateReport report = parse_report_csv(r_in);
            emit_charts(report, r_out_dir);
            std::cout << "wrote charts to " << r_out_dir << "\n";
            return kExitOk;
        }
    } catch (const bidsim::IoError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitIo;
    } catch (const bidsim::InfeasibleError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitDomain;
    }
    return kExitOk;
}
