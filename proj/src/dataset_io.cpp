#include "bidsim/dataset_io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

namespace bidsim {

const std::vector<std::string> kStrategyNames = {
    "Basic", "Negative-in-area", "Overlap", "Cycle", "Popularity"};

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_csv_line(const std::string& line, const std::string& where) {
    std::vector<std::string> out;
    std::string cell;
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < line.size() && line[i + 1] == '"') { cell += '"'; ++i; }
                else quoted = false;
            } else cell += c;
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            out.push_back(cell);
            cell.clear();
        } else if (c != '\r') {
            cell += c;
        }
    }
    if (quoted) throw IoError("unterminated quote in " + where);
    out.push_back(cell);
    return out;
}

int parse_int(const std::string& s, const std::string& where) {
    try {
        std::size_t pos = 0;
        int v = std::stoi(trim(s), &pos);
        if (pos != trim(s).size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        throw IoError("expected integer, got '" + s + "' in " + where);
    }
}

std::vector<std::string> read_lines(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw IoError("cannot open " + file.string());
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(line);
    }
    return lines;
}

}  // namespace

std::vector<std::vector<std::string>> read_csv(const std::filesystem::path& file) {
    std::vector<std::vector<std::string>> rows;
    int n = 0;
    for (const std::string& line : read_lines(file)) {
        ++n;
        if (line.empty()) continue;
        rows.push_back(split_csv_line(line, file.filename().string() + ":" + std::to_string(n)));
    }
    return rows;
}

std::string csv_escape(const std::string& cell) {
    if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
    std::string out = "\"";
    for (char c : cell) {
        if (c == '"') out += "\"\"";
        else out += c;
    }
    out += '"';
    return out;
}

BidLevel parse_bid_string(const std::string& raw) {
    std::string s = trim(raw);
    if (s.empty() || s == "Indifferent") return 0;
    if (s == "Not willing to review") return -1;
    if (s == "Eager to review") return 1;
    throw IoError("bid string outside vocabulary: '" + raw + "'");
}

const std::string& bid_string(BidLevel level) {
    static const std::string neg = "Not willing to review";
    static const std::string neu = "Indifferent";
    static const std::string pos = "Eager to review";
    switch (level) {
        case -1: return neg;
        case 0: return neu;
        case 1: return pos;
        default: throw std::invalid_argument("bid level out of range");
    }
}

std::optional<int> Dataset::strategy_of(int reviewer) const {
    for (const auto& a : annotations) {
        auto it = reviewer_by_name.find(a.name);
        if (it != reviewer_by_name.end() && it->second == reviewer) return a.strategy;
    }
    return std::nullopt;
}

namespace {

Taxonomy load_taxonomy(const std::filesystem::path& file) {
    std::vector<std::string> area_names, topic_names;
    std::vector<int> area_topic;
    for (const std::string& line : read_lines(file)) {
        if (trim(line).empty()) continue;
        std::size_t sep = line.find(" :: ");
        if (sep == std::string::npos)
            throw IoError("malformed taxonomy line '" + line + "' in " + file.string());
        std::string topic = trim(line.substr(0, sep));
        std::string area = trim(line.substr(sep + 4));
        auto it = std::find(topic_names.begin(), topic_names.end(), topic);
        int topic_id;
        if (it == topic_names.end()) {
            topic_id = static_cast<int>(topic_names.size());
            topic_names.push_back(topic);
        } else {
            topic_id = static_cast<int>(it - topic_names.begin());
        }
        area_names.push_back(area);
        area_topic.push_back(topic_id);
    }
    return Taxonomy(area_names, topic_names, area_topic);
}

struct BidFile {
    BidMatrix bids;
    std::set<int> responders;
};

BidFile load_bids(const std::filesystem::path& file, const std::vector<Paper>& papers,
                  const std::map<std::string, int>& reviewer_by_name, int num_reviewers) {
    auto rows = read_csv(file);
    if (rows.size() < 2) throw IoError(file.string() + ": missing two-row header");
    // bids are matched by paper title in the second header row, not by position
    const auto& header2 = rows[1];
    std::map<std::string, int> paper_by_title;
    for (const Paper& p : papers) paper_by_title[p.title] = p.id;
    std::vector<int> col_paper(header2.size(), -1);
    std::size_t matched = 0;
    for (std::size_t c = 0; c < header2.size(); ++c) {
        auto it = paper_by_title.find(trim(header2[c]));
        if (it != paper_by_title.end()) {
            col_paper[c] = it->second;
            ++matched;
        }
    }
    if (matched != papers.size())
        throw IoError(file.string() + ": header matches " + std::to_string(matched) +
                      " paper titles, expected " + std::to_string(papers.size()));
    BidFile out{BidMatrix(num_reviewers, static_cast<int>(papers.size())), {}};
    for (std::size_t i = 2; i < rows.size(); ++i) {
        const auto& row = rows[i];
        if (row.empty() || trim(row[0]).empty()) continue;
        auto it = reviewer_by_name.find(trim(row[0]));
        if (it == reviewer_by_name.end())
            throw IoError(file.string() + ": unknown reviewer '" + row[0] + "'");
        int r = it->second;
        if (!out.responders.insert(r).second)
            throw IoError(file.string() + ": duplicate response for '" + row[0] + "'");
        for (std::size_t c = 1; c < row.size() && c < col_paper.size(); ++c) {
            if (col_paper[c] >= 0)
                out.bids.set(r, col_paper[c], parse_bid_string(row[c]));
        }
    }
    return out;
}

}  // namespace

Dataset load_dataset(const std::filesystem::path& dir) {
    for (const char* f : {"setup.csv", "honest_bidding.csv", "malicious_bidding.csv",
                          "strategy_annotations.csv", "subject_areas.txt", "paper_titles.txt"}) {
        if (!std::filesystem::exists(dir / f)) throw IoError("missing file: " + (dir / f).string());
    }
    Dataset ds;
    ds.instance.taxonomy = load_taxonomy(dir / "subject_areas.txt");

    std::vector<std::string> titles;
    for (const std::string& line : read_lines(dir / "paper_titles.txt"))
        if (!trim(line).empty()) titles.push_back(trim(line));

    auto setup = read_csv(dir / "setup.csv");
    if (setup.empty() || setup[0].empty() || trim(setup[0][0]) != "name")
        throw IoError("setup.csv: expected header starting with 'name'");

    ds.instance.papers.resize(titles.size());
    for (std::size_t p = 0; p < titles.size(); ++p) {
        ds.instance.papers[p].id = static_cast<int>(p);
        ds.instance.papers[p].title = titles[p];
        ds.instance.papers[p].subject_area = -1;
    }

    struct PendingTarget { int reviewer; int target_id; };
    std::vector<PendingTarget> solo_targets;

    for (std::size_t i = 1; i < setup.size(); ++i) {
        const auto& row = setup[i];
        std::string where = "setup.csv row " + std::to_string(i + 1);
        if (row.size() != 7) throw IoError(where + ": expected 7 columns, got " + std::to_string(row.size()));
        ReviewerProfile rev;
        rev.id = static_cast<int>(ds.instance.reviewers.size());
        rev.name = trim(row[0]);
        if (rev.name.empty()) throw IoError(where + ": empty name");
        if (!ds.reviewer_by_name.emplace(rev.name, rev.id).second)
            throw IoError(where + ": duplicate reviewer name '" + rev.name + "'");
        std::istringstream sas(trim(row[1]));
        std::vector<int> areas;
        std::string tok;
        while (sas >> tok) areas.push_back(parse_int(tok, where + " sas"));
        if (areas.size() != 3) throw IoError(where + ": sas must have exactly 3 entries");
        for (std::size_t k = 0; k < 3; ++k) {
            if (areas[k] < 0 || areas[k] >= ds.instance.taxonomy.num_areas())
                throw IoError(where + ": dangling subject-area index " + std::to_string(areas[k]));
            rev.subject_areas[k] = areas[k];
        }
        int authored_sa = parse_int(row[2], where + " authored_sa");
        int authored_id = parse_int(row[3], where + " authored_id");
        if (authored_id < 0 || authored_id >= static_cast<int>(titles.size()))
            throw IoError(where + ": dangling paper index " + std::to_string(authored_id));
        Paper& paper = ds.instance.papers[authored_id];
        if (paper.subject_area >= 0 && paper.subject_area != authored_sa)
            throw IoError(where + ": inconsistent subject area for paper " + std::to_string(authored_id));
        if (authored_sa < 0 || authored_sa >= ds.instance.taxonomy.num_areas())
            throw IoError(where + ": dangling subject-area index " + std::to_string(authored_sa));
        paper.subject_area = authored_sa;
        rev.authored_papers.insert(authored_id);

        bool has_group = !trim(row[6]).empty();
        bool has_target = !trim(row[4]).empty() || !trim(row[5]).empty();
        if (has_group) {
            rev.group = parse_int(row[6], where + " group");
            ds.instance.groups[*rev.group].push_back(rev.id);
        } else if (has_target) {
            int target_id = parse_int(row[5], where + " target_id");
            if (target_id < 0 || target_id >= static_cast<int>(titles.size()))
                throw IoError(where + ": dangling target paper index");
            solo_targets.push_back({rev.id, target_id});
        }
        ds.instance.reviewers.push_back(std::move(rev));
    }

    for (const Paper& p : ds.instance.papers)
        if (p.subject_area < 0)
            throw IoError("paper " + std::to_string(p.id) + " has no author in setup.csv");

    // materialize target sets
    for (const auto& [gid, members] : ds.instance.groups) {
        for (int r : members) {
            for (int q : members) {
                if (q == r) continue;
                for (int p : ds.instance.reviewers[q].authored_papers)
                    ds.instance.reviewers[r].target_papers.insert(p);
            }
            for (int p : ds.instance.reviewers[r].authored_papers)
                ds.instance.reviewers[r].target_papers.erase(p);
        }
    }
    for (const auto& [r, target] : solo_targets)
        ds.instance.reviewers[r].target_papers.insert(target);

    int R = static_cast<int>(ds.instance.reviewers.size());
    auto honest = load_bids(dir / "honest_bidding.csv", ds.instance.papers, ds.reviewer_by_name, R);
    auto malicious = load_bids(dir / "malicious_bidding.csv", ds.instance.papers, ds.reviewer_by_name, R);
    ds.honest_bids = std::move(honest.bids);
    ds.honest_responders = std::move(honest.responders);
    ds.malicious_bids = std::move(malicious.bids);
    ds.malicious_responders = std::move(malicious.responders);

    auto ann = read_csv(dir / "strategy_annotations.csv");
    if (ann.empty() || ann[0].size() < 2 || trim(ann[0][0]) != "Name")
        throw IoError("strategy_annotations.csv: expected header 'Name,Strategy,Discussed'");
    for (std::size_t i = 1; i < ann.size(); ++i) {
        const auto& row = ann[i];
        StrategyAnnotation a;
        a.name = trim(row[0]);
        if (!ds.reviewer_by_name.count(a.name))
            throw IoError("strategy_annotations.csv: unknown reviewer '" + a.name + "'");
        a.strategy = parse_int(row[1], "strategy_annotations.csv row " + std::to_string(i + 1));
        if (a.strategy < -1 || a.strategy >= static_cast<int>(kStrategyNames.size()))
            throw IoError("strategy_annotations.csv: strategy index out of range");
        if (row.size() > 2) {
            std::string d = trim(row[2]);
            if (d == "Y") a.discussed = true;
            else if (d == "N") a.discussed = false;
            else if (!d.empty())
                throw IoError("strategy_annotations.csv: Discussed must be Y, N or empty");
        }
        ds.annotations.push_back(std::move(a));
    }
    return ds;
}

void write_dataset(const Dataset& ds, const std::filesystem::path& dir) {
    std::filesystem::create_directories(dir);
    const auto& inst = ds.instance;

    {
        std::ofstream out(dir / "subject_areas.txt");
        if (!out) throw IoError("cannot write to " + dir.string());
        for (int a = 0; a < inst.taxonomy.num_areas(); ++a)
            out << inst.taxonomy.topic_name(inst.taxonomy.topic_of(a))
                << " :: " << inst.taxonomy.area_name(a) << "\n";
    }
    {
        std::ofstream out(dir / "paper_titles.txt");
        for (const Paper& p : inst.papers) out << p.title << "\n";
    }
    {
        std::ofstream out(dir / "setup.csv");
        out << "name,sas,authored_sa,authored_id,target_sa,target_id,group\n";
        for (const ReviewerProfile& rev : inst.reviewers) {
            int authored = *rev.authored_papers.begin();
            out << csv_escape(rev.name) << ","
                << rev.subject_areas[0] << " " << rev.subject_areas[1] << " "
                << rev.subject_areas[2] << ","
                << inst.papers[authored].subject_area << "," << authored << ",";
            if (!rev.group && !rev.target_papers.empty()) {
                int target = *rev.target_papers.begin();
                out << inst.papers[target].subject_area << "," << target << ",";
            } else {
                out << ",,";
            }
            if (rev.group) out << *rev.group;
            out << "\n";
        }
    }

    auto write_bids = [&](const std::filesystem::path& file, const BidMatrix& bids,
                          const std::set<int>& responders,
                          const std::vector<std::string>& questions) {
        std::ofstream out(file);
        out << "Name";
        for (std::size_t p = 0; p < inst.papers.size(); ++p) out << ",B" << p;
        for (std::size_t q = 0; q < questions.size(); ++q) out << ",T" << q;
        out << "\n";
        for (const Paper& p : inst.papers) out << "," << csv_escape(p.title);
        for (const std::string& q : questions) out << "," << csv_escape(q);
        out << "\n";
        for (int r : responders) {
            out << csv_escape(inst.reviewers[r].name);
            for (std::size_t p = 0; p < inst.papers.size(); ++p)
                out << "," << bid_string(bids(r, static_cast<int>(p)));
            for (std::size_t q = 0; q < questions.size(); ++q) out << ",";
            out << "\n";
        }
    };
    const std::string q1 = "Did you follow any kind of strategy when bidding and if so, what was it?";
    const std::string q2 = "Did you communicate with your other group members and if so, what did you discuss?";
    write_bids(dir / "honest_bidding.csv", ds.honest_bids, ds.honest_responders, {q1});
    write_bids(dir / "malicious_bidding.csv", ds.malicious_bids, ds.malicious_responders, {q1, q2});

    {
        std::ofstream out(dir / "strategy_annotations.csv");
        out << "Name,Strategy,Discussed\n";
        for (const auto& a : ds.annotations) {
            out << csv_escape(a.name) << "," << a.strategy << ",";
            if (a.discussed) out << (*a.discussed ? "Y" : "N");
            out << "\n";
        }
    }
}

std::vector<Finding> validate_dataset(const Dataset& ds) {
    std::vector<Finding> findings;
    const auto& inst = ds.instance;
    std::map<int, std::vector<int>> authors_of;
    for (const ReviewerProfile& rev : inst.reviewers) {
        if (rev.authored_papers.empty())
            findings.push_back({"reviewer " + rev.name + " authors no paper"});
        for (int p : rev.authored_papers) authors_of[p].push_back(rev.id);
        for (int p : rev.target_papers) {
            if (rev.authored_papers.count(p))
                findings.push_back({"reviewer " + rev.name + " targets their own paper " +
                                    std::to_string(p)});
        }
    }
    for (const auto& [p, authors] : authors_of) {
        if (authors.size() > 2)
            findings.push_back({"paper " + std::to_string(p) + " has " +
                                std::to_string(authors.size()) + " authors (max 2)"});
    }
    for (const auto& [gid, members] : inst.groups) {
        for (std::size_t i = 0; i < members.size(); ++i) {
            for (std::size_t j = i + 1; j < members.size(); ++j) {
                const auto& a = inst.reviewers[members[i]].authored_papers;
                const auto& b = inst.reviewers[members[j]].authored_papers;
                for (int p : a) {
                    if (b.count(p))
                        findings.push_back({"groupmates " + inst.reviewers[members[i]].name +
                                            " and " + inst.reviewers[members[j]].name +
                                            " share authored paper " + std::to_string(p)});
                }
            }
        }
        if (members.size() < 2)
            findings.push_back({"group " + std::to_string(gid) + " has fewer than 2 members"});
    }
    long long capacity = static_cast<long long>(inst.reviewers.size()) * inst.reviewer_load;
    long long demand = static_cast<long long>(inst.papers.size()) * inst.paper_load;
    if (capacity < demand)
        findings.push_back({"reviewer capacity " + std::to_string(capacity) +
                            " below paper demand " + std::to_string(demand)});
    for (int r : ds.malicious_responders) {
        if (inst.reviewers[r].target_papers.empty())
            findings.push_back({"malicious responder " + inst.reviewers[r].name +
                                " has no target papers"});
    }
    return findings;
}

}  // namespace bidsim
