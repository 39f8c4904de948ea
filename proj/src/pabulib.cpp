#include "pb/pabulib.hpp"

#include <algorithm>
#include <sstream>

namespace pb {

const std::string* ElectionMetadata::find(const std::string& key) const {
    for (auto& [k, v] : entries)
        if (k == key) return &v;
    return nullptr;
}

void ElectionMetadata::set(const std::string& key, const std::string& value) {
    for (auto& [k, v] : entries)
        if (k == key) {
            v = value;
            return;
        }
    entries.emplace_back(key, value);
}

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

std::string join(const std::vector<std::string>& xs, char sep) {
    std::string out;
    for (size_t i = 0; i < xs.size(); ++i) {
        if (i) out += sep;
        out += xs[i];
    }
    return out;
}

struct Row {
    std::string raw;
    int line; // 1-based
};

Rat parse_rat_at(const std::string& s, int line) {
    try {
        return parse_rat(s);
    } catch (const Error& e) {
        throw Error("MalformedNumber", std::string(e.what()), line);
    }
}

} // namespace

ParseResult parse_pabulib(const std::string& text) {
    // Section split; accepts CRLF, ignores blank lines.
    std::map<std::string, std::vector<Row>> sections;
    std::string current;
    int lineno = 0;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line == "META" || line == "PROJECTS" || line == "VOTES") {
            current = line;
            sections[current]; // mark as present even if empty
            continue;
        }
        if (current.empty())
            throw Error("MissingSection", "data before any section header", lineno);
        sections[current].push_back({line, lineno});
    }
    for (const char* sec : {"META", "PROJECTS", "VOTES"})
        if (!sections.count(sec))
            throw Error("MissingSection", std::string("no ") + sec + " section");

    ElectionMetadata meta;

    // META: header row "key;value", then key;value rows (value keeps embedded
    // semicolons).
    {
        auto& rows = sections["META"];
        if (rows.empty()) throw Error("MissingColumn", "META section has no header row");
        auto header = split(rows[0].raw, ';');
        if (header.size() < 2 || header[0] != "key" || header[1] != "value")
            throw Error("MissingColumn", "META header must be 'key;value'", rows[0].line);
        for (size_t r = 1; r < rows.size(); ++r) {
            auto pos = rows[r].raw.find(';');
            if (pos == std::string::npos)
                throw Error("MissingColumn", "META row lacks a value", rows[r].line);
            meta.entries.emplace_back(rows[r].raw.substr(0, pos), rows[r].raw.substr(pos + 1));
        }
    }
    for (const char* key : {"num_projects", "num_votes", "budget", "vote_type"})
        if (!meta.find(key))
            throw Error("MissingColumn", std::string("META lacks required key '") + key + "'");
    const std::string vote_type = *meta.find("vote_type");
    if (vote_type != "approval" && vote_type != "ordinal" && vote_type != "cumulative" &&
        vote_type != "scoring")
        throw Error("UnknownVoteType", "vote_type '" + vote_type + "'");
    const Rat budget = parse_rat_at(*meta.find("budget"), 0);
    if (budget <= 0) throw Error("MalformedNumber", "budget must be positive");

    // PROJECTS
    std::vector<std::pair<ProjectId, Rat>> kept;
    std::vector<std::string> warnings;
    std::map<ProjectId, int> seen; // any parsed id -> 1 kept / 0 dropped
    {
        auto& rows = sections["PROJECTS"];
        if (rows.empty()) throw Error("MissingColumn", "PROJECTS section has no header row");
        auto header = split(rows[0].raw, ';');
        auto id_col = std::find(header.begin(), header.end(), "project_id");
        auto cost_col = std::find(header.begin(), header.end(), "cost");
        if (id_col == header.end())
            throw Error("MissingColumn", "PROJECTS lacks 'project_id'", rows[0].line);
        if (cost_col == header.end())
            throw Error("MissingColumn", "PROJECTS lacks 'cost'", rows[0].line);
        size_t idi = id_col - header.begin(), ci = cost_col - header.begin();
        meta.extra["projects_columns"] = rows[0].raw;
        for (size_t r = 1; r < rows.size(); ++r) {
            auto cells = split(rows[r].raw, ';');
            if (cells.size() < header.size())
                throw Error("MissingColumn", "PROJECTS row has too few cells", rows[r].line);
            const ProjectId id = cells[idi];
            if (seen.count(id))
                throw Error("DuplicateProjectId", "project '" + id + "'", rows[r].line);
            Rat cost = parse_rat_at(cells[ci], rows[r].line);
            if (cost <= 0)
                throw Error("NonPositiveCost", "project '" + id + "' has cost " + cells[ci],
                            rows[r].line);
            if (cost > budget) {
                seen[id] = 0;
                warnings.push_back("dropped project '" + id + "': cost " + rat_str(cost) +
                                   " exceeds budget " + rat_str(budget));
                continue;
            }
            seen[id] = 1;
            kept.emplace_back(id, cost);
            for (size_t k = 0; k < header.size(); ++k)
                if (k != idi && k != ci)
                    meta.extra["project:" + id + ":" + header[k]] = cells[k];
        }
    }
    Instance instance(kept, budget);

    // VOTES
    std::vector<Ballot> ballots;
    std::vector<std::string> voter_ids;
    {
        auto& rows = sections["VOTES"];
        if (rows.empty()) throw Error("MissingColumn", "VOTES section has no header row");
        auto header = split(rows[0].raw, ';');
        auto vid_col = std::find(header.begin(), header.end(), "voter_id");
        auto vote_col = std::find(header.begin(), header.end(), "vote");
        auto pts_col = std::find(header.begin(), header.end(), "points");
        if (vid_col == header.end())
            throw Error("MissingColumn", "VOTES lacks 'voter_id'", rows[0].line);
        if (vote_col == header.end())
            throw Error("MissingColumn", "VOTES lacks 'vote'", rows[0].line);
        bool needs_points = vote_type == "cumulative" || vote_type == "scoring";
        if (needs_points && pts_col == header.end())
            throw Error("MissingColumn", "VOTES lacks 'points' (required for " + vote_type + ")",
                        rows[0].line);
        size_t vi = vid_col - header.begin(), vo = vote_col - header.begin();
        size_t pi = pts_col == header.end() ? size_t(-1) : pts_col - header.begin();
        meta.extra["votes_columns"] = rows[0].raw;

        Rat max_sum_points = 0;
        if (auto* msp = meta.find("max_sum_points"))
            max_sum_points = parse_rat_at(*msp, 0);

        for (size_t r = 1; r < rows.size(); ++r) {
            auto cells = split(rows[r].raw, ';');
            if (cells.size() < header.size())
                throw Error("MissingColumn", "VOTES row has too few cells", rows[r].line);
            const std::string voter = cells[vi];
            voter_ids.push_back(voter);
            for (size_t k = 0; k < header.size(); ++k)
                if (k != vi && k != vo && k != pi)
                    meta.extra["vote:" + voter + ":" + header[k]] = cells[k];

            std::vector<std::string> items;
            if (!cells[vo].empty()) items = split(cells[vo], ',');
            std::vector<int> idxs;       // kept projects, instance indices
            std::vector<size_t> kept_at; // position in `items` of each kept entry
            for (size_t k = 0; k < items.size(); ++k) {
                auto it = seen.find(items[k]);
                if (it == seen.end())
                    throw Error("UnknownProject", "vote names missing project '" + items[k] + "'",
                                rows[r].line);
                if (it->second == 0) continue; // dropped over-budget project
                idxs.push_back(instance.index(items[k]));
                kept_at.push_back(k);
            }

            if (vote_type == "approval") {
                std::sort(idxs.begin(), idxs.end());
                idxs.erase(std::unique(idxs.begin(), idxs.end()), idxs.end());
                ballots.push_back(ApprovalBallot{std::move(idxs)});
            } else if (vote_type == "ordinal") {
                ballots.push_back(OrdinalBallot{std::move(idxs)});
            } else {
                std::vector<std::string> pts;
                if (!cells[pi].empty()) pts = split(cells[pi], ',');
                if (pts.size() != items.size())
                    throw Error("MalformedNumber", "points list does not match vote list",
                                rows[r].line);
                std::vector<std::pair<int, Rat>> wts;
                Rat total = 0;
                for (size_t k = 0; k < kept_at.size(); ++k) {
                    Rat p = parse_rat_at(pts[kept_at[k]], rows[r].line);
                    if (p < 0)
                        throw Error("MalformedNumber", "negative points", rows[r].line);
                    wts.emplace_back(idxs[k], p);
                    total += p;
                }
                std::sort(wts.begin(), wts.end());
                if (vote_type == "scoring") {
                    std::erase_if(wts, [](auto& e) { return e.second == 0; });
                    ballots.push_back(CardinalBallot{std::move(wts)});
                } else {
                    Rat denom = max_sum_points > 0 ? max_sum_points : total;
                    if (denom > 0)
                        for (auto& [p, w] : wts) w /= denom;
                    std::erase_if(wts, [](auto& e) { return e.second == 0; });
                    ballots.push_back(CumulativeBallot{std::move(wts)});
                }
            }
        }
    }
    if (ballots.empty()) throw Error("MissingSection", "VOTES section has no data rows");
    meta.extra["voter_ids"] = join(voter_ids, ',');

    Profile profile(instance, std::move(ballots));
    return ParseResult{std::move(instance), std::move(profile), std::move(meta),
                       std::move(warnings)};
}

std::string serialize_pabulib(const Instance& in, const Profile& prof,
                              const ElectionMetadata& meta) {
    if (prof.n() == 0) throw Error("InconsistentInputs", "profile is empty");

    const char* vt = nullptr;
    switch (prof.kind()) {
    case BallotKind::Approval: vt = "approval"; break;
    case BallotKind::Ordinal: vt = "ordinal"; break;
    case BallotKind::Cumulative: vt = "cumulative"; break;
    case BallotKind::Cardinal: vt = "scoring"; break;
    case BallotKind::WeakOrdinal:
        throw Error("InconsistentInputs", "weak-ordinal profiles have no Pabulib encoding");
    }
    if (auto* declared = meta.find("vote_type"); declared && *declared != vt)
        throw Error("InconsistentInputs",
                    "metadata vote_type '" + *declared + "' does not match profile (" + vt + ")");

    ElectionMetadata m = meta;
    m.set("vote_type", vt);
    if (!m.find("budget")) m.set("budget", rat_str(in.budget()));
    if (!m.find("num_projects")) m.set("num_projects", std::to_string(in.m()));
    if (!m.find("num_votes")) m.set("num_votes", std::to_string(prof.n()));

    Rat max_sum_points = 0;
    if (prof.kind() == BallotKind::Cumulative) {
        if (auto* msp = m.find("max_sum_points")) {
            max_sum_points = parse_rat(*msp);
        } else {
            // Weights re-normalize by the voter's own point total on parse, so
            // verbatim emission round-trips only when each total is 0 or 1;
            // otherwise pin the scale explicitly.
            max_sum_points = 1;
            bool verbatim_ok = true;
            for (int i = 0; i < prof.n(); ++i) {
                Rat total = 0;
                for (auto& [p, w] : prof.cumulative(i).weights) total += w;
                if (total != 0 && total != 1) verbatim_ok = false;
            }
            if (!verbatim_ok) m.set("max_sum_points", "1");
        }
    }

    std::string out;
    out += "META\nkey;value\n";
    for (auto& [k, v] : m.entries) out += k + ";" + v + "\n";

    auto extra_of = [&](const std::string& key) -> std::string {
        auto it = m.extra.find(key);
        return it == m.extra.end() ? std::string() : it->second;
    };

    // PROJECTS
    std::string pheader = extra_of("projects_columns");
    if (pheader.empty()) pheader = "project_id;cost";
    auto pcols = split(pheader, ';');
    out += "PROJECTS\n" + pheader + "\n";
    for (int p = 0; p < in.m(); ++p) {
        std::vector<std::string> cells;
        for (auto& col : pcols) {
            if (col == "project_id")
                cells.push_back(in.id(p));
            else if (col == "cost")
                cells.push_back(rat_str(in.cost(p)));
            else
                cells.push_back(extra_of("project:" + in.id(p) + ":" + col));
        }
        out += join(cells, ';') + "\n";
    }

    // VOTES
    bool needs_points =
        prof.kind() == BallotKind::Cumulative || prof.kind() == BallotKind::Cardinal;
    std::string vheader = extra_of("votes_columns");
    if (vheader.empty()) vheader = needs_points ? "voter_id;vote;points" : "voter_id;vote";
    auto vcols = split(vheader, ';');
    if (needs_points && std::find(vcols.begin(), vcols.end(), "points") == vcols.end()) {
        vheader += ";points";
        vcols.push_back("points");
    }
    out += "VOTES\n" + vheader + "\n";

    std::vector<std::string> voter_ids;
    if (auto v = extra_of("voter_ids"); !v.empty()) voter_ids = split(v, ',');
    for (int i = 0; i < prof.n(); ++i) {
        std::string voter =
            i < static_cast<int>(voter_ids.size()) ? voter_ids[i] : std::to_string(i + 1);
        std::vector<std::string> vote, points;
        switch (prof.kind()) {
        case BallotKind::Approval:
            for (int p : prof.approval(i).approved) vote.push_back(in.id(p));
            break;
        case BallotKind::Ordinal:
            for (int p : prof.ordinal(i).ranking) vote.push_back(in.id(p));
            break;
        case BallotKind::Cardinal:
            for (auto& [p, s] : prof.cardinal(i).scores) {
                vote.push_back(in.id(p));
                points.push_back(rat_str(s));
            }
            break;
        case BallotKind::Cumulative:
            for (auto& [p, w] : prof.cumulative(i).weights) {
                vote.push_back(in.id(p));
                points.push_back(rat_str(Rat(w * max_sum_points)));
            }
            break;
        case BallotKind::WeakOrdinal: break; // rejected above
        }
        std::vector<std::string> cells;
        for (auto& col : vcols) {
            if (col == "voter_id")
                cells.push_back(voter);
            else if (col == "vote")
                cells.push_back(join(vote, ','));
            else if (col == "points")
                cells.push_back(join(points, ','));
            else
                cells.push_back(extra_of("vote:" + voter + ":" + col));
        }
        out += join(cells, ';') + "\n";
    }
    return out;
}

} // namespace pb
