#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/core.hpp"
#include "rosterflow/error.hpp"
#include "rosterflow/league_data.hpp"
#include "rosterflow/socialgraph.hpp"
#include "rosterflow/util/csv.hpp"

namespace rosterflow::features {

enum class Position { Pitcher, Catcher, Fielder, PG, SG, SF, PF, C };

constexpr std::string_view to_string(Position p) {
    switch (p) {
    case Position::Pitcher: return "Pitcher";
    case Position::Catcher: return "Catcher";
    case Position::Fielder: return "Fielder";
    case Position::PG: return "PG";
    case Position::SG: return "SG";
    case Position::SF: return "SF";
    case Position::PF: return "PF";
    case Position::C: return "C";
    }
    return "?";
}

inline std::vector<Position> positions_for(LeagueKind league) {
    if (league == LeagueKind::MLB) {
        return {Position::Pitcher, Position::Catcher, Position::Fielder};
    }
    return {Position::PG, Position::SG, Position::SF, Position::PF, Position::C};
}

/// Collapses MLB positions to pitcher/catcher/fielder; NBA positions pass
/// through (a hyphenated label such as "SF-PF" keeps its primary position).
inline Position merge_positions(std::string_view raw, LeagueKind league) {
    std::string label;
    for (char ch : raw) {
        if (ch == '-' || ch == '/' || ch == ',') {
            break;
        }
        label.push_back(static_cast<char>(ch >= 'a' && ch <= 'z' ? ch - 'a' + 'A' : ch));
    }
    if (league == LeagueKind::MLB) {
        static const std::set<std::string, std::less<>> pitchers{"P", "SP", "RP", "CL", "PITCHER"};
        static const std::set<std::string, std::less<>> fielders{
            "1B", "2B", "3B", "SS", "LF", "CF", "RF", "OF", "IF", "DH", "UT", "FD", "INF", "FIELDER"};
        if (pitchers.count(label)) {
            return Position::Pitcher;
        }
        if (label == "C" || label == "CATCHER") {
            return Position::Catcher;
        }
        if (fielders.count(label)) {
            return Position::Fielder;
        }
    } else {
        if (label == "PG") return Position::PG;
        if (label == "SG") return Position::SG;
        if (label == "SF") return Position::SF;
        if (label == "PF") return Position::PF;
        if (label == "C") return Position::C;
    }
    throw Error(ErrorKind::UnknownPosition, std::string(raw) + " for " + std::string(to_string(league)));
}

/// Number of distinct earlier seasons for the player in the dataset.
inline std::map<int, int> compute_career_length(std::span<const league::PlayerSeason> seasons) {
    std::map<int, int> out;
    int prior = 0;
    for (const auto& ps : seasons) {
        out[ps.season] = prior++;
    }
    return out;
}

struct Outcome {
    enum class Kind { Stay, Switch, Retire };
    Kind kind = Kind::Stay;
    std::optional<std::size_t> team; // destination index when kind == Switch

    bool leave() const { return kind != Kind::Stay; }
    bool operator==(const Outcome&) const = default;
};

/// Leave/target per season: switch when next season's team differs, retire
/// when the player is absent next season, stay otherwise.
inline std::map<int, Outcome> compute_leave_target(std::span<const league::PlayerSeason> seasons) {
    std::map<int, Outcome> out;
    for (std::size_t i = 0; i < seasons.size(); ++i) {
        const auto& cur = seasons[i];
        if (i + 1 < seasons.size() && seasons[i + 1].season == cur.season + 1) {
            const auto& next = seasons[i + 1];
            if (next.team_index == cur.team_index) {
                out[cur.season] = Outcome{Outcome::Kind::Stay, std::nullopt};
            } else {
                out[cur.season] = Outcome{Outcome::Kind::Switch, next.team_index};
            }
        } else {
            out[cur.season] = Outcome{Outcome::Kind::Retire, std::nullopt};
        }
    }
    return out;
}

struct EngineeredSeason {
    const league::PlayerSeason* base = nullptr;
    std::optional<Position> merged_position; // absent when the input has no position
    int career_length = 0;
    Outcome outcome;
};

/// season -> player id -> start-of-season team index.
class RosterIndex {
public:
    explicit RosterIndex(const league::LeagueStore& store) {
        for (const auto& ps : store.seasons()) {
            by_season_[ps.season][ps.player_id] = ps.team_index;
            rosters_[ps.season][ps.team_index].push_back(ps.player_id);
        }
    }

    std::optional<std::size_t> team_of(int season, const std::string& player_id) const {
        auto s = by_season_.find(season);
        if (s == by_season_.end()) {
            return std::nullopt;
        }
        auto p = s->second.find(player_id);
        if (p == s->second.end()) {
            return std::nullopt;
        }
        return p->second;
    }

    /// Players (ascending id) on `team` at the start of `season`.
    std::span<const std::string> roster(int season, std::size_t team) const {
        auto s = rosters_.find(season);
        if (s == rosters_.end()) {
            return {};
        }
        auto t = s->second.find(team);
        if (t == s->second.end()) {
            return {};
        }
        return t->second;
    }

private:
    std::unordered_map<int, std::unordered_map<std::string, std::size_t>> by_season_;
    std::map<int, std::map<std::size_t, std::vector<std::string>>> rosters_;
};

/// Engineering over a whole store, aligned index-for-index with store.seasons().
class EngineeredLeague {
public:
    explicit EngineeredLeague(const league::LeagueStore& store) : store_(&store), rosters_(store) {
        const auto& all = store.seasons();
        rows_.resize(all.size());
        std::size_t begin = 0;
        while (begin < all.size()) {
            std::size_t end = begin;
            while (end < all.size() && all[end].player_id == all[begin].player_id) {
                ++end;
            }
            std::span<const league::PlayerSeason> run(all.data() + begin, end - begin);
            auto career = compute_career_length(run);
            auto outcomes = compute_leave_target(run);
            for (std::size_t i = begin; i < end; ++i) {
                auto& row = rows_[i];
                row.base = &all[i];
                row.career_length = career.at(all[i].season);
                row.outcome = outcomes.at(all[i].season);
                if (!all[i].position.empty()) {
                    row.merged_position = merge_positions(all[i].position, store.league());
                }
            }
            begin = end;
        }
    }

    const league::LeagueStore& store() const { return *store_; }
    const std::vector<EngineeredSeason>& rows() const { return rows_; }
    const RosterIndex& rosters() const { return rosters_; }

    const EngineeredSeason* find(const std::string& player_id, int season) const {
        auto run = store_->player(player_id);
        for (const auto& ps : run) {
            if (ps.season == season) {
                return &rows_[static_cast<std::size_t>(&ps - store_->seasons().data())];
            }
        }
        return nullptr;
    }

private:
    const league::LeagueStore* store_;
    std::vector<EngineeredSeason> rows_;
    RosterIndex rosters_;
};

struct TransitionSummary {
    int season = 0;
    std::size_t players = 0;
    std::size_t leaving = 0;
    std::size_t retiring = 0;
    std::size_t switched = 0;

    bool operator==(const TransitionSummary&) const = default;
};

/// Per-season player, leaving, retiring and switched counts for in-range seasons.
inline std::vector<TransitionSummary> summarize_transitions(const EngineeredLeague& league) {
    std::map<int, TransitionSummary> acc;
    const auto& cfg = league.store().config();
    for (const auto& row : league.rows()) {
        if (!cfg.in_range(row.base->season)) {
            continue;
        }
        auto& s = acc[row.base->season];
        s.season = row.base->season;
        ++s.players;
        if (row.outcome.kind == Outcome::Kind::Retire) {
            ++s.leaving;
            ++s.retiring;
        } else if (row.outcome.kind == Outcome::Kind::Switch) {
            ++s.leaving;
            ++s.switched;
        }
    }
    std::vector<TransitionSummary> out;
    for (const auto& [season, s] : acc) {
        out.push_back(s);
    }
    return out;
}

struct AffinityVector {
    std::string player_id;
    int season = 0;
    std::array<int, kTeamsPerLeague> weights{};

    int total() const {
        int sum = 0;
        for (int w : weights) {
            sum += w;
        }
        return sum;
    }
};

/// Counts, per team, the current-season teammates of that team the owner
/// follows. The owner's own team is forced to zero.
inline AffinityVector compute_affinity(const EngineeredSeason& owner, const graph::FollowGraph& follows,
                                       const RosterIndex& rosters) {
    const auto& base = *owner.base;
    if (owner.outcome.kind != Outcome::Kind::Switch) {
        throw Error(ErrorKind::OwnerNotTransitioning, base.player_id + " " + std::to_string(base.season));
    }
    if (base.team.league == LeagueKind::MLB && base.mid_season_move) {
        throw Error(ErrorKind::OwnerNotTransitioning,
                    base.player_id + " " + std::to_string(base.season) + " moved mid-season");
    }
    AffinityVector out;
    out.player_id = base.player_id;
    out.season = base.season;
    auto node = follows.find(base.player_id);
    if (!node) {
        return out;
    }
    for (graph::NodeId v : follows.out_neighbors(*node)) {
        auto team = rosters.team_of(base.season, follows.ids()[v]);
        if (team && *team != base.team_index) {
            ++out.weights[*team];
        }
    }
    return out;
}

enum class Flag { Position, Team, CareerLength, Performance, RankValue, Twitter, College };

inline constexpr std::array<Flag, 7> kAllFlags = {Flag::Position,    Flag::Team,      Flag::CareerLength,
                                                  Flag::Performance, Flag::RankValue, Flag::Twitter,
                                                  Flag::College};

constexpr std::string_view to_string(Flag f) {
    switch (f) {
    case Flag::Position: return "position";
    case Flag::Team: return "team";
    case Flag::CareerLength: return "career_length";
    case Flag::Performance: return "performance";
    case Flag::RankValue: return "rank_value";
    case Flag::Twitter: return "twitter";
    case Flag::College: return "college";
    }
    return "?";
}

struct FeatureSet {
    bool position = false;
    bool team = false;
    bool career_length = false;
    bool performance = false;
    bool rank_value = false;
    bool twitter = false;
    bool college = false;

    bool has(Flag f) const {
        switch (f) {
        case Flag::Position: return position;
        case Flag::Team: return team;
        case Flag::CareerLength: return career_length;
        case Flag::Performance: return performance;
        case Flag::RankValue: return rank_value;
        case Flag::Twitter: return twitter;
        case Flag::College: return college;
        }
        return false;
    }

    void set(Flag f, bool on = true) {
        switch (f) {
        case Flag::Position: position = on; break;
        case Flag::Team: team = on; break;
        case Flag::CareerLength: career_length = on; break;
        case Flag::Performance: performance = on; break;
        case Flag::RankValue: rank_value = on; break;
        case Flag::Twitter: twitter = on; break;
        case Flag::College: college = on; break;
        }
    }

    bool any() const {
        return position || team || career_length || performance || rank_value || twitter || college;
    }

    /// Comma-joined flag names in canonical order, e.g. "team,twitter".
    std::string label() const {
        std::string out;
        for (Flag f : kAllFlags) {
            if (has(f)) {
                if (!out.empty()) {
                    out += ',';
                }
                out += to_string(f);
            }
        }
        return out;
    }

    /// Accepts comma-separated flag names; "social" is an alias of twitter and
    /// "all" sets every non-college flag.
    static FeatureSet parse(std::string_view text) {
        FeatureSet fs;
        std::string token;
        auto apply = [&](const std::string& t) {
            if (t.empty()) {
                return;
            }
            if (t == "all") {
                for (Flag f : kAllFlags) {
                    if (f != Flag::College) {
                        fs.set(f);
                    }
                }
                return;
            }
            if (t == "social") {
                fs.twitter = true;
                return;
            }
            for (Flag f : kAllFlags) {
                if (to_string(f) == t) {
                    fs.set(f);
                    return;
                }
            }
            throw Error(ErrorKind::BadConfig, "unknown feature flag " + t);
        };
        for (char ch : text) {
            if (ch == ',' || ch == '+') {
                apply(token);
                token.clear();
            } else if (ch != ' ') {
                token.push_back(ch);
            }
        }
        apply(token);
        if (!fs.any()) {
            throw Error(ErrorKind::BadConfig, "feature set needs at least one flag");
        }
        return fs;
    }

    bool operator==(const FeatureSet&) const = default;
};

inline constexpr std::string_view kOtherCollege = "OTHER";

struct RowMeta {
    std::string player_id;
    int season = 0;
    std::size_t current_team = 0;
    std::string college;
};

/// Dense feature matrix plus labels (team indices) for switching players.
struct LabeledDataset {
    LeagueKind league = LeagueKind::MLB;
    FeatureSet feature_set;
    std::vector<std::string> columns;
    std::map<std::string, std::pair<std::size_t, std::size_t>> groups; // flag -> [begin, end)
    std::vector<double> values;                                        // row-major
    std::vector<int> labels;
    std::vector<RowMeta> meta;

    std::size_t rows() const { return labels.size(); }
    std::size_t width() const { return columns.size(); }

    std::span<const double> row(std::size_t i) const {
        return std::span<const double>(values.data() + i * width(), width());
    }

    /// FNV-1a over the column manifest.
    std::uint64_t fingerprint() const { return manifest_fingerprint(columns); }

    static std::uint64_t manifest_fingerprint(const std::vector<std::string>& columns) {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (const auto& c : columns) {
            for (unsigned char ch : c) {
                h = (h ^ ch) * 0x100000001b3ULL;
            }
            h = (h ^ 0x1fU) * 0x100000001b3ULL;
        }
        return h;
    }

    LabeledDataset subset(std::span<const std::size_t> indices) const {
        LabeledDataset out;
        out.league = league;
        out.feature_set = feature_set;
        out.columns = columns;
        out.groups = groups;
        out.values.reserve(indices.size() * width());
        for (std::size_t i : indices) {
            auto r = row(i);
            out.values.insert(out.values.end(), r.begin(), r.end());
            out.labels.push_back(labels[i]);
            out.meta.push_back(meta[i]);
        }
        return out;
    }
};

/// Everything dataset assembly needs, computed once per store.
class FeatureContext {
public:
    explicit FeatureContext(const league::LeagueStore& store)
        : engineered_(store), graph_(graph::build_graph(store.follows())) {
        compute_medians();
    }

    const league::LeagueStore& store() const { return engineered_.store(); }
    const EngineeredLeague& engineered() const { return engineered_; }
    const graph::FollowGraph& graph() const { return graph_; }

    /// Season median of a metric over all player-seasons, falling back to the
    /// all-season median and then to zero.
    double median(int season, const std::string& metric) const {
        auto s = season_medians_.find({season, metric});
        if (s != season_medians_.end()) {
            return s->second;
        }
        auto g = global_medians_.find(metric);
        return g == global_medians_.end() ? 0.0 : g->second;
    }

    bool has_social_data(const std::string& player_id) const {
        auto node = graph_.find(player_id);
        return node && (graph_.out_degree(*node) + graph_.in_degree(*node)) > 0;
    }

private:
    static double median_of(std::vector<double> v) {
        std::sort(v.begin(), v.end());
        std::size_t n = v.size();
        return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
    }

    void compute_medians() {
        std::map<std::pair<int, std::string>, std::vector<double>> per_season;
        std::map<std::string, std::vector<double>> global;
        for (const auto& ps : store().seasons()) {
            for (const auto& [name, value] : ps.metrics) {
                if (value) {
                    per_season[{ps.season, name}].push_back(*value);
                    global[name].push_back(*value);
                }
            }
        }
        for (auto& [key, v] : per_season) {
            season_medians_[key] = median_of(std::move(v));
        }
        for (auto& [key, v] : global) {
            global_medians_[key] = median_of(std::move(v));
        }
    }

    EngineeredLeague engineered_;
    graph::FollowGraph graph_;
    std::map<std::pair<int, std::string>, double> season_medians_;
    std::map<std::string, double> global_medians_;
};

namespace detail {

inline std::vector<std::string> college_vocabulary(const std::vector<RowMeta>& meta,
                                                   std::span<const std::size_t> rows) {
    std::set<std::string> seen;
    for (std::size_t i : rows) {
        if (meta[i].college != league::kNoCollege) {
            seen.insert(meta[i].college);
        }
    }
    std::vector<std::string> vocab(seen.begin(), seen.end());
    vocab.emplace_back(league::kNoCollege);
    vocab.emplace_back(kOtherCollege);
    return vocab;
}

} // namespace detail

/// One row per switching player-season in [first, last] that satisfies the
/// feature set's data requirements, ordered by (season, player_id). With
/// `social_population` the Twitter row filter applies even when the twitter
/// flag is off, so feature sets are compared on the same players.
inline LabeledDataset assemble_dataset(const FeatureContext& ctx, const FeatureSet& fs, int first, int last,
                                       bool social_population = false) {
    if (!fs.any()) {
        throw Error(ErrorKind::BadConfig, "feature set needs at least one flag");
    }
    const auto& store = ctx.store();
    const auto& franchises = store.franchises();
    const auto league_kind = store.league();
    LabeledDataset ds;
    ds.league = league_kind;
    ds.feature_set = fs;

    std::vector<const EngineeredSeason*> selected;
    for (const auto& row : ctx.engineered().rows()) {
        const auto& base = *row.base;
        if (base.season < first || base.season > last || row.outcome.kind != Outcome::Kind::Switch) {
            continue;
        }
        if (fs.position && !row.merged_position) {
            continue;
        }
        if (fs.rank_value && !store.fitness_for(base.season, base.team_index)) {
            continue;
        }
        if (fs.twitter || social_population) {
            if (!ctx.has_social_data(base.player_id)) {
                continue;
            }
            if (league_kind == LeagueKind::MLB && base.mid_season_move) {
                continue;
            }
        }
        selected.push_back(&row);
    }
    std::sort(selected.begin(), selected.end(), [](const EngineeredSeason* a, const EngineeredSeason* b) {
        return std::tie(a->base->season, a->base->player_id) < std::tie(b->base->season, b->base->player_id);
    });
    if (selected.empty()) {
        throw Error(ErrorKind::EmptyDataset, "no rows for feature set " + fs.label());
    }

    for (const auto* row : selected) {
        const auto& base = *row->base;
        ds.labels.push_back(static_cast<int>(*row->outcome.team));
        ds.meta.push_back(RowMeta{base.player_id, base.season, base.team_index, store.college_of(base.player_id)});
    }
    std::vector<std::size_t> all_rows(selected.size());
    for (std::size_t i = 0; i < all_rows.size(); ++i) {
        all_rows[i] = i;
    }

    auto open_group = [&](Flag f) { ds.groups[std::string(to_string(f))].first = ds.columns.size(); };
    auto close_group = [&](Flag f) { ds.groups[std::string(to_string(f))].second = ds.columns.size(); };

    auto positions = positions_for(league_kind);
    std::vector<std::string> college_vocab;
    if (fs.position) {
        open_group(Flag::Position);
        for (auto p : positions) {
            ds.columns.push_back("position=" + std::string(to_string(p)));
        }
        close_group(Flag::Position);
    }
    if (fs.team) {
        open_group(Flag::Team);
        for (const auto& code : franchises.codes()) {
            ds.columns.push_back("team=" + code);
        }
        close_group(Flag::Team);
    }
    if (fs.career_length) {
        open_group(Flag::CareerLength);
        ds.columns.emplace_back("career_length");
        close_group(Flag::CareerLength);
    }
    if (fs.performance) {
        open_group(Flag::Performance);
        for (const auto& m : store.config().metrics) {
            ds.columns.push_back(m.name);
        }
        for (const auto& m : store.config().metrics) {
            ds.columns.push_back(m.name + "_missing");
        }
        close_group(Flag::Performance);
    }
    if (fs.rank_value) {
        open_group(Flag::RankValue);
        ds.columns.emplace_back("rank");
        ds.columns.emplace_back("valuation_musd");
        close_group(Flag::RankValue);
    }
    if (fs.twitter) {
        open_group(Flag::Twitter);
        for (const auto& code : franchises.codes()) {
            ds.columns.push_back("affinity=" + code);
        }
        close_group(Flag::Twitter);
    }
    if (fs.college) {
        open_group(Flag::College);
        college_vocab = detail::college_vocabulary(ds.meta, all_rows);
        for (const auto& c : college_vocab) {
            ds.columns.push_back("college=" + c);
        }
        close_group(Flag::College);
    }

    const std::size_t width = ds.columns.size();
    ds.values.assign(selected.size() * width, 0.0);
    for (std::size_t r = 0; r < selected.size(); ++r) {
        const auto& row = *selected[r];
        const auto& base = *row.base;
        double* out = ds.values.data() + r * width;
        std::size_t col = 0;
        if (fs.position) {
            for (auto p : positions) {
                out[col++] = *row.merged_position == p ? 1.0 : 0.0;
            }
        }
        if (fs.team) {
            for (std::size_t t = 0; t < franchises.size(); ++t) {
                out[col++] = t == base.team_index ? 1.0 : 0.0;
            }
        }
        if (fs.career_length) {
            out[col++] = static_cast<double>(row.career_length);
        }
        if (fs.performance) {
            const auto& metrics = store.config().metrics;
            for (std::size_t k = 0; k < metrics.size(); ++k) {
                auto it = base.metrics.find(metrics[k].name);
                bool present = it != base.metrics.end() && it->second.has_value();
                out[col + k] = present ? *it->second : ctx.median(base.season, metrics[k].name);
                out[col + metrics.size() + k] = present ? 0.0 : 1.0;
            }
            col += 2 * metrics.size();
        }
        if (fs.rank_value) {
            const auto* fit = store.fitness_for(base.season, base.team_index);
            out[col++] = static_cast<double>(fit->rank);
            out[col++] = fit->valuation;
        }
        if (fs.twitter) {
            auto aff = compute_affinity(row, ctx.graph(), ctx.engineered().rosters());
            for (int w : aff.weights) {
                out[col++] = static_cast<double>(w);
            }
        }
        if (fs.college) {
            const std::string& c = ds.meta[r].college;
            auto it = std::find(college_vocab.begin(), college_vocab.end(), c);
            std::size_t k = it == college_vocab.end() ? college_vocab.size() - 1
                                                      : static_cast<std::size_t>(it - college_vocab.begin());
            out[col + k] = 1.0;
            col += college_vocab.size();
        }
    }
    return ds;
}

/// Rebuilds the college one-hot block with a vocabulary drawn only from
/// `train_rows`; colleges outside it land in the OTHER column.
inline LabeledDataset refit_college_block(const LabeledDataset& ds, std::span<const std::size_t> train_rows) {
    auto it = ds.groups.find("college");
    if (it == ds.groups.end()) {
        return ds;
    }
    auto [begin, end] = it->second;
    auto vocab = detail::college_vocabulary(ds.meta, train_rows);
    LabeledDataset out;
    out.league = ds.league;
    out.feature_set = ds.feature_set;
    out.labels = ds.labels;
    out.meta = ds.meta;
    out.columns.assign(ds.columns.begin(), ds.columns.begin() + static_cast<std::ptrdiff_t>(begin));
    for (const auto& c : vocab) {
        out.columns.push_back("college=" + c);
    }
    out.columns.insert(out.columns.end(), ds.columns.begin() + static_cast<std::ptrdiff_t>(end), ds.columns.end());
    std::size_t shift = vocab.size() - (end - begin);
    for (const auto& [name, range] : ds.groups) {
        if (name == "college") {
            out.groups[name] = {begin, begin + vocab.size()};
        } else if (range.first >= end) {
            out.groups[name] = {range.first + shift, range.second + shift};
        } else {
            out.groups[name] = range;
        }
    }
    const std::size_t width = out.columns.size();
    out.values.assign(ds.rows() * width, 0.0);
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        auto src = ds.row(r);
        double* dst = out.values.data() + r * width;
        std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(begin), dst);
        auto pos = std::find(vocab.begin(), vocab.end(), ds.meta[r].college);
        std::size_t k = pos == vocab.end() ? vocab.size() - 1 : static_cast<std::size_t>(pos - vocab.begin());
        dst[begin + k] = 1.0;
        std::copy(src.begin() + static_cast<std::ptrdiff_t>(end), src.end(), dst + begin + vocab.size());
    }
    return out;
}

/// CSV with meta columns, the feature manifest and the target team code.
inline void write_dataset_csv(std::ostream& out, const LabeledDataset& ds, const FranchiseTable& franchises) {
    std::vector<std::string> header{"player_id", "season", "current_team"};
    header.insert(header.end(), ds.columns.begin(), ds.columns.end());
    header.emplace_back("target");
    csv::write_record(out, header);
    for (std::size_t r = 0; r < ds.rows(); ++r) {
        std::vector<std::string> fields{ds.meta[r].player_id, std::to_string(ds.meta[r].season),
                                        franchises.codes()[ds.meta[r].current_team]};
        for (double v : ds.row(r)) {
            fields.push_back(csv::format_double(v));
        }
        fields.push_back(franchises.codes()[static_cast<std::size_t>(ds.labels[r])]);
        csv::write_record(out, fields);
    }
}

/// Column provenance: feature flag -> column index range.
inline nlohmann::json dataset_sidecar(const LabeledDataset& ds) {
    nlohmann::json j;
    j["league"] = std::string(to_string(ds.league));
    j["feature_set"] = ds.feature_set.label();
    j["rows"] = ds.rows();
    j["columns"] = ds.columns;
    char hex[17];
    std::snprintf(hex, sizeof(hex), "%016llx", static_cast<unsigned long long>(ds.fingerprint()));
    j["fingerprint"] = hex;
    nlohmann::json groups = nlohmann::json::object();
    for (const auto& [name, range] : ds.groups) {
        std::vector<std::size_t> idx;
        for (std::size_t c = range.first; c < range.second; ++c) {
            idx.push_back(c);
        }
        groups[name] = idx;
    }
    j["groups"] = groups;
    return j;
}

} // namespace rosterflow::features
