#pragma once

#include <algorithm>
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
#include <tuple>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "rosterflow/core.hpp"
#include "rosterflow/error.hpp"
#include "rosterflow/util/config.hpp"
#include "rosterflow/util/csv.hpp"

namespace rosterflow::league {

enum class MetricScale { Fraction, Percent, Raw };

struct MetricColumn {
    std::string name;
    MetricScale scale = MetricScale::Raw;
    /// Fraction-valued metric that must lie in [0, 1] after scaling.
    bool unit_interval = false;

    bool operator==(const MetricColumn&) const = default;
};

/// League-level settings normally read from a league.toml file.
struct LeagueConfig {
    LeagueKind kind = LeagueKind::MLB;
    int first_season = 2002;
    int last_season = 2018;
    std::vector<MetricColumn> metrics;

    static LeagueConfig defaults(LeagueKind kind) {
        LeagueConfig cfg;
        cfg.kind = kind;
        if (kind == LeagueKind::MLB) {
            cfg.first_season = 2002;
            cfg.last_season = 2018;
            cfg.metrics = {{"FLD_PCT", MetricScale::Fraction, true},
                           {"OWN_PCT", MetricScale::Fraction, true},
                           {"BT_RUNS", MetricScale::Raw, false},
                           {"BT_WINS", MetricScale::Raw, false}};
        } else {
            cfg.first_season = 2001;
            cfg.last_season = 2018;
            cfg.metrics = {{"PER", MetricScale::Raw, false},
                           {"WS", MetricScale::Raw, false},
                           {"BPM", MetricScale::Raw, false}};
        }
        return cfg;
    }

    /// Reads `league.kind`, `league.first_season`, `league.last_season`,
    /// `metrics.names` and optional `metrics.<NAME>.scale` entries
    /// ("fraction", "percent" or "raw").
    static LeagueConfig from_document(const config::Document& doc,
                                      std::optional<LeagueKind> fallback = std::nullopt) {
        std::optional<LeagueKind> kind = fallback;
        if (auto text = doc.get_string("league.kind")) {
            kind = parse_league(*text);
            if (!kind) {
                throw Error(ErrorKind::BadConfig, "unknown league kind " + *text);
            }
        }
        if (!kind) {
            throw Error(ErrorKind::BadConfig, "league.kind is required");
        }
        LeagueConfig cfg = defaults(*kind);
        if (auto v = doc.get_number("league.first_season")) {
            cfg.first_season = static_cast<int>(*v);
        }
        if (auto v = doc.get_number("league.last_season")) {
            cfg.last_season = static_cast<int>(*v);
        }
        if (cfg.first_season > cfg.last_season) {
            throw Error(ErrorKind::BadConfig, "first_season after last_season");
        }
        if (auto names = doc.get_strings("metrics.names")) {
            std::vector<MetricColumn> metrics;
            for (const auto& name : *names) {
                MetricColumn col{name, MetricScale::Raw, false};
                for (const auto& known : cfg.metrics) {
                    if (known.name == name) {
                        col = known;
                    }
                }
                metrics.push_back(col);
            }
            cfg.metrics = std::move(metrics);
        }
        for (auto& col : cfg.metrics) {
            if (auto scale = doc.get_string("metrics." + col.name + ".scale")) {
                col.scale = parse_scale(*scale);
                col.unit_interval = col.scale != MetricScale::Raw;
            }
        }
        return cfg;
    }

    static MetricScale parse_scale(std::string_view text) {
        if (text == "fraction") {
            return MetricScale::Fraction;
        }
        if (text == "percent") {
            return MetricScale::Percent;
        }
        if (text == "raw") {
            return MetricScale::Raw;
        }
        throw Error(ErrorKind::BadConfig, "unknown metric scale " + std::string(text));
    }

    bool in_range(int season) const { return season >= first_season && season <= last_season; }
};

/// Metric name -> value; std::nullopt marks a missing value.
using PerformanceVector = std::map<std::string, std::optional<double>>;

struct PlayerSeason {
    std::string player_id;
    int season = 0;
    TeamId team;              // team at the start of the season
    std::size_t team_index = 0;
    bool mid_season_move = false;
    std::string position;
    std::optional<double> age;
    PerformanceVector metrics;

    bool operator==(const PlayerSeason&) const = default;
};

struct TeamFitness {
    int season = 0;
    TeamId team;
    std::size_t team_index = 0;
    int rank = 1;
    double valuation = 0.0; // millions

    bool operator==(const TeamFitness&) const = default;
};

struct FollowEdge {
    std::string follower;
    std::string followee;

    auto operator<=>(const FollowEdge&) const = default;
};

struct FollowEdgeList {
    std::vector<FollowEdge> edges; // sorted, unique
    std::size_t self_loops = 0;
    std::size_t duplicates = 0;
    std::size_t unresolved = 0;
};

inline constexpr std::string_view kNoCollege = "N/A";

struct CollegeRecord {
    std::string player_id;
    std::string college;

    bool operator==(const CollegeRecord&) const = default;
};

/// A recoverable problem with one input row.
struct RowIssue {
    std::size_t row = 0;
    std::string message;
};

struct PlayerSeasonParse {
    std::vector<PlayerSeason> seasons;
    std::vector<RowIssue> rejected;  // required field unusable, row dropped
    std::vector<RowIssue> warnings;  // row kept, some optional value dropped
};

namespace detail {

inline std::optional<bool> parse_flag(std::string_view text) {
    if (text == "1" || text == "true" || text == "TRUE" || text == "True" || text == "yes" || text == "Y") {
        return true;
    }
    if (text == "0" || text == "false" || text == "FALSE" || text == "False" || text == "no" || text == "N" ||
        text.empty()) {
        return false;
    }
    return std::nullopt;
}

inline bool is_missing_token(std::string_view text) {
    return text.empty() || text == "NA" || text == "N/A" || text == "nan" || text == "NaN" || text == "-";
}

inline std::optional<std::size_t> find_column(const std::vector<std::string>& header, std::string_view name) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (header[i] == name) {
            return i;
        }
    }
    return std::nullopt;
}

} // namespace detail

/// Parses players.csv. Required columns: player_id, season, team. Optional:
/// position, mid_season_move, age. Every other column must be a configured
/// metric, written `NAME` or `NAME:scale` where the suffix overrides the
/// configured scale for this file.
inline PlayerSeasonParse parse_player_seasons(const csv::Table& table, const LeagueConfig& cfg,
                                              const FranchiseTable& franchises) {
    const auto& header = table.header;
    auto id_col = detail::find_column(header, "player_id");
    auto season_col = detail::find_column(header, "season");
    auto team_col = detail::find_column(header, "team");
    if (!id_col || !season_col || !team_col) {
        throw Error(ErrorKind::MalformedHeader, "players file needs player_id, season and team columns");
    }
    auto pos_col = detail::find_column(header, "position");
    auto move_col = detail::find_column(header, "mid_season_move");
    auto age_col = detail::find_column(header, "age");

    struct Bound {
        std::size_t column;
        MetricColumn metric;
    };
    std::vector<Bound> bound;
    std::set<std::string> seen_metrics;
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i == *id_col || i == *season_col || i == *team_col || (pos_col && i == *pos_col) ||
            (move_col && i == *move_col) || (age_col && i == *age_col)) {
            continue;
        }
        std::string name = header[i];
        std::optional<MetricScale> scale;
        if (auto colon = name.find(':'); colon != std::string::npos) {
            scale = LeagueConfig::parse_scale(name.substr(colon + 1));
            name = name.substr(0, colon);
        }
        auto it = std::find_if(cfg.metrics.begin(), cfg.metrics.end(),
                               [&](const MetricColumn& m) { return m.name == name; });
        if (it == cfg.metrics.end()) {
            throw Error(ErrorKind::MalformedHeader, "unknown column " + header[i]);
        }
        if (!seen_metrics.insert(name).second) {
            throw Error(ErrorKind::MalformedHeader, "duplicate metric column " + name);
        }
        MetricColumn metric = *it;
        if (scale) {
            metric.scale = *scale;
        }
        bound.push_back({i, metric});
    }

    PlayerSeasonParse out;
    std::set<std::pair<std::string, int>> keys;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        if (f.size() != header.size()) {
            out.rejected.push_back({row.number, "expected " + std::to_string(header.size()) + " fields, got " +
                                                    std::to_string(f.size())});
            continue;
        }
        PlayerSeason ps;
        ps.player_id = f[*id_col];
        auto season = csv::parse_int(f[*season_col]);
        if (ps.player_id.empty() || !season) {
            out.rejected.push_back({row.number, "unparseable player_id or season"});
            continue;
        }
        ps.season = static_cast<int>(*season);
        // One season past the configured range is kept as lookahead so the
        // final in-range season can still resolve its next-season team.
        if (ps.season < cfg.first_season || ps.season > cfg.last_season + 1) {
            out.rejected.push_back({row.number, "season " + f[*season_col] + " outside configured range"});
            continue;
        }
        const std::string& raw_team = f[*team_col];
        if (raw_team.empty()) {
            out.rejected.push_back({row.number, "empty team"});
            continue;
        }
        auto team_index = franchises.resolve(raw_team, ps.season);
        if (!team_index) {
            throw Error(ErrorKind::UnknownTeamCode, raw_team, row.number);
        }
        ps.team_index = *team_index;
        ps.team = franchises.team(*team_index);
        if (!keys.emplace(ps.player_id, ps.season).second) {
            throw Error(ErrorKind::DuplicatePlayerSeason, ps.player_id + " " + std::to_string(ps.season),
                        row.number);
        }
        if (pos_col) {
            ps.position = f[*pos_col];
        }
        if (move_col) {
            auto flag = detail::parse_flag(f[*move_col]);
            if (!flag) {
                out.warnings.push_back({row.number, "unreadable mid_season_move, assuming false"});
            }
            ps.mid_season_move = flag.value_or(false);
        }
        if (age_col && !detail::is_missing_token(f[*age_col])) {
            ps.age = csv::parse_double(f[*age_col]);
            if (!ps.age) {
                out.warnings.push_back({row.number, "unreadable age"});
            }
        }
        for (const auto& metric : cfg.metrics) {
            ps.metrics[metric.name] = std::nullopt;
        }
        for (const auto& b : bound) {
            const std::string& text = f[b.column];
            if (detail::is_missing_token(text)) {
                continue;
            }
            auto value = csv::parse_double(text);
            if (!value || !std::isfinite(*value)) {
                out.warnings.push_back({row.number, "unreadable " + b.metric.name + " '" + text + "'"});
                continue;
            }
            double v = *value;
            if (b.metric.scale == MetricScale::Percent) {
                v /= 100.0;
            }
            if (b.metric.unit_interval && (v < 0.0 || v > 1.0)) {
                out.warnings.push_back({row.number, b.metric.name + " " + text + " outside [0,1], treated as missing"});
                continue;
            }
            ps.metrics[b.metric.name] = v;
        }
        out.seasons.push_back(std::move(ps));
    }
    return out;
}

inline PlayerSeasonParse parse_player_seasons(const std::string& path, const LeagueConfig& cfg,
                                              const FranchiseTable& franchises) {
    return parse_player_seasons(csv::read_file(path), cfg, franchises);
}

inline PlayerSeasonParse parse_player_seasons(const std::string& path, LeagueKind league) {
    return parse_player_seasons(path, LeagueConfig::defaults(league), FranchiseTable(league));
}

/// Parses follows.csv (follower, followee). Self-loops and duplicates are
/// dropped; edges touching players outside `roster` are counted and excluded.
inline FollowEdgeList parse_follow_edges(const csv::Table& table, const std::set<std::string>& roster) {
    if (table.header.size() != 2 || table.header[0] != "follower" || table.header[1] != "followee") {
        throw Error(ErrorKind::MalformedHeader, "follows file needs header follower,followee");
    }
    FollowEdgeList out;
    std::set<FollowEdge> unique;
    for (const auto& row : table.rows) {
        if (row.fields.size() != 2 || row.fields[0].empty() || row.fields[1].empty()) {
            throw Error(ErrorKind::MalformedRow, "expected two non-empty fields", row.number);
        }
        FollowEdge edge{row.fields[0], row.fields[1]};
        if (edge.follower == edge.followee) {
            ++out.self_loops;
            continue;
        }
        if (!roster.count(edge.follower) || !roster.count(edge.followee)) {
            ++out.unresolved;
            continue;
        }
        if (!unique.insert(edge).second) {
            ++out.duplicates;
        }
    }
    out.edges.assign(unique.begin(), unique.end());
    return out;
}

inline FollowEdgeList parse_follow_edges(const std::string& path, const std::set<std::string>& roster) {
    return parse_follow_edges(csv::read_file(path), roster);
}

/// Parses fitness.csv (season, team, rank, valuation_musd).
inline std::vector<TeamFitness> parse_team_fitness(const csv::Table& table, const FranchiseTable& franchises) {
    const std::vector<std::string> expected{"season", "team", "rank", "valuation_musd"};
    if (table.header != expected) {
        throw Error(ErrorKind::MalformedHeader, "fitness file needs header season,team,rank,valuation_musd");
    }
    std::vector<TeamFitness> out;
    std::set<std::pair<int, std::size_t>> keys;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        if (f.size() != 4) {
            throw Error(ErrorKind::MalformedRow, "expected 4 fields", row.number);
        }
        auto season = csv::parse_int(f[0]);
        auto rank = csv::parse_int(f[2]);
        auto valuation = csv::parse_double(f[3]);
        if (!season || !rank || !valuation) {
            throw Error(ErrorKind::MalformedRow, "unparseable fitness values", row.number);
        }
        auto team_index = franchises.resolve(f[1], static_cast<int>(*season));
        if (!team_index) {
            throw Error(ErrorKind::UnknownTeamCode, f[1], row.number);
        }
        if (*rank < 1) {
            throw Error(ErrorKind::InvalidRank, "rank must be >= 1", row.number);
        }
        if (!(*valuation > 0.0) || !std::isfinite(*valuation)) {
            throw Error(ErrorKind::NonPositiveValuation, f[3], row.number);
        }
        if (!keys.emplace(static_cast<int>(*season), *team_index).second) {
            throw Error(ErrorKind::DuplicateFitnessRow, f[0] + " " + f[1], row.number);
        }
        out.push_back(TeamFitness{static_cast<int>(*season), franchises.team(*team_index), *team_index,
                                  static_cast<int>(*rank), *valuation});
    }
    std::sort(out.begin(), out.end(), [](const TeamFitness& a, const TeamFitness& b) {
        return std::tie(a.season, a.team_index) < std::tie(b.season, b.team_index);
    });
    return out;
}

inline std::vector<TeamFitness> parse_team_fitness(const std::string& path, LeagueKind league) {
    return parse_team_fitness(csv::read_file(path), FranchiseTable(league));
}

/// Parses colleges.csv (player_id, college). Empty college means N/A.
inline std::vector<CollegeRecord> parse_colleges(const csv::Table& table) {
    const std::vector<std::string> expected{"player_id", "college"};
    if (table.header != expected) {
        throw Error(ErrorKind::MalformedHeader, "colleges file needs header player_id,college");
    }
    std::vector<CollegeRecord> out;
    std::set<std::string> seen;
    for (const auto& row : table.rows) {
        if (row.fields.size() != 2 || row.fields[0].empty()) {
            throw Error(ErrorKind::MalformedRow, "expected player_id,college", row.number);
        }
        if (!seen.insert(row.fields[0]).second) {
            throw Error(ErrorKind::MalformedRow, "second college record for " + row.fields[0], row.number);
        }
        std::string college = row.fields[1].empty() ? std::string(kNoCollege) : row.fields[1];
        out.push_back({row.fields[0], college});
    }
    std::sort(out.begin(), out.end(),
              [](const CollegeRecord& a, const CollegeRecord& b) { return a.player_id < b.player_id; });
    return out;
}

inline std::vector<CollegeRecord> parse_colleges(const std::string& path) {
    return parse_colleges(csv::read_file(path));
}

/// Validated, immutable view over all four inputs.
class LeagueStore {
public:
    LeagueStore(LeagueConfig cfg, FranchiseTable franchises, std::vector<PlayerSeason> seasons,
                FollowEdgeList follows = {}, std::vector<TeamFitness> fitness = {},
                std::vector<CollegeRecord> colleges = {})
        : config_(std::move(cfg)), franchises_(std::move(franchises)), seasons_(std::move(seasons)),
          follows_(std::move(follows)), fitness_(std::move(fitness)), colleges_(std::move(colleges)) {
        std::sort(seasons_.begin(), seasons_.end(), [](const PlayerSeason& a, const PlayerSeason& b) {
            return std::tie(a.player_id, a.season) < std::tie(b.player_id, b.season);
        });
        for (std::size_t i = 0; i < seasons_.size(); ++i) {
            const auto& ps = seasons_[i];
            if (i > 0 && seasons_[i - 1].player_id == ps.player_id && seasons_[i - 1].season == ps.season) {
                throw Error(ErrorKind::DuplicatePlayerSeason, ps.player_id + " " + std::to_string(ps.season));
            }
            auto [it, inserted] = player_ranges_.try_emplace(ps.player_id, i, i + 1);
            if (!inserted) {
                it->second.second = i + 1;
            }
        }
        for (const auto& f : fitness_) {
            fitness_index_[key(f.season, f.team_index)] = &f - fitness_.data();
        }
        for (const auto& c : colleges_) {
            college_index_[c.player_id] = c.college;
        }
    }

    /// Loads and parses the four files. `follows`, `fitness` and `colleges`
    /// may be empty paths.
    static LeagueStore load(const LeagueConfig& cfg, const std::string& players, const std::string& follows,
                            const std::string& fitness, const std::string& colleges,
                            std::vector<RowIssue>* issues = nullptr,
                            std::optional<FranchiseTable> franchise_override = std::nullopt) {
        FranchiseTable franchises = franchise_override ? *franchise_override : FranchiseTable(cfg.kind);
        auto parsed = parse_player_seasons(players, cfg, franchises);
        if (issues) {
            issues->insert(issues->end(), parsed.rejected.begin(), parsed.rejected.end());
            issues->insert(issues->end(), parsed.warnings.begin(), parsed.warnings.end());
        }
        std::set<std::string> roster;
        for (const auto& ps : parsed.seasons) {
            roster.insert(ps.player_id);
        }
        FollowEdgeList edges = follows.empty() ? FollowEdgeList{} : parse_follow_edges(follows, roster);
        auto fit = fitness.empty() ? std::vector<TeamFitness>{} : parse_team_fitness(csv::read_file(fitness), franchises);
        auto col = colleges.empty() ? std::vector<CollegeRecord>{} : parse_colleges(colleges);
        return LeagueStore(cfg, std::move(franchises), std::move(parsed.seasons), std::move(edges), std::move(fit),
                           std::move(col));
    }

    const LeagueConfig& config() const { return config_; }
    const FranchiseTable& franchises() const { return franchises_; }
    LeagueKind league() const { return config_.kind; }

    /// All player-seasons, sorted by (player_id, season).
    const std::vector<PlayerSeason>& seasons() const { return seasons_; }
    const FollowEdgeList& follows() const { return follows_; }
    const std::vector<TeamFitness>& fitness() const { return fitness_; }
    const std::vector<CollegeRecord>& colleges() const { return colleges_; }

    /// The contiguous run of seasons for one player, ascending by year.
    std::span<const PlayerSeason> player(const std::string& player_id) const {
        auto it = player_ranges_.find(player_id);
        if (it == player_ranges_.end()) {
            return {};
        }
        return std::span<const PlayerSeason>(seasons_.data() + it->second.first,
                                             it->second.second - it->second.first);
    }

    std::vector<std::string> player_ids() const {
        std::vector<std::string> ids;
        ids.reserve(player_ranges_.size());
        for (const auto& [id, range] : player_ranges_) {
            ids.push_back(id);
        }
        std::sort(ids.begin(), ids.end());
        return ids;
    }

    const TeamFitness* fitness_for(int season, std::size_t team_index) const {
        auto it = fitness_index_.find(key(season, team_index));
        return it == fitness_index_.end() ? nullptr : &fitness_[it->second];
    }

    std::string college_of(const std::string& player_id) const {
        auto it = college_index_.find(player_id);
        return it == college_index_.end() ? std::string(kNoCollege) : it->second;
    }

    bool has_college_record(const std::string& player_id) const { return college_index_.count(player_id) != 0; }

private:
    static std::uint64_t key(int season, std::size_t team) {
        return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(season)) << 32) | team;
    }

    LeagueConfig config_;
    FranchiseTable franchises_;
    std::vector<PlayerSeason> seasons_;
    FollowEdgeList follows_;
    std::vector<TeamFitness> fitness_;
    std::vector<CollegeRecord> colleges_;
    std::unordered_map<std::string, std::pair<std::size_t, std::size_t>> player_ranges_;
    std::unordered_map<std::uint64_t, std::size_t> fitness_index_;
    std::unordered_map<std::string, std::string> college_index_;
};

struct SeasonCoverage {
    int season = 0;
    std::size_t players = 0;
    std::size_t teams = 0;
    std::size_t with_fitness = 0; // player-seasons whose (season, team) has a fitness row
};

struct ValidationReport {
    std::vector<SeasonCoverage> seasons; // in-range seasons present in the data
    std::size_t players = 0;             // distinct player ids
    std::size_t players_with_follows = 0;
    std::size_t players_with_college = 0;
    std::size_t follow_edges = 0;

    double follow_coverage() const {
        return players == 0 ? 0.0 : static_cast<double>(players_with_follows) / static_cast<double>(players);
    }
    double college_coverage() const {
        return players == 0 ? 0.0 : static_cast<double>(players_with_college) / static_cast<double>(players);
    }
};

/// Summarizes coverage; throws TeamCountMismatch when an in-range season in
/// the data does not field exactly 30 distinct teams.
inline ValidationReport validate_league(const LeagueStore& store) {
    ValidationReport report;
    std::map<int, std::set<std::size_t>> teams;
    std::map<int, SeasonCoverage> per_season;
    for (const auto& ps : store.seasons()) {
        if (!store.config().in_range(ps.season)) {
            continue;
        }
        auto& cov = per_season[ps.season];
        cov.season = ps.season;
        ++cov.players;
        teams[ps.season].insert(ps.team_index);
        if (store.fitness_for(ps.season, ps.team_index)) {
            ++cov.with_fitness;
        }
    }
    for (auto& [season, cov] : per_season) {
        cov.teams = teams[season].size();
        report.seasons.push_back(cov);
    }
    auto ids = store.player_ids();
    report.players = ids.size();
    std::unordered_set<std::string> touched;
    for (const auto& e : store.follows().edges) {
        touched.insert(e.follower);
        touched.insert(e.followee);
    }
    report.players_with_follows = touched.size();
    for (const auto& id : ids) {
        if (store.has_college_record(id)) {
            ++report.players_with_college;
        }
    }
    report.follow_edges = store.follows().edges.size();
    for (const auto& cov : report.seasons) {
        if (cov.teams != kTeamsPerLeague) {
            throw Error(ErrorKind::TeamCountMismatch,
                        "season " + std::to_string(cov.season) + " has " + std::to_string(cov.teams) + " teams");
        }
    }
    return report;
}

// Serialization in the same schemas the parsers accept.

inline void write_player_seasons(std::ostream& out, const LeagueStore& store) {
    std::vector<std::string> header{"player_id", "season", "position", "team", "mid_season_move", "age"};
    for (const auto& m : store.config().metrics) {
        // Values are stored as fractions, so percent columns are re-declared.
        header.push_back(m.scale == MetricScale::Percent ? m.name + ":fraction" : m.name);
    }
    csv::write_record(out, header);
    for (const auto& ps : store.seasons()) {
        std::vector<std::string> row{ps.player_id, std::to_string(ps.season), ps.position, ps.team.code,
                                     ps.mid_season_move ? "1" : "0", ps.age ? csv::format_double(*ps.age) : ""};
        for (const auto& m : store.config().metrics) {
            auto it = ps.metrics.find(m.name);
            row.push_back(it != ps.metrics.end() && it->second ? csv::format_double(*it->second) : "");
        }
        csv::write_record(out, row);
    }
}

inline void write_follow_edges(std::ostream& out, const FollowEdgeList& edges) {
    csv::write_record(out, {"follower", "followee"});
    for (const auto& e : edges.edges) {
        csv::write_record(out, {e.follower, e.followee});
    }
}

inline void write_team_fitness(std::ostream& out, const std::vector<TeamFitness>& rows) {
    csv::write_record(out, {"season", "team", "rank", "valuation_musd"});
    for (const auto& f : rows) {
        csv::write_record(out, {std::to_string(f.season), f.team.code, std::to_string(f.rank),
                                csv::format_double(f.valuation)});
    }
}

inline void write_colleges(std::ostream& out, const std::vector<CollegeRecord>& rows) {
    csv::write_record(out, {"player_id", "college"});
    for (const auto& c : rows) {
        csv::write_record(out, {c.player_id, c.college});
    }
}

/// Reads franchise alias rules: league,raw_code,first_season,last_season,canonical.
inline std::vector<FranchiseAlias> parse_franchise_aliases(const csv::Table& table) {
    const std::vector<std::string> expected{"league", "raw_code", "first_season", "last_season", "canonical"};
    if (table.header != expected) {
        throw Error(ErrorKind::MalformedHeader, "franchise file needs league,raw_code,first_season,last_season,canonical");
    }
    std::vector<FranchiseAlias> out;
    for (const auto& row : table.rows) {
        const auto& f = row.fields;
        if (f.size() != 5) {
            throw Error(ErrorKind::MalformedRow, "expected 5 fields", row.number);
        }
        auto league = parse_league(f[0]);
        auto first = csv::parse_int(f[2]);
        auto last = csv::parse_int(f[3]);
        if (!league || !first || !last) {
            throw Error(ErrorKind::MalformedRow, "unparseable franchise rule", row.number);
        }
        out.push_back({*league, f[1], static_cast<int>(*first), static_cast<int>(*last), f[4]});
    }
    return out;
}

inline void write_franchise_aliases(std::ostream& out, const std::vector<FranchiseAlias>& aliases) {
    csv::write_record(out, {"league", "raw_code", "first_season", "last_season", "canonical"});
    for (const auto& a : aliases) {
        csv::write_record(out, {std::string(to_string(a.league)), a.raw, std::to_string(a.first_season),
                                std::to_string(a.last_season), a.canonical});
    }
}

} // namespace rosterflow::league
