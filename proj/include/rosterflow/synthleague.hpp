#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <tuple>
#include <type_traits>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/core.hpp"
#include "rosterflow/error.hpp"
#include "rosterflow/league_data.hpp"
#include "rosterflow/util/config.hpp"
#include "rosterflow/util/random.hpp"

namespace rosterflow::synth {

struct SynthConfig {
    LeagueKind league = LeagueKind::MLB;
    int first_season = 2002;
    int seasons = 17;
    std::size_t roster_size = 40;
    double leave_rate = 0.487;
    double retire_share = 0.497; // share of leavers who retire
    double mean_out_degree = 30.0;
    double attractiveness_alpha = 2.5; // Pareto shape of follow attractiveness
    double same_team_boost = 4.0;      // edge weight multiplier for same draft team
    double twitter_rate = 1.0;         // share of players with an account
    double beta = 1.0;                 // social coupling in the first season
    std::optional<double> beta_final;  // coupling in the last season; linear in between
    double fitness_weight = 0.0;
    double metric_missing_rate = 0.02;
    std::size_t required_players = 0;
    std::uint64_t seed = 1;

    static SynthConfig defaults(LeagueKind kind) {
        SynthConfig c;
        c.league = kind;
        auto lc = league::LeagueConfig::defaults(kind);
        c.first_season = lc.first_season;
        c.seasons = lc.last_season - lc.first_season + 1;
        if (kind == LeagueKind::NBA) {
            c.roster_size = 17;
            c.leave_rate = 0.60;
            c.retire_share = 0.33;
        }
        return c;
    }

    int last_season() const { return first_season + seasons - 1; }

    /// Coupling for a season, interpolated between beta and beta_final.
    double beta_for(int season) const {
        if (!beta_final || seasons <= 1) {
            return beta;
        }
        double t = static_cast<double>(season - first_season) / static_cast<double>(seasons - 1);
        return beta + (*beta_final - beta) * std::clamp(t, 0.0, 1.0);
    }

    void validate() const {
        auto bad = [](const std::string& what) { throw Error(ErrorKind::InfeasibleConfig, what); };
        auto rate = [&](double v, const char* name) {
            if (!(v >= 0.0 && v <= 1.0)) {
                bad(std::string(name) + " must lie in [0, 1]");
            }
        };
        rate(leave_rate, "leave_rate");
        rate(retire_share, "retire_share");
        rate(twitter_rate, "twitter_rate");
        rate(metric_missing_rate, "metric_missing_rate");
        if (seasons < 1) {
            bad("seasons must be >= 1");
        }
        if (roster_size < 2) {
            bad("roster_size must be >= 2");
        }
        if (beta < 0.0 || (beta_final && *beta_final < 0.0)) {
            bad("beta must be >= 0");
        }
        if (mean_out_degree < 0.0 || same_team_boost < 0.0 || !(attractiveness_alpha > 1.0)) {
            bad("follow model parameters out of range");
        }
        if (roster_size * kTeamsPerLeague < required_players) {
            bad("roster_size x 30 = " + std::to_string(roster_size * kTeamsPerLeague) + " < required " +
                std::to_string(required_players) + " players");
        }
    }

    /// Keys under [synth]; the league comes from `kind_override`, then
    /// synth.league or league.kind, then MLB.
    static SynthConfig from_document(const config::Document& doc,
                                     std::optional<LeagueKind> kind_override = std::nullopt) {
        LeagueKind kind = kind_override.value_or(LeagueKind::MLB);
        for (const char* key : {"synth.league", "league.kind"}) {
            if (kind_override) {
                break;
            }
            if (auto s = doc.get_string(key)) {
                auto k = parse_league(*s);
                if (!k) {
                    throw Error(ErrorKind::BadConfig, "unknown league '" + *s + "'");
                }
                kind = *k;
                break;
            }
        }
        SynthConfig c = defaults(kind);
        auto num = [&](const char* key, auto& out) {
            if (auto v = doc.get_number(std::string("synth.") + key)) {
                if constexpr (std::is_same_v<std::decay_t<decltype(out)>, double>) {
                    out = *v;
                } else {
                    if (*v < 0.0) {
                        throw Error(ErrorKind::BadConfig, std::string("synth.") + key + " must be non-negative");
                    }
                    out = static_cast<std::decay_t<decltype(out)>>(*v);
                }
            }
        };
        num("first_season", c.first_season);
        num("seasons", c.seasons);
        num("roster_size", c.roster_size);
        num("leave_rate", c.leave_rate);
        num("retire_share", c.retire_share);
        num("mean_out_degree", c.mean_out_degree);
        num("attractiveness_alpha", c.attractiveness_alpha);
        num("same_team_boost", c.same_team_boost);
        num("twitter_rate", c.twitter_rate);
        num("beta", c.beta);
        num("fitness_weight", c.fitness_weight);
        num("metric_missing_rate", c.metric_missing_rate);
        num("required_players", c.required_players);
        num("seed", c.seed);
        if (auto v = doc.get_number("synth.beta_final")) {
            c.beta_final = *v;
        }
        c.validate();
        return c;
    }
};

inline nlohmann::json to_json(const SynthConfig& c) {
    nlohmann::json j = {{"league", std::string(to_string(c.league))},
                        {"first_season", c.first_season},
                        {"seasons", c.seasons},
                        {"roster_size", c.roster_size},
                        {"leave_rate", c.leave_rate},
                        {"retire_share", c.retire_share},
                        {"mean_out_degree", c.mean_out_degree},
                        {"attractiveness_alpha", c.attractiveness_alpha},
                        {"same_team_boost", c.same_team_boost},
                        {"twitter_rate", c.twitter_rate},
                        {"beta", c.beta},
                        {"fitness_weight", c.fitness_weight},
                        {"metric_missing_rate", c.metric_missing_rate},
                        {"required_players", c.required_players},
                        {"seed", c.seed}};
    if (c.beta_final) {
        j["beta_final"] = *c.beta_final;
    }
    return j;
}

/// Generative destination law for one switching player-season.
struct TruthRow {
    std::string player_id;
    int season = 0;
    std::size_t current_team = 0;
    std::size_t destination = 0;
    double beta = 0.0;
    std::array<int, kTeamsPerLeague> affinity{};
    std::array<double, kTeamsPerLeague> probabilities{};

    bool operator==(const TruthRow&) const = default;
};

struct GroundTruth {
    std::vector<TruthRow> rows; // sorted by (season, player_id)
};

/// Expected accuracy of always picking the generative argmax.
inline double bayes_accuracy(const GroundTruth& truth) {
    if (truth.rows.empty()) {
        throw Error(ErrorKind::Empty, "ground truth has no rows");
    }
    double sum = 0.0;
    for (const auto& r : truth.rows) {
        sum += *std::max_element(r.probabilities.begin(), r.probabilities.end());
    }
    return sum / static_cast<double>(truth.rows.size());
}

/// softmax(beta * affinity + gamma * fitness) over every team but `current`.
inline std::array<double, kTeamsPerLeague> destination_law(const std::array<int, kTeamsPerLeague>& affinity,
                                                          const std::array<double, kTeamsPerLeague>& fitness,
                                                          std::size_t current, double beta, double gamma) {
    std::array<double, kTeamsPerLeague> score{};
    double top = -std::numeric_limits<double>::infinity();
    for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
        if (t == current) {
            continue;
        }
        score[t] = beta * affinity[t] + gamma * fitness[t];
        top = std::max(top, score[t]);
    }
    std::array<double, kTeamsPerLeague> p{};
    double sum = 0.0;
    for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
        if (t == current) {
            continue;
        }
        p[t] = std::exp(score[t] - top);
        sum += p[t];
    }
    for (double& v : p) {
        v /= sum;
    }
    return p;
}

struct SynthLeague {
    SynthConfig config;
    league::LeagueConfig league_config;
    league::LeagueStore store;
    GroundTruth truth;
};

namespace detail {

struct SimPlayer {
    std::string id;
    std::size_t draft_team = 0;
    bool account = false;
    double attractiveness = 1.0;
    double activity = 1.0;
    int position = 0;
    double age = 22.0;
    std::array<double, 4> latent{};
    std::string college;
    std::vector<std::size_t> follows; // indices of followees
};

inline std::vector<std::string> position_labels(LeagueKind k) {
    if (k == LeagueKind::MLB) {
        return {"P", "C", "1B", "2B", "3B", "SS", "LF", "CF", "RF", "DH", "OF"};
    }
    return {"PG", "SG", "SF", "PF", "C"};
}

inline std::vector<double> position_weights(LeagueKind k) {
    if (k == LeagueKind::MLB) {
        return {0.45, 0.08, 0.06, 0.06, 0.06, 0.06, 0.05, 0.05, 0.05, 0.03, 0.05};
    }
    return {0.2, 0.2, 0.2, 0.2, 0.2};
}

struct MetricLaw {
    double mean;
    double sd;
    double lo;
    double hi;
};

// Per-position Gaussians; index 0 of MLB positions is the pitcher block.
inline MetricLaw metric_law(LeagueKind k, std::size_t metric, int position) {
    constexpr double inf = std::numeric_limits<double>::infinity();
    if (k == LeagueKind::MLB) {
        bool pitcher = position == 0;
        bool catcher = position == 1;
        switch (metric) {
        case 0: return pitcher ? MetricLaw{0.955, 0.03, 0, 1} : catcher ? MetricLaw{0.99, 0.008, 0, 1} : MetricLaw{0.975, 0.015, 0, 1};
        case 1: return MetricLaw{0.5, 0.06, 0, 1};
        case 2: return pitcher ? MetricLaw{0.0, 2.0, -inf, inf} : MetricLaw{0.0, 10.0, -inf, inf};
        default: return pitcher ? MetricLaw{0.0, 0.2, -inf, inf} : MetricLaw{0.0, 1.0, -inf, inf};
        }
    }
    double shift = 0.3 * (position - 2);
    switch (metric) {
    case 0: return MetricLaw{13.0 + shift, 4.0, -inf, inf};
    case 1: return MetricLaw{2.5, 2.5, -inf, inf};
    default: return MetricLaw{-1.0 - shift, 3.0, -inf, inf};
    }
}

inline std::string college_name(std::size_t i) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "College %02zu", i + 1);
    return buf;
}

} // namespace detail

/// Simulates rosters season by season. Follow edges between a new player
/// and every existing account holder are drawn when the player enters, so a
/// switcher's affinity only ever depends on edges already sampled.
inline SynthLeague generate(const SynthConfig& cfg) {
    cfg.validate();
    using detail::SimPlayer;
    Rng rng(cfg.seed);
    const LeagueKind kind = cfg.league;
    FranchiseTable franchises(kind);
    auto lc = league::LeagueConfig::defaults(kind);
    lc.first_season = cfg.first_season;
    lc.last_season = cfg.last_season();
    const auto positions = detail::position_labels(kind);
    const auto pos_weights = detail::position_weights(kind);
    const double college_rate = kind == LeagueKind::NBA ? 0.85 : 0.4;
    const std::size_t n_colleges = kind == LeagueKind::NBA ? 40 : 60;

    const double mean_a = cfg.attractiveness_alpha / (cfg.attractiveness_alpha - 1.0);
    const double initial = static_cast<double>(cfg.roster_size * kTeamsPerLeague);
    const double expected_players =
        initial * (1.0 + static_cast<double>(cfg.seasons) * cfg.leave_rate * cfg.retire_share);
    const double kappa = cfg.mean_out_degree / (std::max(1.0, expected_players * cfg.twitter_rate) * mean_a * mean_a);

    std::vector<SimPlayer> players;
    std::vector<std::size_t> accounts;
    auto create = [&](std::size_t team, bool veteran) {
        SimPlayer p;
        char buf[16];
        std::snprintf(buf, sizeof buf, "p%06zu", players.size() + 1);
        p.id = buf;
        p.draft_team = team;
        p.account = rng.bernoulli(cfg.twitter_rate);
        p.attractiveness = rng.pareto(cfg.attractiveness_alpha);
        p.activity = rng.pareto(cfg.attractiveness_alpha);
        p.position = static_cast<int>(rng.categorical(pos_weights));
        p.age = veteran ? 21.0 + static_cast<double>(rng.below(14)) : 20.0 + static_cast<double>(rng.below(5));
        for (double& z : p.latent) {
            z = rng.normal();
        }
        p.college = rng.bernoulli(college_rate) ? detail::college_name(rng.below(n_colleges))
                                                : std::string(league::kNoCollege);
        std::size_t self = players.size();
        if (p.account) {
            for (std::size_t other : accounts) {
                SimPlayer& q = players[other];
                double boost = q.draft_team == team ? cfg.same_team_boost : 1.0;
                if (rng.bernoulli(std::min(1.0, kappa * q.activity * p.attractiveness * boost))) {
                    q.follows.push_back(self);
                }
                if (rng.bernoulli(std::min(1.0, kappa * p.activity * q.attractiveness * boost))) {
                    p.follows.push_back(other);
                }
            }
            accounts.push_back(self);
        }
        players.push_back(std::move(p));
        return self;
    };

    // Team strength drifts; rank 1 is the strongest team.
    std::array<double, kTeamsPerLeague> strength{}, base_value{};
    for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
        strength[t] = rng.normal();
        base_value[t] = (kind == LeagueKind::MLB ? 900.0 : 700.0) * std::exp(rng.normal(0.0, 0.35));
    }

    std::vector<league::PlayerSeason> seasons;
    std::vector<league::TeamFitness> fitness;
    GroundTruth truth;
    std::vector<std::vector<std::size_t>> rosters(kTeamsPerLeague);
    for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
        for (std::size_t k = 0; k < cfg.roster_size; ++k) {
            rosters[t].push_back(create(t, true));
        }
    }

    const int last = cfg.last_season();
    std::vector<long> team_of(players.size(), -1);
    for (int season = cfg.first_season; season <= last + 1; ++season) {
        const int year = season - cfg.first_season;
        team_of.assign(players.size(), -1);
        for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
            std::sort(rosters[t].begin(), rosters[t].end());
            for (std::size_t p : rosters[t]) {
                team_of[p] = static_cast<long>(t);
            }
        }
        std::array<double, kTeamsPerLeague> fit_score{};
        if (season <= last) {
            std::array<std::size_t, kTeamsPerLeague> order{};
            for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
                order[t] = t;
                strength[t] = 0.7 * strength[t] + 0.714 * rng.normal();
            }
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return strength[a] > strength[b]; });
            for (std::size_t r = 0; r < kTeamsPerLeague; ++r) {
                std::size_t t = order[r];
                fit_score[t] = static_cast<double>(kTeamsPerLeague - 1 - r) / static_cast<double>(kTeamsPerLeague - 1);
                double value = base_value[t] * std::exp(0.06 * year + rng.normal(0.0, 0.05));
                fitness.push_back(league::TeamFitness{season, franchises.team(t), t, static_cast<int>(r + 1),
                                                      std::round(value)});
            }
        }
        for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
            for (std::size_t p : rosters[t]) {
                SimPlayer& sp = players[p];
                league::PlayerSeason ps;
                ps.player_id = sp.id;
                ps.season = season;
                ps.team = franchises.team(t);
                ps.team_index = t;
                ps.position = positions[static_cast<std::size_t>(sp.position)];
                ps.age = sp.age;
                for (std::size_t m = 0; m < lc.metrics.size(); ++m) {
                    if (rng.bernoulli(cfg.metric_missing_rate)) {
                        ps.metrics[lc.metrics[m].name] = std::nullopt;
                        continue;
                    }
                    auto law = detail::metric_law(kind, m, sp.position);
                    double z = 0.7 * sp.latent[m] + 0.714 * rng.normal();
                    double v = std::clamp(law.mean + law.sd * z, law.lo, law.hi);
                    ps.metrics[lc.metrics[m].name] = std::round(v * 1e4) / 1e4;
                }
                seasons.push_back(std::move(ps));
            }
        }
        if (season > last) {
            break;
        }

        // End of season: stay, retire or switch.
        const double beta = cfg.beta_for(season);
        std::vector<std::vector<std::size_t>> next(kTeamsPerLeague);
        for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
            for (std::size_t p : rosters[t]) {
                if (!rng.bernoulli(cfg.leave_rate)) {
                    next[t].push_back(p);
                    continue;
                }
                if (rng.bernoulli(cfg.retire_share)) {
                    continue;
                }
                TruthRow row;
                row.player_id = players[p].id;
                row.season = season;
                row.current_team = t;
                row.beta = beta;
                for (std::size_t q : players[p].follows) {
                    long tq = q < team_of.size() ? team_of[q] : -1;
                    if (tq >= 0 && static_cast<std::size_t>(tq) != t) {
                        ++row.affinity[static_cast<std::size_t>(tq)];
                    }
                }
                row.probabilities = destination_law(row.affinity, fit_score, t, beta, cfg.fitness_weight);
                std::vector<double> w(row.probabilities.begin(), row.probabilities.end());
                row.destination = rng.categorical(w);
                next[row.destination].push_back(p);
                truth.rows.push_back(std::move(row));
            }
        }
        for (std::size_t t = 0; t < kTeamsPerLeague; ++t) {
            for (std::size_t p : next[t]) {
                players[p].age += 1.0;
            }
            while (next[t].size() < cfg.roster_size) {
                next[t].push_back(create(t, false));
            }
        }
        rosters = std::move(next);
    }

    std::sort(truth.rows.begin(), truth.rows.end(), [](const TruthRow& a, const TruthRow& b) {
        return std::tie(a.season, a.player_id) < std::tie(b.season, b.player_id);
    });

    league::FollowEdgeList edges;
    for (const auto& p : players) {
        for (std::size_t q : p.follows) {
            edges.edges.push_back({p.id, players[q].id});
        }
    }
    std::sort(edges.edges.begin(), edges.edges.end());
    std::vector<league::CollegeRecord> colleges;
    for (const auto& p : players) {
        colleges.push_back({p.id, p.college});
    }
    league::LeagueStore store(lc, franchises, std::move(seasons), std::move(edges), std::move(fitness),
                              std::move(colleges));
    return SynthLeague{cfg, lc, std::move(store), std::move(truth)};
}

inline nlohmann::json truth_to_json(const SynthConfig& cfg, const GroundTruth& truth) {
    nlohmann::json rows = nlohmann::json::array();
    for (const auto& r : truth.rows) {
        rows.push_back({{"player_id", r.player_id},
                        {"season", r.season},
                        {"current_team", r.current_team},
                        {"destination", r.destination},
                        {"beta", r.beta},
                        {"affinity", r.affinity},
                        {"probabilities", r.probabilities}});
    }
    nlohmann::json j = {{"config", to_json(cfg)}, {"rows", rows}};
    if (!truth.rows.empty()) {
        j["bayes_accuracy"] = bayes_accuracy(truth);
    }
    return j;
}

inline GroundTruth truth_from_json(const nlohmann::json& j) {
    GroundTruth t;
    for (const auto& r : j.at("rows")) {
        TruthRow row;
        r.at("player_id").get_to(row.player_id);
        r.at("season").get_to(row.season);
        r.at("current_team").get_to(row.current_team);
        r.at("destination").get_to(row.destination);
        r.at("beta").get_to(row.beta);
        r.at("affinity").get_to(row.affinity);
        r.at("probabilities").get_to(row.probabilities);
        t.rows.push_back(std::move(row));
    }
    return t;
}

/// League config in the same key layout `LeagueConfig::from_document` reads.
inline std::string league_toml(const league::LeagueConfig& lc) {
    std::string out = "[league]\nkind = \"" + std::string(to_string(lc.kind)) + "\"\n";
    out += "first_season = " + std::to_string(lc.first_season) + "\n";
    out += "last_season = " + std::to_string(lc.last_season) + "\n";
    return out;
}

/// Writes players.csv, follows.csv, fitness.csv, colleges.csv, league.toml
/// and groundtruth.json into `dir`. A non-empty `comment` is written at the
/// top of each CSV and TOML file as '#' lines.
inline void write_synth(const SynthLeague& s, const std::filesystem::path& dir, const std::string& comment = {}) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    auto open = [&](const char* name) {
        std::ofstream out(dir / name);
        if (!out) {
            throw Error(ErrorKind::IOFailure, "cannot write " + (dir / name).string());
        }
        if (!comment.empty() && !std::string_view(name).ends_with(".json")) {
            out << comment;
        }
        return out;
    };
    {
        auto out = open("players.csv");
        league::write_player_seasons(out, s.store);
    }
    {
        auto out = open("follows.csv");
        league::write_follow_edges(out, s.store.follows());
    }
    {
        auto out = open("fitness.csv");
        league::write_team_fitness(out, s.store.fitness());
    }
    {
        auto out = open("colleges.csv");
        league::write_colleges(out, s.store.colleges());
    }
    {
        auto out = open("league.toml");
        out << league_toml(s.league_config);
    }
    {
        auto out = open("groundtruth.json");
        out << truth_to_json(s.config, s.truth).dump(1) << '\n';
    }
}

} // namespace rosterflow::synth
