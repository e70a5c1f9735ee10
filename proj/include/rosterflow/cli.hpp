#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "rosterflow/core.hpp"
#include "rosterflow/error.hpp"
#include "rosterflow/experiments.hpp"
#include "rosterflow/features.hpp"
#include "rosterflow/league_data.hpp"
#include "rosterflow/ml/model.hpp"
#include "rosterflow/socialgraph.hpp"
#include "rosterflow/synthleague.hpp"
#include "rosterflow/util/config.hpp"
#include "rosterflow/util/csv.hpp"

namespace rosterflow::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitData = 3;
inline constexpr int kExitIO = 4;

namespace fs = std::filesystem;

/// Flags shared by the subcommands. Unset flags fall back to the config file.
struct Options {
    std::string config_path;
    std::string league;
    std::optional<std::uint64_t> seed;
    std::optional<std::size_t> jobs;
    std::string out;
    std::string format;
    std::string data_dir;
    std::string players;
    std::string follows;
    std::string fitness;
    std::string colleges;
    std::optional<int> first_season;
    std::optional<int> last_season;

    std::vector<std::string> feature_sets;
    std::string algorithms;
    std::optional<std::size_t> reps;
    std::optional<double> split;
    std::optional<int> boundary;
    bool all_players = false;

    std::string centrality_kind = "degree";
    std::optional<std::size_t> top;
    bool histograms = false;

    std::optional<double> beta;
    std::optional<double> beta_final;
    std::optional<int> seasons;
    std::optional<std::size_t> roster_size;
    std::optional<double> twitter_rate;

    std::string input;
};

class Runner {
public:
    Runner(const Options& opt, std::ostream& out) : opt_(opt), out_(out) { load_config(); }

    int ingest() {
        auto store = load_store();
        auto report = league::validate_league(store);
        features::EngineeredLeague eng(store);
        nlohmann::json j = meta("ingest");
        j["players"] = report.players;
        j["player_seasons"] = store.seasons().size();
        j["follow_edges"] = report.follow_edges;
        j["players_with_follows"] = report.players_with_follows;
        j["players_with_college"] = report.players_with_college;
        j["follow_coverage"] = report.follow_coverage();
        j["college_coverage"] = report.college_coverage();
        j["issues"] = issues_.size();
        nlohmann::json seasons = nlohmann::json::array();
        for (const auto& s : features::summarize_transitions(eng)) {
            seasons.push_back({{"season", s.season},
                               {"players", s.players},
                               {"leaving", s.leaving},
                               {"retiring", s.retiring},
                               {"switched", s.switched}});
        }
        j["transitions"] = seasons;
        nlohmann::json issues = nlohmann::json::array();
        for (const auto& i : issues_) {
            issues.push_back({{"row", i.row}, {"message", i.message}});
        }
        j["issue_rows"] = issues;
        emit_json(j);
        return kExitOk;
    }

    int featurize() {
        auto store = load_store();
        features::FeatureContext ctx(store);
        auto sets = feature_sets(std::nullopt);
        if (sets.size() != 1) {
            throw Error(ErrorKind::BadConfig, "featurize takes exactly one feature set");
        }
        const auto& lc = store.config();
        auto ds = features::assemble_dataset(ctx, sets.front(), lc.first_season, lc.last_season, social_population());
        std::ostringstream body;
        body << comment("featurize");
        features::write_dataset_csv(body, ds, store.franchises());
        write_output(body.str());
        if (!opt_.out.empty()) {
            auto side = features::dataset_sidecar(ds);
            side["meta"] = meta("featurize")["meta"];
            write_file(opt_.out + ".json", side.dump(2) + "\n");
        }
        return kExitOk;
    }

    int netstats() {
        auto g = load_graph();
        auto stats = graph::graph_stats(g, jobs());
        nlohmann::json j = meta("netstats");
        j["stats"] = {{"n", stats.n}, {"m", stats.m}, {"c", stats.c},   {"S", stats.S},
                      {"ell", stats.ell}, {"C", stats.C}, {"r", stats.r}, {"a", stats.a}};
        if (opt_.histograms) {
            for (auto kind : {graph::CentralityKind::Degree, graph::CentralityKind::InDegree,
                              graph::CentralityKind::OutDegree}) {
                nlohmann::json h = nlohmann::json::array();
                for (auto [value, count] : graph::degree_histogram(g, kind)) {
                    h.push_back({value, count});
                }
                j["histograms"][std::string(graph::to_string(kind))] = h;
            }
        }
        emit_json(j);
        return kExitOk;
    }

    int centrality() {
        auto kind = graph::parse_centrality_kind(opt_.centrality_kind);
        if (!kind) {
            throw Error(ErrorKind::BadConfig, "unknown centrality kind '" + opt_.centrality_kind + "'");
        }
        auto g = load_graph();
        auto scores = graph::centrality(g, *kind, jobs());
        std::ostringstream body;
        body << comment("centrality");
        csv::write_record(body, {"player_id", std::string(graph::to_string(*kind))}, '\t');
        if (opt_.top) {
            for (const auto& [id, score] : graph::top_k(scores, *opt_.top)) {
                csv::write_record(body, {id, csv::format_double(score)}, '\t');
            }
        } else {
            for (std::size_t i = 0; i < scores.ids.size(); ++i) {
                csv::write_record(body, {scores.ids[i], csv::format_double(scores.scores[i])}, '\t');
            }
        }
        write_output(body.str());
        return kExitOk;
    }

    int evaluate() {
        auto store = load_store();
        auto spec = experiment_spec(store.config(), false);
        auto report = experiments::run_experiment(spec, store);
        write_report(report, "evaluate");
        return kExitOk;
    }

    int temporal() {
        auto store = load_store();
        auto spec = experiment_spec(store.config(), true);
        auto boundary = opt_.boundary ? opt_.boundary : number<int>("run.boundary");
        if (!boundary) {
            throw Error(ErrorKind::BadConfig, "temporal needs --boundary");
        }
        auto report = experiments::temporal_split_experiment(spec, store, *boundary);
        auto format = report_format();
        std::ostringstream body;
        if (format == experiments::ReportFormat::JSON) {
            auto j = meta("temporal");
            j["temporal"] = experiments::temporal_to_json(report);
            body << j.dump(2) << '\n';
        } else {
            body << comment("temporal");
            experiments::emit_temporal(body, report, format);
        }
        write_output(body.str());
        return kExitOk;
    }

    int synth() {
        std::optional<LeagueKind> kind;
        if (!opt_.league.empty()) {
            kind = league_kind();
        }
        synth::SynthConfig cfg = doc_ ? synth::SynthConfig::from_document(*doc_, kind)
                                      : synth::SynthConfig::defaults(kind.value_or(LeagueKind::MLB));
        if (opt_.seed) {
            cfg.seed = *opt_.seed;
        } else if (auto s = number<std::uint64_t>("run.seed")) {
            cfg.seed = *s;
        }
        if (opt_.beta) {
            cfg.beta = *opt_.beta;
        }
        if (opt_.beta_final) {
            cfg.beta_final = *opt_.beta_final;
        }
        if (opt_.seasons) {
            cfg.seasons = *opt_.seasons;
        }
        if (opt_.first_season) {
            cfg.first_season = *opt_.first_season;
        }
        if (opt_.roster_size) {
            cfg.roster_size = *opt_.roster_size;
        }
        if (opt_.twitter_rate) {
            cfg.twitter_rate = *opt_.twitter_rate;
        }
        cfg.validate();
        seed_ = cfg.seed;
        if (opt_.out.empty()) {
            throw Error(ErrorKind::BadConfig, "synth needs --out DIR");
        }
        settings_["synth"] = synth::to_json(cfg);
        auto league = synth::generate(cfg);
        synth::write_synth(league, opt_.out, comment("synth"));
        nlohmann::json j = meta("synth");
        j["switchers"] = league.truth.rows.size();
        j["bayes_accuracy"] = league.truth.rows.empty() ? 0.0 : synth::bayes_accuracy(league.truth);
        j["player_seasons"] = league.store.seasons().size();
        j["follow_edges"] = league.store.follows().edges.size();
        out_ << j.dump(2) << '\n';
        return kExitOk;
    }

    int report() {
        if (opt_.input.empty()) {
            throw Error(ErrorKind::BadConfig, "report needs --in FILE");
        }
        std::ifstream in(opt_.input);
        if (!in) {
            throw Error(ErrorKind::IOFailure, "cannot read " + opt_.input);
        }
        nlohmann::json j;
        try {
            j = nlohmann::json::parse(in);
        } catch (const nlohmann::json::exception& e) {
            throw Error(ErrorKind::BadConfig, opt_.input + ": " + e.what());
        }
        auto format = opt_.format.empty() ? experiments::ReportFormat::TSV
                                          : experiments::parse_report_format(opt_.format);
        std::ostringstream body;
        if (j.contains("meta")) {
            const auto& m = j["meta"];
            body << "# " << m.value("tool", "rosterflow") << ' ' << m.value("version", "") << ' '
                 << m.value("command", "") << '\n';
            body << "# seed=" << m.value("seed", std::uint64_t{0}) << '\n';
            body << "# config=" << m.value("config", nlohmann::json::object()).dump() << '\n';
        }
        if (j.contains("temporal")) {
            experiments::emit_temporal(body, experiments::temporal_from_json(j["temporal"]), format);
        } else {
            const auto& r = j.contains("report") ? j["report"] : j;
            experiments::emit_report(body, experiments::report_from_json(r), format);
        }
        write_output(body.str());
        return kExitOk;
    }

private:
    void load_config() {
        std::string path = opt_.config_path;
        if (path.empty() && !opt_.data_dir.empty() && fs::exists(fs::path(opt_.data_dir) / "league.toml")) {
            path = (fs::path(opt_.data_dir) / "league.toml").string();
        }
        if (!path.empty()) {
            if (!fs::exists(path)) {
                throw Error(ErrorKind::IOFailure, "cannot read config " + path);
            }
            doc_ = config::Document::parse_file(path);
            config_dir_ = fs::path(path).parent_path();
            settings_["config_file"] = fs::path(path).filename().string();
        }
    }

    template <typename T>
    std::optional<T> number(const std::string& key) const {
        if (!doc_) {
            return std::nullopt;
        }
        if (auto v = doc_->get_number(key)) {
            return static_cast<T>(*v);
        }
        return std::nullopt;
    }

    std::optional<std::string> text(const std::string& key) const {
        return doc_ ? doc_->get_string(key) : std::nullopt;
    }

    std::size_t jobs() const {
        if (opt_.jobs) {
            return std::max<std::size_t>(1, *opt_.jobs);
        }
        return std::max<std::size_t>(1, number<std::size_t>("run.jobs").value_or(1));
    }

    std::uint64_t seed() {
        if (!seed_) {
            seed_ = opt_.seed ? *opt_.seed : number<std::uint64_t>("run.seed").value_or(0);
        }
        return *seed_;
    }

    LeagueKind league_kind() const {
        std::string name = opt_.league;
        if (name.empty()) {
            name = text("league.kind").value_or("mlb");
        }
        auto k = parse_league(name);
        if (!k) {
            throw Error(ErrorKind::BadConfig, "unknown league '" + name + "'");
        }
        return *k;
    }

    league::LeagueConfig league_config() const {
        auto kind = league_kind();
        league::LeagueConfig lc = league::LeagueConfig::defaults(kind);
        if (doc_) {
            lc = league::LeagueConfig::from_document(*doc_, kind);
            lc.kind = kind;
            if (!opt_.league.empty() && doc_->get_string("league.kind") &&
                parse_league(*doc_->get_string("league.kind")) != kind) {
                auto defaults = league::LeagueConfig::defaults(kind);
                lc.metrics = defaults.metrics;
            }
        }
        if (opt_.first_season) {
            lc.first_season = *opt_.first_season;
        }
        if (opt_.last_season) {
            lc.last_season = *opt_.last_season;
        }
        if (lc.first_season > lc.last_season) {
            throw Error(ErrorKind::BadConfig, "first season after last season");
        }
        return lc;
    }

    /// Flag path, else config `data.<key>` relative to the config file, else
    /// `<data-dir>/<file>`.
    std::string input_path(const std::string& flag, const std::string& key, const char* file, bool required) const {
        std::string path = flag;
        if (path.empty()) {
            if (auto p = text("data." + key)) {
                path = fs::path(*p).is_absolute() ? *p : (config_dir_ / *p).string();
            }
        }
        if (path.empty() && !opt_.data_dir.empty()) {
            auto candidate = fs::path(opt_.data_dir) / file;
            if (required || fs::exists(candidate)) {
                path = candidate.string();
            }
        }
        if (path.empty() && required) {
            throw Error(ErrorKind::BadConfig, "missing input --" + key);
        }
        if (!path.empty() && !fs::exists(path)) {
            throw Error(ErrorKind::IOFailure, "cannot read " + path);
        }
        return path;
    }

    league::LeagueStore load_store() {
        auto lc = league_config();
        auto players = input_path(opt_.players, "players", "players.csv", true);
        auto follows = input_path(opt_.follows, "follows", "follows.csv", false);
        auto fitness = input_path(opt_.fitness, "fitness", "fitness.csv", false);
        auto colleges = input_path(opt_.colleges, "colleges", "colleges.csv", false);
        settings_["league"] = std::string(to_string(lc.kind));
        settings_["first_season"] = lc.first_season;
        settings_["last_season"] = lc.last_season;
        settings_["inputs"] = {{"players", fs::path(players).filename().string()},
                               {"follows", fs::path(follows).filename().string()},
                               {"fitness", fs::path(fitness).filename().string()},
                               {"colleges", fs::path(colleges).filename().string()}};
        return league::LeagueStore::load(lc, players, follows, fitness, colleges, &issues_);
    }

    graph::FollowGraph load_graph() {
        auto path = input_path(opt_.follows, "follows", "follows.csv", true);
        auto table = csv::read_file(path);
        std::set<std::string> ids;
        for (const auto& row : table.rows) {
            for (const auto& f : row.fields) {
                ids.insert(f);
            }
        }
        auto edges = league::parse_follow_edges(table, ids);
        settings_["inputs"] = {{"follows", fs::path(path).filename().string()}};
        settings_["self_loops"] = edges.self_loops;
        settings_["duplicates"] = edges.duplicates;
        return graph::build_graph(edges);
    }

    bool social_population() const {
        if (opt_.all_players) {
            return false;
        }
        if (doc_) {
            if (auto v = doc_->get_bool("run.social_population")) {
                return *v;
            }
        }
        return true;
    }

    /// Each entry is one feature set; ';' separates sets inside an entry and
    /// ',' joins flags within a set. "table" expands to the summary rows and
    /// "temporal" to the ten temporal rows.
    std::vector<features::FeatureSet> feature_sets(std::optional<std::vector<features::FeatureSet>> fallback) const {
        std::vector<std::string> entries = opt_.feature_sets;
        if (entries.empty() && doc_) {
            if (auto list = doc_->get_strings("run.features")) {
                entries = *list;
            } else if (auto one = doc_->get_string("run.features")) {
                entries = {*one};
            }
        }
        std::vector<features::FeatureSet> out;
        for (const auto& entry : entries) {
            std::stringstream ss(entry);
            std::string part;
            while (std::getline(ss, part, ';')) {
                if (part == "table") {
                    auto rows = experiments::summary_feature_sets(league_kind());
                    out.insert(out.end(), rows.begin(), rows.end());
                } else if (part == "temporal") {
                    auto rows = experiments::temporal_feature_sets();
                    out.insert(out.end(), rows.begin(), rows.end());
                } else if (!part.empty()) {
                    out.push_back(features::FeatureSet::parse(part));
                }
            }
        }
        if (out.empty()) {
            if (!fallback) {
                throw Error(ErrorKind::BadConfig, "missing --features");
            }
            return *fallback;
        }
        return out;
    }

    experiments::ExperimentSpec experiment_spec(const league::LeagueConfig& lc, bool temporal) {
        auto spec = temporal ? experiments::temporal_defaults(lc) : experiments::ExperimentSpec::defaults(lc);
        spec.feature_sets = feature_sets(spec.feature_sets);
        std::string algos = opt_.algorithms;
        if (algos.empty() && doc_) {
            if (auto list = doc_->get_strings("run.algorithms")) {
                for (const auto& a : *list) {
                    algos += (algos.empty() ? "" : ",") + a;
                }
            } else if (auto one = doc_->get_string("run.algorithms")) {
                algos = *one;
            }
        }
        if (!algos.empty()) {
            spec.algorithms = ml::parse_algorithms(algos);
        }
        if (opt_.reps) {
            spec.repetitions = *opt_.reps;
        } else if (auto r = number<std::size_t>("run.repetitions")) {
            spec.repetitions = *r;
        }
        if (opt_.split) {
            spec.split_fraction = *opt_.split;
        } else if (auto s = number<double>("run.split")) {
            spec.split_fraction = *s;
        }
        spec.seed = seed();
        spec.jobs = jobs();
        spec.social_population = social_population();
        if (doc_) {
            spec.hyperparameters = ml::Hyperparameters::from_document(*doc_);
        }
        std::vector<std::string> fsets, anames;
        for (const auto& f : spec.feature_sets) {
            fsets.push_back(f.label());
        }
        for (auto a : spec.algorithms) {
            anames.emplace_back(ml::cli_name(a));
        }
        settings_["features"] = fsets;
        settings_["algorithms"] = anames;
        settings_["repetitions"] = spec.repetitions;
        settings_["split"] = spec.split_fraction;
        settings_["social_population"] = spec.social_population;
        if (opt_.boundary) {
            settings_["boundary"] = *opt_.boundary;
        }
        return spec;
    }

    experiments::ReportFormat report_format() const {
        if (!opt_.format.empty()) {
            return experiments::parse_report_format(opt_.format);
        }
        return opt_.out.empty() ? experiments::ReportFormat::TSV : experiments::format_for_path(opt_.out);
    }

    void write_report(const experiments::AccuracyReport& report, const std::string& command) {
        auto format = report_format();
        std::ostringstream body;
        if (format == experiments::ReportFormat::JSON) {
            auto j = meta(command);
            j["report"] = experiments::report_to_json(report);
            body << j.dump(2) << '\n';
        } else {
            body << comment(command);
            experiments::emit_report(body, report, format);
        }
        write_output(body.str());
    }

    nlohmann::json meta(const std::string& command) {
        nlohmann::json m = {{"tool", "rosterflow"},
                            {"version", std::string(kVersion)},
                            {"command", command},
                            {"seed", seed()},
                            {"config", settings_}};
        return {{"meta", m}};
    }

    std::string comment(const std::string& command) {
        std::string s = "# rosterflow " + std::string(kVersion) + " " + command + "\n";
        s += "# seed=" + std::to_string(seed()) + "\n";
        s += "# config=" + settings_.dump() + "\n";
        return s;
    }

    void emit_json(const nlohmann::json& j) { write_output(j.dump(2) + "\n"); }

    static void write_file(const std::string& path, const std::string& body) {
        std::ofstream f(path, std::ios::binary);
        if (!f) {
            throw Error(ErrorKind::IOFailure, "cannot write " + path);
        }
        f << body;
        if (!f) {
            throw Error(ErrorKind::IOFailure, "write failed for " + path);
        }
    }

    void write_output(const std::string& body) {
        if (opt_.out.empty()) {
            out_ << body;
        } else {
            write_file(opt_.out, body);
        }
    }

    const Options& opt_;
    std::ostream& out_;
    std::optional<config::Document> doc_;
    fs::path config_dir_;
    std::optional<std::uint64_t> seed_;
    nlohmann::json settings_ = nlohmann::json::object();
    std::vector<league::RowIssue> issues_;
};

inline int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::BadConfig:
    case ErrorKind::InvalidHyperparameter: return kExitUsage;
    case ErrorKind::IOFailure: return kExitIO;
    default: return kExitData;
    }
}

inline void report_error(std::ostream& err, const Error& e) {
    nlohmann::json j = {{"error", std::string(to_string(e.kind()))}, {"message", e.what()}};
    if (e.row()) {
        j["row"] = *e.row();
    }
    err << j.dump() << '\n';
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
    CLI::App app{"Group-transition prediction toolkit: ingestion, features, network analytics, classifiers, "
                 "experiments and synthetic leagues.",
                 "rosterflow"};
    app.set_version_flag("--version", std::string(kVersion));
    app.require_subcommand(1, 1);
    app.failure_message(CLI::FailureMessage::help);
    Options opt;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "TOML config file; flags override its values");
        sub->add_option("--seed", opt.seed, "Master seed (default 0, or run.seed)");
        sub->add_option("--jobs", opt.jobs, "Worker threads (default 1, or run.jobs)");
        sub->add_option("--out", opt.out, "Output path (default standard output)");
    };
    auto add_data = [&](CLI::App* sub) {
        sub->add_option("--league", opt.league, "mlb or nba (default league.kind or mlb)");
        sub->add_option("--data-dir", opt.data_dir,
                        "Directory holding players.csv, follows.csv, fitness.csv, colleges.csv and league.toml");
        sub->add_option("--players", opt.players, "Player-season CSV");
        sub->add_option("--follows,--edges", opt.follows, "Follow-edge CSV (follower,followee)");
        sub->add_option("--fitness", opt.fitness, "Team fitness CSV (season,team,rank,valuation_musd)");
        sub->add_option("--colleges", opt.colleges, "College CSV (player_id,college)");
        sub->add_option("--first-season", opt.first_season, "First in-range season");
        sub->add_option("--last-season", opt.last_season, "Last in-range season");
    };
    auto add_experiment = [&](CLI::App* sub) {
        sub->add_option("--features", opt.feature_sets,
                        "Feature set(s): flags joined by ',' (position, team, career_length, performance, "
                        "rank_value, twitter, college, all, social); ';' or repeats give several sets; 'table' "
                        "and 'temporal' expand to the standard rows");
        sub->add_option("--algos", opt.algorithms,
                        "Comma list of tree, forest, extra-trees, adaboost, xgb-like, logreg, knn, all");
        sub->add_option("--reps", opt.reps, "Repetitions (default 10)");
        sub->add_option("--split", opt.split, "Training fraction (default 0.7)");
        sub->add_option("--format", opt.format, "tsv, csv or json (default from --out extension)");
        sub->add_flag("--all-players", opt.all_players,
                      "Keep players without follow data in non-social feature sets");
    };

    auto* ingest = app.add_subcommand("ingest", "Parse and validate the input files; print a JSON summary");
    add_common(ingest);
    add_data(ingest);

    auto* featurize = app.add_subcommand("featurize", "Write the labeled feature matrix for one feature set");
    add_common(featurize);
    add_data(featurize);
    featurize->add_option("--features", opt.feature_sets, "Feature flags joined by ','")->required();
    featurize->add_flag("--all-players", opt.all_players, "Keep players without follow data");

    auto* netstats = app.add_subcommand("netstats", "Directed network statistics of a follow graph as JSON");
    add_common(netstats);
    netstats->add_option("--edges,--follows", opt.follows, "Follow-edge CSV")->required();
    netstats->add_flag("--histograms", opt.histograms, "Include total, in- and out-degree histograms");

    auto* centrality = app.add_subcommand("centrality", "Per-player centrality scores as TSV");
    add_common(centrality);
    centrality->add_option("--edges,--follows", opt.follows, "Follow-edge CSV")->required();
    centrality->add_option("--kind", opt.centrality_kind,
                           "degree, in-degree, out-degree, eigenvector, closeness or betweenness");
    centrality->add_option("--top", opt.top, "Only the top K players");

    auto* evaluate = app.add_subcommand("evaluate", "Feature-set x algorithm accuracy matrix");
    add_common(evaluate);
    add_data(evaluate);
    add_experiment(evaluate);

    auto* temporal = app.add_subcommand("temporal", "Early/late/full period accuracy comparison");
    add_common(temporal);
    add_data(temporal);
    add_experiment(temporal);
    temporal->add_option("--boundary", opt.boundary, "Last season of the early period");

    auto* synth = app.add_subcommand("synth", "Generate a synthetic league with ground truth");
    add_common(synth);
    synth->add_option("--league", opt.league, "mlb or nba");
    synth->add_option("--beta", opt.beta, "Social coupling");
    synth->add_option("--beta-final", opt.beta_final, "Coupling in the last season (linear schedule)");
    synth->add_option("--seasons", opt.seasons, "Number of in-range seasons");
    synth->add_option("--first-season", opt.first_season, "First season");
    synth->add_option("--roster-size", opt.roster_size, "Players per team");
    synth->add_option("--twitter-rate", opt.twitter_rate, "Share of players with follow data");

    auto* report = app.add_subcommand("report", "Render a stored JSON report as TSV or CSV");
    report->add_option("--in", opt.input, "JSON report written by evaluate or temporal")->required();
    report->add_option("--format", opt.format, "tsv or csv (default tsv)");
    report->add_option("--out", opt.out, "Output path (default standard output)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitUsage;
    }

    try {
        Runner runner(opt, out);
        if (ingest->parsed()) {
            return runner.ingest();
        }
        if (featurize->parsed()) {
            return runner.featurize();
        }
        if (netstats->parsed()) {
            return runner.netstats();
        }
        if (centrality->parsed()) {
            return runner.centrality();
        }
        if (evaluate->parsed()) {
            return runner.evaluate();
        }
        if (temporal->parsed()) {
            return runner.temporal();
        }
        if (synth->parsed()) {
            return runner.synth();
        }
        if (report->parsed()) {
            return runner.report();
        }
    } catch (const Error& e) {
        report_error(err, e);
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << nlohmann::json{{"error", "Internal"}, {"message", e.what()}}.dump() << '\n';
        return kExitData;
    }
    return kExitUsage;
}

} // namespace rosterflow::cli
