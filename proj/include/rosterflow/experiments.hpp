#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "rosterflow/core.hpp"
#include "rosterflow/error.hpp"
#include "rosterflow/features.hpp"
#include "rosterflow/league_data.hpp"
#include "rosterflow/ml/model.hpp"
#include "rosterflow/util/parallel.hpp"
#include "rosterflow/util/random.hpp"

namespace rosterflow::experiments {

using features::FeatureSet;
using ml::Algorithm;

/// Chance accuracy once the current team is masked out.
inline constexpr double kBaseline = 1.0 / 29.0;

inline double accuracy(std::span<const int> predictions, std::span<const int> truths) {
    if (predictions.size() != truths.size()) {
        throw Error(ErrorKind::LengthMismatch, std::to_string(predictions.size()) + " predictions vs " +
                                                   std::to_string(truths.size()) + " truths");
    }
    if (predictions.empty()) {
        throw Error(ErrorKind::Empty, "no predictions");
    }
    std::size_t hits = 0;
    for (std::size_t i = 0; i < predictions.size(); ++i) {
        hits += predictions[i] == truths[i] ? 1 : 0;
    }
    return static_cast<double>(hits) / static_cast<double>(predictions.size());
}

inline std::string format_percent(double fraction) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", 100.0 * fraction);
    return buf;
}

/// Default accuracy-matrix rows: each non-social set
/// with and without twitter, twitter alone, and everything.
inline std::vector<FeatureSet> summary_feature_sets(LeagueKind league) {
    std::vector<FeatureSet> out;
    for (const char* base : {"position", "team", "career_length", "performance", "rank_value"}) {
        out.push_back(FeatureSet::parse(base));
        out.push_back(FeatureSet::parse(std::string(base) + ",twitter"));
    }
    out.push_back(FeatureSet::parse("twitter"));
    if (league == LeagueKind::NBA) {
        out.push_back(FeatureSet::parse("college"));
        out.push_back(FeatureSet::parse("twitter,college"));
    }
    out.push_back(FeatureSet::parse("position,team,career_length,performance,rank_value"));
    out.push_back(FeatureSet::parse("all"));
    return out;
}

/// The ten flag rows of the temporal report, in row order.
inline std::vector<FeatureSet> temporal_feature_sets() {
    return {
        FeatureSet::parse("twitter,performance,career_length,position,rank_value"),
        FeatureSet::parse("twitter,performance"),
        FeatureSet::parse("twitter,career_length"),
        FeatureSet::parse("twitter,position"),
        FeatureSet::parse("twitter,rank_value"),
        FeatureSet::parse("twitter"),
        FeatureSet::parse("performance"),
        FeatureSet::parse("career_length"),
        FeatureSet::parse("position"),
        FeatureSet::parse("rank_value"),
    };
}

struct ExperimentSpec {
    LeagueKind league = LeagueKind::MLB;
    int first_season = 0;
    int last_season = 0;
    std::vector<FeatureSet> feature_sets;
    std::vector<Algorithm> algorithms;
    double split_fraction = 0.7;
    std::size_t repetitions = 10;
    std::uint64_t seed = 0;
    ml::Hyperparameters hyperparameters;
    // Evaluate every feature set on players with follow data only.
    bool social_population = true;
    std::size_t jobs = 1;

    static ExperimentSpec defaults(const league::LeagueConfig& cfg) {
        ExperimentSpec s;
        s.league = cfg.kind;
        s.first_season = cfg.first_season;
        s.last_season = cfg.last_season;
        s.feature_sets = summary_feature_sets(cfg.kind);
        s.algorithms.assign(ml::kTableAlgorithms.begin(), ml::kTableAlgorithms.end());
        return s;
    }

    void validate() const {
        if (!(split_fraction > 0.0 && split_fraction < 1.0)) {
            throw Error(ErrorKind::BadConfig, "split fraction must lie in (0, 1)");
        }
        if (repetitions < 1) {
            throw Error(ErrorKind::BadConfig, "repetitions must be >= 1");
        }
        if (feature_sets.empty() || algorithms.empty()) {
            throw Error(ErrorKind::BadConfig, "experiment needs feature sets and algorithms");
        }
        if (first_season > last_season) {
            throw Error(ErrorKind::BadConfig, "empty season range");
        }
        hyperparameters.validate();
    }
};

struct Cell {
    Algorithm algorithm = Algorithm::RandomForest;
    double mean = 0.0;
    std::vector<double> per_repetition;

    bool operator==(const Cell&) const = default;
};

struct FeatureRow {
    FeatureSet feature_set;
    std::size_t rows = 0;
    std::size_t train_rows = 0;
    std::size_t test_rows = 0;
    std::vector<Cell> cells; // aligned with the report's algorithm list
    Algorithm top = Algorithm::RandomForest;
    double top_accuracy = 0.0;

    bool operator==(const FeatureRow&) const = default;
};

struct AccuracyReport {
    LeagueKind league = LeagueKind::MLB;
    int first_season = 0;
    int last_season = 0;
    double split_fraction = 0.7;
    std::size_t repetitions = 10;
    std::uint64_t seed = 0;
    std::vector<Algorithm> algorithms;
    std::vector<FeatureRow> rows;
    double baseline = kBaseline;

    bool operator==(const AccuracyReport&) const = default;
};

/// Uniform random per-row split; both halves sorted ascending.
struct Split {
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

inline Split split_rows(std::size_t n, double fraction, std::uint64_t seed) {
    if (n < 2) {
        throw Error(ErrorKind::EmptyDataset, "need at least 2 rows to split, got " + std::to_string(n));
    }
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(idx);
    auto cut = static_cast<std::size_t>(std::llround(fraction * static_cast<double>(n)));
    cut = std::clamp<std::size_t>(cut, 1, n - 1);
    Split s;
    s.train.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(cut));
    s.test.assign(idx.begin() + static_cast<std::ptrdiff_t>(cut), idx.end());
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

/// Fits on `train` and scores masked predictions over `test`.
inline double evaluate_split(const features::LabeledDataset& full, const Split& split, Algorithm alg,
                             std::uint64_t seed, const ml::Hyperparameters& hp, std::size_t jobs = 1) {
    auto ds = features::refit_college_block(full, split.train);
    auto train = ds.subset(split.train);
    auto model = ml::fit(alg, train, seed, hp, jobs);
    const auto fp = ds.fingerprint();
    std::vector<int> pred, truth;
    pred.reserve(split.test.size());
    for (std::size_t i : split.test) {
        pred.push_back(ml::predict(model, ds.row(i), fp, static_cast<int>(ds.meta[i].current_team)));
        truth.push_back(ds.labels[i]);
    }
    return accuracy(pred, truth);
}

inline std::uint64_t repetition_seed(std::uint64_t master, std::size_t rep) { return derive_seed(master, rep); }

namespace detail {

inline AccuracyReport run_on_datasets(const ExperimentSpec& spec,
                                      const std::vector<features::LabeledDataset>& datasets) {
    AccuracyReport report;
    report.league = spec.league;
    report.first_season = spec.first_season;
    report.last_season = spec.last_season;
    report.split_fraction = spec.split_fraction;
    report.repetitions = spec.repetitions;
    report.seed = spec.seed;
    report.algorithms = spec.algorithms;

    const std::size_t F = datasets.size();
    const std::size_t A = spec.algorithms.size();
    const std::size_t R = spec.repetitions;
    std::vector<std::vector<Split>> splits(F);
    for (std::size_t f = 0; f < F; ++f) {
        for (std::size_t r = 0; r < R; ++r) {
            splits[f].push_back(split_rows(datasets[f].rows(), spec.split_fraction, repetition_seed(spec.seed, r)));
        }
    }
    std::vector<double> acc(F * A * R, 0.0);
    parallel_for(F * A * R, spec.jobs, [&](std::size_t job) {
        std::size_t f = job / (A * R);
        std::size_t a = (job / R) % A;
        std::size_t r = job % R;
        std::uint64_t fit_seed = derive_seed(repetition_seed(spec.seed, r), 1);
        acc[job] = evaluate_split(datasets[f], splits[f][r], spec.algorithms[a], fit_seed, spec.hyperparameters);
    });
    for (std::size_t f = 0; f < F; ++f) {
        FeatureRow row;
        row.feature_set = datasets[f].feature_set;
        row.rows = datasets[f].rows();
        row.train_rows = splits[f].front().train.size();
        row.test_rows = splits[f].front().test.size();
        for (std::size_t a = 0; a < A; ++a) {
            Cell cell;
            cell.algorithm = spec.algorithms[a];
            double sum = 0.0;
            for (std::size_t r = 0; r < R; ++r) {
                double v = acc[(f * A + a) * R + r];
                cell.per_repetition.push_back(v);
                sum += v;
            }
            cell.mean = sum / static_cast<double>(R);
            row.cells.push_back(std::move(cell));
        }
        // Ties go to the algorithm listed first in enumeration order.
        const Cell* best = nullptr;
        for (const auto& c : row.cells) {
            if (!best || c.mean > best->mean ||
                (c.mean == best->mean && static_cast<int>(c.algorithm) < static_cast<int>(best->algorithm))) {
                best = &c;
            }
        }
        row.top = best->algorithm;
        row.top_accuracy = best->mean;
        report.rows.push_back(std::move(row));
    }
    return report;
}

} // namespace detail

inline AccuracyReport run_experiment(const ExperimentSpec& spec, const features::FeatureContext& ctx) {
    spec.validate();
    std::vector<features::LabeledDataset> datasets;
    for (const auto& fs : spec.feature_sets) {
        datasets.push_back(
            features::assemble_dataset(ctx, fs, spec.first_season, spec.last_season, spec.social_population));
    }
    return detail::run_on_datasets(spec, datasets);
}

inline AccuracyReport run_experiment(const ExperimentSpec& spec, const league::LeagueStore& store) {
    features::FeatureContext ctx(store);
    return run_experiment(spec, ctx);
}

struct TemporalReport {
    int boundary = 0;
    AccuracyReport early; // [first, boundary]
    AccuracyReport late;  // (boundary, last]
    AccuracyReport full;  // [first, last]

    bool operator==(const TemporalReport&) const = default;
};

/// Spec with the temporal report defaults: the ten flag rows, Extra Trees.
inline ExperimentSpec temporal_defaults(const league::LeagueConfig& cfg) {
    auto s = ExperimentSpec::defaults(cfg);
    s.feature_sets = temporal_feature_sets();
    s.algorithms = {Algorithm::ExtraTrees};
    return s;
}

inline TemporalReport temporal_split_experiment(const ExperimentSpec& spec, const features::FeatureContext& ctx,
                                                int boundary) {
    spec.validate();
    if (boundary < spec.first_season || boundary >= spec.last_season) {
        throw Error(ErrorKind::EmptyPeriod, "boundary " + std::to_string(boundary) + " leaves an empty period in [" +
                                                std::to_string(spec.first_season) + ", " +
                                                std::to_string(spec.last_season) + "]");
    }
    auto period = [&](int lo, int hi) {
        ExperimentSpec s = spec;
        s.first_season = lo;
        s.last_season = hi;
        try {
            return run_experiment(s, ctx);
        } catch (const Error& e) {
            if (e.kind() == ErrorKind::EmptyDataset) {
                throw Error(ErrorKind::EmptyPeriod,
                            "period " + std::to_string(lo) + "-" + std::to_string(hi) + ": " + e.what());
            }
            throw;
        }
    };
    TemporalReport out;
    out.boundary = boundary;
    out.early = period(spec.first_season, boundary);
    out.late = period(boundary + 1, spec.last_season);
    out.full = period(spec.first_season, spec.last_season);
    return out;
}

inline TemporalReport temporal_split_experiment(const ExperimentSpec& spec, const league::LeagueStore& store,
                                                int boundary) {
    features::FeatureContext ctx(store);
    return temporal_split_experiment(spec, ctx, boundary);
}

// ---- rendering ----

enum class ReportFormat { TSV, CSV, JSON };

inline ReportFormat parse_report_format(std::string_view s) {
    if (s == "tsv") {
        return ReportFormat::TSV;
    }
    if (s == "csv") {
        return ReportFormat::CSV;
    }
    if (s == "json") {
        return ReportFormat::JSON;
    }
    throw Error(ErrorKind::BadConfig, "unknown report format '" + std::string(s) + "'");
}

/// Format implied by a file extension; TSV when unrecognized.
inline ReportFormat format_for_path(std::string_view path) {
    auto dot = path.rfind('.');
    if (dot != std::string_view::npos) {
        auto ext = path.substr(dot + 1);
        if (ext == "csv") {
            return ReportFormat::CSV;
        }
        if (ext == "json") {
            return ReportFormat::JSON;
        }
    }
    return ReportFormat::TSV;
}

inline nlohmann::json report_to_json(const AccuracyReport& r) {
    nlohmann::json j;
    j["league"] = std::string(to_string(r.league));
    j["first_season"] = r.first_season;
    j["last_season"] = r.last_season;
    j["split_fraction"] = r.split_fraction;
    j["repetitions"] = r.repetitions;
    j["seed"] = r.seed;
    j["baseline"] = r.baseline;
    std::vector<std::string> algs;
    for (auto a : r.algorithms) {
        algs.emplace_back(ml::to_string(a));
    }
    j["algorithms"] = algs;
    j["rows"] = nlohmann::json::array();
    for (const auto& row : r.rows) {
        nlohmann::json jr;
        jr["features"] = row.feature_set.label();
        jr["rows"] = row.rows;
        jr["train_rows"] = row.train_rows;
        jr["test_rows"] = row.test_rows;
        jr["top"] = std::string(ml::to_string(row.top));
        jr["top_accuracy"] = row.top_accuracy;
        jr["cells"] = nlohmann::json::array();
        for (const auto& c : row.cells) {
            jr["cells"].push_back(
                {{"algorithm", std::string(ml::to_string(c.algorithm))}, {"mean", c.mean}, {"per_repetition", c.per_repetition}});
        }
        j["rows"].push_back(std::move(jr));
    }
    return j;
}

inline AccuracyReport report_from_json(const nlohmann::json& j) {
    try {
        AccuracyReport r;
        auto league = parse_league(j.at("league").get<std::string>());
        if (!league) {
            throw Error(ErrorKind::BadConfig, "malformed report: unknown league");
        }
        r.league = *league;
        j.at("first_season").get_to(r.first_season);
        j.at("last_season").get_to(r.last_season);
        j.at("split_fraction").get_to(r.split_fraction);
        j.at("repetitions").get_to(r.repetitions);
        j.at("seed").get_to(r.seed);
        j.at("baseline").get_to(r.baseline);
        for (const auto& a : j.at("algorithms")) {
            r.algorithms.push_back(ml::parse_algorithm(a.get<std::string>()));
        }
        for (const auto& jr : j.at("rows")) {
            FeatureRow row;
            row.feature_set = FeatureSet::parse(jr.at("features").get<std::string>());
            jr.at("rows").get_to(row.rows);
            jr.at("train_rows").get_to(row.train_rows);
            jr.at("test_rows").get_to(row.test_rows);
            row.top = ml::parse_algorithm(jr.at("top").get<std::string>());
            jr.at("top_accuracy").get_to(row.top_accuracy);
            for (const auto& jc : jr.at("cells")) {
                Cell c;
                c.algorithm = ml::parse_algorithm(jc.at("algorithm").get<std::string>());
                jc.at("mean").get_to(c.mean);
                jc.at("per_repetition").get_to(c.per_repetition);
                row.cells.push_back(std::move(c));
            }
            r.rows.push_back(std::move(row));
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorKind::BadConfig, std::string("malformed report: ") + e.what());
    }
}

/// Table layout: one row per feature set, one column per algorithm (mean
/// accuracy in percent), then the top algorithm and its accuracy, closed by a
/// baseline row.
inline std::vector<std::vector<std::string>> report_table(const AccuracyReport& r) {
    std::vector<std::vector<std::string>> t;
    std::vector<std::string> header{"features", "social"};
    for (auto a : r.algorithms) {
        header.emplace_back(ml::to_string(a));
    }
    header.emplace_back("TopMLA");
    header.emplace_back("accuracy");
    t.push_back(header);
    for (const auto& row : r.rows) {
        std::vector<std::string> line{row.feature_set.label(), row.feature_set.twitter ? "yes" : "no"};
        for (const auto& c : row.cells) {
            line.push_back(format_percent(c.mean));
        }
        line.emplace_back(ml::to_string(row.top));
        line.push_back(format_percent(row.top_accuracy));
        t.push_back(std::move(line));
    }
    std::vector<std::string> base{"baseline", "no"};
    for (std::size_t a = 0; a < r.algorithms.size(); ++a) {
        base.push_back(format_percent(r.baseline));
    }
    base.emplace_back("-");
    base.push_back(format_percent(r.baseline));
    t.push_back(std::move(base));
    return t;
}

inline void write_table(std::ostream& out, const std::vector<std::vector<std::string>>& table, char sep) {
    for (const auto& line : table) {
        csv::write_record(out, line, sep);
    }
}

inline void emit_report(std::ostream& out, const AccuracyReport& r, ReportFormat format) {
    switch (format) {
    case ReportFormat::TSV: write_table(out, report_table(r), '\t'); break;
    case ReportFormat::CSV: write_table(out, report_table(r), ','); break;
    case ReportFormat::JSON: out << report_to_json(r).dump(2) << '\n'; break;
    }
}

inline nlohmann::json temporal_to_json(const TemporalReport& t) {
    return {{"boundary", t.boundary},
            {"early", report_to_json(t.early)},
            {"late", report_to_json(t.late)},
            {"full", report_to_json(t.full)}};
}

inline TemporalReport temporal_from_json(const nlohmann::json& j) {
    TemporalReport t;
    t.boundary = j.at("boundary").get<int>();
    t.early = report_from_json(j.at("early"));
    t.late = report_from_json(j.at("late"));
    t.full = report_from_json(j.at("full"));
    return t;
}

/// Temporal table layout: flag columns then one accuracy column per
/// (period, algorithm).
inline std::vector<std::vector<std::string>> temporal_table(const TemporalReport& t) {
    using features::Flag;
    std::vector<std::vector<std::string>> out;
    std::vector<std::string> header{"row", "SocD", "PerD", "CareerL", "Position", "TeamRV"};
    auto period_name = [](int lo, int hi) { return std::to_string(lo) + "-" + std::to_string(hi); };
    const std::pair<const AccuracyReport*, std::string> periods[] = {
        {&t.early, period_name(t.early.first_season, t.early.last_season)},
        {&t.late, period_name(t.late.first_season, t.late.last_season)},
        {&t.full, period_name(t.full.first_season, t.full.last_season)},
    };
    for (const auto& [rep, name] : periods) {
        for (auto a : rep->algorithms) {
            header.push_back(rep->algorithms.size() == 1 ? name : name + ":" + std::string(ml::cli_name(a)));
        }
    }
    out.push_back(header);
    auto yn = [](bool b) { return std::string(b ? "yes" : "no"); };
    for (std::size_t i = 0; i < t.full.rows.size(); ++i) {
        const auto& fs = t.full.rows[i].feature_set;
        std::vector<std::string> line{std::to_string(i + 1), yn(fs.twitter),  yn(fs.performance),
                                      yn(fs.career_length),  yn(fs.position), yn(fs.rank_value)};
        for (const auto& [rep, name] : periods) {
            for (const auto& c : rep->rows[i].cells) {
                line.push_back(format_percent(c.mean));
            }
        }
        out.push_back(std::move(line));
    }
    return out;
}

inline void emit_temporal(std::ostream& out, const TemporalReport& t, ReportFormat format) {
    switch (format) {
    case ReportFormat::TSV: write_table(out, temporal_table(t), '\t'); break;
    case ReportFormat::CSV: write_table(out, temporal_table(t), ','); break;
    case ReportFormat::JSON: out << temporal_to_json(t).dump(2) << '\n'; break;
    }
}

} // namespace rosterflow::experiments
