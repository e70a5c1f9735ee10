#include <catch_amalgamated.hpp>

#include <fstream>
#include <sstream>

#include "rosterflow/features.hpp"
#include "rosterflow/league_data.hpp"
#include "support.hpp"

using namespace rosterflow;
using Catch::Matchers::WithinAbs;

namespace {

league::PlayerSeasonParse parse_mlb(const std::string& text) {
    return league::parse_player_seasons(support::table(text), league::LeagueConfig::defaults(LeagueKind::MLB),
                                        FranchiseTable(LeagueKind::MLB));
}

league::PlayerSeasonParse parse_nba(const std::string& text) {
    return league::parse_player_seasons(support::table(text), league::LeagueConfig::defaults(LeagueKind::NBA),
                                        FranchiseTable(LeagueKind::NBA));
}

template <typename Fn>
ErrorKind kind_of(Fn&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.kind();
    }
    FAIL("no error thrown");
    return ErrorKind::Empty;
}

// One full season: every franchise fields `per_team` players.
std::string full_season(LeagueKind kind, int season, std::size_t per_team, std::size_t skip_team = 99) {
    FranchiseTable franchises(kind);
    std::string text = "player_id,season,team\n";
    for (std::size_t t = 0; t < franchises.size(); ++t) {
        if (t == skip_team) {
            continue;
        }
        for (std::size_t k = 0; k < per_team; ++k) {
            text += "p" + std::to_string(t * 100 + k) + "," + std::to_string(season) + "," + franchises.codes()[t] + "\n";
        }
    }
    return text;
}

} // namespace

TEST_CASE("player rows parse into typed seasons", "[league_data]") {
    auto parsed = parse_mlb("player_id,season,position,team,FLD_PCT,OWN_PCT,BT_RUNS,BT_WINS\n"
                            "stanton,2017,FD,MIA,.998,.735,59.8,5.6\n");
    REQUIRE(parsed.seasons.size() == 1);
    const auto& ps = parsed.seasons[0];
    CHECK(ps.team.code == "MIA");
    CHECK(ps.season == 2017);
    CHECK_THAT(*ps.metrics.at("FLD_PCT"), WithinAbs(0.998, 1e-12));
    CHECK_THAT(*ps.metrics.at("BT_RUNS"), WithinAbs(59.8, 1e-12));
    CHECK(parsed.rejected.empty());

    auto nba = parse_nba("player_id,season,team,PER,WS,BPM\ncousins,2018,NOP,22.6,4.7,4.7\n");
    REQUIRE(nba.seasons.size() == 1);
    CHECK(nba.seasons[0].team.code == "NOP");
    CHECK_THAT(*nba.seasons[0].metrics.at("PER"), WithinAbs(22.6, 1e-12));

    CHECK(parse_mlb("player_id,season,team\n").seasons.empty());
}

TEST_CASE("relocated franchises resolve to one canonical code", "[league_data]") {
    auto parsed = parse_mlb("player_id,season,team\na,2010,FLA\nb,2012,MIA\nc,2004,MON\nd,2004,ANA\n");
    REQUIRE(parsed.seasons.size() == 4);
    CHECK(parsed.seasons[0].team.code == "MIA");
    CHECK(parsed.seasons[1].team.code == "MIA");
    CHECK(parsed.seasons[2].team.code == "WSN");
    CHECK(parsed.seasons[3].team.code == "LAA");
    // FLA stopped being a valid code after the rename.
    CHECK(kind_of([] { parse_mlb("player_id,season,team\na,2013,FLA\n"); }) == ErrorKind::UnknownTeamCode);

    auto nba = parse_nba("player_id,season,team\na,2010,NJN\nb,2008,SEA\nc,2004,NOH\n");
    CHECK(nba.seasons[0].team.code == "BRK");
    CHECK(nba.seasons[1].team.code == "OKC");
    CHECK(nba.seasons[2].team.code == "NOP");
}

TEST_CASE("metric scales and unit-interval checks", "[league_data]") {
    auto pct = parse_mlb("player_id,season,team,FLD_PCT:percent\na,2010,NYY,99.8\n");
    CHECK_THAT(*pct.seasons[0].metrics.at("FLD_PCT"), WithinAbs(0.998, 1e-12));

    auto out_of_range = parse_mlb("player_id,season,team,OWN_PCT\na,2016,MIA,1.2\n");
    CHECK_FALSE(out_of_range.seasons[0].metrics.at("OWN_PCT").has_value());
    CHECK(out_of_range.warnings.size() == 1);

    auto missing = parse_mlb("player_id,season,team,BT_RUNS\na,2016,MIA,\n");
    CHECK_FALSE(missing.seasons[0].metrics.at("BT_RUNS").has_value());
    CHECK(missing.warnings.empty());
}

TEST_CASE("player file errors carry row numbers", "[league_data]") {
    try {
        parse_mlb("player_id,season,team\na,2010,NYY\nb,2010,XXX\n");
        FAIL("expected UnknownTeamCode");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::UnknownTeamCode);
        CHECK(e.row() == 2u);
    }
    CHECK(kind_of([] { parse_mlb("player_id,season,team\na,2010,NYY\na,2010,BOS\n"); }) ==
          ErrorKind::DuplicatePlayerSeason);
    CHECK(kind_of([] { parse_mlb("id,season,team\n"); }) == ErrorKind::MalformedHeader);
    CHECK(kind_of([] { parse_mlb("player_id,season,team,HOMERS\n"); }) == ErrorKind::MalformedHeader);

    auto rejected = parse_mlb("player_id,season,team\na,abc,NYY\nb,1990,NYY\nc,2010,NYY\n");
    CHECK(rejected.seasons.size() == 1);
    REQUIRE(rejected.rejected.size() == 2);
    CHECK(rejected.rejected[0].row == 1);
    CHECK(rejected.rejected[1].row == 2);
}

TEST_CASE("follow edges collapse duplicates and drop bad endpoints", "[league_data]") {
    std::set<std::string> roster{"a", "b"};
    auto dup = league::parse_follow_edges(support::table("follower,followee\na,b\na,b\nb,a\n"), roster);
    CHECK(dup.edges.size() == 2);
    CHECK(dup.duplicates == 1);

    auto loop = league::parse_follow_edges(support::table("follower,followee\na,a\n"), roster);
    CHECK(loop.edges.empty());
    CHECK(loop.self_loops == 1);

    auto unknown = league::parse_follow_edges(support::table("follower,followee\na,x\n"), roster);
    CHECK(unknown.edges.empty());
    CHECK(unknown.unresolved == 1);

    CHECK(kind_of([&] { league::parse_follow_edges(support::table("follower,followee\na\n"), roster); }) ==
          ErrorKind::MalformedRow);
}

TEST_CASE("team fitness rows validate rank and valuation", "[league_data]") {
    FranchiseTable nba(LeagueKind::NBA);
    auto rows = league::parse_team_fitness(support::table(support::cousins_fitness()), nba);
    REQUIRE(rows.size() == 3);
    CHECK(rows[1].team.code == "NOP");
    CHECK(rows[1].rank == 8);
    CHECK(rows[1].valuation == 1000.0);
    CHECK(rows[2].team.code == "GSW");
    CHECK(rows[2].rank == 2);
    CHECK(rows[2].valuation == 3500.0);

    auto parse = [&](const std::string& body) {
        return league::parse_team_fitness(support::table("season,team,rank,valuation_musd\n" + body), nba);
    };
    CHECK(kind_of([&] { parse("2018,NOP,0,1000\n"); }) == ErrorKind::InvalidRank);
    CHECK(kind_of([&] { parse("2018,NOP,3,0\n"); }) == ErrorKind::NonPositiveValuation);
    CHECK(kind_of([&] { parse("2018,NOP,3,10\n2018,NOP,4,11\n"); }) == ErrorKind::DuplicateFitnessRow);
}

TEST_CASE("validation counts teams and coverage", "[league_data]") {
    auto store = support::store_from_text(LeagueKind::MLB, full_season(LeagueKind::MLB, 2017, 2),
                                          "follower,followee\np0,p100\np100,p0\n");
    auto report = league::validate_league(store);
    REQUIRE(report.seasons.size() == 1);
    CHECK(report.seasons[0].teams == 30);
    CHECK(report.seasons[0].players == 60);
    CHECK(report.players_with_follows == 2);
    CHECK_THAT(report.follow_coverage(), WithinAbs(2.0 / 60.0, 1e-12));

    auto short_store = support::store_from_text(LeagueKind::MLB, full_season(LeagueKind::MLB, 2017, 1, 5));
    CHECK(kind_of([&] { league::validate_league(short_store); }) == ErrorKind::TeamCountMismatch);
}

TEST_CASE("stores survive a write/parse round trip", "[league_data]") {
    auto store = support::store_from_text(LeagueKind::MLB, support::stanton_players(), {},
                                          "season,team,rank,valuation_musd\n2017,MIA,20,940\n");
    std::ostringstream players, fitness;
    league::write_player_seasons(players, store);
    league::write_team_fitness(fitness, store.fitness());
    auto again = support::store_from_text(LeagueKind::MLB, players.str(), {}, fitness.str());
    CHECK(again.seasons() == store.seasons());
    CHECK(again.fitness() == store.fitness());

    std::ostringstream players2;
    league::write_player_seasons(players2, again);
    CHECK(players2.str() == players.str());
}

TEST_CASE("shipped franchise file matches the built-in alias table", "[league_data]") {
    std::ifstream in(std::string(ROSTERFLOW_SOURCE_DIR) + "/data/franchises.csv");
    REQUIRE(in);
    auto aliases = league::parse_franchise_aliases(csv::read(in));
    CHECK(aliases == default_franchise_aliases());
}

TEST_CASE("transition summary identity on a single player", "[league_data]") {
    auto store = support::store_from_text(LeagueKind::MLB, "player_id,season,team\nsolo,2010,NYY\n");
    features::EngineeredLeague eng(store);
    auto summary = features::summarize_transitions(eng);
    REQUIRE(summary.size() == 1);
    CHECK(summary[0] == features::TransitionSummary{2010, 1, 1, 1, 0});
}
