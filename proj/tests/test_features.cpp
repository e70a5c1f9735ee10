#include <catch_amalgamated.hpp>

#include "rosterflow/features.hpp"
#include "support.hpp"

using namespace rosterflow;
using features::Outcome;
using features::Position;

namespace {

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

std::size_t mlb(std::string_view code) { return *FranchiseTable(LeagueKind::MLB).index_of(code); }

} // namespace

TEST_CASE("positions merge per league", "[features]") {
    CHECK(features::merge_positions("SS", LeagueKind::MLB) == Position::Fielder);
    CHECK(features::merge_positions("C", LeagueKind::MLB) == Position::Catcher);
    CHECK(features::merge_positions("SP", LeagueKind::MLB) == Position::Pitcher);
    CHECK(features::merge_positions("FD", LeagueKind::MLB) == Position::Fielder);
    CHECK(features::merge_positions("PG", LeagueKind::NBA) == Position::PG);
    CHECK(features::merge_positions("C", LeagueKind::NBA) == Position::C);
    CHECK(kind_of([] { features::merge_positions("QB", LeagueKind::NBA); }) == ErrorKind::UnknownPosition);
    CHECK(kind_of([] { features::merge_positions("SS", LeagueKind::NBA); }) == ErrorKind::UnknownPosition);
}

TEST_CASE("Stanton and Cousins career rows", "[features]") {
    auto stanton = support::store_from_text(LeagueKind::MLB, support::stanton_players());
    features::EngineeredLeague s(stanton);
    const auto* row = s.find("stanton", 2017);
    REQUIRE(row);
    CHECK(row->outcome.leave());
    CHECK(row->outcome.kind == Outcome::Kind::Switch);
    CHECK(*row->outcome.team == mlb("NYY"));
    CHECK(row->career_length == 8);
    CHECK(s.find("stanton", 2016)->career_length == 7);
    CHECK(s.find("stanton", 2016)->outcome.kind == Outcome::Kind::Stay);
    CHECK(s.find("stanton", 2009)->career_length == 0);

    auto cousins = support::store_from_text(LeagueKind::NBA, support::cousins_players());
    features::EngineeredLeague c(cousins);
    const auto* dc = c.find("cousins", 2018);
    REQUIRE(dc);
    CHECK(dc->outcome.kind == Outcome::Kind::Switch);
    CHECK(cousins.franchises().codes()[*dc->outcome.team] == "GSW");
    CHECK(dc->career_length == 7);
    CHECK(c.find("cousins", 2017)->career_length == 6);
}

TEST_CASE("career length counts dataset seasons, not calendar years", "[features]") {
    auto store = support::store_from_text(LeagueKind::MLB, "player_id,season,team\na,2010,NYY\na,2012,NYY\n");
    auto career = features::compute_career_length(store.player("a"));
    CHECK(career.at(2010) == 0);
    CHECK(career.at(2012) == 1);

    auto out = features::compute_leave_target(store.player("a"));
    CHECK(out.at(2010).kind == Outcome::Kind::Retire);
    CHECK(out.at(2012).kind == Outcome::Kind::Retire);
}

TEST_CASE("leave and target are exhaustive and exclusive", "[features]") {
    Rng rng(17);
    FranchiseTable franchises(LeagueKind::MLB);
    std::string text = "player_id,season,team\n";
    for (int p = 0; p < 40; ++p) {
        for (int y = 2002; y <= 2018; ++y) {
            if (rng.bernoulli(0.7)) {
                text += "p" + std::to_string(p) + "," + std::to_string(y) + "," +
                        franchises.codes()[rng.below(4)] + "\n";
            }
        }
    }
    auto store = support::store_from_text(LeagueKind::MLB, text);
    features::EngineeredLeague eng(store);
    for (const auto& row : eng.rows()) {
        const auto& ps = *row.base;
        auto next = std::find_if(store.player(ps.player_id).begin(), store.player(ps.player_id).end(),
                                 [&](const league::PlayerSeason& q) { return q.season == ps.season + 1; });
        bool present = next != store.player(ps.player_id).end();
        if (!present) {
            CHECK(row.outcome.kind == Outcome::Kind::Retire);
            CHECK_FALSE(row.outcome.team);
        } else if (next->team_index == ps.team_index) {
            CHECK(row.outcome.kind == Outcome::Kind::Stay);
            CHECK_FALSE(row.outcome.leave());
        } else {
            CHECK(row.outcome.kind == Outcome::Kind::Switch);
            CHECK(*row.outcome.team == next->team_index);
            CHECK(*row.outcome.team != ps.team_index);
        }
    }
    for (const auto& s : features::summarize_transitions(eng)) {
        CHECK(s.leaving == s.retiring + s.switched);
        CHECK(s.leaving <= s.players);
    }
}

TEST_CASE("affinity counts followed players per destination roster", "[features]") {
    auto store = support::store_from_text(LeagueKind::MLB,
                                          "player_id,season,team\n"
                                          "owner,2010,ATL\nowner,2011,BOS\n"
                                          "q1,2010,BOS\nq2,2010,BOS\nq3,2010,CHC\nmate,2010,ATL\n"
                                          "loner,2010,ATL\nloner,2011,CHC\n",
                                          "follower,followee\nowner,q1\nowner,q2\nowner,q3\nowner,mate\n");
    features::FeatureContext ctx(store);
    const auto& eng = ctx.engineered();
    auto aff = features::compute_affinity(*eng.find("owner", 2010), ctx.graph(), eng.rosters());
    CHECK(aff.weights[mlb("BOS")] == 2);
    CHECK(aff.weights[mlb("CHC")] == 1);
    CHECK(aff.weights[mlb("ATL")] == 0);
    CHECK(aff.total() == 3);

    auto none = features::compute_affinity(*eng.find("loner", 2010), ctx.graph(), eng.rosters());
    CHECK(none.total() == 0);

    CHECK(kind_of([&] { features::compute_affinity(*eng.find("q1", 2010), ctx.graph(), eng.rosters()); }) ==
          ErrorKind::OwnerNotTransitioning);
}

TEST_CASE("mid-season movers cannot own an MLB affinity vector", "[features]") {
    auto store = support::store_from_text(LeagueKind::MLB,
                                          "player_id,season,team,mid_season_move\n"
                                          "m,2010,ATL,1\nm,2011,BOS,0\nq,2010,BOS,0\n",
                                          "follower,followee\nm,q\n");
    features::FeatureContext ctx(store);
    const auto& eng = ctx.engineered();
    CHECK(kind_of([&] { features::compute_affinity(*eng.find("m", 2010), ctx.graph(), eng.rosters()); }) ==
          ErrorKind::OwnerNotTransitioning);
    CHECK(kind_of([&] { features::assemble_dataset(ctx, features::FeatureSet::parse("twitter"), 2010, 2010); }) ==
          ErrorKind::EmptyDataset);
}

TEST_CASE("affinity matches a brute-force double loop on random toys", "[features]") {
    const std::vector<std::string> teams{"ATL", "BOS", "CHC"};
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        std::string players = "player_id,season,team\n";
        std::map<std::pair<std::string, int>, std::string> team_of;
        for (int p = 0; p < 10; ++p) {
            std::string id = "p" + std::to_string(p);
            for (int y : {2010, 2011}) {
                std::string t = teams[rng.below(3)];
                team_of[{id, y}] = t;
                players += id + "," + std::to_string(y) + "," + t + "\n";
            }
        }
        std::string follows = "follower,followee\n";
        std::vector<std::pair<std::string, std::string>> edges;
        for (int a = 0; a < 10; ++a) {
            for (int b = 0; b < 10; ++b) {
                if (a != b && rng.bernoulli(0.3)) {
                    edges.emplace_back("p" + std::to_string(a), "p" + std::to_string(b));
                    follows += edges.back().first + "," + edges.back().second + "\n";
                }
            }
        }
        auto store = support::store_from_text(LeagueKind::MLB, players, follows);
        features::FeatureContext ctx(store);
        for (const auto& row : ctx.engineered().rows()) {
            if (row.outcome.kind != Outcome::Kind::Switch) {
                continue;
            }
            const auto& owner = row.base->player_id;
            const int season = row.base->season;
            auto aff = features::compute_affinity(row, ctx.graph(), ctx.engineered().rosters());
            std::array<int, 30> expected{};
            for (const auto& [from, to] : edges) {
                if (from != owner) {
                    continue;
                }
                for (const auto& t : teams) {
                    if (t != row.base->team.code && team_of[{to, season}] == t) {
                        ++expected[mlb(t)];
                    }
                }
            }
            CHECK(aff.weights == expected);
            CHECK(aff.weights[row.base->team_index] == 0);
            auto node = ctx.graph().find(owner);
            CHECK(static_cast<std::size_t>(aff.total()) <= (node ? ctx.graph().out_degree(*node) : 0));
        }
    }
}

TEST_CASE("feature sets parse flag lists", "[features]") {
    auto fs = features::FeatureSet::parse("team,twitter");
    CHECK(fs.team);
    CHECK(fs.twitter);
    CHECK_FALSE(fs.position);
    CHECK(fs.label() == "team,twitter");
    CHECK(features::FeatureSet::parse("social") == features::FeatureSet::parse("twitter"));
    auto all = features::FeatureSet::parse("all");
    CHECK(all.position);
    CHECK(all.twitter);
    CHECK_FALSE(all.college);
    CHECK(kind_of([] { features::FeatureSet::parse("height"); }) == ErrorKind::BadConfig);
    CHECK(kind_of([] { features::FeatureSet::parse(""); }) == ErrorKind::BadConfig);
}

TEST_CASE("dataset manifests and joins", "[features]") {
    auto store = support::store_from_text(LeagueKind::MLB,
                                          "player_id,season,position,team,FLD_PCT,BT_RUNS\n"
                                          "a,2010,SS,ATL,.95,\na,2011,SS,BOS,.96,3\n"
                                          "b,2010,P,BOS,.90,2\nb,2011,P,CHC,.91,1\n"
                                          "c,2010,C,CHC,,4\nc,2011,C,CHC,.97,5\n",
                                          "follower,followee\na,b\nb,c\n",
                                          "season,team,rank,valuation_musd\n2010,ATL,3,1500\n2010,BOS,1,2800\n");
    features::FeatureContext ctx(store);

    auto career = features::assemble_dataset(ctx, features::FeatureSet::parse("career_length"), 2010, 2010);
    CHECK(career.width() == 1);
    CHECK(career.rows() == 2);
    CHECK(career.columns == std::vector<std::string>{"career_length"});

    auto rv = features::assemble_dataset(ctx, features::FeatureSet::parse("rank_value"), 2010, 2010);
    REQUIRE(rv.rows() == 2);
    CHECK(rv.columns == std::vector<std::string>{"rank", "valuation_musd"});
    // Rows are ordered by (season, player_id): a on ATL, b on BOS.
    CHECK(rv.row(0)[0] == 3.0);
    CHECK(rv.row(0)[1] == 1500.0);
    CHECK(rv.row(1)[0] == 1.0);
    CHECK(rv.row(1)[1] == 2800.0);
    CHECK(rv.labels == std::vector<int>{static_cast<int>(mlb("BOS")), static_cast<int>(mlb("CHC"))});

    auto perf = features::assemble_dataset(ctx, features::FeatureSet::parse("performance"), 2010, 2010);
    CHECK(perf.width() == 8);
    // a's BT_RUNS is missing: the 2010 median over b and c (2, 4) is imputed and flagged.
    auto r0 = perf.row(0);
    CHECK(r0[2] == 3.0);
    CHECK(r0[6] == 1.0);
    CHECK(r0[4] == 0.0);

    auto pos = features::assemble_dataset(ctx, features::FeatureSet::parse("position,team"), 2010, 2010);
    CHECK(pos.width() == 33);
    for (std::size_t r = 0; r < pos.rows(); ++r) {
        CHECK(pos.labels[r] != static_cast<int>(pos.meta[r].current_team));
    }

    auto tw = features::assemble_dataset(ctx, features::FeatureSet::parse("twitter"), 2010, 2010);
    CHECK(tw.width() == 30);
    CHECK(tw.row(0)[mlb("BOS")] == 1.0);

    auto again = features::assemble_dataset(ctx, features::FeatureSet::parse("position,team"), 2010, 2010);
    CHECK(again.values == pos.values);
    CHECK(again.fingerprint() == pos.fingerprint());
    CHECK(pos.fingerprint() != career.fingerprint());

    CHECK(kind_of([&] { features::assemble_dataset(ctx, features::FeatureSet::parse("team"), 2012, 2013); }) ==
          ErrorKind::EmptyDataset);
}

TEST_CASE("college block vocabulary comes from training rows", "[features]") {
    auto store = support::store_from_text(LeagueKind::NBA,
                                          "player_id,season,team\n"
                                          "a,2010,ATL\na,2011,BOS\nb,2010,BOS\nb,2011,CHI\nc,2010,CHI\nc,2011,ATL\n");
    league::LeagueStore with_colleges(store.config(), store.franchises(), store.seasons(), {}, {},
                                      {{"a", "Duke"}, {"b", "Kentucky"}, {"c", "N/A"}});
    features::FeatureContext ctx(with_colleges);
    auto ds = features::assemble_dataset(ctx, features::FeatureSet::parse("college"), 2010, 2010);
    CHECK(ds.columns == std::vector<std::string>{"college=Duke", "college=Kentucky", "college=N/A", "college=OTHER"});
    std::vector<std::size_t> train{0, 2};
    auto refit = features::refit_college_block(ds, train);
    CHECK(refit.columns == std::vector<std::string>{"college=Duke", "college=N/A", "college=OTHER"});
    CHECK(refit.row(1)[2] == 1.0);
}
