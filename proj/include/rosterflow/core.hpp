#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rosterflow/error.hpp"

namespace rosterflow {

enum class LeagueKind { MLB, NBA };

constexpr std::string_view to_string(LeagueKind kind) {
    return kind == LeagueKind::MLB ? "MLB" : "NBA";
}

inline std::optional<LeagueKind> parse_league(std::string_view text) {
    std::string lower;
    for (char ch : text) {
        lower.push_back(static_cast<char>(ch >= 'A' && ch <= 'Z' ? ch - 'A' + 'a' : ch));
    }
    if (lower == "mlb") {
        return LeagueKind::MLB;
    }
    if (lower == "nba") {
        return LeagueKind::NBA;
    }
    return std::nullopt;
}

inline constexpr std::string_view kVersion = "0.1.0";

inline constexpr std::size_t kTeamsPerLeague = 30;

/// Canonical franchise code. Ordering is by code, which is also the
/// tie-break order used for predictions.
struct TeamId {
    std::string code;
    LeagueKind league = LeagueKind::MLB;

    friend bool operator==(const TeamId& a, const TeamId& b) {
        return a.league == b.league && a.code == b.code;
    }
    friend std::strong_ordering operator<=>(const TeamId& a, const TeamId& b) {
        if (auto c = a.league <=> b.league; c != 0) {
            return c;
        }
        return a.code.compare(b.code) <=> 0;
    }
};

namespace detail {

// Alphabetical, so a team's index doubles as its tie-break rank.
inline constexpr std::array<std::string_view, kTeamsPerLeague> kMlbCodes = {
    "ARI", "ATL", "BAL", "BOS", "CHC", "CHW", "CIN", "CLE", "COL", "DET",
    "HOU", "KCR", "LAA", "LAD", "MIA", "MIL", "MIN", "NYM", "NYY", "OAK",
    "PHI", "PIT", "SDP", "SEA", "SFG", "STL", "TBR", "TEX", "TOR", "WSN"};

inline constexpr std::array<std::string_view, kTeamsPerLeague> kNbaCodes = {
    "ATL", "BOS", "BRK", "CHI", "CHO", "CLE", "DAL", "DEN", "DET", "GSW",
    "HOU", "IND", "LAC", "LAL", "MEM", "MIA", "MIL", "MIN", "NOP", "NYK",
    "OKC", "ORL", "PHI", "PHO", "POR", "SAC", "SAS", "TOR", "UTA", "WAS"};

} // namespace detail

/// One (raw code, season window) -> canonical code rule.
struct FranchiseAlias {
    LeagueKind league;
    std::string raw;
    int first_season;
    int last_season;
    std::string canonical;

    bool operator==(const FranchiseAlias&) const = default;
};

inline std::vector<FranchiseAlias> default_franchise_aliases() {
    using L = LeagueKind;
    return {
        {L::MLB, "ANA", 0, 2004, "LAA"},  {L::MLB, "FLA", 0, 2011, "MIA"},
        {L::MLB, "MON", 0, 2004, "WSN"},  {L::MLB, "TBD", 0, 2007, "TBR"},
        {L::MLB, "CWS", 0, 9999, "CHW"},  {L::MLB, "KC", 0, 9999, "KCR"},
        {L::MLB, "SD", 0, 9999, "SDP"},   {L::MLB, "SF", 0, 9999, "SFG"},
        {L::MLB, "TB", 0, 9999, "TBR"},   {L::MLB, "WSH", 0, 9999, "WSN"},
        {L::NBA, "NJN", 0, 2012, "BRK"},  {L::NBA, "BKN", 0, 9999, "BRK"},
        {L::NBA, "CHH", 0, 2002, "NOP"},  {L::NBA, "NOH", 2003, 2013, "NOP"},
        {L::NBA, "NOK", 2006, 2007, "NOP"}, {L::NBA, "CHA", 2005, 2014, "CHO"},
        {L::NBA, "SEA", 0, 2008, "OKC"},  {L::NBA, "VAN", 0, 2001, "MEM"},
        {L::NBA, "PHX", 0, 9999, "PHO"},  {L::NBA, "GS", 0, 9999, "GSW"},
    };
}

/// The league's canonical 30-franchise table plus relocation/rename rules.
class FranchiseTable {
public:
    explicit FranchiseTable(LeagueKind league,
                            std::vector<FranchiseAlias> aliases = default_franchise_aliases())
        : league_(league) {
        const auto& codes = league == LeagueKind::MLB ? detail::kMlbCodes : detail::kNbaCodes;
        for (auto code : codes) {
            codes_.emplace_back(code);
        }
        for (auto& alias : aliases) {
            if (alias.league != league) {
                continue;
            }
            if (!index_of(alias.canonical)) {
                throw Error(ErrorKind::BadConfig,
                            "franchise alias " + alias.raw + " maps to unknown code " + alias.canonical);
            }
            aliases_.push_back(std::move(alias));
        }
    }

    LeagueKind league() const { return league_; }
    std::size_t size() const { return codes_.size(); }
    const std::vector<std::string>& codes() const { return codes_; }
    const std::vector<FranchiseAlias>& aliases() const { return aliases_; }

    TeamId team(std::size_t index) const { return TeamId{codes_.at(index), league_}; }

    std::optional<std::size_t> index_of(std::string_view code) const {
        auto it = std::lower_bound(codes_.begin(), codes_.end(), code);
        if (it == codes_.end() || *it != code) {
            return std::nullopt;
        }
        return static_cast<std::size_t>(it - codes_.begin());
    }

    /// Resolves a raw code seen in `season` to its canonical franchise index.
    std::optional<std::size_t> resolve(std::string_view raw, int season) const {
        if (auto idx = index_of(raw)) {
            return idx;
        }
        for (const auto& alias : aliases_) {
            if (alias.raw == raw && season >= alias.first_season && season <= alias.last_season) {
                return index_of(alias.canonical);
            }
        }
        return std::nullopt;
    }

private:
    LeagueKind league_;
    std::vector<std::string> codes_;
    std::vector<FranchiseAlias> aliases_;
};

} // namespace rosterflow
