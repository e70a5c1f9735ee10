#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <limits>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "rosterflow/features.hpp"
#include "rosterflow/league_data.hpp"
#include "rosterflow/socialgraph.hpp"
#include "rosterflow/util/csv.hpp"
#include "rosterflow/util/random.hpp"

namespace support {

using namespace rosterflow;

inline csv::Table table(const std::string& text) {
    std::istringstream in(text);
    return csv::read(in);
}

inline league::LeagueStore store_from_text(LeagueKind kind, const std::string& players,
                                           const std::string& follows = {}, const std::string& fitness = {}) {
    auto cfg = league::LeagueConfig::defaults(kind);
    FranchiseTable franchises(kind);
    auto parsed = league::parse_player_seasons(table(players), cfg, franchises);
    std::set<std::string> roster;
    for (const auto& ps : parsed.seasons) {
        roster.insert(ps.player_id);
    }
    league::FollowEdgeList edges;
    if (!follows.empty()) {
        edges = league::parse_follow_edges(table(follows), roster);
    }
    std::vector<league::TeamFitness> fit;
    if (!fitness.empty()) {
        fit = league::parse_team_fitness(table(fitness), franchises);
    }
    return league::LeagueStore(cfg, franchises, std::move(parsed.seasons), std::move(edges), std::move(fit));
}

// Stanton: eight earlier seasons with the Marlins (filed as FLA before the
// 2012 rename), then the 2016-2018 rows of the career table.
inline std::string stanton_players() {
    std::string text = "player_id,season,position,team,FLD_PCT,OWN_PCT,BT_WINS,BT_RUNS\n";
    for (int y = 2009; y <= 2015; ++y) {
        text += "stanton," + std::to_string(y) + ",FD," + (y <= 2011 ? "FLA" : "MIA") + ",.98,.6,10,1\n";
    }
    text += "stanton,2016,FD,MIA,.982,1.2,.585,11.9\n";
    text += "stanton,2017,FD,MIA,.998,.735,59.8,5.6\n";
    text += "stanton,2018,FD,NYY,.992,.621,26.7,2.6\n";
    return text;
}

inline std::string cousins_players() {
    std::string text = "player_id,season,position,team,PER,WS,BPM\n";
    for (int y = 2011; y <= 2016; ++y) {
        text += "cousins," + std::to_string(y) + ",C,SAC,20,3,2\n";
    }
    text += "cousins,2017,C,NOP,23.2,1.6,5.5\n";
    text += "cousins,2018,C,NOP,22.6,4.7,4.7\n";
    text += "cousins,2019,C,GSW,21.4,2.4,3\n";
    return text;
}

inline std::string cousins_fitness() {
    return "season,team,rank,valuation_musd\n2017,NOP,20,750\n2018,NOP,8,1000\n2019,GSW,2,3500\n";
}

// ---- graph oracles ----

struct Digraph {
    std::size_t n = 0;
    std::vector<std::vector<bool>> adj;
    std::vector<std::pair<graph::NodeId, graph::NodeId>> edges;

    graph::FollowGraph build() const { return graph::FollowGraph::from_pairs(n, edges); }
};

inline Digraph random_digraph(Rng& rng, std::size_t n, double p) {
    Digraph g;
    g.n = n;
    g.adj.assign(n, std::vector<bool>(n, false));
    for (std::size_t u = 0; u < n; ++u) {
        for (std::size_t v = 0; v < n; ++v) {
            if (u != v && rng.bernoulli(p)) {
                g.adj[u][v] = true;
                g.edges.emplace_back(static_cast<graph::NodeId>(u), static_cast<graph::NodeId>(v));
            }
        }
    }
    return g;
}

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

inline std::vector<std::vector<int>> floyd_warshall(const Digraph& g) {
    std::vector<std::vector<int>> d(g.n, std::vector<int>(g.n, kInf));
    for (std::size_t u = 0; u < g.n; ++u) {
        d[u][u] = 0;
        for (std::size_t v = 0; v < g.n; ++v) {
            if (g.adj[u][v]) {
                d[u][v] = 1;
            }
        }
    }
    for (std::size_t k = 0; k < g.n; ++k) {
        for (std::size_t i = 0; i < g.n; ++i) {
            for (std::size_t j = 0; j < g.n; ++j) {
                if (d[i][k] + d[k][j] < d[i][j]) {
                    d[i][j] = d[i][k] + d[k][j];
                }
            }
        }
    }
    return d;
}

struct StatsOracle {
    std::size_t m = 0;
    std::size_t largest_scc = 0;
    double ell = 0.0;
    double C = 0.0;
    double r = 0.0;
    double a = 0.0;
};

inline StatsOracle brute_stats(const Digraph& g) {
    StatsOracle o;
    o.m = g.edges.size();
    auto d = floyd_warshall(g);

    // Components from mutual reachability.
    std::vector<bool> placed(g.n, false);
    for (std::size_t u = 0; u < g.n; ++u) {
        if (placed[u]) {
            continue;
        }
        std::size_t size = 0;
        for (std::size_t v = 0; v < g.n; ++v) {
            if (d[u][v] < kInf && d[v][u] < kInf) {
                placed[v] = true;
                ++size;
            }
        }
        o.largest_scc = std::max(o.largest_scc, size);
    }

    long total = 0, pairs = 0;
    for (std::size_t s = 0; s < g.n; ++s) {
        for (std::size_t t = 0; t < g.n; ++t) {
            if (s != t && d[s][t] < kInf) {
                total += d[s][t];
                ++pairs;
            }
        }
    }
    o.ell = pairs == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(pairs);

    std::vector<std::vector<bool>> und(g.n, std::vector<bool>(g.n, false));
    for (auto [u, v] : g.edges) {
        und[u][v] = und[v][u] = true;
    }
    long triangles = 0, triples = 0;
    for (std::size_t i = 0; i < g.n; ++i) {
        for (std::size_t j = i + 1; j < g.n; ++j) {
            for (std::size_t k = j + 1; k < g.n; ++k) {
                if (und[i][j] && und[j][k] && und[i][k]) {
                    ++triangles;
                }
            }
        }
    }
    // A connected triple is a center plus an unordered pair of its neighbors.
    for (std::size_t c = 0; c < g.n; ++c) {
        for (std::size_t i = 0; i < g.n; ++i) {
            for (std::size_t j = i + 1; j < g.n; ++j) {
                if (i != c && j != c && und[c][i] && und[c][j]) {
                    ++triples;
                }
            }
        }
    }
    o.C = triples == 0 ? 0.0 : 3.0 * static_cast<double>(triangles) / static_cast<double>(triples);

    std::size_t recip = 0;
    for (auto [u, v] : g.edges) {
        recip += g.adj[v][u] ? 1 : 0;
    }
    o.r = o.m == 0 ? 0.0 : static_cast<double>(recip) / static_cast<double>(o.m);

    std::vector<double> deg(g.n, 0.0);
    for (auto [u, v] : g.edges) {
        deg[u] += 1.0;
        deg[v] += 1.0;
    }
    std::vector<double> xs, ys;
    for (std::size_t u = 0; u < g.n; ++u) {
        for (std::size_t v = 0; v < g.n; ++v) {
            if (und[u][v]) {
                xs.push_back(deg[u]);
                ys.push_back(deg[v]);
            }
        }
    }
    if (!xs.empty()) {
        double k = static_cast<double>(xs.size());
        double sx = 0, sy = 0, sxx = 0, syy = 0, sxy = 0;
        for (std::size_t i = 0; i < xs.size(); ++i) {
            sx += xs[i];
            sy += ys[i];
            sxx += xs[i] * xs[i];
            syy += ys[i] * ys[i];
            sxy += xs[i] * ys[i];
        }
        double cov = sxy / k - (sx / k) * (sy / k);
        double vx = sxx / k - (sx / k) * (sx / k);
        double vy = syy / k - (sy / k) * (sy / k);
        o.a = (vx <= 1e-15 || vy <= 1e-15) ? 0.0 : cov / std::sqrt(vx * vy);
    }
    return o;
}

inline std::vector<double> brute_closeness(const Digraph& g) {
    auto d = floyd_warshall(g);
    std::vector<double> out(g.n, 0.0);
    for (std::size_t s = 0; s < g.n; ++s) {
        double reach = 0, total = 0;
        for (std::size_t t = 0; t < g.n; ++t) {
            if (t != s && d[s][t] < kInf) {
                reach += 1;
                total += d[s][t];
            }
        }
        out[s] = total == 0 ? 0.0 : reach / total;
    }
    return out;
}

// Enumerates every shortest path explicitly and credits interior vertices.
inline std::vector<double> brute_betweenness(const Digraph& g) {
    auto d = floyd_warshall(g);
    std::vector<double> out(g.n, 0.0);
    std::vector<std::size_t> path;
    for (std::size_t s = 0; s < g.n; ++s) {
        for (std::size_t t = 0; t < g.n; ++t) {
            if (s == t || d[s][t] >= kInf) {
                continue;
            }
            std::vector<std::vector<std::size_t>> paths;
            std::function<void(std::size_t)> walk = [&](std::size_t u) {
                if (u == t) {
                    if (path.size() == static_cast<std::size_t>(d[s][t]) + 1) {
                        paths.push_back(path);
                    }
                    return;
                }
                if (path.size() > static_cast<std::size_t>(d[s][t])) {
                    return;
                }
                for (std::size_t v = 0; v < g.n; ++v) {
                    if (g.adj[u][v] && std::find(path.begin(), path.end(), v) == path.end()) {
                        path.push_back(v);
                        walk(v);
                        path.pop_back();
                    }
                }
            };
            path = {s};
            walk(s);
            for (const auto& p : paths) {
                for (std::size_t i = 1; i + 1 < p.size(); ++i) {
                    out[p[i]] += 1.0 / static_cast<double>(paths.size());
                }
            }
        }
    }
    return out;
}

} // namespace support
