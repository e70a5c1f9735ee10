#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "rosterflow/error.hpp"
#include "rosterflow/league_data.hpp"
#include "rosterflow/util/parallel.hpp"

namespace rosterflow::graph {

using NodeId = std::uint32_t;

/// Simple directed graph over player ids. Node ids follow ascending player id.
class FollowGraph {
public:
    FollowGraph() = default;

    /// `extra_nodes` declares players that may have no edges.
    static FollowGraph build(const league::FollowEdgeList& edges, std::span<const std::string> extra_nodes = {}) {
        std::set<std::string> names(extra_nodes.begin(), extra_nodes.end());
        for (const auto& e : edges.edges) {
            names.insert(e.follower);
            names.insert(e.followee);
        }
        FollowGraph g;
        g.ids_.assign(names.begin(), names.end());
        for (NodeId i = 0; i < g.ids_.size(); ++i) {
            g.index_.emplace(g.ids_[i], i);
        }
        g.out_.resize(g.ids_.size());
        g.in_.resize(g.ids_.size());
        for (const auto& e : edges.edges) {
            NodeId u = g.index_.at(e.follower);
            NodeId v = g.index_.at(e.followee);
            if (u == v) {
                continue;
            }
            g.out_[u].push_back(v);
        }
        for (NodeId u = 0; u < g.out_.size(); ++u) {
            auto& adj = g.out_[u];
            std::sort(adj.begin(), adj.end());
            adj.erase(std::unique(adj.begin(), adj.end()), adj.end());
            g.edge_count_ += adj.size();
            for (NodeId v : adj) {
                g.in_[v].push_back(u);
            }
        }
        return g;
    }

    /// Builds directly from index pairs over `node_count` anonymous nodes
    /// named by zero-padded index (so id order equals index order).
    static FollowGraph from_pairs(std::size_t node_count, std::span<const std::pair<NodeId, NodeId>> pairs) {
        league::FollowEdgeList edges;
        std::vector<std::string> names(node_count);
        for (std::size_t i = 0; i < node_count; ++i) {
            std::string s = std::to_string(i);
            names[i] = std::string(6 - std::min<std::size_t>(6, s.size()), '0') + s;
        }
        std::set<league::FollowEdge> unique;
        for (auto [u, v] : pairs) {
            if (u != v) {
                unique.insert({names.at(u), names.at(v)});
            }
        }
        edges.edges.assign(unique.begin(), unique.end());
        return build(edges, names);
    }

    std::size_t node_count() const { return ids_.size(); }
    std::size_t edge_count() const { return edge_count_; }
    const std::vector<std::string>& ids() const { return ids_; }
    const std::vector<NodeId>& out_neighbors(NodeId u) const { return out_[u]; }
    const std::vector<NodeId>& in_neighbors(NodeId u) const { return in_[u]; }
    std::size_t out_degree(NodeId u) const { return out_[u].size(); }
    std::size_t in_degree(NodeId u) const { return in_[u].size(); }

    std::optional<NodeId> find(const std::string& id) const {
        auto it = index_.find(id);
        if (it == index_.end()) {
            return std::nullopt;
        }
        return it->second;
    }

    bool has_edge(NodeId u, NodeId v) const { return std::binary_search(out_[u].begin(), out_[u].end(), v); }

private:
    std::vector<std::string> ids_;
    std::unordered_map<std::string, NodeId> index_;
    std::vector<std::vector<NodeId>> out_;
    std::vector<std::vector<NodeId>> in_;
    std::size_t edge_count_ = 0;
};

inline FollowGraph build_graph(const league::FollowEdgeList& edges, std::span<const std::string> extra_nodes = {}) {
    return FollowGraph::build(edges, extra_nodes);
}

inline constexpr int kUnreachable = -1;

/// Directed hop distances from `source`; kUnreachable where no path exists.
inline std::vector<int> bfs_distances(const FollowGraph& g, NodeId source) {
    std::vector<int> dist(g.node_count(), kUnreachable);
    std::vector<NodeId> queue;
    queue.reserve(g.node_count());
    dist[source] = 0;
    queue.push_back(source);
    for (std::size_t head = 0; head < queue.size(); ++head) {
        NodeId u = queue[head];
        for (NodeId v : g.out_neighbors(u)) {
            if (dist[v] == kUnreachable) {
                dist[v] = dist[u] + 1;
                queue.push_back(v);
            }
        }
    }
    return dist;
}

/// Strongly connected components (iterative Tarjan). Returns a component
/// label per node; labels are dense from 0.
inline std::vector<std::size_t> strongly_connected_components(const FollowGraph& g) {
    const std::size_t n = g.node_count();
    constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();
    std::vector<std::size_t> index(n, kUnset), low(n, 0), comp(n, kUnset);
    std::vector<bool> on_stack(n, false);
    std::vector<NodeId> stack;
    std::vector<std::pair<NodeId, std::size_t>> call; // node, next neighbor position
    std::size_t counter = 0;
    std::size_t components = 0;
    for (NodeId root = 0; root < n; ++root) {
        if (index[root] != kUnset) {
            continue;
        }
        call.emplace_back(root, 0);
        while (!call.empty()) {
            auto& [u, pos] = call.back();
            if (pos == 0 && index[u] == kUnset) {
                index[u] = low[u] = counter++;
                stack.push_back(u);
                on_stack[u] = true;
            }
            const auto& adj = g.out_neighbors(u);
            if (pos < adj.size()) {
                NodeId v = adj[pos++];
                if (index[v] == kUnset) {
                    call.emplace_back(v, 0);
                } else if (on_stack[v]) {
                    low[u] = std::min(low[u], index[v]);
                }
                continue;
            }
            if (low[u] == index[u]) {
                NodeId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = components;
                } while (w != u);
                ++components;
            }
            NodeId finished = u;
            call.pop_back();
            if (!call.empty()) {
                NodeId parent = call.back().first;
                low[parent] = std::min(low[parent], low[finished]);
            }
        }
    }
    return comp;
}

struct GraphStats {
    std::size_t n = 0;
    std::size_t m = 0;
    double c = 0.0;    // mean degree m/n
    double S = 0.0;    // largest SCC fraction
    double ell = 0.0;  // mean directed distance over connected ordered pairs (0 if none)
    double C = 0.0;    // global clustering on the undirected projection
    double r = 0.0;    // reciprocity
    double a = 0.0;    // total-degree assortativity on the undirected projection
};

namespace detail {

/// Sorted undirected neighbor lists (union of in and out, no self).
inline std::vector<std::vector<NodeId>> undirected_projection(const FollowGraph& g) {
    std::vector<std::vector<NodeId>> adj(g.node_count());
    for (NodeId u = 0; u < g.node_count(); ++u) {
        const auto& out = g.out_neighbors(u);
        const auto& in = g.in_neighbors(u);
        std::set_union(out.begin(), out.end(), in.begin(), in.end(), std::back_inserter(adj[u]));
    }
    return adj;
}

inline constexpr std::size_t kReductionChunks = 64;

} // namespace detail

inline GraphStats graph_stats(const FollowGraph& g, std::size_t jobs = 1) {
    const std::size_t n = g.node_count();
    if (n == 0) {
        throw Error(ErrorKind::DegenerateGraph, "graph has no nodes");
    }
    GraphStats st;
    st.n = n;
    st.m = g.edge_count();
    st.c = static_cast<double>(st.m) / static_cast<double>(n);

    auto comp = strongly_connected_components(g);
    std::vector<std::size_t> sizes(n, 0);
    for (auto c : comp) {
        ++sizes[c];
    }
    st.S = static_cast<double>(*std::max_element(sizes.begin(), sizes.end())) / static_cast<double>(n);

    // Distance sums are integers, so the chunked reduction is exact.
    std::vector<std::uint64_t> dist_sum(n, 0), pair_count(n, 0);
    parallel_for(n, jobs, [&](std::size_t s) {
        auto dist = bfs_distances(g, static_cast<NodeId>(s));
        for (std::size_t t = 0; t < n; ++t) {
            if (t != s && dist[t] != kUnreachable) {
                dist_sum[s] += static_cast<std::uint64_t>(dist[t]);
                ++pair_count[s];
            }
        }
    });
    std::uint64_t total_dist = 0, total_pairs = 0;
    for (std::size_t s = 0; s < n; ++s) {
        total_dist += dist_sum[s];
        total_pairs += pair_count[s];
    }
    st.ell = total_pairs == 0 ? 0.0 : static_cast<double>(total_dist) / static_cast<double>(total_pairs);

    std::size_t reciprocated = 0;
    for (NodeId u = 0; u < n; ++u) {
        for (NodeId v : g.out_neighbors(u)) {
            if (g.has_edge(v, u)) {
                ++reciprocated;
            }
        }
    }
    st.r = st.m == 0 ? 0.0 : static_cast<double>(reciprocated) / static_cast<double>(st.m);

    auto und = detail::undirected_projection(g);
    std::uint64_t closed = 0;  // ordered (center, pair) closures = 3 x triangles
    std::uint64_t triples = 0; // connected triples
    for (NodeId u = 0; u < n; ++u) {
        const auto& nu = und[u];
        std::uint64_t d = nu.size();
        triples += d * (d - (d > 0 ? 1 : 0)) / 2;
        for (std::size_t i = 0; i < nu.size(); ++i) {
            const auto& ni = und[nu[i]];
            for (std::size_t j = i + 1; j < nu.size(); ++j) {
                if (std::binary_search(ni.begin(), ni.end(), nu[j])) {
                    ++closed;
                }
            }
        }
    }
    st.C = triples == 0 ? 0.0 : static_cast<double>(closed) / static_cast<double>(triples);

    // Pearson correlation over both orientations of every undirected edge.
    std::vector<double> degree(n);
    for (NodeId u = 0; u < n; ++u) {
        degree[u] = static_cast<double>(g.in_degree(u) + g.out_degree(u));
    }
    double sum = 0.0;
    std::size_t ends = 0;
    for (NodeId u = 0; u < n; ++u) {
        sum += degree[u] * static_cast<double>(und[u].size());
        ends += und[u].size();
    }
    if (ends > 0) {
        double mean = sum / static_cast<double>(ends);
        double cov = 0.0, var = 0.0;
        for (NodeId u = 0; u < n; ++u) {
            double du = degree[u] - mean;
            var += du * du * static_cast<double>(und[u].size());
            for (NodeId v : und[u]) {
                cov += du * (degree[v] - mean);
            }
        }
        st.a = var <= 0.0 ? 0.0 : cov / var;
    }
    return st;
}

enum class CentralityKind { Degree, InDegree, OutDegree, Eigenvector, Closeness, Betweenness };

constexpr std::string_view to_string(CentralityKind kind) {
    switch (kind) {
    case CentralityKind::Degree: return "degree";
    case CentralityKind::InDegree: return "in_degree";
    case CentralityKind::OutDegree: return "out_degree";
    case CentralityKind::Eigenvector: return "eigenvector";
    case CentralityKind::Closeness: return "closeness";
    case CentralityKind::Betweenness: return "betweenness";
    }
    return "unknown";
}

inline std::optional<CentralityKind> parse_centrality_kind(std::string_view text) {
    std::string name(text);
    std::replace(name.begin(), name.end(), '-', '_');
    for (auto k : {CentralityKind::Degree, CentralityKind::InDegree, CentralityKind::OutDegree,
                   CentralityKind::Eigenvector, CentralityKind::Closeness, CentralityKind::Betweenness}) {
        if (to_string(k) == name) {
            return k;
        }
    }
    return std::nullopt;
}

struct CentralityScores {
    CentralityKind kind = CentralityKind::Degree;
    std::vector<std::string> ids;
    std::vector<double> scores; // aligned with ids
};

struct EigenvectorOptions {
    double damping = 0.85;
    double tolerance = 1e-10; // L1 change between normalized iterates
    std::size_t max_iterations = 10000;
    std::vector<double> start; // optional positive start vector
};

/// Damped in-edge eigenvector centrality: dominant eigenvector of
/// damping * A^T + (1 - damping)/n * J, scaled to max 1.
inline std::vector<double> eigenvector_centrality(const FollowGraph& g, const EigenvectorOptions& opt = {}) {
    const std::size_t n = g.node_count();
    if (n == 0) {
        throw Error(ErrorKind::DegenerateGraph, "graph has no nodes");
    }
    if (g.edge_count() == 0) {
        throw Error(ErrorKind::NoEdges, "eigenvector centrality needs at least one edge");
    }
    std::vector<double> x(n, 1.0 / static_cast<double>(n));
    if (!opt.start.empty()) {
        if (opt.start.size() != n) {
            throw Error(ErrorKind::InvalidHyperparameter, "start vector has wrong length");
        }
        double total = 0.0;
        for (double v : opt.start) {
            total += v;
        }
        for (std::size_t i = 0; i < n; ++i) {
            x[i] = opt.start[i] / total;
        }
    }
    const double teleport = (1.0 - opt.damping) / static_cast<double>(n);
    std::vector<double> y(n);
    for (std::size_t iter = 0; iter < opt.max_iterations; ++iter) {
        double mass = 0.0;
        for (double v : x) {
            mass += v;
        }
        double total = 0.0;
        for (NodeId v = 0; v < n; ++v) {
            double acc = 0.0;
            for (NodeId u : g.in_neighbors(v)) {
                acc += x[u];
            }
            y[v] = opt.damping * acc + teleport * mass;
            total += y[v];
        }
        double change = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            y[i] /= total;
            change += std::abs(y[i] - x[i]);
        }
        x.swap(y);
        if (change < opt.tolerance) {
            break;
        }
    }
    double top = *std::max_element(x.begin(), x.end());
    for (double& v : x) {
        v /= top;
    }
    return x;
}

/// reachable(i) / sum of finite out-distances from i; 0 when nothing is reachable.
inline std::vector<double> closeness_centrality(const FollowGraph& g, std::size_t jobs = 1) {
    const std::size_t n = g.node_count();
    std::vector<double> out(n, 0.0);
    parallel_for(n, jobs, [&](std::size_t s) {
        auto dist = bfs_distances(g, static_cast<NodeId>(s));
        std::uint64_t reach = 0, total = 0;
        for (std::size_t t = 0; t < n; ++t) {
            if (t != s && dist[t] != kUnreachable) {
                ++reach;
                total += static_cast<std::uint64_t>(dist[t]);
            }
        }
        out[s] = total == 0 ? 0.0 : static_cast<double>(reach) / static_cast<double>(total);
    });
    return out;
}

/// Brandes accumulation over ordered (s, t) pairs on the directed graph.
inline std::vector<double> betweenness_centrality(const FollowGraph& g, std::size_t jobs = 1) {
    const std::size_t n = g.node_count();
    const std::size_t chunks = std::min(detail::kReductionChunks, std::max<std::size_t>(n, 1));
    std::vector<std::vector<double>> partial(chunks, std::vector<double>(n, 0.0));
    parallel_for(chunks, jobs, [&](std::size_t chunk) {
        auto& acc = partial[chunk];
        std::vector<double> sigma(n), delta(n);
        std::vector<int> dist(n);
        std::vector<NodeId> order;
        order.reserve(n);
        for (std::size_t s = chunk; s < n; s += chunks) {
            std::fill(sigma.begin(), sigma.end(), 0.0);
            std::fill(delta.begin(), delta.end(), 0.0);
            std::fill(dist.begin(), dist.end(), kUnreachable);
            order.clear();
            sigma[s] = 1.0;
            dist[s] = 0;
            order.push_back(static_cast<NodeId>(s));
            for (std::size_t head = 0; head < order.size(); ++head) {
                NodeId u = order[head];
                for (NodeId v : g.out_neighbors(u)) {
                    if (dist[v] == kUnreachable) {
                        dist[v] = dist[u] + 1;
                        order.push_back(v);
                    }
                    if (dist[v] == dist[u] + 1) {
                        sigma[v] += sigma[u];
                    }
                }
            }
            for (std::size_t k = order.size(); k-- > 0;) {
                NodeId w = order[k];
                for (NodeId v : g.in_neighbors(w)) {
                    if (dist[v] != kUnreachable && dist[v] + 1 == dist[w]) {
                        delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w]);
                    }
                }
                if (w != s) {
                    acc[w] += delta[w];
                }
            }
        }
    });
    std::vector<double> out(n, 0.0);
    for (const auto& part : partial) {
        for (std::size_t i = 0; i < n; ++i) {
            out[i] += part[i];
        }
    }
    return out;
}

inline CentralityScores centrality(const FollowGraph& g, CentralityKind kind, std::size_t jobs = 1) {
    if (g.node_count() == 0) {
        throw Error(ErrorKind::DegenerateGraph, "graph has no nodes");
    }
    CentralityScores out;
    out.kind = kind;
    out.ids = g.ids();
    const std::size_t n = g.node_count();
    switch (kind) {
    case CentralityKind::Degree:
    case CentralityKind::InDegree:
    case CentralityKind::OutDegree:
        out.scores.resize(n);
        for (NodeId u = 0; u < n; ++u) {
            std::size_t d = kind == CentralityKind::InDegree    ? g.in_degree(u)
                            : kind == CentralityKind::OutDegree ? g.out_degree(u)
                                                                : g.in_degree(u) + g.out_degree(u);
            out.scores[u] = static_cast<double>(d);
        }
        break;
    case CentralityKind::Eigenvector:
        out.scores = eigenvector_centrality(g);
        break;
    case CentralityKind::Closeness:
        out.scores = closeness_centrality(g, jobs);
        break;
    case CentralityKind::Betweenness:
        out.scores = betweenness_centrality(g, jobs);
        break;
    }
    return out;
}

/// Highest scores first; equal scores by ascending player id.
inline std::vector<std::pair<std::string, double>> top_k(const CentralityScores& scores, std::size_t k) {
    if (k == 0) {
        throw Error(ErrorKind::InvalidHyperparameter, "k must be >= 1");
    }
    std::vector<std::pair<std::string, double>> items;
    items.reserve(scores.ids.size());
    for (std::size_t i = 0; i < scores.ids.size(); ++i) {
        items.emplace_back(scores.ids[i], scores.scores[i]);
    }
    std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
        if (a.second != b.second) {
            return a.second > b.second;
        }
        return a.first < b.first;
    });
    if (items.size() > k) {
        items.resize(k);
    }
    return items;
}

/// (degree value, node count) for every observed value, ascending.
inline std::vector<std::pair<std::size_t, std::size_t>> degree_histogram(const FollowGraph& g, CentralityKind kind) {
    if (kind != CentralityKind::Degree && kind != CentralityKind::InDegree && kind != CentralityKind::OutDegree) {
        throw Error(ErrorKind::InvalidHyperparameter, "degree histogram needs a degree kind");
    }
    std::map<std::size_t, std::size_t> counts;
    for (NodeId u = 0; u < g.node_count(); ++u) {
        std::size_t d = kind == CentralityKind::InDegree    ? g.in_degree(u)
                        : kind == CentralityKind::OutDegree ? g.out_degree(u)
                                                            : g.in_degree(u) + g.out_degree(u);
        ++counts[d];
    }
    return {counts.begin(), counts.end()};
}

struct HistogramBin {
    double lower = 0.0;
    double upper = 0.0;
    std::size_t count = 0;
};

/// Equal-width bins over [min, max]; the last bin is closed on the right.
inline std::vector<HistogramBin> value_histogram(std::span<const double> values, std::size_t bins) {
    if (values.empty() || bins == 0) {
        return {};
    }
    auto [lo_it, hi_it] = std::minmax_element(values.begin(), values.end());
    double lo = *lo_it, hi = *hi_it;
    std::vector<HistogramBin> out(bins);
    double width = hi > lo ? (hi - lo) / static_cast<double>(bins) : 1.0;
    for (std::size_t b = 0; b < bins; ++b) {
        out[b].lower = lo + width * static_cast<double>(b);
        out[b].upper = b + 1 == bins ? std::max(hi, lo + width * static_cast<double>(bins))
                                     : lo + width * static_cast<double>(b + 1);
    }
    for (double v : values) {
        auto b = static_cast<std::size_t>((v - lo) / width);
        ++out[std::min(b, bins - 1)].count;
    }
    return out;
}

} // namespace rosterflow::graph
