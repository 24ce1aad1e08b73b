#include "gnnsim/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string_view>

namespace gnnsim {

void Graph::check() const {
    if (csr_offsets.size() != num_vertices + 1)
        throw InvariantError("csr_offsets size mismatch");
    if (csr_offsets.front() != 0 || csr_offsets.back() != num_edges)
        throw InvariantError("csr_offsets endpoints mismatch");
    for (std::size_t i = 0; i + 1 < csr_offsets.size(); ++i)
        if (csr_offsets[i] > csr_offsets[i + 1])
            throw InvariantError("csr_offsets not non-decreasing");
    if (csr_neighbors.size() != num_edges)
        throw InvariantError("csr_neighbors size mismatch");
    for (VertexId u : csr_neighbors)
        if (u >= num_vertices) throw InvariantError("neighbor id out of range");
    if (!features.empty() &&
        features.size() != static_cast<std::size_t>(num_vertices) * feature_dim)
        throw InvariantError("feature matrix shape mismatch");
}

std::vector<std::pair<VertexId, VertexId>> Graph::edge_list() const {
    std::vector<std::pair<VertexId, VertexId>> out;
    out.reserve(num_edges);
    for (VertexId v = 0; v < num_vertices; ++v)
        for (VertexId u : in_neighbors(v)) out.emplace_back(u, v);
    return out;
}

void GnnModel::validate() const {
    if (num_layers < 1) throw ConfigError("model: num_layers must be >= 1");
    if (dims.size() != num_layers + 1)
        throw ConfigError("model: dims must have num_layers + 1 entries");
    for (std::size_t d : dims)
        if (d < 1) throw ConfigError("model: all dims must be >= 1");
    if (fanouts.size() != num_layers)
        throw ConfigError("model: fanouts must have num_layers entries");
    for (std::size_t f : fanouts)
        if (f < 1) throw ConfigError("model: all fanouts must be >= 1");
    if (batch_targets < 1) throw ConfigError("model: batch_targets must be >= 1");
}

Graph build_from_edges(std::uint64_t num_vertices,
                       std::vector<std::pair<VertexId, VertexId>> edges,
                       Directedness directedness) {
    if (directedness == Directedness::Undirected) {
        const std::size_t n = edges.size();
        edges.reserve(2 * n);
        for (std::size_t i = 0; i < n; ++i)
            edges.emplace_back(edges[i].second, edges[i].first);
    }

    Graph g;
    g.num_vertices = num_vertices;
    g.num_edges = edges.size();
    g.train_mask.assign(num_vertices, 0);
    g.csr_offsets.assign(num_vertices + 1, 0);
    for (const auto& [u, v] : edges) {
        if (u >= num_vertices || v >= num_vertices)
            throw ConfigError("edge endpoint exceeds vertex count");
        ++g.csr_offsets[v + 1];
    }
    std::partial_sum(g.csr_offsets.begin(), g.csr_offsets.end(),
                     g.csr_offsets.begin());
    g.csr_neighbors.resize(edges.size());
    std::vector<std::uint64_t> cursor(g.csr_offsets.begin(),
                                      g.csr_offsets.end() - 1);
    for (const auto& [u, v] : edges) g.csr_neighbors[cursor[v]++] = u;
    for (VertexId v = 0; v < num_vertices; ++v)
        std::sort(g.csr_neighbors.begin() + g.csr_offsets[v],
                  g.csr_neighbors.begin() + g.csr_offsets[v + 1]);
    return g;
}

namespace {

bool parse_u64(std::string_view tok, std::uint64_t& out) {
    auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), out);
    return ec == std::errc{} && p == tok.data() + tok.size();
}

}  // namespace

Graph load_edge_list(const std::string& path, Directedness directedness) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open edge list: " + path);

    std::vector<std::pair<VertexId, VertexId>> edges;
    std::uint64_t max_id = 0;
    bool any_vertex = false;
    std::uint64_t header_vertices = 0;
    bool have_header = false;

    std::string line;
    std::uint64_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::size_t first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos) continue;
        if (line[first] == '#') {
            std::size_t eq = line.find("vertices=");
            if (eq != std::string::npos) {
                std::uint64_t n = 0;
                std::string rest = line.substr(eq + 9);
                std::istringstream rs(rest);
                if (rs >> n) {
                    header_vertices = n;
                    have_header = true;
                }
            }
            continue;
        }
        std::istringstream ls(line);
        std::string a, b, extra;
        if (!(ls >> a >> b))
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": expected \"src dst\"");
        if (ls >> extra)
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": trailing token \"" + extra + "\"");
        std::uint64_t u = 0, v = 0;
        if (!parse_u64(a, u) || !parse_u64(b, v))
            throw ParseError(path + ":" + std::to_string(line_no) +
                             ": vertex ids must be non-negative integers");
        if (u > std::numeric_limits<VertexId>::max() ||
            v > std::numeric_limits<VertexId>::max())
            throw ConfigError(path + ":" + std::to_string(line_no) +
                              ": vertex id exceeds 32-bit range");
        edges.emplace_back(static_cast<VertexId>(u), static_cast<VertexId>(v));
        max_id = std::max({max_id, u, v});
        any_vertex = true;
    }

    std::uint64_t num_vertices = any_vertex ? max_id + 1 : 0;
    if (have_header) {
        if (header_vertices < num_vertices)
            throw ConfigError(path + ": header vertex count " +
                              std::to_string(header_vertices) +
                              " smaller than max id + 1");
        num_vertices = header_vertices;
    }
    return build_from_edges(num_vertices, std::move(edges), directedness);
}

Graph generate_synthetic(SyntheticKind kind, std::uint64_t num_vertices,
                         std::uint64_t avg_degree, double skew,
                         std::uint64_t seed) {
    if (num_vertices < 1) throw ConfigError("generator: num_vertices must be >= 1");
    if (avg_degree < 1) throw ConfigError("generator: avg_degree must be >= 1");
    if (kind == SyntheticKind::PowerLaw && skew <= 1.0)
        throw ConfigError("generator: power_law needs skew > 1");

    std::vector<std::pair<VertexId, VertexId>> edges;
    if (num_vertices == 1) {
        // Degenerate case: no non-self edges exist, emit an empty edge set.
        return build_from_edges(1, {}, Directedness::Directed);
    }

    const std::uint64_t target_edges = num_vertices * avg_degree;
    edges.reserve(target_edges);
    std::mt19937_64 rng(mix_seed(seed, static_cast<std::uint64_t>(kind),
                                 num_vertices, avg_degree));

    if (kind == SyntheticKind::Uniform) {
        std::uniform_int_distribution<std::uint64_t> pick(0, num_vertices - 1);
        while (edges.size() < target_edges) {
            VertexId u = static_cast<VertexId>(pick(rng));
            VertexId v = static_cast<VertexId>(pick(rng));
            if (u == v) continue;
            edges.emplace_back(u, v);
        }
    } else {
        // Zipf weights w_i = (i+1)^(-theta) over vertex ids. Sampling sources
        // and destinations from this law yields a degree distribution whose
        // tail exponent is skew = 1 + 1/theta.
        const double theta = 1.0 / (skew - 1.0);
        std::vector<double> cdf(num_vertices);
        double acc = 0.0;
        for (std::uint64_t i = 0; i < num_vertices; ++i) {
            acc += std::pow(static_cast<double>(i + 1), -theta);
            cdf[i] = acc;
        }
        std::uniform_real_distribution<double> unit(0.0, acc);
        auto draw = [&]() -> VertexId {
            double x = unit(rng);
            auto it = std::lower_bound(cdf.begin(), cdf.end(), x);
            return static_cast<VertexId>(it - cdf.begin());
        };
        while (edges.size() < target_edges) {
            VertexId u = draw();
            VertexId v = draw();
            if (u == v) continue;
            edges.emplace_back(u, v);
        }
    }
    return build_from_edges(num_vertices, std::move(edges),
                            Directedness::Directed);
}

void assign_train_mask(Graph& g, double fraction, std::uint64_t seed) {
    if (fraction < 0.0 || fraction > 1.0)
        throw ConfigError("train fraction must lie in [0, 1]");
    const auto count = static_cast<std::uint64_t>(
        fraction * static_cast<double>(g.num_vertices));
    std::vector<VertexId> ids(g.num_vertices);
    std::iota(ids.begin(), ids.end(), VertexId{0});
    std::mt19937_64 rng(mix_seed(seed, 0x7261696e));
    std::shuffle(ids.begin(), ids.end(), rng);
    g.train_mask.assign(g.num_vertices, 0);
    for (std::uint64_t i = 0; i < count; ++i) g.train_mask[ids[i]] = 1;
}

void attach_random_features(Graph& g, std::size_t feature_dim,
                            std::uint64_t seed) {
    if (feature_dim < 1) throw ConfigError("feature_dim must be >= 1");
    g.feature_dim = feature_dim;
    g.features.resize(static_cast<std::size_t>(g.num_vertices) * feature_dim);
    std::mt19937_64 rng(mix_seed(seed, 0x66656174));
    std::normal_distribution<float> normal(0.0f, 1.0f);
    for (float& x : g.features) x = normal(rng);
}

DegreeStats degree_stats(const Graph& g) {
    DegreeStats stats;
    stats.out_degree.assign(g.num_vertices, 0);
    for (VertexId u : g.csr_neighbors) ++stats.out_degree[u];
    for (std::uint64_t d : stats.out_degree)
        stats.max_out_degree = std::max(stats.max_out_degree, d);
    stats.histogram.assign(stats.max_out_degree + 1, 0);
    for (std::uint64_t d : stats.out_degree) ++stats.histogram[d];
    return stats;
}

}  // namespace gnnsim
