#include "gnnsim/partition.hpp"

#include <algorithm>
#include <deque>
#include <numeric>
#include <queue>
#include <random>

namespace gnnsim {

std::uint64_t FeatureStore::resident_bytes(PartId fpga) const {
    if (kind == Kind::ColumnSlice) {
        const auto& [first, last] = column_ranges[fpga];
        return num_vertices * static_cast<std::uint64_t>(last - first) *
               bytes_per_elem;
    }
    std::uint64_t n = 0;
    for (std::uint8_t b : resident[fpga]) n += b;
    return n * vector_bytes();
}

std::vector<PartitionCounts> recount_partitions(const Graph& g,
                                                const PartitionPlan& plan) {
    std::vector<PartitionCounts> counts(plan.num_parts);
    if (plan.mode == PartitionMode::FeatureDim) {
        // Full topology on every device.
        std::uint64_t train = 0;
        for (std::uint8_t m : g.train_mask) train += m;
        for (auto& c : counts)
            c = {g.num_vertices, g.num_edges, train};
        return counts;
    }
    for (VertexId v = 0; v < g.num_vertices; ++v) {
        PartId p = plan.assignment[v];
        auto& c = counts[p];
        ++c.vertex_count;
        c.edge_count += g.in_degree(v);
        c.train_vertex_count += g.train_mask[v];
    }
    return counts;
}

namespace {

// Undirected adjacency view (in- plus out-neighbors) used only for BFS
// growth; the CSR itself stays directed.
std::vector<std::vector<VertexId>> undirected_adjacency(const Graph& g) {
    std::vector<std::vector<VertexId>> adj(g.num_vertices);
    for (VertexId v = 0; v < g.num_vertices; ++v) {
        for (VertexId u : g.in_neighbors(v)) {
            adj[v].push_back(u);
            adj[u].push_back(v);
        }
    }
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        row.erase(std::unique(row.begin(), row.end()), row.end());
    }
    return adj;
}

// Farthest-point seeding: first seed random, each next seed maximizes the
// BFS distance to all chosen seeds (unreachable beats everything, ties to
// the smaller id). Guarantees one seed per component while p allows.
std::vector<VertexId> pick_seeds(const std::vector<std::vector<VertexId>>& adj,
                                 std::uint64_t num_vertices, PartId p,
                                 std::uint64_t seed) {
    std::mt19937_64 rng(mix_seed(seed, 0x73656564));
    std::vector<VertexId> seeds;
    seeds.push_back(static_cast<VertexId>(
        std::uniform_int_distribution<std::uint64_t>(0, num_vertices - 1)(rng)));

    constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();
    std::vector<std::uint64_t> dist(num_vertices, kInf);
    std::deque<VertexId> bfs;
    auto relax_from = [&](VertexId s) {
        dist[s] = 0;
        bfs.push_back(s);
        while (!bfs.empty()) {
            VertexId x = bfs.front();
            bfs.pop_front();
            for (VertexId y : adj[x]) {
                if (dist[y] == kInf || dist[y] > dist[x] + 1) {
                    dist[y] = dist[x] + 1;
                    bfs.push_back(y);
                }
            }
        }
    };
    relax_from(seeds[0]);
    while (seeds.size() < p) {
        VertexId best = 0;
        std::uint64_t best_dist = 0;
        bool found = false;
        for (VertexId v = 0; v < num_vertices; ++v) {
            bool taken = std::find(seeds.begin(), seeds.end(), v) != seeds.end();
            if (taken) continue;
            if (!found || dist[v] > best_dist) {
                best = v;
                best_dist = dist[v];
                found = true;
            }
        }
        seeds.push_back(best);
        relax_from(best);
    }
    return seeds;
}

}  // namespace

PartitionPlan partition_balanced(const Graph& g, PartId num_parts,
                                 BalanceObjective objective,
                                 std::uint64_t seed) {
    if (num_parts < 1) throw ConfigError("partition: num_parts must be >= 1");
    if (num_parts > g.num_vertices)
        throw ConfigError("partition: more partitions than vertices");

    PartitionPlan plan;
    plan.num_parts = num_parts;
    plan.mode = PartitionMode::VertexResident;
    constexpr PartId kUnassigned = std::numeric_limits<PartId>::max();
    plan.assignment.assign(g.num_vertices, kUnassigned);

    auto adj = undirected_adjacency(g);
    auto weight = [&](VertexId v) -> std::uint64_t {
        return objective == BalanceObjective::Edges ? g.in_degree(v)
                                                    : g.train_mask[v];
    };

    std::vector<std::queue<VertexId>> frontier(num_parts);
    std::vector<std::uint64_t> load(num_parts, 0);
    std::uint64_t assigned = 0;

    auto claim = [&](PartId p, VertexId v) {
        plan.assignment[v] = p;
        load[p] += weight(v);
        frontier[p].push(v);
        ++assigned;
    };

    auto seeds = pick_seeds(adj, g.num_vertices, num_parts, seed);
    for (PartId p = 0; p < num_parts; ++p)
        if (plan.assignment[seeds[p]] == kUnassigned) claim(p, seeds[p]);

    VertexId reseed_scan = 0;
    while (assigned < g.num_vertices) {
        // Grow the lightest partition by one vertex.
        PartId p = 0;
        for (PartId q = 1; q < num_parts; ++q)
            if (load[q] < load[p]) p = q;

        VertexId next = kUnassigned;
        while (!frontier[p].empty() && next == kUnassigned) {
            VertexId x = frontier[p].front();
            for (VertexId y : adj[x]) {
                if (plan.assignment[y] == kUnassigned) {
                    next = y;
                    break;
                }
            }
            if (next == kUnassigned) frontier[p].pop();
        }
        if (next == kUnassigned) {
            // Frontier exhausted (component consumed): reseed at the smallest
            // unassigned vertex.
            while (plan.assignment[reseed_scan] != kUnassigned) ++reseed_scan;
            next = reseed_scan;
        }
        claim(p, next);
    }

    plan.per_part = recount_partitions(g, plan);
    return plan;
}

PartitionPlan partition_hash(const Graph& g, PartId num_parts) {
    if (num_parts < 1) throw ConfigError("partition: num_parts must be >= 1");
    PartitionPlan plan;
    plan.num_parts = num_parts;
    plan.mode = PartitionMode::VertexResident;
    plan.assignment.resize(g.num_vertices);
    for (VertexId v = 0; v < g.num_vertices; ++v)
        plan.assignment[v] = static_cast<PartId>(v % num_parts);
    plan.per_part = recount_partitions(g, plan);
    return plan;
}

FeatureStore feature_store_from_partition(const PartitionPlan& plan,
                                          const Graph& g,
                                          std::uint64_t capacity_bytes) {
    if (plan.mode != PartitionMode::VertexResident)
        throw ConfigError("feature store: plan must be vertex-resident");
    FeatureStore store;
    store.kind = FeatureStore::Kind::VertexSet;
    store.num_vertices = g.num_vertices;
    store.feature_dim = g.feature_dim;
    store.capacity_bytes = capacity_bytes;
    store.resident.assign(plan.num_parts,
                          std::vector<std::uint8_t>(g.num_vertices, 0));
    for (VertexId v = 0; v < g.num_vertices; ++v)
        store.resident[plan.assignment[v]][v] = 1;
    for (PartId p = 0; p < plan.num_parts; ++p) {
        std::uint64_t bytes = store.resident_bytes(p);
        if (bytes > capacity_bytes)
            throw CapacityError("feature store: FPGA " + std::to_string(p) +
                                " needs " + std::to_string(bytes) +
                                " bytes, capacity " +
                                std::to_string(capacity_bytes));
    }
    return store;
}

FeatureStore feature_store_outdegree_cache(const Graph& g, PartId num_parts,
                                           std::uint64_t capacity_bytes) {
    FeatureStore store;
    store.kind = FeatureStore::Kind::VertexSet;
    store.num_vertices = g.num_vertices;
    store.feature_dim = g.feature_dim;
    store.capacity_bytes = capacity_bytes;
    if (store.vector_bytes() == 0 || capacity_bytes < store.vector_bytes())
        throw ConfigError("outdegree cache: capacity below one feature vector");

    std::uint64_t k = capacity_bytes / store.vector_bytes();
    k = std::min<std::uint64_t>(k, g.num_vertices);

    auto deg = degree_stats(g);
    std::vector<VertexId> ids(g.num_vertices);
    std::iota(ids.begin(), ids.end(), VertexId{0});
    // Highest out-degree first, ties toward the smaller id.
    std::stable_sort(ids.begin(), ids.end(), [&](VertexId a, VertexId b) {
        return deg.out_degree[a] > deg.out_degree[b];
    });

    std::vector<std::uint8_t> cached(g.num_vertices, 0);
    for (std::uint64_t i = 0; i < k; ++i) cached[ids[i]] = 1;
    store.resident.assign(num_parts, cached);
    return store;
}

std::pair<PartitionPlan, FeatureStore> feature_store_feature_dim(
    const Graph& g, PartId num_parts) {
    if (num_parts < 1) throw ConfigError("partition: num_parts must be >= 1");
    if (num_parts > g.feature_dim)
        throw ConfigError("feature-dim partition: p exceeds feature length " +
                          std::to_string(g.feature_dim));

    PartitionPlan plan;
    plan.num_parts = num_parts;
    plan.mode = PartitionMode::FeatureDim;
    plan.per_part = recount_partitions(g, plan);

    FeatureStore store;
    store.kind = FeatureStore::Kind::ColumnSlice;
    store.num_vertices = g.num_vertices;
    store.feature_dim = g.feature_dim;
    const std::size_t base = g.feature_dim / num_parts;
    const std::size_t extra = g.feature_dim % num_parts;
    std::size_t start = 0;
    for (PartId p = 0; p < num_parts; ++p) {
        std::size_t width = base + (p < extra ? 1 : 0);
        store.column_ranges.emplace_back(start, start + width);
        start += width;
    }
    return {std::move(plan), std::move(store)};
}

}  // namespace gnnsim
