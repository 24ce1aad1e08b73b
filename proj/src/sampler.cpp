#include "gnnsim/sampler.hpp"

#include <algorithm>
#include <random>
#include <unordered_set>

namespace gnnsim {

std::vector<VertexId> partition_targets(const Graph& g,
                                        const PartitionPlan& plan,
                                        PartId part) {
    if (part >= plan.num_parts)
        throw ConfigError("sampler: partition id out of range");
    std::vector<VertexId> targets;
    for (VertexId v = 0; v < g.num_vertices; ++v) {
        if (!g.train_mask[v]) continue;
        bool owned = plan.mode == PartitionMode::VertexResident
                         ? plan.assignment[v] == part
                         : v % plan.num_parts == part;
        if (owned) targets.push_back(v);
    }
    return targets;
}

std::uint64_t partition_batch_quota(const Graph& g, const PartitionPlan& plan,
                                    const GnnModel& model, PartId part) {
    const std::uint64_t t = partition_targets(g, plan, part).size();
    return (t + model.batch_targets - 1) / model.batch_targets;
}

std::optional<MiniBatch> sample_minibatch(const Graph& g,
                                          const PartitionPlan& plan,
                                          PartId part, const GnnModel& model,
                                          EpochCursor& cursor,
                                          std::uint64_t seed) {
    model.validate();
    auto targets = partition_targets(g, plan, part);
    if (cursor.next_target >= targets.size()) return std::nullopt;

    // Epoch-shuffled target order, independent of how far the cursor is.
    {
        std::mt19937_64 order_rng(mix_seed(seed, cursor.epoch, part, 0x6f72646572));
        std::shuffle(targets.begin(), targets.end(), order_rng);
    }

    const std::size_t L = model.num_layers;
    MiniBatch batch;
    batch.source_partition = part;
    batch.seq_no = cursor.seq_no;
    batch.layers.assign(L + 1, {});
    batch.edges.assign(L, {});

    const std::uint64_t take =
        std::min<std::uint64_t>(model.batch_targets,
                                targets.size() - cursor.next_target);
    auto& top = batch.layers[L];
    top.assign(targets.begin() + cursor.next_target,
               targets.begin() + cursor.next_target + take);

    // One stream per batch, keyed by position so identical cursors replay
    // identical draws.
    std::mt19937_64 rng(
        mix_seed(seed, cursor.epoch, part, 0x62617463 + cursor.seq_no));

    for (std::size_t l = L; l >= 1; --l) {
        const std::size_t fanout = model.fanouts[l - 1];
        const auto& cur = batch.layers[l];
        auto& prev = batch.layers[l - 1];
        auto& layer_edges = batch.edges[l - 1];

        std::unordered_set<VertexId> seen;
        seen.reserve(cur.size() * (fanout + 1));
        // Self-inclusion: V^{l-1} starts as a copy of V^l.
        for (VertexId v : cur) {
            prev.push_back(v);
            seen.insert(v);
        }

        std::vector<std::uint64_t> pos;
        for (VertexId v : cur) {
            auto row = g.in_neighbors(v);
            const std::uint64_t deg = row.size();
            if (deg == 0) continue;  // aggregates an all-zero neighborhood
            const std::uint64_t k = std::min<std::uint64_t>(fanout, deg);
            pos.resize(deg);
            for (std::uint64_t i = 0; i < deg; ++i) pos[i] = i;
            // Partial Fisher-Yates: k distinct positions, uniform.
            for (std::uint64_t i = 0; i < k; ++i) {
                std::uniform_int_distribution<std::uint64_t> d(i, deg - 1);
                std::swap(pos[i], pos[d(rng)]);
                VertexId u = row[pos[i]];
                layer_edges.emplace_back(u, v);
                if (seen.insert(u).second) prev.push_back(u);
            }
        }
    }

    cursor.next_target += take;
    ++cursor.seq_no;
    return batch;
}

BatchStats batch_stats(const MiniBatch& batch, const FeatureStore& store,
                       PartId executing_fpga, const GnnModel& model) {
    BatchStats stats;
    stats.sizes.reserve(batch.layers.size());
    for (const auto& layer : batch.layers) stats.sizes.push_back(layer.size());
    stats.edge_counts.reserve(batch.edges.size());
    for (const auto& e : batch.edges) stats.edge_counts.push_back(e.size());

    const std::uint64_t vec_bytes =
        static_cast<std::uint64_t>(model.input_dim()) * store.bytes_per_elem;
    const std::uint64_t total_bytes = stats.sizes.front() * vec_bytes;

    if (store.kind == FeatureStore::Kind::ColumnSlice) {
        stats.feature_dim_mode = true;
        stats.beta = 1.0 / static_cast<double>(store.column_ranges.size());
        stats.bytes_local = static_cast<std::uint64_t>(
            stats.beta * static_cast<double>(total_bytes));
        stats.bytes_remote = total_bytes - stats.bytes_local;
        return stats;
    }

    std::uint64_t local = 0;
    for (VertexId v : batch.layers.front())
        if (store.is_resident(executing_fpga, v)) ++local;
    stats.bytes_local = local * vec_bytes;
    stats.bytes_remote = total_bytes - stats.bytes_local;
    stats.beta = total_bytes == 0
                     ? 0.0
                     : static_cast<double>(stats.bytes_local) /
                           static_cast<double>(total_bytes);
    return stats;
}

}  // namespace gnnsim
