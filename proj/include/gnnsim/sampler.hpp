#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "gnnsim/graph.hpp"
#include "gnnsim/partition.hpp"
#include "gnnsim/types.hpp"

namespace gnnsim {

// Layer-sampled mini-batch. layers[l] is V^l for l = 0..L (targets live in
// layers[L]); edges[l-1] realizes A^l as (u in V^{l-1}, v in V^l) pairs.
// V^{l-1} always contains V^l so each vertex's previous-layer feature is
// available downstream.
struct MiniBatch {
    PartId source_partition = 0;
    std::uint64_t seq_no = 0;  // production index within the partition
    std::vector<std::vector<VertexId>> layers;
    std::vector<std::vector<std::pair<VertexId, VertexId>>> edges;

    std::size_t num_layers() const { return edges.size(); }
    const std::vector<VertexId>& targets() const { return layers.back(); }
};

// Size and locality statistics the performance model consumes.
struct BatchStats {
    std::vector<std::uint64_t> sizes;        // |V^l| for l = 0..L
    std::vector<std::uint64_t> edge_counts;  // |A^l| for l = 1..L
    std::uint64_t bytes_local = 0;           // layer-0 feature bytes on-device
    std::uint64_t bytes_remote = 0;          // layer-0 feature bytes fetched
    double beta = 0.0;                       // local / (local + remote)
    bool feature_dim_mode = false;           // column-sliced store (P3-style)

    std::uint64_t total_vertices() const {
        std::uint64_t s = 0;
        for (auto v : sizes) s += v;
        return s;
    }
    std::uint64_t total_edges() const {
        std::uint64_t s = 0;
        for (auto e : edge_counts) s += e;
        return s;
    }
};

// Position within a partition's epoch-shuffled target sequence.
struct EpochCursor {
    std::uint32_t epoch = 0;
    std::uint64_t next_target = 0;  // index into the shuffled target order
    std::uint64_t seq_no = 0;       // production index of the next batch
};

// The training targets a partition contributes. Vertex-resident plans own
// their train vertices; column-sliced plans split the train set round-robin
// by vertex id so every device contributes work.
std::vector<VertexId> partition_targets(const Graph& g,
                                        const PartitionPlan& plan,
                                        PartId part);

// Number of mini-batches the partition contributes per epoch:
// ceil(train targets / batch_targets).
std::uint64_t partition_batch_quota(const Graph& g, const PartitionPlan& plan,
                                    const GnnModel& model, PartId part);

// Draws the next mini-batch of the partition's epoch, advancing the cursor.
// Targets follow a seeded epoch-shuffled order; each layer-l vertex samples
// min(fanout_l, deg) in-neighbors uniformly without replacement. Returns
// nothing when the partition is exhausted. Pure in (g, plan, model, cursor,
// seed): re-running with the same cursor yields the identical batch.
std::optional<MiniBatch> sample_minibatch(const Graph& g,
                                          const PartitionPlan& plan,
                                          PartId part, const GnnModel& model,
                                          EpochCursor& cursor,
                                          std::uint64_t seed);

// Convenience wrapper producing a partition's batches in sequence.
class PartitionSampler {
  public:
    PartitionSampler(const Graph& g, const PartitionPlan& plan, PartId part,
                     const GnnModel& model, std::uint64_t seed,
                     std::uint32_t epoch)
        : g_(&g), plan_(&plan), part_(part), model_(&model), seed_(seed) {
        cursor_.epoch = epoch;
    }

    std::optional<MiniBatch> next() {
        return sample_minibatch(*g_, *plan_, part_, *model_, cursor_, seed_);
    }

  private:
    const Graph* g_;
    const PartitionPlan* plan_;
    PartId part_;
    const GnnModel* model_;
    std::uint64_t seed_;
    EpochCursor cursor_;
};

// Measures locality of a batch executed on a given device. Vertex-resident
// stores count layer-0 membership exactly; column-sliced stores are local for
// exactly one slice of every vector, so beta = 1/p and the rest is priced by
// the post-layer-1 broadcast instead of per-vertex fetches.
BatchStats batch_stats(const MiniBatch& batch, const FeatureStore& store,
                       PartId executing_fpga, const GnnModel& model);

}  // namespace gnnsim
