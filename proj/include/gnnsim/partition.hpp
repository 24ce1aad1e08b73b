#pragma once

#include <cstdint>
#include <limits>
#include <utility>
#include <vector>

#include "gnnsim/graph.hpp"
#include "gnnsim/types.hpp"

namespace gnnsim {

enum class PartitionMode {
    VertexResident,  // each device owns a vertex subset
    FeatureDim,      // each device owns a feature-column slice, full topology
};

struct PartitionCounts {
    std::uint64_t vertex_count = 0;
    std::uint64_t edge_count = 0;  // CSR entries whose destination is owned
    std::uint64_t train_vertex_count = 0;
};

struct PartitionPlan {
    PartId num_parts = 1;
    PartitionMode mode = PartitionMode::VertexResident;
    std::vector<PartId> assignment;          // empty in FeatureDim mode
    std::vector<PartitionCounts> per_part;
};

constexpr std::uint64_t kUnlimitedCapacity =
    std::numeric_limits<std::uint64_t>::max();

// Per-device resident feature description. Vertex-resident stores keep one
// membership bitmap per device; the feature-dim store keeps one contiguous
// column range per device instead.
struct FeatureStore {
    enum class Kind { VertexSet, ColumnSlice };

    Kind kind = Kind::VertexSet;
    std::uint64_t num_vertices = 0;
    std::size_t feature_dim = 0;
    std::size_t bytes_per_elem = 4;  // S_feat, single precision by default
    std::uint64_t capacity_bytes = kUnlimitedCapacity;  // per device

    // VertexSet: resident[fpga][v] != 0 iff v's feature vector is local.
    std::vector<std::vector<std::uint8_t>> resident;
    // ColumnSlice: [first, last) feature columns per device.
    std::vector<std::pair<std::size_t, std::size_t>> column_ranges;

    std::uint64_t vector_bytes() const {
        return static_cast<std::uint64_t>(feature_dim) * bytes_per_elem;
    }
    bool is_resident(PartId fpga, VertexId v) const {
        return resident[fpga][v] != 0;
    }
    std::uint64_t resident_bytes(PartId fpga) const;
};

enum class BalanceObjective { Edges, TrainVertices };

// METIS-style balanced partitioning stand-in: farthest-point seeding followed
// by BFS growth, always extending the partition with the smallest load on the
// chosen objective. Empty frontiers reseed at the smallest unassigned vertex,
// so disconnected graphs are covered.
PartitionPlan partition_balanced(const Graph& g, PartId num_parts,
                                 BalanceObjective objective,
                                 std::uint64_t seed);

// assignment[v] = v mod p.
PartitionPlan partition_hash(const Graph& g, PartId num_parts);

// Device i keeps exactly the feature vectors of partition i's vertices.
FeatureStore feature_store_from_partition(
    const PartitionPlan& plan, const Graph& g,
    std::uint64_t capacity_bytes = kUnlimitedCapacity);

// Every device keeps the same cache: the top-k vertices by out-degree that
// fit in capacity, ties broken toward smaller vertex id, k maximal.
FeatureStore feature_store_outdegree_cache(const Graph& g, PartId num_parts,
                                           std::uint64_t capacity_bytes);

// Feature-dimension partitioning: full topology everywhere, disjoint
// contiguous column slices whose widths differ by at most one.
std::pair<PartitionPlan, FeatureStore> feature_store_feature_dim(
    const Graph& g, PartId num_parts);

// Recomputes per-partition counts from the assignment (the test oracle path
// uses this too).
std::vector<PartitionCounts> recount_partitions(const Graph& g,
                                                const PartitionPlan& plan);

}  // namespace gnnsim
