#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gnnsim/types.hpp"

namespace gnnsim {

// Directed graph in CSR form. Row v holds the in-neighbors of v (sources of
// edges u->v), sorted ascending with duplicates kept, so feature aggregation
// for v walks one contiguous range. Immutable after construction; safe to
// share across threads.
struct Graph {
    std::uint64_t num_vertices = 0;
    std::uint64_t num_edges = 0;  // directed edge entries
    std::vector<std::uint64_t> csr_offsets;  // size num_vertices + 1
    std::vector<VertexId> csr_neighbors;     // size num_edges, in-neighbors
    std::size_t feature_dim = 0;             // f^0
    std::vector<std::uint8_t> train_mask;    // 0/1 per vertex
    std::vector<float> features;  // row-major |V| x feature_dim, may be empty

    std::span<const VertexId> in_neighbors(VertexId v) const {
        return {csr_neighbors.data() + csr_offsets[v],
                csr_neighbors.data() + csr_offsets[v + 1]};
    }
    std::uint64_t in_degree(VertexId v) const {
        return csr_offsets[v + 1] - csr_offsets[v];
    }
    bool has_features() const { return !features.empty(); }

    std::span<const float> feature_row(VertexId v) const {
        return {features.data() + static_cast<std::size_t>(v) * feature_dim,
                feature_dim};
    }

    // Flattens the CSR back to (src, dst) pairs; inverse of build_from_edges.
    std::vector<std::pair<VertexId, VertexId>> edge_list() const;

    void check() const;  // throws InvariantError on a malformed CSR
};

enum class Directedness { Directed, Undirected };

enum class Aggregator { Sum, Mean };
enum class ModelKind { Gcn, GraphSage, Custom };

// GNN model hyper-parameters. dims has num_layers + 1 entries (f^0..f^L);
// fanouts[l-1] is the neighbor sample size used when expanding layer l.
struct GnnModel {
    std::size_t num_layers = 2;
    std::vector<std::size_t> dims;
    std::vector<std::size_t> fanouts;
    std::size_t batch_targets = 1024;
    Aggregator aggregator = Aggregator::Mean;
    ModelKind kind = ModelKind::GraphSage;
    double bp_cost_factor = 1.0;  // back propagation cost relative to forward

    void validate() const;  // throws ConfigError
    std::size_t input_dim() const { return dims.front(); }
    std::size_t output_dim() const { return dims.back(); }
};

// Builds a Graph from (src, dst) pairs. Undirected input is symmetrized, so
// every pair contributes two edge entries.
Graph build_from_edges(std::uint64_t num_vertices,
                       std::vector<std::pair<VertexId, VertexId>> edges,
                       Directedness directedness);

// Whitespace-separated "src dst" lines; '#' starts a comment, and an optional
// "# vertices=N" header pins the vertex count (otherwise 1 + max id).
Graph load_edge_list(const std::string& path, Directedness directedness);

enum class SyntheticKind { Uniform, PowerLaw };

// Seeded synthetic graph with exactly num_vertices * avg_degree edge entries.
// PowerLaw draws both endpoints from a Zipf distribution over vertex ids with
// exponent 1/(skew-1), giving heavy-tailed in- and out-degrees; Uniform draws
// both endpoints uniformly. Self-loops are rejected; a single-vertex graph
// therefore has zero edges.
Graph generate_synthetic(SyntheticKind kind, std::uint64_t num_vertices,
                         std::uint64_t avg_degree, double skew,
                         std::uint64_t seed);

// Marks floor(fraction * |V|) vertices as training targets via a seeded
// shuffle, so the count is exact and the choice deterministic.
void assign_train_mask(Graph& g, double fraction, std::uint64_t seed);

// Fills the feature matrix with seeded standard-normal values.
void attach_random_features(Graph& g, std::size_t feature_dim,
                            std::uint64_t seed);

struct DegreeStats {
    std::vector<std::uint64_t> out_degree;       // per vertex
    std::vector<std::uint64_t> histogram;        // histogram[d] = #vertices
    std::uint64_t max_out_degree = 0;
};

DegreeStats degree_stats(const Graph& g);

}  // namespace gnnsim
