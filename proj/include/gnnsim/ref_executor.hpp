#pragma once

#include <cstdint>
#include <vector>

#include "gnnsim/graph.hpp"
#include "gnnsim/partition.hpp"
#include "gnnsim/sampler.hpp"
#include "gnnsim/scheduler.hpp"
#include "gnnsim/types.hpp"

namespace gnnsim {

// Small dense row-major matrix; all reference numerics run in double.
struct Matrix {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<double> data;

    Matrix() = default;
    Matrix(std::size_t r, std::size_t c) : rows(r), cols(c), data(r * c, 0.0) {}

    double& at(std::size_t r, std::size_t c) { return data[r * cols + c]; }
    double at(std::size_t r, std::size_t c) const { return data[r * cols + c]; }

    static Matrix identity(std::size_t n);
};

Matrix matmul(const Matrix& a, const Matrix& b);
Matrix transpose(const Matrix& a);

// Per-layer intermediates kept for back propagation.
struct ForwardCache {
    std::vector<Matrix> h;    // h[l]: features of V^l, l = 0..L
    std::vector<Matrix> agg;  // agg[l-1]: aggregated inputs of layer l
    std::vector<Matrix> pre;  // pre[l-1]: pre-activation agg * W
};

// Runs the aggregate-update forward pass over a sampled mini-batch.
// Aggregation is sum or mean over the batch's layer edges (empty
// neighborhoods aggregate to zero); GCN models use symmetric normalization
// with an implicit self edge instead. Update is h = sigma(agg * W) with
// sigma = ReLU, or identity when with_activation is false. Returns the
// embeddings of the target vertices (rows follow batch.layers[L]).
Matrix forward(const MiniBatch& batch, const Graph& g,
               const std::vector<Matrix>& weights, const GnnModel& model,
               bool with_activation = true, ForwardCache* cache = nullptr);

// Deterministic per-vertex regression target, independent of batching.
std::vector<double> vertex_target(VertexId v, std::size_t dim,
                                  std::uint64_t target_seed);

struct BatchGradients {
    std::vector<Matrix> dw;  // one per layer
    double loss = 0.0;
};

// MSE loss of a batch's embeddings against the vertex targets, plus its
// weight gradients from back propagation.
BatchGradients backward(const MiniBatch& batch, const Graph& g,
                        const std::vector<Matrix>& weights,
                        const GnnModel& model, std::uint64_t target_seed,
                        bool with_activation = true);

struct SyncResult {
    std::vector<Matrix> averaged_gradients;
    double mean_loss = 0.0;
};

// One synchronous step: every batch of the iteration computes gradients
// against the shared weights, the gradients are averaged in (partition,
// seq_no) order, and the weights take one SGD step. Mirrors the
// gather-average-broadcast flow, so the result is independent of which
// device ran which batch.
SyncResult backward_and_sync(const std::vector<MiniBatch>& batches,
                             const Graph& g, std::vector<Matrix>& weights,
                             const GnnModel& model, double learning_rate,
                             std::uint64_t target_seed,
                             bool with_activation = true);

// Seeded weight initialization, shape f^{l-1} x f^l per layer.
std::vector<Matrix> init_weights(const GnnModel& model, std::uint64_t seed);

struct TrainingTrace {
    std::vector<std::uint64_t> weight_digests;  // one per iteration
    std::vector<double> losses;                 // mean loss per iteration
    std::vector<Matrix> final_weights;
    std::uint64_t iterations = 0;
};

// FNV-1a over the raw weight bytes; equal digests mean bit-identical weights.
std::uint64_t weight_digest(const std::vector<Matrix>& weights);

// Full numeric training run driven by the scheduler: same sampling and
// scheduling as the simulator, but executing the actual computation. Used to
// demonstrate that scheduling policies do not change the weight trajectory.
TrainingTrace run_reference_training(const Graph& g, const GnnModel& model,
                                     const PartitionPlan& plan,
                                     SchedPolicy policy, std::uint32_t epochs,
                                     std::uint64_t seed, double learning_rate,
                                     std::uint64_t target_seed);

}  // namespace gnnsim
