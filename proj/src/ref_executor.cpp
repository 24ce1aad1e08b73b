#include "gnnsim/ref_executor.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <unordered_map>

namespace gnnsim {

Matrix Matrix::identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m.at(i, i) = 1.0;
    return m;
}

Matrix matmul(const Matrix& a, const Matrix& b) {
    if (a.cols != b.rows) throw ShapeError("matmul: inner dimensions differ");
    Matrix c(a.rows, b.cols);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t k = 0; k < a.cols; ++k) {
            const double aik = a.at(i, k);
            if (aik == 0.0) continue;
            for (std::size_t j = 0; j < b.cols; ++j)
                c.at(i, j) += aik * b.at(k, j);
        }
    return c;
}

Matrix transpose(const Matrix& a) {
    Matrix t(a.cols, a.rows);
    for (std::size_t i = 0; i < a.rows; ++i)
        for (std::size_t j = 0; j < a.cols; ++j) t.at(j, i) = a.at(i, j);
    return t;
}

namespace {

// Row lookup within one batch layer.
std::unordered_map<VertexId, std::size_t> layer_index(
    const std::vector<VertexId>& layer) {
    std::unordered_map<VertexId, std::size_t> idx;
    idx.reserve(layer.size());
    for (std::size_t i = 0; i < layer.size(); ++i) idx.emplace(layer[i], i);
    return idx;
}

// Linear aggregation operator of one layer: per-edge coefficients plus an
// optional per-vertex self coefficient (GCN's implicit self edge).
struct AggOp {
    // edge i of batch.edges[l-1] carries weight coeff[i]
    std::vector<double> edge_coeff;
    std::vector<double> self_coeff;  // per row of V^l, 0 when unused
};

AggOp build_agg_op(const MiniBatch& batch, std::size_t l,
                   const std::unordered_map<VertexId, std::size_t>& cur_idx,
                   const GnnModel& model) {
    const auto& edges = batch.edges[l - 1];
    const auto& cur = batch.layers[l];
    AggOp op;
    op.edge_coeff.assign(edges.size(), 1.0);
    op.self_coeff.assign(cur.size(), 0.0);

    if (model.kind == ModelKind::Gcn) {
        // Symmetric normalization over the sampled bipartite layer with an
        // implicit self edge: deg-hat counts the edges seen here plus one.
        std::unordered_map<VertexId, double> out_deg;
        std::vector<double> in_deg(cur.size(), 0.0);
        for (const auto& [u, v] : edges) {
            ++out_deg[u];
            ++in_deg[cur_idx.at(v)];
        }
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto& [u, v] = edges[e];
            const double du = out_deg[u] + 1.0;
            const double dv = in_deg[cur_idx.at(v)] + 1.0;
            op.edge_coeff[e] = 1.0 / std::sqrt(du * dv);
        }
        for (std::size_t r = 0; r < cur.size(); ++r)
            op.self_coeff[r] = 1.0 / (in_deg[r] + 1.0);
    } else if (model.aggregator == Aggregator::Mean) {
        std::vector<double> in_deg(cur.size(), 0.0);
        for (const auto& [u, v] : edges) ++in_deg[cur_idx.at(v)];
        for (std::size_t e = 0; e < edges.size(); ++e) {
            const auto& [u, v] = edges[e];
            op.edge_coeff[e] = 1.0 / std::max(1.0, in_deg[cur_idx.at(v)]);
        }
    }
    return op;
}

}  // namespace

Matrix forward(const MiniBatch& batch, const Graph& g,
               const std::vector<Matrix>& weights, const GnnModel& model,
               bool with_activation, ForwardCache* cache) {
    model.validate();
    const std::size_t L = model.num_layers;
    if (batch.layers.size() != L + 1 || batch.edges.size() != L)
        throw ShapeError("forward: batch depth does not match model");
    if (weights.size() != L) throw ShapeError("forward: one weight per layer");
    for (std::size_t l = 0; l < L; ++l)
        if (weights[l].rows != model.dims[l] || weights[l].cols != model.dims[l + 1])
            throw ShapeError("forward: weight " + std::to_string(l) +
                             " must be f^{l-1} x f^l");
    if (!g.has_features() || g.feature_dim != model.input_dim())
        throw ShapeError("forward: graph features missing or wrong width");

    // h^0 = input features of V^0.
    Matrix h(batch.layers[0].size(), model.input_dim());
    for (std::size_t r = 0; r < batch.layers[0].size(); ++r) {
        auto row = g.feature_row(batch.layers[0][r]);
        for (std::size_t c = 0; c < row.size(); ++c) h.at(r, c) = row[c];
    }
    if (cache) {
        cache->h.clear();
        cache->agg.clear();
        cache->pre.clear();
        cache->h.push_back(h);
    }

    for (std::size_t l = 1; l <= L; ++l) {
        const auto& cur = batch.layers[l];
        auto prev_idx = layer_index(batch.layers[l - 1]);
        auto cur_idx = layer_index(cur);
        const AggOp op = build_agg_op(batch, l, cur_idx, model);

        Matrix agg(cur.size(), h.cols);
        for (std::size_t e = 0; e < batch.edges[l - 1].size(); ++e) {
            const auto& [u, v] = batch.edges[l - 1][e];
            const std::size_t src = prev_idx.at(u);
            const std::size_t dst = cur_idx.at(v);
            const double w = op.edge_coeff[e];
            for (std::size_t c = 0; c < h.cols; ++c)
                agg.at(dst, c) += w * h.at(src, c);
        }
        for (std::size_t r = 0; r < cur.size(); ++r) {
            if (op.self_coeff[r] == 0.0) continue;
            const std::size_t src = prev_idx.at(cur[r]);
            for (std::size_t c = 0; c < h.cols; ++c)
                agg.at(r, c) += op.self_coeff[r] * h.at(src, c);
        }

        Matrix pre = matmul(agg, weights[l - 1]);
        Matrix next = pre;
        if (with_activation)
            for (double& x : next.data) x = std::max(0.0, x);

        if (cache) {
            cache->agg.push_back(std::move(agg));
            cache->pre.push_back(std::move(pre));
            cache->h.push_back(next);
        }
        h = std::move(next);
    }
    return h;
}

std::vector<double> vertex_target(VertexId v, std::size_t dim,
                                  std::uint64_t target_seed) {
    std::mt19937_64 rng(mix_seed(target_seed, v, 0x74617267));
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> t(dim);
    for (double& x : t) x = normal(rng);
    return t;
}

BatchGradients backward(const MiniBatch& batch, const Graph& g,
                        const std::vector<Matrix>& weights,
                        const GnnModel& model, std::uint64_t target_seed,
                        bool with_activation) {
    ForwardCache cache;
    Matrix out = forward(batch, g, weights, model, with_activation, &cache);

    const std::size_t L = model.num_layers;
    const auto& targets = batch.layers[L];
    const double denom =
        static_cast<double>(targets.size()) * static_cast<double>(out.cols);

    BatchGradients result;
    result.dw.reserve(L);

    // MSE against fixed per-vertex targets.
    Matrix grad(out.rows, out.cols);
    for (std::size_t r = 0; r < out.rows; ++r) {
        const auto t = vertex_target(targets[r], out.cols, target_seed);
        for (std::size_t c = 0; c < out.cols; ++c) {
            const double diff = out.at(r, c) - t[c];
            result.loss += diff * diff / denom;
            grad.at(r, c) = 2.0 * diff / denom;
        }
    }

    std::vector<Matrix> dw(L);
    for (std::size_t l = L; l >= 1; --l) {
        const auto& cur = batch.layers[l];
        auto prev_idx = layer_index(batch.layers[l - 1]);
        auto cur_idx = layer_index(cur);
        const AggOp op = build_agg_op(batch, l, cur_idx, model);

        Matrix dz = grad;
        if (with_activation) {
            const Matrix& pre = cache.pre[l - 1];
            for (std::size_t i = 0; i < dz.data.size(); ++i)
                if (pre.data[i] <= 0.0) dz.data[i] = 0.0;
        }

        dw[l - 1] = matmul(transpose(cache.agg[l - 1]), dz);

        if (l == 1) break;
        // Push the gradient through the update then the aggregation.
        Matrix dagg = matmul(dz, transpose(weights[l - 1]));
        Matrix dprev(batch.layers[l - 1].size(), dagg.cols);
        for (std::size_t e = 0; e < batch.edges[l - 1].size(); ++e) {
            const auto& [u, v] = batch.edges[l - 1][e];
            const std::size_t src = prev_idx.at(u);
            const std::size_t dst = cur_idx.at(v);
            const double w = op.edge_coeff[e];
            for (std::size_t c = 0; c < dagg.cols; ++c)
                dprev.at(src, c) += w * dagg.at(dst, c);
        }
        for (std::size_t r = 0; r < cur.size(); ++r) {
            if (op.self_coeff[r] == 0.0) continue;
            const std::size_t src = prev_idx.at(cur[r]);
            for (std::size_t c = 0; c < dagg.cols; ++c)
                dprev.at(src, c) += op.self_coeff[r] * dagg.at(r, c);
        }
        grad = std::move(dprev);
    }
    result.dw = std::move(dw);
    return result;
}

SyncResult backward_and_sync(const std::vector<MiniBatch>& batches,
                             const Graph& g, std::vector<Matrix>& weights,
                             const GnnModel& model, double learning_rate,
                             std::uint64_t target_seed, bool with_activation) {
    if (batches.empty()) throw ConfigError("sync: no batches in iteration");

    // Canonical reduction order, independent of device placement.
    std::vector<const MiniBatch*> order;
    order.reserve(batches.size());
    for (const MiniBatch& b : batches) order.push_back(&b);
    std::sort(order.begin(), order.end(),
              [](const MiniBatch* a, const MiniBatch* b) {
                  if (a->source_partition != b->source_partition)
                      return a->source_partition < b->source_partition;
                  return a->seq_no < b->seq_no;
              });

    SyncResult result;
    for (std::size_t l = 0; l < model.num_layers; ++l)
        result.averaged_gradients.emplace_back(model.dims[l], model.dims[l + 1]);

    for (const MiniBatch* b : order) {
        BatchGradients grads =
            backward(*b, g, weights, model, target_seed, with_activation);
        result.mean_loss += grads.loss;
        for (std::size_t l = 0; l < model.num_layers; ++l)
            for (std::size_t i = 0; i < grads.dw[l].data.size(); ++i)
                result.averaged_gradients[l].data[i] += grads.dw[l].data[i];
    }
    const double inv = 1.0 / static_cast<double>(order.size());
    result.mean_loss *= inv;
    for (Matrix& m : result.averaged_gradients)
        for (double& x : m.data) x *= inv;

    for (std::size_t l = 0; l < model.num_layers; ++l)
        for (std::size_t i = 0; i < weights[l].data.size(); ++i)
            weights[l].data[i] -=
                learning_rate * result.averaged_gradients[l].data[i];
    return result;
}

std::vector<Matrix> init_weights(const GnnModel& model, std::uint64_t seed) {
    std::vector<Matrix> weights;
    for (std::size_t l = 0; l < model.num_layers; ++l) {
        Matrix w(model.dims[l], model.dims[l + 1]);
        std::mt19937_64 rng(mix_seed(seed, l, 0x77696e69));
        std::normal_distribution<double> normal(
            0.0, 1.0 / std::sqrt(static_cast<double>(model.dims[l])));
        for (double& x : w.data) x = normal(rng);
        weights.push_back(std::move(w));
    }
    return weights;
}

std::uint64_t weight_digest(const std::vector<Matrix>& weights) {
    std::uint64_t h = 1469598103934665603ull;  // FNV offset basis
    auto mix_bytes = [&](const void* p, std::size_t n) {
        const auto* bytes = static_cast<const unsigned char*>(p);
        for (std::size_t i = 0; i < n; ++i) {
            h ^= bytes[i];
            h *= 1099511628211ull;  // FNV prime
        }
    };
    for (const Matrix& m : weights)
        mix_bytes(m.data.data(), m.data.size() * sizeof(double));
    return h;
}

TrainingTrace run_reference_training(const Graph& g, const GnnModel& model,
                                     const PartitionPlan& plan,
                                     SchedPolicy policy, std::uint32_t epochs,
                                     std::uint64_t seed, double learning_rate,
                                     std::uint64_t target_seed) {
    const PartId p = plan.num_parts;
    std::vector<std::uint64_t> quotas(p);
    for (PartId i = 0; i < p; ++i)
        quotas[i] = partition_batch_quota(g, plan, model, i);
    ScheduleOptions opts;
    opts.policy = policy;
    const auto plans = schedule_epoch(quotas, p, opts);

    TrainingTrace trace;
    std::vector<Matrix> weights = init_weights(model, seed);

    for (std::uint32_t epoch = 0; epoch < epochs; ++epoch) {
        std::vector<PartitionSampler> samplers;
        samplers.reserve(p);
        for (PartId i = 0; i < p; ++i)
            samplers.emplace_back(g, plan, i, model, seed, epoch);

        for (const IterationPlan& iter : plans) {
            std::vector<SlotAssignment> slots = iter.assignments;
            std::stable_sort(slots.begin(), slots.end(),
                             [](const SlotAssignment& a, const SlotAssignment& b) {
                                 if (a.source != b.source)
                                     return a.source < b.source;
                                 return a.seq_no < b.seq_no;
                             });
            std::vector<MiniBatch> batches;
            for (const SlotAssignment& slot : slots) {
                auto batch = samplers[slot.source].next();
                if (!batch || batch->seq_no != slot.seq_no)
                    throw InvariantError(
                        "refexec: scheduler slot does not match sampler output");
                batches.push_back(std::move(*batch));
            }
            SyncResult sync = backward_and_sync(batches, g, weights, model,
                                                learning_rate, target_seed);
            trace.weight_digests.push_back(weight_digest(weights));
            trace.losses.push_back(sync.mean_loss);
            ++trace.iterations;
        }
    }
    trace.final_weights = std::move(weights);
    return trace;
}

}  // namespace gnnsim
