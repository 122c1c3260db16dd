#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "ndec/rng.hpp"
#include "ndec/tensor.hpp"

namespace ndec {

enum class LayerKind : std::uint8_t {
    dense = 0,
    batch_norm = 1,
    relu = 2,
    sigmoid = 3,
    concat_skip = 4,
};

const char* to_string(LayerKind kind);

/// One entry of a layer list. `width` is the unit count of a dense layer;
/// `source` is the index of the earlier layer whose output a concat_skip
/// appends to its input.
struct LayerSpec {
    LayerKind kind = LayerKind::dense;
    std::size_t width = 0;
    std::size_t source = 0;

    static LayerSpec dense(std::size_t units) { return {LayerKind::dense, units, 0}; }
    static LayerSpec batch_norm() { return {LayerKind::batch_norm, 0, 0}; }
    static LayerSpec relu() { return {LayerKind::relu, 0, 0}; }
    static LayerSpec sigmoid() { return {LayerKind::sigmoid, 0, 0}; }
    static LayerSpec concat_skip(std::size_t source_layer) { return {LayerKind::concat_skip, 0, source_layer}; }

    friend bool operator==(const LayerSpec&, const LayerSpec&) = default;
};

inline constexpr double kBatchNormEps = 1e-5;
inline constexpr double kBatchNormMomentum = 0.99;
/// Sigmoid outputs and BCE inputs are kept inside [eps, 1 - eps].
inline constexpr double kProbabilityClip = 1e-12;

struct Layer {
    LayerSpec spec;
    std::size_t in_dim = 0;
    std::size_t out_dim = 0;
    // dense: W is in_dim x out_dim, b is 1 x out_dim
    Tensor2 weight;
    Tensor2 bias;
    // batch_norm: all 1 x width
    Tensor2 gamma;
    Tensor2 beta;
    Tensor2 running_mean;
    Tensor2 running_var;
};

enum class Mode { train, infer };

struct ForwardCache {
    std::uint64_t model_id = 0;
    std::uint64_t generation = 0;
    Mode mode = Mode::infer;
    Tensor2 input;
    std::vector<Tensor2> outputs;    // post-layer activations, one per layer
    std::vector<Tensor2> normalized; // batch_norm x_hat (empty for other layers)
    std::vector<Tensor2> inv_std;    // batch_norm 1/sqrt(var + eps)
};

/// Gradients in the order of Mlp::trainable_parameters().
struct Gradients {
    std::vector<Tensor2> tensors;
};

/// Glorot (Xavier) normal draw: iid N(0, 2 / (rows + cols)).
Tensor2 glorot_normal_init(std::size_t rows, std::size_t cols, Rng& rng);

/// Layered feed-forward network. The final two layers are always dense(n)
/// followed by sigmoid, so outputs are per-position error probabilities.
class Mlp {
public:
    Mlp(std::size_t input_dim, std::vector<LayerSpec> specs, Rng& rng);
    /// Zero-initialized parameters; used by the model loader.
    Mlp(std::size_t input_dim, std::vector<LayerSpec> specs);

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t output_dim() const noexcept { return layers_.back().out_dim; }
    const std::vector<Layer>& layers() const noexcept { return layers_; }
    std::vector<LayerSpec> specs() const;

    /// Mutable access bumps the generation, invalidating outstanding caches.
    std::vector<Layer>& mutable_layers() noexcept;

    std::vector<Tensor2*> trainable_parameters();
    std::vector<const Tensor2*> trainable_parameters() const;
    /// Trainable tensors plus batch-norm running statistics, in file order.
    std::vector<Tensor2*> all_parameters();
    std::vector<const Tensor2*> all_parameters() const;

    std::size_t trainable_count() const;

    std::uint64_t id() const noexcept { return id_; }
    std::uint64_t generation() const noexcept { return generation_; }

    /// Train mode normalizes with batch statistics and updates the running
    /// statistics; infer mode is a pure function of parameters and x.
    Tensor2 forward(const Tensor2& x, Mode mode, ForwardCache* cache = nullptr);
    Tensor2 predict(const Tensor2& x) const;

    /// Gradient of mean BCE w.r.t. every trainable parameter, given the cache
    /// of a train-mode forward on the same batch. Targets may be soft.
    Gradients backward(const ForwardCache& cache, const Tensor2& target) const;

    Mlp(const Mlp& other);
    Mlp& operator=(const Mlp& other);
    Mlp(Mlp&&) noexcept = default;
    Mlp& operator=(Mlp&&) noexcept = default;

private:
    void build(Rng* rng);
    Tensor2 run(const Tensor2& x, Mode mode, ForwardCache* cache, std::vector<Layer>* stats) const;

    std::size_t input_dim_ = 0;
    std::vector<Layer> layers_;
    std::uint64_t id_ = 0;
    std::uint64_t generation_ = 0;
};

/// Mean over all entries of the binary cross-entropy, predictions clipped.
double bce_loss(const Tensor2& pred, const Tensor2& target);

}  // namespace ndec
