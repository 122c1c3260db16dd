#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include <Eigen/Core>

#include "ndec/mlp.hpp"

namespace ndec {

/// Single-precision, single-example evaluation of an Mlp in infer mode.
/// Batch-norm layers that directly follow a dense layer are folded into its
/// affine map. Immutable after construction; `run` is reentrant as long as
/// each thread supplies its own scratch.
class InferenceNet {
public:
    explicit InferenceNet(const Mlp& model);

    std::size_t input_dim() const noexcept { return input_dim_; }
    std::size_t output_dim() const noexcept { return output_dim_; }

    struct Scratch {
        std::vector<std::vector<float>> buffers;
    };

    void run(std::span<const float> input, std::span<float> output, Scratch& scratch) const;

private:
    enum class Op { affine, scale_shift, relu, sigmoid, concat };
    struct Step {
        Op op;
        std::size_t in_dim = 0;
        std::size_t out_dim = 0;
        std::size_t source = 0;  // concat: step whose output is appended
        Eigen::MatrixXf weight;  // affine: out_dim x in_dim
        Eigen::VectorXf shift;   // affine bias or batch-norm shift
        Eigen::VectorXf scale;   // scale_shift only
    };

    std::size_t input_dim_;
    std::size_t output_dim_;
    std::vector<Step> steps_;
};

}  // namespace ndec
