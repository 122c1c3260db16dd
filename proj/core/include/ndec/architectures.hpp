#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "ndec/linear_code.hpp"
#include "ndec/mlp.hpp"
#include "ndec/rng.hpp"

namespace ndec {

enum class Variant {
    bch6345,             // 6 x [dense(300) + relu]
    bch6336,             // 7 x [dense(504) + batch_norm + sigmoid], skip 1 -> 4
    bch6336_no_bn,       // as bch6336 without batch_norm
    bch6336_relu_no_bn,  // as bch6336_no_bn with relu hidden activations
    custom,
};

std::string to_string(Variant v);
Variant parse_variant(const std::string& name);

/// Hidden-block description for Variant::custom. Block b (0-based) is
/// dense(widths[b]) [+ batch_norm] + activation. A skip (from, to) appends
/// the output of block `from` to the input of block `to` (from < to - 1).
struct CustomArchitecture {
    std::vector<std::size_t> hidden;
    LayerKind activation = LayerKind::relu;
    bool batch_norm = false;
    std::optional<std::pair<std::size_t, std::size_t>> skip;
};

/// Layer list for the given variant; the code fixes input and output widths.
std::vector<LayerSpec> architecture_specs(const LinearCode& code, Variant variant,
                                          const CustomArchitecture& custom = {});

std::vector<LayerSpec> custom_specs(std::size_t output_dim, const CustomArchitecture& arch);

/// Glorot-initialized network for the variant.
Mlp build_architecture(const LinearCode& code, Variant variant, Rng& rng, const CustomArchitecture& custom = {});

/// Parses "4x128" or "300,300,200" into hidden widths.
std::vector<std::size_t> parse_hidden_widths(const std::string& text);

}  // namespace ndec
