#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "ndec/mlp.hpp"

namespace ndec {

/// On-disk network, little-endian throughout:
///
///   "NDEC"            magic, 4 bytes
///   u16 version       kModelFormatVersion
///   u16 n, u16 k      code the network was trained for
///   u16 layer_count
///   per layer:        u8 kind tag (LayerKind), then u32 dims
///                       dense:          in, out
///                       batch_norm:     width
///                       relu / sigmoid: width
///                       concat_skip:    source layer, in, out
///   parameters        f64, layer order; dense W (row-major in x out) then b,
///                     batch_norm gamma, beta, running mean, running var
///   u32 crc32         over every preceding byte
inline constexpr std::uint16_t kModelFormatVersion = 1;

struct StoredModel {
    std::uint16_t n = 0;
    std::uint16_t k = 0;
    Mlp model;
};

std::vector<std::uint8_t> serialize_model(const Mlp& model, std::size_t n, std::size_t k);
StoredModel deserialize_model(const std::vector<std::uint8_t>& bytes);

/// Writes through a temporary file and renames, so a partially written file
/// never replaces an existing checkpoint.
void save_model(const std::string& path, const Mlp& model, std::size_t n, std::size_t k);
StoredModel load_model(const std::string& path);

std::uint32_t crc32_of(const std::uint8_t* data, std::size_t size);

}  // namespace ndec
