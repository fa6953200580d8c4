#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "wembed/vocab.hpp"

namespace wembed {

/// Binary Huffman coding of a vocabulary. For word w, codes[w][k] is the
/// branch taken at inner node paths[w][k], root first. Inner nodes are
/// numbered 0..|V|-2 in creation order, so the root is |V|-2.
struct HuffmanTree {
  std::vector<std::vector<std::uint8_t>> codes;
  std::vector<std::vector<std::uint32_t>> paths;
  std::size_t inner_nodes = 0;

  std::size_t size() const noexcept { return codes.size(); }
};

/// Standard Huffman construction; among equal counts the node with the
/// lower id (leaves 0..|V|-1, then inner nodes in creation order) is merged
/// first and receives bit 0. Throws StructureError for fewer than 2 words.
HuffmanTree build_huffman(std::span<const std::uint64_t> counts);
HuffmanTree build_huffman(const Vocabulary& vocab);

} // namespace wembed
