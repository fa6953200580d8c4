#include "wembed/huffman.hpp"

#include <algorithm>
#include <queue>

#include "wembed/error.hpp"

namespace wembed {

HuffmanTree build_huffman(std::span<const std::uint64_t> counts) {
  const std::size_t n = counts.size();
  if (n < 2) throw StructureError("hierarchical softmax needs at least two words");

  using Node = std::pair<std::uint64_t, std::uint32_t>; // (count, node id)
  std::priority_queue<Node, std::vector<Node>, std::greater<>> heap;
  for (std::uint32_t i = 0; i < n; ++i) heap.push({counts[i], i});

  std::vector<std::uint32_t> parent(2 * n - 1, 0);
  std::vector<std::uint8_t> bit(2 * n - 1, 0);
  std::uint32_t next = static_cast<std::uint32_t>(n);
  while (heap.size() > 1) {
    const Node a = heap.top();
    heap.pop();
    const Node b = heap.top();
    heap.pop();
    parent[a.second] = next;
    parent[b.second] = next;
    bit[a.second] = 0;
    bit[b.second] = 1;
    heap.push({a.first + b.first, next});
    ++next;
  }
  const std::uint32_t root = next - 1;

  HuffmanTree tree;
  tree.inner_nodes = n - 1;
  tree.codes.resize(n);
  tree.paths.resize(n);
  for (std::uint32_t w = 0; w < n; ++w) {
    auto& code = tree.codes[w];
    auto& path = tree.paths[w];
    for (std::uint32_t node = w; node != root; node = parent[node]) {
      code.push_back(bit[node]);
      path.push_back(parent[node] - static_cast<std::uint32_t>(n));
    }
    std::reverse(code.begin(), code.end());
    std::reverse(path.begin(), path.end());
  }
  return tree;
}

HuffmanTree build_huffman(const Vocabulary& vocab) {
  std::vector<std::uint64_t> counts;
  counts.reserve(vocab.size());
  for (const auto& e : vocab.entries()) counts.push_back(e.count);
  return build_huffman(counts);
}

} // namespace wembed
