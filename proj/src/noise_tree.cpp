#include "pprl/noise_tree.hpp"

#include <bit>

namespace pprl {

namespace {
// Payloads are deterministic in (seed, node id), so only the heavily reused
// upper levels are worth caching; short blocks are resampled on demand.
constexpr int kCacheMinBlock = 64;

int block_length(std::uint64_t id, int padded) {
  return padded / static_cast<int>(std::bit_floor(id));
}
}  // namespace

int padded_leaves(int num_leaves) {
  int p = 1;
  while (p < num_leaves) p <<= 1;
  return p;
}

std::vector<std::uint64_t> dyadic_cover(int k, int padded) {
  // Walk maximal aligned blocks left to right: [1..2^a], then the largest
  // aligned block starting right after, and so on. Heap ids: root 1, node
  // covering an aligned block of size `len` starting at `start` is
  // padded/len + (start-1)/len.
  std::vector<std::uint64_t> ids;
  int start = 1;
  int remaining = k;
  while (remaining > 0) {
    int len = 1;
    // largest power of two that divides (start-1) alignment and fits
    while (len * 2 <= remaining && ((start - 1) % (len * 2)) == 0) len <<= 1;
    ids.push_back(static_cast<std::uint64_t>(padded / len) + static_cast<std::uint64_t>((start - 1) / len));
    start += len;
    remaining -= len;
  }
  return ids;
}

NoiseTree::NoiseTree(TreePayload payload, int dim, double sigma, std::uint64_t seed, int num_leaves)
    : payload_(payload),
      dim_(dim),
      sigma_(sigma),
      seed_(seed),
      num_leaves_(num_leaves),
      padded_(padded_leaves(num_leaves)) {
  if (num_leaves < 1) throw OutOfRange("tree needs at least one leaf");
}

void NoiseTree::check_prefix(int k) const {
  if (k < 1 || k > num_leaves_)
    throw OutOfRange("prefix " + std::to_string(k) + " out of [1, " + std::to_string(num_leaves_) + "]");
}

int NoiseTree::node_count(int k) const {
  check_prefix(k);
  return static_cast<int>(dyadic_cover(k, padded_).size());
}

SymmetricMatrix NoiseTree::node_matrix(std::uint64_t id) const {
  const std::uint64_t node_seed = mix_seed({seed_, id});
  return (payload_ == TreePayload::GaussianMatrix)
             ? sample_symmetric_gaussian(dim_, sigma_, node_seed)
             : sample_symmetric_laplace(dim_, sigma_, node_seed);
}

Vec NoiseTree::node_vector(std::uint64_t id) const {
  const std::uint64_t node_seed = mix_seed({seed_, id});
  return (payload_ == TreePayload::GaussianVector) ? sample_gaussian_vector(dim_, sigma_, node_seed)
                                                   : sample_laplace_vector(dim_, sigma_, node_seed);
}

SymmetricMatrix NoiseTree::prefix_matrix(int k) const {
  check_prefix(k);
  if (payload_ != TreePayload::GaussianMatrix && payload_ != TreePayload::LaplaceMatrix)
    throw std::logic_error("prefix_matrix on a vector tree");
  SymmetricMatrix sum(dim_);
  for (std::uint64_t id : dyadic_cover(k, padded_)) {
    if (block_length(id, padded_) >= kCacheMinBlock) {
      auto it = mat_cache_.find(id);
      if (it == mat_cache_.end()) it = mat_cache_.emplace(id, node_matrix(id)).first;
      sum += it->second;
    } else {
      sum += node_matrix(id);
    }
  }
  return sum;
}

Vec NoiseTree::prefix_vector(int k) const {
  check_prefix(k);
  if (payload_ != TreePayload::GaussianVector && payload_ != TreePayload::LaplaceVector)
    throw std::logic_error("prefix_vector on a matrix tree");
  Vec sum(dim_, 0.0);
  for (std::uint64_t id : dyadic_cover(k, padded_)) {
    if (block_length(id, padded_) >= kCacheMinBlock) {
      auto it = vec_cache_.find(id);
      if (it == vec_cache_.end()) it = vec_cache_.emplace(id, node_vector(id)).first;
      axpy(1.0, it->second, sum);
    } else {
      axpy(1.0, node_vector(id), sum);
    }
  }
  return sum;
}

}  // namespace pprl
