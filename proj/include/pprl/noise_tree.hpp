#pragma once

#include <cstdint>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include "pprl/dp.hpp"
#include "pprl/linalg.hpp"

namespace pprl {

struct OutOfRange : std::out_of_range {
  explicit OutOfRange(const std::string& what) : std::out_of_range(what) {}
};

// Heap node ids of the dyadic decomposition of the prefix [1, k] in a
// complete binary tree padded to `padded` leaves (power of two). At most
// ceil(log2 n) + 1 nodes for any prefix of an n-leaf tree.
std::vector<std::uint64_t> dyadic_cover(int k, int padded);
int padded_leaves(int num_leaves);

enum class TreePayload { GaussianMatrix, GaussianVector, LaplaceMatrix, LaplaceVector };

// Binary-tree aggregation: releases prefix sums of per-leaf noise while each
// query touches only O(log n) nodes. Payloads are sampled lazily from
// (seed, node id) and cached, so repeated queries return identical values.
class NoiseTree {
 public:
  NoiseTree(TreePayload payload, int dim, double sigma, std::uint64_t seed, int num_leaves);

  int num_leaves() const { return num_leaves_; }
  // Number of nodes summed for prefix [1, k]; bounded by ceil(log2 n) + 1.
  int node_count(int k) const;

  // Sum of node payloads covering [1, k]. Matrix trees only.
  SymmetricMatrix prefix_matrix(int k) const;
  // Vector trees only.
  Vec prefix_vector(int k) const;

 private:
  void check_prefix(int k) const;
  SymmetricMatrix node_matrix(std::uint64_t id) const;
  Vec node_vector(std::uint64_t id) const;

  TreePayload payload_;
  int dim_;
  double sigma_;
  std::uint64_t seed_;
  int num_leaves_;
  int padded_;
  mutable std::unordered_map<std::uint64_t, SymmetricMatrix> mat_cache_;
  mutable std::unordered_map<std::uint64_t, Vec> vec_cache_;
};

}  // namespace pprl
