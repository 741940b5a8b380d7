#pragma once

#include <string>
#include <vector>

#include "edclust/embedding.hpp"

namespace edclust {

// One agglomeration step.  Cluster ids: 0..d-1 are leaves; merge i creates
// cluster d+i.  Heights are the merged pair's dissimilarity at merge time.
struct MergeStep {
  int left = 0;
  int right = 0;
  double height = 0.0;
  int size = 0;
};

struct Dendrogram {
  int leaves = 0;
  std::vector<MergeStep> merges;
};

// Cluster labels 1..K, one per element, every label used at least once.
struct Partition {
  std::vector<int> labels;

  int k() const;
  int size() const { return static_cast<int>(labels.size()); }
};

struct SilhouetteReport {
  std::vector<double> s;
  double average = 0.0;
  int k = 0;
};

struct KSelection {
  int best_k = 0;
  std::vector<SilhouetteReport> reports;  // one per K = 2..k_max, in order
};

// Agglomerative clustering with the size-weighted (generalized Ward)
// Lance-Williams update
//   d(C_j u C_k, C_l) = ((n_j+n_l) d_jl + (n_k+n_l) d_kl - n_l d_jk)
//                       / (n_j + n_k + n_l).
// At each step the pair with minimal current dissimilarity merges; equal
// minima break toward the lexicographically smallest (id, id) pair.
Dendrogram agglomerate(const DissimilarityMatrix& d);

// Partition from the first d-K merges (equivalently: undo the last K-1).
Partition cut(const Dendrogram& dend, int k);

// Silhouette width s(i) = (b_i - a_i)/max(a_i, b_i) where a_i is the mean
// in-cluster dissimilarity (excluding i) and b_i the smallest mean
// dissimilarity to another cluster; s(i) = 0 for singleton members.
SilhouetteReport silhouette(const DissimilarityMatrix& d, const Partition& part);

// Evaluates K = 2..k_max by cut + silhouette and returns the K with maximal
// average width (ties toward smaller K).
KSelection select_k(const Dendrogram& dend, const DissimilarityMatrix& d, int k_max);

inline constexpr int default_k_max(int d) { return d - 1 < 10 ? d - 1 : 10; }

// {"leaves": [names], "merges": [{left, right, height, size}]}
std::string dendrogram_to_json(const Dendrogram& dend, const std::vector<std::string>& names);

// Rooted Newick tree; branch length = parent height - child height (leaves
// sit at height 0).
std::string dendrogram_to_newick(const Dendrogram& dend, const std::vector<std::string>& names);

}  // namespace edclust
