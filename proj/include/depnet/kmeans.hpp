#pragma once

#include <cstdint>
#include <vector>

namespace depnet {

struct KMeansResult {
  std::vector<int> assignments;               // one per point
  std::vector<std::vector<double>> centroids; // k rows
  double inertia = 0;                         // sum of squared distances
  int iterations = 0;
};

// Lloyd's algorithm with k-means++ seeding. Deterministic for a fixed
// seed; stops when assignments are stable or max_iters is reached.
// Inertia is checked to be non-increasing on every iteration.
KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    uint64_t seed, int max_iters = 100);

double squared_distance(const std::vector<double>& a, const std::vector<double>& b);

}  // namespace depnet
