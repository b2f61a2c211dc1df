#include "depnet/kmeans.hpp"

#include <cmath>
#include <limits>

#include "depnet/error.hpp"
#include "depnet/rng.hpp"

namespace depnet {

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0;
  for (size_t i = 0; i < a.size(); ++i) {
    double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}

namespace {

int nearest_centroid(const std::vector<double>& p,
                     const std::vector<std::vector<double>>& centroids, double* d2out) {
  int best = 0;
  double best_d = std::numeric_limits<double>::infinity();
  for (size_t c = 0; c < centroids.size(); ++c) {
    double d = squared_distance(p, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = static_cast<int>(c);
    }
  }
  if (d2out) *d2out = best_d;
  return best;
}

std::vector<std::vector<double>> kmeanspp_seed(
    const std::vector<std::vector<double>>& points, int k, Rng& rng) {
  const size_t n = points.size();
  std::vector<std::vector<double>> centers;
  centers.push_back(points[rng.next_below(n)]);
  std::vector<double> d2(n);
  while (static_cast<int>(centers.size()) < k) {
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
      double d = squared_distance(points[i], centers.back());
      if (centers.size() == 1 || d < d2[i]) d2[i] = d;
      total += d2[i];
    }
    size_t pick = 0;
    if (total > 0) {
      double u = rng.next_double() * total;
      for (; pick + 1 < n; ++pick) {
        u -= d2[pick];
        if (u <= 0) break;
      }
      if (d2[pick] == 0) {  // fell onto an already-chosen point; take any weighted one
        for (pick = 0; d2[pick] == 0 && pick + 1 < n; ++pick) {}
      }
    } else {
      pick = rng.next_below(n);  // all points coincide with a center
    }
    centers.push_back(points[pick]);
  }
  return centers;
}

}  // namespace

KMeansResult kmeans(const std::vector<std::vector<double>>& points, int k,
                    uint64_t seed, int max_iters) {
  const size_t n = points.size();
  if (k < 1) throw InvalidArgument("kmeans: k must be >= 1");
  if (static_cast<size_t>(k) > n)
    throw InvalidArgument("kmeans: k (" + std::to_string(k) + ") exceeds point count (" +
                          std::to_string(n) + ")");
  for (const auto& p : points)
    for (double x : p)
      if (!std::isfinite(x)) throw InvalidArgument("kmeans: non-finite input point");

  const size_t dim = points[0].size();
  Rng rng(derive_seed(seed, "kmeans.seed"));
  KMeansResult res;
  res.centroids = kmeanspp_seed(points, k, rng);
  res.assignments.assign(n, -1);

  double prev_inertia = std::numeric_limits<double>::infinity();
  for (int it = 0; it < max_iters; ++it) {
    bool changed = false;
    double inertia = 0;
    for (size_t i = 0; i < n; ++i) {
      double d2;
      int c = nearest_centroid(points[i], res.centroids, &d2);
      inertia += d2;
      if (c != res.assignments[i]) {
        res.assignments[i] = c;
        changed = true;
      }
    }
    if (inertia > prev_inertia * (1 + 1e-12) + 1e-12)
      throw Error("kmeans: inertia increased between iterations");
    prev_inertia = inertia;
    res.inertia = inertia;
    res.iterations = it + 1;
    if (!changed) break;

    std::vector<std::vector<double>> sums(k, std::vector<double>(dim, 0));
    std::vector<long> counts(k, 0);
    for (size_t i = 0; i < n; ++i) {
      counts[res.assignments[i]]++;
      for (size_t d = 0; d < dim; ++d) sums[res.assignments[i]][d] += points[i][d];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        for (size_t d = 0; d < dim; ++d) res.centroids[c][d] = sums[c][d] / counts[c];
      } else {
        // re-seed an emptied cluster at the point farthest from its centroid
        size_t far_i = 0;
        double far_d = -1;
        for (size_t i = 0; i < n; ++i) {
          double d = squared_distance(points[i], res.centroids[res.assignments[i]]);
          if (d > far_d) {
            far_d = d;
            far_i = i;
          }
        }
        res.centroids[c] = points[far_i];
        prev_inertia = std::numeric_limits<double>::infinity();
      }
    }
  }
  return res;
}

}  // namespace depnet
