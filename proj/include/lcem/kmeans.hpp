#pragma once

// Lloyd's k-means with k-means++ seeding over dense Eigen row matrices.
//
// Distances are squared Euclidean. Candidate distances come from a blocked
// ||x||^2 + ||c||^2 - 2 x.c expansion evaluated in double; the inertia and
// reseeding decisions use exact per-row differences. Work is split into
// fixed-size row blocks so results do not depend on the thread count.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lcem/corpus_io.hpp"
#include "lcem/error.hpp"

namespace lcem {

struct ClusteringSpec {
  std::size_t k = 600;
  std::uint64_t seed = 0;
  int max_iterations = 300;
  /// Stop once (previous - current) / previous inertia falls below this.
  double tolerance = 1e-4;
};

inline void validate(const ClusteringSpec& spec) {
  if (spec.k < 1) throw Error(ErrorCode::InvalidArgument, "k must be at least 1");
  if (spec.max_iterations < 1) {
    throw Error(ErrorCode::InvalidArgument, "max_iterations must be at least 1");
  }
  if (!(spec.tolerance >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "tolerance must be non-negative");
  }
}

template <typename Scalar>
struct Clustering {
  RowMatrix<Scalar> centroids;
  std::vector<std::size_t> assignments;
  double inertia = 0.0;
  int iterations_run = 0;
  /// Inertia after each assignment step, in order.
  std::vector<double> inertia_trace;
};

namespace detail {

inline constexpr Eigen::Index kRowBlock = 256;

inline double unit_interval(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

template <typename Scalar>
double squared_distance(const RowMatrix<Scalar>& points, Eigen::Index row,
                        const RowMatrix<Scalar>& centroids, Eigen::Index centroid) {
  return (points.row(row).template cast<double>() - centroids.row(centroid).template cast<double>())
      .squaredNorm();
}

/// Assigns every row to its nearest centroid (lowest index on ties) and
/// stores the exact squared distance to it.
template <typename Scalar>
void assign_nearest(const RowMatrix<Scalar>& points, const RowMatrix<Scalar>& centroids,
                    std::vector<std::size_t>& assignments, std::vector<double>& distances) {
  const Eigen::Index n = points.rows();
  const Eigen::Index k = centroids.rows();
  assignments.resize(static_cast<std::size_t>(n));
  distances.resize(static_cast<std::size_t>(n));

  const RowMatrix<double> centers = centroids.template cast<double>();
  const Eigen::VectorXd center_norms = centers.rowwise().squaredNorm();
  const Eigen::Index blocks = (n + kRowBlock - 1) / kRowBlock;

#pragma omp parallel for schedule(static)
  for (Eigen::Index b = 0; b < blocks; ++b) {
    const Eigen::Index begin = b * kRowBlock;
    const Eigen::Index count = std::min(kRowBlock, n - begin);
    const RowMatrix<double> block = points.middleRows(begin, count).template cast<double>();
    const Eigen::VectorXd block_norms = block.rowwise().squaredNorm();
    const RowMatrix<double> dots = block * centers.transpose();
    for (Eigen::Index i = 0; i < count; ++i) {
      Eigen::Index best = 0;
      double best_distance = std::numeric_limits<double>::infinity();
      for (Eigen::Index j = 0; j < k; ++j) {
        const double d = block_norms(i) + center_norms(j) - 2.0 * dots(i, j);
        if (d < best_distance) {
          best_distance = d;
          best = j;
        }
      }
      const auto row = static_cast<std::size_t>(begin + i);
      assignments[row] = static_cast<std::size_t>(best);
      distances[row] = squared_distance(points, begin + i, centroids, best);
    }
  }
}

template <typename Scalar>
RowMatrix<Scalar> plus_plus_seeds(const RowMatrix<Scalar>& points, std::size_t k,
                                  std::mt19937_64& rng) {
  const Eigen::Index n = points.rows();
  RowMatrix<Scalar> centroids(static_cast<Eigen::Index>(k), points.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);
  std::vector<double> nearest(static_cast<std::size_t>(n), 0.0);

  auto first = static_cast<Eigen::Index>(unit_interval(rng) * static_cast<double>(n));
  first = std::min(first, n - 1);
  centroids.row(0) = points.row(first);
  chosen[static_cast<std::size_t>(first)] = true;

#pragma omp parallel for schedule(static)
  for (Eigen::Index r = 0; r < n; ++r) {
    nearest[static_cast<std::size_t>(r)] = squared_distance(points, r, centroids, 0);
  }

  for (std::size_t c = 1; c < k; ++c) {
    double total = 0.0;
    for (double d : nearest) total += d;

    Eigen::Index pick = -1;
    if (total > 0.0) {
      const double target = unit_interval(rng) * total;
      double cumulative = 0.0;
      Eigen::Index last_positive = -1;
      for (Eigen::Index r = 0; r < n; ++r) {
        const double d = nearest[static_cast<std::size_t>(r)];
        if (d <= 0.0) continue;
        last_positive = r;
        cumulative += d;
        if (cumulative > target) {
          pick = r;
          break;
        }
      }
      if (pick < 0) pick = last_positive;
    } else {
      // All remaining points coincide with a chosen seed.
      for (Eigen::Index r = 0; r < n; ++r) {
        if (!chosen[static_cast<std::size_t>(r)]) {
          pick = r;
          break;
        }
      }
    }
    centroids.row(static_cast<Eigen::Index>(c)) = points.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;

    const auto latest = static_cast<Eigen::Index>(c);
#pragma omp parallel for schedule(static)
    for (Eigen::Index r = 0; r < n; ++r) {
      const double d = squared_distance(points, r, centroids, latest);
      auto& slot = nearest[static_cast<std::size_t>(r)];
      if (d < slot) slot = d;
    }
  }
  return centroids;
}

/// Moves the farthest points into empty clusters, then recomputes means.
template <typename Scalar>
RowMatrix<Scalar> update_centroids(const RowMatrix<Scalar>& points, std::size_t k,
                                   std::vector<std::size_t>& assignments,
                                   std::vector<double>& distances) {
  const std::size_t n = assignments.size();
  std::vector<std::size_t> counts(k, 0);
  for (std::size_t a : assignments) ++counts[a];

  for (std::size_t j = 0; j < k; ++j) {
    if (counts[j] != 0) continue;
    std::size_t far = n;
    for (std::size_t r = 0; r < n; ++r) {
      if (counts[assignments[r]] <= 1) continue;
      if (far == n || distances[r] > distances[far]) far = r;
    }
    --counts[assignments[far]];
    assignments[far] = j;
    distances[far] = 0.0;
    counts[j] = 1;
  }

  // Bucket rows by cluster so each mean is summed in ascending row order.
  std::vector<std::size_t> offsets(k + 1, 0);
  for (std::size_t j = 0; j < k; ++j) offsets[j + 1] = offsets[j] + counts[j];
  std::vector<std::size_t> members(n);
  std::vector<std::size_t> cursor(offsets.begin(), offsets.end() - 1);
  for (std::size_t r = 0; r < n; ++r) members[cursor[assignments[r]]++] = r;

  RowMatrix<Scalar> centroids(static_cast<Eigen::Index>(k), points.cols());
  const auto clusters = static_cast<std::ptrdiff_t>(k);
#pragma omp parallel for schedule(dynamic, 8)
  for (std::ptrdiff_t jj = 0; jj < clusters; ++jj) {
    const auto j = static_cast<std::size_t>(jj);
    Eigen::RowVectorXd sum = Eigen::RowVectorXd::Zero(points.cols());
    for (std::size_t m = offsets[j]; m < offsets[j + 1]; ++m) {
      sum += points.row(static_cast<Eigen::Index>(members[m])).template cast<double>();
    }
    sum /= static_cast<double>(counts[j]);
    centroids.row(static_cast<Eigen::Index>(j)) = sum.template cast<Scalar>();
  }
  return centroids;
}

inline double sum_in_order(const std::vector<double>& values) {
  double total = 0.0;
  for (double v : values) total += v;
  return total;
}

}  // namespace detail

/// Clusters the rows of `points` into spec.k groups. Identical inputs and
/// seed give bit-identical results regardless of thread count.
template <typename Derived>
Clustering<typename Derived::Scalar> kmeans(const Eigen::MatrixBase<Derived>& points_in,
                                            const ClusteringSpec& spec) {
  using Scalar = typename Derived::Scalar;
  validate(spec);
  const RowMatrix<Scalar> points = points_in;
  const auto n = static_cast<std::size_t>(points.rows());
  if (n < spec.k) {
    throw Error(ErrorCode::TooFewRows, "k=" + std::to_string(spec.k) + " exceeds " +
                                           std::to_string(n) + " rows");
  }

  std::mt19937_64 rng(spec.seed);
  Clustering<Scalar> result;
  RowMatrix<Scalar> centroids = detail::plus_plus_seeds(points, spec.k, rng);
  std::vector<std::size_t> assignments;
  std::vector<double> distances;

  RowMatrix<Scalar> previous_centroids;
  std::vector<std::size_t> previous_assignments;

  for (int iteration = 0;; ++iteration) {
    detail::assign_nearest(points, centroids, assignments, distances);
    const double inertia = detail::sum_in_order(distances);

    if (!result.inertia_trace.empty()) {
      const double previous = result.inertia_trace.back();
      if (inertia > previous) {
        // Rounding in the mean update made things worse; keep the last state.
        centroids = std::move(previous_centroids);
        assignments = std::move(previous_assignments);
        break;
      }
      result.inertia_trace.push_back(inertia);
      if (previous == 0.0 || (previous - inertia) <= spec.tolerance * previous) break;
    } else {
      result.inertia_trace.push_back(inertia);
    }
    if (inertia == 0.0 || iteration + 1 >= spec.max_iterations) break;

    previous_centroids = centroids;
    previous_assignments = assignments;
    centroids = detail::update_centroids(points, spec.k, assignments, distances);
  }

  result.inertia = result.inertia_trace.back();
  result.iterations_run = static_cast<int>(result.inertia_trace.size());
  result.centroids = std::move(centroids);
  result.assignments = std::move(assignments);
  return result;
}

}  // namespace lcem
