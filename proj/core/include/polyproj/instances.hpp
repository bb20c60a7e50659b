#pragma once

#include <cstddef>
#include <random>

#include "polyproj/core.hpp"
#include "polyproj/latticial.hpp"

namespace polyproj {

/// A projection problem whose polyhedron is nonempty by construction.
struct Instance {
  Polyhedron poly;
  Vector point;
  Vector interior;  // a point strictly inside every halfspace
};

struct InstanceOptions {
  double min_slack = 0.05;
  double max_slack = 1.0;
  /// Standard deviation of the query point around the interior point.
  double spread = 3.0;
};

/// Gaussian normals, a Gaussian interior point c, offsets
/// eta_i = <c|u_i> + slack_i with slack_i uniform in [min_slack, max_slack].
Instance random_instance(std::mt19937_64& rng, std::size_t dim, std::size_t n,
                         const InstanceOptions& opts = {});

/// Like random_instance, but roughly half of the halfspaces are positively
/// scaled copies of earlier ones (same halfspace, different normal length),
/// so several supports represent the same projection.
Instance random_redundant_instance(std::mt19937_64& rng, std::size_t dim, std::size_t n,
                                   const InstanceOptions& opts = {});

/// A latticial cone whose basis is the identity plus a Gaussian perturbation,
/// redrawn until the elimination pivot ratio stays below 1e3.
LatticialCone random_cone(std::mt19937_64& rng, std::size_t dim);

/// A Gaussian vector with the given standard deviation.
Vector random_vector(std::mt19937_64& rng, std::size_t dim, double sigma = 1.0);

}  // namespace polyproj
