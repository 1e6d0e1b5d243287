#pragma once

namespace mqw {

// Tolerances shared across the library.
inline constexpr double kConstructionTol = 1e-12;  // Hermiticity/unitarity/norm checks
inline constexpr double kDerivedTol = 1e-10;       // cross-path agreement of derived values
inline constexpr double kDegenerateTol = 1e-12;    // |c^2 - 1| below this routes to the exact branch

// Two-site basis convention used everywhere:
//   index 0 <-> |01> <-> site 2,  index 1 <-> |10> <-> site 1.
// Detection statistics are invariant under gamma -> -gamma and u -> -u.
struct ModelParams {
  double gamma = -1.0;  // hopping amplitude
  double u = 0.0;       // on-site potential (+u at site 2, -u at site 1)
  double tau = 0.4;     // time between measurements
  int sites = 2;        // chain length l (uniform-potential chain builder)

  // Throws std::invalid_argument naming the offending field.
  void validate() const;
};

}  // namespace mqw
