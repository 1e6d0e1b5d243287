#pragma once

#include <Eigen/Dense>
#include <complex>
#include <optional>
#include <span>

#include "mqw/model.hpp"

namespace mqw {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;

// Value wrapper enforcing max|M - M^dag| <= kConstructionTol and dim >= 2.
class HermitianMatrix {
 public:
  explicit HermitianMatrix(CMatrix m);
  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

// Value wrapper enforcing max|U^dag U - 1| <= kConstructionTol and dim >= 2.
class UnitaryMatrix {
 public:
  explicit UnitaryMatrix(CMatrix m);
  const CMatrix& matrix() const { return m_; }
  Eigen::Index dim() const { return m_.rows(); }

 private:
  CMatrix m_;
};

// Normalized state, |norm - 1| <= kConstructionTol. Unnormalized intermediates
// inside the propagation loops use raw CVector on purpose.
class StateVector {
 public:
  explicit StateVector(CVector v);
  static StateVector basis(Eigen::Index dim, Eigen::Index index);
  const CVector& vector() const { return v_; }
  Eigen::Index dim() const { return v_.size(); }

 private:
  CVector v_;
};

struct SpectralData {
  Eigen::VectorXd energies;  // ascending
  CMatrix eigenvectors;      // columns, same order as energies
  // cos(half the spectral gap * tau); only set for dim 2, where it equals
  // cos(sqrt(u^2 + gamma^2) * tau) for the canonical two-site Hamiltonian.
  std::optional<double> c_parameter;
};

// Canonical two-site Hamiltonian [[u, -gamma], [-gamma, -u]]
// (= -gamma sigma_x + u sigma_z in the index0=|01>, index1=|10> basis).
HermitianMatrix build_two_site_hamiltonian(const ModelParams& params);

// Open-boundary tight-binding chain in the site basis (index i = site i+1):
// diagonal = per-site potentials, first off-diagonals = -gamma.
HermitianMatrix build_chain_hamiltonian(double gamma, std::span<const double> potentials);
// Uniform-potential convenience overload, length = params.sites.
HermitianMatrix build_chain_hamiltonian(const ModelParams& params);

// exp(-i H t): Pauli closed form for dim 2, eigendecomposition otherwise.
UnitaryMatrix exact_unitary(const HermitianMatrix& h, double t);

SpectralData spectral_data(const HermitianMatrix& h, double tau);

}  // namespace mqw
