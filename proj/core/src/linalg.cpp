#include "mqw/linalg.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace mqw {

namespace {

void require(bool ok, const std::string& message) {
  if (!ok) throw std::invalid_argument(message);
}

double max_abs(const CMatrix& m) { return m.cwiseAbs().maxCoeff(); }

}  // namespace

void ModelParams::validate() const {
  require(std::isfinite(gamma), "ModelParams.gamma must be finite");
  require(std::isfinite(u), "ModelParams.u must be finite");
  require(std::isfinite(tau) && tau > 0.0, "ModelParams.tau must be positive");
  require(sites >= 2, "ModelParams.sites must be >= 2");
}

HermitianMatrix::HermitianMatrix(CMatrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), "HermitianMatrix: matrix must be square");
  require(m_.rows() >= 2, "HermitianMatrix: dim must be >= 2");
  require(max_abs(m_ - m_.adjoint().eval()) <= kConstructionTol,
          "HermitianMatrix: max|M - M^dag| exceeds 1e-12");
}

UnitaryMatrix::UnitaryMatrix(CMatrix m) : m_(std::move(m)) {
  require(m_.rows() == m_.cols(), "UnitaryMatrix: matrix must be square");
  require(m_.rows() >= 2, "UnitaryMatrix: dim must be >= 2");
  CMatrix gram = m_.adjoint() * m_;
  gram.diagonal().array() -= 1.0;
  require(max_abs(gram) <= kConstructionTol,
          "UnitaryMatrix: max|U^dag U - 1| exceeds 1e-12");
}

StateVector::StateVector(CVector v) : v_(std::move(v)) {
  require(v_.size() >= 2, "StateVector: dim must be >= 2");
  require(std::abs(v_.norm() - 1.0) <= kConstructionTol,
          "StateVector: norm deviates from 1 by more than 1e-12");
}

StateVector StateVector::basis(Eigen::Index dim, Eigen::Index index) {
  require(dim >= 2, "StateVector::basis: dim must be >= 2");
  require(index >= 0 && index < dim, "StateVector::basis: index out of range");
  CVector v = CVector::Zero(dim);
  v[index] = 1.0;
  return StateVector(std::move(v));
}

HermitianMatrix build_two_site_hamiltonian(const ModelParams& params) {
  params.validate();
  CMatrix h(2, 2);
  h << Complex(params.u, 0.0), Complex(-params.gamma, 0.0),
       Complex(-params.gamma, 0.0), Complex(-params.u, 0.0);
  return HermitianMatrix(std::move(h));
}

HermitianMatrix build_chain_hamiltonian(double gamma, std::span<const double> potentials) {
  require(std::isfinite(gamma), "build_chain_hamiltonian: gamma must be finite");
  const auto l = static_cast<Eigen::Index>(potentials.size());
  require(l >= 2, "build_chain_hamiltonian: need at least 2 sites");
  CMatrix h = CMatrix::Zero(l, l);
  for (Eigen::Index i = 0; i < l; ++i) {
    require(std::isfinite(potentials[i]), "build_chain_hamiltonian: potentials must be finite");
    h(i, i) = potentials[i];
    if (i + 1 < l) {
      h(i, i + 1) = -gamma;
      h(i + 1, i) = -gamma;
    }
  }
  return HermitianMatrix(std::move(h));
}

HermitianMatrix build_chain_hamiltonian(const ModelParams& params) {
  params.validate();
  std::vector<double> potentials(static_cast<std::size_t>(params.sites), params.u);
  return build_chain_hamiltonian(params.gamma, potentials);
}

UnitaryMatrix exact_unitary(const HermitianMatrix& h, double t) {
  require(std::isfinite(t), "exact_unitary: t must be finite");
  const Eigen::Index dim = h.dim();
  if (dim == 2) {
    // H = a0 + ax sx + ay sy + az sz; exp(-iHt) = e^{-i a0 t} (cos(wt)
    // - i sin(wt) (a.sigma)/w) with w = |a|.
    const CMatrix& m = h.matrix();
    const double a0 = 0.5 * (m(0, 0).real() + m(1, 1).real());
    const double az = 0.5 * (m(0, 0).real() - m(1, 1).real());
    const double ax = m(1, 0).real();
    const double ay = m(1, 0).imag();
    const double w = std::sqrt(ax * ax + ay * ay + az * az);
    const Complex phase = std::exp(Complex(0.0, -a0 * t));
    CMatrix u(2, 2);
    if (w == 0.0) {
      u = phase * CMatrix::Identity(2, 2);
    } else {
      const double c = std::cos(w * t);
      const double s = std::sin(w * t) / w;
      u(0, 0) = phase * Complex(c, -s * az);
      u(1, 1) = phase * Complex(c, s * az);
      u(0, 1) = phase * (Complex(0.0, -s) * Complex(ax, -ay));
      u(1, 0) = phase * (Complex(0.0, -s) * Complex(ax, ay));
    }
    return UnitaryMatrix(std::move(u));
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  require(solver.info() == Eigen::Success, "exact_unitary: eigendecomposition failed");
  CVector phases(dim);
  for (Eigen::Index i = 0; i < dim; ++i)
    phases[i] = std::exp(Complex(0.0, -solver.eigenvalues()[i] * t));
  CMatrix u = solver.eigenvectors() * phases.asDiagonal() * solver.eigenvectors().adjoint();
  return UnitaryMatrix(std::move(u));
}

SpectralData spectral_data(const HermitianMatrix& h, double tau) {
  require(std::isfinite(tau) && tau > 0.0, "spectral_data: tau must be positive");
  Eigen::SelfAdjointEigenSolver<CMatrix> solver(h.matrix());
  require(solver.info() == Eigen::Success, "spectral_data: eigendecomposition failed");
  SpectralData data;
  data.energies = solver.eigenvalues();  // ascending
  data.eigenvectors = solver.eigenvectors();
  if (h.dim() == 2)
    data.c_parameter = std::cos(0.5 * (data.energies[1] - data.energies[0]) * tau);
  return data;
}

}  // namespace mqw
