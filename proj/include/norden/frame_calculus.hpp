#pragma once

#include "norden/model.hpp"
#include "norden/tensor.hpp"

namespace norden {

/// Linear connection in the frame: nabla_{e_i} e_j = gamma(k, i, j) e_k.
struct ConnectionCoeffs {
  DenseTensor gamma;
  bool metric_compatible = false;
  bool torsion_free = false;

  int dim() const noexcept { return gamma.dim(); }
};

/// Christoffel symbols of `metric` from the general Koszul formula
///   2 g(nabla_i e_j, e_l) = e_i g_jl + e_j g_il - e_l g_ij + C_ijl - C_jli + C_lij,
/// with C_abc = g([e_a,e_b], e_c).
DenseTensor koszul_christoffels(const DenseTensor& metric, const DenseTensor& metric_inv,
                                const DenseTensor& metric_derivative, const DenseTensor& brackets);

ConnectionCoeffs levi_civita(const PointData& point);
ConnectionCoeffs levi_civita(const Model& model);

/// Chart mode: Christoffel symbols with the metric derivatives replaced by
/// central differences of step fd_step. Used to cross-check the exact route.
DenseTensor christoffels_finite_difference(const FrameModel& frame);

/// T(e_i,e_j) = nabla_i e_j - nabla_j e_i - [e_i,e_j] as (k, i, j).
DenseTensor torsion_vector(const DenseTensor& gamma, const DenseTensor& brackets);
/// (a, b, c) = (nabla_a g)(e_b, e_c).
DenseTensor metric_covariant_derivative(const DenseTensor& gamma, const PointData& point);
/// (k, a, b) = ((nabla_a J) e_b)^k.
DenseTensor J_covariant_derivative(const DenseTensor& gamma, const PointData& point);

DenseTensor nabla_J(const ConnectionCoeffs& conn, const PointData& point);

struct FSymmetryResiduals {
  double swap = 0.0;   // F(x,y,z) - F(x,z,y)
  double chain = 0.0;  // F(x,z,y) - F(x,Jy,Jz)
  double jj = 0.0;     // F(x,y,z) - F(x,Jy,Jz)
  double shift = 0.0;  // F(x,Jy,z) + F(x,y,Jz)

  double max() const noexcept;
};

FSymmetryResiduals f_symmetry_residuals(const DenseTensor& F, const DenseTensor& J);

/// F(x,y,z) = g((nabla_x J)y, z). Throws "not a fundamental tensor of a Norden
/// structure" when the symmetries of F fail.
DenseTensor fundamental_F(const DenseTensor& nabla_J, const NordenStructure& structure);

/// N(x,y) and N*(x,y) as (k, x, y).
DenseTensor nijenhuis(const NordenStructure& structure, const DenseTensor& nabla_J);
DenseTensor nijenhuis_assoc(const NordenStructure& structure, const DenseTensor& nabla_J);

/// g^{ij} g^{ks} g((nabla_i J) e_k, (nabla_j J) e_s).
double square_norm(const NordenStructure& structure, const DenseTensor& nabla_J);
/// -2 g^{ij} g^{ks} g((nabla_i J) e_k, (nabla_s J) e_j); equals square_norm on W3.
double square_norm_alt(const NordenStructure& structure, const DenseTensor& nabla_J);

/// g^{ij} F(Jz, e_i, e_j) as a covector in z.
DenseTensor trace_F_J(const DenseTensor& F, const NordenStructure& structure);

struct ClassFlags {
  bool is_kahler = false;
  bool is_quasi_kahler = false;     // cyclic sum of F vanishes
  bool cyclic_FJ_vanishes = false;   // cyclic sum of F(Jx,y,z) vanishes
  bool nstar_vanishes = false;      // N* = 0
  double f_max = 0.0;
  double cyclic_F = 0.0;
  double cyclic_FJ = 0.0;
  double nstar = 0.0;
  double threshold = 0.0;

  bool consistent() const noexcept {
    return is_quasi_kahler == cyclic_FJ_vanishes && is_quasi_kahler == nstar_vanishes;
  }
};

/// Membership residuals against 1e-8 (1 + max|F|).
ClassFlags class_membership(const DenseTensor& F, const NordenStructure& structure);

/// g(N*(x,y), z) written through F.
DenseTensor nijenhuis_assoc_lowered(const DenseTensor& F, const DenseTensor& J);

}  // namespace norden
