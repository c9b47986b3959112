#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "norden/connections.hpp"

namespace norden {

using TensorField = std::function<DenseTensor(const PointData&)>;

/// Point data at the evaluation point and, in chart mode, at the central
/// difference stencil u +- h e_a. Frame derivatives of derived fields are taken
/// on this stencil; in Lie-algebra mode left-invariant fields have zero frame
/// derivatives.
class PointStencil {
 public:
  explicit PointStencil(const Model& model);

  const PointData& center() const noexcept { return center_; }
  bool is_chart() const noexcept { return !plus_.empty(); }
  double step() const noexcept { return step_; }

  /// (a, slots of the field...) = e_a(field).
  DenseTensor derivative(const TensorField& field) const;
  DenseTensor derivative(const TensorField& field, const DenseTensor& value_at_center) const;

 private:
  PointData center_;
  std::vector<PointData> plus_, minus_;
  double step_ = 0.0;
};

struct CurvatureData {
  DenseTensor R;      // R(x,y,z,w) = g(R(x,y)z, w)
  DenseTensor ricci;  // rho(y,z) = g^{ij} R(e_i,y,z,e_j)
  double scalar = 0.0;
  std::string source;
};

/// R(x,y)z = nabla_x nabla_y z - nabla_y nabla_x z - nabla_[x,y] z for the
/// connection `gamma` with frame derivatives `gamma_derivative` as (a, k, i, j).
CurvatureData curvature(const DenseTensor& gamma, const DenseTensor& gamma_derivative, const PointData& point,
                        std::string source);
CurvatureData curvature(const PointStencil& stencil, const TensorField& gamma_field, std::string source);

DenseTensor ricci_from(const DenseTensor& R, const NordenStructure& structure);
double scalar_from(const DenseTensor& ricci, const NordenStructure& structure);

/// (a, b, ...) = (nabla_a S)(b, ...) for an all-lower S with frame derivative dS.
DenseTensor covariant_derivative(const DenseTensor& S, const DenseTensor& dS, const DenseTensor& gamma);
DenseTensor covariant_derivative(const PointStencil& stencil, const TensorField& field, const DenseTensor& gamma);

struct KahlerCheck {
  double antisym_first = 0.0;  // L(x,y,z,w) + L(y,x,z,w)
  double antisym_last = 0.0;   // L(x,y,z,w) + L(x,y,w,z)
  double bianchi = 0.0;        // cyclic sum over x,y,z
  double j_invariance = 0.0;   // L(x,y,Jz,Jw) + L(x,y,z,w)
  double tolerance = 0.0;
  bool curvature_like = false;
  bool kahler = false;
};

KahlerCheck kahler_tensor_check(const DenseTensor& L, const NordenStructure& structure);

/// g(A(x,y), B(z,w)) style helpers over lowered (0,3) tensors.
/// pair_vectors(A, B, g_inv)(x,y,z,w) = g(A(x,y), B(z,w)).
DenseTensor pair_vectors(const DenseTensor& A, const DenseTensor& B, const DenseTensor& g_inv);

/// Cyclic sum over x,y,z of (nabla'_x T)(y,z,w) + T(T(x,y),z,w).
DenseTensor bianchi_torsion_residual(const DenseTensor& T, const DenseTensor& nabla_prime_T,
                                     const NordenStructure& structure);

/// R' = R + (nabla_x Q)(y,z,w) - (nabla_y Q)(x,z,w) - g(Q(x,w),Q(y,z)) + g(Q(y,w),Q(x,z)).
DenseTensor rprime_via_deformation(const DenseTensor& R, const DenseTensor& Q, const DenseTensor& nabla_Q,
                                   const NordenStructure& structure);
/// rho' = rho + g^{ij} (nabla_i Q)(y,z,e_j) + g^{ij} g(Q(y,e_j), Q(e_i,z)).
DenseTensor ricci_via_deformation(const DenseTensor& ricci, const DenseTensor& Q, const DenseTensor& nabla_Q,
                                  const NordenStructure& structure);
/// g^{ij} g^{ks} g(Q(e_k,e_j), Q(e_i,e_s)).
double scalar_deformation_term(const DenseTensor& Q, const NordenStructure& structure);
/// 1/16 g^{ij} g^{ks} g(P_jk, P_si), P_jk = (nabla_j J)J e_k - (nabla_{J e_j} J) e_k + 2 (nabla_k J) J e_j.
double p_form_contraction(const DenseTensor& nabla_J, const NordenStructure& structure);
/// g^{ij} g^{ks} g(Q(e_j,e_s), Q(e_i,e_k)).
double crossed_q_contraction(const DenseTensor& Q, const NordenStructure& structure);
/// g^{ij} g^{ks} g((nabla_{J e_s} J) e_j, T(e_i,e_k)).
double nabla_J_torsion_contraction(const DenseTensor& nabla_J, const DenseTensor& T, const NordenStructure& structure);

/// R + Q(T(x,y),z,w) + g(Q(y,z),Q(x,w)) - g(Q(x,z),Q(y,w)).
DenseTensor rprime_parallel_lemma(const DenseTensor& R, const DenseTensor& Q, const DenseTensor& T,
                                  const NordenStructure& structure);
/// R + g(Q(y,z),Q(x,w)) - g(Q(x,z),Q(y,w)) + g(Q(z,w),T(x,y)) + g((nabla_{Jw} J) z, T(x,y)).
DenseTensor rprime_parallel_theorem(const DenseTensor& R, const DenseTensor& Q, const DenseTensor& T,
                                    const DenseTensor& nabla_J, const NordenStructure& structure);

/// g((nabla_x J)Jz + (nabla_{Jx} J)z, (nabla_{Jy} J)w - (nabla_y J)Jw) as (x,y,z,w).
DenseTensor kahler_rprime_identity(const DenseTensor& nabla_J, const NordenStructure& structure);
/// T(T(z,x),y,w) as (z,x,y,w).
DenseTensor torsion_of_torsion(const DenseTensor& T, const NordenStructure& structure);
/// g(T(x,z), T(y,w) - (nabla_{Jy} J) w) as (x,z,y,w).
DenseTensor torsion_gap_identity(const DenseTensor& T, const DenseTensor& nabla_J, const NordenStructure& structure);

}  // namespace norden
