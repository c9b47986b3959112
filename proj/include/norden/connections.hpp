#pragma once

#include <string>
#include <vector>

#include "norden/frame_calculus.hpp"

namespace norden {

enum class ConnectionLabel { canonical, b_connection, kt_connection, custom };
std::string to_string(ConnectionLabel label);

/// nabla' = nabla + Q with Q(x,y,z) = g(Q(x,y), z) and T(x,y,z) = g(T(x,y), z).
struct DeformedConnection {
  ConnectionCoeffs base;
  DenseTensor Q;
  ConnectionCoeffs prime;
  DenseTensor T;
  ConnectionLabel label = ConnectionLabel::custom;
  std::vector<std::string> warnings;
};

DeformedConnection deform(const ConnectionCoeffs& base, const PointData& point, DenseTensor Q,
                          ConnectionLabel label = ConnectionLabel::custom);

/// Phi from F: 1/2 {F(Jz,x,y) - F(x,y,Jz) - F(y,Jz,x)}.
DenseTensor phi_tensor(const DenseTensor& F, const DenseTensor& J);
/// Phi(x,y,z) = g(nabla~_x y - nabla_x y, z) with nabla~ the Levi-Civita connection of g~.
DenseTensor phi_from_associated_metric(const PointData& point);

/// Canonical deformation for any Norden structure:
///   1/4 {2 Phi(x,y,z) - Phi(z,x,y) - Phi(Jz,x,Jy)}.
DenseTensor canonical_Q_general(const DenseTensor& phi, const DenseTensor& J);
/// Same expression with a single Phi(x,y,z) term. Kept for the report only;
/// it is not a natural connection in general.
DenseTensor canonical_Q_single_phi(const DenseTensor& phi, const DenseTensor& J);
/// Quasi-Kaehler form, lowered: 1/4 {(nabla_y J)Jx - (nabla_{Jy} J)x + 2 (nabla_x J)Jy}.
DenseTensor canonical_Q_quasi_kahler(const DenseTensor& nabla_J, const NordenStructure& structure);
/// 1/4 {F(y,Jx,z) - F(Jy,x,z) + 2 F(x,Jy,z)}.
DenseTensor canonical_Q_from_F(const DenseTensor& F, const DenseTensor& J);
/// 1/4 {F(Jz,x,y) - F(x,y,Jz) - F(Jy,x,z)}.
DenseTensor canonical_Q_three_term(const DenseTensor& F, const DenseTensor& J);
/// 1/2 {F(x,Jy,z) + F(Jx,y,z)}.
DenseTensor canonical_T_from_F(const DenseTensor& F, const DenseTensor& J);

DenseTensor b_connection_Q(const DenseTensor& F, const DenseTensor& J);
DenseTensor kt_connection_Q(const DenseTensor& F, const DenseTensor& J);

enum class CanonicalPath { general, quasi_kahler };

/// The general path works on every Norden structure. The quasi-Kaehler path
/// throws "quasi-Kähler form requires class W₃" outside W3.
DeformedConnection canonical_connection(const PointData& point, const ConnectionCoeffs& levi_civita,
                                        const DenseTensor& nabla_J,
                                        CanonicalPath path = CanonicalPath::general);
/// Both record a warning outside W3, where naturality is not guaranteed.
DeformedConnection b_connection(const PointData& point, const ConnectionCoeffs& levi_civita,
                                const DenseTensor& F);
DeformedConnection kt_connection(const PointData& point, const ConnectionCoeffs& levi_civita,
                                 const DenseTensor& F);

struct TorsionProjections {
  DenseTensor p1, p2, p3, p4;
  DenseTensor sum() const { return p1 + p2 + p3 + p4; }
};

/// max |T(x,y,z) + T(y,x,z)|.
double first_pair_antisymmetry(const DenseTensor& T);
/// max of the antisymmetry defects in slots (0,1) and (1,2).
double total_skew_defect(const DenseTensor& T);

/// Throws when T is not antisymmetric in its first two arguments.
TorsionProjections torsion_projections(const DenseTensor& T, const DenseTensor& J);

struct NaturalityResult {
  double nabla_J = 0.0;
  double nabla_g = 0.0;
  double f_from_q = 0.0;          // F(x,y,z) - Q(x,y,Jz) + Q(x,Jy,z)
  double q_skew_last_pair = 0.0;  // Q(x,y,z) + Q(x,z,y)
  double p2_vs_nijenhuis = 0.0;  // 4 p2 - g(N(x,y),z)
  double nijenhuis_vs_phi = 0.0;  // g(N(x,y),z) - 2{Phi(z,Jx,Jy) - Phi(z,x,y)}
  double p3_vs_phi = 0.0;         // 4 p3 against its Phi expression
  double tolerance = 0.0;
  bool natural = false;
};

NaturalityResult naturality_check(const DeformedConnection& dc, const PointData& point, const DenseTensor& F);

/// g(N(x,y), z) written through F.
DenseTensor nijenhuis_lowered(const DenseTensor& F, const DenseTensor& J);

/// 1/2 {T(x,y,z) - T(y,z,x) + T(z,x,y)}.
DenseTensor hayden_Q_from_T(const DenseTensor& T);
/// T(x,z,Jy) - T(x,Jy,z).
DenseTensor f_from_torsion(const DenseTensor& T, const DenseTensor& J);

/// T(x,y,z) + T(y,z,x) - T(Jx,y,Jz) - T(y,Jz,Jx).
DenseTensor canonical_torsion_condition(const DenseTensor& T, const DenseTensor& J);

/// g^{ij} Q(e_i, e_j, z).
DenseTensor trace_first_pair(const DenseTensor& Q, const NordenStructure& structure);

}  // namespace norden
