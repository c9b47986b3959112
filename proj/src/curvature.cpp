#include "norden/curvature.hpp"

#include <algorithm>
#include <cmath>

namespace norden {

PointStencil::PointStencil(const Model& model) : center_(point_data(model)) {
  if (model.frame.kind != FrameKind::chart) return;
  const auto& ch = model.frame.chart;
  step_ = ch.fd_step;
  for (int a = 0; a < model.frame.dim; ++a) {
    std::vector<double> u = ch.point;
    u[static_cast<std::size_t>(a)] += step_;
    plus_.push_back(point_data_at(model.frame, u));
    u[static_cast<std::size_t>(a)] -= 2 * step_;
    minus_.push_back(point_data_at(model.frame, u));
  }
}

DenseTensor PointStencil::derivative(const TensorField& field) const {
  return derivative(field, field(center_));
}

DenseTensor PointStencil::derivative(const TensorField& field, const DenseTensor& value) const {
  std::vector<Variance> variance{Variance::lower};
  variance.insert(variance.end(), value.variance().begin(), value.variance().end());
  DenseTensor out(value.dim(), std::move(variance));
  if (!is_chart()) return out;
  const std::size_t block = value.size();
  auto dst = out.components();
  for (std::size_t a = 0; a < plus_.size(); ++a) {
    const DenseTensor fp = field(plus_[a]);
    const DenseTensor fm = field(minus_[a]);
    const auto cp = fp.components();
    const auto cm = fm.components();
    for (std::size_t i = 0; i < block; ++i) dst[a * block + i] = (cp[i] - cm[i]) / (2 * step_);
  }
  return out;
}

DenseTensor ricci_from(const DenseTensor& R, const NordenStructure& s) {
  const int d = s.dim();
  return DenseTensor::generate(d, lower_slots(2), [&](int y, int z) {
    double t = 0.0;
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j) t += s.g_inv(i, j) * R(i, y, z, j);
    return t;
  });
}

double scalar_from(const DenseTensor& ricci, const NordenStructure& s) {
  const int d = s.dim();
  double t = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) t += s.g_inv(i, j) * ricci(i, j);
  return t;
}

CurvatureData curvature(const DenseTensor& gamma, const DenseTensor& dgamma, const PointData& p, std::string source) {
  const int d = p.dim();
  const auto& c = p.brackets;
  // R^k_{abc} = e_a G^k_bc - e_b G^k_ac + G^m_bc G^k_am - G^m_ac G^k_bm - C^m_ab G^k_mc
  const DenseTensor rv = DenseTensor::generate(
      d, {Variance::upper, Variance::lower, Variance::lower, Variance::lower}, [&](int k, int a, int b, int cc) {
        double v = dgamma(a, k, b, cc) - dgamma(b, k, a, cc);
        for (int m = 0; m < d; ++m)
          v += gamma(m, b, cc) * gamma(k, a, m) - gamma(m, a, cc) * gamma(k, b, m) - c(m, a, b) * gamma(k, m, cc);
        return v;
      });
  CurvatureData out;
  out.R = DenseTensor::generate(d, lower_slots(4), [&](int a, int b, int cc, int w) {
    double v = 0.0;
    for (int k = 0; k < d; ++k) v += p.structure.g(k, w) * rv(k, a, b, cc);
    return v;
  });
  out.ricci = ricci_from(out.R, p.structure);
  out.scalar = scalar_from(out.ricci, p.structure);
  out.source = std::move(source);
  return out;
}

CurvatureData curvature(const PointStencil& st, const TensorField& gamma_field, std::string source) {
  const DenseTensor gamma = gamma_field(st.center());
  return curvature(gamma, st.derivative(gamma_field, gamma), st.center(), std::move(source));
}

DenseTensor covariant_derivative(const DenseTensor& S, const DenseTensor& dS, const DenseTensor& gamma) {
  if (!S.all_lower()) throw Error("covariant_derivative expects an all-lower tensor");
  const int d = S.dim();
  const int r = S.rank();
  std::vector<int> src(static_cast<std::size_t>(r));
  return DenseTensor::generate(d, lower_slots(r + 1), [&](std::span<const int> idx) {
    const int a = idx[0];
    double v = dS.at(idx);
    for (int slot = 0; slot < r; ++slot) {
      for (int q = 0; q < r; ++q) src[static_cast<std::size_t>(q)] = idx[static_cast<std::size_t>(q + 1)];
      const int b = idx[static_cast<std::size_t>(slot + 1)];
      for (int m = 0; m < d; ++m) {
        const double gm = gamma(m, a, b);
        if (gm == 0.0) continue;
        src[static_cast<std::size_t>(slot)] = m;
        v -= gm * S.at(src);
      }
    }
    return v;
  });
}

DenseTensor covariant_derivative(const PointStencil& st, const TensorField& field, const DenseTensor& gamma) {
  const DenseTensor value = field(st.center());
  return covariant_derivative(value, st.derivative(field, value), gamma);
}

KahlerCheck kahler_tensor_check(const DenseTensor& L, const NordenStructure& s) {
  KahlerCheck k;
  k.antisym_first = (L + permute(L, {1, 0, 2, 3})).max_abs();
  k.antisym_last = (L + permute(L, {0, 1, 3, 2})).max_abs();
  k.bianchi = cyclic_sum(L).max_abs();
  k.j_invariance = (apply_J(apply_J(L, 2, s.J), 3, s.J) + L).max_abs();
  const double j = std::max(1.0, s.J.max_abs());
  k.tolerance = 1e-9 * std::max(1.0, L.max_abs()) * j * j;
  k.curvature_like = k.antisym_first <= k.tolerance && k.antisym_last <= k.tolerance && k.bianchi <= k.tolerance;
  k.kahler = k.curvature_like && k.j_invariance <= k.tolerance;
  return k;
}

DenseTensor pair_vectors(const DenseTensor& A, const DenseTensor& B, const DenseTensor& g_inv) {
  const int d = A.dim();
  // B^l(z,w) raised once, then paired with A(x,y,l).
  const DenseTensor bv = vector_from_pairing(B, g_inv);
  return DenseTensor::generate(d, lower_slots(4), [&](int x, int y, int z, int w) {
    double v = 0.0;
    for (int l = 0; l < d; ++l) v += A(x, y, l) * bv(l, z, w);
    return v;
  });
}

namespace {

// (x,y,z,w) -> sum_k V^k(x,y) S(k,z,w)
DenseTensor insert_vector(const DenseTensor& V, const DenseTensor& S) {
  const int d = S.dim();
  return DenseTensor::generate(d, lower_slots(4), [&](int x, int y, int z, int w) {
    double v = 0.0;
    for (int k = 0; k < d; ++k) v += V(k, x, y) * S(k, z, w);
    return v;
  });
}

}  // namespace

DenseTensor bianchi_torsion_residual(const DenseTensor& T, const DenseTensor& nT, const NordenStructure& s) {
  const DenseTensor tv = vector_from_pairing(T, s.g_inv);
  return cyclic_sum(nT + insert_vector(tv, T));
}

DenseTensor rprime_via_deformation(const DenseTensor& R, const DenseTensor& Q, const DenseTensor& nQ,
                                   const NordenStructure& s) {
  // g(Q(x,w), Q(y,z)) as (x,y,z,w)
  const DenseTensor qq = permute(pair_vectors(Q, Q, s.g_inv), {0, 3, 1, 2});
  return R + nQ - permute(nQ, {1, 0, 2, 3}) - qq + permute(qq, {1, 0, 2, 3});
}

DenseTensor ricci_via_deformation(const DenseTensor& ricci, const DenseTensor& Q, const DenseTensor& nQ,
                                  const NordenStructure& s) {
  const int d = s.dim();
  const DenseTensor qv = vector_from_pairing(Q, s.g_inv);
  return ricci + DenseTensor::generate(d, lower_slots(2), [&](int y, int z) {
           double v = 0.0;
           for (int i = 0; i < d; ++i)
             for (int j = 0; j < d; ++j) {
               const double gij = s.g_inv(i, j);
               if (gij == 0.0) continue;
               double pair = 0.0;  // g(Q(y,e_j), Q(e_i,z))
               for (int k = 0; k < d; ++k) pair += qv(k, i, z) * Q(y, j, k);
               v += gij * (nQ(i, y, z, j) + pair);
             }
           return v;
         });
}

namespace {

// g^{ij} g^{ks} g(A(e_a, e_b), B(e_c, e_d)) with (a,b,c,d) picked from (i,j,k,s) by `pick`.
template <class Pick>
double double_trace(const DenseTensor& A, const DenseTensor& B, const NordenStructure& s, Pick pick) {
  const int d = s.dim();
  const DenseTensor bv = vector_from_pairing(B, s.g_inv);
  double total = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      const double gij = s.g_inv(i, j);
      if (gij == 0.0) continue;
      for (int k = 0; k < d; ++k)
        for (int t = 0; t < d; ++t) {
          const double gks = s.g_inv(k, t);
          if (gks == 0.0) continue;
          const auto [a, b, c, e] = pick(i, j, k, t);
          double pair = 0.0;
          for (int l = 0; l < d; ++l) pair += A(a, b, l) * bv(l, c, e);
          total += gij * gks * pair;
        }
    }
  return total;
}

struct Idx4 {
  int a, b, c, d;
};

}  // namespace

double scalar_deformation_term(const DenseTensor& Q, const NordenStructure& s) {
  return double_trace(Q, Q, s, [](int i, int j, int k, int t) { return Idx4{k, j, i, t}; });
}

double p_form_contraction(const DenseTensor& D, const NordenStructure& s) {
  const DenseTensor dj = apply_J(D, 2, s.J);
  const DenseTensor jd = apply_J(D, 1, s.J);
  const DenseTensor pv = dj - jd + 2.0 * permute(dj, {0, 2, 1});
  const DenseTensor p = pair_with_metric(pv, s.g);
  return double_trace(p, p, s, [](int i, int j, int k, int t) { return Idx4{j, k, t, i}; }) / 16.0;
}

double crossed_q_contraction(const DenseTensor& Q, const NordenStructure& s) {
  return double_trace(Q, Q, s, [](int i, int j, int k, int t) { return Idx4{j, t, i, k}; });
}

double nabla_J_torsion_contraction(const DenseTensor& D, const DenseTensor& T, const NordenStructure& s) {
  const DenseTensor jd = pair_with_metric(apply_J(D, 1, s.J), s.g);  // g((nabla_{J e_a} J) e_b, e_l)
  return double_trace(jd, T, s, [](int i, int j, int k, int t) { return Idx4{t, j, i, k}; });
}

DenseTensor rprime_parallel_lemma(const DenseTensor& R, const DenseTensor& Q, const DenseTensor& T,
                                  const NordenStructure& s) {
  const DenseTensor tv = vector_from_pairing(T, s.g_inv);
  const DenseTensor qq = pair_vectors(Q, Q, s.g_inv);  // g(Q(a,b), Q(c,d))
  // g(Q(y,z),Q(x,w)) = qq(y,z,x,w); g(Q(x,z),Q(y,w)) = qq(x,z,y,w)
  return R + insert_vector(tv, Q) + permute(qq, {1, 2, 0, 3}) - permute(qq, {0, 2, 1, 3});
}

DenseTensor rprime_parallel_theorem(const DenseTensor& R, const DenseTensor& Q, const DenseTensor& T,
                                    const DenseTensor& D, const NordenStructure& s) {
  const DenseTensor qq = pair_vectors(Q, Q, s.g_inv);
  const DenseTensor qt = pair_vectors(Q, T, s.g_inv);  // g(Q(a,b), T(c,d))
  const DenseTensor jd = pair_with_metric(apply_J(D, 1, s.J), s.g);
  const DenseTensor jt = pair_vectors(jd, T, s.g_inv);  // g((nabla_{J a} J) b, T(c,d))
  // g(Q(z,w),T(x,y)) = qt(z,w,x,y); g((nabla_{Jw} J) z, T(x,y)) = jt(w,z,x,y)
  return R + permute(qq, {1, 2, 0, 3}) - permute(qq, {0, 2, 1, 3}) + permute(qt, {2, 3, 0, 1}) +
         permute(jt, {3, 2, 0, 1});
}

DenseTensor kahler_rprime_identity(const DenseTensor& D, const NordenStructure& s) {
  const DenseTensor dj = apply_J(D, 2, s.J);
  const DenseTensor jd = apply_J(D, 1, s.J);
  const DenseTensor a = pair_with_metric(dj + jd, s.g);  // (x,z,l)
  const DenseTensor b = pair_with_metric(jd - dj, s.g);  // (y,w,l)
  return permute(pair_vectors(a, b, s.g_inv), {0, 2, 1, 3});
}

DenseTensor torsion_of_torsion(const DenseTensor& T, const NordenStructure& s) {
  return insert_vector(vector_from_pairing(T, s.g_inv), T);
}

DenseTensor torsion_gap_identity(const DenseTensor& T, const DenseTensor& D, const NordenStructure& s) {
  const DenseTensor jd = pair_with_metric(apply_J(D, 1, s.J), s.g);
  return pair_vectors(T, T - jd, s.g_inv);
}

}  // namespace norden
