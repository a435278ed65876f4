#pragma once

// Matrix-group geometry: the gradient flow onto O(n), the Hessian of the
// squared distance to O(n), left-invariant geodesics from GL+(n) to SO(n), and
// the structure of U(p,q) relative to U(p) x U(q).

#include "cutloci/matfun.hpp"
#include "cutloci/random.hpp"

namespace cutloci::groupgeo {

/// gamma(t) = A e^{-2t} + (1 - e^{-2t}) A (sqrt(A^T A))^{-1}.
Mat flow_to_orthogonal(const Mat& a, double t);

/// |gamma'(t) - (-2 gamma + 2 gamma (sqrt(gamma^T gamma))^{-1})| with gamma'
/// from central differences of step h.
double flow_ode_residual(const Mat& a, double t, double h = 1e-6);

/// |gamma^T gamma - (sqrt(A^T A) e^{-2t} + (1 - e^{-2t}) I)^2|.
double flow_gram_defect(const Mat& a, double t);

/// Second differences of f = d^2(., O(n)) at an orthogonal Q in the
/// orthonormal normal directions Q W_i; the exact answer is 2 I.
Mat hessian_normal_check(const Mat& q, double h = 1e-3);

/// gamma(t) = Q e^{t log sqrt(A^T A)}, the minimal left-invariant geodesic
/// from the polar factor Q (t = 0) to A (t = 1).
Mat geodesic_to_SO(const Mat& a, double t);

/// Length of geodesic_to_SO on [0, 1] by Simpson integration of the
/// left-invariant speed, with velocities from central differences.
double geodesic_to_SO_length(const Mat& a, int intervals = 200);

/// Max deviation of the left-invariant speed from its value at t = 0.
double geodesic_to_SO_speed_variation(const Mat& a, int samples = 50);

struct UpqBlockDefects {
  double relation = 0.0;  // |A^* I_pq A - I_pq|
  double aa = 0.0;        // |A^*A - C^*C - I_p|
  double ab = 0.0;        // |A^*B - C^*D|
  double bb = 0.0;        // |B^*B - D^*D + I_q|
  double max() const;
};

double upq_membership(const CMat& a, int p, int q);
UpqBlockDefects upq_block_identities(const CMat& a, int p, int q);

/// (A^*A + I)^{-1} = 1/2 [[I, -A^{-1}B], [-B^*(A^*)^{-1}, I]] for blocks
/// A (p x p), B (p x q) of a member of U(p,q).
CMat upq_inverse_closed_form(const CMat& a, int p, int q);

struct UpqDecomposition {
  CMat unitary_part;  // in U(p) x U(q)
  CMat n_part;        // Y = [[0, B], [B^*, 0]]
  CMat source;
};

/// A = U e^Y with U in U(p) x U(q), Y = 1/2 log(A^* A) in n.
UpqDecomposition upq_decompose(const CMat& a, int p, int q);

/// Distance from A to U(p) x U(q): |Y|_F = 1/2 |log(A^* A)|_F.
double dist_upq(const CMat& a, int p, int q);

/// Y from the block form X = [[0, A^{-1}B], [B^*(A^*)^{-1}, 0]] as
/// sum_m X^(2m+1)/(2m+1), an independent route to the n part.
CMat upq_n_part_series(const CMat& a, int p, int q);

/// e^Y for Y = [[0, B], [B^*, 0]] in closed form from the SVD of B:
/// [[cosh sqrt(BB^*), U sinh sqrt(B^*B)], [sinh sqrt(B^*B) U^*, cosh sqrt(B^*B)]].
CMat upq_block_exp(const CMat& y, int p, int q);

/// Random element of n with Frobenius norm `norm`.
CMat random_n_part(Rng& rng, int p, int q, double norm);
/// Random member of U(p) x U(q).
CMat random_compact_upq(Rng& rng, int p, int q);
/// Random member of U(p,q): (block unitary) e^Y with |Y|_F uniform in [0, max_norm].
CMat random_upq(Rng& rng, int p, int q, double max_norm = 2.0);

/// U(1,1) element [[cosh r, sinh r], [sinh r, cosh r]].
CMat boost_u11(double r);

}  // namespace cutloci::groupgeo
