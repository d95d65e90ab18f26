#pragma once

#include <cstddef>

#include "nuplus/core/parallel.hpp"

namespace nuplus::kernels {

// Per-node dense tensor algebra on component-major arrays (component c of a
// field occupies [c*nodes, (c+1)*nodes)). Each kernel runs identically under
// Exec::serial and Exec::parallel; the serial path is the reference the tests
// compare against and the benchmark baselines.

/// Inverse and determinant of a packed symmetric n x n matrix per node.
/// Returns the index of the first node where the matrix is not positive
/// definite, or nodes if all are fine.
std::size_t sym_invert(int n, std::size_t nodes, const double* g, double* ginv,
                       double* det, Exec exec);

/// Christoffel symbols Gamma^k_ij = 1/2 g^{kl}(d_i g_jl + d_j g_il - d_l g_ij).
/// dg holds axis-major metric gradients: component (a*sc + c) is d_a g_c with
/// sc = n(n+1)/2. gamma is k-major: component (k*sc + c).
void christoffel(int n, std::size_t nodes, const double* ginv, const double* dg,
                 double* gamma, Exec exec);

/// Fully covariant Riemann tensor
///   R_ijkl = g_ia (d_k Gamma^a_lj - d_l Gamma^a_kj
///            + Gamma^a_kb Gamma^b_lj - Gamma^a_lb Gamma^b_kj),
/// n^4 components, index ((i n + j) n + k) n + l. dgamma is axis-major over
/// the gamma layout: component (a*n*sc + k*sc + c) is d_a Gamma^k_c.
void riemann(int n, std::size_t nodes, const double* g, const double* gamma,
             const double* dgamma, double* riem, Exec exec);

/// Covariant derivative of a symmetric 2-tensor:
///   (grad h)_{a,ij} = d_a h_ij - Gamma^m_ai h_mj - Gamma^m_aj h_im.
/// dh is axis-major spectral gradients of the packed components; out has
/// dim*sc components, axis-major.
void cov_deriv_sym2(int n, std::size_t nodes, const double* gamma, const double* h,
                    const double* dh, double* out, Exec exec);

/// Covariant derivative of the 3-tensor (grad h):
///   (grad^2 h)_{ab,ij} = d_a T_{b,ij} - Gamma^m_ab T_{m,ij}
///                        - Gamma^m_ai T_{b,mj} - Gamma^m_aj T_{b,im},
/// with T = grad h (axis-major, dim*sc comps) and dT its spectral gradients
/// (axis-major over T's layout). out has dim*dim*sc components,
/// component ((a*dim + b)*sc + c).
void cov_deriv2_sym2(int n, std::size_t nodes, const double* gamma, const double* t,
                     const double* dt, double* out, Exec exec);

/// Covariant derivative of a one-form: (grad w)_{a,i} = d_a w_i - Gamma^m_ai w_m.
/// dw axis-major (dim*n comps: component a*n+i is d_a w_i); out dim*n comps.
void cov_deriv_oneform(int n, std::size_t nodes, const double* gamma, const double* w,
                       const double* dw, double* out, Exec exec);

} // namespace nuplus::kernels
