#pragma once

// Pointwise Riemannian curvature from metric jets.
//
// Conventions: R_ijkl = c (g_ik g_jl - g_il g_jk) for constant curvature c,
// R_jl = g^ik R_ijkl, (n-2) P_ij = R_ij - R g_ij / (2(n-1)),
// C_ijk = P_ij,k - P_ik,j and B_ij = P_ij,k^k - P_ik,j^k - P^kl W_kijl, where a
// comma denotes covariant differentiation appended as the last index.

#include "renorm/manifold.hpp"
#include "renorm/tensor.hpp"

#include <optional>
#include <span>

namespace renorm {

// ---- jet-level building blocks; the chart is the first n jet variables ----

/// Inverse of a symmetric matrix of jets, computed at the order of its entries.
JetTensor jet_inverse(const JetTensor& g);

struct JetConnection {
    JetTensor first;   // Gamma_{m,kl} = (g_mk,l + g_ml,k - g_kl,m) / 2
    JetTensor second;  // Gamma^m_kl
};

/// Christoffel symbols of g (order one less than g). `ginv` may be truncated
/// to that order.
JetConnection christoffel(const JetTensor& g, const JetTensor& ginv);

/// R_ijkl with all indices lowered, of order two less than g.
JetTensor riemann_lowered(const JetTensor& g, const JetConnection& gamma);

/// R_ik computed directly from the connection (order of gamma minus one).
JetTensor ricci_from_connection(const JetConnection& gamma);

/// Covariant derivative of a covariant tensor; the new index is appended last.
JetTensor covariant_derivative(const JetTensor& t, const JetTensor& gamma2);

/// Contracts index `a` of t with g^{..} to raise it.
Tensor raise_index(const Tensor& t, const Tensor& ginv, int a);

/// |T|^2 with every index contracted through ginv.
double norm_squared(const Tensor& t, const Tensor& ginv);

// ---- pointwise packs ----

struct CurvaturePack {
    int n = 0;
    Tensor g;
    Tensor ginv;
    std::optional<Tensor> riemann;   // n >= 2
    std::optional<Tensor> ricci;     // n >= 2
    std::optional<double> scalar;    // n >= 2
    std::optional<Tensor> schouten;  // n >= 3
    std::optional<Tensor> weyl;      // n >= 3
    std::optional<Tensor> cotton;    // n >= 3
    std::optional<Tensor> bach;      // n >= 4

    /// Accessors that raise DimensionUnsupported when the quantity is absent.
    [[nodiscard]] const Tensor& P() const;
    [[nodiscard]] const Tensor& W() const;
    [[nodiscard]] const Tensor& C() const;
    [[nodiscard]] const Tensor& B() const;
};

CurvaturePack curvature_pack(const MetricFamily& family, std::span<const double> x);

struct ConformalInvariants6 {
    Tensor C;  // C_ijk
    Tensor V;  // V_ijklm
    Tensor U;  // U_ijkl
    double I = 0.0;
    double J = 0.0;
};

ConformalInvariants6 conformal_invariants_6d(const MetricFamily& family, std::span<const double> x);

/// The two sides of the four-dimensional Gauss-Bonnet identity.
struct GaussBonnetSides {
    double lhs = 0.0;
    double rhs = 0.0;
};

GaussBonnetSides gauss_bonnet_sides(const MetricFamily& family, int nodes = 48);

}  // namespace renorm
