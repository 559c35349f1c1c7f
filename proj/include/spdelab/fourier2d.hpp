#pragma once

#include <Eigen/Dense>
#include <functional>
#include <vector>

#include "spdelab/galerkin.hpp"

namespace spdelab {

/// Real, exactly divergence-free trigonometric velocity fields on the
/// 2 pi torus. For every wavevector k with 0 < |k|_inf <= M in a fixed
/// half-space, the two unit fields
///     e_k^c = sqrt(2)/(2 pi) k_perp_hat cos(k.x),
///     e_k^s = sqrt(2)/(2 pi) k_perp_hat sin(k.x),
/// are pointwise divergence free and L^2-orthonormal, so the mass matrix
/// is the identity and the stiffness diagonal carries |k|^2. All
/// products are evaluated on a uniform grid of L = 3M+1 points per
/// dimension, on which the quadrature of trigonometric polynomials of
/// degree up to 3M is exact (alias-free cubic pairings).
class FourierDivFree2DSpace final : public GalerkinSpace {
public:
    using Field2 = std::function<Eigen::Vector2d(double, double)>;

    explicit FourierDivFree2DSpace(int mode_cutoff);

    const char* variant() const override { return "fourier_divfree2d"; }
    int cutoff() const { return cutoff_; }
    int grid_points() const { return grid_; }  ///< L, per dimension
    double cell_weight() const { return weight_; }

    struct Mode {
        int k1, k2;  // wavevector (half-space representative)
    };
    const std::vector<Mode>& modes() const { return modes_; }
    /// dof index of the cosine component of mode m; sine is +1.
    int cos_index(int m) const { return 2 * m; }
    int sin_index(int m) const { return 2 * m + 1; }
    double mode_sq(int m) const;  ///< |k|^2

    /// Velocity (2 components) at grid node (i,j), x = 2 pi i / L.
    Eigen::Vector2d eval_grid(const CoeffVec& c, int i, int j) const;
    Eigen::Vector2d eval(const CoeffVec& c, double x, double y) const;
    /// Velocity gradient d u_a / d x_b at a point.
    Eigen::Matrix2d eval_gradient(const CoeffVec& c, double x, double y) const;
    /// Pointwise divergence (analytically zero; rounding-level in practice).
    double eval_divergence(const CoeffVec& c, double x, double y) const;

    /// Grid images: rows of U are grid points (row-major (i,j)), columns
    /// the two velocity components; G likewise with the four entries of
    /// the gradient (d u_a / d x_b at column 2a+b).
    Eigen::MatrixXd velocity_on_grid(const CoeffVec& c) const;
    Eigen::MatrixXd gradient_on_grid(const CoeffVec& c) const;

    /// L^2 pairing of a grid vector field against every basis function
    /// (the load vector); exact for trig polynomials below the alias
    /// limit, and the Leray projection of anything else.
    CoeffVec load_from_grid(const Eigen::MatrixXd& field) const;
    /// Evaluate an arbitrary field on the grid, then load_from_grid.
    CoeffVec load(const Field2& f) const;
    CoeffVec l2_project(const Field2& f) const;  // mass = I, so same as load

    /// Skew convection form
    /// b(u,w,v) = 1/2 ((u.grad)w, v) - 1/2 (w, (u.grad)v),
    /// both terms quadrated pointwise so b(u,w,w) cancels to rounding.
    double trilinear_skew(const CoeffVec& u, const CoeffVec& w, const CoeffVec& v) const;

    /// Load vector of v -> b(a, w, v) for all basis v (fixed transport
    /// velocity a): the operator applied in every Navier-Stokes step.
    CoeffVec convection_apply(const CoeffVec& a, const CoeffVec& w) const;

    /// Viscous matrices: visc_sym is (2 mu D(e_i), grad e_j) assembled by
    /// quadrature; visc_grad is mu (grad e_i, grad e_j) = mu diag(|k|^2).
    /// On this basis the two agree to rounding.
    Eigen::MatrixXd viscous_matrix_sym(double mu) const;
    Eigen::MatrixXd viscous_matrix_grad(double mu) const;

    /// Coefficients of the 90-degree rotated field R u(R^T x); the step
    /// map commutes with it when the data are rotated likewise.
    CoeffVec rotate90(const CoeffVec& c) const;

    /// Max pointwise |div u| over a dense (2L)^2 evaluation grid.
    double max_divergence_dense(const CoeffVec& c) const;

private:
    int cutoff_;
    int grid_;       // L
    double weight_;  // (2 pi / L)^2
    std::vector<Mode> modes_;
    Eigen::MatrixXd basis_;       // (L^2 rows) x ... see below
    Eigen::MatrixXd basis_grad_;  // gradients on grid
    // basis_: 2 L^2 rows (u_x stacked over u_y), dim columns
    // basis_grad_: 4 L^2 rows (du_x/dx, du_x/dy, du_y/dx, du_y/dy), dim cols
};

}  // namespace spdelab
