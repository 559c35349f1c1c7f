#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <vector>

#include "spdelab/paths.hpp"
#include "spdelab/quadrature.hpp"
#include "spdelab/time_grid.hpp"

namespace spdelab {

/// Coefficient vector of one element of a discrete trial space; length
/// must equal the owning space's dim().
using CoeffVec = Eigen::VectorXd;

struct SpaceNorms {
    double h_norm;     ///< sqrt(c' M c)
    double u_norm;     ///< sqrt(c' (K+M) c)
    double dual_norm;  ///< sqrt((Mc)' (K+M)^{-1} (Mc)), the discrete dual norm
};

/// Discrete trial space: assembled mass/stiffness plus the three norms.
/// Matrices and factorizations are assembled eagerly in the constructor
/// and immutable afterwards, so spaces are safe to share across threads.
class GalerkinSpace {
public:
    virtual ~GalerkinSpace() = default;
    virtual const char* variant() const = 0;

    int dim() const { return dim_; }
    const Eigen::MatrixXd& mass() const { return mass_; }
    const Eigen::MatrixXd& stiffness() const { return stiff_; }
    const Eigen::LLT<Eigen::MatrixXd>& mass_llt() const { return mass_llt_; }

    double h_norm(const CoeffVec& c) const;
    double u_norm(const CoeffVec& c) const;
    double dual_norm(const CoeffVec& c) const;
    SpaceNorms norms(const CoeffVec& c) const;

    /// Dual norm of a load vector b (no mass factor): sup (b,v)/||v||_U.
    double dual_norm_of_load(const CoeffVec& b) const;

    NormFn h_norm_fn() const;
    NormFn u_norm_fn() const;
    NormFn dual_norm_fn() const;

protected:
    /// Derived constructors call this exactly once.
    void finalize(Eigen::MatrixXd mass, Eigen::MatrixXd stiffness);

private:
    int dim_ = 0;
    Eigen::MatrixXd mass_, stiff_;
    Eigen::LLT<Eigen::MatrixXd> mass_llt_;
    Eigen::LLT<Eigen::MatrixXd> um_llt_;  // K + M
};

/// Scalar-valued 1D space; enough surface for the heat solver.
class Scalar1DSpace : public GalerkinSpace {
public:
    using Field = std::function<double(double)>;

    virtual double xmin() const = 0;
    virtual double xmax() const = 0;
    virtual double eval(const CoeffVec& c, double x) const = 0;
    /// Load vector b_i = (f, phi_i)_H.
    virtual CoeffVec load(const Field& f) const = 0;
    /// H-orthogonal projection: solves M c = load(f).
    CoeffVec l2_project(const Field& f) const;
};

/// Orthonormalized sine modes sqrt(2) sin(k pi x) on (0,1); mass is the
/// identity and the stiffness diagonal carries the Dirichlet eigenvalues
/// (k pi)^2.
class SpectralSineSpace final : public Scalar1DSpace {
public:
    explicit SpectralSineSpace(int modes);

    const char* variant() const override { return "spectral_sine"; }
    double xmin() const override { return 0.0; }
    double xmax() const override { return 1.0; }
    double eval(const CoeffVec& c, double x) const override;
    CoeffVec load(const Field& f) const override;

    int modes() const { return modes_; }
    double eigenvalue(int k) const;  ///< (k pi)^2, k = 1..modes

private:
    int modes_;
};

/// P1 hat functions on a uniform mesh of the interval with homogeneous
/// Dirichlet ends; n cells give n-1 interior dofs.
class P1DirichletSpace final : public Scalar1DSpace {
public:
    P1DirichletSpace(int cells, double a = 0.0, double b = 1.0);

    const char* variant() const override { return "p1_dirichlet"; }
    double xmin() const override { return a_; }
    double xmax() const override { return b_; }
    double eval(const CoeffVec& c, double x) const override;
    CoeffVec load(const Field& f) const override;

    int cells() const { return cells_; }
    double h() const { return h_; }

    /// u' on cell `k` (constant per cell), boundary values zero.
    double cell_gradient(const CoeffVec& c, int k) const;

    /// (A_q(u), phi_i) with (A_q(u), v) = int |u'|^{q-2} u' v'; exact
    /// since u' is constant per cell.
    CoeffVec q_laplacian_apply(const CoeffVec& c, double q) const;

    /// d/dc of q_laplacian_apply with the weight |u'|^{q-2} smoothed to
    /// (|u'|^2 + delta^2)^{(q-2)/2}; the residual itself stays exact.
    Eigen::MatrixXd q_laplacian_jacobian(const CoeffVec& c, double q, double delta) const;

    /// ||u'||_{L^q}^q (piecewise-constant gradient, exact).
    double gradient_q_norm_pow(const CoeffVec& c, double q) const;

private:
    int cells_;
    double a_, b_, h_;
};

/// R^3-valued P1 space on a uniform interval mesh with natural (Neumann)
/// boundary; node-major dof layout [u0x u0y u0z u1x ...]. All nonlinear
/// integrals use a 5-point Gauss rule per cell (exact through degree 9),
/// which makes every quartic identity of the penalty flow hold to
/// rounding.
class P1NeumannVec3Space final : public GalerkinSpace {
public:
    using Field3 = std::function<Eigen::Vector3d(double)>;

    P1NeumannVec3Space(int cells, double a = 0.0, double b = 1.0);

    const char* variant() const override { return "p1_neumann_vec3"; }
    int cells() const { return cells_; }
    int nodes() const { return cells_ + 1; }
    double h() const { return h_; }
    double xmin() const { return a_; }
    double xmax() const { return b_; }
    double node_x(int j) const { return a_ + j * h_; }

    Eigen::Vector3d eval(const CoeffVec& c, double x) const;
    Eigen::Vector3d cell_gradient(const CoeffVec& c, int k) const;

    CoeffVec load(const Field3& f) const;
    CoeffVec l2_project(const Field3& f) const;

    /// Nodal cross product with a constant vector; P1 functions are
    /// closed under it, so (u x gamma) is again a coefficient vector.
    CoeffVec nodal_cross(const CoeffVec& u, const Eigen::Vector3d& gamma) const;

    /// int phi(u) with phi(u) = (1/2 eps)(|u|^2-1)^2.
    double penalty_energy(const CoeffVec& u, double eps) const;
    /// int (|u|^2-1)^2 of the P1 interpolant (quartic-exact quadrature).
    double sphere_deviation(const CoeffVec& u) const;

    /// Load vector of the penalty term: entries
    /// (1/eps) int (|u_n|^2 + |u_p|^2 - 2) u_mid . phi_i, u_mid = (u_n+u_p)/2.
    CoeffVec penalty_load(const CoeffVec& u_n, const CoeffVec& u_p, double eps) const;
    /// Derivative of penalty_load with respect to u_n.
    Eigen::MatrixXd penalty_jacobian(const CoeffVec& u_n, const CoeffVec& u_p, double eps) const;

    /// Spatial average of each component over the interval.
    Eigen::Vector3d mean_value(const CoeffVec& u) const;

private:
    int cells_;
    double a_, b_, h_;

    template <typename F>
    void for_each_quad_point(F&& f) const;  // (cell, x, weight)
};

/// Cell averages f^n = (1/tau) int_{t^{n-1}}^{t^n} f(s) ds for n = 1..N;
/// V may be double or an Eigen vector.
template <typename F>
auto time_average_data(F&& field, const TimeGrid& grid, int gauss_points = 8)
    -> std::vector<decltype(field(0.0))> {
    using V = decltype(field(0.0));
    const GaussRule rule = GaussRule::of_order(gauss_points);
    std::vector<V> out;
    out.reserve(grid.N());
    for (int n = 1; n <= grid.N(); ++n) {
        const double a = grid.time(n - 1), b = grid.time(n);
        const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
        V acc = rule.weights[0] * field(mid + half * rule.nodes[0]);
        for (std::size_t i = 1; i < rule.nodes.size(); ++i) {
            acc = acc + rule.weights[i] * field(mid + half * rule.nodes[i]);
        }
        out.push_back(0.5 * acc);  // half-width / tau cancels: half/(b-a) = 1/2
    }
    return out;
}

}  // namespace spdelab
