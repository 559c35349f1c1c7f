#include "spdelab/galerkin.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace spdelab {

namespace {
void check_dim(const GalerkinSpace& s, const CoeffVec& c, const char* who) {
    if (c.size() != s.dim())
        throw std::invalid_argument(std::string(who) + ": coefficient length != space dim");
}
}  // namespace

void GalerkinSpace::finalize(Eigen::MatrixXd mass, Eigen::MatrixXd stiffness) {
    if (mass.rows() != mass.cols() || stiffness.rows() != stiffness.cols() ||
        mass.rows() != stiffness.rows())
        throw std::logic_error("GalerkinSpace: inconsistent assembly");
    dim_ = static_cast<int>(mass.rows());
    mass_ = std::move(mass);
    stiff_ = std::move(stiffness);
    mass_llt_.compute(mass_);
    um_llt_.compute(stiff_ + mass_);
    if (mass_llt_.info() != Eigen::Success || um_llt_.info() != Eigen::Success)
        throw std::runtime_error("GalerkinSpace: factorization failure (non-SPD assembly)");
}

double GalerkinSpace::h_norm(const CoeffVec& c) const {
    check_dim(*this, c, "h_norm");
    return std::sqrt(std::max(0.0, c.dot(mass_ * c)));
}

double GalerkinSpace::u_norm(const CoeffVec& c) const {
    check_dim(*this, c, "u_norm");
    return std::sqrt(std::max(0.0, c.dot((stiff_ + mass_) * c)));
}

double GalerkinSpace::dual_norm(const CoeffVec& c) const {
    check_dim(*this, c, "dual_norm");
    const CoeffVec mc = mass_ * c;
    return std::sqrt(std::max(0.0, mc.dot(um_llt_.solve(mc))));
}

double GalerkinSpace::dual_norm_of_load(const CoeffVec& b) const {
    check_dim(*this, b, "dual_norm_of_load");
    return std::sqrt(std::max(0.0, b.dot(um_llt_.solve(b))));
}

SpaceNorms GalerkinSpace::norms(const CoeffVec& c) const {
    return SpaceNorms{h_norm(c), u_norm(c), dual_norm(c)};
}

NormFn GalerkinSpace::h_norm_fn() const {
    return [this](const Eigen::VectorXd& c) { return h_norm(c); };
}
NormFn GalerkinSpace::u_norm_fn() const {
    return [this](const Eigen::VectorXd& c) { return u_norm(c); };
}
NormFn GalerkinSpace::dual_norm_fn() const {
    return [this](const Eigen::VectorXd& c) { return dual_norm(c); };
}

CoeffVec Scalar1DSpace::l2_project(const Field& f) const { return mass_llt().solve(load(f)); }

// ---------------------------------------------------------------------------
// SpectralSineSpace

SpectralSineSpace::SpectralSineSpace(int modes) : modes_(modes) {
    if (modes < 1) throw std::invalid_argument("SpectralSineSpace: modes must be >= 1");
    Eigen::MatrixXd mass = Eigen::MatrixXd::Identity(modes, modes);
    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(modes, modes);
    for (int k = 1; k <= modes; ++k) stiff(k - 1, k - 1) = (k * M_PI) * (k * M_PI);
    finalize(std::move(mass), std::move(stiff));
}

double SpectralSineSpace::eigenvalue(int k) const {
    if (k < 1 || k > modes_) throw std::out_of_range("SpectralSineSpace::eigenvalue");
    return (k * M_PI) * (k * M_PI);
}

double SpectralSineSpace::eval(const CoeffVec& c, double x) const {
    check_dim(*this, c, "eval");
    double acc = 0.0;
    for (int k = 1; k <= modes_; ++k) acc += c(k - 1) * std::sqrt(2.0) * std::sin(k * M_PI * x);
    return acc;
}

CoeffVec SpectralSineSpace::load(const Field& f) const {
    const int ncells = std::max(16, 2 * modes_);
    CoeffVec b(modes_);
    for (int k = 1; k <= modes_; ++k) {
        b(k - 1) = gauss_composite(
            [&](double x) { return f(x) * std::sqrt(2.0) * std::sin(k * M_PI * x); }, 0.0, 1.0,
            ncells, 10);
    }
    return b;
}

// ---------------------------------------------------------------------------
// P1DirichletSpace

P1DirichletSpace::P1DirichletSpace(int cells, double a, double b)
    : cells_(cells), a_(a), b_(b) {
    if (cells < 2) throw std::invalid_argument("P1DirichletSpace: needs at least 2 cells");
    if (!(b > a)) throw std::invalid_argument("P1DirichletSpace: empty interval");
    h_ = (b - a) / cells;
    const int n = cells - 1;
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(n, n);
    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i) {
        mass(i, i) = 4.0 * h_ / 6.0;
        stiff(i, i) = 2.0 / h_;
        if (i + 1 < n) {
            mass(i, i + 1) = mass(i + 1, i) = h_ / 6.0;
            stiff(i, i + 1) = stiff(i + 1, i) = -1.0 / h_;
        }
    }
    finalize(std::move(mass), std::move(stiff));
}

double P1DirichletSpace::eval(const CoeffVec& c, double x) const {
    check_dim(*this, c, "eval");
    if (x <= a_ || x >= b_) return 0.0;
    const double s = (x - a_) / h_;
    const int k = std::min(cells_ - 1, static_cast<int>(s));
    const double w = s - k;
    const double left = k >= 1 ? c(k - 1) : 0.0;
    const double right = k + 1 <= cells_ - 1 ? c(k) : 0.0;
    return (1.0 - w) * left + w * right;
}

CoeffVec P1DirichletSpace::load(const Field& f) const {
    const int n = cells_ - 1;
    CoeffVec b = CoeffVec::Zero(n);
    for (int k = 0; k < cells_; ++k) {
        const double x0 = a_ + k * h_, x1 = x0 + h_;
        // hat of node k+1 rises on cell k; hat of node k falls on cell k
        if (k + 1 <= n) {
            b(k) += gauss_integrate([&](double x) { return f(x) * (x - x0) / h_; }, x0, x1, 5);
        }
        if (k >= 1) {
            b(k - 1) += gauss_integrate([&](double x) { return f(x) * (x1 - x) / h_; }, x0, x1, 5);
        }
    }
    return b;
}

double P1DirichletSpace::cell_gradient(const CoeffVec& c, int k) const {
    check_dim(*this, c, "cell_gradient");
    if (k < 0 || k >= cells_) throw std::out_of_range("cell_gradient: cell index");
    const double left = k >= 1 ? c(k - 1) : 0.0;
    const double right = k + 1 <= cells_ - 1 ? c(k) : 0.0;
    return (right - left) / h_;
}

CoeffVec P1DirichletSpace::q_laplacian_apply(const CoeffVec& c, double q) const {
    if (!(q > 1.0)) throw std::invalid_argument("q_laplacian_apply: q must be > 1");
    check_dim(*this, c, "q_laplacian_apply");
    const int n = cells_ - 1;
    CoeffVec out = CoeffVec::Zero(n);
    for (int k = 0; k < cells_; ++k) {
        const double du = cell_gradient(c, k);
        const double flux = du == 0.0 ? 0.0 : std::pow(std::abs(du), q - 2.0) * du;
        // phi' of node k+1 on cell k is +1/h, of node k is -1/h
        if (k + 1 <= n) out(k) += flux;      // * (1/h) * h
        if (k >= 1) out(k - 1) -= flux;
    }
    return out;
}

Eigen::MatrixXd P1DirichletSpace::q_laplacian_jacobian(const CoeffVec& c, double q,
                                                       double delta) const {
    check_dim(*this, c, "q_laplacian_jacobian");
    const int n = cells_ - 1;
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k < cells_; ++k) {
        const double du = cell_gradient(c, k);
        const double w = (q - 1.0) * std::pow(du * du + delta * delta, 0.5 * (q - 2.0));
        // d flux / d du = w; assemble the weighted stiffness of cell k
        const double e = w / h_;
        const int i = k;      // node k+1 dof index (if interior)
        const int j = k - 1;  // node k dof index (if interior)
        if (i < n) jac(i, i) += e;
        if (j >= 0) jac(j, j) += e;
        if (i < n && j >= 0) {
            jac(i, j) -= e;
            jac(j, i) -= e;
        }
    }
    return jac;
}

double P1DirichletSpace::gradient_q_norm_pow(const CoeffVec& c, double q) const {
    check_dim(*this, c, "gradient_q_norm_pow");
    double acc = 0.0;
    for (int k = 0; k < cells_; ++k) acc += std::pow(std::abs(cell_gradient(c, k)), q) * h_;
    return acc;
}

// ---------------------------------------------------------------------------
// P1NeumannVec3Space

P1NeumannVec3Space::P1NeumannVec3Space(int cells, double a, double b)
    : cells_(cells), a_(a), b_(b) {
    if (cells < 1) throw std::invalid_argument("P1NeumannVec3Space: needs at least 1 cell");
    if (!(b > a)) throw std::invalid_argument("P1NeumannVec3Space: empty interval");
    h_ = (b - a) / cells;
    const int nn = cells + 1;
    Eigen::MatrixXd mass = Eigen::MatrixXd::Zero(3 * nn, 3 * nn);
    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(3 * nn, 3 * nn);
    for (int k = 0; k < cells; ++k) {
        for (int d = 0; d < 3; ++d) {
            const int i = 3 * k + d, j = 3 * (k + 1) + d;
            mass(i, i) += 2.0 * h_ / 6.0;
            mass(j, j) += 2.0 * h_ / 6.0;
            mass(i, j) += h_ / 6.0;
            mass(j, i) += h_ / 6.0;
            stiff(i, i) += 1.0 / h_;
            stiff(j, j) += 1.0 / h_;
            stiff(i, j) -= 1.0 / h_;
            stiff(j, i) -= 1.0 / h_;
        }
    }
    finalize(std::move(mass), std::move(stiff));
}

template <typename F>
void P1NeumannVec3Space::for_each_quad_point(F&& f) const {
    const GaussRule rule = GaussRule::of_order(5);
    for (int k = 0; k < cells_; ++k) {
        const double x0 = a_ + k * h_;
        const double mid = x0 + 0.5 * h_, half = 0.5 * h_;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            f(k, mid + half * rule.nodes[i], half * rule.weights[i]);
        }
    }
}

Eigen::Vector3d P1NeumannVec3Space::eval(const CoeffVec& c, double x) const {
    check_dim(*this, c, "eval");
    const double s = std::clamp((x - a_) / h_, 0.0, static_cast<double>(cells_));
    const int k = std::min(cells_ - 1, static_cast<int>(s));
    const double w = s - k;
    Eigen::Vector3d out;
    for (int d = 0; d < 3; ++d) out(d) = (1.0 - w) * c(3 * k + d) + w * c(3 * (k + 1) + d);
    return out;
}

Eigen::Vector3d P1NeumannVec3Space::cell_gradient(const CoeffVec& c, int k) const {
    check_dim(*this, c, "cell_gradient");
    if (k < 0 || k >= cells_) throw std::out_of_range("cell_gradient: cell index");
    Eigen::Vector3d out;
    for (int d = 0; d < 3; ++d) out(d) = (c(3 * (k + 1) + d) - c(3 * k + d)) / h_;
    return out;
}

CoeffVec P1NeumannVec3Space::load(const Field3& f) const {
    CoeffVec b = CoeffVec::Zero(dim());
    for_each_quad_point([&](int k, double x, double w) {
        const double x0 = a_ + k * h_;
        const double s = (x - x0) / h_;
        const Eigen::Vector3d v = f(x);
        for (int d = 0; d < 3; ++d) {
            b(3 * k + d) += w * v(d) * (1.0 - s);
            b(3 * (k + 1) + d) += w * v(d) * s;
        }
    });
    return b;
}

CoeffVec P1NeumannVec3Space::l2_project(const Field3& f) const {
    return mass_llt().solve(load(f));
}

CoeffVec P1NeumannVec3Space::nodal_cross(const CoeffVec& u, const Eigen::Vector3d& gamma) const {
    check_dim(*this, u, "nodal_cross");
    CoeffVec out(dim());
    for (int j = 0; j < nodes(); ++j) {
        const Eigen::Vector3d uj = u.segment<3>(3 * j);
        out.segment<3>(3 * j) = uj.cross(gamma);
    }
    return out;
}

double P1NeumannVec3Space::penalty_energy(const CoeffVec& u, double eps) const {
    return 0.5 / eps * sphere_deviation(u);
}

double P1NeumannVec3Space::sphere_deviation(const CoeffVec& u) const {
    check_dim(*this, u, "sphere_deviation");
    double acc = 0.0;
    for_each_quad_point([&](int /*k*/, double x, double w) {
        const Eigen::Vector3d v = eval(u, x);
        const double d = v.squaredNorm() - 1.0;
        acc += w * d * d;
    });
    return acc;
}

CoeffVec P1NeumannVec3Space::penalty_load(const CoeffVec& u_n, const CoeffVec& u_p,
                                          double eps) const {
    check_dim(*this, u_n, "penalty_load");
    check_dim(*this, u_p, "penalty_load");
    CoeffVec b = CoeffVec::Zero(dim());
    for_each_quad_point([&](int k, double x, double w) {
        const double x0 = a_ + k * h_;
        const double s = (x - x0) / h_;
        const Eigen::Vector3d vn = eval(u_n, x);
        const Eigen::Vector3d vp = eval(u_p, x);
        const double psi = (vn.squaredNorm() + vp.squaredNorm() - 2.0) / eps;
        const Eigen::Vector3d mid = 0.5 * (vn + vp);
        for (int d = 0; d < 3; ++d) {
            b(3 * k + d) += w * psi * mid(d) * (1.0 - s);
            b(3 * (k + 1) + d) += w * psi * mid(d) * s;
        }
    });
    return b;
}

Eigen::MatrixXd P1NeumannVec3Space::penalty_jacobian(const CoeffVec& u_n, const CoeffVec& u_p,
                                                     double eps) const {
    check_dim(*this, u_n, "penalty_jacobian");
    check_dim(*this, u_p, "penalty_jacobian");
    Eigen::MatrixXd jac = Eigen::MatrixXd::Zero(dim(), dim());
    for_each_quad_point([&](int k, double x, double w) {
        const double x0 = a_ + k * h_;
        const double s = (x - x0) / h_;
        const Eigen::Vector3d vn = eval(u_n, x);
        const Eigen::Vector3d vp = eval(u_p, x);
        const double psi = (vn.squaredNorm() + vp.squaredNorm() - 2.0) / eps;
        const Eigen::Vector3d mid = 0.5 * (vn + vp);
        // d(psi * mid)/d vn = (2/eps) mid vn^T + (psi/2) I
        Eigen::Matrix3d dmat = (2.0 / eps) * mid * vn.transpose() +
                               0.5 * psi * Eigen::Matrix3d::Identity();
        const double shape[2] = {1.0 - s, s};
        const int node[2] = {k, k + 1};
        for (int a = 0; a < 2; ++a) {
            for (int b2 = 0; b2 < 2; ++b2) {
                jac.block<3, 3>(3 * node[a], 3 * node[b2]) +=
                    w * shape[a] * shape[b2] * dmat;
            }
        }
    });
    return jac;
}

Eigen::Vector3d P1NeumannVec3Space::mean_value(const CoeffVec& u) const {
    check_dim(*this, u, "mean_value");
    Eigen::Vector3d acc = Eigen::Vector3d::Zero();
    for (int k = 0; k < cells_; ++k) {
        acc += 0.5 * h_ * (u.segment<3>(3 * k) + u.segment<3>(3 * (k + 1)));
    }
    return acc / (b_ - a_);
}

}  // namespace spdelab
