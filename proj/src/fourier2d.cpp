#include "spdelab/fourier2d.hpp"

#include <cmath>
#include <stdexcept>

namespace spdelab {

namespace {
constexpr double kTwoPi = 2.0 * M_PI;

// half-space selection: k1 > 0, or k1 == 0 and k2 > 0
bool in_half_space(int k1, int k2) { return k1 > 0 || (k1 == 0 && k2 > 0); }
}  // namespace

FourierDivFree2DSpace::FourierDivFree2DSpace(int mode_cutoff) : cutoff_(mode_cutoff) {
    if (mode_cutoff < 1) throw std::invalid_argument("FourierDivFree2DSpace: cutoff >= 1");
    for (int k1 = -cutoff_; k1 <= cutoff_; ++k1) {
        for (int k2 = -cutoff_; k2 <= cutoff_; ++k2) {
            if ((k1 == 0 && k2 == 0) || !in_half_space(k1, k2)) continue;
            modes_.push_back(Mode{k1, k2});
        }
    }
    const int dim = 2 * static_cast<int>(modes_.size());
    grid_ = 3 * cutoff_ + 1;
    weight_ = (kTwoPi / grid_) * (kTwoPi / grid_);

    const int np = grid_ * grid_;
    basis_.resize(2 * np, dim);
    basis_grad_.resize(4 * np, dim);
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        const double k1 = modes_[m].k1, k2 = modes_[m].k2;
        const double knorm = std::sqrt(k1 * k1 + k2 * k2);
        const double px = -k2 / knorm, py = k1 / knorm;  // unit k_perp
        const double amp = std::sqrt(2.0) / kTwoPi;
        for (int i = 0; i < grid_; ++i) {
            for (int j = 0; j < grid_; ++j) {
                const double x = kTwoPi * i / grid_, y = kTwoPi * j / grid_;
                const double ph = k1 * x + k2 * y;
                const double c = std::cos(ph), s = std::sin(ph);
                const int row = i * grid_ + j;
                const int ic = cos_index(static_cast<int>(m));
                const int is = sin_index(static_cast<int>(m));
                basis_(row, ic) = amp * px * c;
                basis_(np + row, ic) = amp * py * c;
                basis_(row, is) = amp * px * s;
                basis_(np + row, is) = amp * py * s;
                // gradients: d/dx cos -> -k1 sin, d/dy cos -> -k2 sin, etc.
                basis_grad_(row, ic) = -amp * px * k1 * s;            // du_x/dx
                basis_grad_(np + row, ic) = -amp * px * k2 * s;       // du_x/dy
                basis_grad_(2 * np + row, ic) = -amp * py * k1 * s;   // du_y/dx
                basis_grad_(3 * np + row, ic) = -amp * py * k2 * s;   // du_y/dy
                basis_grad_(row, is) = amp * px * k1 * c;
                basis_grad_(np + row, is) = amp * px * k2 * c;
                basis_grad_(2 * np + row, is) = amp * py * k1 * c;
                basis_grad_(3 * np + row, is) = amp * py * k2 * c;
            }
        }
    }

    Eigen::MatrixXd mass = Eigen::MatrixXd::Identity(dim, dim);
    Eigen::MatrixXd stiff = Eigen::MatrixXd::Zero(dim, dim);
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        const double k2n = mode_sq(static_cast<int>(m));
        stiff(cos_index(static_cast<int>(m)), cos_index(static_cast<int>(m))) = k2n;
        stiff(sin_index(static_cast<int>(m)), sin_index(static_cast<int>(m))) = k2n;
    }
    finalize(std::move(mass), std::move(stiff));
}

double FourierDivFree2DSpace::mode_sq(int m) const {
    const auto& k = modes_.at(m);
    return static_cast<double>(k.k1 * k.k1 + k.k2 * k.k2);
}

Eigen::Vector2d FourierDivFree2DSpace::eval_grid(const CoeffVec& c, int i, int j) const {
    const int np = grid_ * grid_;
    const int row = i * grid_ + j;
    return Eigen::Vector2d(basis_.row(row).dot(c), basis_.row(np + row).dot(c));
}

Eigen::Vector2d FourierDivFree2DSpace::eval(const CoeffVec& c, double x, double y) const {
    if (c.size() != dim()) throw std::invalid_argument("eval: bad coefficient length");
    Eigen::Vector2d out = Eigen::Vector2d::Zero();
    const double amp = std::sqrt(2.0) / kTwoPi;
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        const double k1 = modes_[m].k1, k2 = modes_[m].k2;
        const double knorm = std::sqrt(k1 * k1 + k2 * k2);
        const Eigen::Vector2d perp(-k2 / knorm, k1 / knorm);
        const double ph = k1 * x + k2 * y;
        out += amp * perp *
               (c(cos_index(static_cast<int>(m))) * std::cos(ph) +
                c(sin_index(static_cast<int>(m))) * std::sin(ph));
    }
    return out;
}

Eigen::Matrix2d FourierDivFree2DSpace::eval_gradient(const CoeffVec& c, double x,
                                                     double y) const {
    if (c.size() != dim()) throw std::invalid_argument("eval_gradient: bad coefficient length");
    Eigen::Matrix2d out = Eigen::Matrix2d::Zero();
    const double amp = std::sqrt(2.0) / kTwoPi;
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        const double k1 = modes_[m].k1, k2 = modes_[m].k2;
        const double knorm = std::sqrt(k1 * k1 + k2 * k2);
        const Eigen::Vector2d perp(-k2 / knorm, k1 / knorm);
        const double ph = k1 * x + k2 * y;
        const double dc = -std::sin(ph), ds = std::cos(ph);
        const double wc = c(cos_index(static_cast<int>(m)));
        const double ws = c(sin_index(static_cast<int>(m)));
        for (int a = 0; a < 2; ++a) {
            out(a, 0) += amp * perp(a) * k1 * (wc * dc + ws * ds);
            out(a, 1) += amp * perp(a) * k2 * (wc * dc + ws * ds);
        }
    }
    return out;
}

double FourierDivFree2DSpace::eval_divergence(const CoeffVec& c, double x, double y) const {
    const Eigen::Matrix2d g = eval_gradient(c, x, y);
    return g(0, 0) + g(1, 1);
}

Eigen::MatrixXd FourierDivFree2DSpace::velocity_on_grid(const CoeffVec& c) const {
    if (c.size() != dim()) throw std::invalid_argument("velocity_on_grid: bad length");
    const int np = grid_ * grid_;
    Eigen::VectorXd flat = basis_ * c;
    Eigen::MatrixXd out(np, 2);
    out.col(0) = flat.head(np);
    out.col(1) = flat.tail(np);
    return out;
}

Eigen::MatrixXd FourierDivFree2DSpace::gradient_on_grid(const CoeffVec& c) const {
    if (c.size() != dim()) throw std::invalid_argument("gradient_on_grid: bad length");
    const int np = grid_ * grid_;
    Eigen::VectorXd flat = basis_grad_ * c;
    Eigen::MatrixXd out(np, 4);
    for (int a = 0; a < 4; ++a) out.col(a) = flat.segment(a * np, np);
    return out;
}

CoeffVec FourierDivFree2DSpace::load_from_grid(const Eigen::MatrixXd& field) const {
    const int np = grid_ * grid_;
    if (field.rows() != np || field.cols() != 2)
        throw std::invalid_argument("load_from_grid: field must be L^2 x 2");
    Eigen::VectorXd flat(2 * np);
    flat.head(np) = field.col(0);
    flat.tail(np) = field.col(1);
    return weight_ * (basis_.transpose() * flat);
}

CoeffVec FourierDivFree2DSpace::load(const Field2& f) const {
    const int np = grid_ * grid_;
    Eigen::MatrixXd field(np, 2);
    for (int i = 0; i < grid_; ++i) {
        for (int j = 0; j < grid_; ++j) {
            const Eigen::Vector2d v = f(kTwoPi * i / grid_, kTwoPi * j / grid_);
            field(i * grid_ + j, 0) = v(0);
            field(i * grid_ + j, 1) = v(1);
        }
    }
    return load_from_grid(field);
}

CoeffVec FourierDivFree2DSpace::l2_project(const Field2& f) const { return load(f); }

double FourierDivFree2DSpace::trilinear_skew(const CoeffVec& u, const CoeffVec& w,
                                             const CoeffVec& v) const {
    const int np = grid_ * grid_;
    const Eigen::MatrixXd ug = velocity_on_grid(u);
    const Eigen::MatrixXd wg = velocity_on_grid(w);
    const Eigen::MatrixXd vg = velocity_on_grid(v);
    const Eigen::MatrixXd dwg = gradient_on_grid(w);
    const Eigen::MatrixXd dvg = gradient_on_grid(v);
    double acc = 0.0;
    for (int r = 0; r < np; ++r) {
        // (u.grad)w . v  -  w . (u.grad)v, pointwise
        double t1 = 0.0, t2 = 0.0;
        for (int a = 0; a < 2; ++a) {
            const double conv_w = ug(r, 0) * dwg(r, 2 * a + 0) + ug(r, 1) * dwg(r, 2 * a + 1);
            const double conv_v = ug(r, 0) * dvg(r, 2 * a + 0) + ug(r, 1) * dvg(r, 2 * a + 1);
            t1 += conv_w * vg(r, a);
            t2 += wg(r, a) * conv_v;
        }
        acc += 0.5 * (t1 - t2);
    }
    return weight_ * acc;
}

CoeffVec FourierDivFree2DSpace::convection_apply(const CoeffVec& a, const CoeffVec& w) const {
    const int np = grid_ * grid_;
    const Eigen::MatrixXd ag = velocity_on_grid(a);
    const Eigen::MatrixXd wg = velocity_on_grid(w);
    const Eigen::MatrixXd dwg = gradient_on_grid(w);

    // term 1: ((a.grad)w, v) for all v
    Eigen::MatrixXd conv(np, 2);
    for (int r = 0; r < np; ++r) {
        for (int c = 0; c < 2; ++c) {
            conv(r, c) = ag(r, 0) * dwg(r, 2 * c + 0) + ag(r, 1) * dwg(r, 2 * c + 1);
        }
    }
    CoeffVec out = load_from_grid(conv);

    // term 2: (w, (a.grad)v) = sum_{c,l} (w_c a_l, d_l v_c) for all v
    Eigen::VectorXd t(4 * np);
    for (int r = 0; r < np; ++r) {
        t(0 * np + r) = wg(r, 0) * ag(r, 0);  // pairs with du_x/dx
        t(1 * np + r) = wg(r, 0) * ag(r, 1);  // du_x/dy
        t(2 * np + r) = wg(r, 1) * ag(r, 0);  // du_y/dx
        t(3 * np + r) = wg(r, 1) * ag(r, 1);  // du_y/dy
    }
    out -= weight_ * (basis_grad_.transpose() * t);
    return 0.5 * out;
}

Eigen::MatrixXd FourierDivFree2DSpace::viscous_matrix_sym(double mu) const {
    const int np = grid_ * grid_;
    const int d = dim();
    // D(e_i):D(e_j) summed over the grid; assemble via the symmetrized
    // gradient images
    Eigen::MatrixXd sym(3 * np, d);  // D_xx, D_xy (=D_yx), D_yy
    sym.topRows(np) = basis_grad_.topRows(np);  // du_x/dx
    sym.middleRows(np, np) =
        0.5 * (basis_grad_.middleRows(np, np) + basis_grad_.middleRows(2 * np, np));
    sym.bottomRows(np) = basis_grad_.bottomRows(np);  // du_y/dy
    Eigen::MatrixXd weighted = sym;
    weighted.middleRows(np, np) *= std::sqrt(2.0);  // off-diagonal appears twice
    return 2.0 * mu * weight_ * (weighted.transpose() * weighted);
}

Eigen::MatrixXd FourierDivFree2DSpace::viscous_matrix_grad(double mu) const {
    return mu * stiffness();
}

CoeffVec FourierDivFree2DSpace::rotate90(const CoeffVec& c) const {
    if (c.size() != dim()) throw std::invalid_argument("rotate90: bad length");
    CoeffVec out = CoeffVec::Zero(dim());
    // R = [[0,-1],[1,0]]: mode k maps to R k with coefficients carried
    // over; if R k leaves the half-space use e_{-k}^c = -e_k^c and
    // e_{-k}^s = e_k^s.
    for (std::size_t m = 0; m < modes_.size(); ++m) {
        int r1 = -modes_[m].k2, r2 = modes_[m].k1;
        double cos_sign = 1.0, sin_sign = 1.0;
        if (!in_half_space(r1, r2)) {
            r1 = -r1;
            r2 = -r2;
            cos_sign = -1.0;
        }
        int target = -1;
        for (std::size_t t = 0; t < modes_.size(); ++t) {
            if (modes_[t].k1 == r1 && modes_[t].k2 == r2) {
                target = static_cast<int>(t);
                break;
            }
        }
        if (target < 0) throw std::logic_error("rotate90: rotated mode outside basis");
        out(cos_index(target)) += cos_sign * c(cos_index(static_cast<int>(m)));
        out(sin_index(target)) += sin_sign * c(sin_index(static_cast<int>(m)));
    }
    return out;
}

double FourierDivFree2DSpace::max_divergence_dense(const CoeffVec& c) const {
    const int n = 2 * grid_;
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            worst = std::max(worst,
                             std::abs(eval_divergence(c, kTwoPi * i / n, kTwoPi * j / n)));
        }
    }
    return worst;
}

}  // namespace spdelab
