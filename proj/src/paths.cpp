#include "spdelab/paths.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

#include "spdelab/quadrature.hpp"

namespace spdelab {

NormFn euclidean_norm() {
    return [](const Eigen::VectorXd& v) { return v.norm(); };
}

namespace {

void check_levels(const TimeGrid& grid, const std::vector<Eigen::VectorXd>& levels) {
    if (static_cast<int>(levels.size()) != grid.N() + 1)
        throw std::invalid_argument("path: level count must be N+1");
}

void check_range(const TimeGrid& grid, double t) {
    if (t < 0.0 || t > grid.T()) throw std::out_of_range("path eval: t outside [0,T]");
}

}  // namespace

Eigen::VectorXd StepPath::eval(double t) const {
    check_levels(grid, levels);
    check_range(grid, t);
    // caglad: value at a grid time belongs to the interval ending there
    const auto& ts = grid.times();
    const auto it = std::lower_bound(ts.begin(), ts.end(), t);
    return levels[static_cast<std::size_t>(it - ts.begin())];
}

Eigen::VectorXd PolyPath::eval(double t) const {
    check_levels(grid, levels);
    check_range(grid, t);
    const auto& ts = grid.times();
    if (t >= ts.back()) return levels.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const int n = std::max<int>(1, static_cast<int>(it - ts.begin()));
    const double a = ts[n - 1], b = ts[n];
    const double w = (t - a) / (b - a);
    return (1.0 - w) * levels[n - 1] + w * levels[n];
}

double holder_seminorm(const PolyPath& path, double theta, const NormFn& norm) {
    if (!(theta > 0.0 && theta <= 1.0))
        throw std::invalid_argument("holder_seminorm: theta must be in (0,1]");
    check_levels(path.grid, path.levels);
    const auto& ts = path.grid.times();
    double best = 0.0;
    for (std::size_t m = 0; m < ts.size(); ++m) {
        for (std::size_t n = m + 1; n < ts.size(); ++n) {
            const double dt = ts[n] - ts[m];
            best = std::max(best, norm(path.levels[n] - path.levels[m]) / std::pow(dt, theta));
        }
    }
    return best;
}

double translate_moment(const PolyPath& path, double delta, double p, const NormFn& norm) {
    if (!(delta > 0.0 && delta < path.grid.T()))
        throw std::invalid_argument("translate_moment: delta outside (0,T)");
    if (p < 1.0) throw std::invalid_argument("translate_moment: p must be >= 1");
    check_levels(path.grid, path.levels);

    // breakpoints of t -> u(t) - u(t-delta) on [delta, T]
    std::set<double> pts;
    pts.insert(delta);
    pts.insert(path.grid.T());
    for (double t : path.grid.times()) {
        if (t > delta && t < path.grid.T()) pts.insert(t);
        const double shifted = t + delta;
        if (shifted > delta && shifted < path.grid.T()) pts.insert(shifted);
    }
    std::vector<double> brk(pts.begin(), pts.end());

    const auto integrand = [&](double t) {
        return std::pow(norm(path.eval(t) - path.eval(t - delta)), p);
    };
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        acc += gauss_composite(integrand, brk[i], brk[i + 1], 2, 12);
    }
    return acc;
}

namespace {

/// Strictly increasing piecewise-linear [0,T] -> [0,T] with lambda(0)=0,
/// lambda(T)=T; knots exclude the endpoints.
struct Reparam {
    double T;
    std::vector<double> s;  // abscissae, strictly increasing in (0,T)
    std::vector<double> y;  // ordinates, strictly increasing in (0,T)

    double eval(double t) const {
        double s0 = 0.0, y0 = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (t <= s[k]) return y0 + (t - s0) * (y[k] - y0) / (s[k] - s0);
            s0 = s[k];
            y0 = y[k];
        }
        return y0 + (t - s0) * (T - y0) / (T - s0);
    }

    double inverse(double yy) const {
        double s0 = 0.0, y0 = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (yy <= y[k]) return s0 + (yy - y0) * (s[k] - s0) / (y[k] - y0);
            s0 = s[k];
            y0 = y[k];
        }
        return s0 + (yy - y0) * (T - s0) / (T - y0);
    }

    /// gamma(lambda): for piecewise-linear maps every difference quotient
    /// is a convex combination of segment slopes, so the sup is attained
    /// on a single segment.
    double gamma() const {
        double g = 0.0, s0 = 0.0, y0 = 0.0;
        for (std::size_t k = 0; k <= s.size(); ++k) {
            const double s1 = k < s.size() ? s[k] : T;
            const double y1 = k < s.size() ? y[k] : T;
            g = std::max(g, std::abs(std::log((y1 - y0) / (s1 - s0))));
            s0 = s1;
            y0 = y1;
        }
        return g;
    }

    bool valid() const {
        double s0 = 0.0, y0 = 0.0;
        for (std::size_t k = 0; k < s.size(); ++k) {
            if (!(s[k] > s0 && s[k] < T && y[k] > y0 && y[k] < T)) return false;
            s0 = s[k];
            y0 = y[k];
        }
        return true;
    }
};

double sup_diff(const StepPath& u, const StepPath& v, const Reparam& lam, const NormFn& norm) {
    std::set<double> pts;
    pts.insert(0.0);
    pts.insert(lam.T);
    for (double t : u.grid.times())
        if (t > 0.0 && t < lam.T) pts.insert(t);
    for (double tv : v.grid.times()) {
        const double t = lam.inverse(tv);
        if (t > 0.0 && t < lam.T) pts.insert(t);
    }
    std::vector<double> brk(pts.begin(), pts.end());
    double sup = norm(u.eval(0.0) - v.eval(lam.eval(0.0)));
    for (std::size_t i = 0; i + 1 < brk.size(); ++i) {
        const double mid = 0.5 * (brk[i] + brk[i + 1]);
        sup = std::max(sup, norm(u.eval(mid) - v.eval(std::min(lam.eval(mid), lam.T))));
    }
    sup = std::max(sup, norm(u.eval(lam.T) - v.eval(lam.T)));
    return sup;
}

double objective(const StepPath& u, const StepPath& v, const Reparam& lam, const NormFn& norm) {
    return std::max(lam.gamma(), sup_diff(u, v, lam, norm));
}

}  // namespace

double skorokhod_ub(const StepPath& u, const StepPath& v, const SkorokhodOptions& opts) {
    if (u.grid.T() != v.grid.T())
        throw std::invalid_argument("skorokhod_ub: mismatched horizon");
    const NormFn norm = opts.norm ? opts.norm : euclidean_norm();
    const double T = u.grid.T();

    const Reparam identity{T, {}, {}};
    double best = sup_diff(u, v, identity, norm);

    std::vector<double> ubrk, vbrk;
    for (double t : u.grid.times())
        if (t > 0.0 && t < T) ubrk.push_back(t);
    for (double t : v.grid.times())
        if (t > 0.0 && t < T) vbrk.push_back(t);

    int budget = opts.knot_budget;
    const auto try_candidate = [&](double s, double y) {
        if (budget <= 0) return;
        Reparam lam{T, {s}, {y}};
        if (!lam.valid()) return;
        --budget;
        best = std::min(best, objective(u, v, lam, norm));
    };

    // One-knot family (s, y): y on a v-breakpoint with the knot abscissa
    // minimized exactly, and the mirrored family (s on a u-breakpoint)
    // so the bound is symmetric in (u, v).
    const auto sweep_abscissa = [&](double y, const std::vector<double>& own_brk,
                                    const std::vector<double>& other_brk, bool knot_is_s) {
        // critical abscissae where a pulled-back breakpoint crosses one
        // of this path's breakpoints, splitting the objective into
        // intervals on which the sup-part is constant
        std::set<double> cand;
        cand.insert(y);
        for (double tb : own_brk) cand.insert(tb);
        for (double to : other_brk) {
            for (double tb : own_brk) {
                // knot (s,y): lambda^{-1}(to) = tb  =>  solve for s
                if (to <= y) {
                    const double s = to > 0.0 ? tb * y / to : -1.0;
                    if (s > 0.0 && s < T) cand.insert(s);
                } else {
                    const double denom = T - to;
                    if (denom > 0.0) {
                        const double s = (tb * (T - y) - T * (to - y)) / denom;
                        if (s > 0.0 && s < T) cand.insert(s);
                    }
                }
            }
        }
        // midpoints between consecutive critical abscissae
        std::vector<double> cs(cand.begin(), cand.end());
        std::vector<double> all(cs);
        for (std::size_t i = 0; i + 1 < cs.size(); ++i) all.push_back(0.5 * (cs[i] + cs[i + 1]));
        if (!cs.empty()) {
            all.push_back(0.5 * cs.front());
            all.push_back(0.5 * (cs.back() + T));
        }
        for (double s : all) {
            if (knot_is_s) try_candidate(s, y);
            else try_candidate(y, s);
        }
    };

    for (double y : vbrk) sweep_abscissa(y, ubrk, vbrk, /*knot_is_s=*/true);
    for (double s : ubrk) sweep_abscissa(s, vbrk, ubrk, /*knot_is_s=*/false);

    // two-knot monotone matchings of breakpoint pairs, while budget lasts
    for (std::size_t i1 = 0; i1 < ubrk.size() && budget > 0; ++i1) {
        for (std::size_t i2 = i1 + 1; i2 < ubrk.size() && budget > 0; ++i2) {
            for (std::size_t j1 = 0; j1 < vbrk.size() && budget > 0; ++j1) {
                for (std::size_t j2 = j1 + 1; j2 < vbrk.size() && budget > 0; ++j2) {
                    Reparam lam{T, {ubrk[i1], ubrk[i2]}, {vbrk[j1], vbrk[j2]}};
                    if (!lam.valid()) continue;
                    --budget;
                    best = std::min(best, objective(u, v, lam, norm));
                }
            }
        }
    }
    return best;
}

}  // namespace spdelab
