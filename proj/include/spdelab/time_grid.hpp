#pragma once

#include <stdexcept>
#include <vector>

namespace spdelab {

/// Uniform partition of [0,T] with N steps of size tau = T/N.
class TimeGrid {
public:
    TimeGrid(double T, int N) : horizon_(T), steps_(N) {
        if (!(T > 0.0)) throw std::invalid_argument("TimeGrid: T must be > 0");
        if (N < 0) throw std::invalid_argument("TimeGrid: N must be >= 0");
        tau_ = N > 0 ? T / N : 0.0;
        times_.resize(N + 1);
        for (int n = 0; n <= N; ++n) times_[n] = n * tau_;
        times_[N] = T;  // exact endpoint
    }

    double T() const { return horizon_; }
    int N() const { return steps_; }
    double tau() const { return tau_; }
    double time(int n) const { return times_.at(n); }
    const std::vector<double>& times() const { return times_; }

    bool operator==(const TimeGrid& o) const {
        return horizon_ == o.horizon_ && steps_ == o.steps_;
    }

private:
    double horizon_;
    int steps_;
    double tau_;
    std::vector<double> times_;
};

}  // namespace spdelab
