#include "mgrid/dialgo.hpp"
#include "mgrid/rng.hpp"

#include <cmath>
#include <stdexcept>

#include <fmt/core.h>

namespace mgrid {

StepSizeSchedule StepSizeSchedule::diminishing(double a, double b)
{
    if (!(a > 0.0) || !(b > 0.0)) {
        throw std::invalid_argument(fmt::format("diminishing schedule needs a, b > 0 (got {}, {})", a, b));
    }
    StepSizeSchedule s;
    s.kind = Kind::diminishing;
    s.a = a;
    s.b = b;
    return s;
}

StepSizeSchedule StepSizeSchedule::piecewise(double alpha0, double factor, int period)
{
    if (!(alpha0 > 0.0) || !(factor > 0.0) || period < 1) {
        throw std::invalid_argument(fmt::format(
            "piecewise schedule needs alpha0 > 0, factor > 0, period >= 1 (got {}, {}, {})", alpha0,
            factor, period));
    }
    StepSizeSchedule s;
    s.kind = Kind::piecewise;
    s.alpha0 = alpha0;
    s.factor = factor;
    s.period = period;
    return s;
}

double StepSizeSchedule::operator()(int t) const
{
    if (kind == Kind::diminishing) {
        return a / (t + b);
    }
    return alpha0 * std::pow(factor, t / period);
}

std::vector<Vector> init_allocations(const Vector& h, int N, InitMode mode, std::uint64_t seed)
{
    if (N < 1) {
        throw std::invalid_argument("init_allocations: N must be >= 1");
    }
    std::vector<Vector> y(N, h / N);
    if (mode == InitMode::random && N > 1) {
        Rng rng(seed);
        const double scale = 1.0 + (h.size() ? h.cwiseAbs().maxCoeff() / N : 0.0);
        Vector sum = Vector::Zero(h.size());
        for (int i = 0; i + 1 < N; ++i) {
            for (Eigen::Index j = 0; j < h.size(); ++j) {
                y[i][j] += scale * rng.normal();
            }
            sum += y[i];
        }
        y[N - 1] = h - sum;
    }
    if (N == 1) {
        y[0] = h;
    }
    return y;
}

}  // namespace mgrid
