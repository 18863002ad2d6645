#include <algorithm>
#include <cmath>

#include "psmkit/error.hpp"
#include "psmkit/sensor.hpp"

namespace psmkit {

namespace {

// Derivative at an end knot from the quadratic through the three end knots.
double three_point_slope(double x0, double y0, double x1, double y1, double x2, double y2) {
    const double h1 = x1 - x0, h2 = x2 - x1;
    return -(2 * h1 + h2) / (h1 * (h1 + h2)) * y0 + (h1 + h2) / (h1 * h2) * y1 - h1 / (h2 * (h1 + h2)) * y2;
}

}  // namespace

LookupTable::LookupTable(std::vector<std::pair<double, double>> knots, Interpolation mode)
    : knots_(std::move(knots)), mode_(mode) {
    if (knots_.size() < 2) throw ValidationError("lookup table needs at least 2 knots");
    for (std::size_t i = 0; i < knots_.size(); ++i) {
        if (!std::isfinite(knots_[i].first) || !std::isfinite(knots_[i].second))
            throw ValidationError("lookup table knot " + std::to_string(i) + " is not finite");
        if (i == 0) continue;
        if (!(knots_[i].first > knots_[i - 1].first))
            throw ValidationError("lookup table inputs must be strictly increasing");
        if (!(knots_[i].second > knots_[i - 1].second))
            throw ValidationError("lookup table outputs must be strictly increasing (non-monotone table)");
    }
    if (mode_ != Interpolation::CubicSpline || knots_.size() < 3) {
        mode_ = knots_.size() < 3 ? Interpolation::Linear : mode_;
        return;
    }

    // Clamped spline: tridiagonal system for the knot second derivatives.
    const std::size_t n = knots_.size();
    auto x = [&](std::size_t i) { return knots_[i].first; };
    auto y = [&](std::size_t i) { return knots_[i].second; };
    const double s0 = three_point_slope(x(0), y(0), x(1), y(1), x(2), y(2));
    const double sn = -three_point_slope(-x(n - 1), y(n - 1), -x(n - 2), y(n - 2), -x(n - 3), y(n - 3));

    std::vector<double> sub(n, 0.0), diag(n, 0.0), sup(n, 0.0), rhs(n, 0.0);
    {
        const double h = x(1) - x(0);
        diag[0] = h / 3.0;
        sup[0] = h / 6.0;
        rhs[0] = (y(1) - y(0)) / h - s0;
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
        const double hl = x(i) - x(i - 1), hr = x(i + 1) - x(i);
        sub[i] = hl / 6.0;
        diag[i] = (hl + hr) / 3.0;
        sup[i] = hr / 6.0;
        rhs[i] = (y(i + 1) - y(i)) / hr - (y(i) - y(i - 1)) / hl;
    }
    {
        const double h = x(n - 1) - x(n - 2);
        sub[n - 1] = h / 6.0;
        diag[n - 1] = h / 3.0;
        rhs[n - 1] = sn - (y(n - 1) - y(n - 2)) / h;
    }
    // Thomas algorithm.
    for (std::size_t i = 1; i < n; ++i) {
        const double w = sub[i] / diag[i - 1];
        diag[i] -= w * sup[i - 1];
        rhs[i] -= w * rhs[i - 1];
    }
    second_derivs_.assign(n, 0.0);
    second_derivs_[n - 1] = rhs[n - 1] / diag[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) second_derivs_[i] = (rhs[i] - sup[i] * second_derivs_[i + 1]) / diag[i];
}

double LookupTable::slope_at_left() const {
    const auto& [x0, y0] = knots_[0];
    const auto& [x1, y1] = knots_[1];
    const double h = x1 - x0;
    if (mode_ == Interpolation::Linear) return (y1 - y0) / h;
    return (y1 - y0) / h - h * (2 * second_derivs_[0] + second_derivs_[1]) / 6.0;
}

double LookupTable::slope_at_right() const {
    const std::size_t n = knots_.size();
    const auto& [x0, y0] = knots_[n - 2];
    const auto& [x1, y1] = knots_[n - 1];
    const double h = x1 - x0;
    if (mode_ == Interpolation::Linear) return (y1 - y0) / h;
    return (y1 - y0) / h + h * (second_derivs_[n - 2] + 2 * second_derivs_[n - 1]) / 6.0;
}

double LookupTable::operator()(double x) const {
    const std::size_t n = knots_.size();
    if (x <= knots_.front().first) return knots_.front().second + slope_at_left() * (x - knots_.front().first);
    if (x >= knots_.back().first) return knots_.back().second + slope_at_right() * (x - knots_.back().first);

    auto it = std::upper_bound(knots_.begin(), knots_.end(), x,
                               [](double v, const std::pair<double, double>& k) { return v < k.first; });
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    const auto& [x0, y0] = knots_[i];
    const auto& [x1, y1] = knots_[std::min(i + 1, n - 1)];
    if (x == x0) return y0;
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    if (mode_ == Interpolation::Linear) return y0 + t * (y1 - y0);

    const double a = 1.0 - t;
    const double m0 = second_derivs_[i], m1 = second_derivs_[i + 1];
    return a * y0 + t * y1 + ((a * a * a - a) * m0 + (t * t * t - t) * m1) * h * h / 6.0;
}

double LookupTable::inverse(double y) const {
    if (y <= knots_.front().second) {
        const double s = slope_at_left();
        if (!(s > 0)) throw ValidationError("lookup table is not invertible below its first knot");
        return knots_.front().first + (y - knots_.front().second) / s;
    }
    if (y >= knots_.back().second) {
        const double s = slope_at_right();
        if (!(s > 0)) throw ValidationError("lookup table is not invertible above its last knot");
        return knots_.back().first + (y - knots_.back().second) / s;
    }
    auto it = std::upper_bound(knots_.begin(), knots_.end(), y,
                               [](double v, const std::pair<double, double>& k) { return v < k.second; });
    const std::size_t i = static_cast<std::size_t>(it - knots_.begin()) - 1;
    double lo = knots_[i].first, hi = knots_[i + 1].first;
    if (mode_ == Interpolation::Linear) {
        const double t = (y - knots_[i].second) / (knots_[i + 1].second - knots_[i].second);
        return lo + t * (hi - lo);
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-15 * std::max(1.0, std::abs(lo)); ++iter) {
        const double mid = 0.5 * (lo + hi);
        if ((*this)(mid) < y)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

}  // namespace psmkit
