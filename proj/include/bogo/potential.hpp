#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "bogo/error.hpp"
#include "bogo/quadrature.hpp"

namespace bogo {

/// Non-negative, compactly supported radial interaction V(r).
class RadialPotential {
public:
    enum class Kind { zero, soft_sphere, gaussian_truncated, tabulated };

    static RadialPotential zero() { return RadialPotential(Kind::zero); }

    /// V(r) = v0 for r <= radius, 0 beyond.
    static RadialPotential soft_sphere(double v0, double radius) {
        if (!(v0 >= 0.0) || !std::isfinite(v0)) throw InvalidArgument("soft_sphere: v0 must be finite and >= 0");
        if (!(radius > 0.0) || !std::isfinite(radius)) throw InvalidArgument("soft_sphere: radius must be > 0");
        RadialPotential v(Kind::soft_sphere);
        v.v0_ = v0;
        v.support_ = radius;
        return v;
    }

    /// V(r) = v0 exp(-r^2 / width^2) for r <= support_radius, 0 beyond.
    static RadialPotential gaussian_truncated(double v0, double width, double support_radius) {
        if (!(v0 >= 0.0) || !std::isfinite(v0)) throw InvalidArgument("gaussian_truncated: v0 must be finite and >= 0");
        if (!(width > 0.0)) throw InvalidArgument("gaussian_truncated: width must be > 0");
        if (!(support_radius > 0.0)) throw InvalidArgument("gaussian_truncated: support_radius must be > 0");
        RadialPotential v(Kind::gaussian_truncated);
        v.v0_ = v0;
        v.width_ = width;
        v.support_ = support_radius;
        return v;
    }

    /// Piecewise-linear interpolation of (grid, values); grid starts at 0 and
    /// increases strictly, V = 0 beyond grid.back().
    static RadialPotential tabulated(std::vector<double> grid, std::vector<double> values) {
        if (grid.size() < 2 || grid.size() != values.size())
            throw InvalidArgument("tabulated: grid and values must have equal length >= 2");
        if (grid.front() != 0.0) throw InvalidArgument("tabulated: grid must start at r = 0");
        for (std::size_t i = 1; i < grid.size(); ++i)
            if (!(grid[i] > grid[i - 1])) throw InvalidArgument("tabulated: grid must be strictly increasing");
        for (double v : values)
            if (!(v >= 0.0) || !std::isfinite(v)) throw InvalidArgument("tabulated: values must be finite and >= 0");
        RadialPotential v(Kind::tabulated);
        v.support_ = grid.back();
        v.grid_ = std::move(grid);
        v.values_ = std::move(values);
        return v;
    }

    Kind kind() const { return kind_; }
    double v0() const { return v0_; }
    double width() const { return width_; }
    double support_radius() const { return support_; }
    const std::vector<double>& grid() const { return grid_; }
    const std::vector<double>& values() const { return values_; }

    bool is_zero() const {
        if (kind_ == Kind::zero) return true;
        if (kind_ == Kind::tabulated) return std::all_of(values_.begin(), values_.end(), [](double x) { return x == 0.0; });
        return v0_ == 0.0;
    }

    /// Copy with every value multiplied by g >= 0.
    RadialPotential scaled(double g) const {
        if (!(g >= 0.0)) throw InvalidArgument("RadialPotential::scaled: factor must be >= 0");
        RadialPotential v = *this;
        v.v0_ *= g;
        for (double& x : v.values_) x *= g;
        return v;
    }

    double operator()(double r) const {
        if (r > support_) return 0.0;
        switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::soft_sphere: return v0_;
        case Kind::gaussian_truncated: return v0_ * std::exp(-(r * r) / (width_ * width_));
        case Kind::tabulated: {
            auto it = std::upper_bound(grid_.begin(), grid_.end(), r);
            if (it == grid_.begin()) return values_.front();
            if (it == grid_.end()) return values_.back();
            const std::size_t j = static_cast<std::size_t>(it - grid_.begin());
            const double t = (r - grid_[j - 1]) / (grid_[j] - grid_[j - 1]);
            return (1.0 - t) * values_[j - 1] + t * values_[j];
        }
        }
        return 0.0;
    }

    /// Radii where V or its derivative may jump (integrator step points).
    std::vector<double> breakpoints() const {
        switch (kind_) {
        case Kind::zero: return {};
        case Kind::soft_sphere:
        case Kind::gaussian_truncated: return {support_};
        case Kind::tabulated: return {grid_.begin() + 1, grid_.end()};
        }
        return {};
    }

    double max_value() const {
        switch (kind_) {
        case Kind::zero: return 0.0;
        case Kind::soft_sphere:
        case Kind::gaussian_truncated: return v0_;
        case Kind::tabulated: return *std::max_element(values_.begin(), values_.end());
        }
        return 0.0;
    }

    /// Vhat(k) = int_{R^3} e^{-i k.x} V(|x|) dx, by radial quadrature.
    double fourier(double k) const {
        if (is_zero()) return 0.0;
        const auto nodes = breakpoints();
        return quad::radial_fourier([this](double r) { return (*this)(r); }, k, support_, nodes, 4);
    }

    std::string kind_name() const {
        switch (kind_) {
        case Kind::zero: return "zero";
        case Kind::soft_sphere: return "soft_sphere";
        case Kind::gaussian_truncated: return "gaussian_truncated";
        case Kind::tabulated: return "tabulated";
        }
        return "unknown";
    }

private:
    explicit RadialPotential(Kind k) : kind_(k) {}

    Kind kind_ = Kind::zero;
    double v0_ = 0.0;
    double width_ = 0.0;
    double support_ = 0.0;
    std::vector<double> grid_;
    std::vector<double> values_;
};

} // namespace bogo
