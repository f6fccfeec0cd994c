#pragma once

// Distortion functions g : [0,1] -> [0,1] and vNM utility functions u.

#include <functional>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace crdu {

using Point = std::pair<double, double>;

/// Root of an increasing f on [lo, hi] by bisection, stopping once the bracket
/// is narrower than tol. Used directly only where no closed form exists.
double bisect_increasing(const std::function<double(double)>& f, double target, double lo, double hi,
                         double tol = 1e-12);

class DistortionFunction {
public:
    enum class Kind { Identity, Power, PiecewiseLinear };

    static DistortionFunction identity();
    /// x^gamma, gamma > 0.
    static DistortionFunction power(double gamma);
    /// Linear interpolation through points; must start at (0,0), end at (1,1),
    /// have strictly increasing x and nondecreasing y.
    static DistortionFunction piecewise_linear(std::vector<Point> points);

    Kind kind() const noexcept { return kind_; }
    double gamma() const noexcept { return gamma_; }
    const std::vector<Point>& points() const noexcept { return points_; }

    /// Accepts x in [0,1] up to 1e-12 and clamps; throws DomainError otherwise.
    double operator()(double x) const;
    double eval(double x) const { return (*this)(x); }
    /// Throws DomainError if y is outside [0,1] or g is not strictly increasing.
    double inverse(double y) const;
    /// The inverse as a distortion in its own right (requires strictness).
    DistortionFunction inverse_function() const;

    bool is_strictly_increasing() const noexcept { return strict_; }
    bool is_convex() const;
    bool is_concave() const;
    bool is_strictly_concave() const;
    bool is_strictly_convex() const;

    /// "identity", "power:G" or "pwl:x0,y0;x1,y1;...".
    std::string to_string() const;
    bool operator==(const DistortionFunction&) const = default;

private:
    DistortionFunction(Kind k, double gamma, std::vector<Point> pts);
    std::vector<double> slopes() const;

    Kind kind_;
    double gamma_ = 1.0;
    std::vector<Point> points_;
    bool strict_ = true;
};

/// Inverse of DistortionFunction::to_string. Throws DomainError on bad input.
DistortionFunction parse_distortion(const std::string& text);

class UtilityFunction {
public:
    enum class Kind { Identity, Power, Exponential, PiecewiseLinear };
    static constexpr double kInf = std::numeric_limits<double>::infinity();

    static UtilityFunction identity(double lo = -kInf, double hi = kInf);
    /// x^gamma on [lo, hi] with 0 <= lo.
    static UtilityFunction power(double gamma, double lo = 0.0, double hi = kInf);
    /// -exp(-x / beta), beta > 0.
    static UtilityFunction exponential(double beta, double lo = -kInf, double hi = kInf);
    /// Strictly increasing interpolation; the domain is [first x, last x].
    static UtilityFunction piecewise_linear(std::vector<Point> points);

    Kind kind() const noexcept { return kind_; }
    double parameter() const noexcept { return param_; }
    const std::vector<Point>& points() const noexcept { return points_; }
    double lo() const noexcept { return lo_; }
    double hi() const noexcept { return hi_; }
    double scale() const noexcept { return scale_; }
    double offset() const noexcept { return offset_; }

    bool in_domain(double x) const noexcept { return x >= lo_ && x <= hi_; }
    /// Throws DomainError outside [lo, hi].
    double operator()(double x) const;
    double eval(double x) const { return (*this)(x); }
    /// Throws DomainError when y is outside the range of u.
    double inverse(double y) const;
    double range_lo() const;
    double range_hi() const;

    /// a * u + b with a > 0.
    UtilityFunction affine(double a, double b) const;
    /// Affine rescaling with u(0) = 0 and u(1) = 1; needs [0,1] in the domain.
    UtilityFunction normalized() const;
    bool is_normalized(double tol = 1e-12) const;

    bool is_concave() const;
    bool is_convex() const;
    bool is_strictly_convex() const;

    /// Short description, for reports.
    std::string to_string() const;
    bool operator==(const UtilityFunction&) const = default;

private:
    UtilityFunction(Kind k, double param, std::vector<Point> pts, double lo, double hi);
    double raw(double x) const;
    double raw_inverse(double y) const;
    std::vector<double> slopes() const;

    Kind kind_;
    double param_ = 1.0;
    std::vector<Point> points_;
    double lo_;
    double hi_;
    double scale_ = 1.0;
    double offset_ = 0.0;
};

} // namespace crdu
