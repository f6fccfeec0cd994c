#include "crdu/distortion.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "crdu/error.hpp"

namespace crdu {

namespace {

constexpr double kEdge = 1e-12;
constexpr double kSlopeTol = 1e-12;

double interpolate(const std::vector<Point>& pts, double x) {
    auto it = std::upper_bound(pts.begin(), pts.end(), x, [](double v, const Point& p) { return v < p.first; });
    if (it == pts.begin()) return pts.front().second;
    if (it == pts.end()) return pts.back().second;
    const Point& a = *(it - 1);
    const Point& b = *it;
    double t = (x - a.first) / (b.first - a.first);
    return a.second + t * (b.second - a.second);
}

// Inverse interpolation for strictly increasing y.
double interpolate_inverse(const std::vector<Point>& pts, double y) {
    auto it = std::upper_bound(pts.begin(), pts.end(), y, [](double v, const Point& p) { return v < p.second; });
    if (it == pts.begin()) return pts.front().first;
    if (it == pts.end()) return pts.back().first;
    const Point& a = *(it - 1);
    const Point& b = *it;
    double t = (y - a.second) / (b.second - a.second);
    return a.first + t * (b.first - a.first);
}

std::vector<double> segment_slopes(const std::vector<Point>& pts) {
    std::vector<double> s;
    for (std::size_t i = 1; i < pts.size(); ++i)
        s.push_back((pts[i].second - pts[i - 1].second) / (pts[i].first - pts[i - 1].first));
    return s;
}

bool slopes_nondecreasing(const std::vector<double>& s, double tol) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] < s[i - 1] - tol) return false;
    return true;
}

bool slopes_nonincreasing(const std::vector<double>& s, double tol) {
    for (std::size_t i = 1; i < s.size(); ++i)
        if (s[i] > s[i - 1] + tol) return false;
    return true;
}

void validate_points(const std::vector<Point>& pts, bool strict_y, const char* what) {
    if (pts.size() < 2) throw InvariantViolation(std::string(what) + " needs at least two points");
    for (const auto& [x, y] : pts)
        if (!std::isfinite(x) || !std::isfinite(y)) throw InvariantViolation(std::string(what) + " point not finite");
    for (std::size_t i = 1; i < pts.size(); ++i) {
        if (!(pts[i].first > pts[i - 1].first))
            throw InvariantViolation(std::string(what) + " x coordinates must be strictly increasing");
        if (strict_y ? !(pts[i].second > pts[i - 1].second) : pts[i].second < pts[i - 1].second)
            throw InvariantViolation(std::string(what) + (strict_y ? " must be strictly increasing"
                                                                   : " must be nondecreasing"));
    }
}

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(17);
    os << v;
    return os.str();
}

} // namespace

double bisect_increasing(const std::function<double(double)>& f, double target, double lo, double hi, double tol) {
    if (lo > hi) std::swap(lo, hi);
    for (int it = 0; it < 2000 && hi - lo > tol; ++it) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (f(mid) < target) lo = mid;
        else hi = mid;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------- DistortionFunction

DistortionFunction::DistortionFunction(Kind k, double gamma, std::vector<Point> pts)
    : kind_(k), gamma_(gamma), points_(std::move(pts)) {
    if (kind_ == Kind::PiecewiseLinear) {
        strict_ = true;
        for (std::size_t i = 1; i < points_.size(); ++i)
            if (!(points_[i].second > points_[i - 1].second)) strict_ = false;
    }
}

DistortionFunction DistortionFunction::identity() { return DistortionFunction(Kind::Identity, 1.0, {}); }

DistortionFunction DistortionFunction::power(double gamma) {
    if (!std::isfinite(gamma) || gamma <= 0.0) throw InvariantViolation("power distortion needs gamma > 0");
    return DistortionFunction(Kind::Power, gamma, {});
}

DistortionFunction DistortionFunction::piecewise_linear(std::vector<Point> points) {
    validate_points(points, false, "distortion");
    if (points.front() != Point{0.0, 0.0}) throw InvariantViolation("distortion must satisfy g(0) = 0");
    if (points.back() != Point{1.0, 1.0}) throw InvariantViolation("distortion must satisfy g(1) = 1");
    return DistortionFunction(Kind::PiecewiseLinear, 1.0, std::move(points));
}

double DistortionFunction::operator()(double x) const {
    if (!(x >= -kEdge && x <= 1.0 + kEdge))
        throw DomainError("distortion argument " + fmt(x) + " outside [0,1]");
    x = std::clamp(x, 0.0, 1.0);
    switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Power: return std::pow(x, gamma_);
    case Kind::PiecewiseLinear: return interpolate(points_, x);
    }
    return x;
}

double DistortionFunction::inverse(double y) const {
    if (!strict_) throw DomainError("distortion is not strictly increasing; no inverse");
    if (!(y >= -kEdge && y <= 1.0 + kEdge)) throw DomainError("distortion value " + fmt(y) + " outside [0,1]");
    y = std::clamp(y, 0.0, 1.0);
    switch (kind_) {
    case Kind::Identity: return y;
    case Kind::Power: return std::pow(y, 1.0 / gamma_);
    case Kind::PiecewiseLinear: return interpolate_inverse(points_, y);
    }
    return y;
}

DistortionFunction DistortionFunction::inverse_function() const {
    if (!strict_) throw DomainError("distortion is not strictly increasing; no inverse");
    switch (kind_) {
    case Kind::Identity: return identity();
    case Kind::Power: return power(1.0 / gamma_);
    case Kind::PiecewiseLinear: {
        std::vector<Point> swapped;
        for (const auto& [x, y] : points_) swapped.emplace_back(y, x);
        return piecewise_linear(std::move(swapped));
    }
    }
    return identity();
}

std::vector<double> DistortionFunction::slopes() const { return segment_slopes(points_); }

bool DistortionFunction::is_convex() const {
    switch (kind_) {
    case Kind::Identity: return true;
    case Kind::Power: return gamma_ >= 1.0;
    case Kind::PiecewiseLinear: return slopes_nondecreasing(slopes(), kSlopeTol);
    }
    return false;
}

bool DistortionFunction::is_concave() const {
    switch (kind_) {
    case Kind::Identity: return true;
    case Kind::Power: return gamma_ <= 1.0;
    case Kind::PiecewiseLinear: return slopes_nonincreasing(slopes(), kSlopeTol);
    }
    return false;
}

bool DistortionFunction::is_strictly_concave() const {
    switch (kind_) {
    case Kind::Identity: return false;
    case Kind::Power: return gamma_ < 1.0;
    case Kind::PiecewiseLinear: {
        auto s = slopes();
        if (s.size() < 2) return false;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!(s[i] < s[i - 1] - kSlopeTol)) return false;
        return true;
    }
    }
    return false;
}

bool DistortionFunction::is_strictly_convex() const {
    switch (kind_) {
    case Kind::Identity: return false;
    case Kind::Power: return gamma_ > 1.0;
    case Kind::PiecewiseLinear: {
        auto s = slopes();
        if (s.size() < 2) return false;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!(s[i] > s[i - 1] + kSlopeTol)) return false;
        return true;
    }
    }
    return false;
}

std::string DistortionFunction::to_string() const {
    switch (kind_) {
    case Kind::Identity: return "identity";
    case Kind::Power: return "power:" + fmt(gamma_);
    case Kind::PiecewiseLinear: {
        std::string s = "pwl:";
        for (std::size_t i = 0; i < points_.size(); ++i)
            s += (i ? ";" : "") + fmt(points_[i].first) + "," + fmt(points_[i].second);
        return s;
    }
    }
    return "identity";
}

DistortionFunction parse_distortion(const std::string& text) {
    auto colon = text.find(':');
    std::string head = text.substr(0, colon);
    std::string body = colon == std::string::npos ? "" : text.substr(colon + 1);
    try {
        if (head == "identity" && colon == std::string::npos) return DistortionFunction::identity();
        if (head == "power") {
            std::size_t used = 0;
            double g = std::stod(body, &used);
            if (used != body.size()) throw DomainError("trailing characters");
            return DistortionFunction::power(g);
        }
        if (head == "pwl") {
            std::vector<Point> pts;
            std::stringstream ss(body);
            std::string pair;
            while (std::getline(ss, pair, ';')) {
                auto comma = pair.find(',');
                if (comma == std::string::npos) throw DomainError("point without comma");
                pts.emplace_back(std::stod(pair.substr(0, comma)), std::stod(pair.substr(comma + 1)));
            }
            return DistortionFunction::piecewise_linear(std::move(pts));
        }
    } catch (const InvariantViolation&) {
        throw;
    } catch (const std::exception&) {
    }
    throw DomainError("cannot parse distortion '" + text + "' (expected identity, power:G or pwl:x,y;...)");
}

// ---------------------------------------------------------------- UtilityFunction

UtilityFunction::UtilityFunction(Kind k, double param, std::vector<Point> pts, double lo, double hi)
    : kind_(k), param_(param), points_(std::move(pts)), lo_(lo), hi_(hi) {
    if (std::isnan(lo_) || std::isnan(hi_) || !(lo_ < hi_)) throw InvariantViolation("utility domain must have lo < hi");
}

UtilityFunction UtilityFunction::identity(double lo, double hi) { return UtilityFunction(Kind::Identity, 1.0, {}, lo, hi); }

UtilityFunction UtilityFunction::power(double gamma, double lo, double hi) {
    if (!std::isfinite(gamma) || gamma <= 0.0) throw InvariantViolation("power utility needs gamma > 0");
    if (!(lo >= 0.0)) throw InvariantViolation("power utility domain must lie in [0, inf)");
    return UtilityFunction(Kind::Power, gamma, {}, lo, hi);
}

UtilityFunction UtilityFunction::exponential(double beta, double lo, double hi) {
    if (!std::isfinite(beta) || beta <= 0.0) throw InvariantViolation("exponential utility needs beta > 0");
    return UtilityFunction(Kind::Exponential, beta, {}, lo, hi);
}

UtilityFunction UtilityFunction::piecewise_linear(std::vector<Point> points) {
    validate_points(points, true, "utility");
    double lo = points.front().first, hi = points.back().first;
    return UtilityFunction(Kind::PiecewiseLinear, 1.0, std::move(points), lo, hi);
}

double UtilityFunction::raw(double x) const {
    switch (kind_) {
    case Kind::Identity: return x;
    case Kind::Power: return std::pow(x, param_);
    case Kind::Exponential: return -std::exp(-x / param_);
    case Kind::PiecewiseLinear: return interpolate(points_, x);
    }
    return x;
}

double UtilityFunction::raw_inverse(double y) const {
    switch (kind_) {
    case Kind::Identity: return y;
    case Kind::Power: return std::pow(std::max(y, 0.0), 1.0 / param_);
    case Kind::Exponential: return -param_ * std::log(-y);
    case Kind::PiecewiseLinear: return interpolate_inverse(points_, y);
    }
    return y;
}

double UtilityFunction::operator()(double x) const {
    if (!in_domain(x)) throw DomainError("payoff " + fmt(x) + " outside utility domain [" + fmt(lo_) + ", " + fmt(hi_) + "]");
    return scale_ * raw(x) + offset_;
}

double UtilityFunction::range_lo() const { return scale_ * raw(lo_) + offset_; }

double UtilityFunction::range_hi() const { return scale_ * raw(hi_) + offset_; }

double UtilityFunction::inverse(double y) const {
    double rlo = range_lo(), rhi = range_hi();
    double slack = 1e-12 * std::max(1.0, std::abs(y));
    bool open_top = kind_ == Kind::Exponential && std::isinf(hi_);
    if (std::isnan(y) || y < rlo - slack || y > rhi + slack || (open_top && y >= rhi))
        throw DomainError("utility value " + fmt(y) + " outside the range of u");
    double x = raw_inverse((y - offset_) / scale_);
    return std::clamp(x, lo_, hi_);
}

UtilityFunction UtilityFunction::affine(double a, double b) const {
    if (!(a > 0.0) || !std::isfinite(a) || !std::isfinite(b))
        throw InvariantViolation("affine rescaling needs a finite positive factor");
    UtilityFunction out = *this;
    out.scale_ = a * scale_;
    out.offset_ = a * offset_ + b;
    return out;
}

UtilityFunction UtilityFunction::normalized() const {
    if (!in_domain(0.0) || !in_domain(1.0)) throw DomainError("normalization needs [0,1] inside the utility domain");
    double u0 = (*this)(0.0), u1 = (*this)(1.0);
    double a = 1.0 / (u1 - u0);
    return affine(a, -u0 * a);
}

bool UtilityFunction::is_normalized(double tol) const {
    if (!in_domain(0.0) || !in_domain(1.0)) return false;
    return std::abs((*this)(0.0)) <= tol && std::abs((*this)(1.0) - 1.0) <= tol;
}

std::vector<double> UtilityFunction::slopes() const { return segment_slopes(points_); }

bool UtilityFunction::is_concave() const {
    switch (kind_) {
    case Kind::Identity: return true;
    case Kind::Power: return param_ <= 1.0;
    case Kind::Exponential: return true;
    case Kind::PiecewiseLinear: return slopes_nonincreasing(slopes(), kSlopeTol);
    }
    return false;
}

bool UtilityFunction::is_convex() const {
    switch (kind_) {
    case Kind::Identity: return true;
    case Kind::Power: return param_ >= 1.0;
    case Kind::Exponential: return false;
    case Kind::PiecewiseLinear: return slopes_nondecreasing(slopes(), kSlopeTol);
    }
    return false;
}

bool UtilityFunction::is_strictly_convex() const {
    switch (kind_) {
    case Kind::Power: return param_ > 1.0;
    case Kind::PiecewiseLinear: {
        auto s = slopes();
        if (s.size() < 2) return false;
        for (std::size_t i = 1; i < s.size(); ++i)
            if (!(s[i] > s[i - 1] + kSlopeTol)) return false;
        return true;
    }
    default: return false;
    }
}

std::string UtilityFunction::to_string() const {
    std::string base;
    switch (kind_) {
    case Kind::Identity: base = "identity"; break;
    case Kind::Power: base = "power:" + fmt(param_); break;
    case Kind::Exponential: base = "exponential:" + fmt(param_); break;
    case Kind::PiecewiseLinear: {
        base = "pwl:";
        for (std::size_t i = 0; i < points_.size(); ++i)
            base += (i ? ";" : "") + fmt(points_[i].first) + "," + fmt(points_[i].second);
        break;
    }
    }
    base += " on [" + fmt(lo_) + ", " + fmt(hi_) + "]";
    if (scale_ != 1.0 || offset_ != 0.0) base = fmt(scale_) + "*(" + base + ")+" + fmt(offset_);
    return base;
}

} // namespace crdu
