#pragma once

#include <string>
#include <vector>

namespace purejump {

/// c0 + c1 t.
struct TimeLinear {
    double c0 = 0.0;
    double c1 = 0.0;

    double operator()(double t) const noexcept { return c0 + c1 * t; }
    bool is_constant() const noexcept { return c1 == 0.0; }
};

/// Left-continuous (predictable) scalar function of time.
class TimeFunction {
public:
    enum class Kind { Constant, Step, InvPhiTan };

    TimeFunction() = default;
    static TimeFunction constant(double v);
    /// Value values[i] on (breaks[i-1], breaks[i]], values[0] on [0, breaks[0]],
    /// values.back() after the last break. values.size() == breaks.size() + 1.
    static TimeFunction step(std::vector<double> breaks, std::vector<double> values);
    /// 1_{(a,b]}.
    static TimeFunction indicator(double a, double b);
    /// floor(tan t) + 1 for t < pi/2, else 0  (reciprocal of 1/(floor(u)+1) at u = tan t).
    static TimeFunction inv_phi_tan();

    double operator()(double t) const noexcept;
    Kind kind() const noexcept { return kind_; }
    bool is_constant() const noexcept { return kind_ == Kind::Constant; }
    /// sup |f| on [0, T]; +inf when unbounded.
    double sup_abs(double T) const noexcept;
    /// Discontinuities in (t0, t1).
    std::vector<double> breakpoints(double t0, double t1) const;
    std::string describe() const;

    const std::vector<double>& breaks() const noexcept { return breaks_; }
    const std::vector<double>& values() const noexcept { return values_; }

private:
    Kind kind_ = Kind::Constant;
    double value_ = 1.0;
    std::vector<double> breaks_;
    std::vector<double> values_;
};

/// Parse "1", "2.5", "ind(a,b)", "step(b1,b2;v0,v1,v2)", "inv_phi_tan".
TimeFunction parse_time_function(const std::string& text);

inline constexpr double kHalfPi = 1.57079632679489661923;

}  // namespace purejump
