#pragma once

#include <limits>
#include <string>
#include <vector>

namespace purejump {

/// Interval of jump sizes not containing 0.
struct Interval {
    double lo = 0.0;
    double hi = 0.0;
    bool lo_closed = false;
    bool hi_closed = true;

    bool contains(double x) const noexcept;
    bool empty() const noexcept;
    bool positive() const noexcept { return lo >= 0.0; }
};

/// Finite union of intervals in R \ {0}.
class Region {
public:
    Region() = default;
    explicit Region(std::vector<Interval> parts);

    static Region all();
    static Region empty_region() { return Region(); }
    /// { a < |x| <= b } (closedness per flag), both signs.
    static Region abs_band(double a, double b, bool a_closed = false, bool b_closed = true);
    /// { 0 < |x| <= 1 }.
    static Region small_jumps() { return abs_band(0.0, 1.0, false, true); }
    /// { |x| > 1 }.
    static Region big_jumps();
    static Region positive(double a, double b, bool a_closed = false, bool b_closed = true);
    static Region negative(double a, double b, bool a_closed = false, bool b_closed = true);

    const std::vector<Interval>& parts() const noexcept { return parts_; }
    bool is_empty() const noexcept { return parts_.empty(); }
    bool contains(double x) const noexcept;
    Region intersect(const Region& other) const;
    Region intersect(const Interval& iv) const;
    /// R \ {0} minus this region.
    Region complement() const;
    /// Mirror image x -> -x.
    Region mirrored() const;
    std::string describe() const;

private:
    std::vector<Interval> parts_;
};

/// Parse "|x|<=1", "|x|<1", "a<|x|<=b", "(a,b]", "[a,b)" unions joined by 'u', "all".
Region parse_region(const std::string& text);

inline constexpr double kInf = std::numeric_limits<double>::infinity();

}  // namespace purejump
