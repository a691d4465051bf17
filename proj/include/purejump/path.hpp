#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "purejump/kernel.hpp"
#include "purejump/time_function.hpp"

namespace purejump {

/// Finite-variation curve: continuous piecewise-linear part on knots plus jumps at fixed times.
/// Right-continuous; value 0 at time 0.
class FvCurve {
public:
    FvCurve() = default;
    FvCurve(std::vector<double> knots, std::vector<double> values,
            std::vector<std::pair<double, double>> atoms = {});

    bool is_zero() const noexcept { return knots_.empty() && atoms_.empty(); }
    double operator()(double t) const;
    double left(double t) const;
    /// Total variation on [0, t].
    double total_variation(double t) const;
    /// int_(0,t] z(s) dC(s) for a left-continuous step function z.
    double integrate(const TimeFunction& z, double t) const;
    /// this + scale * other, exact on the merged knot set.
    FvCurve plus(const FvCurve& other, double scale = 1.0) const;
    FvCurve scaled(double c) const;
    /// sum_i c_i C_i in one pass.
    static FvCurve sum_of(const std::vector<std::pair<const FvCurve*, double>>& terms);

    const std::vector<double>& knots() const noexcept { return knots_; }
    const std::vector<double>& values() const noexcept { return values_; }
    const std::vector<std::pair<double, double>>& atoms() const noexcept { return atoms_; }

private:
    double continuous(double t) const;

    std::vector<double> knots_;
    std::vector<double> values_;
    std::vector<std::pair<double, double>> atoms_;  // sorted by time
    std::vector<double> atom_cum_;
};

struct Event {
    double t = 0.0;
    double dx = 0.0;
    int level = 0;
    int component = 0;
};

/// Per-level deterministic curves shared by all paths simulated from one spec.
struct LevelTable {
    kernel::LevelGrid grid;
    int levels = 0;
    FvCurve base;                     // beta A
    std::vector<FvCurve> compensator; // int int x 1_{level k, |x|<=1} F dA
    std::vector<FvCurve> level_drift; // beta^(k) A
    double qv_tail = 0.0;             // expected QV of jumps not simulated
    std::shared_ptr<const FvCurve> fv_all;     // fv_upto(levels)
    std::shared_ptr<const FvCurve> drift_all;  // drift_upto(levels)

    /// Finite-variation part of the sum of levels 0..n-1 plus the base drift.
    FvCurve fv_upto(int n) const;
    /// Canonical drift of the same sum.
    FvCurve drift_upto(int n) const;
};

/// X_t = x0 + sum_{events <= t} dx + fv(t).
struct SamplePath {
    double x0 = 0.0;
    double horizon = 1.0;
    std::vector<Event> events;  // strictly increasing times in (0, horizon]
    std::shared_ptr<const FvCurve> fv = std::make_shared<FvCurve>();
    std::shared_ptr<const FvCurve> drift = std::make_shared<FvCurve>();
    double qv_tail = 0.0;
    int levels = -1;  // levels kept, -1 when not level structured
    std::shared_ptr<const LevelTable> table;
    Region omitted = Region::empty_region();  // jump sizes not simulated
    std::shared_ptr<const std::vector<double>> knots = std::make_shared<std::vector<double>>();
    std::uint64_t seed = 0;
    std::uint64_t index = 0;
    std::vector<double> cum_jumps;  // prefix sums of dx
    std::vector<double> cum_sq;     // prefix sums of dx^2

    /// Sorts events, checks time uniqueness and builds prefix sums.
    void finalize();
    double value(double t) const;
    double left(double t) const;
    /// Sum of squared jumps on (0, t].
    double qv(double t) const;
    /// Times where sup over [0, t] is attained: events, fv knots and atoms, uniform grid.
    std::vector<double> sup_times(double t, int grid = 256) const;
    /// sup_{s <= t} |X_s|, including left limits.
    double sup_abs(double t, int grid = 256) const;
    std::size_t jump_count(double t) const;
};

/// a - b; requires paths simulated with the same seed and index.
SamplePath difference(const SamplePath& a, const SamplePath& b);

struct Ensemble {
    std::vector<SamplePath> paths;
    std::uint64_t seed = 0;
    std::string spec_digest;
    int levels = -1;

    std::size_t size() const noexcept { return paths.size(); }
};

/// FNV-1a digest of a spec's canonical text.
std::string digest(const std::string& text);

}  // namespace purejump
