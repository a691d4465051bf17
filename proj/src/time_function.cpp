#include "purejump/time_function.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <sstream>

#include "purejump/error.hpp"

namespace purejump {

TimeFunction TimeFunction::constant(double v) {
    TimeFunction f;
    f.kind_ = Kind::Constant;
    f.value_ = v;
    return f;
}

TimeFunction TimeFunction::step(std::vector<double> breaks, std::vector<double> values) {
    if (values.size() != breaks.size() + 1) {
        fail(ErrorCode::InvalidArgument, "step function needs one more value than breaks");
    }
    for (std::size_t i = 1; i < breaks.size(); ++i) {
        if (!(breaks[i] > breaks[i - 1])) fail(ErrorCode::InvalidArgument, "step breaks must increase");
    }
    TimeFunction f;
    f.kind_ = Kind::Step;
    f.breaks_ = std::move(breaks);
    f.values_ = std::move(values);
    return f;
}

TimeFunction TimeFunction::indicator(double a, double b) {
    if (!(b > a)) fail(ErrorCode::InvalidArgument, "indicator needs a < b");
    if (a <= 0.0) return step({b}, {1.0, 0.0});
    return step({a, b}, {0.0, 1.0, 0.0});
}

TimeFunction TimeFunction::inv_phi_tan() {
    TimeFunction f;
    f.kind_ = Kind::InvPhiTan;
    return f;
}

double TimeFunction::operator()(double t) const noexcept {
    switch (kind_) {
        case Kind::Constant:
            return value_;
        case Kind::Step: {
            // first break >= t
            const auto it = std::lower_bound(breaks_.begin(), breaks_.end(), t);
            return values_[static_cast<std::size_t>(it - breaks_.begin())];
        }
        case Kind::InvPhiTan: {
            if (t >= kHalfPi) return 0.0;
            // left-continuous version: value on (atan(k-1), atan(k)] is k
            const double u = std::tan(std::max(t, 0.0));
            const double c = std::ceil(u);
            return c < 1.0 ? 1.0 : c;
        }
    }
    return 0.0;
}

double TimeFunction::sup_abs(double T) const noexcept {
    switch (kind_) {
        case Kind::Constant:
            return std::abs(value_);
        case Kind::Step: {
            double s = std::abs(values_[0]);
            for (std::size_t i = 0; i < breaks_.size(); ++i) {
                if (breaks_[i] < T) s = std::max(s, std::abs(values_[i + 1]));
            }
            return s;
        }
        case Kind::InvPhiTan:
            if (T >= kHalfPi) return std::numeric_limits<double>::infinity();
            return std::ceil(std::tan(T)) + 1.0;
    }
    return 0.0;
}

std::vector<double> TimeFunction::breakpoints(double t0, double t1) const {
    std::vector<double> out;
    if (kind_ == Kind::Step) {
        for (double b : breaks_) {
            if (b > t0 && b < t1) out.push_back(b);
        }
    } else if (kind_ == Kind::InvPhiTan) {
        const double u0 = std::tan(std::max(t0, 0.0));
        const double u1 = t1 >= kHalfPi ? 1e6 : std::tan(t1);
        for (double k = std::max(1.0, std::floor(u0)); k <= u1 && out.size() < 1000000; k += 1.0) {
            const double b = std::atan(k);
            if (b > t0 && b < t1) out.push_back(b);
        }
    }
    return out;
}

std::string TimeFunction::describe() const {
    std::ostringstream os;
    os.precision(12);
    switch (kind_) {
        case Kind::Constant:
            os << value_;
            break;
        case Kind::Step:
            os << "step(";
            for (std::size_t i = 0; i < breaks_.size(); ++i) os << (i ? "," : "") << breaks_[i];
            os << ";";
            for (std::size_t i = 0; i < values_.size(); ++i) os << (i ? "," : "") << values_[i];
            os << ")";
            break;
        case Kind::InvPhiTan:
            os << "inv_phi_tan";
            break;
    }
    return os.str();
}

namespace {

std::vector<double> parse_list(const std::string& s) {
    std::vector<double> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        try {
            out.push_back(std::stod(item));
        } catch (const std::exception&) {
            fail(ErrorCode::ParseError, "bad number '" + item + "'");
        }
    }
    return out;
}

}  // namespace

TimeFunction parse_time_function(const std::string& text) {
    std::string s;
    for (char c : text) {
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    }
    if (s == "inv_phi_tan") return TimeFunction::inv_phi_tan();
    if (s.rfind("ind(", 0) == 0 && s.back() == ')') {
        const auto v = parse_list(s.substr(4, s.size() - 5));
        if (v.size() != 2) fail(ErrorCode::ParseError, "ind(a,b) needs two numbers");
        return TimeFunction::indicator(v[0], v[1]);
    }
    if (s.rfind("step(", 0) == 0 && s.back() == ')') {
        const std::string body = s.substr(5, s.size() - 6);
        const auto semi = body.find(';');
        if (semi == std::string::npos) fail(ErrorCode::ParseError, "step(breaks;values) needs ';'");
        return TimeFunction::step(parse_list(body.substr(0, semi)), parse_list(body.substr(semi + 1)));
    }
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos == s.size()) return TimeFunction::constant(v);
    } catch (const std::exception&) {
    }
    fail(ErrorCode::ParseError, "unknown time function '" + text + "'");
}

}  // namespace purejump
