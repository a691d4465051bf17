#include "purejump/integrand.hpp"

#include <cctype>
#include <cmath>
#include <sstream>

#include "purejump/error.hpp"

namespace purejump {

namespace {

double sgn(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

// |x| with |c| |x|^p = y.
double abs_preimage(double y, double c, double p) {
    if (y == 0.0) return 0.0;
    if (std::isinf(y)) return kInf;
    return std::pow(y / std::fabs(c), 1.0 / p);
}

}  // namespace

double Integrand::operator()(double t, double x) const {
    if (coef == 0.0 || x == 0.0) return 0.0;
    if (region && !region->contains(x)) return 0.0;
    const double z = zeta(t);
    if (z == 0.0) return 0.0;
    double v = coef * z * std::pow(std::fabs(x), p);
    if (odd && x < 0.0) v = -v;
    return v;
}

double Integrand::small_threshold(double t) const {
    const double c = std::fabs(coef * zeta(t));
    if (c == 0.0) return kInf;
    if (p == 0.0) return c <= 1.0 ? kInf : 0.0;
    return std::pow(1.0 / c, 1.0 / p);
}

Integrand Integrand::times(const TimeFunction& z) const {
    Integrand out = *this;
    if (z.is_constant()) {
        out.coef *= z(0.0);
        return out;
    }
    if (!zeta.is_constant()) fail(ErrorCode::InvalidArgument, "product of two time-varying factors");
    out.coef *= zeta(0.0);
    out.zeta = z;
    return out;
}

Integrand Integrand::restricted(const Region& r) const {
    Integrand out = *this;
    out.region = region ? region->intersect(r) : r;
    return out;
}

Integrand Integrand::compose_into(const Integrand& psi) const {
    if (!zeta.is_constant() || !psi.zeta.is_constant()) {
        fail(ErrorCode::InvalidArgument, "composition needs time-constant integrands");
    }
    if (p <= 0.0) fail(ErrorCode::InvalidArgument, "composition needs p > 0");
    const double c = coef * zeta(0.0);
    if (c == 0.0 || psi.coef * psi.zeta(0.0) == 0.0) return Integrand::zero();
    const double c2 = psi.coef * psi.zeta(0.0);

    Integrand out;
    out.coef = c2 * (psi.odd ? sgn(c) : 1.0) * std::pow(std::fabs(c), psi.p);
    out.odd = odd && psi.odd;
    out.p = p * psi.p;
    out.region = region;
    if (psi.region) {
        std::vector<Interval> pre;
        for (const auto& iv : psi.region->parts()) {
            const bool pos = iv.positive();
            const double ylo = pos ? iv.lo : -iv.hi;
            const double yhi = pos ? iv.hi : -iv.lo;
            const bool lo_c = pos ? iv.lo_closed : iv.hi_closed;
            const bool hi_c = pos ? iv.hi_closed : iv.lo_closed;
            const double alo = abs_preimage(ylo, c, p);
            const double ahi = abs_preimage(yhi, c, p);
            const Interval xpos{alo, ahi, lo_c && alo > 0.0, hi_c};
            const Interval xneg{-ahi, -alo, hi_c, lo_c && alo > 0.0};
            const double ysign = pos ? 1.0 : -1.0;
            if (odd) {
                pre.push_back(ysign * sgn(c) > 0.0 ? xpos : xneg);
            } else if (ysign == sgn(c)) {
                pre.push_back(xpos);
                pre.push_back(xneg);
            }
        }
        const Region r(std::move(pre));
        out.region = out.region ? out.region->intersect(r) : r;
    }
    return out;
}

std::string Integrand::describe() const {
    if (is_zero()) return "0";
    std::ostringstream os;
    os.precision(12);
    if (coef != 1.0) os << coef << "*";
    if (!zeta.is_constant() || zeta(0.0) != 1.0) os << "{" << zeta.describe() << "}*";
    if (odd) {
        if (p == 1.0) os << "x";
        else os << "sign(x)|x|^" << p;
    } else {
        os << "|x|^" << p;
    }
    if (region) os << " @ " << region->describe();
    return os.str();
}

namespace {

double parse_real(const std::string& s) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad number '" + s + "' in integrand");
    }
    if (pos != s.size()) fail(ErrorCode::ParseError, "bad number '" + s + "' in integrand");
    return v;
}

}  // namespace

Integrand parse_integrand(const std::string& text) {
    std::string s;
    for (char ch : text) {
        if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
    }
    Integrand eta;
    const auto at = s.find('@');
    if (at != std::string::npos) {
        eta.region = parse_region(s.substr(at + 1));
        s = s.substr(0, at);
    }
    if (s.empty()) fail(ErrorCode::ParseError, "empty integrand");
    if (s == "0") return Integrand::zero();

    if (s.front() == '{') {
        const auto close = s.find('}');
        if (close == std::string::npos) fail(ErrorCode::ParseError, "unclosed time factor");
        eta.zeta = parse_time_function(s.substr(1, close - 1));
        s = s.substr(close + 1);
        if (!s.empty() && s.front() == '*') s = s.substr(1);
    }

    // Leading coefficient: "c*", "-".
    const auto body_start = s.find_first_of("x|s");
    if (body_start == std::string::npos) fail(ErrorCode::ParseError, "integrand needs x");
    std::string head = s.substr(0, body_start);
    std::string body = s.substr(body_start);
    if (!head.empty() && head.back() == '*') head.pop_back();
    if (head == "-") eta.coef = -1.0;
    else if (head == "+" || head.empty()) eta.coef = 1.0;
    else eta.coef = parse_real(head);

    auto exponent = [&](const std::string& rest) {
        if (rest.empty()) return 1.0;
        if (rest.front() != '^') fail(ErrorCode::ParseError, "bad integrand '" + text + "'");
        return parse_real(rest.substr(1));
    };

    if (body.rfind("sign(x)", 0) == 0) {
        body = body.substr(7);
        if (!body.empty() && body.front() == '*') body = body.substr(1);
        if (body.rfind("|x|", 0) != 0) fail(ErrorCode::ParseError, "expected |x| after sign(x)");
        eta.odd = true;
        eta.p = exponent(body.substr(3));
    } else if (body.rfind("|x|", 0) == 0) {
        eta.odd = false;
        eta.p = exponent(body.substr(3));
    } else if (body.front() == 'x') {
        const double q = exponent(body.substr(1));
        if (q != std::floor(q) || q < 0.0) {
            fail(ErrorCode::ParseError, "x^p needs a nonnegative integer p; use sign(x)|x|^p");
        }
        eta.p = q;
        eta.odd = std::fmod(q, 2.0) == 1.0;
    } else {
        fail(ErrorCode::ParseError, "bad integrand '" + text + "'");
    }
    if (eta.p < 0.0) fail(ErrorCode::ParseError, "negative power in integrand");
    return eta;
}

SliceIntegral slice_integral(const KernelSpec& k, const Slice& s, const Integrand& eta, EtaPart part,
                             const std::optional<Region>& extra) {
    SliceIntegral out;
    out.absolute = ExtendedReal::finite(0.0);
    const double c = eta.coef * eta.zeta(s.t);
    if (c == 0.0) return out;
    Region r = eta.effective_region();
    if (extra) r = r.intersect(*extra);
    if (part != EtaPart::All) {
        const double thr = eta.small_threshold(s.t);
        if (part == EtaPart::Small) {
            if (thr == 0.0) return out;
            if (!std::isinf(thr)) r = r.intersect(Region::abs_band(0.0, thr, false, true));
        } else {
            if (std::isinf(thr)) return out;
            r = r.intersect(Region::abs_band(thr, kInf, false, false));
        }
    }
    if (r.is_empty()) return out;
    const MomentResult m = kernel::moment(k, s, eta.p, r);
    out.absolute = m.absolute.scaled(std::fabs(c));
    if (m.absolute.is_finite()) {
        out.signed_value = c * (eta.odd ? m.signed_value : m.absolute.value());
    }
    return out;
}

ExtendedReal slice_square_capped(const KernelSpec& k, const Slice& s, const Integrand& eta) {
    const double c = eta.coef * eta.zeta(s.t);
    if (c == 0.0) return ExtendedReal::finite(0.0);
    Integrand sq = eta;
    sq.coef = c * c;
    sq.zeta = TimeFunction::constant(1.0);
    sq.p = 2.0 * eta.p;
    sq.odd = false;
    ExtendedReal small = slice_integral(k, s, sq, EtaPart::Small).absolute;
    const double thr = eta.small_threshold(s.t);
    if (!std::isinf(thr)) {
        Region big = eta.effective_region().intersect(Region::abs_band(thr, kInf, false, false));
        small += ExtendedReal::finite(kernel::mass(k, s, big));
    }
    return small;
}

double SmoothFunction::f(double y) const {
    switch (kind) {
        case Kind::Identity: return y;
        case Kind::Square: return y * y;
        case Kind::Sin: return std::sin(y);
        case Kind::Cos: return std::cos(y);
        case Kind::Exp: return std::exp(y);
    }
    return y;
}

double SmoothFunction::df(double y) const {
    switch (kind) {
        case Kind::Identity: return 1.0;
        case Kind::Square: return 2.0 * y;
        case Kind::Sin: return std::cos(y);
        case Kind::Cos: return -std::sin(y);
        case Kind::Exp: return std::exp(y);
    }
    return 1.0;
}

double SmoothFunction::d2f(double y) const {
    switch (kind) {
        case Kind::Identity: return 0.0;
        case Kind::Square: return 2.0;
        case Kind::Sin: return -std::sin(y);
        case Kind::Cos: return -std::cos(y);
        case Kind::Exp: return std::exp(y);
    }
    return 0.0;
}

std::string SmoothFunction::name() const {
    switch (kind) {
        case Kind::Identity: return "id";
        case Kind::Square: return "sq";
        case Kind::Sin: return "sin";
        case Kind::Cos: return "cos";
        case Kind::Exp: return "exp";
    }
    return "id";
}

SmoothFunction parse_smooth_function(const std::string& text) {
    SmoothFunction f;
    if (text == "id" || text == "x") f.kind = SmoothFunction::Kind::Identity;
    else if (text == "sq" || text == "x^2") f.kind = SmoothFunction::Kind::Square;
    else if (text == "sin") f.kind = SmoothFunction::Kind::Sin;
    else if (text == "cos") f.kind = SmoothFunction::Kind::Cos;
    else if (text == "exp") f.kind = SmoothFunction::Kind::Exp;
    else fail(ErrorCode::ParseError, "unknown function '" + text + "'");
    return f;
}

}  // namespace purejump
