#include "purejump/region.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <sstream>

#include "purejump/error.hpp"

namespace purejump {

bool Interval::contains(double x) const noexcept {
    const bool above = lo_closed ? x >= lo : x > lo;
    const bool below = hi_closed ? x <= hi : x < hi;
    return above && below;
}

bool Interval::empty() const noexcept {
    if (lo < hi) return false;
    if (lo == hi) return !(lo_closed && hi_closed);
    return true;
}

namespace {

void validate(const Interval& iv) {
    if (iv.lo < 0.0 && iv.hi > 0.0) fail(ErrorCode::InvalidRegion, "interval straddles 0");
    if ((iv.lo == 0.0 && iv.lo_closed) || (iv.hi == 0.0 && iv.hi_closed)) {
        fail(ErrorCode::InvalidRegion, "interval contains 0");
    }
    if (std::isnan(iv.lo) || std::isnan(iv.hi)) fail(ErrorCode::InvalidRegion, "NaN endpoint");
}

Interval intersect_iv(const Interval& a, const Interval& b) {
    Interval r;
    if (a.lo > b.lo) {
        r.lo = a.lo;
        r.lo_closed = a.lo_closed;
    } else if (b.lo > a.lo) {
        r.lo = b.lo;
        r.lo_closed = b.lo_closed;
    } else {
        r.lo = a.lo;
        r.lo_closed = a.lo_closed && b.lo_closed;
    }
    if (a.hi < b.hi) {
        r.hi = a.hi;
        r.hi_closed = a.hi_closed;
    } else if (b.hi < a.hi) {
        r.hi = b.hi;
        r.hi_closed = b.hi_closed;
    } else {
        r.hi = a.hi;
        r.hi_closed = a.hi_closed && b.hi_closed;
    }
    return r;
}

}  // namespace

Region::Region(std::vector<Interval> parts) {
    for (auto& iv : parts) {
        if (iv.lo == -kInf) iv.lo_closed = false;
        if (iv.hi == kInf) iv.hi_closed = false;
        validate(iv);
        if (!iv.empty()) parts_.push_back(iv);
    }
    std::sort(parts_.begin(), parts_.end(),
              [](const Interval& a, const Interval& b) { return a.lo < b.lo; });
}

Region Region::all() {
    return Region({{-kInf, 0.0, false, false}, {0.0, kInf, false, false}});
}

Region Region::abs_band(double a, double b, bool a_closed, bool b_closed) {
    if (a < 0.0 || b < a) fail(ErrorCode::InvalidRegion, "abs_band needs 0 <= a <= b");
    if (a == 0.0 && a_closed) fail(ErrorCode::InvalidRegion, "abs_band contains 0");
    return Region({{-b, -a, b_closed, a_closed}, {a, b, a_closed, b_closed}});
}

Region Region::big_jumps() { return abs_band(1.0, kInf, false, false); }

Region Region::positive(double a, double b, bool a_closed, bool b_closed) {
    return Region({{a, b, a_closed, b_closed}});
}

Region Region::negative(double a, double b, bool a_closed, bool b_closed) {
    return Region({{-b, -a, b_closed, a_closed}});
}

bool Region::contains(double x) const noexcept {
    for (const auto& iv : parts_) {
        if (iv.contains(x)) return true;
    }
    return false;
}

Region Region::intersect(const Interval& iv) const {
    std::vector<Interval> out;
    for (const auto& p : parts_) {
        Interval r = intersect_iv(p, iv);
        if (!r.empty()) out.push_back(r);
    }
    return Region(std::move(out));
}

Region Region::intersect(const Region& other) const {
    std::vector<Interval> out;
    for (const auto& p : parts_) {
        for (const auto& q : other.parts_) {
            Interval r = intersect_iv(p, q);
            if (!r.empty()) out.push_back(r);
        }
    }
    return Region(std::move(out));
}

Region Region::complement() const {
    // Walk each half-line separately; parts are sorted and assumed disjoint.
    std::vector<Interval> out;
    auto walk = [&](double lo, double hi, bool neg) {
        double cur = lo;
        bool cur_closed = false;
        for (const auto& p : parts_) {
            if (neg ? p.hi > 0.0 : p.lo < 0.0) continue;
            if (p.lo > cur || (p.lo == cur && !p.lo_closed && cur_closed)) {
                out.push_back({cur, p.lo, cur_closed, !p.lo_closed});
            }
            cur = p.hi;
            cur_closed = !p.hi_closed;
        }
        if (cur < hi) out.push_back({cur, hi, cur_closed, false});
    };
    walk(-kInf, 0.0, true);
    walk(0.0, kInf, false);
    std::vector<Interval> clean;
    for (auto& iv : out) {
        if (iv.lo == -kInf) iv.lo_closed = false;
        if (iv.lo == 0.0) iv.lo_closed = false;
        if (iv.hi == 0.0) iv.hi_closed = false;
        if (!iv.empty()) clean.push_back(iv);
    }
    return Region(std::move(clean));
}

Region Region::mirrored() const {
    std::vector<Interval> out;
    for (const auto& p : parts_) out.push_back({-p.hi, -p.lo, p.hi_closed, p.lo_closed});
    return Region(std::move(out));
}

std::string Region::describe() const {
    if (parts_.empty()) return "{}";
    std::ostringstream os;
    os.precision(12);
    for (std::size_t i = 0; i < parts_.size(); ++i) {
        if (i) os << " u ";
        const auto& p = parts_[i];
        os << (p.lo_closed ? '[' : '(') << p.lo << ", " << p.hi << (p.hi_closed ? ']' : ')');
    }
    return os.str();
}

namespace {

std::string strip(const std::string& s) {
    std::string out;
    for (char c : s) {
        if (!std::isspace(static_cast<unsigned char>(c))) out += c;
    }
    return out;
}

double parse_number(const std::string& s) {
    if (s == "inf" || s == "+inf") return kInf;
    if (s == "-inf") return -kInf;
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &pos);
    } catch (const std::exception&) {
        fail(ErrorCode::ParseError, "bad number '" + s + "' in region");
    }
    if (pos != s.size()) fail(ErrorCode::ParseError, "bad number '" + s + "' in region");
    return v;
}

Region parse_piece(const std::string& s) {
    if (s == "all") return Region::all();
    if (s.empty()) fail(ErrorCode::ParseError, "empty region piece");
    if (s.front() == '(' || s.front() == '[') {
        const auto comma = s.find(',');
        if (comma == std::string::npos || (s.back() != ')' && s.back() != ']')) {
            fail(ErrorCode::ParseError, "bad interval '" + s + "'");
        }
        Interval iv{parse_number(s.substr(1, comma - 1)),
                    parse_number(s.substr(comma + 1, s.size() - comma - 2)), s.front() == '[',
                    s.back() == ']'};
        return Region({iv});
    }
    const auto abs_pos = s.find("|x|");
    if (abs_pos == std::string::npos) fail(ErrorCode::ParseError, "bad region '" + s + "'");
    double a = 0.0, b = kInf;
    bool a_closed = false, b_closed = false;
    const std::string left = s.substr(0, abs_pos);
    const std::string right = s.substr(abs_pos + 3);
    auto split_op = [](const std::string& part, bool leading, std::string& num, bool& closed) {
        if (part.empty()) return false;
        if (leading) {
            if (part.size() >= 2 && part.substr(part.size() - 2) == "<=") {
                num = part.substr(0, part.size() - 2);
                closed = true;
            } else if (part.back() == '<') {
                num = part.substr(0, part.size() - 1);
                closed = false;
            } else {
                fail(ErrorCode::ParseError, "bad region bound '" + part + "'");
            }
        } else {
            if (part.rfind("<=", 0) == 0) {
                num = part.substr(2);
                closed = true;
            } else if (part.rfind("<", 0) == 0) {
                num = part.substr(1);
                closed = false;
            } else {
                fail(ErrorCode::ParseError, "bad region bound '" + part + "'");
            }
        }
        return true;
    };
    std::string num;
    if (split_op(left, true, num, a_closed)) a = parse_number(num);
    if (split_op(right, false, num, b_closed)) b = parse_number(num);
    if (a == 0.0) a_closed = false;
    return Region::abs_band(a, b, a_closed, b_closed);
}

}  // namespace

Region parse_region(const std::string& text) {
    const std::string s = strip(text);
    std::vector<Interval> parts;
    std::size_t start = 0;
    while (start <= s.size()) {
        const auto u = s.find('u', start);
        const std::string piece = s.substr(start, u == std::string::npos ? std::string::npos : u - start);
        const Region r = parse_piece(piece);
        for (const auto& iv : r.parts()) parts.push_back(iv);
        if (u == std::string::npos) break;
        start = u + 1;
    }
    return Region(std::move(parts));
}

}  // namespace purejump
