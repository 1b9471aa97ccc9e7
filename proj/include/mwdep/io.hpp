#pragma once

#include <fstream>
#include <sstream>

#include "curves.hpp"

// Curve files: one `curve` line per factor of the ambient product, then
// named points whose components are separated by ';'.
//
//   # E_34 twice
//   curve d=34
//   curve A=-1156 B=0
//   point Q1 (-2, 48); infinity
//   point (0, 0); (-16, 120)

namespace mwdep {

struct CurveFile {
    ProductCurve<Rational> ambient;
    std::vector<std::pair<std::string, ProductPoint<Rational>>> points;

    const ProductPoint<Rational>& point(const std::string& name) const {
        for (auto& [n, p] : points)
            if (n == name) return p;
        throw InvalidArgument("no point named '" + name + "'");
    }

    bool has_point(const std::string& name) const {
        for (auto& [n, p] : points)
            if (n == name) return true;
        return false;
    }

    friend bool operator==(const CurveFile&, const CurveFile&) = default;
};

namespace detail {

inline std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

inline std::vector<std::string> split(std::string_view s, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (std::size_t k = 0; k <= s.size(); ++k)
        if (k == s.size() || s[k] == sep) {
            out.push_back(trim(s.substr(start, k - start)));
            start = k + 1;
        }
    return out;
}

// y^2 = x^3 - d^2 x is recognized from the A/B form too, so both spellings agree.
inline WeierstrassCurve<Rational> curve_from_coefficients(const Rational& a, const Rational& b) {
    if (is_zero(b) && a < 0 && denominator(a) == 1) {
        BigInt r;
        if (is_square(BigInt(-numerator(a)), &r) && r <= std::numeric_limits<i64>::max())
            return curve_ed_rational(r.convert_to<i64>());
    }
    return {a, b};
}

inline WeierstrassCurve<Rational> parse_curve_spec(const std::string& spec) {
    std::optional<Rational> a, b;
    std::optional<i64> d;
    std::istringstream in(spec);
    std::string tok;
    while (in >> tok) {
        auto eq = tok.find('=');
        if (eq == std::string::npos) throw InvalidArgument("expected key=value in curve line, got '" + tok + "'");
        const std::string key = tok.substr(0, eq), val = tok.substr(eq + 1);
        if (key == "d") {
            BigInt v = parse_bigint(val);
            if (v < 1 || v > std::numeric_limits<i64>::max()) throw InvalidArgument("d out of range");
            d = v.convert_to<i64>();
        } else if (key == "A") {
            a = parse_rational(val);
        } else if (key == "B") {
            b = parse_rational(val);
        } else {
            throw InvalidArgument("unknown curve key '" + key + "'");
        }
    }
    if (d && !a && !b) return curve_ed_rational(*d);
    if (!d && a && b) return curve_from_coefficients(*a, *b);
    throw InvalidArgument("curve line needs either d=<int> or both A=<rat> B=<rat>");
}

inline CurvePoint<Rational> parse_point_component(const std::string& s) {
    if (s == "infinity" || s == "O") return {};
    if (s.size() < 2 || s.front() != '(' || s.back() != ')') throw InvalidArgument("malformed point '" + s + "'");
    auto xy = split(std::string_view(s).substr(1, s.size() - 2), ',');
    if (xy.size() != 2) throw InvalidArgument("point needs two coordinates: '" + s + "'");
    return {parse_rational(xy[0]), parse_rational(xy[1])};
}

} // namespace detail

inline CurveFile parse_curve_file(std::string_view text) {
    CurveFile f;
    std::size_t auto_name = 0;
    std::size_t lineno = 0;
    for (const std::string& raw : detail::split(text, '\n')) {
        ++lineno;
        std::string line = detail::trim(raw.substr(0, raw.find('#')));
        if (line.empty()) continue;
        const std::string where = "line " + std::to_string(lineno) + ": ";
        try {
            if (line.rfind("curve", 0) == 0 && line.size() > 5 && std::isspace(static_cast<unsigned char>(line[5]))) {
                if (!f.points.empty()) throw InvalidArgument("curve lines must precede points");
                f.ambient.push_back(detail::parse_curve_spec(line.substr(6)));
            } else if (line.rfind("point", 0) == 0 && line.size() > 5 && std::isspace(static_cast<unsigned char>(line[5]))) {
                if (f.ambient.empty()) throw InvalidArgument("point before any curve");
                std::string rest = detail::trim(line.substr(6));
                std::string name;
                if (!rest.empty() && rest[0] != '(' && rest.rfind("infinity", 0) != 0) {
                    auto sp = rest.find_first_of(" \t");
                    if (sp == std::string::npos) throw InvalidArgument("point has a name but no coordinates");
                    name = rest.substr(0, sp);
                    rest = detail::trim(rest.substr(sp));
                }
                if (name.empty()) name = "P" + std::to_string(++auto_name);
                if (f.has_point(name)) throw InvalidArgument("duplicate point name '" + name + "'");
                ProductPoint<Rational> pt;
                for (auto& comp : detail::split(rest, ';')) pt.push_back(detail::parse_point_component(comp));
                if (pt.size() != f.ambient.size())
                    throw InvalidArgument("point has " + std::to_string(pt.size()) + " components, ambient has " +
                                          std::to_string(f.ambient.size()));
                require_on_ambient(f.ambient, pt);
                f.points.emplace_back(name, std::move(pt));
            } else {
                throw InvalidArgument("unrecognized line '" + line + "'");
            }
        } catch (const Error& e) {
            throw InvalidArgument(where + e.what());
        }
    }
    if (f.ambient.empty()) throw InvalidArgument("no curve given");
    return f;
}

inline CurveFile read_curve_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_curve_file(ss.str());
}

inline std::string format_curve(const WeierstrassCurve<Rational>& c) {
    if (c.cm_d) return "curve d=" + std::to_string(*c.cm_d);
    return "curve A=" + to_string(c.a) + " B=" + to_string(c.b);
}

inline std::string format_point(const ProductPoint<Rational>& p) {
    std::string out;
    for (std::size_t k = 0; k < p.size(); ++k) {
        if (k) out += "; ";
        out += p[k].is_infinity() ? "infinity" : "(" + to_string(p[k].x()) + ", " + to_string(p[k].y()) + ")";
    }
    return out;
}

inline std::string format_curve_file(const CurveFile& f) {
    std::string out;
    for (auto& c : f.ambient) out += format_curve(c) + "\n";
    for (auto& [name, p] : f.points) out += "point " + name + " " + format_point(p) + "\n";
    return out;
}

} // namespace mwdep
