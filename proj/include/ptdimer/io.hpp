#pragma once

// Text formats shared by the command-line tool and its tests: parameter grids
// and fixed-precision float formatting.

#include <charconv>
#include <cmath>
#include <string>
#include <string_view>
#include <system_error>
#include <vector>

#include "ptdimer/error.hpp"
#include "ptdimer/model.hpp"

namespace ptdimer::io {

/// 17 significant digits, always '.' as decimal separator.
inline std::string format_double(double x) {
    char buf[64];
    const auto r = std::to_chars(buf, buf + sizeof buf, x, std::chars_format::general, 17);
    return std::string(buf, r.ptr);
}

inline double parse_double(std::string_view s) {
    double x = 0.0;
    const auto r = std::from_chars(s.data(), s.data() + s.size(), x);
    if (r.ec != std::errc{} || r.ptr != s.data() + s.size())
        throw Error(ErrorKind::InvalidArgument, "not a number: '" + std::string(s) + "'");
    return x;
}

struct Grid {
    std::vector<double> points;
    bool scalar = true;
};

/// Either a single number or min:max:count with both endpoints included.
inline Grid parse_grid(std::string_view s) {
    const auto c1 = s.find(':');
    if (c1 == std::string_view::npos) {
        const double x = parse_double(s);
        if (!std::isfinite(x)) throw Error(ErrorKind::InvalidArgument, "grid value must be finite");
        return {{x}, true};
    }
    const auto c2 = s.find(':', c1 + 1);
    if (c2 == std::string_view::npos || s.find(':', c2 + 1) != std::string_view::npos)
        throw Error(ErrorKind::InvalidArgument, "grid must be min:max:count");

    const double lo = parse_double(s.substr(0, c1));
    const double hi = parse_double(s.substr(c1 + 1, c2 - c1 - 1));
    const std::string_view count_text = s.substr(c2 + 1);
    long count = 0;
    const auto r = std::from_chars(count_text.data(), count_text.data() + count_text.size(), count);
    if (r.ec != std::errc{} || r.ptr != count_text.data() + count_text.size())
        throw Error(ErrorKind::InvalidArgument, "grid count must be an integer");
    if (count < 2) throw Error(ErrorKind::InvalidArgument, "grid count must be >= 2");
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi))
        throw Error(ErrorKind::InvalidArgument, "grid needs finite min < max");

    Grid g{{}, false};
    g.points.reserve(static_cast<std::size_t>(count));
    const double step = (hi - lo) / static_cast<double>(count - 1);
    for (long k = 0; k < count - 1; ++k) g.points.push_back(lo + static_cast<double>(k) * step);
    g.points.push_back(hi);
    return g;
}

inline constexpr std::string_view kSpectrumHeader =
    "gamma,v,c,branch,kappa_re,kappa_im,q_re,q_im,mu_re,mu_im,energy_re,energy_im,physical";

inline std::string spectrum_row(const ModelParams& p, const StationaryState& s) {
    std::string row;
    auto add = [&row](const std::string& f) {
        if (!row.empty()) row += ',';
        row += f;
    };
    add(format_double(p.gamma));
    add(format_double(p.v));
    add(format_double(p.c));
    add(std::string(to_string(s.branch)));
    for (cplx z : {s.kappa, s.q, s.mu, s.energy}) {
        add(format_double(z.real()));
        add(format_double(z.imag()));
    }
    add(s.physical ? "1" : "0");
    return row;
}

/// Splits one CSV line on commas (no quoting is ever produced).
inline std::vector<std::string> split_csv(std::string_view line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.emplace_back(line.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

} // namespace ptdimer::io
