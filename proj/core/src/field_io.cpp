#include "nle/field_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "nle/error.hpp"

namespace nle {

std::string format_double(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& os, const ScalarField& field, double time,
                     const std::vector<std::string>& extra_comments) {
    const GridSpec& g = field.grid();
    os << "# t=" << format_double(time) << " h=" << format_double(g.h) << " n=" << g.nodes[0];
    if (g.dimension == 2) os << ',' << g.nodes[1];
    os << '\n';
    for (const auto& c : extra_comments) os << "# " << c << '\n';
    for (int j = 0; j < g.nodes[1]; ++j) {
        for (int i = 0; i < g.nodes[0]; ++i) {
            os << format_double(g.coord(0, i)) << ',';
            if (g.dimension == 2) os << format_double(g.coord(1, j)) << ',';
            os << format_double(field.at(i, j)) << '\n';
        }
    }
}

void write_field_csv(const std::filesystem::path& path, const ScalarField& field, double time,
                     const std::vector<std::string>& extra_comments) {
    std::ofstream os(path);
    if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
    write_field_csv(os, field, time, extra_comments);
}

namespace {

double parse_double(std::string_view s, const char* what) {
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError(std::string("field CSV: malformed ") + what + " '" + std::string(s) + "'");
    }
    return v;
}

int parse_int(std::string_view s) {
    int v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
        throw ConfigError("field CSV: malformed node count '" + std::string(s) + "'");
    }
    return v;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = s.find(sep, start);
        out.push_back(s.substr(start, pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

}  // namespace

FieldSnapshot read_field_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line) || line.rfind("# ", 0) != 0) {
        throw ConfigError("field CSV: missing '# t=... h=... n=...' header");
    }
    double t = 0.0;
    double h = 0.0;
    std::vector<int> counts;
    std::istringstream header(line.substr(2));
    std::string token;
    while (header >> token) {
        const auto eq = token.find('=');
        if (eq == std::string::npos) continue;
        const std::string key = token.substr(0, eq);
        const std::string_view value = std::string_view(token).substr(eq + 1);
        if (key == "t") {
            t = parse_double(value, "time");
        } else if (key == "h") {
            h = parse_double(value, "spacing");
        } else if (key == "n") {
            for (auto part : split(value, ',')) counts.push_back(parse_int(part));
        }
    }
    if (counts.empty() || counts.size() > 2 || !(h > 0.0)) {
        throw ConfigError("field CSV: header must declare h > 0 and n with 1 or 2 counts");
    }
    GridSpec g;
    g.dimension = static_cast<int>(counts.size());
    g.h = h;
    g.nodes = {counts[0], g.dimension == 2 ? counts[1] : 1};

    std::vector<double> values;
    values.reserve(g.node_count());
    bool first = true;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto cols = split(line, ',');
        if (static_cast<int>(cols.size()) != g.dimension + 1) {
            throw ConfigError("field CSV: expected " + std::to_string(g.dimension + 1) +
                              " columns, got '" + line + "'");
        }
        if (first) {
            g.lower[0] = parse_double(cols[0], "coordinate");
            g.lower[1] = g.dimension == 2 ? parse_double(cols[1], "coordinate") : 0.0;
            first = false;
        }
        values.push_back(parse_double(cols.back(), "value"));
    }
    if (values.size() != g.node_count()) {
        throw ConfigError("field CSV: expected " + std::to_string(g.node_count()) + " nodes, read " +
                          std::to_string(values.size()));
    }
    return {t, ScalarField(g, std::move(values))};
}

FieldSnapshot read_field_csv(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ConfigError("cannot open field file " + path.string());
    return read_field_csv(is);
}

}  // namespace nle
