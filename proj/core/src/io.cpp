#include "blockboot/io.hpp"

#include "blockboot/errors.hpp"

#include <array>
#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <vector>

namespace blockboot::io {

namespace {

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) {
        s.remove_suffix(1);
    }
    return s;
}

std::vector<double> parse_fields(std::string_view line) {
    std::vector<double> out;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        out.push_back(parse_double(line.substr(start, comma - start)));
        if (comma == std::string_view::npos) break;
        start = comma + 1;
    }
    return out;
}

struct Header {
    std::optional<std::vector<double>> grid;
    std::optional<std::vector<double>> quadrature_weight;
    std::optional<std::vector<double>> pointwise_weight;

    // Returns false when `line` is not a header line.
    bool consume(std::string_view line) {
        if (line.empty() || line.front() != '#') return false;
        const std::size_t comma = line.find(',');
        const std::string_view key = trim(line.substr(1, comma == std::string_view::npos ? line.size() : comma - 1));
        if (comma == std::string_view::npos) return true;  // plain comment
        const std::string_view rest = line.substr(comma + 1);
        if (key == "grid") {
            grid = parse_fields(rest);
        } else if (key == "quadrature_weight") {
            quadrature_weight = parse_fields(rest);
        } else if (key == "weight") {
            pointwise_weight = parse_fields(rest);
        }
        return true;
    }

    void merge(const Header& other) {
        if (other.grid) grid = other.grid;
        if (other.quadrature_weight) quadrature_weight = other.quadrature_weight;
        if (other.pointwise_weight) pointwise_weight = other.pointwise_weight;
    }

    SpacePtr space(std::size_t columns) const {
        if (!grid) {
            if (columns != 1) {
                throw ConfigError("multi-column CSV needs a #grid header or sidecar");
            }
            return GridSpace::scalar();
        }
        if (quadrature_weight) return GridSpace::make(*grid, *quadrature_weight);
        if (pointwise_weight) return GridSpace::trapezoid(*grid, *pointwise_weight);
        const std::vector<double> ones(grid->size(), 1.0);
        return GridSpace::trapezoid(*grid, ones);
    }
};

Header read_header_only(std::istream& in) {
    Header h;
    std::string line;
    while (std::getline(in, line)) {
        const auto t = trim(line);
        if (t.empty()) continue;
        if (!h.consume(t)) throw ConfigError("sidecar file may only contain header lines");
    }
    return h;
}

}  // namespace

std::string format_double(double x) {
    std::array<char, 64> buf{};
    const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    if (ec != std::errc{}) throw Error("cannot format double");
    return std::string(buf.data(), ptr);
}

double parse_double(std::string_view text) {
    text = trim(text);
    if (!text.empty() && text.front() == '+') text.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
    if (ec != std::errc{} || ptr != text.data() + text.size() || text.empty()) {
        throw ConfigError("cannot parse number '" + std::string(text) + "'");
    }
    return value;
}

void write_sample_csv(std::ostream& out, const HilbertSample& s) {
    const auto& space = *s.space();
    auto write_row = [&out](std::span<const double> xs) {
        for (std::size_t j = 0; j < xs.size(); ++j) {
            if (j > 0) out << ',';
            out << format_double(xs[j]);
        }
        out << '\n';
    };
    if (!space.is_scalar() || space.grid()[0] != 0.0 || space.weights()[0] != 1.0) {
        out << "#grid,";
        write_row(space.grid());
        out << "#quadrature_weight,";
        write_row(space.weights());
    }
    for (std::size_t i = 0; i < s.size(); ++i) write_row(s.row(i));
}

void write_sample_csv(const std::filesystem::path& path, const HilbertSample& s) {
    std::ofstream out(path);
    if (!out) throw ConfigError("cannot open '" + path.string() + "' for writing");
    write_sample_csv(out, s);
}

HilbertSample read_sample_csv(std::istream& in, std::istream* sidecar) {
    Header header;
    if (sidecar != nullptr) header = read_header_only(*sidecar);
    Header inline_header;
    std::vector<double> data;
    std::size_t columns = 0;
    std::size_t line_no = 0;
    std::string line;
    while (std::getline(in, line)) {
        ++line_no;
        const auto t = trim(line);
        if (t.empty() || inline_header.consume(t)) continue;
        auto fields = parse_fields(t);
        if (columns == 0) columns = fields.size();
        if (fields.size() != columns) {
            throw ConfigError("line " + std::to_string(line_no) + " has " +
                              std::to_string(fields.size()) + " columns, expected " +
                              std::to_string(columns));
        }
        data.insert(data.end(), fields.begin(), fields.end());
    }
    if (data.empty()) throw EmptyInputError("CSV contains no observations");
    header.merge(inline_header);
    auto space = header.space(columns);
    if (space->size() != columns) {
        throw DomainMismatchError("grid has " + std::to_string(space->size()) +
                                  " points but rows have " + std::to_string(columns) + " columns");
    }
    return HilbertSample(std::move(space), std::move(data));
}

HilbertSample read_sample_csv(const std::filesystem::path& path,
                              const std::optional<std::filesystem::path>& sidecar) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open '" + path.string() + "'");
    if (sidecar) {
        std::ifstream side(*sidecar);
        if (!side) throw ConfigError("cannot open '" + sidecar->string() + "'");
        return read_sample_csv(in, &side);
    }
    return read_sample_csv(in, nullptr);
}

}  // namespace blockboot::io
