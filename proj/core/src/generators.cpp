#include "blockboot/generators.hpp"

#include "blockboot/config.hpp"
#include "blockboot/errors.hpp"
#include "blockboot/random.hpp"

#include <cmath>
#include <numbers>
#include <numeric>

namespace blockboot {

namespace {

constexpr std::uint64_t kInitStream = 0;
constexpr std::uint64_t kInnovationStream = 1;

class InnovationSource {
public:
    InnovationSource(const ProcessConfig& cfg)
        : stream_(derive_seed(cfg.seed, kInnovationStream)), kind_(cfg.innovation), nu_(cfg.nu) {}

    double operator()() {
        switch (kind_) {
            case Innovation::gaussian:
                return stream_.normal();
            case Innovation::uniform:
                return std::numbers::sqrt3 * (2.0 * stream_.uniform01() - 1.0);
            case Innovation::student_t:
                return stream_.student_t(nu_) * std::sqrt((nu_ - 2.0) / nu_);
        }
        return 0.0;
    }

    Stream& raw() { return stream_; }

private:
    Stream stream_;
    Innovation kind_;
    double nu_;
};

// Stationary AR(1) start for gaussian innovations; zero otherwise.
double ar1_start(const ProcessConfig& cfg) {
    if (cfg.innovation != Innovation::gaussian) return 0.0;
    Stream init(derive_seed(cfg.seed, kInitStream));
    return init.normal() / std::sqrt(1.0 - cfg.phi * cfg.phi);
}

// Grid position rescaled to [0, 1].
std::vector<double> unit_positions(const GridSpace& space) {
    const auto grid = space.grid();
    std::vector<double> u(grid.size(), 0.0);
    if (grid.size() > 1) {
        const double lo = grid.front();
        const double width = grid.back() - lo;
        for (std::size_t j = 0; j < grid.size(); ++j) u[j] = (grid[j] - lo) / width;
    }
    return u;
}

// psi_l(u) = sqrt(2) sin(pi l u), l = 1..L, row-major L x d.
std::vector<double> sine_basis(const GridSpace& space, std::size_t basis_size) {
    const auto u = unit_positions(space);
    const std::size_t d = u.size();
    std::vector<double> basis(basis_size * d);
    for (std::size_t l = 0; l < basis_size; ++l) {
        for (std::size_t j = 0; j < d; ++j) {
            basis[l * d + j] = std::numbers::sqrt2 *
                               std::sin(std::numbers::pi * static_cast<double>(l + 1) * u[j]);
        }
    }
    return basis;
}

void require_kind(bool ok, const ProcessConfig& cfg, const char* op) {
    if (!ok) {
        throw ConfigError(std::string(op) + " does not support process kind '" +
                          std::string(to_string(cfg.kind)) + "'");
    }
}

}  // namespace

ProcessKind parse_process_kind(std::string_view name) {
    if (name == "iid") return ProcessKind::iid;
    if (name == "ar1-real") return ProcessKind::ar1_real;
    if (name == "linear-real") return ProcessKind::linear_real;
    if (name == "ar1-functional") return ProcessKind::ar1_functional;
    if (name == "doubling-map-functional") return ProcessKind::doubling_map_functional;
    throw ConfigError("unknown process kind '" + std::string(name) + "'");
}

std::string_view to_string(ProcessKind kind) noexcept {
    switch (kind) {
        case ProcessKind::iid: return "iid";
        case ProcessKind::ar1_real: return "ar1-real";
        case ProcessKind::linear_real: return "linear-real";
        case ProcessKind::ar1_functional: return "ar1-functional";
        case ProcessKind::doubling_map_functional: return "doubling-map-functional";
    }
    return "?";
}

Innovation parse_innovation(std::string_view name) {
    if (name == "gaussian") return Innovation::gaussian;
    if (name == "uniform") return Innovation::uniform;
    if (name == "student-t") return Innovation::student_t;
    throw ConfigError("unknown innovation distribution '" + std::string(name) + "'");
}

std::string_view to_string(Innovation innovation) noexcept {
    switch (innovation) {
        case Innovation::gaussian: return "gaussian";
        case Innovation::uniform: return "uniform";
        case Innovation::student_t: return "student-t";
    }
    return "?";
}

void ProcessConfig::validate() const {
    if ((kind == ProcessKind::ar1_real || kind == ProcessKind::ar1_functional) &&
        !(std::abs(phi) < 1.0)) {
        throw ConfigError("AR coefficient phi must satisfy |phi| < 1");
    }
    if (kind == ProcessKind::linear_real) {
        if (coefficients.empty()) throw ConfigError("linear-real needs at least one coefficient");
        for (double c : coefficients) {
            if (!std::isfinite(c)) throw ConfigError("linear coefficients must be finite");
        }
    }
    if (kind == ProcessKind::ar1_functional && basis_size == 0) {
        throw ConfigError("ar1-functional needs basis_size >= 1");
    }
    if (innovation == Innovation::student_t && !(nu > 4.0)) {
        throw ConfigError("student-t innovations need nu > 4");
    }
    if (!std::isfinite(location) || !std::isfinite(scale)) {
        throw ConfigError("location and scale must be finite");
    }
}

ProcessConfig parse_process_config(const ConfigFile& file, const std::string& section) {
    const std::string p = section.empty() ? "" : section + ".";
    ProcessConfig cfg;
    const auto kind = file.get(p + "kind");
    if (!kind) throw ConfigError("missing key '" + p + "kind'");
    cfg.kind = parse_process_kind(*kind);
    cfg.phi = file.get_double(p + "phi", cfg.phi);
    cfg.coefficients = file.get_doubles(p + "coefficients", cfg.coefficients);
    cfg.basis_size = file.get_u64(p + "basis_size", cfg.basis_size);
    cfg.innovation = parse_innovation(file.get_string(p + "innovation", "gaussian"));
    cfg.nu = file.get_double(p + "nu", cfg.nu);
    cfg.seed = file.get_u64(p + "seed", cfg.seed);
    cfg.burn_in = file.get_u64(p + "burn_in", cfg.burn_in);
    cfg.location = file.get_double(p + "location", cfg.location);
    cfg.scale = file.get_double(p + "scale", cfg.scale);
    cfg.validate();
    return cfg;
}

std::vector<double> innovation_stream(const ProcessConfig& cfg, std::size_t count) {
    InnovationSource draw(cfg);
    std::vector<double> out(count);
    for (auto& e : out) e = draw();
    return out;
}

HilbertSample generate_real(const ProcessConfig& cfg, std::size_t n) {
    cfg.validate();
    require_kind(!cfg.is_functional(), cfg, "generate_real");
    if (n == 0) throw EmptyInputError("sample length must be positive");
    InnovationSource draw(cfg);
    std::vector<double> out(n);
    auto emit = [&](std::size_t t, double y) {
        if (t >= cfg.burn_in) out[t - cfg.burn_in] = cfg.location + cfg.scale * y;
    };
    const std::size_t total = cfg.burn_in + n;
    switch (cfg.kind) {
        case ProcessKind::iid:
            for (std::size_t t = 0; t < total; ++t) emit(t, draw());
            break;
        case ProcessKind::ar1_real: {
            double y = ar1_start(cfg);
            for (std::size_t t = 0; t < total; ++t) {
                y = cfg.phi * y + draw();
                emit(t, y);
            }
            break;
        }
        case ProcessKind::linear_real: {
            const std::size_t q = cfg.coefficients.size();
            std::vector<double> e(total + q - 1);
            for (auto& v : e) v = draw();
            for (std::size_t t = 0; t < total; ++t) {
                double y = 0.0;
                for (std::size_t j = 0; j < q; ++j) y += cfg.coefficients[j] * e[t + q - 1 - j];
                emit(t, y);
            }
            break;
        }
        default:
            break;
    }
    return HilbertSample::scalars(std::move(out));
}

HilbertSample generate_functional(const ProcessConfig& cfg, std::size_t n, const SpacePtr& space) {
    cfg.validate();
    require_kind(cfg.is_functional(), cfg, "generate_functional");
    if (n == 0) throw EmptyInputError("sample length must be positive");
    if (!space) throw DomainMismatchError("generate_functional needs a grid");
    const std::size_t d = space->size();
    std::vector<double> out(n * d);
    const std::size_t total = cfg.burn_in + n;

    if (cfg.kind == ProcessKind::ar1_functional) {
        const std::size_t L = cfg.basis_size;
        const auto basis = sine_basis(*space, L);
        InnovationSource draw(cfg);
        std::vector<double> coef(L, 0.0);
        if (cfg.innovation == Innovation::gaussian) {
            Stream init(derive_seed(cfg.seed, kInitStream));
            const double stationary = 1.0 / std::sqrt(1.0 - cfg.phi * cfg.phi);
            for (std::size_t l = 0; l < L; ++l) {
                coef[l] = init.normal() * stationary / static_cast<double>(l + 1);
            }
        }
        for (std::size_t t = 0; t < total; ++t) {
            for (std::size_t l = 0; l < L; ++l) {
                coef[l] = cfg.phi * coef[l] + draw() / static_cast<double>(l + 1);
            }
            if (t < cfg.burn_in) continue;
            double* row = out.data() + (t - cfg.burn_in) * d;
            for (std::size_t j = 0; j < d; ++j) {
                double y = 0.0;
                for (std::size_t l = 0; l < L; ++l) y += coef[l] * basis[l * d + j];
                row[j] = cfg.location + cfg.scale * y;
            }
        }
    } else {
        // 53-bit window over an iid bit stream: shifting in one bit per step
        // is the doubling map on the binary expansion of u.
        constexpr std::uint64_t kMask = (std::uint64_t{1} << 53) - 1;
        InnovationSource bits(cfg);
        Stream& stream = bits.raw();
        std::uint64_t window = stream.next() >> 11;
        const auto u = unit_positions(*space);
        for (std::size_t t = 0; t < total; ++t) {
            if (t > 0) window = ((window << 1) & kMask) | (stream.bit() ? 1 : 0);
            if (t < cfg.burn_in) continue;
            const double state = static_cast<double>(window) * 0x1.0p-53;
            double* row = out.data() + (t - cfg.burn_in) * d;
            for (std::size_t j = 0; j < d; ++j) {
                row[j] = cfg.location +
                         cfg.scale * std::numbers::sqrt2 * std::cos(2.0 * std::numbers::pi * (state - u[j]));
            }
        }
    }
    return HilbertSample(space, std::move(out));
}

HilbertSample generate(const ProcessConfig& cfg, std::size_t n, const SpacePtr& space) {
    if (cfg.is_functional()) return generate_functional(cfg, n, space);
    return generate_real(cfg, n);
}

GridFunction true_mean(const ProcessConfig& cfg, const SpacePtr& space) {
    if (!cfg.is_functional()) return GridFunction::scalar(cfg.location);
    return GridFunction::constant(space, cfg.location);
}

std::optional<double> long_run_trace(const ProcessConfig& cfg, const SpacePtr& space) {
    const double s2 = cfg.scale * cfg.scale;
    switch (cfg.kind) {
        case ProcessKind::iid:
            return s2;
        case ProcessKind::ar1_real:
            return s2 / ((1.0 - cfg.phi) * (1.0 - cfg.phi));
        case ProcessKind::linear_real: {
            const double sum = std::accumulate(cfg.coefficients.begin(), cfg.coefficients.end(), 0.0);
            return s2 * sum * sum;
        }
        case ProcessKind::ar1_functional: {
            if (!space) return std::nullopt;
            const auto basis = sine_basis(*space, cfg.basis_size);
            const std::size_t d = space->size();
            double trace = 0.0;
            for (std::size_t l = 0; l < cfg.basis_size; ++l) {
                const std::span<const double> psi(basis.data() + l * d, d);
                trace += squared_norm(*space, psi) / static_cast<double>((l + 1) * (l + 1));
            }
            return s2 * trace / ((1.0 - cfg.phi) * (1.0 - cfg.phi));
        }
        case ProcessKind::doubling_map_functional: {
            // Lags >= 1 are uncorrelated: cos(2 pi u) and cos(2^{j+1} pi u)
            // are orthogonal under the uniform invariant law.
            if (!space) return std::nullopt;
            const auto w = space->weights();
            double trace = 0.0;
            for (double wj : w) trace += wj;
            return s2 * trace;
        }
    }
    return std::nullopt;
}

}  // namespace blockboot
