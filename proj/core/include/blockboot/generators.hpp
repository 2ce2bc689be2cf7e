#pragma once

// Stationary test processes for the Monte Carlo harness.
//
// All kinds are functionals of an iid (hence absolutely regular, beta_m = 0
// for m >= 1) driving sequence, so they belong to the near-epoch-dependent
// class the bootstrap results cover:
//
//   iid                      X_t = e_t.  a_m = 0.
//   ar1-real                 X_t = phi X_{t-1} + e_t.  Truncating the
//                            MA(inf) expansion after m lags leaves an error
//                            of order |phi|^m, so a_m decays geometrically.
//   linear-real              X_t = sum_j c_j e_{t-j}, finite filter: a_m = 0
//                            once m exceeds the filter length.
//   ar1-functional           Coefficients of X_t on a smooth sine basis
//                            follow independent AR(1) recursions; a_m is
//                            geometric as in the scalar case.
//   doubling-map-functional  u_{t+1} = 2 u_t mod 1 and X_t = g(u_t, .).
//                            Writing u_t = sum_m b_{t+m-1} 2^{-m} over iid
//                            fair bits b makes X_t a functional of the bit
//                            sequence; fixing the first m bits pins u_t to
//                            within 2^{-m}, and g is Lipschitz in u, so a_m
//                            is of order 2^{-m}. This is the standard
//                            example of an expanding dynamical system.
//
// Innovations e_t have mean 0 and variance 1; outputs are
// location + scale * X_t. The a_m rates above are documentation, not checks.

#include "blockboot/hilbert.hpp"

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace blockboot {

class ConfigFile;

enum class ProcessKind { iid, ar1_real, linear_real, ar1_functional, doubling_map_functional };
enum class Innovation { gaussian, uniform, student_t };

[[nodiscard]] ProcessKind parse_process_kind(std::string_view name);
[[nodiscard]] std::string_view to_string(ProcessKind kind) noexcept;
[[nodiscard]] Innovation parse_innovation(std::string_view name);
[[nodiscard]] std::string_view to_string(Innovation innovation) noexcept;

struct ProcessConfig {
    ProcessKind kind = ProcessKind::iid;
    double phi = 0.0;
    std::vector<double> coefficients{1.0};
    std::size_t basis_size = 5;
    Innovation innovation = Innovation::gaussian;
    double nu = 5.0;
    std::uint64_t seed = 0;
    std::size_t burn_in = 1000;
    double location = 0.0;
    double scale = 1.0;

    /// Throws ConfigError on any violated constraint.
    void validate() const;

    [[nodiscard]] bool is_functional() const noexcept {
        return kind == ProcessKind::ar1_functional || kind == ProcessKind::doubling_map_functional;
    }
};

/// Reads `<section>.kind`, `.phi`, `.coefficients`, `.basis_size`,
/// `.innovation`, `.nu`, `.seed`, `.burn_in`, `.location`, `.scale`.
[[nodiscard]] ProcessConfig parse_process_config(const ConfigFile& file, const std::string& section);

/// The first `count` unit-variance innovations of the stream used by cfg.
[[nodiscard]] std::vector<double> innovation_stream(const ProcessConfig& cfg, std::size_t count);

/// Scalar kinds (iid, ar1-real, linear-real).
[[nodiscard]] HilbertSample generate_real(const ProcessConfig& cfg, std::size_t n);

/// Functional kinds on the given space.
[[nodiscard]] HilbertSample generate_functional(const ProcessConfig& cfg, std::size_t n,
                                                const SpacePtr& space);

/// Dispatches on cfg.kind; scalar kinds ignore `space`.
[[nodiscard]] HilbertSample generate(const ProcessConfig& cfg, std::size_t n, const SpacePtr& space);

/// The stationary mean: the constant function `location`.
[[nodiscard]] GridFunction true_mean(const ProcessConfig& cfg, const SpacePtr& space);

/// E||N||^2 of the limiting Gaussian of sqrt(n)(mean - mu), where known in
/// closed form on the discretized space. Functional kinds need `space`.
[[nodiscard]] std::optional<double> long_run_trace(const ProcessConfig& cfg, const SpacePtr& space);

}  // namespace blockboot
