#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "swarm_lssvm/kernel.hpp"
#include "swarm_lssvm/lssvm.hpp"
#include "swarm_lssvm/swarm.hpp"

namespace swarm_lssvm {

struct Interval {
    double lo = 0.0;
    double hi = 1.0;
    bool operator==(const Interval&) const = default;
};

enum class KernelFamily { Rbf, Linear, Polynomial, Mlp };

KernelFamily parse_kernel_family(const std::string& name);
std::string to_string(KernelFamily family);

/// Box searched by the tuners. Every family has log10(C) as the first
/// coordinate; the remaining coordinates are the kernel's own parameters:
///   rbf:  log10(sigma2)
///   poly: log10(scale), degree held at poly_degree
///   mlp:  log10(slope), offset
///   linear: none
struct SearchSpace {
    KernelFamily family = KernelFamily::Rbf;
    Interval log10_c{-2.0, 4.0};
    Interval log10_sigma2{-3.0, 3.0};
    Interval log10_poly_scale{-2.0, 2.0};
    int poly_degree = 2;
    Interval log10_mlp_slope{-3.0, 0.0};
    Interval mlp_offset{-2.0, 2.0};

    void validate() const;
    Bounds bounds() const;
};

struct DecodedParams {
    double reg_c;
    KernelSpec kernel;
};

/// Position -> (C, kernel). Throws InputError outside the box.
DecodedParams decode(const SearchSpace& space, std::span<const double> position);

/// Inverse of decode.
std::vector<double> encode(const SearchSpace& space, const DecodedParams& params);

/// RBF space: position [log10 C, log10 sigma2] -> (C, sigma2).
std::pair<double, double> decode_params(std::span<const double> position, const SearchSpace& space = {});

inline constexpr double kDefaultHoldoutFraction = 0.25;

/// Validation MSE of an LSSVM fit on the first (1−h) of `train` and scored on
/// the remaining rows. The returned callable is pure and thread-safe.
Objective make_validation_objective(const TrainingSet& train, const SearchSpace& space,
                                    double holdout_fraction = kDefaultHoldoutFraction);

struct TuneResult {
    std::string optimizer;
    double best_c = 0.0;
    KernelSpec best_kernel;
    double best_validation_mse = 0.0;
    std::vector<double> best_position;
    std::vector<double> history;
    std::size_t evaluations = 0;
    std::uint64_t seed = 0;
    /// Refit on the whole training set with the best parameters.
    LssvmModel final_model;
    /// Optimizer settings and search box, echoed into the JSON output.
    nlohmann::json config_echo;

    /// Kernel width of an RBF result. Throws InputError for other kernels.
    double best_sigma2() const;
};

TuneResult tune_lssvm_abc(const TrainingSet& train, const SearchSpace& space, const AbcConfig& config,
                          double holdout_fraction = kDefaultHoldoutFraction);
TuneResult tune_lssvm_pso(const TrainingSet& train, const SearchSpace& space, const PsoConfig& config,
                          double holdout_fraction = kDefaultHoldoutFraction);

/// {optimizer, kernel, best_c, best_sigma2, best_validation_mse, history, evaluations, seed, config_echo}
nlohmann::json tune_result_to_json(const TuneResult& result);

} // namespace swarm_lssvm
