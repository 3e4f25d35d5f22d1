#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

namespace swarm_lssvm {

class Rng;

/// Objective to minimize. Must be pure; it may be called from several threads at once.
using Objective = std::function<double(std::span<const double>)>;

/// Box constraints lower[j] < upper[j].
struct Bounds {
    std::vector<double> lower;
    std::vector<double> upper;

    std::size_t dims() const noexcept { return lower.size(); }
    void validate() const;
    std::vector<double> clamp(std::vector<double> x) const;
    bool contains(std::span<const double> x) const noexcept;
};

struct FoodSource {
    std::vector<double> position;
    double objective = 0.0;
    double fitness = 0.0;
    int trials = 0;
};

enum class AbcPhase { Initial, Employed, Onlooker, Scout };

/// Called after each phase with the colony as it stands.
using AbcObserver = std::function<void(AbcPhase, std::span<const FoodSource>)>;

struct AbcConfig {
    int colony_sn = 20;
    /// Trials without improvement before a source is abandoned. 0 means SN·D.
    int limit = 0;
    int max_cycles = 50;
    double theta_lo = -1.0;
    double theta_hi = 1.0;
    std::uint64_t seed = 0;
    /// Worker threads for batch evaluation. Results do not depend on it.
    int threads = 1;
    AbcObserver observer;

    /// Restricts the neighbour coefficient to [0, 1].
    AbcConfig& paper_compat() {
        theta_lo = 0.0;
        theta_hi = 1.0;
        return *this;
    }
    int effective_limit(std::size_t dims) const noexcept {
        return limit > 0 ? limit : colony_sn * static_cast<int>(dims);
    }
    void validate() const;
};

struct PsoConfig {
    int particles = 20;
    double inertia = 0.7;
    double cognitive = 1.5;
    double social = 1.5;
    int max_iters = 50;
    /// Velocity limit as a fraction of each dimension's range.
    double velocity_clamp = 0.5;
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const;
};

struct OptResult {
    std::vector<double> best_position;
    double best_objective = 0.0;
    /// Best-so-far objective after each cycle.
    std::vector<double> history;
    std::size_t evaluations = 0;
    /// ABC only: number of abandoned sources re-seeded by a scout.
    std::size_t scout_events = 0;
};

/// 1/(1+v) for v >= 0, 1+|v| for v < 0. Throws InputError for non-finite v.
double fitness(double objective_value);

/// Copy of x_i with coordinate j moved to x_ij + theta·(x_ij − x_kj), clamped to bounds.
std::vector<double> neighbor_move(std::span<const double> x_i, std::span<const double> x_k, std::size_t dim_j,
                                  double theta, const Bounds& bounds);

/// p_i = fit_i / Σ fit. Throws InputError if any fit <= 0.
std::vector<double> selection_probabilities(std::span<const double> fits);

/// Roulette-wheel pick for u in [0,1).
std::size_t roulette_select(std::span<const double> probabilities, double u) noexcept;

/// x^j = lower^j + r^j·(upper^j − lower^j).
std::vector<double> scout_reinit(const Bounds& bounds, std::span<const double> r);

OptResult abc_minimize(const Objective& objective, const Bounds& bounds, const AbcConfig& config);

/// Global-best PSO, synchronous update.
OptResult pso_minimize(const Objective& objective, const Bounds& bounds, const PsoConfig& config);

/// `cycle,best_objective` with one row per cycle, cycles numbered from 1.
std::string history_csv(std::span<const double> history);

struct NamedObjective {
    std::string name;
    Objective fn;
    /// Symmetric search box half-width conventionally used with this function.
    double half_width;
};

double sphere(std::span<const double> x) noexcept;
double rosenbrock(std::span<const double> x) noexcept;
double rastrigin(std::span<const double> x) noexcept;

/// sphere, rosenbrock, rastrigin.
std::vector<NamedObjective> benchmark_objectives();

} // namespace swarm_lssvm
