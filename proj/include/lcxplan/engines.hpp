#pragma once

#include <optional>

#include "lcxplan/cable.hpp"
#include "lcxplan/environment.hpp"
#include "lcxplan/link_budget.hpp"

namespace lcxplan {

/// Knobs shared by the three coverage engines.
///
/// When no discretization interval is given, the power-based engines use
/// 1 m (matching the receiver grid) and the coherent engine uses lambda/4
/// (needed to resolve the half-lambda fading structure).
struct EngineConfig {
    Engine engine = Engine::spl;
    Quantile quantile = Quantile::lc50;
    std::optional<double> discretization_interval_m;
    bool include_barrier_reflection = false;
    unsigned worker_count = 1;
    double velocity_factor = 0.88; // guided-wave speed / c
    double lateral_clamp_m = default_lateral_clamp_m;
    bool tolerance_band = false;   // emit L_C -/+ tolerance grids as well

    void validate() const;
    double interval_for(const Frequency& f) const;
};

/// Smallest Path Loss: direct ray from every radiator to every cell, cell
/// value is the strongest candidate. No obstacles, no reflections.
CoverageMap simulate_spl(const CableLayout& layout, const CableSpec& spec,
                         const Environment& env, const Frequency& f,
                         const LinkBudgetParams& params, const EngineConfig& cfg,
                         Warnings* warnings = nullptr);

/// Dominant path: per (radiator, cell) the direct ray with obstacle
/// penetration plus, when enabled, one specular bounce off each barrier
/// segment (image source, reflection point required on the segment,
/// obstruction charged on both legs). Cell value is the strongest candidate;
/// ties go to the shorter path, then the lower radiator index.
CoverageMap simulate_dominant_path(const CableLayout& layout, const CableSpec& spec,
                                   const Environment& env, const Frequency& f,
                                   const LinkBudgetParams& params, const EngineConfig& cfg,
                                   Warnings* warnings = nullptr);

/// Coherent summation: every radiator contributes a phasor whose magnitude
/// comes from its link-budget power and whose phase accumulates along the
/// guided wave (d_lon / velocity_factor) plus the free-space leg. Resolves
/// the half-wavelength fading notches the power engines average away.
/// Requires interval <= lambda/4.
CoverageMap simulate_coherent(const CableLayout& layout, const CableSpec& spec,
                              const Environment& env, const Frequency& f,
                              const LinkBudgetParams& params, const EngineConfig& cfg,
                              Warnings* warnings = nullptr);

/// Dispatch on cfg.engine.
CoverageMap simulate(const CableLayout& layout, const CableSpec& spec,
                     const Environment& env, const Frequency& f,
                     const LinkBudgetParams& params, const EngineConfig& cfg,
                     Warnings* warnings = nullptr);

/// Cellwise difference a - b with summary statistics.
struct EngineComparison {
    GridSpec grid;
    std::vector<double> delta_db; // row-major, a - b
    double mean_db = 0.0;
    double max_abs_db = 0.0;
    double rms_db = 0.0;
};

EngineComparison compare_engines(const CoverageMap& a, const CoverageMap& b);

} // namespace lcxplan
