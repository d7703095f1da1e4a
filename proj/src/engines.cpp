#include "lcxplan/engines.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <limits>
#include <thread>

#include "lcxplan/errors.hpp"

namespace lcxplan {

namespace {

constexpr double pi = 3.141592653589793238462643383279502884;

// Floor for the coherent power sum so a perfectly destructive cell stays
// finite (-300 dBm).
constexpr double min_power_mw = 1e-30;

std::string fmt_g(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void run_partitioned(std::size_t n, unsigned workers,
                     const std::function<void(std::size_t, std::size_t)>& body) {
    if (workers <= 1 || n == 0) {
        body(0, n);
        return;
    }
    const std::size_t chunk = (n + workers - 1) / workers;
    std::vector<std::thread> threads;
    threads.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        const std::size_t lo = std::min(n, static_cast<std::size_t>(w) * chunk);
        const std::size_t hi = std::min(n, lo + chunk);
        if (lo >= hi)
            break;
        threads.emplace_back([&body, lo, hi] { body(lo, hi); });
    }
    for (std::thread& t : threads)
        t.join();
}

struct Scene {
    RadiatorChain chain;
    LossDb lc;
    GridSpec grid;
    double interval_m = 0.0;
};

Scene prepare(const CableLayout& layout, const CableSpec& spec,
              const Environment& env, const Frequency& f,
              const LinkBudgetParams& params, const EngineConfig& cfg,
              Warnings* warnings) {
    cfg.validate();
    params.validate();
    env.validate();

    Scene scene;
    scene.interval_m = cfg.interval_for(f);
    if (cfg.engine == Engine::coherent &&
        scene.interval_m > 0.25 * f.wavelength_m() * (1.0 + 1e-12)) {
        throw ConfigError("coherent engine requires a discretization interval <= lambda/4");
    }
    scene.chain = discretize(layout, spec, f, params.transmit_power, scene.interval_m, warnings);
    const CableParams cp = interpolate_cable_params(spec, f, nullptr);
    scene.lc = cfg.quantile == Quantile::lc50 ? cp.lc50 : cp.lc95;
    scene.grid = GridSpec::from_environment(env);
    return scene;
}

CoverageMap make_map(const Scene& scene, const CableSpec& spec, const Frequency& f,
                     const LinkBudgetParams& params, const EngineConfig& cfg) {
    CoverageMap map;
    map.grid = scene.grid;
    map.frequency_hz = f.hertz();
    map.engine = cfg.engine;
    map.quantile = cfg.quantile;
    map.cells_dbm.assign(scene.grid.nx * scene.grid.ny,
                         -std::numeric_limits<double>::infinity());

    map.params_digest = {
        {"engine", to_string(cfg.engine)},
        {"quantile", to_string(cfg.quantile)},
        {"frequency_hz", fmt_g(f.hertz())},
        {"discretization_interval_m", fmt_g(scene.interval_m)},
        {"velocity_factor", fmt_g(cfg.velocity_factor)},
        {"include_barrier_reflection", cfg.include_barrier_reflection ? "true" : "false"},
        {"lateral_clamp_m", fmt_g(cfg.lateral_clamp_m)},
        {"tolerance_band", cfg.tolerance_band ? "true" : "false"},
        {"tx_power_dbm", fmt_g(params.transmit_power.value)},
        {"loss_exponent", fmt_g(params.loss_exponent)},
        {"connector_loss_db", fmt_g(params.connector_loss.value)},
        {"rx_gain_dbd", fmt_g(params.receiver_gain_dbd)},
        {"cable", spec.name},
        {"coupling_loss_db", fmt_g(scene.lc.value)},
        {"radiator_count", std::to_string(scene.chain.radiators.size())},
        {"grid_origin", fmt_g(scene.grid.origin.x) + " " + fmt_g(scene.grid.origin.y)},
        {"grid_extent", fmt_g(scene.grid.width_m) + " " + fmt_g(scene.grid.height_m)},
        {"grid_resolution_m", fmt_g(scene.grid.resolution_m)},
    };
    return map;
}

void apply_tolerance_band(CoverageMap& map, const CableSpec& spec, const EngineConfig& cfg) {
    if (!cfg.tolerance_band)
        return;
    // L_C enters every candidate of one run identically, so the datasheet
    // tolerance shifts the whole map by a constant.
    const double tol = spec.lc_tolerance.value;
    map.best_dbm.resize(map.cells_dbm.size());
    map.worst_dbm.resize(map.cells_dbm.size());
    for (std::size_t k = 0; k < map.cells_dbm.size(); ++k) {
        map.best_dbm[k] = map.cells_dbm[k] + tol;
        map.worst_dbm[k] = map.cells_dbm[k] - tol;
    }
}

double direct_candidate(const Radiator& r, Point cell, const LinkBudgetParams& params,
                        LossDb lc, double clamp) {
    return received_power_from_feed(r.feed_power, params, lc,
                                    distance(cell, r.position), clamp).value;
}

} // namespace

void EngineConfig::validate() const {
    if (worker_count < 1)
        throw ConfigError("worker count must be >= 1");
    if (!(velocity_factor > 0.0) || velocity_factor > 1.0)
        throw ConfigError("velocity factor must be in (0, 1]");
    if (discretization_interval_m && !(*discretization_interval_m > 0.0))
        throw ConfigError("discretization interval must be > 0");
    if (!(lateral_clamp_m > 0.0))
        throw ConfigError("lateral clamp must be > 0");
}

double EngineConfig::interval_for(const Frequency& f) const {
    if (discretization_interval_m)
        return *discretization_interval_m;
    return engine == Engine::coherent ? 0.25 * f.wavelength_m() : 1.0;
}

CoverageMap simulate_spl(const CableLayout& layout, const CableSpec& spec,
                         const Environment& env, const Frequency& f,
                         const LinkBudgetParams& params, const EngineConfig& cfg,
                         Warnings* warnings) {
    if (cfg.engine != Engine::spl)
        throw ConfigError("engine config does not select spl");
    const Scene scene = prepare(layout, spec, env, f, params, cfg, warnings);
    CoverageMap map = make_map(scene, spec, f, params, cfg);

    const std::size_t n = map.cells_dbm.size();
    run_partitioned(n, cfg.worker_count, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const Point cell = scene.grid.cell_center(k % scene.grid.nx, k / scene.grid.nx);
            double best = -std::numeric_limits<double>::infinity();
            for (const Radiator& r : scene.chain.radiators) {
                const double p = direct_candidate(r, cell, params, scene.lc, cfg.lateral_clamp_m);
                if (p > best)
                    best = p;
            }
            map.cells_dbm[k] = best;
        }
    });
    apply_tolerance_band(map, spec, cfg);
    return map;
}

CoverageMap simulate_dominant_path(const CableLayout& layout, const CableSpec& spec,
                                   const Environment& env, const Frequency& f,
                                   const LinkBudgetParams& params, const EngineConfig& cfg,
                                   Warnings* warnings) {
    if (cfg.engine != Engine::dominant_path)
        throw ConfigError("engine config does not select dominant_path");
    const Scene scene = prepare(layout, spec, env, f, params, cfg, warnings);
    CoverageMap map = make_map(scene, spec, f, params, cfg);

    const std::size_t n = map.cells_dbm.size();
    run_partitioned(n, cfg.worker_count, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const Point cell = scene.grid.cell_center(k % scene.grid.nx, k / scene.grid.nx);
            double best = -std::numeric_limits<double>::infinity();
            double best_len = std::numeric_limits<double>::infinity();
            auto consider = [&](double power, double length) {
                if (power > best || (power == best && length < best_len)) {
                    best = power;
                    best_len = length;
                }
            };

            for (const Radiator& r : scene.chain.radiators) {
                // Direct path through any obstacles.
                const double len = distance(cell, r.position);
                double p = direct_candidate(r, cell, params, scene.lc, cfg.lateral_clamp_m);
                if (len > 0.0)
                    p -= path_obstruction_loss(r.position, cell, env).value;
                consider(p, len);

                if (!cfg.include_barrier_reflection)
                    continue;
                for (const BarrierSegment& barrier : env.barriers) {
                    // Specular bounce exists only with both endpoints
                    // strictly on the same side of the mirror line.
                    const Point dir = barrier.b - barrier.a;
                    const double side_r = cross(dir, r.position - barrier.a);
                    const double side_c = cross(dir, cell - barrier.a);
                    if (!(side_r * side_c > 0.0))
                        continue;
                    const Point image = mirror_point(r.position, barrier.a, barrier.b);
                    double t_img = 0.0;
                    if (!segments_intersect(image, cell, barrier.a, barrier.b, &t_img))
                        continue;
                    const Point bounce = image + t_img * (cell - image);
                    const double path_len = distance(image, cell);
                    double rp = received_power_from_feed(r.feed_power, params, scene.lc,
                                                         path_len, cfg.lateral_clamp_m).value +
                                barrier.reflection_gain_db;
                    if (distance(r.position, bounce) > 0.0)
                        rp -= path_obstruction_loss(r.position, bounce, env).value;
                    if (distance(bounce, cell) > 0.0)
                        rp -= path_obstruction_loss(bounce, cell, env).value;
                    consider(rp, path_len);
                }
            }
            map.cells_dbm[k] = best;
        }
    });
    apply_tolerance_band(map, spec, cfg);
    return map;
}

CoverageMap simulate_coherent(const CableLayout& layout, const CableSpec& spec,
                              const Environment& env, const Frequency& f,
                              const LinkBudgetParams& params, const EngineConfig& cfg,
                              Warnings* warnings) {
    if (cfg.engine != Engine::coherent)
        throw ConfigError("engine config does not select coherent");
    const Scene scene = prepare(layout, spec, env, f, params, cfg, warnings);
    CoverageMap map = make_map(scene, spec, f, params, cfg);

    const double lambda = f.wavelength_m();
    const double vf = cfg.velocity_factor;
    const std::size_t n = map.cells_dbm.size();
    run_partitioned(n, cfg.worker_count, [&](std::size_t lo, std::size_t hi) {
        for (std::size_t k = lo; k < hi; ++k) {
            const Point cell = scene.grid.cell_center(k % scene.grid.nx, k / scene.grid.nx);
            std::complex<double> sum{0.0, 0.0};
            for (const Radiator& r : scene.chain.radiators) {
                const double d = distance(cell, r.position);
                const double p = received_power_from_feed(r.feed_power, params, scene.lc,
                                                          d, cfg.lateral_clamp_m).value;
                const double amp = std::pow(10.0, p / 20.0); // sqrt(mW)
                const double phase = 2.0 * pi * (r.d_lon_m / vf + d) / lambda;
                sum += std::polar(amp, phase);
            }
            const double power_mw = std::max(std::norm(sum), min_power_mw);
            map.cells_dbm[k] = 10.0 * std::log10(power_mw);
        }
    });
    apply_tolerance_band(map, spec, cfg);
    return map;
}

CoverageMap simulate(const CableLayout& layout, const CableSpec& spec,
                     const Environment& env, const Frequency& f,
                     const LinkBudgetParams& params, const EngineConfig& cfg,
                     Warnings* warnings) {
    switch (cfg.engine) {
    case Engine::spl:
        return simulate_spl(layout, spec, env, f, params, cfg, warnings);
    case Engine::dominant_path:
        return simulate_dominant_path(layout, spec, env, f, params, cfg, warnings);
    case Engine::coherent:
        return simulate_coherent(layout, spec, env, f, params, cfg, warnings);
    }
    throw ConfigError("unknown engine");
}

EngineComparison compare_engines(const CoverageMap& a, const CoverageMap& b) {
    if (!a.grid.same_grid(b.grid))
        throw std::domain_error("coverage maps use different grids");
    if (std::abs(a.frequency_hz - b.frequency_hz) > 1e-6 * a.frequency_hz)
        throw std::domain_error("coverage maps use different frequencies");

    EngineComparison cmp;
    cmp.grid = a.grid;
    cmp.delta_db.resize(a.cells_dbm.size());
    double sum = 0.0;
    double sum_sq = 0.0;
    for (std::size_t k = 0; k < a.cells_dbm.size(); ++k) {
        const double d = a.cells_dbm[k] - b.cells_dbm[k];
        cmp.delta_db[k] = d;
        sum += d;
        sum_sq += d * d;
        cmp.max_abs_db = std::max(cmp.max_abs_db, std::abs(d));
    }
    const double n = static_cast<double>(cmp.delta_db.size());
    cmp.mean_db = n > 0.0 ? sum / n : 0.0;
    cmp.rms_db = n > 0.0 ? std::sqrt(sum_sq / n) : 0.0;
    return cmp;
}

} // namespace lcxplan
