#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <cstring>
#include <vector>

#include "lcxplan/engines.hpp"
#include "lcxplan/errors.hpp"

using namespace lcxplan;

namespace {

CableSpec flat_spec(double alpha, double lc50, double lc95) {
    CableSpec spec;
    spec.name = "flat";
    spec.rows = {{5.9e9, alpha, LossDb(lc50), LossDb(lc95)}};
    return spec;
}

CableLayout straight_layout(double length, double y = 0.0) {
    CableLayout layout;
    layout.path = {{0.0, y}, {length, y}};
    return layout;
}

Environment env_rect(Point origin, double w, double h, double res) {
    Environment env;
    env.grid_origin = origin;
    env.grid_width_m = w;
    env.grid_height_m = h;
    env.grid_resolution_m = res;
    return env;
}

LinkBudgetParams params_default() {
    LinkBudgetParams p;
    p.transmit_power = PowerDbm(18.0);
    p.loss_exponent = 2.0;
    p.connector_loss = LossDb(0.0);
    p.receiver_gain_dbd = 0.0;
    return p;
}

EngineConfig config(Engine engine) {
    EngineConfig cfg;
    cfg.engine = engine;
    return cfg;
}

constexpr double tau = 6.283185307179586476925286766559;

} // namespace

TEST_CASE("spl: single radiator reproduces the scalar budget") {
    const CableSpec spec = flat_spec(0.05, 65.0, 75.0);
    const CableLayout layout = straight_layout(1.0); // one radiator at (0.5, 0)
    const Environment env = env_rect({0.0, 0.0}, 1.0, 2.0, 1.0);
    EngineConfig cfg = config(Engine::spl);
    cfg.discretization_interval_m = 1.0;

    const CoverageMap map =
        simulate_spl(layout, spec, env, Frequency(5.9e9), params_default(), cfg);
    REQUIRE(map.cells_dbm.size() == 2);
    // cell (0.5, 1.5) sits exactly 1.5 m from the radiator
    const double expected =
        received_power(params_default(), longitudinal_loss(0.05, 0.5), LossDb(65.0), 1.5).value;
    CHECK(map.at(0, 1) == doctest::Approx(expected).epsilon(1e-12));
}

TEST_CASE("spl: equidistant radiators select, not sum") {
    const CableSpec spec = flat_spec(0.0, 65.0, 75.0);
    const CableLayout layout = straight_layout(2.0); // radiators at 0.5 and 1.5
    Environment env = env_rect({0.5, 2.0}, 1.0, 1.0, 1.0); // single cell at (1, 2.5)
    EngineConfig cfg = config(Engine::spl);
    cfg.discretization_interval_m = 1.0;

    const CoverageMap map =
        simulate_spl(layout, spec, env, Frequency(5.9e9), params_default(), cfg);
    REQUIRE(map.cells_dbm.size() == 1);
    const double d = std::hypot(0.5, 2.5);
    const double single =
        received_power(params_default(), LossDb(0.0), LossDb(65.0), d).value;
    CHECK(map.cells_dbm[0] == doctest::Approx(single).epsilon(1e-12));
}

TEST_CASE("spl: brute-force oracle over a ten-radiator chain") {
    const CableSpec spec = flat_spec(0.08, 62.0, 71.0);
    const CableLayout layout = straight_layout(10.0);
    const Environment env = env_rect({-2.0, -3.0}, 16.0, 9.0, 1.6);
    EngineConfig cfg = config(Engine::spl);
    cfg.discretization_interval_m = 1.0;
    const Frequency f(5.9e9);
    const LinkBudgetParams params = params_default();

    const CoverageMap map = simulate_spl(layout, spec, env, f, params, cfg);

    // exhaustive maximization, written independently of the engine
    const RadiatorChain chain = discretize(layout, spec, f, params.transmit_power, 1.0);
    for (std::size_t j = 0; j < map.grid.ny; ++j) {
        for (std::size_t i = 0; i < map.grid.nx; ++i) {
            const Point cell = map.grid.cell_center(i, j);
            double best = -1e300;
            for (const Radiator& r : chain.radiators) {
                const double d = std::max(std::hypot(cell.x - r.position.x,
                                                     cell.y - r.position.y),
                                          0.1);
                const double candidate = r.feed_power.value - 62.0 -
                                         20.0 * std::log10(d);
                best = std::max(best, candidate);
            }
            CHECK(map.at(i, j) == doctest::Approx(best).epsilon(1e-12));
        }
    }
}

TEST_CASE("dominant path equals spl on an empty environment") {
    const CableSpec spec = flat_spec(0.1, 70.0, 80.0);
    CableLayout layout;
    layout.path = {{0.0, 0.0}, {8.0, 6.0}, {8.0, 16.0}};
    const Environment env = env_rect({-5.0, -5.0}, 25.0, 25.0, 2.5);
    const Frequency f(5.9e9);

    const CoverageMap spl =
        simulate_spl(layout, spec, env, f, params_default(), config(Engine::spl));
    const CoverageMap dpm = simulate_dominant_path(layout, spec, env, f, params_default(),
                                                   config(Engine::dominant_path));
    REQUIRE(spl.cells_dbm.size() == dpm.cells_dbm.size());
    for (std::size_t k = 0; k < spl.cells_dbm.size(); ++k)
        CHECK(std::abs(spl.cells_dbm[k] - dpm.cells_dbm[k]) <= 1e-9);
}

TEST_CASE("dominant path charges blocking obstacles") {
    const CableSpec spec = flat_spec(0.0, 65.0, 75.0);
    const CableLayout layout = straight_layout(1.0); // radiator at (0.5, 0)
    Environment env = env_rect({0.0, 9.0}, 1.0, 1.0, 1.0); // cell at (0.5, 9.5)
    env.obstacles.push_back(
        {ConvexPolygon({{-2.0, 4.0}, {3.0, 4.0}, {3.0, 5.0}, {-2.0, 5.0}}), LossDb(12.0)});
    const Frequency f(5.9e9);

    const CoverageMap blocked = simulate_dominant_path(layout, spec, env, f, params_default(),
                                                       config(Engine::dominant_path));
    Environment open = env;
    open.obstacles.clear();
    const CoverageMap free_path =
        simulate_spl(layout, spec, open, f, params_default(), config(Engine::spl));
    CHECK(blocked.cells_dbm[0] ==
          doctest::Approx(free_path.cells_dbm[0] - 12.0).epsilon(1e-12));
}

TEST_CASE("dominant path image-source reflection against a hand oracle") {
    const CableSpec spec = flat_spec(0.0, 60.0, 70.0);
    // one radiator at (0, 5): cable from (-0.5, 5) to (0.5, 5)
    CableLayout layout;
    layout.path = {{-0.5, 5.0}, {0.5, 5.0}};
    Environment env = env_rect({3.5, 2.5}, 1.0, 1.0, 1.0); // cell at (4, 3)
    env.barriers.push_back({{-10.0, 0.0}, {10.0, 0.0}, 2.5});
    const Frequency f(5.9e9);
    const LinkBudgetParams params = params_default();

    EngineConfig cfg = config(Engine::dominant_path);
    cfg.discretization_interval_m = 1.0;
    cfg.include_barrier_reflection = true;
    const CoverageMap map = simulate_dominant_path(layout, spec, env, f, params, cfg);

    // image of the radiator across y = 0 is (0, -5); the unfolded reflected
    // path to the cell (4, 3) has length sqrt(16 + 64)
    const double direct =
        received_power(params, LossDb(0.0), LossDb(60.0), std::hypot(4.0, 2.0)).value;
    const double reflected =
        received_power(params, LossDb(0.0), LossDb(60.0), std::sqrt(80.0)).value + 2.5;
    CHECK(map.cells_dbm[0] ==
          doctest::Approx(std::max(direct, reflected)).epsilon(1e-12));

    // with a strong reflector the bounce must win
    env.barriers[0].reflection_gain_db = 25.0;
    const CoverageMap boosted = simulate_dominant_path(layout, spec, env, f, params, cfg);
    CHECK(boosted.cells_dbm[0] ==
          doctest::Approx(received_power(params, LossDb(0.0), LossDb(60.0),
                                         std::sqrt(80.0)).value + 25.0)
              .epsilon(1e-12));

    // radiator and receiver on opposite sides: no specular path
    Environment below = env_rect({3.5, -4.5}, 1.0, 1.0, 1.0); // cell at (4, -4)
    below.barriers.push_back({{-10.0, 0.0}, {10.0, 0.0}, 25.0});
    const CoverageMap opposite = simulate_dominant_path(layout, spec, below, f, params, cfg);
    const double through =
        received_power(params, LossDb(0.0), LossDb(60.0), std::hypot(4.0, 9.0)).value;
    CHECK(opposite.cells_dbm[0] == doctest::Approx(through).epsilon(1e-12));

    // reflection point must land on the barrier segment
    Environment short_barrier = env;
    short_barrier.barriers[0] = {{-10.0, 0.0}, {1.0, 0.0}, 25.0};
    const CoverageMap off_segment =
        simulate_dominant_path(layout, spec, short_barrier, f, params, cfg);
    CHECK(off_segment.cells_dbm[0] == doctest::Approx(direct).epsilon(1e-12));
}

TEST_CASE("coherent: single radiator equals spl") {
    const CableSpec spec = flat_spec(0.05, 65.0, 75.0);
    const CableLayout layout = straight_layout(0.01);
    const Environment env = env_rect({0.0, 0.0}, 1.0, 2.0, 1.0);
    const Frequency f(5.9e9);

    EngineConfig coherent = config(Engine::coherent);
    coherent.discretization_interval_m = 0.01;
    EngineConfig spl_cfg = config(Engine::spl);
    spl_cfg.discretization_interval_m = 0.01;

    const CoverageMap a = simulate_coherent(layout, spec, env, f, params_default(), coherent);
    const CoverageMap b = simulate_spl(layout, spec, env, f, params_default(), spl_cfg);
    for (std::size_t k = 0; k < a.cells_dbm.size(); ++k)
        CHECK(a.cells_dbm[k] == doctest::Approx(b.cells_dbm[k]).epsilon(1e-9));
}

TEST_CASE("coherent: two-radiator interference") {
    const Frequency f(5.9e9);
    const double lambda = f.wavelength_m();
    const double h = 0.25 * lambda; // radiator spacing at the enforcement limit

    // Two radiators, equidistant probe on the perpendicular bisector: the
    // path difference is purely the guided leg (d_lon2 - d_lon1) / vf, so the
    // velocity factor dials it to a full or half wavelength.
    auto probe_level = [&](double vf) {
        CableSpec spec = flat_spec(0.0, 60.0, 70.0);
        spec.rows[0].frequency_hz = f.hertz();
        CableLayout layout;
        layout.path = {{-h, 0.0}, {h, 0.0}}; // radiators at -h/2 and +h/2
        Environment env = env_rect({-0.005, 3.0}, 0.01, 0.01, 0.01);
        EngineConfig cfg = config(Engine::coherent);
        cfg.discretization_interval_m = h;
        cfg.velocity_factor = vf;
        const CoverageMap map =
            simulate_coherent(layout, spec, env, f, params_default(), cfg);
        return map.cells_dbm[0];
    };

    const double constructive = probe_level(0.25); // guided leg = lambda
    const double destructive = probe_level(0.5);   // guided leg = lambda/2

    // single radiator with the same geometry for reference
    CableSpec spec = flat_spec(0.0, 60.0, 70.0);
    CableLayout single;
    single.path = {{-0.0005, 0.0}, {0.0005, 0.0}};
    Environment env = env_rect({-0.005, 3.0}, 0.01, 0.01, 0.01);
    EngineConfig cfg = config(Engine::coherent);
    cfg.discretization_interval_m = 0.001;
    const double lone =
        simulate_coherent(single, spec, env, f, params_default(), cfg).cells_dbm[0];

    CHECK(constructive == doctest::Approx(lone + 6.0206).epsilon(1e-3));
    CHECK(destructive <= lone);
}

TEST_CASE("coherent: engine matches an independent phasor oracle") {
    const CableSpec spec = flat_spec(0.121, 48.0, 58.0);
    const CableLayout layout = straight_layout(20.0);
    const Frequency f(5.9e9);
    const double lambda = f.wavelength_m();
    Environment env = env_rect({4.0, 1.9975}, 12.0, 0.005, 0.005);

    EngineConfig cfg = config(Engine::coherent);
    cfg.velocity_factor = 0.88;
    const CoverageMap map = simulate_coherent(layout, spec, env, f, params_default(), cfg);

    // independent phasor sum over the same radiator set
    const RadiatorChain chain =
        discretize(layout, spec, f, PowerDbm(18.0), cfg.interval_for(f));
    for (std::size_t i = 0; i < map.grid.nx; i += 97) {
        const Point cell = map.grid.cell_center(i, 0);
        std::complex<double> sum{0.0, 0.0};
        for (const Radiator& r : chain.radiators) {
            const double d = std::hypot(cell.x - r.position.x, cell.y - r.position.y);
            const double level_dbm =
                r.feed_power.value - 48.0 - 20.0 * std::log10(std::max(d, 0.1));
            const double magnitude = std::sqrt(std::pow(10.0, level_dbm / 10.0));
            const double phase = tau / lambda * (r.d_lon_m / 0.88 + d);
            sum += magnitude * std::complex<double>(std::cos(phase), std::sin(phase));
        }
        const double oracle = 10.0 * std::log10(std::norm(sum));
        CHECK(map.at(i, 0) == doctest::Approx(oracle).epsilon(1e-9));
    }
}

TEST_CASE("coherent: window-averaged power stays near the spl level") {
    const CableSpec spec = flat_spec(0.121, 48.0, 58.0);
    const CableLayout layout = straight_layout(20.0);
    const Frequency f(5.9e9);
    const double lambda = f.wavelength_m();
    // line at d_lat = 2 m sampled every 5 mm across the cable span
    Environment env = env_rect({0.0, 1.9975}, 20.0, 0.005, 0.005);

    const CoverageMap fine =
        simulate_coherent(layout, spec, env, f, params_default(), config(Engine::coherent));
    EngineConfig spl_cfg = config(Engine::spl);
    spl_cfg.discretization_interval_m = 0.25 * lambda;
    const CoverageMap smooth =
        simulate_spl(layout, spec, env, f, params_default(), spl_cfg);

    const std::size_t window = static_cast<std::size_t>(10.0 * lambda / 0.005);
    for (std::size_t start = 0; start + window < fine.grid.nx; start += 40) {
        double mean_mw = 0.0;
        for (std::size_t i = start; i < start + window; ++i)
            mean_mw += std::pow(10.0, fine.at(i, 0) / 10.0);
        mean_mw /= static_cast<double>(window);
        const double mean_dbm = 10.0 * std::log10(mean_mw);
        const double center = smooth.at(start + window / 2, 0);
        CHECK(std::abs(mean_dbm - center) < 6.0);
    }
}

TEST_CASE("coherent: interval coarser than lambda/4 is rejected") {
    const CableSpec spec = flat_spec(0.1, 60.0, 70.0);
    const CableLayout layout = straight_layout(20.0);
    const Environment env = env_rect({0.0, 0.0}, 10.0, 10.0, 1.0);
    EngineConfig cfg = config(Engine::coherent);
    cfg.discretization_interval_m = 1.0; // lambda/4 at 5.9 GHz is ~12.7 mm
    CHECK_THROWS_AS(
        simulate_coherent(layout, spec, env, Frequency(5.9e9), params_default(), cfg),
        ConfigError);
}

TEST_CASE("quantile monotonicity and tolerance band") {
    const CableSpec spec = flat_spec(0.08, 62.0, 71.0);
    const CableLayout layout = straight_layout(10.0);
    const Environment env = env_rect({0.0, 0.0}, 12.0, 8.0, 1.0);
    const Frequency f(5.9e9);

    EngineConfig cfg50 = config(Engine::spl);
    EngineConfig cfg95 = config(Engine::spl);
    cfg95.quantile = Quantile::lc95;
    const CoverageMap m50 = simulate_spl(layout, spec, env, f, params_default(), cfg50);
    const CoverageMap m95 = simulate_spl(layout, spec, env, f, params_default(), cfg95);
    for (std::size_t k = 0; k < m50.cells_dbm.size(); ++k)
        CHECK(m95.cells_dbm[k] <= m50.cells_dbm[k]);

    EngineConfig banded = cfg50;
    banded.tolerance_band = true;
    const CoverageMap band = simulate_spl(layout, spec, env, f, params_default(), banded);
    REQUIRE(band.best_dbm.size() == band.cells_dbm.size());
    for (std::size_t k = 0; k < band.cells_dbm.size(); ++k) {
        CHECK(band.best_dbm[k] == doctest::Approx(band.cells_dbm[k] + 10.0));
        CHECK(band.worst_dbm[k] == doctest::Approx(band.cells_dbm[k] - 10.0));
    }
}

TEST_CASE("worker partitioning does not change results") {
    const CableSpec spec = flat_spec(0.08, 62.0, 71.0);
    const CableLayout layout = straight_layout(50.0);
    const Environment env = env_rect({0.0, 0.0}, 50.0, 20.0, 1.0);
    const Frequency f(5.9e9);

    for (Engine engine : {Engine::spl, Engine::dominant_path, Engine::coherent}) {
        EngineConfig one = config(engine);
        EngineConfig many = config(engine);
        many.worker_count = 8;
        const CoverageMap a = simulate(layout, spec, env, f, params_default(), one);
        const CoverageMap b = simulate(layout, spec, env, f, params_default(), many);
        REQUIRE(a.cells_dbm.size() == b.cells_dbm.size());
        CHECK(std::memcmp(a.cells_dbm.data(), b.cells_dbm.data(),
                          a.cells_dbm.size() * sizeof(double)) == 0);
    }
}

TEST_CASE("engine comparison statistics") {
    const CableSpec spec = flat_spec(0.08, 62.0, 71.0);
    const CableLayout layout = straight_layout(10.0);
    const Environment env = env_rect({0.0, 0.0}, 10.0, 5.0, 1.0);
    const Frequency f(5.9e9);
    const CoverageMap a = simulate_spl(layout, spec, env, f, params_default(),
                                       config(Engine::spl));

    const EngineComparison self = compare_engines(a, a);
    CHECK(self.mean_db == 0.0);
    CHECK(self.max_abs_db == 0.0);
    CHECK(self.rms_db == 0.0);

    CoverageMap shifted = a;
    for (double& v : shifted.cells_dbm)
        v += 3.0;
    const EngineComparison offset = compare_engines(a, shifted);
    CHECK(offset.mean_db == doctest::Approx(-3.0).epsilon(1e-12));
    CHECK(offset.max_abs_db == doctest::Approx(3.0).epsilon(1e-12));

    CoverageMap other_grid = a;
    other_grid.grid.resolution_m = 2.0;
    CHECK_THROWS_AS(compare_engines(a, other_grid), std::domain_error);

    // nonzero exactly where an obstacle shadows the direct path
    Environment with_block = env;
    with_block.obstacles.push_back(
        {ConvexPolygon({{4.0, 1.0}, {6.0, 1.0}, {6.0, 2.0}, {4.0, 2.0}}), LossDb(9.0)});
    const CoverageMap dpm = simulate_dominant_path(layout, spec, with_block, f,
                                                   params_default(),
                                                   config(Engine::dominant_path));
    const EngineComparison diff = compare_engines(a, dpm);
    for (std::size_t j = 0; j < diff.grid.ny; ++j) {
        for (std::size_t i = 0; i < diff.grid.nx; ++i) {
            const double d = diff.delta_db[j * diff.grid.nx + i];
            CHECK(d >= -1e-12); // dpm can only lose power here
            if (d > 1e-9) {
                // shadowed cells sit behind the block, away from the cable
                CHECK(diff.grid.cell_center(i, j).y > 1.0);
            }
        }
    }
}
