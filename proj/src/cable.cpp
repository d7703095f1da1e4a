#include "lcxplan/cable.hpp"

#include <cmath>
#include <stdexcept>

#include "lcxplan/link_budget.hpp"

namespace lcxplan {

void CableSpec::validate() const {
    if (rows.empty())
        throw std::domain_error("cable spec needs at least one frequency row");
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const CableParamRow& row = rows[i];
        if (!(row.frequency_hz > 0.0))
            throw std::domain_error("row frequency must be > 0");
        if (row.alpha_db_per_m < 0.0)
            throw std::domain_error("alpha >= 0");
        if (row.lc95.value < row.lc50.value)
            throw std::domain_error("lc95 >= lc50");
        if (i > 0 && !(row.frequency_hz > rows[i - 1].frequency_hz))
            throw std::domain_error("rows sorted by strictly increasing frequency");
    }
    if (!(reference_lateral_distance_m > 0.0))
        throw std::domain_error("reference lateral distance must be > 0");
    if (lc_tolerance.value < 0.0)
        throw std::domain_error("lc tolerance must be >= 0");
}

void CableLayout::validate() const {
    if (path.size() < 2)
        throw std::domain_error("cable path needs at least two vertices");
    for (std::size_t i = 0; i + 1 < path.size(); ++i) {
        if (distance(path[i], path[i + 1]) == 0.0)
            throw std::domain_error("consecutive path vertices must be distinct");
    }
    if (!(length_m() > 0.0))
        throw std::domain_error("cable length must be > 0");
}

Point CableLayout::plan_position(double d_lon_m, double d_lat_m) const {
    const Point base = polyline_point_at(path, d_lon_m);
    const Point tangent = polyline_tangent_at(path, d_lon_m);
    const Point left{-tangent.y, tangent.x};
    return base + d_lat_m * left;
}

namespace {

double lerp(double a, double b, double t) { return a + t * (b - a); }

} // namespace

CableParams interpolate_cable_params(const CableSpec& spec, const Frequency& f,
                                     Warnings* warnings) {
    spec.validate();
    const double fq = f.hertz();
    const double lo = spec.rows.front().frequency_hz;
    const double hi = spec.rows.back().frequency_hz;
    if (fq < 0.5 * lo || fq > 2.0 * hi)
        throw std::domain_error("frequency outside the cable table's permitted range");

    auto row_params = [](const CableParamRow& r) {
        return CableParams{r.alpha_db_per_m, r.lc50, r.lc95};
    };

    if (fq <= lo) {
        if (fq < lo && warnings)
            warnings->push_back("frequency below cable table, clamped to lowest row");
        return row_params(spec.rows.front());
    }
    if (fq >= hi) {
        if (fq > hi && warnings)
            warnings->push_back("frequency above cable table, clamped to highest row");
        return row_params(spec.rows.back());
    }

    std::size_t i = 1;
    while (spec.rows[i].frequency_hz < fq)
        ++i;
    const CableParamRow& a = spec.rows[i - 1];
    const CableParamRow& b = spec.rows[i];
    if (fq == b.frequency_hz)
        return row_params(b);

    const double t = (std::log10(fq) - std::log10(a.frequency_hz)) /
                     (std::log10(b.frequency_hz) - std::log10(a.frequency_hz));
    return CableParams{lerp(a.alpha_db_per_m, b.alpha_db_per_m, t),
                       LossDb(lerp(a.lc50.value, b.lc50.value, t)),
                       LossDb(lerp(a.lc95.value, b.lc95.value, t))};
}

RadiatorChain discretize(const CableLayout& layout, const CableSpec& spec,
                         const Frequency& f, PowerDbm transmit_power,
                         double interval_m, Warnings* warnings) {
    layout.validate();
    const double length = layout.length_m();
    if (!(interval_m > 0.0))
        throw std::domain_error("discretization interval must be > 0");
    if (interval_m > length)
        throw std::domain_error("discretization interval exceeds cable length");

    const CableParams params = interpolate_cable_params(spec, f, warnings);

    RadiatorChain chain;
    chain.spacing_m = interval_m;
    chain.frequency_hz = f.hertz();
    const auto count = static_cast<std::size_t>(std::floor(length / interval_m + 0.5));
    chain.radiators.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const double d_lon = (static_cast<double>(k) + 0.5) * interval_m;
        Radiator r;
        r.position = layout.point_at(d_lon);
        r.d_lon_m = d_lon;
        r.feed_power = PowerDbm(
            transmit_power.value - longitudinal_loss(params.alpha_db_per_m, d_lon).value);
        chain.radiators.push_back(r);
    }
    return chain;
}

} // namespace lcxplan
