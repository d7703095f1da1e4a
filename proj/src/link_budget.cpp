#include "lcxplan/link_budget.hpp"

#include <cmath>

namespace lcxplan {

LossDb longitudinal_loss(double alpha_db_per_m, double d_lon_m) {
    if (alpha_db_per_m < 0.0)
        throw std::domain_error("attenuation factor must be >= 0 dB/m");
    if (d_lon_m < 0.0)
        throw std::domain_error("longitudinal distance must be >= 0 m");
    return LossDb(alpha_db_per_m * d_lon_m);
}

LossDb coupling_loss_from_powers(double p_tx_watts, double p_rx_watts) {
    if (!(p_tx_watts > 0.0) || !(p_rx_watts > 0.0))
        throw std::domain_error("powers must be > 0 W");
    return LossDb(10.0 * std::log10(p_tx_watts / p_rx_watts));
}

static double clamped_lateral(double d_lat_m, double lateral_clamp_m) {
    const double d = std::max(d_lat_m, lateral_clamp_m);
    if (!(d > 0.0))
        throw std::domain_error("lateral distance is <= 0 m after clamping");
    return d;
}

PowerDbm received_power_from_feed(PowerDbm feed_power,
                                  const LinkBudgetParams& params, LossDb l_c,
                                  double d_lat_m, double lateral_clamp_m) {
    params.validate();
    const double d = clamped_lateral(d_lat_m, lateral_clamp_m);
    return PowerDbm(feed_power.value - l_c.value -
                    10.0 * params.loss_exponent * std::log10(d) -
                    params.connector_loss.value + params.receiver_gain_dbd);
}

PowerDbm received_power(const LinkBudgetParams& params, LossDb l_l, LossDb l_c,
                        double d_lat_m, double lateral_clamp_m) {
    return received_power_from_feed(PowerDbm(params.transmit_power.value - l_l.value),
                                    params, l_c, d_lat_m, lateral_clamp_m);
}

LossDb invert_for_coupling_loss(const LinkBudgetParams& params, LossDb l_l,
                                double d_lat_m, PowerDbm measured_p_r,
                                double lateral_clamp_m) {
    params.validate();
    if (!(d_lat_m > 0.0))
        throw std::domain_error("lateral distance must be > 0 m");
    const double d = clamped_lateral(d_lat_m, lateral_clamp_m);
    return LossDb(params.transmit_power.value - l_l.value -
                  10.0 * params.loss_exponent * std::log10(d) -
                  params.connector_loss.value + params.receiver_gain_dbd -
                  measured_p_r.value);
}

} // namespace lcxplan
