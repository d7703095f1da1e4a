#pragma once

#include "lcxplan/units.hpp"

namespace lcxplan {

/// Receiver-side link parameters shared by every power evaluation.
///
/// The receiver gain is stored relative to a half-wave dipole (dBd), the
/// reference antenna used for coupling-loss specification; convert with
/// dbd_from_dbi() when a datasheet quotes dBi.
struct LinkBudgetParams {
    PowerDbm transmit_power{18.0};
    double loss_exponent = 2.0;     // free-space default
    LossDb connector_loss{0.0};     // feed, jumper and connector losses
    double receiver_gain_dbd = 0.0;

    void validate() const {
        if (!(loss_exponent > 0.0))
            throw std::domain_error("loss exponent must be > 0");
    }
};

/// Lateral distances below this are clamped before the log term to keep the
/// near-field singularity out of the budget. Overridable per call.
inline constexpr double default_lateral_clamp_m = 0.1;

/// Line attenuation between feed and the radiating point: alpha * d_lon.
LossDb longitudinal_loss(double alpha_db_per_m, double d_lon_m);

/// Coupling loss from a transmitted/received power ratio (linear watts).
LossDb coupling_loss_from_powers(double p_tx_watts, double p_rx_watts);

/// Received power at lateral distance d_lat from a radiating point:
///
///   P_R = P_T - L_L - L_C - 10 p log10(d_lat) - L_con + G_R
///
/// d_lat is clamped from below at `lateral_clamp_m`.
PowerDbm received_power(const LinkBudgetParams& params, LossDb l_l, LossDb l_c,
                        double d_lat_m,
                        double lateral_clamp_m = default_lateral_clamp_m);

/// Same budget, starting from the power already present at the radiating
/// point (i.e. P_T - L_L folded together). The propagation engines feed the
/// discretized radiator powers through here so that every engine evaluates
/// the identical expression.
PowerDbm received_power_from_feed(PowerDbm feed_power,
                                  const LinkBudgetParams& params, LossDb l_c,
                                  double d_lat_m,
                                  double lateral_clamp_m = default_lateral_clamp_m);

/// Algebraic inversion of received_power for the coupling loss: given a
/// measured level, returns the L_C that reproduces it exactly.
LossDb invert_for_coupling_loss(const LinkBudgetParams& params, LossDb l_l,
                                double d_lat_m, PowerDbm measured_p_r,
                                double lateral_clamp_m = default_lateral_clamp_m);

} // namespace lcxplan
