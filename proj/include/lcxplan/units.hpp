#pragma once

#include <cmath>
#include <stdexcept>

namespace lcxplan {

inline constexpr double speed_of_light_m_per_s = 299792458.0;

// Gain of a half-wave dipole over an isotropic radiator.
inline constexpr double dipole_gain_dbi = 2.15;

/// Carrier frequency. Stored in Hz; wavelength derived on demand.
class Frequency {
public:
    explicit Frequency(double hertz) : hertz_(hertz) {
        if (!(hertz > 0.0) || !std::isfinite(hertz))
            throw std::domain_error("frequency must be a positive finite value in Hz");
    }

    static Frequency from_ghz(double ghz) { return Frequency(ghz * 1e9); }

    double hertz() const { return hertz_; }
    double gigahertz() const { return hertz_ * 1e-9; }
    double wavelength_m() const { return speed_of_light_m_per_s / hertz_; }

private:
    double hertz_;
};

/// Absolute power level in dBm.
struct PowerDbm {
    double value = 0.0;

    PowerDbm() = default;
    explicit PowerDbm(double dbm) : value(dbm) {
        if (!std::isfinite(dbm))
            throw std::domain_error("power level must be finite");
    }
};

/// Loss (or, for barrier reflection adjustments, gain) in dB.
struct LossDb {
    double value = 0.0;

    LossDb() = default;
    explicit LossDb(double db) : value(db) {
        if (!std::isfinite(db))
            throw std::domain_error("loss must be finite");
    }
};

inline double dbm_to_milliwatts(double dbm) { return std::pow(10.0, dbm / 10.0); }
inline double milliwatts_to_dbm(double mw) { return 10.0 * std::log10(mw); }

inline double dbd_from_dbi(double dbi) { return dbi - dipole_gain_dbi; }
inline double dbi_from_dbd(double dbd) { return dbd + dipole_gain_dbi; }

} // namespace lcxplan
