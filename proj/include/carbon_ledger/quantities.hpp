#pragma once

#include <cmath>
#include <cstdio>
#include <stdexcept>
#include <string>

namespace carbon_ledger {

// Canonical internal units: joules, watts, grams CO2eq. kWh and kg appear
// only at I/O boundaries so intermediate sums never accumulate display
// rounding.

inline constexpr double kJoulesPerKwh = 3'600'000.0;

namespace detail {

inline double checked_nonnegative(double v, const char* what) {
    if (!(v >= 0.0) || std::isinf(v)) { // rejects NaN and negatives
        throw std::invalid_argument(std::string(what) + " must be a finite non-negative number");
    }
    return v;
}

} // namespace detail

class EnergyQuantity {
public:
    EnergyQuantity() = default;
    static EnergyQuantity from_joules(double j) { return EnergyQuantity(j); }
    static EnergyQuantity from_millijoules(double mj) { return EnergyQuantity(mj / 1000.0); }
    static EnergyQuantity from_kilojoules(double kj) { return EnergyQuantity(kj * 1000.0); }
    static EnergyQuantity from_kilowatt_hours(double kwh) { return EnergyQuantity(kwh * kJoulesPerKwh); }

    double joules() const noexcept { return joules_; }
    double millijoules() const noexcept { return joules_ * 1000.0; }
    double kilojoules() const noexcept { return joules_ / 1000.0; }
    double kilowatt_hours() const noexcept { return joules_ / kJoulesPerKwh; }

    EnergyQuantity& operator+=(const EnergyQuantity& o) noexcept {
        joules_ += o.joules_;
        return *this;
    }
    friend EnergyQuantity operator+(EnergyQuantity a, const EnergyQuantity& b) noexcept {
        a += b;
        return a;
    }

private:
    explicit EnergyQuantity(double j) : joules_(detail::checked_nonnegative(j, "energy (J)")) {}
    double joules_ = 0.0;
};

class PowerQuantity {
public:
    PowerQuantity() = default;
    static PowerQuantity from_watts(double w) { return PowerQuantity(w); }

    double watts() const noexcept { return watts_; }

private:
    explicit PowerQuantity(double w) : watts_(detail::checked_nonnegative(w, "power (W)")) {}
    double watts_ = 0.0;
};

class CarbonQuantity {
public:
    CarbonQuantity() = default;
    static CarbonQuantity from_grams(double g) { return CarbonQuantity(g); }
    static CarbonQuantity from_kilograms(double kg) { return CarbonQuantity(kg * 1000.0); }

    double grams() const noexcept { return grams_; }
    double kilograms() const noexcept { return grams_ / 1000.0; }

    CarbonQuantity& operator+=(const CarbonQuantity& o) noexcept {
        grams_ += o.grams_;
        return *this;
    }
    friend CarbonQuantity operator+(CarbonQuantity a, const CarbonQuantity& b) noexcept {
        a += b;
        return a;
    }

private:
    explicit CarbonQuantity(double g) : grams_(detail::checked_nonnegative(g, "carbon (g CO2eq)")) {}
    double grams_ = 0.0;
};

// Grid carbon intensity in grams CO2eq per kWh.
class CarbonIntensityValue {
public:
    CarbonIntensityValue() = default;
    static CarbonIntensityValue from_grams_per_kwh(double g) { return CarbonIntensityValue(g); }
    static CarbonIntensityValue from_kilograms_per_kwh(double kg) { return CarbonIntensityValue(kg * 1000.0); }

    double grams_per_kwh() const noexcept { return g_per_kwh_; }
    double kilograms_per_kwh() const noexcept { return g_per_kwh_ / 1000.0; }

private:
    explicit CarbonIntensityValue(double g)
        : g_per_kwh_(detail::checked_nonnegative(g, "carbon intensity (g/kWh)")) {}
    double g_per_kwh_ = 0.0;
};

inline double joules_to_kwh(const EnergyQuantity& e) noexcept {
    return e.joules() / kJoulesPerKwh;
}

inline EnergyQuantity kwh_to_joules(double kwh) {
    return EnergyQuantity::from_kilowatt_hours(kwh);
}

// CO2eq = Energy * CI. Exact product of the unrounded kWh value; display
// rounding happens only in the renderers.
inline CarbonQuantity carbon_from_energy(const EnergyQuantity& e, const CarbonIntensityValue& ci) {
    return CarbonQuantity::from_grams(joules_to_kwh(e) * ci.grams_per_kwh());
}

inline CarbonQuantity add_carbon(const CarbonQuantity& a, const CarbonQuantity& b) noexcept {
    return a + b;
}

// --- display formatting ----------------------------------------------------

// Fixed-point with ordinary round-to-nearest (printf semantics).
inline std::string format_fixed(double x, int places) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", places, x);
    return buf;
}

// Fixed-point truncated toward zero, the convention the summary tables use
// (1.582916 renders as 1.582, not 1.583). Renders six guard digits first so
// binary noise below 1e-(places+6) cannot flip the truncated digit.
inline std::string format_fixed_trunc(double x, int places) {
    std::string s = format_fixed(x, places + 6);
    auto dot = s.find('.');
    return s.substr(0, dot + 1 + static_cast<std::string::size_type>(places));
}

// Fixed-point with trailing zeros (and a bare trailing dot) removed.
inline std::string format_trimmed(double x, int places) {
    std::string s = format_fixed(x, places);
    if (s.find('.') == std::string::npos) return s;
    while (s.back() == '0') s.pop_back();
    if (s.back() == '.') s.pop_back();
    return s;
}

// 3-decimal kg display used by the Table-5-style renderers.
inline std::string display_kg(const CarbonQuantity& c) {
    return format_fixed_trunc(c.kilograms(), 3);
}

inline std::string display_kwh(const EnergyQuantity& e) {
    return format_fixed_trunc(e.kilowatt_hours(), 3);
}

} // namespace carbon_ledger
