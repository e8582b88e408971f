#include <catch2/catch_amalgamated.hpp>

#include "carbon_ledger/quantities.hpp"

using namespace carbon_ledger;

TEST_CASE("joules_to_kwh definition") {
    CHECK(joules_to_kwh(EnergyQuantity::from_joules(3'600'000.0)) == 1.0);
    CHECK(joules_to_kwh(EnergyQuantity::from_joules(0.0)) == 0.0);

    // 4190.5 kJ, by long division: 4190500 / 3600000 = 1.1640277...
    const double oracle = 4190500.0 / 3600000.0;
    const auto e = EnergyQuantity::from_kilojoules(4190.5);
    CHECK(joules_to_kwh(e) == Catch::Approx(oracle).epsilon(1e-12));
    CHECK(format_fixed(joules_to_kwh(e), 6) == "1.164028");
}

TEST_CASE("carbon_from_energy follows CO2eq = Energy * CI") {
    const auto ci = CarbonIntensityValue::from_grams_per_kwh(172.0);

    const auto emb = carbon_from_energy(EnergyQuantity::from_kilowatt_hours(9.203), ci);
    CHECK(emb.grams() == Catch::Approx(1582.916).epsilon(1e-12));
    CHECK(display_kg(emb) == "1.582");

    const auto oper = carbon_from_energy(EnergyQuantity::from_kilowatt_hours(1.131), ci);
    CHECK(oper.grams() == Catch::Approx(194.532).epsilon(1e-12));
    CHECK(display_kg(oper) == "0.194");

    const auto zero_ci = CarbonIntensityValue::from_grams_per_kwh(0.0);
    CHECK(carbon_from_energy(EnergyQuantity::from_kilowatt_hours(123.4), zero_ci).grams() == 0.0);
}

TEST_CASE("add_carbon") {
    const auto a = CarbonQuantity::from_grams(1582.916);
    const auto b = CarbonQuantity::from_grams(194.532);
    const auto total = add_carbon(a, b);
    CHECK(total.grams() == Catch::Approx(1777.448).epsilon(1e-12));
    CHECK(display_kg(total) == "1.777");

    CHECK(add_carbon(a, CarbonQuantity::from_grams(0.0)).grams() == a.grams());
    CHECK(add_carbon(CarbonQuantity::from_grams(1.0), CarbonQuantity::from_grams(2.0)).grams() ==
          3.0);
}

TEST_CASE("display rounding happens only at the boundary") {
    // Summing the unrounded carbons gives 1.777; summing rounded displays
    // would give 1.776.
    const auto ci = CarbonIntensityValue::from_grams_per_kwh(172.0);
    const auto emb = carbon_from_energy(EnergyQuantity::from_kilowatt_hours(9.203), ci);
    const auto oper = carbon_from_energy(EnergyQuantity::from_kilowatt_hours(1.131), ci);
    CHECK(display_kg(add_carbon(emb, oper)) == "1.777");
}

TEST_CASE("format_fixed_trunc truncates toward zero") {
    CHECK(format_fixed_trunc(1.582916, 3) == "1.582");
    CHECK(format_fixed_trunc(0.194532, 3) == "0.194");
    CHECK(format_fixed_trunc(1.777448, 3) == "1.777");
    CHECK(format_fixed_trunc(9.468313455555555, 3) == "9.468");
    // Binary noise just below a decimal boundary must not leak through.
    CHECK(format_fixed_trunc(1.7769999999999999, 3) == "1.777");
    CHECK(format_fixed_trunc(0.0, 3) == "0.000");
}

TEST_CASE("negative and non-finite inputs are rejected at construction") {
    CHECK_THROWS_AS(EnergyQuantity::from_joules(-1.0), std::invalid_argument);
    CHECK_THROWS_AS(PowerQuantity::from_watts(-0.5), std::invalid_argument);
    CHECK_THROWS_AS(CarbonQuantity::from_grams(-2.0), std::invalid_argument);
    CHECK_THROWS_AS(CarbonIntensityValue::from_grams_per_kwh(-172.0), std::invalid_argument);
    CHECK_THROWS_AS(EnergyQuantity::from_joules(std::nan("")), std::invalid_argument);
    CHECK_THROWS_AS(EnergyQuantity::from_joules(std::numeric_limits<double>::infinity()),
                    std::invalid_argument);
}

TEST_CASE("unit accessors agree with constructors") {
    const auto e = EnergyQuantity::from_kilowatt_hours(2.0);
    CHECK(e.joules() == 7'200'000.0);
    CHECK(e.kilojoules() == 7200.0);
    CHECK(EnergyQuantity::from_millijoules(446'000.0).kilojoules() == 0.446);
    CHECK(CarbonIntensityValue::from_kilograms_per_kwh(0.172).grams_per_kwh() ==
          Catch::Approx(172.0).epsilon(1e-12));
}
