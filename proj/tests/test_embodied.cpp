#include <catch2/catch_amalgamated.hpp>

#include "carbon_ledger/embodied.hpp"

using namespace carbon_ledger;

TEST_CASE("server_power is P_cpu + P_mem * M") {
    CHECK(server_power(ServerPowerModel::make(350.0, 0.1, 60.0)).watts() == 356.0);
    CHECK(server_power(ServerPowerModel::make(0.0, 0.0, 123.0)).watts() == 0.0);
    CHECK(server_power(ServerPowerModel::make(300.0, 0.2, 100.0)).watts() == 320.0);
    CHECK(server_power(ServerPowerModel::make(350.0, 0.1, 0.0)).watts() == 350.0);
}

TEST_CASE("embodied_energy is P * T * N") {
    const auto m356 = ServerPowerModel::make(356.0, 0.0, 0.0);
    CHECK(embodied_energy(m356, InferenceProfile::make(0.47, 1)).joules() ==
          Catch::Approx(167.32).epsilon(1e-12));
    CHECK(embodied_energy(m356, InferenceProfile::make(0.47, 0)).joules() == 0.0);

    // Case-study run. Oracle: 356 * 0.47 * 203717 = 356 * 47 * 203717 / 100,
    // computed in exact integer arithmetic: 16732 * 203717 = 3408592844.
    const auto model = ServerPowerModel::make(350.0, 0.1, 60.0);
    const auto profile = InferenceProfile::make(0.47, 203717);
    const double oracle_joules = 3408592844.0 / 100.0;  // 34,085,928.44 J
    const auto e = embodied_energy(model, profile);
    CHECK(e.joules() == Catch::Approx(oracle_joules).epsilon(1e-12));
    CHECK(e.kilowatt_hours() == Catch::Approx(oracle_joules / 3'600'000.0).epsilon(1e-12));
    CHECK(format_fixed_trunc(e.kilowatt_hours(), 3) == "9.468");
    // Within 5% of the published 9.203 kWh summary value.
    CHECK(std::fabs(e.kilowatt_hours() - 9.203) / 9.203 < 0.05);
}

TEST_CASE("embodied_carbon delegates to the footprint equation") {
    const auto ci = CarbonIntensityValue::from_grams_per_kwh(172.0);
    const auto c = embodied_carbon(EnergyQuantity::from_kilowatt_hours(9.203), ci);
    CHECK(display_kg(c) == "1.582");
    CHECK(embodied_carbon(EnergyQuantity::from_joules(0.0), ci).grams() == 0.0);

    // Formula-pipeline value: 9.46831345... kWh * 172 g/kWh.
    const double kwh = 3408592844.0 / 100.0 / 3'600'000.0;
    const auto c2 = embodied_carbon(EnergyQuantity::from_kilowatt_hours(kwh), ci);
    CHECK(c2.grams() == Catch::Approx(kwh * 172.0).epsilon(1e-12));
    CHECK(c2.kilograms() == Catch::Approx(1.6285499).epsilon(1e-6));
}

TEST_CASE("accumulate_dynamic sums sessions") {
    CHECK(accumulate_dynamic({}).energy.joules() == 0.0);
    CHECK(accumulate_dynamic({}).carbon.grams() == 0.0);

    EmbodiedSession one;
    one.energy = EnergyQuantity::from_joules(500.0);
    one.carbon = CarbonQuantity::from_grams(100.0);
    const auto single = accumulate_dynamic({one});
    CHECK(single.energy.joules() == 500.0);
    CHECK(single.carbon.grams() == 100.0);

    EmbodiedSession two = one;
    two.carbon = CarbonQuantity::from_grams(250.0);
    const auto both = accumulate_dynamic({one, two});
    CHECK(both.carbon.grams() == 350.0);

    // Permutation invariance.
    const auto swapped = accumulate_dynamic({two, one});
    CHECK(swapped.carbon.grams() == both.carbon.grams());
    CHECK(swapped.energy.joules() == both.energy.joules());
}

TEST_CASE("profile and model validation") {
    CHECK_THROWS_AS(InferenceProfile::make(0.0, 10), std::invalid_argument);
    CHECK_THROWS_AS(InferenceProfile::make(-0.1, 10), std::invalid_argument);
    CHECK_THROWS_AS(ServerPowerModel::make(350.0, -0.1, 60.0), std::invalid_argument);
    CHECK_THROWS_AS(ServerPowerModel::make(-1.0, 0.1, 60.0), std::invalid_argument);
}

TEST_CASE("builtin preset") {
    const auto& p = find_preset("intel-blog-2023");
    CHECK(p.power.cpu_power.watts() == 350.0);
    CHECK(p.power.mem_watts_per_gb == 0.1);
    CHECK(p.power.memory_gb == 60.0);
    CHECK(p.token_latency_s == 0.47);
    CHECK_THROWS_AS(find_preset("no-such-preset"), NoMatchError);
}
