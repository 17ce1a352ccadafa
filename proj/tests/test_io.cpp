#include <gtest/gtest.h>

#include <roughex/csv.hpp>
#include <roughex/io.hpp>

using namespace roughex;
using nlohmann::json;

namespace {

json base_json() {
    return {{"alpha", 0.6}, {"rho", -0.8}, {"lambda", 2.0}, {"xi", 0.2}, {"vbar", 0.04}, {"v0", 0.04}};
}

} // namespace

TEST(Params, FromJson) {
    const ModelParams p = params_from_json(base_json());
    EXPECT_EQ(p.alpha, 0.6);
    EXPECT_EQ(p.rho, -0.8);
    EXPECT_EQ(p.lambda, 2.0);
    EXPECT_EQ(p.xi, 0.2);
    EXPECT_EQ(p.vbar, 0.04);
    EXPECT_EQ(p.v0, 0.04);
    EXPECT_EQ(params_to_json(p), base_json());
}

TEST(Params, RejectsUnknownAndMissingKeys) {
    json j = base_json();
    j["kappa"] = 1.0;
    EXPECT_THROW(params_from_json(j), InputError);
    j = base_json();
    j.erase("v0");
    EXPECT_THROW(params_from_json(j), InputError);
    j = base_json();
    j["rho"] = "negative";
    EXPECT_THROW(params_from_json(j), InputError);
    EXPECT_THROW(params_from_json(json::array()), InputError);
}

TEST(Params, RejectsInvalidRanges) {
    json j = base_json();
    j["alpha"] = 0.4;
    EXPECT_THROW(params_from_json(j), InputError);
    j = base_json();
    j["rho"] = 1.0;
    EXPECT_THROW(params_from_json(j), InputError);
}

TEST(Params, ShippedDefaultFile) {
    const ModelParams p = load_params(ROUGHEX_PARAMS_DIR "/base.json");
    const ModelParams d{};
    EXPECT_EQ(params_to_json(p), params_to_json(d));
    EXPECT_THROW(load_params(ROUGHEX_PARAMS_DIR "/does_not_exist.json"), InputError);
}

TEST(Csv, NumberFormat) {
    EXPECT_EQ(format_number(0.5), "0.5");
    EXPECT_EQ(format_number(-12.5), "-12.5");
    EXPECT_EQ(format_number(std::numeric_limits<double>::infinity()), "inf");
    EXPECT_EQ(format_number(-std::numeric_limits<double>::infinity()), "-inf");
    EXPECT_EQ(format_number(std::nan("")), "nan");
    EXPECT_EQ(std::stod(format_number(0.1)), 0.1);
}
