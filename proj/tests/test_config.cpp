#include <gtest/gtest.h>

#include <sstream>

#include "see/config.hpp"

namespace see {
namespace {

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return parse_config(in, "t.cfg", "/base");
}

std::size_t error_line(const std::string& text) {
    try {
        parse(text);
    } catch (const ConfigError& e) {
        return e.line();
    }
    ADD_FAILURE() << "no error for: " << text;
    return 0;
}

TEST(Config, ParsesAllValueForms) {
    const RunConfig c = parse(
        "# comment\n"
        "mesh = \"models/bunny.ply\"  # trailing\n"
        "\n"
        "resolution = 0.01\n"
        "k_min = 12\n"
        "noise_sigma = 0\n"
        "initial_axis = [1, -2, 0.5]\n"
        "record_timing = false\n"
        "output_dir = \"out\"\n"
        "jobs = 3\n"
        "width = 64\n");
    EXPECT_EQ(c.experiment.mesh, "/base/models/bunny.ply");
    EXPECT_EQ(c.experiment.resolution, 0.01);
    EXPECT_EQ(c.experiment.k_min, 12u);
    EXPECT_EQ(c.experiment.sensor.noise_sigma, 0.0);
    EXPECT_EQ(c.experiment.initial_axis, Vec3(1, -2, 0.5));
    EXPECT_FALSE(c.experiment.record_timing);
    EXPECT_EQ(c.output_dir, "out");
    EXPECT_EQ(c.jobs, 3u);
    EXPECT_EQ(c.experiment.sensor.width, 64);
}

TEST(Config, BuiltinAndAbsoluteMeshesUntouched) {
    EXPECT_EQ(parse("mesh = \"builtin:cube\"\n").experiment.mesh, "builtin:cube");
    EXPECT_EQ(parse("mesh = \"/abs/m.obj\"\n").experiment.mesh, "/abs/m.obj");
}

TEST(Config, ErrorsCarryTheLine) {
    EXPECT_EQ(error_line("resolution = 0.02\ncolour = 3\n"), 2u);
    EXPECT_EQ(error_line("k_min = 3\nk_min = 4\n"), 2u);
    EXPECT_EQ(error_line("\n\njust words\n"), 3u);
    EXPECT_EQ(error_line("resolution = abc\n"), 1u);
    EXPECT_EQ(error_line("mesh = unquoted\n"), 1u);
    EXPECT_EQ(error_line("initial_axis = [1, 2]\n"), 1u);
    EXPECT_EQ(error_line("record_timing = maybe\n"), 1u);
    EXPECT_EQ(error_line("k_min = 2.5\n"), 1u);
    EXPECT_EQ(error_line("k_min = -1\n"), 1u);
    EXPECT_EQ(error_line("resolution =\n"), 1u);
    try {
        parse("x = 1\n");
    } catch (const ConfigError& e) {
        EXPECT_NE(std::string(e.what()).find("t.cfg:1"), std::string::npos);
    }
}

TEST(Config, MissingFile) {
    EXPECT_THROW(load_config("/nonexistent/see.cfg"), ConfigError);
}

TEST(Config, ShippedConfigsLoadAndValidate) {
    for (const char* name : {"plate", "cube", "sphere", "right_angle"}) {
        const RunConfig c = load_config(std::string(SEE_CONFIG_DIR) + "/" + name + ".cfg");
        EXPECT_NO_THROW(c.experiment.validate()) << name;
        EXPECT_EQ(c.experiment.mesh, std::string("builtin:") + name);
    }
}

} // namespace
} // namespace see
