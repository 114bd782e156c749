#include <doctest.h>

#include <random>

#include "eie/sweep.hpp"
#include "test_util.hpp"

using namespace eie;

TEST_CASE("policy names parse") {
    CHECK(parse_policy("magnitude") == PrunePolicy::Magnitude);
    CHECK(parse_policy("balanced") == PrunePolicy::Balanced);
    CHECK(parse_policy("nm") == PrunePolicy::StructuredNM);
    CHECK_THROWS_AS(parse_policy("best"), ValidationError);
}

TEST_CASE("sweep activations are dense and reproducible") {
    const ActivationVector a = sweep_activations(64, 7);
    const ActivationVector b = sweep_activations(64, 7);
    CHECK(a == b);
    CHECK(sweep_activations(64, 8) != a);
    for (Fixed16 v : a) {
        CHECK(v.raw != 0);
        CHECK(std::abs(int(v.raw)) >= 64);
        CHECK(std::abs(int(v.raw)) <= 511);
    }
}

TEST_CASE("sweep emits one row per density, in order") {
    std::mt19937_64 rng(61);
    const DenseMatrix w = testutil::random_dense(rng, 48, 48);
    SweepConfig cfg;
    cfg.num_pes = 2;
    const std::vector<double> densities{0.5, 0.05, 0.9, 0.2};
    const auto rows = density_sweep(w, densities, cfg);
    REQUIRE(rows.size() == 4);
    for (size_t i = 0; i < rows.size(); ++i) CHECK(rows[i].density == densities[i]);
}

TEST_CASE("sparse cycles shrink as density drops") {
    std::mt19937_64 rng(67);
    const DenseMatrix w = testutil::random_dense(rng, 64, 64);
    SweepConfig cfg;
    cfg.num_pes = 4;
    const std::vector<double> densities{1.0, 0.75, 0.5, 0.25, 0.1, 0.02};
    const auto rows = density_sweep(w, densities, cfg);
    for (size_t i = 1; i < rows.size(); ++i)
        CHECK(rows[i].sparse_cycles <= rows[i - 1].sparse_cycles);
}

TEST_CASE("density 1.0 cannot beat the dense baseline") {
    std::mt19937_64 rng(71);
    const DenseMatrix w = testutil::random_dense(rng, 48, 48);
    SweepConfig cfg;
    cfg.num_pes = 4;
    const auto rows = density_sweep(w, {1.0}, cfg);
    CHECK(rows[0].speedup <= 1.0);
    CHECK(rows[0].speedup > 0.8); // only pipeline-fill overhead separates them
}

TEST_CASE("half density wins at desk scale") {
    std::mt19937_64 rng(73);
    const DenseMatrix w = testutil::random_dense(rng, 96, 96);
    SweepConfig cfg;
    cfg.num_pes = 4;
    const auto rows = density_sweep(w, {0.5}, cfg);
    CHECK(rows[0].speedup > 1.0);
}

TEST_CASE("parallel and serial sweeps agree bitwise") {
    std::mt19937_64 rng(79);
    const DenseMatrix w = testutil::random_dense(rng, 40, 40);
    SweepConfig cfg;
    cfg.num_pes = 2;
    cfg.seed = 5;
    const std::vector<double> densities{0.8, 0.4, 0.15, 0.05};
    cfg.parallel = true;
    const auto par = density_sweep(w, densities, cfg);
    cfg.parallel = false;
    const auto ser = density_sweep(w, densities, cfg);
    CHECK(par == ser);
}

TEST_CASE("N:M sweeps ignore the density knob but keep the schema") {
    std::mt19937_64 rng(83);
    const DenseMatrix w = testutil::random_dense(rng, 16, 16);
    SweepConfig cfg;
    cfg.policy = PrunePolicy::StructuredNM;
    cfg.nm_keep = 2;
    cfg.nm_group = 4;
    const auto rows = density_sweep(w, {0.5, 0.25}, cfg);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].sparse_cycles == rows[1].sparse_cycles);
}

TEST_CASE("bad densities are rejected") {
    std::mt19937_64 rng(89);
    const DenseMatrix w = testutil::random_dense(rng, 8, 8);
    SweepConfig cfg;
    CHECK_THROWS_AS(density_sweep(w, {0.5, 0.0}, cfg), ValidationError);
    CHECK_THROWS_AS(density_sweep(w, {1.5}, cfg), ValidationError);
}

TEST_CASE("CSV emission is stable and schema-complete") {
    std::vector<SweepRow> rows{
        {0.5, 100, 200, 2.0, 12.25, 1.5, 4242.0},
        {0.1, 10, 200, 20.0, 30.5, 1.0, 100.0},
    };
    const std::string csv = sweep_rows_to_csv(rows);
    CHECK(csv ==
          "density,sparse_cycles,dense_cycles,speedup,compression_ratio,load_imbalance,"
          "energy_proxy\n"
          "0.5,100,200,2,12.25,1.5,4242\n"
          "0.1,10,200,20,30.5,1,100\n");
}

TEST_CASE("format_double is shortest-roundtrip") {
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(1.0) == "1");
    CHECK(format_double(0.0) == "0");
    CHECK(format_double(-2.5) == "-2.5");
    CHECK(format_double(1.0 / 3.0) == "0.3333333333333333");
}
