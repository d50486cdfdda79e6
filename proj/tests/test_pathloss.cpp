#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "stretchnet/pathloss.hpp"

using namespace stretchnet;
using namespace stretchnet::pathloss;

namespace {

const std::vector<PathLossModel> kSamples = {
    PL1{1.0, 0.94, 0.52},
    PL2{0.5, 0.3, 1.0, 1.5},
    PL3{2.0, 0.05, 2.5},
    PL4{1.0, 0.02},
    PL5{1.0, 0.02},
    PL6{1.0, {2.0, 3.5}, {0.0, 50.0}},
    PL7{1.0, 3.0},
    PL8{1.0, 3.5},
    PL9{1.0, 4.0},
    PL10{0.94, 0.52, 4.0, 350.0},
};

}  // namespace

TEST_CASE("stretched exponential hand values") {
    const PathLossModel m = PL1{2.0, 0.5, 1.0};
    CHECK(evaluate_gain(m, 0.0) == doctest::Approx(2.0));
    CHECK(evaluate_gain(m, 3.0) == doctest::Approx(2.0 * std::exp(-1.5)));
    CHECK(gain_db(m, 3.0) ==
          doctest::Approx(10.0 * std::log10(2.0 * std::exp(-1.5))));
}

TEST_CASE("db evaluation stays finite where the linear gain underflows") {
    const PathLossModel m = PL1{1.0, 1.0, 1.0};
    CHECK(evaluate_gain(m, 2000.0) == 0.0);
    const double db = gain_db(m, 2000.0);
    CHECK(std::isfinite(db));
    CHECK(db == doctest::Approx(-2000.0 * 10.0 / std::log(10.0)).epsilon(1e-12));
}

TEST_CASE("db and linear evaluation agree at moderate attenuation") {
    for (const auto& m : kSamples) {
        for (double r : {0.7, 3.0, 17.0, 90.0, 400.0}) {
            CHECK(gain_db(m, r) ==
                  doctest::Approx(10.0 * std::log10(evaluate_gain(m, r)))
                      .epsilon(1e-10));
        }
    }
}

TEST_CASE("pure stretched exponential is the eta = 0 slice of PL2") {
    const PathLossModel a = PL1{0.8, 0.3, 0.7};
    const PathLossModel b = PL2{0.8, 0.3, 0.7, 0.0};
    for (double r : {0.0, 0.5, 5.0, 120.0}) {
        CHECK(evaluate_gain(a, r) == doctest::Approx(evaluate_gain(b, r)));
    }
}

TEST_CASE("min-form equals the product form for positive decay") {
    const PathLossModel a = PL4{1.3, 0.06};
    const PathLossModel b = PL5{1.3, 0.06};
    for (double r = 0.01; r <= 1000.0; r *= 3.7) {
        CHECK(evaluate_gain(a, r) ==
              doctest::Approx(evaluate_gain(b, r)).epsilon(1e-14));
        CHECK(gain_db(a, r) == doctest::Approx(gain_db(b, r)).epsilon(1e-12));
    }
}

TEST_CASE("piecewise power law selects the right segment") {
    const PL6 m{2.0, {2.0, 3.0, 4.0}, {0.0, 10.0, 100.0}};
    const PathLossModel v = m;
    CHECK(evaluate_gain(v, 5.0) == doctest::Approx(2.0 * std::pow(5.0, -2.0)));
    CHECK(evaluate_gain(v, 10.0) ==
          doctest::Approx(2.0 * std::pow(10.0, -2.0)));  // edge goes left
    CHECK(evaluate_gain(v, 10.5) ==
          doctest::Approx(2.0 * std::pow(10.5, -3.0)));
    CHECK(evaluate_gain(v, 1e4) == doctest::Approx(2.0 * std::pow(1e4, -4.0)));
    CHECK_THROWS_AS((void)evaluate_gain(v, 0.0), std::domain_error);
}

TEST_CASE("hybrid model switches families at the break distance") {
    const PL10 m{0.94, 0.52, 4.0, 350.0};
    const PathLossModel v = m;
    CHECK(evaluate_gain(v, 0.0) == doctest::Approx(1.0));
    CHECK(evaluate_gain(v, 100.0) ==
          doctest::Approx(std::exp(-0.94 * std::pow(100.0, 0.52))));
    CHECK(evaluate_gain(v, 350.0) ==
          doctest::Approx(std::exp(-0.94 * std::pow(350.0, 0.52))));
    CHECK(evaluate_gain(v, 500.0) == doctest::Approx(std::pow(500.0, -4.0)));
}

TEST_CASE("gains are non-increasing in distance") {
    for (const auto& m : kSamples) {
        double prev = evaluate_gain(m, 0.05);
        for (double r = 0.1; r < 2000.0; r *= 1.3) {
            const double g = evaluate_gain(m, r);
            CHECK(g <= prev * (1.0 + 1e-12));
            prev = g;
        }
    }
}

TEST_CASE("vectorized gain matches scalar evaluation") {
    Eigen::ArrayXd r(6);
    r << 0.3, 1.0, 9.5, 50.0, 350.0, 1200.0;
    for (const auto& m : kSamples) {
        const Eigen::ArrayXd g = evaluate_gain(m, r);
        for (Eigen::Index i = 0; i < r.size(); ++i) {
            const double expected = evaluate_gain(m, r[i]);
            if (expected == 0.0) {
                CHECK(g[i] <= 1e-300);
            } else {
                CHECK(g[i] == doctest::Approx(expected).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("singular models reject r = 0, bounded ones do not") {
    for (const auto& m : kSamples) {
        if (bounded_at_zero(m)) {
            CHECK(std::isfinite(evaluate_gain(m, 0.0)));
        } else {
            CHECK_THROWS_AS((void)evaluate_gain(m, 0.0), std::domain_error);
            CHECK_THROWS_AS((void)gain_db(m, 0.0), std::domain_error);
        }
        CHECK_THROWS_AS((void)evaluate_gain(m, -1.0), std::domain_error);
    }
}

TEST_CASE("json round-trip preserves every family") {
    for (const auto& m : kSamples) {
        const auto j = model_to_json(m);
        const auto back = model_from_json(j);
        CHECK(family_name(back) == family_name(m));
        CHECK(model_to_json(back) == j);
        for (double r : {0.4, 7.0, 200.0}) {
            CHECK(evaluate_gain(back, r) ==
                  doctest::Approx(evaluate_gain(m, r)));
        }
    }
    CHECK_THROWS_AS((void)model_from_json({{"family", "PL11"},
                                           {"params", {{"A", 1.0}}}}),
                    std::invalid_argument);
}

TEST_CASE("family validation") {
    CHECK_THROWS_AS(validate(PL1{1.0, -0.5, 1.0}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PL2{1.0, 0.5, 1.0, -0.1}), std::invalid_argument);
    CHECK_THROWS_AS(validate(PL6{1.0, {3.0, 2.0}, {0.0, 10.0}}),
                    std::invalid_argument);  // decreasing exponents
    CHECK_THROWS_AS(validate(PL6{1.0, {2.0, 3.0}, {10.0, 10.0}}),
                    std::invalid_argument);  // edges not increasing
    CHECK_THROWS_AS(validate(PL9{0.0, 4.0}), std::invalid_argument);
    CHECK_NOTHROW(validate(PL2{1.0, 0.5, 1.0, 0.0}));
    for (const auto& m : kSamples) CHECK_NOTHROW(validate(m));
}

TEST_CASE("network parameter validation and compact order") {
    NetworkParams p{1e-4, 1.0, 2.0, 0.0};
    CHECK_NOTHROW(p.validate());
    CHECK(p.compact_order() == 0);

    p.beta = 1.0;
    CHECK(p.compact_order() == 1);
    p.beta = 2.0 / 3.0;
    CHECK(p.compact_order() == 2);
    p.beta = 0.5;
    CHECK(p.compact_order() == 3);
    p.beta = 0.8;
    CHECK_FALSE(p.compact_order().has_value());
    CHECK_THROWS_AS((void)p.require_compact_order(), std::invalid_argument);

    NetworkParams bad = p;
    bad.lambda = 0.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.beta = 2.5;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
    bad = p;
    bad.n0 = -1.0;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}
