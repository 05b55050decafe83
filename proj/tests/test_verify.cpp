#include <doctest.h>

#include <string>

#include "squeeze/verify.hpp"

using squeeze::verify::Status;

TEST_CASE("cross-validation suite is green apart from the documented deviations") {
    auto rep = squeeze::verify::run();
    CHECK(rep.ok());
    CHECK(rep.count(Status::Fail) == 0);

    // the mu = 3 / 2 < mu < 3 resonance rows deviate from the tabulated
    // closed forms at the exact-product level and nowhere else
    int known = rep.count(Status::KnownDeviation);
    CHECK(known == 10);
    for (const auto& c : rep.checks)
        if (c.status == Status::KnownDeviation) {
            bool boundary_row = c.name.find("/2a-") != std::string::npos ||
                                c.name.find("/2c-") != std::string::npos ||
                                c.name.find("/2d-") != std::string::npos ||
                                c.name.find("/3a-") != std::string::npos ||
                                c.name.find("/3c-") != std::string::npos ||
                                c.name.find("/3d-") != std::string::npos ||
                                c.name.find("mu3") != std::string::npos;
            CHECK_MESSAGE(boundary_row, c.name);
        }

    // one witness per classification-table row, and every row reproduces
    int t1 = 0, t2 = 0;
    for (const auto& c : rep.checks) {
        std::string msg = c.name + ": " + c.detail;
        if (c.name.rfind("table1/", 0) == 0 && c.name.find("/classification") != std::string::npos) {
            ++t1;
            CHECK_MESSAGE(c.status == Status::Pass, msg);
        }
        if (c.name.rfind("table2/", 0) == 0) {
            ++t2;
            CHECK_MESSAGE(c.status == Status::Pass, msg);
        }
    }
    CHECK(t1 >= 30);
    CHECK(t2 >= 16);
}

TEST_CASE("fault injection flips the suite red") {
    auto rep = squeeze::verify::run({1e-20});
    CHECK(!rep.ok());
    CHECK(rep.count(Status::Fail) > 20);
}
