#include <gtest/gtest.h>

#include "bogo/config.hpp"

using namespace bogo;
using namespace bogo::config;

TEST(Config, DefaultsParse) {
    const auto c = from_json(defaults());
    EXPECT_FALSE(c.potential.has_value());
    EXPECT_EQ(c.N, 100);
    EXPECT_EQ(c.variants.size(), 2u);
    EXPECT_EQ(c.oracle.cap, 12);
    EXPECT_EQ(c.oracle.shells, std::vector<int>{1});
}

TEST(Config, DottedSet) {
    auto j = defaults();
    apply_set(j, "oracle.cap=14");
    apply_set(j, "oracle.shells=[1,2]");
    apply_set(j, "variant=A");
    apply_set(j, "potential={\"kind\":\"soft_sphere\",\"v0\":100,\"radius\":0.5}");
    apply_set(j, "potential.v0=50");
    const auto c = from_json(j);
    EXPECT_EQ(c.oracle.cap, 14);
    EXPECT_EQ(c.oracle.shells, (std::vector<int>{1, 2}));
    ASSERT_EQ(c.variants.size(), 1u);
    EXPECT_EQ(c.variants[0], Variant::A_paper);
    EXPECT_EQ(c.potential->v0(), 50.0);
}

TEST(Config, UnknownKeysRejected) {
    auto j = defaults();
    EXPECT_THROW(apply_set(j, "oracle.capp=3"), InvalidArgument);
    EXPECT_THROW(apply_set(j, "nokey"), InvalidArgument);
    EXPECT_THROW(apply_set(j, "a..b=1"), InvalidArgument);
    EXPECT_THROW(merge(j, json{{"bogus", 1}}), InvalidArgument);
}

TEST(Config, ValuesValidated) {
    for (const char* bad : {"N=0", "beta=-1", "variant=C", "oracle.shells=[]", "N=\"many\""}) {
        auto j = defaults();
        apply_set(j, bad);
        EXPECT_THROW(from_json(j), InvalidArgument) << bad;
    }
}

TEST(Config, PotentialKinds) {
    EXPECT_TRUE(parse_potential(json{{"kind", "zero"}}).is_zero());
    EXPECT_EQ(parse_potential(json::parse(R"({"kind":"gaussian_truncated","v0":1,"width":0.5,"support_radius":2})"))
                  .support_radius(),
              2.0);
    EXPECT_EQ(parse_potential(json::parse(R"({"kind":"tabulated","grid":[0,1],"values":[2,0]})")).max_value(), 2.0);
    EXPECT_THROW(parse_potential(json{{"kind", "soft_sphere"}, {"v0", 1}}), InvalidArgument);
    EXPECT_THROW(parse_potential(json{{"kind", "hard_core"}}), InvalidArgument);
}
