#include <gtest/gtest.h>

#include "spikegate/verify.hpp"

using namespace spikegate;

TEST(Verify, EveryOpWithinBudget) {
    for (const auto& op : verify_ops()) {
        auto r = verify_op(op, 512, 3);
        EXPECT_TRUE(r.pass) << op << " max_ulp " << r.report.max_ulp << " zero " << r.report.zero_ulp_rate;
        EXPECT_GE(r.samples, 512u);
        EXPECT_FALSE(r.reference.empty());
    }
}

TEST(Verify, FormatsAndCorrectionFlag) {
    for (Precision p : {Precision::FP8_E4M3, Precision::FP16}) {
        VerifyOptions o;
        o.format = p;
        EXPECT_EQ(verify_op("fp_mul", 2000, 1, o).report.max_ulp, 0u);
    }
    VerifyOptions loose;
    loose.exact_rounding = false;
    auto r = verify_op("fp_div", 2000, 1, loose);
    EXPECT_EQ(r.budget, 1u);
    EXPECT_TRUE(r.pass);
    EXPECT_EQ(verify_op("fp_div", 10, 1).budget, 0u);
}

TEST(Verify, LinearReportsBothReferences) {
    auto r = verify_op("linear", 1024, 1);
    ASSERT_TRUE(r.has_same_order);
    EXPECT_EQ(r.same_order.max_ulp, 0u);
    EXPECT_EQ(r.samples, 1024u);
}

TEST(Verify, Errors) {
    EXPECT_THROW(verify_op("nosuch", 10, 1), std::invalid_argument);
    EXPECT_THROW(verify_op("fp_add", 0, 1), std::invalid_argument);
    VerifyOptions o;
    o.format = Precision::FP64;
    EXPECT_THROW(verify_op("fp_add", 10, 1, o), std::invalid_argument);
}

TEST(Verify, CsvDeterministic) {
    auto a = verify_csv({verify_op("silu", 256, 9)});
    EXPECT_EQ(a, verify_csv({verify_op("silu", 256, 9)}));
    EXPECT_EQ(a.rfind("op,samples,seed,max_ulp", 0), 0u);
}
