#include <bit>
#include <random>

#include <gtest/gtest.h>

#include "spikegate/int_arith.hpp"
#include "spikegate/unit.hpp"

using namespace spikegate;

namespace {

using Build = std::function<std::vector<Word>(Circuit&, const std::vector<Word>&)>;

std::unique_ptr<Unit> make_unit(std::vector<unsigned> in, const Build& build, bool fold = true) {
    Netlist nl;
    Circuit c(nl, fold);
    std::vector<Word> ins;
    for (unsigned w : in) ins.push_back(c.input_word(w));
    std::vector<Word> outs = build(c, ins);
    std::vector<unsigned> ow;
    for (auto& o : outs) {
        c.output(o);
        ow.push_back(static_cast<unsigned>(o.size()));
    }
    return std::make_unique<Unit>(std::move(nl), std::move(in), std::move(ow));
}

std::uint64_t mask(unsigned w) { return w >= 64 ? ~0ull : (1ull << w) - 1; }

AddResult (*const kAdders[])(Circuit&, const Word&, const Word&, Wire) = {ripple_add, pg_carry_chain};

}  // namespace

TEST(FullAdder, Exhaustive) {
    auto u = make_unit({1, 1, 1}, [](Circuit& c, const std::vector<Word>& in) {
        auto r = full_adder(c, in[0][0], in[1][0], in[2][0]);
        return std::vector<Word>{{r.sum}, {r.carry}};
    });
    EXPECT_EQ(u->netlist().neuron_count(), 13u);
    Lanes a, b, ci;
    for (int m = 0; m < 8; ++m) {
        a.push_back(m & 1);
        b.push_back((m >> 1) & 1);
        ci.push_back((m >> 2) & 1);
    }
    auto out = u->run({a, b, ci});
    for (int m = 0; m < 8; ++m) {
        unsigned s = a[m] + b[m] + ci[m];
        EXPECT_EQ(out[0][m], s & 1);
        EXPECT_EQ(out[1][m], s >> 1);
    }
}

TEST(Adders, FourBitExhaustiveBothCarries) {
    for (auto adder : kAdders) {
        auto u = make_unit({4, 4, 1}, [adder](Circuit& c, const std::vector<Word>& in) {
            auto r = adder(c, in[0], in[1], in[2][0]);
            return std::vector<Word>{r.sum, {r.carry}};
        });
        Lanes a, b, ci;
        for (unsigned m = 0; m < 512; ++m) {
            a.push_back(m & 15);
            b.push_back((m >> 4) & 15);
            ci.push_back(m >> 8);
        }
        auto out = u->run({a, b, ci});
        for (unsigned m = 0; m < 512; ++m) {
            std::uint64_t s = a[m] + b[m] + ci[m];
            ASSERT_EQ(out[0][m], s & 15);
            ASSERT_EQ(out[1][m], s >> 4);
        }
    }
}

TEST(Adders, SevenPlusNineOverflows) {
    auto u = make_unit({4, 4}, [](Circuit& c, const std::vector<Word>& in) {
        auto r = ripple_add(c, in[0], in[1], kLow);
        return std::vector<Word>{r.sum, {r.carry}};
    });
    auto out = u->run({{7}, {9}});
    EXPECT_EQ(out[0][0], 0u);
    EXPECT_EQ(out[1][0], 1u);
}

TEST(Adders, PgCarryInOnly) {
    auto u = make_unit({4, 4, 1}, [](Circuit& c, const std::vector<Word>& in) {
        return std::vector<Word>{pg_carry_chain(c, in[0], in[1], in[2][0]).sum};
    });
    EXPECT_EQ(u->run({{0}, {0}, {1}})[0][0], 1u);
}

TEST(Adders, TwentyEightBitRandom) {
    std::mt19937_64 rng(28);
    Lanes a, b, ci;
    for (int i = 0; i < 10000; ++i) {
        a.push_back(rng() & mask(28));
        b.push_back(rng() & mask(28));
        ci.push_back(rng() & 1);
    }
    Lanes ref_sum;
    for (auto adder : kAdders) {
        auto u = make_unit({28, 28, 1}, [adder](Circuit& c, const std::vector<Word>& in) {
            auto r = adder(c, in[0], in[1], in[2][0]);
            return std::vector<Word>{r.sum, {r.carry}};
        });
        auto out = u->run({a, b, ci});
        for (int i = 0; i < 10000; ++i) {
            std::uint64_t s = a[i] + b[i] + ci[i];
            ASSERT_EQ(out[0][i], s & mask(28));
            ASSERT_EQ(out[1][i], s >> 28);
        }
        if (ref_sum.empty())
            ref_sum = out[0];
        else
            EXPECT_EQ(ref_sum, out[0]);
    }
}

TEST(Adders, NeuronCountsAndDepth) {
    for (unsigned n : {1u, 2u, 4u, 8u, 28u}) {
        auto build = [](AddResult (*f)(Circuit&, const Word&, const Word&, Wire)) {
            return [f](Circuit& c, const std::vector<Word>& in) {
                auto r = f(c, in[0], in[1], in[2][0]);
                return std::vector<Word>{r.sum, {r.carry}};
            };
        };
        auto rip = make_unit({n, n, 1}, build(ripple_add));
        auto pg = make_unit({n, n, 1}, build(pg_carry_chain));
        EXPECT_EQ(rip->netlist().neuron_count(), 13u * n);
        if (n >= 2) EXPECT_LT(pg->netlist().depth(), rip->netlist().depth()) << n;
    }
}

TEST(Adders, WidthMismatch) {
    Netlist nl;
    Circuit c(nl);
    Word a = c.input_word(4), b = c.input_word(3);
    EXPECT_THROW(ripple_add(c, a, b, kLow), std::invalid_argument);
    EXPECT_THROW(pg_carry_chain(c, a, b, kLow), std::invalid_argument);
    EXPECT_THROW(compare(c, a, b), std::invalid_argument);
}

TEST(Subtract, EightBitExhaustive) {
    auto u = make_unit({8, 8}, [](Circuit& c, const std::vector<Word>& in) {
        auto r = subtract(c, in[0], in[1]);
        return std::vector<Word>{r.sum, {r.carry}, {unsigned_ge(c, in[0], in[1])}};
    });
    Lanes a, b;
    for (unsigned m = 0; m < 65536; ++m) {
        a.push_back(m & 255);
        b.push_back(m >> 8);
    }
    auto out = u->run({a, b});
    for (unsigned m = 0; m < 65536; ++m) {
        ASSERT_EQ(out[0][m], (a[m] - b[m]) & 255);
        ASSERT_EQ(out[1][m], a[m] >= b[m] ? 1u : 0u);
        ASSERT_EQ(out[2][m], out[1][m]);
    }
}

TEST(Compare, Examples) {
    auto u = make_unit({8, 8}, [](Circuit& c, const std::vector<Word>& in) {
        auto r = compare(c, in[0], in[1]);
        return std::vector<Word>{{r.lt}, {r.eq}, {r.gt}};
    });
    auto out = u->run({{5, 3}, {5, 7}});
    EXPECT_EQ(out[1][0], 1u);
    EXPECT_EQ(out[0][0] | out[2][0], 0u);
    EXPECT_EQ(out[0][1], 1u);
    EXPECT_EQ(out[1][1] | out[2][1], 0u);

    std::mt19937_64 rng(8);
    Lanes a, b;
    for (int i = 0; i < 10000; ++i) {
        a.push_back(rng() & 255);
        b.push_back(i % 17 == 0 ? a.back() : rng() & 255);
    }
    out = u->run({a, b});
    for (int i = 0; i < 10000; ++i) {
        ASSERT_EQ(out[0][i], a[i] < b[i] ? 1u : 0u);
        ASSERT_EQ(out[1][i], a[i] == b[i] ? 1u : 0u);
        ASSERT_EQ(out[2][i], a[i] > b[i] ? 1u : 0u);
    }
}

TEST(Shifter, Examples) {
    auto u = make_unit({4, 3}, [](Circuit& c, const std::vector<Word>& in) {
        auto r = shift_right_sticky(c, in[0], in[1]);
        return std::vector<Word>{r.value, {r.sticky}};
    });
    auto out = u->run({{6, 6, 6, 6}, {1, 2, 0, 7}});
    EXPECT_EQ(out[0][0], 3u);
    EXPECT_EQ(out[1][0], 0u);
    EXPECT_EQ(out[0][1], 1u);
    EXPECT_EQ(out[1][1], 1u);
    EXPECT_EQ(out[0][2], 6u);
    EXPECT_EQ(out[1][2], 0u);
    EXPECT_EQ(out[0][3], 0u);
    EXPECT_EQ(out[1][3], 1u);
}

TEST(Shifter, StickyPropertyTwentyEightBit) {
    auto u = make_unit({28, 6}, [](Circuit& c, const std::vector<Word>& in) {
        auto r = shift_right_sticky(c, in[0], in[1]);
        return std::vector<Word>{r.value, {r.sticky}, shift_left(c, in[0], in[1])};
    });
    std::mt19937_64 rng(6);
    Lanes x, k;
    for (int i = 0; i < 20000; ++i) {
        std::uint64_t v = rng() & mask(28);
        if (i % 3 == 0) v &= ~mask(rng() % 28);  // trailing zeros make sticky=0 cases common
        x.push_back(v);
        k.push_back(rng() & 63);
    }
    auto out = u->run({x, k});
    for (int i = 0; i < 20000; ++i) {
        std::uint64_t r = k[i] >= 28 ? 0 : x[i] >> k[i];
        std::uint64_t lost = k[i] >= 28 ? x[i] : x[i] & mask(k[i]);
        std::uint64_t l = k[i] >= 28 ? 0 : (x[i] << k[i]) & mask(28);
        ASSERT_EQ(out[0][i], r);
        ASSERT_EQ(out[1][i], lost != 0 ? 1u : 0u);
        ASSERT_EQ(out[2][i], l);
    }
}

TEST(LeadingZeros, ExamplesAndRandom) {
    for (unsigned w : {1u, 4u, 5u, 24u, 28u, 48u}) {
        auto u = make_unit({w}, [](Circuit& c, const std::vector<Word>& in) {
            return std::vector<Word>{leading_zero_count(c, in[0])};
        });
        std::mt19937_64 rng(w);
        Lanes x{0, 1, mask(w)};
        for (int i = 0; i < 5000; ++i) x.push_back((rng() & mask(w)) >> (rng() % w));
        auto out = u->run({x});
        for (std::size_t i = 0; i < x.size(); ++i) {
            unsigned ref = x[i] == 0 ? w : std::countl_zero(x[i]) - (64 - w);
            ASSERT_EQ(out[0][i], ref) << "w=" << w << " x=" << x[i];
        }
    }
}

TEST(Multiply, FourByFourExhaustiveAndZero) {
    auto u = make_unit({4, 4}, [](Circuit& c, const std::vector<Word>& in) {
        return std::vector<Word>{array_multiply(c, in[0], in[1])};
    });
    EXPECT_EQ(u->out_widths()[0], 8u);
    Lanes a, b;
    for (unsigned m = 0; m < 256; ++m) {
        a.push_back(m & 15);
        b.push_back(m >> 4);
    }
    auto out = u->run({a, b});
    for (unsigned m = 0; m < 256; ++m) ASSERT_EQ(out[0][m], a[m] * b[m]);
}

TEST(Multiply, EightByEightExhaustive) {
    auto u = make_unit({8, 8}, [](Circuit& c, const std::vector<Word>& in) {
        return std::vector<Word>{array_multiply(c, in[0], in[1])};
    });
    Lanes a, b;
    for (unsigned m = 0; m < 65536; ++m) {
        a.push_back(m & 255);
        b.push_back(m >> 8);
    }
    auto out = u->run({a, b});
    for (unsigned m = 0; m < 65536; ++m) ASSERT_EQ(out[0][m], a[m] * b[m]);
}

TEST(Multiply, TwentyFourBitRandom) {
    auto u = make_unit({24, 24}, [](Circuit& c, const std::vector<Word>& in) {
        return std::vector<Word>{array_multiply(c, in[0], in[1])};
    });
    std::mt19937_64 rng(24);
    Lanes a{0, mask(24)}, b{12345, mask(24)};
    for (int i = 0; i < 10000; ++i) {
        a.push_back(rng() & mask(24));
        b.push_back(rng() & mask(24));
    }
    auto out = u->run({a, b});
    for (std::size_t i = 0; i < a.size(); ++i) ASSERT_EQ(out[0][i], a[i] * b[i]);
}

TEST(WordHelpers, AddConstNegateIncrement) {
    auto u = make_unit({10, 1}, [](Circuit& c, const std::vector<Word>& in) {
        return std::vector<Word>{add_const(c, in[0], -37), negate(c, in[0]), increment(c, in[0], in[1][0]),
                                 {is_zero(c, in[0])}, {equals_const(c, in[0], 513)}};
    });
    std::mt19937_64 rng(10);
    Lanes x{0, 513, 1023}, inc{1, 0, 1};
    for (int i = 0; i < 3000; ++i) {
        x.push_back(rng() & 1023);
        inc.push_back(rng() & 1);
    }
    auto out = u->run({x, inc});
    for (std::size_t i = 0; i < x.size(); ++i) {
        ASSERT_EQ(out[0][i], (x[i] - 37) & 1023);
        ASSERT_EQ(out[1][i], (0 - x[i]) & 1023);
        ASSERT_EQ(out[2][i], (x[i] + inc[i]) & 1023);
        ASSERT_EQ(out[3][i], x[i] == 0 ? 1u : 0u);
        ASSERT_EQ(out[4][i], x[i] == 513 ? 1u : 0u);
    }
}

TEST(Units, SpikingEvaluatorAgreesAtZeroNoise) {
    auto u = make_unit({6, 6}, [](Circuit& c, const std::vector<Word>& in) {
        return std::vector<Word>{array_multiply(c, in[0], in[1])};
    });
    Lanes a, b;
    for (unsigned m = 0; m < 4096; ++m) {
        a.push_back(m & 63);
        b.push_back(m >> 6);
    }
    EXPECT_EQ(u->run({a, b}), u->run_spiking({a, b}, Physics{}, 99));
}
