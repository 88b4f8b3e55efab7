#include "pcl/decoder.hpp"

#include <gtest/gtest.h>

#include <memory>

#include "pcl/errors.hpp"
#include "pcl/schemes.hpp"
#include "pcl/simulation.hpp"

namespace pcl {
namespace {

// Every user of every demand matrix recovers its files bit for bit.
void expect_all_decode(const Scheme& s, std::size_t spu = 2) {
  Simulation sim(s, spu, 31);
  const auto info = sim.info();
  std::uint64_t stream = 0;
  for (const auto& d : enumerate_demand_matrices(s.K(), s.N(), s.L())) {
    const auto del = sim.deliver(d, stream++);
    for (int k = 1; k <= s.K(); ++k) {
      auto rep = decode_user(k, sim.cache(k), d.of(k), del.packet, info);
      ASSERT_TRUE(verify_against(rep, sim.library()))
          << s.description() << " D=" << to_string(d) << " user " << k
          << (rep.files.empty() ? "" : " " + rep.files.front().error);
      ASSERT_TRUE(rep.all_success());
      ASSERT_EQ(rep.files.size(), d.of(k).size());
      for (std::size_t i = 0; i < rep.files.size(); ++i) ASSERT_EQ(rep.files[i].data, sim.library().file(d.of(k)[i]));
    }
  }
}

TEST(Decode, MdsAllCornersAllDemands) {
  for (int t = 0; t <= 2; ++t) expect_all_decode(MdsScheme(3, 6, 2, t), 1);
  for (int t = 0; t <= 1; ++t) expect_all_decode(MdsScheme(2, 3, 1, t));
  expect_all_decode(MdsScheme(4, 3, 1, 2), 1);
}

TEST(Decode, VirtualUser) {
  expect_all_decode(VirtualUserScheme(2, 3, 1, 3, true, kDefaultSubpacketizationCap), 1);
  for (int t = 1; t <= 4; ++t) {
    expect_all_decode(VirtualUserScheme(2, 2, 1, t, true, kDefaultSubpacketizationCap));
    expect_all_decode(VirtualUserScheme(2, 2, 1, t, false, kDefaultSubpacketizationCap));
  }
  expect_all_decode(VirtualUserScheme(2, 3, 2, 2, true, kDefaultSubpacketizationCap), 1);
}

TEST(Decode, Corner) {
  expect_all_decode(CornerScheme(2, 3, 1));
  expect_all_decode(CornerScheme(3, 4, 2), 1);
}

TEST(Decode, ManAndBaseline) {
  for (int tp = 0; tp <= 3; ++tp) {
    expect_all_decode(ManScheme(3, 3, 1, tp, false, kDefaultSubpacketizationCap));
    expect_all_decode(ManScheme(3, 3, 1, tp, true, kDefaultSubpacketizationCap));
  }
  expect_all_decode(ManScheme(3, 4, 2, 1, false, kDefaultSubpacketizationCap));
  expect_all_decode(BaselineScheme(2, 3, 1, Rational(3, 2)));
  expect_all_decode(BaselineScheme(3, 3, 2, Rational(0)));
}

TEST(Decode, PieceCountsForThreeUsersSixFiles) {
  MdsScheme s(3, 6, 2, 1);
  Simulation sim(s, 4, 5);
  const DemandMatrix d{{{1, 2}, {3, 4}, {5, 6}}};
  const auto del = sim.deliver(d);
  for (int k = 1; k <= 3; ++k) {
    auto rep = decode_user(k, sim.cache(k), d.of(k), del.packet, sim.info());
    ASSERT_TRUE(verify_against(rep, sim.library()));
    for (const auto& f : rep.files) {
      EXPECT_EQ(f.pieces_from_cache, 4u);
      EXPECT_EQ(f.pieces_from_delivery, 3u);
    }
    // Six unknown pieces, two rows per message.
    EXPECT_EQ(rep.messages_consumed, 3u);
  }
}

TEST(Decode, WorksUnderAnyPlacement) {
  MdsScheme s(2, 3, 1, 0);
  Rng r(77);
  const DemandMatrix d{{{3}, {1}}};
  for (int i = 0; i < 20; ++i) {
    Simulation sim(s, 2, 9, draw_placement(s, r));
    const auto del = sim.deliver(d);
    for (int k = 1; k <= 2; ++k) {
      auto rep = decode_user(k, sim.cache(k), d.of(k), del.packet, sim.info());
      ASSERT_TRUE(verify_against(rep, sim.library()));
    }
  }
}

TEST(Decode, MissingMessageNamesTheFile) {
  MdsScheme s(2, 3, 1, 1);
  Simulation sim(s, 2, 3);
  const DemandMatrix d{{{1}, {2}}};
  auto del = sim.deliver(d);
  del.packet.messages.clear();
  auto rep = decode_user(1, sim.cache(1), d.of(1), del.packet, sim.info());
  EXPECT_FALSE(rep.all_success());
  ASSERT_EQ(rep.files.size(), 1u);
  EXPECT_EQ(rep.files[0].error, "file 1: have 2 of the 3 pieces needed");
  EXPECT_FALSE(verify_against(rep, sim.library()));
}

TEST(Decode, CorruptedPayloadIsNotBitExact) {
  MdsScheme s(2, 3, 1, 0);
  Simulation sim(s, 2, 3);
  const DemandMatrix d{{{1}, {2}}};
  auto del = sim.deliver(d);
  for (auto& m : del.packet.messages) m.payload[0][0] ^= 1;
  auto rep = decode_user(1, sim.cache(1), d.of(1), del.packet, sim.info());
  EXPECT_TRUE(rep.all_success());
  EXPECT_FALSE(verify_against(rep, sim.library()));
  EXPECT_FALSE(rep.bit_exact);
}

TEST(Decode, SingularCoefficientsAreALogicError) {
  MdsScheme s(2, 3, 1, 1);
  Simulation sim(s, 2, 3);
  const DemandMatrix d{{{1}, {2}}};
  auto del = sim.deliver(d);
  auto& m = del.packet.messages.at(0);
  for (std::size_t c = 0; c < m.coefficients.cols(); ++c) m.coefficients.at(0, c) = 0;
  EXPECT_THROW(decode_user(1, sim.cache(1), d.of(1), del.packet, sim.info()), std::logic_error);
}

TEST(Decode, DecodingReadsOnlyItsInputs) {
  // The same inputs give the same report, whatever other users hold.
  MdsScheme s(3, 3, 1, 1);
  Simulation sim(s, 2, 3);
  const DemandMatrix d{{{1}, {1}, {2}}};
  const auto del = sim.deliver(d);
  const auto a = decode_user(2, sim.cache(2), d.of(2), del.packet, sim.info());
  const auto b = decode_user(2, sim.cache(2), d.of(2), del.packet, sim.info());
  EXPECT_EQ(a, b);
  PublicSchemeInfo bad = sim.info();
  bad.field = nullptr;
  EXPECT_THROW(decode_user(2, sim.cache(2), d.of(2), del.packet, bad), std::invalid_argument);
}

}  // namespace
}  // namespace pcl
