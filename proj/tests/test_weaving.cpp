#include <cmath>

#include <gtest/gtest.h>

#include "test_support.hpp"
#include "wfl/wfl.hpp"

using namespace wfl;
using testing_support::doubled_onb;
using testing_support::random_vector;
using testing_support::swapped_onb;
using testing_support::to_oracle;
using testing_support::vec;

namespace {

void expect_code(ErrorCode expected, const auto& fn, std::optional<std::uint64_t> witness = std::nullopt) {
  try {
    fn();
    ADD_FAILURE() << "expected " << to_string(expected);
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), expected) << e.what();
    if (witness) {
      ASSERT_TRUE(e.witness().has_value());
      EXPECT_EQ(*e.witness(), *witness);
    }
  }
}

ComplexMatrix diag2(double a, double b) {
  ComplexMatrix m = ComplexMatrix::Zero(2, 2);
  m(0, 0) = a;
  m(1, 1) = b;
  return m;
}

}  // namespace

TEST(Weave, Examples) {
  const FrameFamily phi = gen_random(3, 5, 1);
  const FrameFamily psi = gen_random(3, 5, 2);
  EXPECT_EQ(weave(phi, psi, PartitionMask::all(5)), phi);
  EXPECT_EQ(weave(phi, psi, PartitionMask::none(5)), psi);
  const FrameFamily w = weave(gen_onb(2), doubled_onb(2), PartitionMask::of(2, {0}));
  EXPECT_EQ(w, FrameFamily(2, {vec({1, 0}), vec({0, 2})}));
  expect_code(ErrorCode::ShapeMismatch, [&] { weave(phi, gen_random(3, 6, 1), PartitionMask::all(5)); });
  expect_code(ErrorCode::ShapeMismatch, [&] { weave(phi, gen_random(2, 5, 1), PartitionMask::all(5)); });
  expect_code(ErrorCode::ShapeMismatch, [&] { weave(phi, psi, PartitionMask::all(4)); });
}

TEST(WeavingContext, OnbSelfWeaving) {
  for (std::uint64_t bits = 0; bits < 4; ++bits) {
    const PartitionMask sigma(2, bits);
    const WeavingContext ctx = weaving_context(gen_onb(2), gen_onb(2), sigma);
    EXPECT_EQ(ctx.frame_operator(), identity(2));
    EXPECT_EQ(ctx.sigma_operator(), diag2(bits & 1U ? 1 : 0, bits & 2U ? 1 : 0));
    EXPECT_TRUE(ctx.is_parseval());
  }
}

TEST(WeavingContext, SwappedBasisIsNotWovenAtSigma0) {
  expect_code(ErrorCode::NotWovenAtPartition,
              [] { weaving_context(gen_onb(2), swapped_onb(), PartitionMask::of(2, {0})); }, 1);
}

TEST(WeavingContext, OnbVersusDoubled) {
  const WeavingContext ctx = weaving_context(gen_onb(2), doubled_onb(2), PartitionMask::of(2, {0}));
  EXPECT_EQ(ctx.frame_operator(), diag2(1, 4));
  EXPECT_LE((ctx.inverse() - diag2(1, 0.25)).norm(), 1e-15);
  EXPECT_LE((ctx.sqrt() - diag2(1, 2)).norm(), 1e-15);
  EXPECT_LE((ctx.inv_sqrt() - diag2(1, 0.5)).norm(), 1e-15);
  EXPECT_NEAR(ctx.bounds().lower, 1.0, 1e-15);
  EXPECT_NEAR(ctx.bounds().upper, 4.0, 1e-15);
  EXPECT_FALSE(ctx.tight_constant().has_value());
}

TEST(WeavingContext, CachedOperatorsMatchOracle) {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const WovenPair pair = gen_woven_pair(3, 6, 0.2, seed);
    const PartitionMask sigma(6, (seed * 13) % 64);
    const WeavingContext ctx(pair.phi, pair.psi, sigma);
    const double scale = ctx.frame_operator().norm();
    EXPECT_LE((ctx.sigma_operator() + ctx.sigma_c_operator() - ctx.frame_operator()).norm(), 1e-12 * scale);
    EXPECT_LE((ctx.frame_operator() - frame_operator(ctx.woven())).norm(), 0.0);

    const oracle::Family phi = to_oracle(pair.phi), psi = to_oracle(pair.psi);
    const ComplexVector f = random_vector(seed, 3);
    const oracle::Vec of = to_oracle(f);
    const oracle::Vec ss = oracle::synth(phi, of, [&](std::size_t i) { return sigma.contains(i); });
    const oracle::Vec sc = oracle::synth(psi, of, [&](std::size_t i) { return !sigma.contains(i); });
    const ComplexVector s_f = ctx.sigma_operator() * f;
    const ComplexVector c_f = ctx.sigma_c_operator() * f;
    for (std::size_t j = 0; j < 3; ++j) {
      EXPECT_LE(std::abs(s_f(static_cast<Eigen::Index>(j)) - ss[j]), 1e-12 * scale);
      EXPECT_LE(std::abs(c_f(static_cast<Eigen::Index>(j)) - sc[j]), 1e-12 * scale);
    }
    // dual vectors against linear solves
    const oracle::Family w = oracle::weave(phi, psi, sigma.bits());
    const oracle::Mat s = oracle::frame_op(w, 3);
    for (std::size_t i = 0; i < 6; ++i) {
      const oracle::Vec x = oracle::solve(s, w[i]);
      for (std::size_t j = 0; j < 3; ++j) {
        EXPECT_LE(std::abs(ctx.dual_vectors()(static_cast<Eigen::Index>(j), static_cast<Eigen::Index>(i)) - x[j]),
                  1e-10);
      }
    }
  }
}

TEST(WeavingContext, TightConstantAndParseval) {
  const WeavingContext merc(gen_mercedes(), gen_mercedes(), PartitionMask::of(3, {1}));
  ASSERT_TRUE(merc.tight_constant().has_value());
  EXPECT_NEAR(*merc.tight_constant(), 1.5, 1e-14);
  EXPECT_FALSE(merc.is_parseval());
  const WeavingContext dft(gen_dft(2, 4), gen_dft(2, 4), PartitionMask(4, 6));
  EXPECT_TRUE(dft.is_parseval());
}

TEST(WovenBounds, Examples) {
  const WovenCertificate onb = woven_bounds_bruteforce(gen_onb(2), gen_onb(2));
  EXPECT_DOUBLE_EQ(onb.lower, 1.0);
  EXPECT_DOUBLE_EQ(onb.upper, 1.0);
  EXPECT_EQ(onb.partitions_checked, 4U);
  EXPECT_TRUE(onb.complete());

  const WovenCertificate two = woven_bounds_bruteforce(gen_onb(2), doubled_onb(2));
  EXPECT_EQ(two.lower, 1.0);
  EXPECT_EQ(two.upper, 4.0);
  // smallest mask attaining each bound: sigma = {0,1} is the ONB (all ones); sigma = {} is 2*ONB
  EXPECT_EQ(two.witness_lower.bits(), 1U);
  EXPECT_EQ(two.witness_upper.bits(), 0U);

  expect_code(ErrorCode::NotWoven, [] { woven_bounds_bruteforce(gen_onb(2), swapped_onb()); }, 1);
}

TEST(WovenBounds, GuardsAndShapes) {
  const FrameFamily big = gen_random(2, 20, 1);
  expect_code(ErrorCode::TooLarge, [&] { woven_bounds_bruteforce(big, big); });
  expect_code(ErrorCode::TooLarge, [] { woven_bounds_bruteforce(gen_onb(3), gen_onb(3), 2); });
  expect_code(ErrorCode::ShapeMismatch, [] { woven_bounds_bruteforce(gen_onb(2), gen_mercedes()); });
}

TEST(WovenBounds, SelfWeavingEqualsFrameBounds) {
  const WovenCertificate merc = woven_bounds_bruteforce(gen_mercedes(), gen_mercedes());
  EXPECT_NEAR(merc.lower, 1.5, 1e-12);
  EXPECT_NEAR(merc.upper, 1.5, 1e-12);
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    const FrameFamily f = gen_random(3, 7, seed);
    const FrameBounds b = frame_bounds(f);
    const WovenCertificate c = woven_bounds_bruteforce(f, f);
    EXPECT_NEAR(c.lower, b.lower, 1e-12 * b.upper);
    EXPECT_NEAR(c.upper, b.upper, 1e-12 * b.upper);
  }
}

TEST(WovenBounds, SymmetricUnderSwap) {
  for (std::uint64_t seed = 0; seed < 8; ++seed) {
    const WovenPair pair = gen_woven_pair(2, 5, 0.3, seed);
    const WovenCertificate ab = woven_bounds_bruteforce(pair.phi, pair.psi);
    const WovenCertificate ba = woven_bounds_bruteforce(pair.psi, pair.phi);
    EXPECT_NEAR(ab.lower, ba.lower, 1e-12 * ab.upper);
    EXPECT_NEAR(ab.upper, ba.upper, 1e-12 * ab.upper);
    EXPECT_EQ(ab.witness_lower.complement(), ba.witness_lower);
  }
}

TEST(WovenBounds, EveryWeavingWithinCertificate) {
  const WovenPair pair = gen_woven_pair(3, 6, 0.3, 11);
  const WovenCertificate c = pair.certificate;
  for (std::uint64_t bits = 0; bits < 64; ++bits) {
    const FrameBounds b = frame_bounds(weave(pair.phi, pair.psi, PartitionMask(6, bits)));
    EXPECT_GE(b.lower, c.lower - 1e-12);
    EXPECT_LE(b.upper, c.upper + 1e-12);
  }
}

TEST(WovenBounds, IndependentOfWorkerCount) {
  const WovenPair pair = gen_woven_pair(3, 9, 0.3, 4);
  const WovenCertificate one = woven_bounds_bruteforce(pair.phi, pair.psi, kDefaultMaxN, 1);
  for (unsigned workers : {2U, 3U, 7U, 600U}) {
    const WovenCertificate many = woven_bounds_bruteforce(pair.phi, pair.psi, kDefaultMaxN, workers);
    EXPECT_EQ(one.lower, many.lower);
    EXPECT_EQ(one.upper, many.upper);
    EXPECT_EQ(one.witness_lower, many.witness_lower);
    EXPECT_EQ(one.witness_upper, many.witness_upper);
    EXPECT_EQ(one.partitions_checked, many.partitions_checked);
  }
  // first failing witness is also worker-independent
  const FrameFamily phi(2, {vec({1, 0}), vec({0, 1}), vec({1, 0}), vec({0, 1})});
  const FrameFamily psi(2, {vec({0, 1}), vec({1, 0}), vec({0, 1}), vec({1, 0})});
  for (unsigned workers : {1U, 3U, 16U}) {
    expect_code(ErrorCode::NotWoven, [&] { woven_bounds_bruteforce(phi, psi, kDefaultMaxN, workers); }, 5);
  }
}

TEST(CanonicalWeavingDual, Examples) {
  const WeavingContext parseval(gen_dft(2, 4), gen_dft(2, 4), PartitionMask(4, 3));
  EXPECT_LE((canonical_weaving_dual(parseval).matrix() - parseval.woven().matrix()).norm(), 1e-14);
  EXPECT_LE(validate_alternate_dual(parseval, parseval.woven()), 1e-10);

  const WeavingContext ctx(gen_onb(2), doubled_onb(2), PartitionMask::of(2, {0}));
  EXPECT_LE((canonical_weaving_dual(ctx).matrix() - diag2(1, 0.5)).norm(), 1e-15);

  const WovenPair pair = gen_woven_pair(3, 6, 0.1, 8);
  for (std::uint64_t bits = 0; bits < 64; bits += 9) {
    const WeavingContext c(pair.phi, pair.psi, PartitionMask(6, bits));
    const FrameFamily dual = canonical_weaving_dual(c);
    EXPECT_LE(validate_alternate_dual(c, dual), 1e-10);
    const ComplexVector f = random_vector(bits, 3);
    // f = sum_sigma <f,phi_i> theta_i + sum_sigma^c <f,psi_i> theta_i
    ComplexVector recon = ComplexVector::Zero(3);
    for (std::size_t i = 0; i < 6; ++i) {
      const FrameFamily& src = c.sigma().contains(i) ? pair.phi : pair.psi;
      recon += inner(f, src.vector(i)) * dual.vector(i);
    }
    EXPECT_LE((recon - f).norm(), 1e-10 * f.norm());
  }
}

TEST(ValidateAlternateDual, ScaledDualResidualIsSqrtD) {
  for (std::size_t d : {2U, 3U, 5U}) {
    const WovenPair pair = gen_woven_pair(d, d + 2, 0.2, d);
    const WeavingContext ctx(pair.phi, pair.psi, PartitionMask(d + 2, 1));
    const FrameFamily doubled = canonical_weaving_dual(ctx).scaled(2.0);
    EXPECT_NEAR(validate_alternate_dual(ctx, doubled), std::sqrt(static_cast<double>(d)), 1e-9);
  }
  const WeavingContext ctx(gen_onb(2), gen_onb(2), PartitionMask(2, 0));
  expect_code(ErrorCode::ShapeMismatch, [&] { validate_alternate_dual(ctx, gen_mercedes()); });
}

TEST(RandomAlternateDual, NoFreedomWhenSquare) {
  const WeavingContext ctx(gen_onb(2), gen_onb(2), PartitionMask(2, 1));
  expect_code(ErrorCode::NoFreedom, [&] { random_alternate_dual(ctx, 1); });
}

TEST(RandomAlternateDual, ValidAndSeedDependent) {
  const WeavingContext dft(gen_dft(2, 4), gen_dft(2, 4), PartitionMask(4, 5));
  const FrameFamily a = random_alternate_dual(dft, 1);
  const FrameFamily b = random_alternate_dual(dft, 2);
  EXPECT_LE(validate_alternate_dual(dft, a), 1e-9);
  EXPECT_LE(validate_alternate_dual(dft, b), 1e-9);
  EXPECT_GE((a.matrix() - b.matrix()).norm(), 1e-3);
  EXPECT_EQ(random_alternate_dual(dft, 1), a);

  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const std::size_t d = 2 + seed % 4;
    const WovenPair pair = gen_woven_pair(d, d + 1 + seed % 4, 0.3, seed);
    const WeavingContext ctx(pair.phi, pair.psi, PartitionMask(pair.phi.size(), seed % 8));
    const FrameFamily alt = random_alternate_dual(ctx, seed);
    EXPECT_LE(validate_alternate_dual(ctx, alt), 1e-9);
    EXPECT_GE((alt.matrix() - ctx.dual_vectors()).norm(), 1e-6);
  }
}
