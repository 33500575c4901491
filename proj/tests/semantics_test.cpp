#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "envnav/eval/kernels.hpp"
#include "envnav/eval/semantics.hpp"
#include "test_support.hpp"

namespace envnav::eval {
namespace {

using lang::BinaryOp;
using testing::F;
using testing::kAllLogic;
using testing::M;
using testing::T;
using testing::U;

// Rows and columns ordered F, T, M, U.
constexpr L kAnd[4][4] = {{F, F, F, F}, {F, T, M, U}, {F, M, M, U}, {F, U, U, U}};
constexpr L kOr[4][4] = {{F, T, M, U}, {T, T, T, T}, {M, T, M, U}, {U, T, U, U}};
constexpr L kImplies[4][4] = {{T, T, T, T}, {F, T, M, U}, {M, T, M, U}, {U, T, U, U}};
constexpr L kNot[4] = {T, F, M, U};

int idx(L v) { return static_cast<int>(v); }

TEST(Logic, TruthTables) {
  for (L a : kAllLogic) {
    EXPECT_EQ(logic_not(a), kNot[idx(a)]);
    for (L b : kAllLogic) {
      EXPECT_EQ(logic_and(a, b), kAnd[idx(a)][idx(b)]) << to_string(a) << " AND " << to_string(b);
      EXPECT_EQ(logic_or(a, b), kOr[idx(a)][idx(b)]) << to_string(a) << " OR " << to_string(b);
      EXPECT_EQ(logic_implies(a, b), kImplies[idx(a)][idx(b)]) << to_string(a) << " IMPLIES " << to_string(b);
    }
  }
}

TEST(Logic, TableExamples) {
  EXPECT_EQ(logic_and(F, U), F);
  EXPECT_EQ(logic_and(T, M), M);
  EXPECT_EQ(logic_ite(M, T, F), M);
  EXPECT_EQ(logic_ite(U, T, F), U);
  EXPECT_EQ(logic_ite(T, M, F), M);
  EXPECT_EQ(logic_ite(F, T, U), U);
}

TEST(Logic, Identities) {
  for (L a : kAllLogic) {
    EXPECT_EQ(logic_not(logic_not(a)), a);
    for (L b : kAllLogic) {
      EXPECT_EQ(logic_not(logic_and(a, b)), logic_or(logic_not(a), logic_not(b)));
      EXPECT_EQ(logic_not(logic_or(a, b)), logic_and(logic_not(a), logic_not(b)));
      EXPECT_EQ(logic_implies(a, b), logic_or(logic_not(a), b));
      EXPECT_EQ(logic_and(a, b), logic_and(b, a));
      EXPECT_EQ(logic_or(a, b), logic_or(b, a));
      for (L c : kAllLogic) {
        EXPECT_EQ(logic_and(logic_and(a, b), c), logic_and(a, logic_and(b, c)));
        EXPECT_EQ(logic_or(logic_or(a, b), c), logic_or(a, logic_or(b, c)));
      }
    }
  }
}

TEST(Logic, CombineChecksArity) {
  std::vector<L> two{T, M};
  EXPECT_EQ(combine_logic(LogicOp::And, two), M);
  EXPECT_EQ(combine_logic(LogicOp::Or, two), T);
  EXPECT_EQ(combine_logic(LogicOp::Implies, two), M);
  std::vector<L> three{U, T, F};
  EXPECT_EQ(combine_logic(LogicOp::Ite, three), U);
  std::vector<L> one{M};
  EXPECT_EQ(combine_logic(LogicOp::Not, one), M);
  EXPECT_THROW(combine_logic(LogicOp::Not, two), std::invalid_argument);
  EXPECT_THROW(combine_logic(LogicOp::And, one), std::invalid_argument);
  EXPECT_THROW(combine_logic(LogicOp::Ite, two), std::invalid_argument);
}

TEST(Arith, Propagation) {
  auto n = NumericSample::of;
  auto miss = NumericSample::missing();
  auto undef = NumericSample::undefined();
  EXPECT_EQ(arith(BinaryOp::Add, n(16.0), n(19.2)), n(35.2));
  EXPECT_EQ(arith(BinaryOp::Add, miss, n(1)), miss);
  EXPECT_EQ(arith(BinaryOp::Mul, miss, undef), undef);
  EXPECT_EQ(arith(BinaryOp::Div, n(1), n(0)), undef);
  EXPECT_EQ(arith(BinaryOp::Div, n(0), n(0)), undef);
  EXPECT_EQ(arith(BinaryOp::Mul, n(1e308), n(10)), undef);
  EXPECT_EQ(compare(BinaryOp::Lt, n(2), n(3)), T);
  EXPECT_EQ(compare(BinaryOp::Ge, n(2), n(3)), F);
  EXPECT_EQ(compare(BinaryOp::Eq, miss, n(3)), M);
  EXPECT_EQ(compare(BinaryOp::Ne, miss, undef), U);
  EXPECT_EQ(compare_logic(BinaryOp::Eq, T, T), T);
  EXPECT_EQ(compare_logic(BinaryOp::Ne, T, F), T);
  EXPECT_EQ(compare_logic(BinaryOp::Eq, M, T), M);
  EXPECT_TRUE(NumericSample::of(NAN).is_undefined());
  EXPECT_TRUE(NumericSample::of(INFINITY).is_undefined());
}

TEST(Arith, LibraryFunctions) {
  auto n = NumericSample::of;
  std::vector<NumericSample> args{n(3), n(-1), n(4)};
  EXPECT_EQ(library_call(lang::LibraryFn::Maximum, args), n(4));
  EXPECT_EQ(library_call(lang::LibraryFn::Minimum, args), n(-1));
  EXPECT_EQ(library_call(lang::LibraryFn::Sum, args), n(6));
  EXPECT_EQ(library_call(lang::LibraryFn::Average, args), n(2));
  args.push_back(NumericSample::missing());
  EXPECT_TRUE(library_call(lang::LibraryFn::Maximum, args).is_missing());
  args.push_back(NumericSample::undefined());
  EXPECT_TRUE(library_call(lang::LibraryFn::Sum, args).is_undefined());
  EXPECT_THROW(library_call(lang::LibraryFn::Sum, {}), std::invalid_argument);
}

// The OpenMP kernels must reproduce the serial reference bit for bit.
class KernelEquivalence : public ::testing::TestWithParam<std::size_t> {};

TEST_P(KernelEquivalence, MatchesSerial) {
  using kernels::Backend;
  const std::size_t n = GetParam();
  std::mt19937 rng(static_cast<std::uint32_t>(n) + 1);
  std::vector<L> a(n), b(n), c(n);
  std::vector<NumericSample> x(n), y(n), z(n);
  std::vector<std::uint8_t> mask(n);
  for (std::size_t k = 0; k < n; ++k) {
    a[k] = testing::random_logic(rng);
    b[k] = testing::random_logic(rng);
    c[k] = testing::random_logic(rng);
    x[k] = testing::random_numeric(rng, -5, 5);
    y[k] = testing::random_numeric(rng, -5, 5);
    z[k] = k % 17 == 0 ? NumericSample::of(0.0) : testing::random_numeric(rng, -5, 5);
    mask[k] = static_cast<std::uint8_t>(rng() % 4 == 0);
  }
  auto both_logic = [&](auto&& fn) {
    std::vector<L> s(n), p(n);
    fn(Backend::Serial, std::span<L>(s));
    fn(Backend::OpenMP, std::span<L>(p));
    EXPECT_EQ(s, p);
    return s;
  };
  auto both_numeric = [&](auto&& fn) {
    std::vector<NumericSample> s(n), p(n);
    fn(Backend::Serial, std::span<NumericSample>(s));
    fn(Backend::OpenMP, std::span<NumericSample>(p));
    EXPECT_EQ(s, p);
    return s;
  };

  for (BinaryOp op : {BinaryOp::And, BinaryOp::Or, BinaryOp::Implies, BinaryOp::Eq, BinaryOp::Ne}) {
    auto out = both_logic([&](Backend be, std::span<L> o) { kernels::logic_binary(be, op, a, b, o); });
    for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(out[k], apply_logic(op, a[k], b[k]));
  }
  auto nots = both_logic([&](Backend be, std::span<L> o) { kernels::logic_not(be, a, o); });
  for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(nots[k], logic_not(a[k]));
  for (BinaryOp op : {BinaryOp::Add, BinaryOp::Sub, BinaryOp::Mul, BinaryOp::Div}) {
    auto out = both_numeric([&](Backend be, std::span<NumericSample> o) { kernels::arith(be, op, x, z, o); });
    for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(out[k], arith(op, x[k], z[k]));
  }
  for (BinaryOp op : {BinaryOp::Lt, BinaryOp::Le, BinaryOp::Gt, BinaryOp::Ge, BinaryOp::Eq, BinaryOp::Ne}) {
    auto out = both_logic([&](Backend be, std::span<L> o) { kernels::compare(be, op, x, y, o); });
    for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(out[k], compare(op, x[k], y[k]));
  }
  auto ite = both_logic([&](Backend be, std::span<L> o) { kernels::ite_logic(be, a, b, c, o); });
  auto ite_open = both_logic([&](Backend be, std::span<L> o) { kernels::ite_logic(be, a, b, {}, o); });
  auto ite_num = both_numeric([&](Backend be, std::span<NumericSample> o) { kernels::ite_numeric(be, a, x, y, o); });
  for (std::size_t k = 0; k < n; ++k) {
    ASSERT_EQ(ite[k], logic_ite(a[k], b[k], c[k]));
    ASSERT_EQ(ite_open[k], logic_ite(a[k], b[k], T));
    ASSERT_EQ(ite_num[k], numeric_ite(a[k], x[k], y[k]));
  }
  std::vector<kernels::Numeric> args{x, y, z};
  for (auto fn : {lang::LibraryFn::Maximum, lang::LibraryFn::Minimum, lang::LibraryFn::Sum, lang::LibraryFn::Average}) {
    auto out = both_numeric([&](Backend be, std::span<NumericSample> o) { kernels::library(be, fn, args, o); });
    for (std::size_t k = 0; k < n; ++k) {
      NumericSample row[] = {x[k], y[k], z[k]};
      ASSERT_EQ(out[k], library_call(fn, row));
    }
  }
  auto masked = both_logic([&](Backend be, std::span<L> o) {
    std::copy(a.begin(), a.end(), o.begin());
    kernels::mask_missing(be, mask, o);
  });
  for (std::size_t k = 0; k < n; ++k) ASSERT_EQ(masked[k], mask[k] ? M : a[k]);
}

INSTANTIATE_TEST_SUITE_P(Sizes, KernelEquivalence, ::testing::Values(0, 1, 7, 1000, 40000));

TEST(Kernels, LengthMismatchThrows) {
  std::vector<L> a(3), b(4), out(3);
  EXPECT_THROW(kernels::logic_binary(kernels::Backend::Serial, BinaryOp::And, a, b, out), std::invalid_argument);
}

}  // namespace
}  // namespace envnav::eval
