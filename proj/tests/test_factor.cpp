#include <cmath>

#include "bpn/error.hpp"
#include "bpn/factor.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bpn;
using namespace bpn::testing;

namespace {

VarSpec X = binary_var("X"), Y = binary_var("Y"), Z = binary_var("Z");

Factor random_factor(Rng& rng, std::vector<VarSpec> vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= v.size();
  std::vector<double> t(n);
  for (auto& x : t) x = uniform(rng);
  return Factor::create(vars, t);
}

std::vector<VarSpec> random_vars(Rng& rng, const std::vector<VarSpec>& pool) {
  std::vector<VarSpec> out;
  for (const auto& v : pool)
    if (coin(rng)) out.push_back(v);
  std::shuffle(out.begin(), out.end(), rng);
  return out;
}

}  // namespace

TEST_CASE("factor construction") {
  CostCounters cc;
  Factor trivial = Factor::create({}, {1.0}, &cc);
  CHECK(trivial.size() == 1);
  CHECK(trivial.at({}) == 1.0);
  CHECK(cc.entries_written == 1);

  Factor px = Factor::create({X}, {0.3, 0.7}, &cc);
  CHECK(px.at({{"X", "t"}}) == doctest::Approx(0.3));
  CHECK(px.at({{"X", "f"}}) == doctest::Approx(0.7));
  CHECK(cc.entries_written == 3);

  auto code_of = [](auto&& f) {
    try {
      f();
    } catch (const Error& e) {
      return e.code();
    }
    return ErrorCode::Unsupported;
  };
  CHECK(code_of([] { Factor::create({X}, {0.3}); }) == ErrorCode::LengthMismatch);
  CHECK(code_of([] { Factor::create({X}, {0.3, -0.1}); }) == ErrorCode::NegativeEntry);
  CHECK(code_of([] { Factor::create({X, X}, {1, 1, 1, 1}); }) == ErrorCode::DuplicateVariable);
  CHECK(code_of([] { Factor::unit({Y, Y}); }) == ErrorCode::DuplicateVariable);
}

TEST_CASE("unit factors") {
  CHECK(Factor::unit({}).table() == std::vector<double>{1.0});
  CHECK(Factor::unit({Y}).table() == std::vector<double>{1.0, 1.0});
  CHECK(Factor::unit({Y, Z}).table() == std::vector<double>(4, 1.0));
}

TEST_CASE("projection and compatibility") {
  CHECK(project({{"X", "t"}, {"Y", "f"}}, {"X"}) == Assignment{{"X", "t"}});
  CHECK(project({{"X", "t"}}, {}).empty());
  CHECK(project({{"X", "t"}, {"Y", "f"}, {"Z", "t"}}, {"Y", "Z"}) == Assignment{{"Y", "f"}, {"Z", "t"}});
  CHECK_THROWS_AS(project({{"X", "t"}}, {"Y"}), Error);
  CHECK(compatible({{"X", "t"}, {"Y", "f"}}, {{"Y", "f"}, {"Z", "t"}}));
  CHECK_FALSE(compatible({{"X", "t"}}, {{"X", "f"}}));
}

TEST_CASE("sum out") {
  // Pr(X|Y) with rows Y=t: 0.3/0.7 and Y=f: 0.6/0.4
  Factor cpt = Factor::create({Y, X}, {0.3, 0.7, 0.6, 0.4});
  CostCounters cc;
  Factor s = sum_out(cpt, {"X"}, &cc);
  CHECK(s.names() == std::vector<std::string>{"Y"});
  CHECK(s.table()[0] == doctest::Approx(1.0));
  CHECK(s.table()[1] == doctest::Approx(1.0));
  CHECK(cc.additions == 2);
  CHECK(cc.entries_written == 2);

  Factor scalar = Factor::create({}, {0.5});
  CHECK(sum_out(scalar, {}).table() == scalar.table());

  Factor xy = Factor::create({X, Y}, {0.15, 0.15, 0.35, 0.35});
  Factor sx = sum_out(xy, {"Y"});
  CHECK(sx.names() == std::vector<std::string>{"X"});
  CHECK(sx.table()[0] == doctest::Approx(0.3));
  CHECK(sx.table()[1] == doctest::Approx(0.7));

  CHECK_THROWS_AS(sum_out(xy, {"Z"}), Error);
}

TEST_CASE("product") {
  Factor f = Factor::create({X, Y}, {0.1, 0.2, 0.3, 0.4});
  CHECK(product(f, Factor::unit({Y})).table() == f.table());
  CHECK(product(Factor(), f).table() == f.table());

  CostCounters cc;
  Factor p = product(Factor::create({X}, {0.3, 0.7}), Factor::create({Y}, {0.5, 0.5}), &cc);
  CHECK(p.names() == std::vector<std::string>{"X", "Y"});
  std::vector<double> want{0.15, 0.15, 0.35, 0.35};
  for (std::size_t i = 0; i < 4; ++i) CHECK(p.table()[i] == doctest::Approx(want[i]));
  CHECK(cc.multiplications == 4);
  CHECK(cc.max_live_table == 4);

  VarSpec x3{"X", {"a", "b", "c"}};
  CHECK_THROWS_AS(product(Factor::unit({X}), Factor::unit({x3})), Error);
}

TEST_CASE("product of many") {
  CHECK(product_many(std::vector<Factor>{}).table() == std::vector<double>{1.0});
  Factor f = Factor::create({X}, {0.25, 0.75});
  CHECK(product_many(std::vector<Factor>{f}).table() == f.table());

  BayesianNetwork b = rain_bn();
  std::vector<Factor> cpts;
  for (const auto& nm : b.names()) cpts.push_back(b.cpt(nm));
  CostCounters cc;
  Factor joint = product_many(cpts, &cc);
  CHECK(joint.size() == 32);
  CHECK(joint.total() == doctest::Approx(1.0));
  CHECK(cc.max_live_table == 32);
  CHECK(cc.multiplications <= 5 * 32);
  auto ref = brute_marginal(b, {"A", "B", "C", "D", "E"});
  CHECK(max_diff(joint, ref) < 1e-12);
}

TEST_CASE("normalize") {
  Factor n = normalize(Factor::create({X}, {0.2, 0.6}));
  CHECK(n.table()[0] == doctest::Approx(0.25));
  CHECK(n.table()[1] == doctest::Approx(0.75));
  Factor d = Factor::create({X}, {0.3, 0.7});
  CHECK(max_abs_diff(normalize(d), d) <= 1e-12);
  CHECK_THROWS_AS(normalize(Factor::create({X}, {0.0, 0.0})), Error);
}

TEST_CASE("slicing and reordering") {
  Factor f = Factor::create({X, Y}, {0.1, 0.2, 0.3, 0.4});
  Factor r = f.reorder({"Y", "X"});
  CHECK(r.table() == std::vector<double>{0.1, 0.3, 0.2, 0.4});
  CHECK(approx_equal(f, r, 0.0));
  Factor s = f.slice({{"Y", "f"}});
  CHECK(s.names() == std::vector<std::string>{"X"});
  CHECK(s.table() == std::vector<double>{0.2, 0.4});
}

TEST_CASE("algebraic identities on random factors") {
  Rng rng(7);
  std::vector<VarSpec> pool{binary_var("P"), binary_var("Q"), binary_var("R"), VarSpec{"S", {"a", "b", "c"}},
                            binary_var("T")};
  for (int round = 0; round < 300; ++round) {
    Factor f1 = random_factor(rng, random_vars(rng, pool));
    Factor f2 = random_factor(rng, random_vars(rng, pool));
    Factor f3 = random_factor(rng, random_vars(rng, pool));

    CHECK(approx_equal(product(f1, f2), product(f2, f1), 0.0, 1e-12));
    CHECK(approx_equal(product(product(f1, f2), f3), product(f1, product(f2, f3)), 0.0, 1e-12));
    std::vector<Factor> fs{f1, f2, f3};
    CHECK(approx_equal(product_many(fs), product(product(f1, f2), f3), 0.0, 1e-12));

    // distributivity over names absent from f1
    std::set<std::string> z;
    for (const auto& v : f2.vars())
      if (!f1.has(v.name) && coin(rng)) z.insert(v.name);
    CHECK(approx_equal(sum_out(product(f1, f2), z), product(f1, sum_out(f2, z)), 1e-15, 1e-12));

    // sum-out decomposition
    std::set<std::string> z1, z2;
    for (const auto& v : f3.vars()) (coin(rng) ? z1 : z2).insert(v.name);
    std::set<std::string> both = z1;
    both.insert(z2.begin(), z2.end());
    CHECK(approx_equal(sum_out(f3, both), sum_out(sum_out(f3, z1), z2), 1e-15, 1e-12));
  }
}

TEST_CASE("conditional tables sum to one over the child") {
  Rng rng(11);
  for (int k = 0; k < 50; ++k) {
    BayesianNetwork b = random_bn(rng, 3, 6);
    for (const auto& nm : b.names()) {
      const Factor& cpt = b.cpt(nm);
      Factor s = sum_out(cpt, {nm});
      for (double x : s.table()) CHECK(std::abs(x - 1.0) <= 1e-9);
      CHECK_NOTHROW(validate_cpt(cpt, nm));
    }
  }
  CHECK_THROWS_AS(validate_cpt(Factor::create({Y, X}, {0.3, 0.6, 0.6, 0.4}), "X"), Error);
}

TEST_CASE("product cost stays within k times the result size") {
  Rng rng(3);
  for (int round = 0; round < 100; ++round) {
    std::vector<Factor> fs;
    int k = 1 + pick(rng, 5);
    std::vector<VarSpec> pool{binary_var("P"), binary_var("Q"), binary_var("R"), binary_var("S")};
    for (int i = 0; i < k; ++i) fs.push_back(random_factor(rng, random_vars(rng, pool)));
    CostCounters cc;
    Factor p = product_many(fs, &cc);
    CHECK(cc.multiplications <= static_cast<std::uint64_t>(k) * p.size());
  }
}
