#include <cmath>

#include "bpn/isomorphism.hpp"
#include "doctest.h"
#include "support.hpp"

using namespace bpn;
using namespace bpn::testing;

namespace {

ErrorCode code_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Unsupported;
}

// Y uniform, X given Y from the box illustration.
ProofNet two_box_chain() {
  ProofNet n;
  NodeId y = n.add_box(Factor::create({binary_var("Y")}, {0.5, 0.5}), "Y");
  NodeId x = n.add_box(Factor::create({binary_var("Y"), binary_var("X")}, {0.3, 0.7, 0.6, 0.4}), "X");
  n.add_cut(n.box_main(y), n.conclusion(x, 0));
  return n;
}

std::vector<std::string> shuffled_order(Rng& rng, const BayesianNetwork& b, const std::set<std::string>& q) {
  std::vector<std::string> order;
  for (const auto& x : b.names())
    if (!q.count(x)) order.push_back(x);
  std::shuffle(order.begin(), order.end(), rng);
  return order;
}

}  // namespace

TEST_CASE("interpretation of small nets") {
  Factor none = interpret_naive(ProofNet());
  CHECK(none.vars().empty());
  CHECK(none.table() == std::vector<double>{1.0});

  Factor chain = interpret_naive(two_box_chain());
  REQUIRE(chain.names() == std::vector<std::string>{"X"});
  CHECK(chain.at({{"X", "t"}}) == doctest::Approx(0.45).epsilon(1e-12));
  CHECK(chain.at({{"X", "f"}}) == doctest::Approx(0.55).epsilon(1e-12));

  // an axiom alone carries no information about its name
  ProofNet ax;
  ax.add_ax("X");
  CHECK(interpret_naive(ax).table() == std::vector<double>{1.0, 1.0});

  ProofNet twice;
  twice.add_box(Factor::create({binary_var("X")}, {0.5, 0.5}), "X");
  twice.add_box(Factor::create({binary_var("X")}, {0.1, 0.9}), "X");
  CHECK(code_of([&] { interpret_naive(twice); }) == ErrorCode::NotBayesian);
}

TEST_CASE("a fully queried network sums to one") {
  Rng rng(101);
  for (int round = 0; round < 60; ++round) {
    BayesianNetwork b = random_bn(rng, 1, 8);
    auto names = b.names();
    Factor f = interpret_naive(bn_to_bpn(b, {names.begin(), names.end()}));
    CHECK(f.total() == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(f.size() == bn_joint(b).size());
  }
}

TEST_CASE("marginals agree with brute force") {
  Rng rng(103);
  for (int round = 0; round < 150; ++round) {
    BayesianNetwork b = random_bn(rng, 3, 8);
    auto q = random_subset(rng, b.names(), 0.4);
    ProofNet n = bn_to_bpn(b, q);
    Factor f = interpret_naive(n);
    CHECK(f.name_set() == q);
    CHECK(max_diff(f, brute_marginal(b, q)) <= 1e-9);
    CHECK(max_diff(interpret_naive(normalize(n, true)), brute_marginal(b, q)) <= 1e-9);
  }
}

TEST_CASE("binary splits compose") {
  Rng rng(107);
  int tried = 0;
  for (int round = 0; round < 120; ++round) {
    BayesianNetwork b = random_bn(rng, 2, 7);
    ProofNet n = normalize(bn_to_bpn(b, random_subset(rng, b.names(), 0.5)), false);
    std::set<NodeId> r;
    for (NodeId bx : n.boxes())
      if (coin(rng, 0.5)) r.insert(bx);
    if (r.empty() || r.size() == n.boxes().size()) continue;
    CutNet c;
    try {
      c = split(n, r);
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::SkeletonNotTree);
      continue;
    }
    ++tried;
    Factor f1 = interpret_naive(c.component_net(0)), f2 = interpret_naive(c.component_net(1));
    std::set<std::string> z;
    std::set<std::string> keep = n.conclusion_names();
    for (const Factor* f : {&f1, &f2})
      for (const auto& v : f->vars())
        if (!keep.count(v.name)) z.insert(v.name);
    Factor composed = sum_out(product(f1, f2), z);
    CHECK(approx_equal(composed, interpret_naive(n), 1e-9));
  }
  CHECK(tried > 50);
}

TEST_CASE("rooted interpretation at every root") {
  Rng rng(109);
  for (int round = 0; round < 80; ++round) {
    BayesianNetwork b = random_bn(rng, 3, 8);
    auto q = random_subset(rng, b.names(), 0.3);
    ProofNet n = normalize(bn_to_bpn(b, q), false);
    Factor naive = interpret_naive(n);
    RootedCutNet r = ve_factorize(n, shuffled_order(rng, b, q));
    int w = width(r.cut_net);
    for (int root = 0; root < static_cast<int>(r.cut_net.components.size()); ++root) {
      CostCounters cc;
      CHECK(approx_equal(interpret_rooted({r.cut_net, root}, &cc), naive, 1e-9));
      if (root == r.root) CHECK(cc.max_live_table <= (std::uint64_t{1} << (w + 1)));
    }
  }

  ProofNet single = normalize(bn_to_bpn(rain_bn(), {"B", "E"}), false);
  auto ids = single.node_ids();
  RootedCutNet whole{partition_to_cutnet(single, {std::set<NodeId>(ids.begin(), ids.end())}), 0};
  CHECK(approx_equal(interpret_rooted(whole), interpret_naive(single), 1e-12));
}

TEST_CASE("rewriting preserves the interpretation") {
  // pruning a sink box
  ProofNet lawn = bn_to_bpn(rain_bn(), {"D"});
  std::vector<Redex> trace;
  normalize(lawn, true, &trace);
  std::vector<RewriteStep> steps;
  bool pruned = false;
  for (const auto& r : trace) {
    RewriteStep s;
    s.redex = r;
    steps.push_back(s);
    pruned = pruned || r.kind == RedexKind::BoxWeakening;
  }
  CHECK(pruned);
  CHECK(check_invariance(lawn, steps));

  // an expansion followed by the reduction that undoes it
  ProofNet chain = two_box_chain();
  RewriteStep expand;
  expand.kind = RewriteStep::Kind::AxExpand;
  expand.edge = chain.conclusions()[0];
  ProofNet expanded = chain;
  apply_step(expanded, expand);
  auto rs = find_redexes(expanded, false);
  REQUIRE(rs.size() == 1);
  RewriteStep back;
  back.redex = rs[0];
  CHECK(check_invariance(chain, {expand, back}));

  // merging the two cuts of the first factorization link
  CutNet c = ve_factorize(normalize(lawn, false), {"A", "B", "C"}).cut_net;
  auto cuts = c.cuts_between(0, 1);
  REQUIRE(cuts.size() == 2);
  RewriteStep merge;
  merge.kind = RewriteStep::Kind::TensorParExpand;
  merge.a = {cuts[0], 0};
  merge.b = {cuts[1], c.side_of(cuts[1], 0) == c.side_of(cuts[0], 0) ? 0 : 1};
  CHECK(check_invariance(c.net, {merge}));

  Rng rng(113);
  for (int round = 0; round < 60; ++round) {
    BayesianNetwork b = random_bn(rng, 2, 7);
    auto q = random_subset(rng, b.names(), 0.5);
    ProofNet n = redex_rich_bpn(rng, b, q);
    Factor before = interpret_naive(n);
    bool pruning = coin(rng);
    bool same = true;
    reduce_randomly(n, pruning, rng, [&](const ProofNet& now, const Redex&) {
      same = same && approx_equal(interpret_naive(now), before, 1e-9);
    });
    CHECK(same);
    CHECK(max_diff(before, brute_marginal(b, q)) <= 1e-9);
  }
}

TEST_CASE("conditional queries") {
  BayesianNetwork b = rain_bn();
  ProofNet n = bn_to_bpn(b, {"B", "C", "D"});
  Factor plain = query(n, {"C"}, {});
  CHECK(max_diff(plain, brute_marginal(b, {"C"})) <= 1e-12);

  Factor post = query(n, {"B", "C"}, {{"D", "f"}});
  auto joint = brute_marginal(b, {"B", "C", "D"});
  double mass = 0;
  for (const auto& [a, p] : joint)
    if (a.at("D") == "f") mass += p;
  for (const auto& [a, p] : joint)
    if (a.at("D") == "f") CHECK(std::abs(post.at({{"B", a.at("B")}, {"C", a.at("C")}}) - p / mass) <= 1e-12);

  CHECK(code_of([&] { query(n, {"A"}, {}); }) == ErrorCode::UnknownName);
  CHECK(code_of([&] { query(n, {"C"}, {{"E", "t"}}); }) == ErrorCode::UnknownName);

  BayesianNetwork sure;
  sure.add_variable(binary_var("X"), {}, {1.0, 0.0});
  sure.add_variable(binary_var("Y"), {"X"}, {0.4, 0.6, 0.5, 0.5});
  CHECK(code_of([&] { query(bn_to_bpn(sure, {"X", "Y"}), {"Y"}, {{"X", "f"}}); }) == ErrorCode::ZeroEvidence);
}

TEST_CASE("forward sampling") {
  ProofNet sure;
  sure.add_box(Factor::create({binary_var("X")}, {1.0, 0.0}), "X");
  for (const auto& a : forward_sample(sure, 5, 50)) CHECK(a.at("X") == "t");

  ProofNet n = normalize(bn_to_bpn(rain_bn(), {"B", "E"}), false);
  CHECK(forward_sample(n, 9, 20) == forward_sample(n, 9, 20));
  CHECK(forward_sample(n, 9, 20) != forward_sample(n, 10, 20));

  // parents are sampled before their children
  BayesianNetwork copy;
  copy.add_variable(binary_var("X"), {}, {0.5, 0.5});
  copy.add_variable(binary_var("Y"), {"X"}, {1.0, 0.0, 0.0, 1.0});
  for (const auto& a : forward_sample(normalize(bn_to_bpn(copy, {"Y"}), false), 3, 100)) CHECK(a.at("X") == a.at("Y"));

  ProofNet compound = normalize(bn_to_bpn(rain_bn(), {"B", "C"}), false);
  compound.add_tensor(compound.conclusions()[0], compound.conclusions()[1]);
  CHECK(code_of([&] { forward_sample(compound, 1, 1); }) == ErrorCode::NonAtomic);
}
