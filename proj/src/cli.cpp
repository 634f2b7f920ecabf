#include "bpn/cli.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "CLI11.hpp"
#include "bpn/bayes_net.hpp"
#include "bpn/cut_net.hpp"
#include "bpn/dsep.hpp"
#include "bpn/error.hpp"
#include "bpn/isomorphism.hpp"
#include "bpn/net_checks.hpp"
#include "bpn/rewrite.hpp"
#include "bpn/semantics.hpp"
#include "bpn/sequent.hpp"

namespace bpn {

namespace {

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", x);
  return buf;
}

nlohmann::json read_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ParseError, "cannot open " + path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::ParseError, path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty()) {
    out << text;
    return;
  }
  std::ofstream f(path);
  if (!f) throw Error(ErrorCode::ParseError, "cannot write " + path);
  f << text;
}

std::vector<std::string> split_list(const std::vector<std::string>& items) {
  std::vector<std::string> out;
  for (const auto& it : items) {
    std::stringstream ss(it);
    std::string part;
    while (std::getline(ss, part, ','))
      if (!part.empty()) out.push_back(part);
  }
  return out;
}

Assignment parse_evidence(const std::vector<std::string>& items) {
  Assignment a;
  for (const auto& it : split_list(items)) {
    auto eq = it.find('=');
    if (eq == std::string::npos) throw Error(ErrorCode::ParseError, "evidence must look like NAME=value: " + it);
    a[it.substr(0, eq)] = it.substr(eq + 1);
  }
  return a;
}

void print_factor(const Factor& f, std::ostream& out) {
  for (std::size_t i = 0; i < f.size(); ++i) {
    Assignment a = f.assignment_at(i);
    std::string row;
    for (const auto& v : f.vars()) row += (row.empty() ? "" : " ") + v.name + "=" + a[v.name];
    out << (row.empty() ? "()" : row) << "\t" << num(f.table()[i]) << "\n";
  }
}

nlohmann::json cost_json(const CutNet& c, const CostCounters& k) {
  return {{"components", c.components.size()},
          {"width", width(c)},
          {"max_intermediate", k.max_live_table},
          {"entries_written", k.entries_written},
          {"multiplications", k.multiplications},
          {"additions", k.additions},
          {"total", k.total()}};
}

// Shared inputs for commands that start from a network and a query.
struct Inputs {
  std::string bn, net, cutnet;
  std::vector<std::string> targets, evidence, order, query;
  std::optional<int> pivot;

  std::vector<std::string> target_list() const { return split_list(targets); }
  std::set<std::string> query_set() const {
    std::set<std::string> q;
    for (const auto& t : split_list(query)) q.insert(t);
    for (const auto& t : split_list(targets)) q.insert(t);
    for (const auto& [k, v] : parse_evidence(evidence)) q.insert(k);
    return q;
  }
  ProofNet load_net() const {
    if (!net.empty()) return net_from_json(read_json(net));
    if (!bn.empty()) return bn_to_bpn(bn_from_json(read_json(bn)), query_set());
    throw Error(ErrorCode::PreconditionViolation, "need --net or --bn");
  }
  // A rooted cut-net from --cutnet, or from --bn with --order.
  RootedCutNet load_cutnet() const {
    if (!cutnet.empty()) {
      std::optional<int> root;
      CutNet c = cutnet_from_json(read_json(cutnet), &root);
      int r = root ? *root : static_cast<int>(c.components.size()) - 1;
      return {c, r};
    }
    ProofNet n = load_net();
    return ve_factorize(n, split_list(order));
  }
};

void add_bn_options(CLI::App* cmd, Inputs& in, bool with_order) {
  cmd->add_option("--bn", in.bn, "Bayesian network JSON file");
  cmd->add_option("--net", in.net, "proof-net JSON file");
  cmd->add_option("--target,--query", in.targets, "query names (comma separated or repeated)");
  cmd->add_option("--evidence", in.evidence, "evidence NAME=value (comma separated or repeated)");
  if (with_order) cmd->add_option("--order", in.order, "elimination order (comma separated)");
}

}  // namespace

int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Exact inference on Bayesian networks as proof-nets with probabilistic boxes"};
  app.require_subcommand(1);
  Inputs in;
  std::string out_path;

  auto* convert = app.add_subcommand("convert", "translate a Bayesian network into a proof-net");
  add_bn_options(convert, in, false);
  convert->add_option("--out", out_path, "output file");

  std::string table_format = "text";
  auto* query_cmd = app.add_subcommand("query", "conditional probability of targets given evidence");
  add_bn_options(query_cmd, in, true);
  query_cmd->add_option("--format", table_format, "text or json")->check(CLI::IsMember({"text", "json"}));

  auto* ve_cmd = app.add_subcommand("ve", "variable-elimination factorization and its result");
  add_bn_options(ve_cmd, in, true);
  ve_cmd->add_option("--format", table_format, "text or json")->check(CLI::IsMember({"text", "json"}));
  ve_cmd->add_option("--out", out_path, "write the cut-net JSON here");

  auto* cost_cmd = app.add_subcommand("cost-report", "width and operation counts of an evaluation");
  add_bn_options(cost_cmd, in, true);
  cost_cmd->add_option("--cutnet", in.cutnet, "cut-net JSON file");

  auto* type_cmd = app.add_subcommand("type-cuts", "merge parallel separating cuts");
  add_bn_options(type_cmd, in, true);
  type_cmd->add_option("--cutnet", in.cutnet, "cut-net JSON file");
  type_cmd->add_option("--pivot", in.pivot, "pivot component index");
  type_cmd->add_option("--out", out_path, "output file");

  std::string format = "text";
  auto* seq_cmd = app.add_subcommand("sequentialize", "sequent-calculus proof of a net or cut-net");
  add_bn_options(seq_cmd, in, true);
  seq_cmd->add_option("--cutnet", in.cutnet, "cut-net JSON file");
  seq_cmd->add_option("--pivot", in.pivot, "pivot component index");
  seq_cmd->add_option("--format", format, "text, outline or json")->check(CLI::IsMember({"text", "outline", "json"}));

  std::vector<std::string> xs, ys, zs;
  bool verify = false;
  auto* dsep_cmd = app.add_subcommand("dsep", "graphical independence test (exit 0 when separated)");
  dsep_cmd->add_option("--bn", in.bn, "Bayesian network JSON file")->required();
  dsep_cmd->add_option("--x", xs, "first set")->required();
  dsep_cmd->add_option("--y", ys, "second set")->required();
  dsep_cmd->add_option("--z", zs, "conditioning set");
  dsep_cmd->add_flag("--verify", verify, "also check numerically");

  auto* check_cmd = app.add_subcommand("check", "typing, correctness and Bayesian tests of a net");
  check_cmd->add_option("--net", in.net, "proof-net JSON file")->required();

  bool prune = false, trace = false;
  auto* norm_cmd = app.add_subcommand("normalize", "reduce a net to normal form");
  add_bn_options(norm_cmd, in, false);
  norm_cmd->add_flag("--prune", prune, "also remove boxes cut with weakenings");
  norm_cmd->add_flag("--trace", trace, "print each step to stderr");
  norm_cmd->add_option("--out", out_path, "output file");

  auto* dot_cmd = app.add_subcommand("export-dot", "Graphviz rendering");
  add_bn_options(dot_cmd, in, true);
  dot_cmd->add_option("--cutnet", in.cutnet, "cut-net JSON file");
  dot_cmd->add_option("--out", out_path, "output file");

  std::uint64_t seed = 0;
  std::size_t count = 10;
  auto* sample_cmd = app.add_subcommand("sample", "forward sampling");
  add_bn_options(sample_cmd, in, false);
  sample_cmd->add_option("--seed", seed, "random seed")->required();
  sample_cmd->add_option("--count", count, "number of samples");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (convert->parsed()) {
      write_text(out_path, net_to_json(in.load_net()).dump(2) + "\n", out);
    } else if (query_cmd->parsed()) {
      auto targets = in.target_list();
      if (targets.empty()) throw Error(ErrorCode::PreconditionViolation, "need --target");
      Assignment ev = parse_evidence(in.evidence);
      Factor m = in.order.empty() ? interpret_naive(in.load_net()) : interpret_rooted(in.load_cutnet());
      Factor post = condition(m, targets, ev);
      if (table_format == "json")
        out << factor_to_json(post).dump(2) << "\n";
      else
        print_factor(post, out);
    } else if (ve_cmd->parsed()) {
      RootedCutNet r = in.load_cutnet();
      CostCounters k;
      Factor m = interpret_rooted(r, &k);
      Assignment ev = parse_evidence(in.evidence);
      Factor result = ev.empty() ? m : condition(m, in.target_list(), ev);
      if (table_format == "json") {
        nlohmann::json j = {{"factor", factor_to_json(result)},
                            {"width", width(r.cut_net)},
                            {"max_intermediate", k.max_live_table}};
        out << j.dump(2) << "\n";
      } else {
        print_factor(result, out);
        out << "width " << width(r.cut_net) << "\nmax_intermediate " << k.max_live_table << "\n";
      }
      if (!out_path.empty()) write_text(out_path, cutnet_to_json(r.cut_net, r.root).dump(2) + "\n", out);
    } else if (cost_cmd->parsed()) {
      RootedCutNet r;
      if (in.cutnet.empty() && in.order.empty()) {
        ProofNet n = in.load_net();
        auto ids = n.node_ids();
        r.cut_net = partition_to_cutnet(n, {std::set<NodeId>(ids.begin(), ids.end())});
      } else {
        r = in.load_cutnet();
      }
      CostCounters k;
      interpret_rooted(r, &k);
      out << cost_json(r.cut_net, k).dump(2) << "\n";
    } else if (type_cmd->parsed()) {
      RootedCutNet r = in.load_cutnet();
      CutNet typed = type_cuts(r.cut_net, in.pivot);
      write_text(out_path, cutnet_to_json(typed, r.root).dump(2) + "\n", out);
    } else if (seq_cmd->parsed()) {
      ProofTree t;
      if (!in.net.empty() && in.order.empty()) {
        t = sequentialize(in.load_net());
      } else {
        RootedCutNet r = in.load_cutnet();
        CutNet c = is_proper(r.cut_net) ? r.cut_net : type_cuts(r.cut_net, in.pivot);
        t = sequentialize(c, in.pivot);
      }
      if (format == "json")
        out << proof_to_json(t).dump(2) << "\n";
      else if (format == "outline")
        out << proof_outline(t) << "\n";
      else
        out << proof_to_text(t);
    } else if (dsep_cmd->parsed()) {
      BayesianNetwork b = bn_from_json(read_json(in.bn));
      auto to_set = [](const std::vector<std::string>& v) {
        auto l = split_list(v);
        return std::set<std::string>(l.begin(), l.end());
      };
      auto X = to_set(xs), Y = to_set(ys), Z = to_set(zs);
      bool sep = dsep(b, X, Y, Z);
      out << (sep ? "separated" : "connected") << "\n";
      if (verify) out << "independent " << (ci_oracle(b, X, Y, Z) ? "yes" : "no") << "\n";
      return sep ? 0 : 1;
    } else if (check_cmd->parsed()) {
      ProofNet n = net_from_json(read_json(in.net));
      auto v = check_typed_graph(n);
      for (const auto& x : v) out << "violation: " << x.message << "\n";
      if (!v.empty()) return 1;
      bool ok = check_correctness(n);
      out << "typed: yes\ncorrect: " << (ok ? "yes" : "no") << "\n";
      if (!ok) return 1;
      out << "bayesian: " << (is_bayesian(n) ? "yes" : "no") << "\n";
      out << "normal: " << (is_normal(n) ? "yes" : "no") << "\n";
    } else if (norm_cmd->parsed()) {
      ProofNet n = in.load_net();
      require_typed(n);
      std::vector<Redex> steps;
      ProofNet m = normalize(n, prune, &steps);
      if (trace)
        for (const auto& s : steps) err << s.str() << "\n";
      write_text(out_path, net_to_json(m).dump(2) + "\n", out);
    } else if (dot_cmd->parsed()) {
      if (!in.cutnet.empty() || !in.order.empty()) {
        RootedCutNet r = in.load_cutnet();
        auto m = r.cut_net.component_map();
        write_text(out_path, net_to_dot(r.cut_net.net, &m), out);
      } else {
        write_text(out_path, net_to_dot(in.load_net()), out);
      }
    } else if (sample_cmd->parsed()) {
      ProofNet n = in.load_net();
      for (const auto& a : forward_sample(n, seed, count)) out << nlohmann::json(a).dump() << "\n";
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace bpn
