#include "kutato/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <chrono>
#include <iostream>
#include <optional>
#include <random>

#include "kutato/entropy.hpp"
#include "kutato/errors.hpp"
#include "kutato/evalcmp.hpp"
#include "kutato/formats.hpp"
#include "kutato/learner.hpp"
#include "kutato/sampling.hpp"

namespace kutato {

std::string joint_space_size(const std::vector<std::size_t>& arities) {
  // Little-endian base-10^9 limbs.
  std::vector<std::uint64_t> limbs{1};
  constexpr std::uint64_t kBase = 1000000000;
  for (auto a : arities) {
    std::uint64_t carry = 0;
    for (auto& limb : limbs) {
      const std::uint64_t v = limb * a + carry;
      limb = v % kBase;
      carry = v / kBase;
    }
    while (carry) {
      limbs.push_back(carry % kBase);
      carry /= kBase;
    }
  }
  while (limbs.size() > 1 && limbs.back() == 0) limbs.pop_back();
  std::string out = std::to_string(limbs.back());
  for (auto i = limbs.size() - 1; i-- > 0;) {
    auto part = std::to_string(limbs[i]);
    out += std::string(9 - part.size(), '0') + part;
  }
  return out;
}

namespace {

struct UsageError : Error {
  using Error::Error;
};

std::vector<std::string> split_names(std::string_view text) {
  std::vector<std::string> names;
  std::string current;
  for (char c : text) {
    if (c == ',' || c == ' ' || c == '\t' || c == '\n' || c == '\r') {
      if (!current.empty()) names.push_back(std::move(current));
      current.clear();
    } else {
      current += c;
    }
  }
  if (!current.empty()) names.push_back(std::move(current));
  return names;
}

std::vector<std::string> random_order(const CaseDatabase& db, std::uint64_t seed) {
  std::vector<std::string> names;
  for (const auto& v : db.variables()) names.push_back(v.name);
  std::mt19937_64 gen(seed);
  for (std::size_t i = names.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(gen() % i);
    std::swap(names[i - 1], names[j]);
  }
  return names;
}

struct LearnArgs {
  std::string data;
  std::string order;
  bool learn_directions = false;
  std::uint64_t seed = 0;
  double alpha = 0.05;
  std::string estimator = "dirichlet";
  std::optional<std::size_t> max_parents;
  double min_delta = 0.0;
  std::size_t threads = 1;
  std::string out;
  std::string trace;
};

int cmd_learn(const LearnArgs& a, std::ostream& out) {
  const bool has_order = !a.order.empty();
  if (has_order == a.learn_directions) throw UsageError("learn: give exactly one of --order or --learn-directions");
  const auto db = read_case_file(a.data);

  LearnConfig config;
  config.alpha = a.alpha;
  config.mode = a.estimator == "ml" ? Estimator::ml : Estimator::dirichlet;
  config.max_parents = a.max_parents;
  config.min_delta = a.min_delta;
  config.threads = a.threads;
  config.network_name = std::filesystem::path(a.out).stem().string();
  if (config.network_name.empty()) config.network_name = "learned";
  if (has_order) {
    if (a.order == "random") {
      config.order = random_order(db, a.seed);
    } else if (a.order.front() == '@') {
      config.order = split_names(read_text_file(a.order.substr(1)));
    } else {
      config.order = split_names(a.order);
    }
  }

  const auto started = std::chrono::steady_clock::now();
  const auto result = kutato_learn(db, config);
  const std::chrono::duration<double> elapsed = std::chrono::steady_clock::now() - started;

  write_network_file(a.out, result.network);
  if (!a.trace.empty()) write_trace_file(a.trace, result.trace, db.variables());

  const double final_entropy =
      result.trace.steps.empty() ? result.trace.initial_entropy : result.trace.steps.back().entropy_after;
  out << "arcs added: " << result.trace.steps.size() << '\n'
      << "final entropy: " << fixed6(final_entropy) << " nats\n"
      << "halt: " << to_string(result.trace.halt_reason) << '\n'
      << "time: " << fixed6(elapsed.count()) << " s\n";
  return kExitOk;
}

int cmd_sample(const std::string& net_path, std::size_t n, std::uint64_t seed, const std::string& out_path,
               std::ostream& out) {
  const auto net = read_network_file(net_path);
  const auto db = logic_sample(net, {n, seed});
  write_case_file(out_path, db);
  out << "wrote " << n << " cases to " << out_path << '\n';
  return kExitOk;
}

int cmd_entropy(const std::string& net_path, bool brute, std::ostream& out) {
  const auto net = read_network_file(net_path);
  const auto report = network_entropy(net);
  out << "total: " << fixed6(report.total) << " nats\n";
  for (std::size_t v = 0; v < net.size(); ++v) {
    out << "  " << net.variable(v).name << '\t' << fixed6(report.per_node[v]) << '\n';
  }
  if (brute) {
    const double oracle = brute_force_entropy(net);
    out << "brute-force: " << fixed6(oracle) << " nats\n"
        << "abs difference: " << sci6(std::abs(oracle - report.total)) << '\n';
  }
  return kExitOk;
}

void print_arcs(std::ostream& out, std::string_view label, const std::vector<Arc>& arcs) {
  out << label << " (" << arcs.size() << "):\n";
  for (const auto& a : arcs) out << "  " << a.from << " -> " << a.to << '\n';
}

int cmd_compare(const std::string& learned_path, const std::string& reference_path, bool kl, std::ostream& out) {
  const auto learned = read_network_file(learned_path);
  const auto reference = read_network_file(reference_path);
  const auto diff = structural_diff(learned, reference);
  print_arcs(out, "missing", diff.missing);
  print_arcs(out, "extra", diff.extra);
  print_arcs(out, "reversed", diff.reversed);
  out << "counts: missing=" << diff.missing.size() << " extra=" << diff.extra.size()
      << " reversed=" << diff.reversed.size() << '\n';
  if (kl) {
    if (same_structure(learned, reference)) {
      out << "max cpt error: " << fixed6(cpt_max_abs_error(learned, reference)) << '\n';
    } else {
      out << "max cpt error: n/a (structures differ)\n";
    }
    out << "kl(reference || learned): " << fixed6(distribution_kl(learned, reference)) << " nats\n";
  }
  return kExitOk;
}

int cmd_describe(const std::string& net_path, std::ostream& out) {
  const auto net = read_network_file(net_path);
  std::vector<std::size_t> arities;
  for (const auto& v : net.variables()) arities.push_back(v.arity());
  out << "network: " << net.name() << '\n'
      << "nodes: " << net.size() << '\n'
      << "arcs: " << net.structure().arc_count() << '\n'
      << "joint size: " << joint_space_size(arities) << '\n';
  for (std::size_t v = 0; v < net.size(); ++v) {
    out << "  " << net.variable(v).name << " arity=" << net.variable(v).arity() << " parents=";
    if (net.parents(v).empty()) out << '-';
    for (std::size_t k = 0; k < net.parents(v).size(); ++k) {
      out << (k ? "," : "") << net.variable(net.parents(v)[k]).name;
    }
    out << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Entropy-driven belief-network learning from case databases", "kutato"};
  app.require_subcommand(1);

  LearnArgs learn;
  auto* learn_cmd = app.add_subcommand("learn", "Learn structure and parameters from a case file");
  learn_cmd->add_option("--data", learn.data, "Case file (CSV)")->required();
  auto* order_opt = learn_cmd->add_option("--order", learn.order, "Total order: a,b,c | @file | random");
  auto* dir_opt = learn_cmd->add_flag("--learn-directions", learn.learn_directions, "Choose arc directions by entropy");
  order_opt->excludes(dir_opt);
  learn_cmd->add_option("--seed", learn.seed, "Seed for --order random");
  learn_cmd->add_option("--alpha", learn.alpha, "Significance level")->check(CLI::Range(0.0, 1.0));
  learn_cmd->add_option("--estimator", learn.estimator, "dirichlet or ml")
      ->check(CLI::IsMember({"dirichlet", "ml"}));
  learn_cmd->add_option("--max-parents", learn.max_parents, "Parent cap per node");
  learn_cmd->add_option("--min-delta", learn.min_delta, "Minimum entropy decrease (nats)");
  learn_cmd->add_option("--threads", learn.threads, "Candidate scoring threads")->check(CLI::PositiveNumber);
  learn_cmd->add_option("--out", learn.out, "Output network (.bn)")->required();
  learn_cmd->add_option("--trace", learn.trace, "Output trace (.tsv)");

  std::string net_path;
  std::size_t n_cases = 0;
  std::uint64_t seed = 0;
  std::string out_path;
  auto* sample_cmd = app.add_subcommand("sample", "Draw cases from a network by logic sampling");
  sample_cmd->add_option("--net", net_path, "Network file (.bn)")->required();
  sample_cmd->add_option("--n", n_cases, "Number of cases")->required();
  sample_cmd->add_option("--seed", seed, "Generator seed");
  sample_cmd->add_option("--out", out_path, "Output case file (CSV)")->required();

  bool brute = false;
  auto* entropy_cmd = app.add_subcommand("entropy", "Exact network entropy in nats");
  entropy_cmd->add_option("--net", net_path, "Network file (.bn)")->required();
  entropy_cmd->add_flag("--brute-force", brute, "Also enumerate the full joint");

  std::string learned_path;
  std::string reference_path;
  bool kl = false;
  auto* compare_cmd = app.add_subcommand("compare", "Compare a learned network with a reference");
  compare_cmd->add_option("--learned", learned_path, "Learned network (.bn)")->required();
  compare_cmd->add_option("--reference", reference_path, "Reference network (.bn)")->required();
  compare_cmd->add_flag("--kl", kl, "Also report CPT error and KL divergence");

  auto* describe_cmd = app.add_subcommand("describe", "Summarize a network file");
  describe_cmd->add_option("--net", net_path, "Network file (.bn)")->required();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*learn_cmd) return cmd_learn(learn, out);
    if (*sample_cmd) return cmd_sample(net_path, n_cases, seed, out_path, out);
    if (*entropy_cmd) return cmd_entropy(net_path, brute, out);
    if (*compare_cmd) return cmd_compare(learned_path, reference_path, kl, out);
    if (*describe_cmd) return cmd_describe(net_path, out);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitFile;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}

}  // namespace kutato
