#include "greennet/bench.hpp"
#include "greennet/green.hpp"
#include "greennet/io.hpp"
#include "greennet/selfcheck.hpp"
#include "greennet/vertex_addition.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace {

using namespace greennet;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitValidation = 2;
constexpr int kExitDeviation = 3;

double solve_tolerance() {
  if (const char* env = std::getenv("GREENNET_TOL")) {
    try {
      const double v = std::stod(env);
      if (v > 0.0) {
        return v;
      }
    } catch (...) {
    }
    std::cerr << "greennet: ignoring invalid GREENNET_TOL value\n";
  }
  return kSolveTol;
}

struct NetworkArgs {
  std::string path;
  std::optional<double> lambda;
  bool normalize = false;
};

void add_network_options(CLI::App* cmd, NetworkArgs& args) {
  cmd->add_option("network", args.path, "network file (JSON or 'u v c' edge list)")
      ->required();
  cmd->add_option("--lambda", args.lambda, "override the file's eigenvalue parameter");
  cmd->add_flag("--normalize", args.normalize, "rescale the weight to unit norm");
}

NetworkSpec load_network(const NetworkArgs& args) {
  NetworkData data = read_network_file(args.path);
  if (args.lambda.has_value()) {
    data.lambda = *args.lambda;
  }
  if (args.normalize) {
    data.normalize = true;
  }
  return NetworkSpec::validated(data);
}

void emit_matrix(const MatrixFile& m, const std::string& out_path, const std::string& format) {
  const std::string text = format == "txt" ? matrix_to_text(m) : matrix_to_json(m);
  if (out_path.empty()) {
    std::cout << text;
  } else {
    write_file(out_path, text);
  }
}

std::vector<std::pair<std::string, double>> parse_attach_spec(const std::string& spec) {
  std::vector<std::pair<std::string, double>> anchors;
  std::istringstream in(spec);
  std::string item;
  while (std::getline(in, item, ',')) {
    const auto colon = item.find(':');
    if (colon == std::string::npos || colon == 0) {
      throw ValidationError("attachment spec: expected 'vertex:conductance', got '" + item +
                            "'");
    }
    try {
      anchors.push_back({item.substr(0, colon), std::stod(item.substr(colon + 1))});
    } catch (const std::exception&) {
      throw ValidationError("attachment spec: bad conductance in '" + item + "'");
    }
  }
  if (anchors.empty()) {
    throw ValidationError("attachment spec: no anchors given");
  }
  return anchors;
}

std::vector<Index> parse_index_list(const std::string& text, const char* what) {
  std::vector<Index> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    try {
      out.push_back(static_cast<Index>(std::stoll(item)));
    } catch (const std::exception&) {
      throw ValidationError(std::string(what) + ": bad integer '" + item + "'");
    }
  }
  if (out.empty()) {
    throw ValidationError(std::string(what) + ": empty list");
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Green kernels of weighted networks and closed-form inverse updates "
               "under vertex attachment"};
  app.require_subcommand(1);

  // green
  NetworkArgs green_args;
  std::string green_out, green_format = "json";
  auto* cmd_green = app.add_subcommand("green", "compute the Green kernel");
  add_network_options(cmd_green, green_args);
  cmd_green->add_option("--out", green_out, "output path (stdout if omitted)");
  cmd_green->add_option("--format", green_format, "matrix output format")
      ->check(CLI::IsMember({"json", "txt"}));

  // add-vertex
  NetworkArgs add_args;
  std::string add_spec, add_out, add_format = "json", add_label = "new";
  double add_weight = 1.0;
  bool add_raw = false, add_verify = false;
  auto* cmd_add = app.add_subcommand(
      "add-vertex", "attach a vertex and compute the grown Moore-Penrose inverse");
  add_network_options(cmd_add, add_args);
  cmd_add->add_option("anchors", add_spec, "anchor list 'x1:a1,x2:a2,...'")->required();
  cmd_add->add_option("new-weight", add_weight, "weight value of the new vertex")->required();
  cmd_add->add_option("--label", add_label, "label of the new vertex");
  cmd_add->add_flag("--raw", add_raw, "return the raw block formula (no kernel projection)");
  cmd_add->add_flag("--verify", add_verify,
                    "cross-check against a from-scratch pseudoinverse");
  cmd_add->add_option("--out", add_out, "output path (stdout if omitted)");
  cmd_add->add_option("--format", add_format, "matrix output format")
      ->check(CLI::IsMember({"json", "txt"}));

  // resistance
  NetworkArgs res_args;
  std::string res_x, res_y;
  auto* cmd_res = app.add_subcommand("resistance", "effective resistance between two vertices");
  add_network_options(cmd_res, res_args);
  cmd_res->add_option("x", res_x, "first vertex label")->required();
  cmd_res->add_option("y", res_y, "second vertex label")->required();

  // kirchhoff
  NetworkArgs kir_args;
  auto* cmd_kir = app.add_subcommand("kirchhoff", "half-sum of all effective resistances");
  add_network_options(cmd_kir, kir_args);

  // bench
  std::string bench_n = "500,1000", bench_m = "1,5", bench_out;
  int bench_trials = 1;
  std::uint64_t bench_seed = 42;
  auto* cmd_bench = app.add_subcommand(
      "bench", "time the closed-form update against full recomputation");
  cmd_bench->add_option("--n", bench_n, "comma list of network sizes");
  cmd_bench->add_option("--m", bench_m, "comma list of anchor counts");
  cmd_bench->add_option("--trials", bench_trials, "trials per (n, m)")
      ->check(CLI::PositiveNumber);
  cmd_bench->add_option("--seed", bench_seed, "generator seed");
  cmd_bench->add_option("--out", bench_out, "CSV output path (stdout if omitted)");

  // selfcheck
  std::uint64_t check_seed = 0;
  int check_cases = 20;
  bool inject_failure = false;
  auto* cmd_check = app.add_subcommand("selfcheck", "run the full invariant suite");
  auto* seed_opt = cmd_check->add_option("--seed", check_seed,
                                         "replay a single seeded case instead of the default set");
  cmd_check->add_option("--cases", check_cases, "number of seeded cases")
      ->check(CLI::PositiveNumber);
  cmd_check->add_flag("--inject-failure", inject_failure)->group("");  // test hook, hidden

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  const double tol = solve_tolerance();

  try {
    if (cmd_green->parsed()) {
      const NetworkSpec spec = load_network(green_args);
      const GreenOperator G = green_for(spec);
      emit_matrix({spec.labels(), G.kernel()}, green_out, green_format);
      return kExitOk;
    }

    if (cmd_add->parsed()) {
      const NetworkSpec spec = load_network(add_args);
      VertexAttachment att;
      att.new_label = add_label;
      att.new_weight_value = add_weight;
      for (const auto& [label, c] : parse_attach_spec(add_spec)) {
        att.anchors.push_back({spec.vertex(label).index, c});
      }
      const GreenOperator G = green_for(spec);
      const Eigen::MatrixXd X = added_vertex_pinv(G, spec, att, /*mp_correct=*/!add_raw);

      std::vector<std::string> order = spec.labels();
      order.push_back(att.new_label);
      emit_matrix({order, X}, add_out, add_format);

      if (add_verify) {
        const NetworkSpec grown = grown_network(spec, att);
        const Eigen::MatrixXd oracle = pinv_oracle(schrodinger_matrix(grown));
        const double dev = max_abs(X - oracle);
        const double threshold = 10.0 * tol;
        std::cerr << "verify: max deviation from recomputed pseudoinverse = "
                  << format_double(dev) << " (threshold " << format_double(threshold) << ")\n";
        if (dev > threshold) {
          return kExitDeviation;
        }
      }
      return kExitOk;
    }

    if (cmd_res->parsed()) {
      const NetworkSpec spec = load_network(res_args);
      if (spec.lambda() > 0.0) {
        throw UnsupportedError("resistance: defined for lambda = 0 only");
      }
      const GreenOperator G = green_for(spec);
      std::cout << format_double(effective_resistance(G, spec.vertex(res_x).index,
                                                      spec.vertex(res_y).index))
                << '\n';
      return kExitOk;
    }

    if (cmd_kir->parsed()) {
      const NetworkSpec spec = load_network(kir_args);
      if (spec.lambda() > 0.0) {
        throw UnsupportedError("kirchhoff: defined for lambda = 0 only");
      }
      std::cout << format_double(kirchhoff_index(green_for(spec))) << '\n';
      return kExitOk;
    }

    if (cmd_bench->parsed()) {
      const auto rows = run_bench(parse_index_list(bench_n, "bench --n"),
                                  parse_index_list(bench_m, "bench --m"), bench_trials,
                                  bench_seed);
      const std::string csv = bench_csv(rows);
      if (bench_out.empty()) {
        std::cout << csv;
      } else {
        write_file(bench_out, csv);
      }
      return kExitOk;
    }

    if (cmd_check->parsed()) {
      SelfCheckOptions opt;
      opt.cases = check_cases;
      if (seed_opt->count() > 0) {
        opt.base_seed = check_seed;
        opt.single_seed = true;
      }
      if (inject_failure) {
        opt.tol_scale = -1.0;  // corrupt every tolerance; must report failures
      }
      const auto failures = run_selfcheck(opt, std::cout);
      return failures.empty() ? kExitOk : kExitDeviation;
    }
  } catch (const Error& e) {
    std::cerr << "greennet: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "greennet: internal error: " << e.what() << '\n';
    return kExitValidation;
  }
  return kExitUsage;
}
