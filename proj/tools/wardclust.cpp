// wardclust command-line front end: cluster files, run the verification
// experiments, compare exported dendrograms.
//
// Exit codes: 0 success, 1 usage or input error, 2 verification failure.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "wardclust/wardclust.hpp"

namespace {

using namespace wardclust;

struct ClusterArgs {
  std::string input;
  std::string kind = "data";
  std::string method = "ward.D2";
  bool square_input = false;
  bool sqrt_heights = false;
  bool force_scale = false;
  std::string algorithm = "nnchain";
  int declared_n = -1;
  std::string out;
  std::vector<std::string> formats{"json"};
};

void write_or_print(const std::string& content, const std::string& out_path) {
  if (out_path.empty()) {
    std::fputs(content.c_str(), stdout);
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + out_path);
    out << content;
    std::fprintf(stderr, "wrote %s\n", out_path.c_str());
  }
}

int run_cluster(const ClusterArgs& args) {
  const auto method = parse_method(args.method);
  if (!method) {
    std::fprintf(stderr, "unknown method '%s'\n", args.method.c_str());
    return 1;
  }

  RunMetadata meta;
  meta.algorithm = args.algorithm;
  meta.input_kind = args.kind;
  meta.input = args.input;
  meta.forced_scale = args.force_scale;

  DissimilarityMatrix dissim;
  std::vector<std::string> labels;
  std::vector<double> masses;
  if (args.kind == "data") {
    DataMatrix data = ingest_data_matrix(args.input);
    labels = data.row_labels;
    masses = data.masses;
    dissim = pairwise_euclidean(
        data, args.square_input ? Scale::squared : Scale::plain);
    meta.transforms.push_back("euclidean-distances");
    if (args.square_input) meta.transforms.push_back("square-input");
  } else {
    dissim = ingest_dissimilarity(args.input, args.declared_n);
    if (args.square_input) {
      dissim = dissim.squared();
      meta.transforms.push_back("square-input");
    }
  }

  if (dissim.scale != required_scale(*method)) {
    if (!args.force_scale) {
      std::fprintf(stderr,
                   "method %s expects %s-scale dissimilarities but the input "
                   "is %s-scale; use --square-input or --force-scale\n",
                   method_name(*method),
                   required_scale(*method) == Scale::squared ? "squared" : "plain",
                   dissim.scale == Scale::squared ? "squared" : "plain");
      return 1;
    }
    meta.transforms.push_back("force-scale");
    if (*method == LinkageMethod::ward_d || *method == LinkageMethod::ward_d2) {
      meta.non_ward_warning = true;
      std::fprintf(stderr,
                   "warning: %s on %s-scale input is a well-defined hierarchy "
                   "but NOT the Ward criterion\n",
                   method_name(*method),
                   dissim.scale == Scale::squared ? "squared" : "plain");
    }
  }

  AgglomerateOptions opts;
  opts.allow_scale_mismatch = args.force_scale;
  Dendrogram dend = args.algorithm == "naive"
                        ? agglomerate_naive(dissim, *method, masses, opts)
                        : agglomerate_nnchain(dissim, *method, masses, opts);
  if (args.sqrt_heights) {
    dend = transform_heights(dend, HeightTransform::sqrt);
    meta.transforms.push_back("sqrt-heights");
  }

  const std::map<std::string, std::string> extensions{
      {"merge-table", ".merge.csv"},
      {"newick", ".nwk"},
      {"json", ".json"},
      {"svg", ".svg"}};
  if (args.out.empty() && args.formats.size() > 1) {
    std::fprintf(stderr, "multiple --format values need --out\n");
    return 1;
  }
  for (const std::string& format : args.formats) {
    if (!extensions.count(format)) {
      std::fprintf(stderr, "unknown format '%s'\n", format.c_str());
      return 1;
    }
    std::string content;
    if (format == "merge-table") content = export_merge_table(dend);
    else if (format == "newick") content = export_newick(dend, labels) + "\n";
    else if (format == "json") content = export_json(dend, meta);
    else content = export_svg(dend, labels);
    write_or_print(content,
                   args.out.empty() ? "" : args.out + extensions.at(format));
  }
  return 0;
}

int run_experiments_cmd(int n, int p, std::uint64_t seed) {
  const ExperimentReport report = run_experiments(n, p, seed);
  for (const auto& check : report.checks)
    std::printf("[%s] %s (%s)\n", check.passed ? "PASS" : "FAIL",
                check.name.c_str(), check.detail.c_str());
  if (!report.all_passed()) {
    for (const auto& check : report.checks)
      if (!check.passed)
        std::fprintf(stderr, "FAILED identity: %s\n", check.name.c_str());
    return 2;
  }
  std::printf("all %zu checks passed (n=%d, p=%d, seed=%llu)\n",
              report.checks.size(), n, p,
              static_cast<unsigned long long>(seed));
  return 0;
}

int run_compare(const std::string& path_a, const std::string& path_b,
                const std::string& map_name, double tol) {
  auto load = [](const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)),
                     std::istreambuf_iterator<char>());
    return import_dendrogram_json(text);
  };
  const Dendrogram a = load(path_a);
  const Dendrogram b = load(path_b);
  const HeightMap map = map_name == "sqrt"     ? HeightMap::sqrt
                        : map_name == "square" ? HeightMap::square
                                               : HeightMap::identity;
  if (!topology_equal(a, b)) {
    std::printf("topology: DIFFERENT\n");
    return 2;
  }
  const double dev = compare_heights(a, b, map);
  std::printf("topology: identical\nmax relative height deviation (%s map): %.6g\n",
              map_name.c_str(), dev);
  if (dev > tol) {
    std::fprintf(stderr, "height deviation %.6g exceeds tolerance %.6g\n", dev,
                 tol);
    return 2;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "wardclust: hierarchical clustering with explicit ward.D / ward.D2 "
      "semantics"};
  app.require_subcommand(1);

  ClusterArgs cargs;
  auto* cluster = app.add_subcommand(
      "cluster", "cluster a data matrix or dissimilarity file");
  cluster->add_option("--input", cargs.input, "input file (CSV)")->required();
  cluster->add_option("--kind", cargs.kind, "input kind")
      ->check(CLI::IsMember({"data", "dissim"}));
  cluster->add_option("--method", cargs.method,
                      "ward.D|ward.D2|single|complete|average|centroid|median");
  cluster->add_flag("--square-input", cargs.square_input,
                    "square the dissimilarities before clustering");
  cluster->add_flag("--sqrt-heights", cargs.sqrt_heights,
                    "square-root the output heights");
  cluster->add_flag("--force-scale", cargs.force_scale,
                    "run despite an input-scale mismatch (non-Ward result)");
  cluster->add_option("--algorithm", cargs.algorithm, "agglomeration driver")
      ->check(CLI::IsMember({"naive", "nnchain"}));
  cluster->add_option("--n", cargs.declared_n,
                      "declared observation count for condensed input");
  cluster->add_option("--out", cargs.out, "output path prefix");
  cluster
      ->add_option("--format", cargs.formats,
                   "merge-table|newick|json|svg (repeatable)")
      ->delimiter(',');

  int exp_n = 20, exp_p = 4;
  std::uint64_t exp_seed = 1;
  auto* experiments = app.add_subcommand(
      "experiments", "run the ward.D/ward.D2 identity verification suite");
  experiments->add_option("--n", exp_n, "observations")->check(CLI::Range(3, 100000));
  experiments->add_option("--p", exp_p, "attributes")->check(CLI::Range(1, 10000));
  experiments->add_option("--seed", exp_seed, "random seed");

  std::string cmp_a, cmp_b, cmp_map = "identity";
  double cmp_tol = 1e-9;
  auto* compare = app.add_subcommand(
      "compare", "compare two exported dendrogram json files");
  compare->add_option("--a", cmp_a, "first dendrogram json")->required();
  compare->add_option("--b", cmp_b, "second dendrogram json")->required();
  compare->add_option("--map", cmp_map, "height map applied to the first tree")
      ->check(CLI::IsMember({"identity", "sqrt", "square"}));
  compare->add_option("--tol", cmp_tol, "height deviation tolerance");

  auto* formats =
      app.add_subcommand("export-formats", "list supported export formats");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (cluster->parsed()) return run_cluster(cargs);
    if (experiments->parsed()) return run_experiments_cmd(exp_n, exp_p, exp_seed);
    if (compare->parsed()) return run_compare(cmp_a, cmp_b, cmp_map, cmp_tol);
    if (formats->parsed()) {
      std::printf("merge-table\nnewick\njson\nsvg\n");
      return 0;
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 1;
}
