// coarsekit: command-line front end over the coarse geometry library.
// Reports go to standard output as deterministic structured text; artifacts
// produced by build-style commands are written to --out. Exit codes: 0 when
// every verdict passes, 1 on verification failure, 2 on unknown commands or
// malformed input.

#include "coarse/constructions.hpp"
#include "coarse/group.hpp"
#include "coarse/io.hpp"
#include "coarse/kappa.hpp"
#include "coarse/metric_space.hpp"
#include "coarse/partial_translation.hpp"
#include "coarse/property_a.hpp"
#include "coarse/report.hpp"
#include "coarse/roe.hpp"

#include <CLI11.hpp>

#include <functional>
#include <iostream>
#include <numeric>
#include <optional>
#include <set>

using namespace coarse;

namespace {

struct Session {
  Report report;
  std::string out_path;
  bool wrote_artifact = false;
  double tol = kDefaultTol;

  io::json load(const std::string& flag, const std::string& path) {
    report.add_input(flag, digest_bytes(io::read_text_file(path)));
    return io::read_json_file(path);
  }

  void artifact(const io::json& doc) {
    if (out_path.empty()) return;
    io::write_text_file(out_path, doc.dump(2) + "\n");
    wrote_artifact = true;
  }

  int finish() {
    const std::string text = serialize_report(report);
    std::cout << text;
    if (!out_path.empty() && !wrote_artifact) io::write_text_file(out_path, text);
    return report.all_pass() ? 0 : 1;
  }
};

std::vector<int> resolve_points(const std::vector<std::string>& ids,
                                const FiniteMetricSpace& X) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(X.index_of(id));
  return out;
}

std::vector<int> resolve_elements(const std::vector<std::string>& ids,
                                  const FiniteGroup& G) {
  std::vector<int> out;
  out.reserve(ids.size());
  for (const auto& id : ids) out.push_back(G.index_of(id));
  return out;
}

// Total map X -> Y from a named-map document.
std::vector<int> resolve_total_map(const io::NamedMap& m, const FiniteMetricSpace& X,
                                   const std::function<int(const std::string&)>& target) {
  std::vector<int> f(static_cast<std::size_t>(X.size()), -1);
  for (std::size_t i = 0; i < m.domain.size(); ++i)
    f[static_cast<std::size_t>(X.index_of(m.domain[i]))] = target(m.values[i]);
  for (int v : f)
    if (v < 0) throw std::invalid_argument("map is not total on the space");
  return f;
}

void atlas_verdicts(Session& s, const FiniteMetricSpace& X, const Atlas& atlas) {
  const auto rep = verify_atlas(X, atlas);
  for (const auto& c : rep.charts) {
    const std::string tag = "R=" + std::to_string(c.radius);
    s.report.verdict(tag + " axiom1", c.axiom1, c.axiom1 ? "" : c.witness);
    s.report.verdict(tag + " axiom2", c.axiom2, "");
    s.report.verdict(tag + " axiom3", c.axiom3, c.axiom3 ? "" : c.witness);
    s.report.verdict(tag + " cotranslations", c.cotranslations_valid,
                     c.cotranslations_valid ? "" : c.witness);
    s.report.measure(tag + " k", static_cast<std::int64_t>(c.multiplicity));
    s.report.measure(tag + " free", std::string(c.free ? "true" : "false"));
    s.report.measure(tag + " globally_controlled",
                     std::string(c.globally_controlled ? "true" : "false"));
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"coarse geometry toolkit"};
  app.require_subcommand(1);

  Session s;
  std::string seed;
  app.add_option("--out", s.out_path, "artifact or report output path");
  app.add_option("--tol", s.tol, "numerical tolerance")->capture_default_str();
  app.add_option("--seed", seed, "seed recorded for randomized harnesses");

  std::string space_path, group_path, atlas_path, kernel_path, kernel2_path;
  std::string cert_path, map_path, graph_path, blocks_path, in_path, target_path;
  std::vector<Dist> radii;
  Dist R = 1, S = 0, imax = -1, level = -1;
  std::int64_t K = 1, J = 0;
  int nmax = 3, cap = 64, group_order = 0;
  int idx_n = 1, idx_i = 1, idx_n2 = 1, idx_i2 = 1;
  std::string method = "coloring", from, to;
  bool exact_mode = false, bound_mode = false;
  KappaCaps caps;

  auto* space_cmd = app.add_subcommand("space", "space documents");
  space_cmd->require_subcommand(1);
  auto* space_validate = space_cmd->add_subcommand("validate", "check a space document");
  space_validate->add_option("--space", space_path)->required();
  auto* space_fin = space_cmd->add_subcommand("fin", "finite-subsets union space");
  space_fin->add_option("--space", space_path)->required();
  space_fin->add_option("--K", K, "number of subsets")->required();

  auto* separate = app.add_subcommand("separate", "greedy separation coloring");
  separate->add_option("--space", space_path)->required();
  separate->add_option("--R", R)->required();

  auto* group_cmd = app.add_subcommand("group", "group documents");
  group_cmd->require_subcommand(1);
  auto* group_validate = group_cmd->add_subcommand("validate", "check a group document");
  group_validate->add_option("--group", group_path)->required();
  auto* group_metric = group_cmd->add_subcommand("metric", "word metric space");
  group_metric->add_option("--group", group_path)->required();

  auto* atlas_cmd = app.add_subcommand("atlas", "atlas construction and checks");
  atlas_cmd->require_subcommand(1);
  auto* atlas_build = atlas_cmd->add_subcommand("build", "construct an atlas");
  atlas_build->add_option("--method", method)
      ->check(CLI::IsMember({"coloring", "canonical", "pullback"}));
  atlas_build->add_option("--space", space_path);
  atlas_build->add_option("--group", group_path);
  atlas_build->add_option("--map", map_path);
  atlas_build->add_option("--R", radii)->delimiter(',')->required();
  auto* atlas_verify = atlas_cmd->add_subcommand("verify", "verify an atlas");
  atlas_verify->add_option("--space", space_path)->required();
  atlas_verify->add_option("--atlas", atlas_path)->required();

  auto* kappa_cmd = app.add_subcommand("kappa", "translation invariant search");
  kappa_cmd->add_option("--space", space_path)->required();
  kappa_cmd->add_option("--R", R)->required();
  kappa_cmd->add_flag("--exact", exact_mode);
  kappa_cmd->add_flag("--bound", bound_mode);
  kappa_cmd->add_option("--m", group_order, "cyclic group order for bound mode");
  kappa_cmd->add_option("--exact-size", caps.exact_size);
  kappa_cmd->add_option("--node-limit", caps.node_limit);

  auto* roe_cmd = app.add_subcommand("roe", "kernel and operator checks");
  roe_cmd->require_subcommand(1);
  auto* roe_prop = roe_cmd->add_subcommand("propagation", "propagation of a kernel");
  roe_prop->add_option("--space", space_path)->required();
  roe_prop->add_option("--kernel", kernel_path)->required();
  auto* roe_psd = roe_cmd->add_subcommand("psd", "positive type check");
  roe_psd->add_option("--kernel", kernel_path)->required();
  auto* roe_schur = roe_cmd->add_subcommand("schur", "entrywise product");
  roe_schur->add_option("--kernel", kernel_path)->required();
  roe_schur->add_option("--kernel2", kernel2_path)->required();
  auto* roe_dim = roe_cmd->add_subcommand("algebra-dim", "generated algebra dimension");
  roe_dim->add_option("--space", space_path)->required();
  roe_dim->add_option("--atlas", atlas_path)->required();
  roe_dim->add_option("--cap", cap);
  auto* roe_claim =
      roe_cmd->add_subcommand("claim", "positive block matrix of a free chart");
  roe_claim->add_option("--space", space_path)->required();
  roe_claim->add_option("--atlas", atlas_path)->required();
  roe_claim->add_option("--R", R, "chart radius (defaults to the only chart)");

  auto* propa_cmd = app.add_subcommand("propa", "property A certificates");
  propa_cmd->require_subcommand(1);
  auto* propa_verify = propa_cmd->add_subcommand("verify", "verify a certificate");
  propa_verify->add_option("--space", space_path)->required();
  propa_verify->add_option("--cert", cert_path)->required();
  auto* propa_ball = propa_cmd->add_subcommand("ball-cert", "normalized ball indicators");
  propa_ball->add_option("--space", space_path)->required();
  propa_ball->add_option("--S", S)->required();
  propa_ball->add_option("--R", R);
  auto* propa_convert = propa_cmd->add_subcommand("convert", "certificate conversions");
  propa_convert->add_option("--space", space_path)->required();
  propa_convert->add_option("--from", from)->required();
  propa_convert->add_option("--to", to)->required();
  propa_convert->add_option("--in", in_path)->required();
  propa_convert->add_option("--S", S, "truncation radius for kernel-roe -> l2");

  auto* tel_cmd = app.add_subcommand("telescope", "bounded-valence telescope");
  tel_cmd->require_subcommand(1);
  auto* tel_build = tel_cmd->add_subcommand("build", "construct the truncated telescope");
  tel_build->add_option("--space", space_path)->required();
  tel_build->add_option("--imax", imax)->required();
  auto* tel_check = tel_cmd->add_subcommand("check", "verify the embedding bounds");
  tel_check->add_option("--space", space_path)->required();
  tel_check->add_option("--R", R)->required();
  tel_check->add_option("--i", level, "level to use (default R+1)");
  tel_check->add_option("--imax", imax, "truncation when rebuilding (default i)");
  tel_check->add_option("--graph", graph_path, "verify a prebuilt graph document");

  auto* gammau_cmd = app.add_subcommand("gammau", "bounded-degree graph catalogue space");
  gammau_cmd->add_option("--nmax", nmax)->required();

  auto* morita_cmd = app.add_subcommand("morita", "coarse equivalence stabilization");
  morita_cmd->require_subcommand(1);
  auto* morita_inter = morita_cmd->add_subcommand("interleave", "index interleaving");
  morita_inter->add_option("--space", space_path)->required();
  morita_inter->add_option("--target", target_path)->required();
  morita_inter->add_option("--map", map_path)->required();
  morita_inter->add_option("--J", J)->required();
  auto* morita_conj =
      morita_cmd->add_subcommand("conjugate", "fiber isometry conjugation");
  morita_conj->add_option("--space", space_path)->required();
  morita_conj->add_option("--target", target_path)->required();
  morita_conj->add_option("--map", map_path)->required();
  morita_conj->add_option("--kernel", kernel_path)->required();
  morita_conj->add_option("--n", idx_n)->required();
  morita_conj->add_option("--i", idx_i)->required();
  morita_conj->add_option("--np", idx_n2)->required();
  morita_conj->add_option("--ip", idx_i2)->required();

  auto* limit_cmd = app.add_subcommand("limit-embed", "stabilized family differences");
  limit_cmd->add_option("--space", space_path)->required();
  limit_cmd->add_option("--group", group_path)->required();
  limit_cmd->add_option("--family", map_path)->required();

  auto* glue_cmd = app.add_subcommand("glue", "glue block kernels");
  glue_cmd->add_option("--blocks", blocks_path)->required();

  // Let --out/--tol/--seed appear after the subcommand as well.
  const std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* cmd) {
    cmd->fallthrough();
    for (auto* sub : cmd->get_subcommands({})) enable_fallthrough(sub);
  };
  for (auto* sub : app.get_subcommands({})) enable_fallthrough(sub);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    std::vector<std::string> parts;
    for (const auto* sub : app.get_subcommands()) {
      parts.push_back(sub->get_name());
      for (const auto* nested : sub->get_subcommands())
        parts.push_back(nested->get_name());
    }
    s.report.command = parts.empty() ? "" : parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) s.report.command += " " + parts[i];
    if (!seed.empty()) s.report.add_input("seed", seed);

    if (space_validate->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      s.report.verdict("space valid", true, "");
      s.report.measure("points", static_cast<std::int64_t>(X.size()));
      s.report.measure("diameter", X.diameter());
      s.artifact(io::save_space(X));
    } else if (space_fin->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto F = fin_space(X, K);
      s.report.measure("points", static_cast<std::int64_t>(F.size()));
      s.report.measure("blocks", K);
      s.report.verdict("fin space built", true, "");
      s.artifact(io::save_space(F));
    } else if (separate->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto color = greedy_separation(X, R);
      const int n_colors = *std::max_element(color.begin(), color.end());
      bool separated = true;
      for (int a = 0; a < X.size() && separated; ++a)
        for (int b = a + 1; b < X.size(); ++b)
          if (color[static_cast<std::size_t>(a)] == color[static_cast<std::size_t>(b)] &&
              X.distance(a, b) <= R) {
            separated = false;
            break;
          }
      s.report.verdict("classes separated", separated, "");
      s.report.measure("colors", static_cast<std::int64_t>(n_colors));
      io::json doc;
      doc["colors"] = color;
      s.artifact(doc);
    } else if (group_validate->parsed()) {
      const auto G = io::load_group(s.load("group", group_path));
      s.report.verdict("group valid", true, "");
      s.report.measure("order", static_cast<std::int64_t>(G.order()));
      s.artifact(io::save_group(G));
    } else if (group_metric->parsed()) {
      const auto G = io::load_group(s.load("group", group_path));
      const auto X = word_metric(G);
      bool invariant = true;
      for (int k = 0; k < G.order() && invariant; ++k)
        for (int g = 0; g < G.order() && invariant; ++g)
          for (int h = 0; h < G.order(); ++h)
            if (X.distance(G.multiply(k, g), G.multiply(k, h)) != X.distance(g, h)) {
              invariant = false;
              break;
            }
      s.report.verdict("left invariant", invariant, "");
      s.report.measure("diameter", X.diameter());
      s.artifact(io::save_space(X));
    } else if (atlas_build->parsed()) {
      std::optional<FiniteMetricSpace> X;
      Atlas atlas;
      if (method == "coloring") {
        X = io::load_space(s.load("space", space_path));
        atlas = build_atlas_coloring(*X, radii);
      } else if (method == "canonical") {
        const auto G = io::load_group(s.load("group", group_path));
        X = word_metric(G);
        atlas = canonical_atlas(G, radii);
      } else {
        X = io::load_space(s.load("space", space_path));
        const auto G = io::load_group(s.load("group", group_path));
        const auto maps = io::load_maps(s.load("map", map_path));
        if (maps.size() != 1) throw std::invalid_argument("expected a single map");
        const auto phi = resolve_total_map(
            maps[0], *X, [&](const std::string& id) { return G.index_of(id); });
        atlas = pullback_atlas(*X, phi, G, radii);
      }
      atlas_verdicts(s, *X, atlas);
      s.artifact(io::save_atlas(atlas));
    } else if (atlas_verify->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto atlas = io::load_atlas(s.load("atlas", atlas_path), X.size());
      atlas_verdicts(s, X, atlas);
    } else if (kappa_cmd->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      if (exact_mode == bound_mode)
        throw std::invalid_argument("choose exactly one of --exact and --bound");
      const KappaResult res = exact_mode ? kappa_search_exact(X, R, caps)
                                         : kappa_search_bound(X, R, group_order);
      s.report.measure("lower", static_cast<std::int64_t>(res.lower));
      s.report.measure("upper", static_cast<std::int64_t>(res.upper));
      s.report.measure("nodes", res.nodes);
      if (res.exact) s.report.measure("kappa", static_cast<std::int64_t>(res.upper));
      const bool kappa_ok = exact_mode ? res.exact : res.upper == 1;
      s.report.verdict(exact_mode ? "exact value determined" : "upper bound witnessed",
                       kappa_ok,
                       kappa_ok ? "" : "bounds [" + std::to_string(res.lower) + "," +
                                           std::to_string(res.upper) + "]");
      if (res.witness) {
        Atlas a;
        a.charts.push_back(*res.witness);
        const auto rep = verify_atlas(X, a);
        s.report.verdict("witness verifies", rep.pass(), "");
        s.artifact(io::save_atlas(a));
      }
    } else if (roe_prop->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto Kr = io::load_kernel(s.load("kernel", kernel_path));
      s.report.measure("propagation", propagation(X, Kr, s.tol));
      s.report.verdict("computed", true, "");
    } else if (roe_psd->parsed()) {
      const auto Kr = io::load_kernel(s.load("kernel", kernel_path));
      const auto rep = positive_type_check(Kr, s.tol);
      s.report.measure("least_eigenvalue", rep.least_eigenvalue);
      s.report.measure("residual", rep.residual);
      s.report.verdict("positive type", rep.positive,
                       rep.positive ? "" : format_sig12(rep.least_eigenvalue));
    } else if (roe_schur->parsed()) {
      const auto A = io::load_kernel(s.load("kernel", kernel_path));
      const auto B = io::load_kernel(s.load("kernel2", kernel2_path));
      const auto P = schur_multiply(A, B);
      s.report.verdict("product computed", true, "");
      s.artifact(io::save_kernel(P, ""));
    } else if (roe_dim->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto atlas = io::load_atlas(s.load("atlas", atlas_path), X.size());
      std::set<PartialBijection> gens;
      for (const auto& chart : atlas.charts)
        gens.insert(chart.translations.begin(), chart.translations.end());
      std::vector<Kernel> mats;
      for (const auto& t : gens) mats.push_back(translation_isometry(X.size(), t));
      const int dim = algebra_dimension(mats, cap, s.tol);
      s.report.measure("dimension", static_cast<std::int64_t>(dim));
      s.report.verdict("computed", true, "");
    } else if (roe_claim->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto atlas = io::load_atlas(s.load("atlas", atlas_path), X.size());
      const AtlasChart* chart = nullptr;
      for (const auto& c : atlas.charts)
        if (c.radius == R) chart = &c;
      if (!chart && roe_claim->count("--R") == 0 && atlas.charts.size() == 1)
        chart = &atlas.charts.front();
      if (!chart) throw std::invalid_argument("no chart with the requested radius");
      const auto M = claim_matrix(X, *chart);
      const Kernel Mc = M.cast<std::complex<double>>();
      const auto psd = positive_type_check(Mc, s.tol);
      s.report.measure("least_eigenvalue", psd.least_eigenvalue);
      s.report.verdict("block matrix positive", psd.positive,
                       psd.positive ? "" : format_sig12(psd.least_eigenvalue));
      bool entries_ok = true;
      std::string entry_witness;
      for (const auto& t : chart->translations)
        for (const auto& [x, y] : t.pairs())
          if (std::abs(M(x * X.size() + x, y * X.size() + y) - 1.0) > s.tol) {
            entries_ok = false;
            if (entry_witness.empty())
              entry_witness = "(" + X.point(x) + "," + X.point(y) + ")";
          }
      s.report.verdict("unit entries on covered pairs", entries_ok, entry_witness);
      s.artifact(io::save_kernel(Mc, ""));
    } else if (propa_verify->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto cert = io::load_certificate(s.load("cert", cert_path), X);
      const auto rep = verify_certificate(cert, X, s.tol);
      for (const auto& c : rep.checks) {
        const std::string witness =
            c.pass || !c.witness.empty() ? c.witness : format_sig12(c.measured);
        s.report.verdict(c.name, c.pass, witness);
        s.report.measure(c.name + " measured", c.measured);
      }
    } else if (propa_ball->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto cert = ball_certificate(X, S, R);
      s.report.measure("eps", cert.params.eps);
      s.report.verdict("certificate valid",
                       verify_certificate(cert, X, s.tol).valid(), "");
      s.artifact(io::save_certificate(cert, X));
    } else if (propa_convert->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto cert = io::load_certificate(s.load("in", in_path), X);
      if (to_string(cert.variant) != from)
        throw std::invalid_argument("input certificate is " + to_string(cert.variant) +
                                    ", not " + from);
      ConversionReport conv;
      PropACertificate out = cert;
      if (from == "yu-sets" && to == "l1") {
        out = yusets_to_l1(cert, X, &conv);
      } else if (from == "l1" && to == "l2") {
        out = l1_to_l2(cert, X, &conv);
      } else if (from == "l2-delta-weak" && to == "l2") {
        out = truncate_normalize(cert, X, &conv);
      } else if ((from == "l2" || from == "hilbert") && to == "kernel-real") {
        out = vectors_to_kernel(cert, X, &conv);
      } else if (from == "kernel-real" && to == "kernel-roe") {
        out = kernel_real_to_roe(cert);
      } else if (from == "kernel-roe" && to == "l2") {
        out = kernel_to_vectors(cert, X, S, &conv);
      } else {
        throw std::invalid_argument("unsupported conversion " + from + " -> " + to);
      }
      for (const auto& b : conv.bounds)
        s.report.verdict(b.name, b.pass,
                         b.pass || !b.witness.empty() ? b.witness
                                                      : format_sig12(b.measured));
      for (const auto& [name, value] : conv.measurements) s.report.measure(name, value);
      s.report.verdict("output verifies", verify_certificate(out, X, s.tol).valid(), "");
      s.artifact(io::save_certificate(out, X));
    } else if (tel_build->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto G = telescope_graph(X, imax);
      s.report.measure("vertices", static_cast<std::int64_t>(G.vertices.size()));
      int maxdeg = 0;
      for (const auto& nb : G.adj)
        maxdeg = std::max(maxdeg, static_cast<int>(nb.size()));
      s.report.measure("max_degree", static_cast<std::int64_t>(maxdeg));
      s.report.verdict("degree at most three", maxdeg <= 3, "");
      s.artifact(io::save_graph(G, X));
    } else if (tel_check->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const Dist use_level = level >= 0 ? level : R + 1;
      const TelescopeGraph G =
          graph_path.empty() ? telescope_graph(X, imax >= 0 ? imax : use_level)
                             : io::load_graph(s.load("graph", graph_path), X);
      const auto rep = telescope_check(X, G, R, use_level);
      s.report.measure("level", rep.level_used);
      s.report.measure("ball_bound", rep.ball_bound);
      s.report.measure("forward_bound", rep.forward_bound);
      s.report.measure("max_degree", static_cast<std::int64_t>(rep.max_degree));
      s.report.verdict("degree at most three", rep.degree_ok, "");
      s.report.verdict("forward bound", rep.forward_ok,
                       rep.forward_ok ? "" : rep.witness);
      s.report.verdict("backward bound", rep.backward_ok,
                       rep.backward_ok ? "" : rep.witness);
    } else if (gammau_cmd->parsed()) {
      const auto g = gamma_u(nmax);
      s.report.measure("components",
                       static_cast<std::int64_t>(g.component_sizes.size()));
      s.report.measure("points", static_cast<std::int64_t>(g.space.size()));
      s.report.verdict("catalogue built", true, "");
      s.artifact(io::save_space(g.space));
    } else if (morita_inter->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto Y = io::load_space(s.load("target", target_path));
      const auto maps = io::load_maps(s.load("map", map_path));
      if (maps.size() != 1) throw std::invalid_argument("expected a single map");
      const auto f = resolve_total_map(
          maps[0], X, [&](const std::string& id) { return Y.index_of(id); });
      const auto res = morita_interleave(f, Y.size(), J);
      s.report.verdict("injective", res.injective, res.injective ? "" : res.witness);
      s.report.verdict("residue image exact", res.residue_image_exact,
                       res.residue_image_exact ? "" : res.witness);
      io::json doc;
      io::json entries = io::json::array();
      for (const auto& e : res.entries)
        entries.push_back(io::json::array({X.point(e.x), e.j, Y.point(e.y), e.k}));
      doc["entries"] = std::move(entries);
      s.artifact(doc);
    } else if (morita_conj->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto Y = io::load_space(s.load("target", target_path));
      const auto maps = io::load_maps(s.load("map", map_path));
      const auto T = io::load_kernel(s.load("kernel", kernel_path));
      if (maps.size() != 1) throw std::invalid_argument("expected a single map");
      const auto f = resolve_total_map(
          maps[0], X, [&](const std::string& id) { return Y.index_of(id); });
      const auto rep =
          morita_conjugation_check(f, X, Y, T, idx_n, idx_i, idx_n2, idx_i2, s.tol);
      s.report.measure("propagation_in", rep.propagation_in);
      s.report.measure("propagation_out", rep.propagation_out);
      s.report.measure("bound", rep.bound);
      s.report.verdict("propagation within bound", rep.within_bound,
                       rep.within_bound
                           ? ""
                           : "propagation " + std::to_string(rep.propagation_out) +
                                 " > bound " + std::to_string(rep.bound));
      s.artifact(io::save_kernel(rep.conjugated, ""));
    } else if (limit_cmd->parsed()) {
      const auto X = io::load_space(s.load("space", space_path));
      const auto G = io::load_group(s.load("group", group_path));
      const auto maps = io::load_maps(s.load("family", map_path));
      std::vector<std::vector<int>> domains, values;
      for (const auto& m : maps) {
        domains.push_back(resolve_points(m.domain, X));
        values.push_back(resolve_elements(m.values, G));
      }
      const auto res = limit_embedding(domains, values, X, G);
      s.report.verdict("family stabilizes", res.stabilized,
                       res.stabilized ? "" : res.witness);
      if (res.stabilized) {
        s.report.verdict("cocycle identities", res.cocycle_ok,
                         res.cocycle_ok ? "" : res.witness);
        s.report.verdict("metric agreement", res.metric_ok,
                         res.metric_ok ? "" : res.witness);
        io::json doc;
        io::json psi = io::json::object();
        for (int x = 0; x < X.size(); ++x)
          psi[X.point(x)] = G.element(res.psi[static_cast<std::size_t>(x)]);
        doc["psi"] = std::move(psi);
        io::json g = io::json::array();
        for (int x = 0; x < X.size(); ++x)
          for (int y = 0; y < X.size(); ++y)
            g.push_back(io::json::array({X.point(x), X.point(y), G.element(res.g(x, y))}));
        doc["g"] = std::move(g);
        s.artifact(doc);
      }
    } else if (glue_cmd->parsed()) {
      const auto doc = io::load_glue(s.load("blocks", blocks_path));
      const auto res = glue_local_kernel(doc.blocks, doc.R, doc.eps, s.tol);
      s.report.measure("least_eigenvalue", res.psd.least_eigenvalue);
      s.report.measure("variation", res.variation);
      s.report.measure("propagation", res.propagation);
      s.report.measure("vanish_bound", res.vanish_bound);
      s.report.measure("fused_blocks", static_cast<std::int64_t>(res.fused.size()));
      s.report.verdict("positive type", res.psd.positive,
                       res.psd.positive ? "" : format_sig12(res.psd.least_eigenvalue));
      s.report.verdict("variation", res.variation_ok,
                       res.variation_ok ? "" : format_sig12(res.variation));
      s.report.verdict("vanishes beyond bound", res.vanish_ok,
                       res.vanish_ok ? "" : "propagation " +
                                                std::to_string(res.propagation));
      s.artifact(io::save_kernel(res.kernel, ""));
    } else {
      std::cerr << "error: no operation selected\n";
      return 2;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return s.finish();
}
