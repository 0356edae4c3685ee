#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "symcone/symcone.hpp"

namespace cli = symcone::cli;

namespace {

void add_common(CLI::App* sub, cli::Common& c) {
  sub->add_option("input", c.input, "Input cone file")->required()->check(CLI::ExistingFile);
  sub->add_option("-o,--output", c.output, "Result file (default: stdout)");
  sub->add_option("--report", c.report, "Write the key=value report to this file");
  sub->add_flag("-q,--quiet", c.quiet, "Do not print the report");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Dual description of polyhedral cones with symmetry"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "symcone 1.0");

  cli::DdArgs dd;
  auto* c_dd = app.add_subcommand("dd", "Convert between H- and V-representation");
  add_common(c_dd, dd.common);
  c_dd->add_option("--max-rays", dd.max_rays, "Abort when an intermediate cone exceeds this many rays")->capture_default_str();

  cli::AdjDecompArgs ad;
  auto* c_ad = app.add_subcommand("adjdecomp", "Orbits of facets (V input) or rays (H input) by adjacency decomposition");
  add_common(c_ad, ad.common);
  c_ad->add_option("--threshold", ad.threshold, "Incidence above which a facet is handled recursively (default 4(n-1))");
  c_ad->add_option("--max-depth", ad.max_depth, "Recursion depth limit")->capture_default_str();
  c_ad->add_option("-j,--jobs", ad.jobs, "Worker threads")->capture_default_str();
  c_ad->add_option("--max-orbits", ad.max_orbits, "Stop after this many orbits (verdict ESTIMATE)")->capture_default_str();
  c_ad->add_option("--seeds", ad.seeds, "File whose rows are known facets to start from")->check(CLI::ExistingFile);
  c_ad->add_flag("--representatives", ad.representatives_only, "Write one row per orbit instead of all rows");

  cli::IncidenceArgs inc;
  auto* c_inc = app.add_subcommand("incidence", "Ray orbits of an H-file by the incidence method");
  add_common(c_inc, inc.common);
  c_inc->add_option("-k", inc.k, "Dimension of the faces to enumerate")->capture_default_str();

  cli::FixedConeArgs fc;
  auto* c_fc = app.add_subcommand("fixedcone", "Fixed cone of a symmetry, or facets with nontrivial symmetry");
  add_common(c_fc, fc.common);
  c_fc->add_option("-g,--generator", fc.generator, "Permutation, e.g. \"(1 2)(3 4)\"");

  cli::SubconeArgs sc;
  auto* c_sc = app.add_subcommand("subcone", "Extreme rays from a known subcone and splitting inequalities");
  add_common(c_sc, sc.common);
  c_sc->add_option("--split", sc.split, "File whose rows are the splitting inequalities")->required()->check(CLI::ExistingFile);

  cli::SkeletonArgs sk;
  auto* c_sk = app.add_subcommand("skeleton", "Adjacency graph of the k-faces");
  add_common(c_sk, sk.common);
  c_sk->add_option("-k", sk.k, "Face dimension")->capture_default_str();
  c_sk->add_option("--dot", sk.dot, "Write the graph in DOT format");
  c_sk->add_flag("--quotient", sk.quotient, "Quotient by the symmetry group (report and DOT)");
  c_sk->add_option("--remove-orbits", sk.remove_orbits, "Orbit ids to delete before testing connectivity");
  c_sk->add_option("-j,--jobs", sk.jobs, "Worker threads")->capture_default_str();
  c_sk->add_option("--max-faces", sk.max_faces, "Face count cap")->capture_default_str();

  cli::OrbitsArgs ob;
  auto* c_ob = app.add_subcommand("orbits", "Orbit table of the rows under the symmetry block");
  add_common(c_ob, ob.common);

  cli::CheckArgs ck;
  auto* c_ck = app.add_subcommand("check", "Verify an H-file and a V-file describe the same cone");
  c_ck->add_option("hfile", ck.hfile, "H-representation")->required()->check(CLI::ExistingFile);
  c_ck->add_option("vfile", ck.vfile, "V-representation")->required()->check(CLI::ExistingFile);
  c_ck->add_option("--report", ck.report, "Write the key=value report to this file");
  c_ck->add_flag("-q,--quiet", ck.quiet, "Do not print the report");

  cli::GenerateArgs gen;
  auto* c_gen = app.add_subcommand("generate", "Write the cut cone (V) or metric cone (H) on n points");
  c_gen->add_option("family", gen.family, "cut or metric")->required()->check(CLI::IsMember({"cut", "metric"}));
  c_gen->add_option("n", gen.n, "Number of points, 3..8")->required();
  c_gen->add_option("-o,--output", gen.output, "Output file (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : cli::kExitError;
  }

  const cli::Streams s{std::cout, std::cerr};
  try {
    if (c_dd->parsed()) return cli::cmd_dd(dd, s);
    if (c_ad->parsed()) return cli::cmd_adjdecomp(ad, s);
    if (c_inc->parsed()) return cli::cmd_incidence(inc, s);
    if (c_fc->parsed()) return cli::cmd_fixedcone(fc, s);
    if (c_sc->parsed()) return cli::cmd_subcone(sc, s);
    if (c_sk->parsed()) return cli::cmd_skeleton(sk, s);
    if (c_ob->parsed()) return cli::cmd_orbits(ob, s);
    if (c_ck->parsed()) return cli::cmd_check(ck, s);
    if (c_gen->parsed()) return cli::cmd_generate(gen, s);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return cli::kExitError;
  }
  return cli::kExitError;
}
