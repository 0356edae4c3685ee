#pragma once

// Command implementations behind the symcone executable. Each command reads
// files, writes its result file (or stdout), prints a human report to the
// error stream and optionally writes the machine report. Return value is the
// process exit code: 0 complete, 2 partial, 1 error or failed check.

#include <algorithm>
#include <chrono>
#include <cstddef>
#include <cstdint>
#include <optional>
#include <ostream>
#include <set>
#include <string>
#include <vector>

#include "symcone/adjacency.hpp"
#include "symcone/cone.hpp"
#include "symcone/group.hpp"
#include "symcone/instances.hpp"
#include "symcone/io.hpp"
#include "symcone/lp.hpp"
#include "symcone/methods.hpp"

namespace symcone::cli {

constexpr int kExitComplete = 0;
constexpr int kExitError = 1;
constexpr int kExitPartial = 2;

inline int exit_code(Verdict v) { return v == Verdict::Complete ? kExitComplete : kExitPartial; }

struct Streams {
  std::ostream& out;
  std::ostream& err;
};

struct Common {
  std::string input;
  std::string output;  // empty: stdout
  std::string report;  // machine report path, optional
  bool quiet = false;
};

namespace detail {

class Timer {
 public:
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_ = std::chrono::steady_clock::now();
};

inline void emit(const Common& c, const Streams& s, const std::string& text) {
  if (c.output.empty())
    s.out << text;
  else
    write_text_file(c.output, text);
}

inline int finish(const Common& c, const Streams& s, RunReport& rep, const Timer& t) {
  rep.seconds = t.seconds();
  if (!c.report.empty()) write_text_file(c.report, rep.machine());
  if (!c.quiet) s.err << rep.text();
  return exit_code(rep.verdict);
}

inline PermGroup group_or_warn(const ConeFile& f, RunReport& rep, const Streams& s) {
  if (f.symmetry) return *f.symmetry;
  const std::string msg = "no symmetry block; using the trivial group";
  s.err << "warning: " << msg << '\n';
  rep.notes.push_back(msg);
  return PermGroup::trivial(f.dim);
}

/// Orbit table of rows that must form a union of orbits.
inline std::vector<ReportOrbit> orbit_table(const std::vector<QVector>& rows, const PermGroup& G, const std::string& what) {
  check_symmetry(rows, G, what);
  return report_orbits(orbit_partition(canonical_rows(rows), G).orbits);
}

inline ConeFile make_file(Representation kind, std::size_t dim, std::vector<QVector> rows,
                          std::optional<PermGroup> symmetry) {
  ConeFile f;
  f.kind = kind;
  f.dim = dim;
  f.rows = std::move(rows);
  f.symmetry = std::move(symmetry);
  return f;
}

inline Representation opposite(Representation r) { return r == Representation::H ? Representation::V : Representation::H; }

inline void require_kind(const ConeFile& f, Representation kind, const std::string& path) {
  if (f.kind != kind)
    throw Error(path + ": expected " + std::string(kind == Representation::H ? "an H" : "a V") + "-representation");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// dd

struct DdArgs {
  Common common;
  std::size_t max_rays = DDOptions{}.max_rays;
};

inline int cmd_dd(const DdArgs& a, const Streams& s) {
  detail::Timer t;
  const ConeFile in = read_cone_file(a.common.input);
  RunReport rep;
  rep.method = "dd";
  const PermGroup G = in.group();
  rep.group_order = G.order();
  DDOptions dd{a.max_rays};
  std::vector<QVector> rows;
  if (in.kind == Representation::H) {
    rows = double_description(in.hrep(), dd).rays;
  } else {
    rows = dual_description(in.vrep(), dd).facets;
  }
  rep.add("input_rows", in.rows.size());
  rep.add("output_rows", rows.size());
  rep.orbits = detail::orbit_table(rows, G, "output");
  detail::emit(a.common, s, print_cone_file(detail::make_file(detail::opposite(in.kind), in.dim, rows, in.symmetry)));
  return detail::finish(a.common, s, rep, t);
}

// ---------------------------------------------------------------------------
// adjdecomp

struct AdjDecompArgs {
  Common common;
  std::optional<std::size_t> threshold;
  std::size_t max_depth = DecompositionOptions{}.max_depth;
  std::size_t jobs = 1;
  std::size_t max_orbits = DecompositionOptions{}.max_orbits;
  std::string seeds;  // file whose rows are known facets (or rays, for H input)
  bool representatives_only = false;
};

/**
 * Orbits of the opposite description. A V-file yields facet orbits; an
 * H-file is handled on the dual cone and yields ray orbits.
 */
inline int cmd_adjdecomp(const AdjDecompArgs& a, const Streams& s) {
  detail::Timer t;
  const ConeFile in = read_cone_file(a.common.input);
  RunReport rep;
  rep.method = "adjdecomp";
  const PermGroup G = detail::group_or_warn(in, rep, s);
  rep.group_order = G.order();

  DecompositionOptions opts;
  opts.recursion_threshold = a.threshold;
  opts.max_depth = a.max_depth;
  opts.jobs = std::max<std::size_t>(1, a.jobs);
  opts.max_orbits = a.max_orbits;
  if (!a.seeds.empty()) {
    const ConeFile sf = read_cone_file(a.seeds);
    if (sf.dim != in.dim) throw DimensionMismatch(a.seeds + ": seed dimension differs from the input");
    opts.seeds = sf.rows;
  }

  const OrbitDatabase db = adjacency_decomposition(ConeVRep(in.dim, in.rows), G, opts);
  rep.verdict = db.verdict;
  for (const auto& [_, e] : db.entries) {
    rep.orbits.push_back(ReportOrbit{e.representative, e.orbit_size, e.stabilizer_order, e.incidence, to_string(e.status)});
    if (!e.note.empty()) rep.notes.push_back(to_string(e.representative) + ": " + e.note);
  }
  const std::size_t threshold = a.threshold ? *a.threshold : 4 * (in.dim - 1);
  rep.add("recursion_threshold", threshold);
  rep.add("max_depth", a.max_depth);
  rep.add("open_orbits", db.open_count());
  rep.add("rounds", db.stats.rounds);
  rep.add("subcone_dd", db.stats.subcone_dd);
  rep.add("recursive_calls", db.stats.recursive_calls);
  rep.add("ridges_lifted", db.stats.ridges_lifted);
  rep.add("depth_reached", db.stats.max_depth);

  std::vector<QVector> rows;
  std::optional<PermGroup> sym = in.symmetry;
  if (a.representatives_only) {
    for (const auto& [_, e] : db.entries) rows.push_back(e.representative);
    sym.reset();
  } else {
    rows = expand_orbits(db.orbits(), G);
  }
  detail::emit(a.common, s, print_cone_file(detail::make_file(detail::opposite(in.kind), in.dim, rows, sym)));
  return detail::finish(a.common, s, rep, t);
}

// ---------------------------------------------------------------------------
// incidence

struct IncidenceArgs {
  Common common;
  std::size_t k = 1;
};

inline int cmd_incidence(const IncidenceArgs& a, const Streams& s) {
  detail::Timer t;
  const ConeFile in = read_cone_file(a.common.input);
  detail::require_kind(in, Representation::H, a.common.input);
  RunReport rep;
  rep.method = "incidence";
  const PermGroup G = detail::group_or_warn(in, rep, s);
  rep.group_order = G.order();
  const auto res = incidence_method(in.hrep(), G, a.k);
  rep.orbits = report_orbits(res.ray_orbits);
  rep.add("k", a.k);
  rep.add("face_representatives", res.face_representatives.size());
  rep.add("subcones", res.subcones);
  detail::emit(a.common, s,
               print_cone_file(detail::make_file(Representation::V, in.dim, expand_orbits(res.ray_orbits, G), in.symmetry)));
  return detail::finish(a.common, s, rep, t);
}

// ---------------------------------------------------------------------------
// fixedcone

struct FixedConeArgs {
  Common common;
  std::string generator;  // cycle or image notation; empty runs the symmetric facet search
};

/**
 * With a generator: the fixed cone of the cyclic group it generates, as a
 * V-file in coordinates of a basis of the fixed subspace. Without: facets of
 * the input having a nontrivial symmetry, found through every class of
 * cyclic subgroups; facets without symmetry are missed, hence CONJECTURED.
 */
inline int cmd_fixedcone(const FixedConeArgs& a, const Streams& s) {
  detail::Timer t;
  const ConeFile in = read_cone_file(a.common.input);
  detail::require_kind(in, Representation::V, a.common.input);
  RunReport rep;
  rep.method = "fixedcone";
  if (!a.generator.empty()) {
    std::istringstream text(a.generator + "\n");
    ::symcone::detail::LineReader r(text, "--generator");
    const Permutation g = ::symcone::detail::parse_permutation(r.next(), in.dim, r);
    const PermGroup H(in.dim, {g});
    rep.group_order = H.order();
    const FixedCone fc = fixed_cone(in.vrep(), H);
    rep.add("generator", g.to_cycle_string());
    rep.add("fixed_dim", fc.m);
    for (std::size_t i = 0; i < fc.m; ++i) rep.add("basis." + std::to_string(i), to_string(fc.basis_W[i]));
    rep.add("fixed_rays", fc.cone_in_W.rays.size());
    for (std::size_t i = 0; i < fc.ambient_rays.size(); ++i)
      rep.add("ambient_ray." + std::to_string(i), to_string(fc.ambient_rays[i]));
    detail::emit(a.common, s, print_cone_file(detail::make_file(Representation::V, fc.m, fc.cone_in_W.rays, std::nullopt)));
    return detail::finish(a.common, s, rep, t);
  }
  const PermGroup G = detail::group_or_warn(in, rep, s);
  rep.group_order = G.order();
  const auto res = facets_with_symmetry(in.vrep(), G);
  rep.verdict = Verdict::Conjectured;
  rep.orbits = report_orbits(res.orbits);
  for (std::size_t i = 0; i < res.pieces.size(); ++i) {
    const auto& p = res.pieces[i];
    const std::string key = "subgroup." + std::to_string(i) + ".";
    rep.add(key + "generator", p.generator.to_cycle_string());
    rep.add(key + "fixed_dim", p.fixed_dim);
    rep.add(key + "fixed_facets", p.fixed_facets);
    rep.add(key + "lifted", p.lifted);
    rep.add(key + "skipped", p.skipped ? "yes" : "no");
  }
  for (const auto& n : res.notices) rep.notes.push_back(n);
  rep.notes.push_back("only facets with a nontrivial symmetry are searched");
  detail::emit(a.common, s,
               print_cone_file(detail::make_file(Representation::H, in.dim, expand_orbits(res.orbits, G), in.symmetry)));
  return detail::finish(a.common, s, rep, t);
}

// ---------------------------------------------------------------------------
// subcone

struct SubconeArgs {
  Common common;
  std::string split;  // file whose rows are the splitting inequalities
};

inline int cmd_subcone(const SubconeArgs& a, const Streams& s) {
  detail::Timer t;
  const ConeFile in = read_cone_file(a.common.input);
  detail::require_kind(in, Representation::H, a.common.input);
  if (!in.known_rays) throw Error(a.common.input + ": subcone needs a known_rays block");
  const ConeFile sp = read_cone_file(a.split);
  if (sp.dim != in.dim) throw DimensionMismatch(a.split + ": split dimension differs from the input");
  RunReport rep;
  rep.method = "subcone";
  const PermGroup G = detail::group_or_warn(in, rep, s);
  rep.group_order = G.order();
  const SubconeSplit split{in.hrep(), sp.rows, ConeVRep(in.dim, *in.known_rays)};
  const auto res = subcone_method(split, G);
  rep.orbits = report_orbits(res.ray_orbits);
  rep.add("known_rays", in.known_rays->size());
  rep.add("new_rays", res.new_rays.size());
  for (std::size_t i = 0; i < res.pieces.size(); ++i) {
    const auto& p = res.pieces[i];
    const std::string key = "piece." + std::to_string(i) + ".";
    rep.add(key + "split", to_string(p.split));
    rep.add(key + "inequalities", p.inequalities);
    rep.add(key + "rays", p.rays);
    rep.add(key + "new_extreme", p.new_extreme);
  }
  detail::emit(a.common, s,
               print_cone_file(detail::make_file(Representation::V, in.dim, expand_orbits(res.ray_orbits, G), in.symmetry)));
  return detail::finish(a.common, s, rep, t);
}

// ---------------------------------------------------------------------------
// skeleton

struct SkeletonArgs {
  Common common;
  std::size_t k = 1;
  std::string dot;  // DOT file for the graph (or the quotient with --quotient)
  bool quotient = false;
  std::vector<std::size_t> remove_orbits;
  std::size_t jobs = 1;
  std::size_t max_faces = SkeletonOptions{}.max_faces;
};

/**
 * k-skeleton adjacency lists of the input cone; the other description is
 * computed first. Orbit ids for --remove-orbits refer to the quotient order
 * (by canonical representative).
 */
inline int cmd_skeleton(const SkeletonArgs& a, const Streams& s) {
  detail::Timer t;
  const ConeFile in = read_cone_file(a.common.input);
  RunReport rep;
  rep.method = "skeleton";
  const bool need_group = a.quotient || !a.remove_orbits.empty();
  const PermGroup G = need_group ? detail::group_or_warn(in, rep, s) : in.group();
  rep.group_order = G.order();
  ConeHRep h(in.dim, {});
  ConeVRep v(in.dim, {});
  if (in.kind == Representation::H) {
    h = in.hrep().canonical();
    v = double_description(h);
  } else {
    v = in.vrep().canonical();
    h = dual_description(v);
  }
  const auto sk = skeleton(a.k, h, v, SkeletonOptions{a.max_faces, std::max<std::size_t>(1, a.jobs)});
  rep.add("k", a.k);
  rep.add("nodes", sk.node_count());
  rep.add("edges", sk.edges.size());
  const std::size_t N = sk.node_count();
  rep.add("complete", sk.edges.size() == N * (N - 1) / 2 ? "yes" : "no");
  std::optional<QuotientGraph> q;
  if (need_group) {
    q = quotient_graph(sk, G);
    for (std::size_t i = 0; i < q->representatives.size(); ++i)
      rep.orbits.push_back(ReportOrbit{q->representatives[i], q->orbit_sizes[i], G.order() / q->orbit_sizes[i],
                                       std::nullopt, "TREATED"});
    for (std::size_t i = 0; i < q->edges.size(); ++i)
      rep.add("quotient_edge." + std::to_string(i), std::to_string(q->edges[i].a) + "-" + std::to_string(q->edges[i].b));
    if (!a.remove_orbits.empty()) {
      for (auto o : a.remove_orbits)
        if (o >= q->node_count()) throw Error("--remove-orbits: no orbit " + std::to_string(o));
      const auto c = connectivity_after_removal(sk, *q, a.remove_orbits);
      rep.add("remaining_nodes", c.remaining_nodes);
      rep.add("components", c.components);
      rep.add("connected", c.connected ? "yes" : "no");
    }
  }
  if (!a.dot.empty()) write_text_file(a.dot, q && a.quotient ? to_dot(*q) : to_dot(sk));
  detail::emit(a.common, s, adjacency_list_text(sk));
  return detail::finish(a.common, s, rep, t);
}

// ---------------------------------------------------------------------------
// orbits

struct OrbitsArgs {
  Common common;
};

/** Orbit table of the rows; writes one representative per orbit. */
inline int cmd_orbits(const OrbitsArgs& a, const Streams& s) {
  detail::Timer t;
  const ConeFile in = read_cone_file(a.common.input);
  RunReport rep;
  rep.method = "orbits";
  const PermGroup G = detail::group_or_warn(in, rep, s);
  rep.group_order = G.order();
  rep.orbits = detail::orbit_table(in.rows, G, "rows");
  std::vector<QVector> reps;
  for (const auto& o : rep.orbits) reps.push_back(o.representative);
  detail::emit(a.common, s, print_cone_file(detail::make_file(in.kind, in.dim, reps, std::nullopt)));
  return detail::finish(a.common, s, rep, t);
}

// ---------------------------------------------------------------------------
// check

struct CheckArgs {
  std::string hfile;
  std::string vfile;
  std::string report;
  bool quiet = false;
};

/**
 * Verifies a claimed pair: every product a.r >= 0, each row of H is a facet,
 * each row of V is an extreme ray, H and V determine each other, and each
 * symmetry block maps both row sets to themselves with
 * |orbit| * |stabilizer| = |G|. Exit 0 iff everything holds.
 */
inline int cmd_check(const CheckArgs& a, const Streams& s) {
  detail::Timer t;
  const ConeFile hf = read_cone_file(a.hfile);
  const ConeFile vf = read_cone_file(a.vfile);
  detail::require_kind(hf, Representation::H, a.hfile);
  detail::require_kind(vf, Representation::V, a.vfile);
  if (hf.dim != vf.dim) throw DimensionMismatch("check: the two files have different dimensions");
  const ConeHRep h = hf.hrep().canonical();
  const ConeVRep v = vf.vrep().canonical();
  RunReport rep;
  rep.method = "check";
  std::vector<std::string> failures;
  auto fail = [&](std::string msg) { failures.push_back(std::move(msg)); };

  bool valid = true;
  for (const auto& f : h.facets)
    for (const auto& r : v.rays)
      if (sgn(dot(f, r)) < 0) {
        fail("ray " + to_string(r) + " violates inequality " + to_string(f));
        valid = false;
      }
  rep.add("validity", valid ? "pass" : "fail");

  bool facets_ok = true;
  for (const auto& f : h.facets)
    if (!is_facet_of(v, f)) {
      fail("inequality " + to_string(f) + " is not a facet of the cone generated by the rays");
      facets_ok = false;
    }
  rep.add("facetness", facets_ok ? "pass" : "fail");

  bool rays_ok = true;
  for (const auto& r : v.rays)
    if (!is_extreme_ray_of(h, r)) {
      fail("ray " + to_string(r) + " is not an extreme ray of the inequality cone");
      rays_ok = false;
    }
  rep.add("extremality", rays_ok ? "pass" : "fail");

  // Completeness: the rays of H are exactly V, and the facets of V exactly H.
  bool round_trip = false;
  try {
    const auto rays = canonical_rows(double_description(h).rays);
    const auto facets = canonical_rows(dual_description(v).facets);
    round_trip = rays == v.rays && facets == h.facets;
    if (!round_trip) {
      for (const auto& r : rays)
        if (!std::binary_search(v.rays.begin(), v.rays.end(), r)) fail("extreme ray " + to_string(r) + " is missing");
      for (const auto& f : facets)
        if (!std::binary_search(h.facets.begin(), h.facets.end(), f)) fail("facet " + to_string(f) + " is missing");
      if (failures.empty()) fail("descriptions differ");
    }
  } catch (const Error& e) {
    fail(std::string("round trip failed: ") + e.what());
  }
  rep.add("round_trip", round_trip ? "pass" : "fail");

  bool sym_ok = true;
  for (const auto* f : {&hf, &vf}) {
    if (!f->symmetry) continue;
    const PermGroup& G = *f->symmetry;
    rep.group_order = G.order();
    for (const auto* rows : {&h.facets, &v.rays}) {
      const auto part = orbit_partition(*rows, G);
      if (!part.stable) {
        fail("symmetry does not preserve the rows; image " + to_string(part.extension.front()) + " is missing");
        sym_ok = false;
        continue;
      }
      for (const auto& o : part.orbits)
        if (o.size * o.stabilizer_order != G.order()) {
          fail("orbit-stabilizer identity fails for " + to_string(o.representative));
          sym_ok = false;
        }
    }
  }
  rep.add("symmetry", sym_ok ? "pass" : "fail");
  rep.add("facets", h.facets.size());
  rep.add("rays", v.rays.size());
  rep.add("failures", failures.size());
  for (auto& m : failures) rep.notes.push_back(m);

  rep.seconds = t.seconds();
  if (!a.report.empty()) write_text_file(a.report, rep.machine());
  if (!a.quiet) s.err << rep.text();
  s.out << (failures.empty() ? "check passed\n" : "check FAILED\n");
  for (const auto& m : failures) s.out << "  " << m << '\n';
  return failures.empty() ? kExitComplete : kExitError;
}

// ---------------------------------------------------------------------------
// generate

struct GenerateArgs {
  std::string family;  // cut | metric
  std::size_t n = 0;
  std::string output;
};

inline ConeFile generate_file(const std::string& family, std::size_t n) {
  if (family == "cut") {
    auto inst = generate_cut_cone(n);
    return detail::make_file(Representation::V, inst.cone.dim, inst.cone.rays, inst.group);
  }
  if (family == "metric") {
    auto inst = generate_metric_cone(n);
    return detail::make_file(Representation::H, inst.cone.dim, inst.cone.facets, inst.group);
  }
  throw Error("unknown family '" + family + "' (expected cut or metric)");
}

inline int cmd_generate(const GenerateArgs& a, const Streams& s) {
  const std::string text = print_cone_file(generate_file(a.family, a.n));
  if (a.output.empty())
    s.out << text;
  else
    write_text_file(a.output, text);
  return kExitComplete;
}

}  // namespace symcone::cli
