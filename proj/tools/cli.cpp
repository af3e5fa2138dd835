#include "cli.hpp"

#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "vcl/balance.hpp"
#include "vcl/catalog.hpp"
#include "vcl/config.hpp"
#include "vcl/error.hpp"
#include "vcl/jacobian.hpp"
#include "vcl/solver.hpp"
#include "vcl/surface.hpp"

#ifndef VCL_VERSION
#define VCL_VERSION "0.0.0"
#endif

namespace vcl::cli {
namespace {

using json = nlohmann::ordered_json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

json to_json(cplx z) { return json::array({z.real(), z.imag()}); }
json to_json(const Vec3& v) { return json::array({v[0], v[1], v[2]}); }

json to_json(const Motion& m) { return {{"v", to_json(m.v)}, {"omega", m.omega}}; }

json to_json(const CrystalClass& cls) {
  return {{"kind", std::string(to_string(cls.kind))},
          {"n", cls.n},
          {"n_plus", cls.n_plus},
          {"n_minus", cls.n_minus},
          {"m", cls.m}};
}

json to_json(const BalanceReport& r) {
  json res = json::array();
  for (cplx z : r.residuals) res.push_back(to_json(z));
  json j{{"balanced", r.balanced}, {"sup_norm", r.sup_norm}, {"tol", r.tol}, {"residuals", res}};
  if (r.moment1_residual) j["moment1_residual"] = to_json(*r.moment1_residual);
  if (r.moment2_residual) j["moment2_residual"] = to_json(*r.moment2_residual);
  if (r.crystal_class) j["class"] = to_json(*r.crystal_class);
  return j;
}

json to_json(const RankReport& r) {
  return {{"rank", r.rank},
          {"null_dim", r.null_dim},
          {"max_possible_rank", r.max_possible_rank},
          {"domain_dim", r.domain_dim},
          {"nondegenerate", r.nondegenerate},
          {"degenerate", !r.nondegenerate},
          {"rank_tol", r.rank_tol},
          {"singular_values", r.singular_values}};
}

json to_json(const LimitPeriods& p) {
  json j{{"eps", p.eps}, {"nu", to_json(p.nu)}, {"t0", to_json(p.t0)}};
  if (p.screw_angle) j["screw_angle"] = *p.screw_angle;
  if (p.t1) j["t1"] = to_json(*p.t1);
  if (p.t2) j["t2"] = to_json(*p.t2);
  if (p.psi1_limit) j["psi1_limit"] = *p.psi1_limit;
  if (p.psi2_limit) j["psi2_limit"] = *p.psi2_limit;
  if (p.moment_xy) j["moment_xy"] = json::array({p.moment_xy->first, p.moment_xy->second});
  j["quotient_genus"] = p.quotient_genus;
  j["ends"] = p.end_description;
  return j;
}

json document_json(const VortexConfig& c, const std::optional<Motion>& m,
                   const std::optional<SymmetryGroup>& g = std::nullopt) {
  return json::parse(serialize_config(c, m, g));
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out || !(out << text)) throw Error(ErrorKind::Io, "cannot write " + path);
}

// Balance tolerance: --tol wins, then VCL_TOL, then the command's default.
double resolve_tol(const std::optional<double>& flag, double fallback) {
  if (flag) return *flag;
  if (const char* env = std::getenv("VCL_TOL"); env && *env) {
    char* end = nullptr;
    const double t = std::strtod(env, &end);
    if (*end != '\0' || !(t > 0.0)) throw UsageError(std::string("VCL_TOL is not a positive number: ") + env);
    return t;
  }
  return fallback;
}

struct FamilyParams {
  int n = 3;
  int sigma = 1;
  int m = 1;
  int j = 1;
  int k = 1;
  int center_sigma = -1;
  bool outer = false;
  double b = 0.3;
  bool unstaggered = false;
  double tau_re = 0.0;
  double tau_im = 1.0;
  double offset_re = 0.5;
  double offset_im = 0.5;
};

const std::vector<std::string> kFamilies{"pair",           "thomson",     "hermite", "interlaced-hermite",
                                         "polygon-center", "nested-polygons", "adler-moser", "karman",
                                         "dipole"};

void add_family_flags(CLI::App& sub, FamilyParams& p) {
  sub.add_option("--n", p.n, "vortex count (thomson, hermite, polygon-center)");
  sub.add_option("--sigma", p.sigma, "circulation of the polygon vortices (thomson)");
  sub.add_option("--m", p.m, "interlaced Hermite index");
  sub.add_option("--j", p.j, "Adler-Moser index, 1..8");
  sub.add_option("--k", p.k, "nested polygon index");
  sub.add_option("--center-sigma", p.center_sigma, "circulation of the centre vortex (polygon-center)");
  sub.add_flag("--outer", p.outer, "use the root r > 1 of the ratio equation (nested-polygons)");
  sub.add_option("--b", p.b, "row separation (karman)");
  sub.add_flag("--unstaggered", p.unstaggered, "aligned rows instead of staggered (karman)");
  sub.add_option("--tau-re", p.tau_re, "lattice modulus, real part (dipole)");
  sub.add_option("--tau-im", p.tau_im, "lattice modulus, imaginary part (dipole)");
  sub.add_option("--offset-re", p.offset_re, "second vortex position, real part (dipole)");
  sub.add_option("--offset-im", p.offset_im, "second vortex position, imaginary part (dipole)");
}

Crystal build_family(const std::string& name, const FamilyParams& p) {
  if (name == "pair") return vortex_pair();
  if (name == "thomson") return thomson(p.n, p.sigma);
  if (name == "hermite") return hermite_config(p.n);
  if (name == "interlaced-hermite") return interlaced_hermite(p.m);
  if (name == "polygon-center") return polygon_with_center(p.n, p.center_sigma);
  if (name == "nested-polygons") return nested_polygons(p.k, p.outer);
  if (name == "adler-moser") return adler_moser_config(p.j);
  if (name == "karman") return karman_street(p.b, !p.unstaggered);
  if (name == "dipole") return doubly_dipole({p.tau_re, p.tau_im}, {p.offset_re, p.offset_im});
  throw UsageError("unknown family " + name);
}

double* sweep_parameter(const std::string& name, FamilyParams& p) {
  static const std::map<std::string, double FamilyParams::*> table{
      {"b", &FamilyParams::b},           {"tau-re", &FamilyParams::tau_re},
      {"tau-im", &FamilyParams::tau_im}, {"offset-re", &FamilyParams::offset_re},
      {"offset-im", &FamilyParams::offset_im}};
  const auto it = table.find(name);
  if (it == table.end()) throw UsageError("--param must be one of b, tau-re, tau-im, offset-re, offset-im");
  return &(p.*(it->second));
}

struct Loaded {
  ConfigDocument doc;
  std::string digest;
};

Loaded load(const std::string& path) {
  const std::string text = read_file(path);
  return {parse_config(text), fnv1a_hex(text)};
}

Motion motion_of(const ConfigDocument& doc) { return doc.motion ? *doc.motion : infer_motion(doc.config); }

struct Context {
  json outputs = json::object();
  std::optional<std::string> digest;
  int exit_code = kOk;
};

}  // namespace

std::string_view version() noexcept { return VCL_VERSION; }

std::string fnv1a_hex(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : bytes) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream ss;
  ss << std::hex << std::setw(16) << std::setfill('0') << h;
  return ss.str();
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  const auto start = std::chrono::steady_clock::now();
  CLI::App app{"Find, verify and analyse binary point-vortex crystals.", "vcl"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(version()));

  Context ctx;
  std::function<void()> action;
  std::optional<double> tol_flag;
  std::string config_path;
  std::string output_path;
  FamilyParams fam;
  std::string family;

  auto add_config = [&](CLI::App* sub) {
    sub->add_option("config", config_path, "configuration document (JSON)")->required();
  };
  auto add_tol = [&](CLI::App* sub, std::string_view fallback) {
    sub->add_option("--tol", tol_flag,
                    "balance tolerance on the residual sup-norm (default " + std::string(fallback) +
                        ", or VCL_TOL)");
  };

  // generate
  auto* gen = app.add_subcommand("generate", "emit a catalog crystal as a configuration document");
  gen->add_option("family", family, "crystal family")->required()->check(CLI::IsMember(kFamilies));
  add_family_flags(*gen, fam);
  gen->add_option("-o,--output", output_path, "write the document here instead of into the report");
  gen->callback([&] {
    action = [&] {
      const auto [c, m] = build_family(family, fam);
      std::optional<SymmetryGroup> group;
      if (family == "adler-moser") group = adler_moser_symmetry();
      json doc = document_json(c, m, group);
      if (output_path.empty()) {
        ctx.outputs["document"] = doc;
      } else {
        write_file(output_path, doc.dump(2) + "\n");
        ctx.outputs["files"] = json::array({output_path});
      }
      ctx.outputs["balance"] = to_json(balance_report(c, m, resolve_tol(std::nullopt, kDefaultBalanceTol)));
    };
  });

  // check
  auto* check = app.add_subcommand("check", "balance residuals, moments and class of a configuration");
  add_config(check);
  add_tol(check, "1e-12");
  check->callback([&] {
    action = [&] {
      const Loaded in = load(config_path);
      ctx.digest = in.digest;
      const Motion m = motion_of(in.doc);
      const BalanceReport r = balance_report(in.doc.config, m, resolve_tol(tol_flag, kDefaultBalanceTol));
      ctx.outputs["motion"] = to_json(m);
      ctx.outputs["motion_inferred"] = !in.doc.motion.has_value();
      ctx.outputs["balance"] = to_json(r);
      if (!r.balanced) ctx.exit_code = kDomainError;
    };
  });

  // solve
  bool use_symmetry = false;
  int max_iter = 50;
  auto* solve = app.add_subcommand("solve", "Gauss-Newton refinement to a balanced crystal");
  add_config(solve);
  add_tol(solve, "1e-12");
  solve->add_option("--max-iter", max_iter, "iteration cap")->check(CLI::PositiveNumber);
  solve->add_flag("--symmetry", use_symmetry,
                  "refine inside the symmetric subspace (document group, else detected)");
  solve->add_option("-o,--output", output_path, "write the refined document here");
  solve->callback([&] {
    action = [&] {
      const Loaded in = load(config_path);
      ctx.digest = in.digest;
      const Motion m = motion_of(in.doc);
      SolveSettings s;
      s.max_iter = max_iter;
      const SymmetryGroup group =
          use_symmetry ? (in.doc.symmetry ? *in.doc.symmetry : detect_symmetries(in.doc.config)) : SymmetryGroup{};
      SolveResult res = use_symmetry ? refine_symmetric(in.doc.config, m, group, s) : refine(in.doc.config, m, s);
      const BalanceReport r = balance_report(res.config, res.motion, resolve_tol(tol_flag, kDefaultBalanceTol));
      json doc = document_json(res.config, res.motion, use_symmetry ? std::optional(group) : std::nullopt);
      if (output_path.empty()) {
        ctx.outputs["document"] = doc;
      } else {
        write_file(output_path, doc.dump(2) + "\n");
        ctx.outputs["files"] = json::array({output_path});
      }
      ctx.outputs["iterations"] = res.iterations;
      ctx.outputs["balance"] = to_json(r);
      if (!r.balanced) ctx.exit_code = kDomainError;
    };
  });

  // rank
  double rank_tol = 0.0;
  bool require_nondegenerate = false;
  auto* rank = app.add_subcommand("rank", "Jacobian rank and nondegeneracy");
  add_config(rank);
  add_tol(rank, "1e-10");
  rank->add_flag("--symmetry", use_symmetry,
                 "also report the rank restricted to symmetric perturbations (document group, else detected)");
  rank->add_option("--rank-tol", rank_tol, "relative singular-value threshold (default 2n * 1e-11)");
  rank->add_flag("--require-nondegenerate", require_nondegenerate, "exit 1 when the crystal is degenerate");
  rank->callback([&] {
    action = [&] {
      const Loaded in = load(config_path);
      ctx.digest = in.digest;
      const Motion m = motion_of(in.doc);
      const double tol = resolve_tol(tol_flag, 1e-10);
      const CrystalClass cls = classify(in.doc.config, m, tol);
      const RankReport full = rank_report(in.doc.config, m, cls, rank_tol, tol);
      ctx.outputs["motion"] = to_json(m);
      ctx.outputs["class"] = to_json(cls);
      ctx.outputs["rank"] = to_json(full);
      bool ok = full.nondegenerate;
      if (use_symmetry) {
        const SymmetryGroup group = in.doc.symmetry ? *in.doc.symmetry : detect_symmetries(in.doc.config);
        const RankReport restricted = restricted_rank_report(in.doc.config, m, cls, group, rank_tol, tol);
        json rj = to_json(restricted);
        rj["group_order"] = group.order();
        ctx.outputs["restricted_rank"] = rj;
        ok = ok || restricted.nondegenerate;
      }
      if (require_nondegenerate && !ok) ctx.exit_code = kDomainError;
    };
  });

  // integrate
  double t_end = 1.0;
  double dt = 1e-3;
  int record_every = 1;
  auto* integ = app.add_subcommand("integrate", "RK4 integration of the vortex dynamics");
  add_config(integ);
  integ->add_option("--t-end", t_end, "final time")->required();
  integ->add_option("--dt", dt, "step size")->required();
  integ->add_option("--record-every", record_every, "keep every k-th step in the trajectory file")
      ->check(CLI::PositiveNumber);
  integ->add_option("-o,--output", output_path, "trajectory CSV (t,k,re,im)");
  integ->callback([&] {
    action = [&] {
      const Loaded in = load(config_path);
      ctx.digest = in.digest;
      const Trajectory tr = integrate(in.doc.config, t_end, dt, record_every);
      ctx.outputs["samples"] = tr.times.size();
      ctx.outputs["rigidity_drift"] = rigidity_drift(tr);
      json fit = json::array();
      for (const Motion& m : tr.motion_fit) fit.push_back(to_json(m));
      ctx.outputs["motion_fit_first"] = fit.front();
      ctx.outputs["motion_fit_last"] = fit.back();
      json last = json::array();
      for (cplx z : tr.states.back()) last.push_back(to_json(z));
      ctx.outputs["final_positions"] = last;
      if (!output_path.empty()) {
        std::ostringstream csv;
        csv.precision(17);
        csv << "t,k,re,im\n";
        for (std::size_t s = 0; s < tr.times.size(); ++s) {
          for (std::size_t k = 0; k < tr.states[s].size(); ++k) {
            csv << tr.times[s] << ',' << k << ',' << tr.states[s][k].real() << ',' << tr.states[s][k].imag() << '\n';
          }
        }
        write_file(output_path, csv.str());
        ctx.outputs["files"] = json::array({output_path});
      }
    };
  });

  // sweep
  std::string param;
  double from = 0.0;
  double to = 1.0;
  int steps = 10;
  auto* sw = app.add_subcommand("sweep", "refine and rank a one-parameter family");
  sw->add_option("family", family, "crystal family")->required()->check(CLI::IsMember(kFamilies));
  add_family_flags(*sw, fam);
  sw->add_option("--param", param, "swept parameter: b, tau-re, tau-im, offset-re or offset-im")->required();
  sw->add_option("--from", from, "first parameter value")->required();
  sw->add_option("--to", to, "last parameter value")->required();
  sw->add_option("--steps", steps, "number of samples")->required()->check(CLI::PositiveNumber);
  sw->callback([&] {
    action = [&] {
      FamilyParams local = fam;
      double* slot = sweep_parameter(param, local);
      const FamilyGenerator gen_fn = [&](double x) {
        *slot = x;
        return build_family(family, local);
      };
      json rows = json::array();
      for (const SweepStep& st : sweep(gen_fn, from, to, steps)) {
        rows.push_back({{"param", st.param},
                        {"motion", to_json(st.motion)},
                        {"sup_norm", sup_norm(residual(st.config, st.motion))},
                        {"rank", st.rank.rank},
                        {"max_possible_rank", st.rank.max_possible_rank},
                        {"nondegenerate", st.rank.nondegenerate},
                        {"rank_changed", st.rank_changed}});
      }
      ctx.outputs["steps"] = rows;
    };
  });

  // field
  int grid = 64;
  double radius = 0.0;
  auto* field = app.add_subcommand("field", "sample the flow field on a grid");
  add_config(field);
  field->add_option("--grid", grid, "cells per side")->check(CLI::Range(1, 4096));
  field->add_option("--radius", radius, "half-width of the sampled square (default from the configuration)");
  field->add_option("-o,--output", output_path, "CSV path (x,y,u_re,u_im)")->required();
  field->callback([&] {
    action = [&] {
      const Loaded in = load(config_path);
      ctx.digest = in.digest;
      std::ostringstream csv;
      write_field_csv(in.doc.config, grid, csv, radius);
      write_file(output_path, csv.str());
      ctx.outputs["files"] = json::array({output_path});
    };
  });

  // mesh
  MeshSettings ms;
  auto* mesh = app.add_subcommand("mesh", "triangle mesh of the rescaled limit surface");
  add_config(mesh);
  mesh->add_option("--eps", ms.eps, "horizontal scale; x and y are divided by eps")->check(CLI::PositiveNumber);
  mesh->add_option("--turns", ms.turns, "copies of each sheet stacked by 2 pi")->check(CLI::PositiveNumber);
  mesh->add_option("--grid", ms.grid, "cells per side of the sampling square")->check(CLI::Range(1, 4096));
  mesh->add_option("--radius", ms.radius, "outer radius (default from the configuration)");
  mesh->add_option("--exclusion", ms.exclusion, "hole radius around each vortex (default 0.05 * min distance)");
  mesh->add_option("-o,--output", output_path, "OBJ path; vortex lines go to <stem>_lines.obj")->required();
  mesh->callback([&] {
    action = [&] {
      const Loaded in = load(config_path);
      ctx.digest = in.digest;
      const Mesh mh = export_mesh(in.doc.config, ms);
      std::ostringstream obj;
      std::ostringstream lines;
      write_obj(mh, obj);
      write_obj_lines(mh, lines);
      std::filesystem::path lines_path(output_path);
      lines_path.replace_filename(lines_path.stem().string() + "_lines.obj");
      write_file(output_path, obj.str());
      write_file(lines_path.string(), lines.str());
      ctx.outputs["vertices"] = mh.vertices.size();
      ctx.outputs["faces"] = mh.faces.size();
      ctx.outputs["triangles_per_sheet_turn"] = mh.triangles_per_sheet_turn;
      ctx.outputs["grid"] = {{"cells", mh.grid.cells},
                             {"spacing", mh.grid.spacing},
                             {"radius", mh.grid.radius},
                             {"exclusion", mh.grid.exclusion}};
      ctx.outputs["files"] = json::array({output_path, lines_path.string()});
    };
  });

  // limits
  double eps = 0.1;
  auto* limits = app.add_subcommand("limits", "period vectors, genus and ends of the limit surfaces");
  add_config(limits);
  add_tol(limits, "1e-10");
  limits->add_option("--eps", eps, "scale parameter")->required()->check(CLI::PositiveNumber);
  limits->callback([&] {
    action = [&] {
      const Loaded in = load(config_path);
      ctx.digest = in.digest;
      const Motion m = motion_of(in.doc);
      ctx.outputs["motion"] = to_json(m);
      ctx.outputs["limits"] = to_json(limit_periods(in.doc.config, m, eps, resolve_tol(tol_flag, 1e-10)));
    };
  });

  auto fail = [&](std::string_view kind, std::string_view message, int code) {
    err << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
    return code;
  };

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    return fail("usage", e.what(), kUsageError);
  }

  try {
    action();
  } catch (const UsageError& e) {
    return fail("usage", e.what(), kUsageError);
  } catch (const Error& e) {
    return fail(to_string(e.kind()), e.what(), kDomainError);
  } catch (const std::exception& e) {
    return fail("internal", e.what(), kDomainError);
  }

  const double wall = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  json report{{"command", args},
              {"input_digest", ctx.digest ? json("fnv1a64:" + *ctx.digest) : json(nullptr)},
              {"outputs", ctx.outputs},
              {"wall_time_s", wall},
              {"version", version()}};
  out << report.dump(2) << '\n';
  return ctx.exit_code;
}

}  // namespace vcl::cli
