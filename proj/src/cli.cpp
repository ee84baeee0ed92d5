#include "recurdim/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <ostream>

#include "recurdim/dimension.hpp"

namespace recurdim {

namespace {

using nlohmann::json;

std::string format(const char* fmt, ...) {
  va_list args;
  va_start(args, fmt);
  char buf[512];
  std::vsnprintf(buf, sizeof buf, fmt, args);
  va_end(args);
  return buf;
}

template <typename T>
std::string join(const std::vector<T>& items, const char* sep = ",") {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(items[i]);
  }
  return out;
}

json nullable(double value) { return std::isfinite(value) ? json(value) : json(nullptr); }

template <typename T>
json nullable(const std::optional<T>& value) {
  return value ? json(*value) : json(nullptr);
}

struct Settings {
  bool quiet = false;
  int resolution = 0;
  double tol = 1e-10;
  std::string path;
  int component = 1;
  int level = 1;
  int kmax = 10;
  int pmax = 8;
  int p = 1;
  int pmin = 1;
  std::string kind = "upper";
  std::string out_path;
  std::string svg_path;
  bool json = false;
  bool empirical = false;
};

Partition make_partition(const RfifSpec& spec, int r, int depth) {
  const auto comps = components(build_address_graph(spec), spec);
  return build_partition(spec, comps, r, depth);
}

SampledRfif solve(const RfifSpec& spec, const Settings& s) {
  return solve_rfif(spec, s.resolution > 0 ? s.resolution : default_resolution(spec), s.tol);
}

int cmd_validate(const RfifSpec& spec, std::ostream& out) {
  const auto report = validate_spec(spec);
  out << report.to_text();
  for (const auto& note : report.notes) out << "note\t" << note << '\n';
  if (!report.passed) return kExitInvalid;
  out << "passed";
  for (std::size_t r = 0; r < report.ratios.size(); ++r) out << " T_" << r + 1 << '=' << report.ratios[r];
  out << '\n';
  return kExitOk;
}

int cmd_scc(const RfifSpec& spec, std::ostream& out) {
  const auto graph = build_address_graph(spec);
  const auto comps = components(graph, spec);
  for (const auto& c : comps) out << "r=" << c.index << " members=" << join(c.members) << " T=" << c.ratio << '\n';
  const auto pos = positions(graph, comps);
  for (int i = 1; i <= spec.size(); ++i) out << "P(" << i << ")=" << pos(i) << '\n';
  return kExitOk;
}

int cmd_partition(const RfifSpec& spec, const Settings& s, std::ostream& out) {
  const auto part = make_partition(spec, s.component, s.level);
  const auto& grid = part.grid();
  const auto& level = part.level(s.level);
  out << "theta=" << join(level.theta) << '\n';
  for (int i = 1; i <= grid.count(s.level); ++i) {
    out << "i=" << i << " I=" << to_string(grid.interval(s.level, i)) << " D=" << to_string(grid.preimage(s.level, i))
        << " owner=" << grid.owner(s.level, i) << " survives=" << (level.survives(i) ? "true" : "false") << '\n';
  }
  return kExitOk;
}

int cmd_matrix(const RfifSpec& spec, const Settings& s, std::ostream& out) {
  const auto kind = parse_matrix_kind(s.kind);
  const auto part = make_partition(spec, s.component, is_star(kind) ? s.level + 1 : s.level);
  const auto M = build_matrix(spec, part, s.level, kind);
  out << "i,j,value\n";
  for (Eigen::Index row = 0; row < M.entries.outerSize(); ++row) {
    for (SparseMatrix::InnerIterator it(M.entries, row); it; ++it) {
      out << M.index_set[static_cast<std::size_t>(row)] << ',' << M.index_set[static_cast<std::size_t>(it.col())]
          << ',' << format("%.17g", it.value()) << '\n';
    }
  }
  return kExitOk;
}

int cmd_spectra(const RfifSpec& spec, const Settings& s, std::ostream& out) {
  const auto part = make_partition(spec, s.component, s.kmax);
  auto seq = spectra_sequence(spec, part, s.kmax);
  seq.one_sided = !k_star(spec, part, s.kmax).has_value();
  if (s.json) {
    json doc = {{"component", seq.component},
                {"upper_rho", seq.upper_rho},
                {"lower_rho", seq.lower_rho},
                {"bracket", {seq.bracket_lo, seq.bracket_hi}},
                {"estimate", seq.estimate},
                {"one_sided", seq.one_sided}};
    out << doc.dump(2) << '\n';
    return kExitOk;
  }
  out << "k,rho_upper,rho_lower\n";
  for (int k = 1; k <= seq.levels(); ++k) {
    out << k << ',' << format("%.6g", seq.upper_rho[k - 1]) << ',' << format("%.6g", seq.lower_rho[k - 1]) << '\n';
  }
  out << format("# bracket=[%.6g,%.6g] estimate=%.6g one_sided=%s\n", seq.bracket_lo, seq.bracket_hi, seq.estimate,
                seq.one_sided ? "true" : "false");
  return kExitOk;
}

void write_svg(const SampledRfif& f, std::ostream& svg) {
  constexpr double width = 1000, height = 600, pad = 20;
  const double lo = f.values.minCoeff(), hi = f.values.maxCoeff();
  const double span = hi > lo ? hi - lo : 1.0;
  const auto n = f.samples();
  // Keep the extremes of each pixel column so the polyline shows the full oscillation.
  const std::int64_t buckets = std::min<std::int64_t>(n, 2000);
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"1000\" height=\"600\" viewBox=\"0 0 1000 600\">\n"
      << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" points=\"";
  auto point = [&](std::int64_t m) {
    const double x = pad + (width - 2 * pad) * static_cast<double>(m) / static_cast<double>(n - 1);
    const double y = height - pad - (height - 2 * pad) * (f.values[m] - lo) / span;
    svg << format("%.2f,%.2f ", x, y);
  };
  for (std::int64_t b = 0; b < buckets; ++b) {
    const std::int64_t a = b * n / buckets, e = (b + 1) * n / buckets;
    if (e <= a) continue;
    Eigen::Index imin = 0, imax = 0;
    f.values.segment(a, e - a).minCoeff(&imin);
    f.values.segment(a, e - a).maxCoeff(&imax);
    point(a + std::min(imin, imax));
    point(a + std::max(imin, imax));
  }
  svg << "\"/>\n</svg>\n";
}

int cmd_render(const RfifSpec& spec, const Settings& s, std::ostream& out) {
  const auto f = solve(spec, s);
  std::ofstream file;
  if (!s.out_path.empty()) {
    file.open(s.out_path);
    if (!file) throw std::invalid_argument("cannot write " + s.out_path);
  }
  std::ostream& csv = s.out_path.empty() ? out : file;
  csv << "x,f(x)\n";
  for (std::int64_t m = 0; m < f.samples(); ++m) csv << format("%.12f,%.12g\n", f.x(m), f.values[m]);
  if (!s.svg_path.empty()) {
    std::ofstream svg(s.svg_path);
    if (!svg) throw std::invalid_argument("cannot write " + s.svg_path);
    write_svg(f, svg);
  }
  return kExitOk;
}

int cmd_oscillation(const RfifSpec& spec, const Settings& s, std::ostream& out) {
  const auto part = make_partition(spec, s.component, s.level);
  const auto f = solve(spec, s);
  const auto& grid = part.grid();
  double total = 0.0;
  for (int i : part.level(s.level).theta) {
    const Interval I = grid.interval(s.level, i);
    const double o = oscillation_sum(f, grid.ratio(), s.p, I);
    total += o;
    out << "i=" << i << " I=" << to_string(I) << " O=" << format("%.12g", o) << '\n';
  }
  out << "total=" << format("%.12g", total) << '\n';
  return kExitOk;
}

json to_json(const DimensionReport& rep) {
  json comps = json::array();
  for (const auto& c : rep.components) {
    const auto& ce = c.certificate;
    comps.push_back({{"component", c.component},
                     {"members", c.members},
                     {"ratio", c.ratio},
                     {"spectra",
                      {{"upper_rho", c.spectra.upper_rho},
                       {"lower_rho", c.spectra.lower_rho},
                       {"bracket", {c.spectra.bracket_lo, c.spectra.bracket_hi}},
                       {"estimate", c.spectra.estimate},
                       {"one_sided", c.spectra.one_sided}}},
                     {"k_star", nullable(c.k_star)},
                     {"certificate",
                      {{"status", to_string(ce.status)},
                       {"level", ce.level},
                       {"column_min", ce.column_min},
                       {"f_bound", ce.f_bound},
                       {"xi_norm", ce.xi_norm},
                       {"threshold", nullable(ce.threshold)},
                       {"observed", ce.observed},
                       {"witness_p", nullable(ce.witness_p)},
                       {"p_evaluated", ce.p_evaluated},
                       {"tilde_vanishes", ce.tilde_vanishes},
                       {"finite_radius", ce.finite_radius}}},
                     {"inherited_from", nullable(c.inherited_from)},
                     {"d_star",
                      {{"lo", c.d_star.lo},
                       {"hi", c.d_star.hi},
                       {"value", c.d_star.value},
                       {"collapsed", c.d_star.collapsed},
                       {"flagged", c.d_star.flagged}}}});
  }
  json doc = {{"components", comps},
              {"positions", rep.positions},
              {"upper_bound", rep.upper_bound},
              {"exact", nullable(rep.exact)},
              {"exact_from_squeeze", rep.exact_from_squeeze},
              {"resolution", rep.resolution},
              {"sup_error", rep.sup_error},
              {"empirical", nullptr}};
  if (rep.empirical) {
    json ladder = json::array();
    for (const auto& b : rep.empirical->ladder) ladder.push_back({{"p", b.p}, {"epsilon", b.epsilon}, {"count", b.count}});
    doc["empirical"] = {{"slope", rep.empirical->slope},
                        {"stderr", rep.empirical->stderr_},
                        {"ratio", rep.empirical->ratio},
                        {"ladder", ladder}};
  }
  return doc;
}

int cmd_dimension(const RfifSpec& spec, const Settings& s, std::ostream& out) {
  AnalysisOptions options;
  options.kmax = s.kmax;
  options.pmax = s.pmax;
  options.resolution = s.resolution;
  options.tol = s.tol;
  options.empirical = s.empirical;
  const auto rep = analyze(spec, options);
  if (s.json) {
    out << to_json(rep).dump(2) << '\n';
    return kExitOk;
  }
  out << "components: " << rep.components.size() << '\n';
  for (const auto& c : rep.components) {
    const auto& ce = c.certificate;
    out << "r=" << c.component << " members=" << join(c.members) << " T=" << c.ratio
        << " k*=" << (c.k_star ? std::to_string(*c.k_star) : "unverified") << '\n';
    out << format("  rho bracket=[%.6f, %.6f] estimate=%.6f%s\n", c.spectra.bracket_lo, c.spectra.bracket_hi,
                  c.spectra.estimate, c.spectra.one_sided ? " (one-sided)" : "");
    out << "  variation=" << to_string(ce.status);
    if (c.inherited_from) {
      out << " inherited from I_" << *c.inherited_from;
    } else if (ce.witness_p) {
      out << format(" level=%d c=%.6g xi=%.6g threshold=%.6g witness p=%d", ce.level, ce.column_min, ce.xi_norm,
                    ce.threshold, *ce.witness_p);
    }
    out << '\n';
    if (c.d_star.collapsed) {
      out << format("  d*=%.6f%s\n", c.d_star.value, c.d_star.flagged ? " (unverified)" : "");
    } else {
      out << format("  d* in [%.6f, %.6f]%s\n", c.d_star.lo, c.d_star.hi, c.d_star.flagged ? " (unverified)" : "");
    }
  }
  out << "positions: ";
  for (std::size_t i = 0; i < rep.positions.size(); ++i) out << (i ? " " : "") << "P(" << i + 1 << ")=" << rep.positions[i];
  out << '\n';
  out << format("upper_bound = %.6f\n", rep.upper_bound);
  if (rep.exact) {
    out << format("exact ≈ %.3f (%.6f)%s\n", *rep.exact, *rep.exact, rep.exact_from_squeeze ? " from upper_bound = 1" : "");
  } else {
    out << "exact: not certified\n";
  }
  if (rep.empirical) {
    out << format("empirical slope = %.4f ± %.4f (T=%d, p=%d..%d)\n", rep.empirical->slope, rep.empirical->stderr_,
                  rep.empirical->ratio, rep.empirical->ladder.front().p, rep.empirical->ladder.back().p);
  }
  out << format("resolution Q=%d sup_error=%.3g\n", rep.resolution, rep.sup_error);
  return kExitOk;
}

int cmd_boxcount(const RfifSpec& spec, const Settings& s, std::ostream& out) {
  const auto part = make_partition(spec, s.component, 1);
  const auto runs = part.basic_set(1);
  const Interval J{runs.front().lo, runs.back().hi};
  const auto f = solve(spec, s);
  out << "p,epsilon,count\n";
  for (const auto& b : box_ladder(f, part.grid().ratio(), s.pmin, s.pmax, J)) {
    out << b.p << ',' << format("%.12g", b.epsilon) << ',' << b.count << '\n';
  }
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Box-dimension bounds for graphs of recurrent fractal interpolation functions", "recurdim"};
  app.require_subcommand(1);
  app.fallthrough();
  Settings s;
  app.add_flag("--quiet", s.quiet, "Suppress the banner");
  app.add_option("--resolution", s.resolution, "Samples per interval Q (0 picks the default)")
      ->check(CLI::NonNegativeNumber);
  app.add_option("--tol", s.tol, "Fixed-point tolerance")->check(CLI::PositiveNumber);

  auto command = [&](const char* name, const char* about) {
    auto* c = app.add_subcommand(name, about);
    c->add_option("spec", s.path, "Spec file")->required();
    return c;
  };
  auto component = [&](CLI::App* c) { c->add_option("--component", s.component, "Component r")->check(CLI::PositiveNumber); };
  auto level = [&](CLI::App* c) {
    c->add_option("--level", s.level, "Level k")->check(CLI::Range(1, kMaxLevel));
  };

  auto* validate = command("validate", "Check the spec against the structural conditions");
  auto* scc = command("scc", "Strongly connected components and positions");
  auto* partition = command("partition", "Basic intervals of one level");
  component(partition);
  level(partition);
  auto* matrix = command("matrix", "Restricted scaling matrix as i,j,value");
  component(matrix);
  level(matrix);
  matrix->add_option("--kind", s.kind, "upper, lower, star_upper or star_lower");
  auto* spectra = command("spectra", "Spectral radii of the restricted matrices");
  component(spectra);
  spectra->add_option("--kmax", s.kmax, "Deepest level")->check(CLI::Range(1, kMaxLevel));
  spectra->add_flag("--json", s.json, "Emit JSON");
  auto* render = command("render", "Sample the fixed point as x,f(x)");
  render->add_option("--out", s.out_path, "CSV output file (default stdout)");
  render->add_option("--svg", s.svg_path, "Also write an SVG polyline");
  auto* oscillation = command("oscillation", "Oscillation sums per basic interval");
  component(oscillation);
  level(oscillation);
  oscillation->add_option("--p", s.p, "Depth p")->check(CLI::NonNegativeNumber);
  auto* dimension = command("dimension", "Box-dimension report");
  dimension->add_option("--kmax", s.kmax, "Deepest level")->check(CLI::Range(1, kMaxLevel));
  dimension->add_option("--pmax", s.pmax, "Deepest oscillation depth for the certificate")->check(CLI::PositiveNumber);
  dimension->add_flag("--empirical", s.empirical, "Add a box-counting regression");
  dimension->add_flag("--json", s.json, "Emit JSON");
  auto* boxcount = command("boxcount", "Anchored box counts on the T_r-adic ladder");
  component(boxcount);
  boxcount->add_option("--pmin", s.pmin, "First ladder depth")->check(CLI::NonNegativeNumber);
  boxcount->add_option("--pmax", s.pmax, "Last ladder depth")->check(CLI::NonNegativeNumber);

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? kExitOk : kExitUsage;
  }
  if (!s.quiet) err << "recurdim 0.1.0\n";

  try {
    const auto spec = load_spec(s.path);
    if (validate->parsed()) return cmd_validate(spec, out);
    const auto report = validate_spec(spec);
    if (!report.passed) {
      err << report.to_text();
      return kExitInvalid;
    }
    if (scc->parsed()) return cmd_scc(spec, out);
    if (partition->parsed()) return cmd_partition(spec, s, out);
    if (matrix->parsed()) return cmd_matrix(spec, s, out);
    if (spectra->parsed()) return cmd_spectra(spec, s, out);
    if (render->parsed()) return cmd_render(spec, s, out);
    if (oscillation->parsed()) return cmd_oscillation(spec, s, out);
    if (dimension->parsed()) return cmd_dimension(spec, s, out);
    if (boxcount->parsed()) return cmd_boxcount(spec, s, out);
  } catch (const SpecError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const RatioError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const ConvergenceError& e) {
    err << "error: " << e.what() << format(" (last bracket [%.6g, %.6g])\n", e.lower(), e.upper());
    return kExitNumeric;
  } catch (const ResolutionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitNumeric;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitInvalid;
  }
  return kExitUsage;
}

}  // namespace recurdim
