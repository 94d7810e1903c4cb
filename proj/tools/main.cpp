// cubicslice: numerical experiments on multiplier slices of the cubic
// polynomial family P_{lambda,c}(z) = lambda z (1 - (1+1/c)z/2 + z^2/(3c)).

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <string>
#include <vector>

#include "cubicslice/attracting.hpp"
#include "cubicslice/family.hpp"
#include "cubicslice/image.hpp"
#include "cubicslice/parabolic.hpp"
#include "cubicslice/potential.hpp"
#include "cubicslice/render.hpp"
#include "cubicslice/rotation.hpp"
#include "cubicslice/series.hpp"

namespace fs = std::filesystem;
using cubicslice::cplx;
using json = nlohmann::ordered_json;

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

// Complex literals of the form a+bi with no spaces: "1", "-2.5", "0.4i",
// "0+0.4i", "1-2i", "i", "-i".
cplx parse_complex(const std::string& s) {
  if (s.empty()) throw CLI::ValidationError("complex", "empty value");
  std::string body = s;
  bool has_i = false;
  if (body.back() == 'i' || body.back() == 'I') {
    has_i = true;
    body.pop_back();
  }
  // split at the last +/- that is not an exponent sign and not leading
  size_t split = std::string::npos;
  for (size_t k = body.size(); k-- > 1;) {
    const char ch = body[k];
    if ((ch == '+' || ch == '-') && body[k - 1] != 'e' && body[k - 1] != 'E') {
      split = k;
      break;
    }
  }
  auto to_d = [&](std::string t, double dflt) {
    if (t.empty() || t == "+") return dflt;
    if (t == "-") return -dflt;
    size_t used = 0;
    const double v = std::stod(t, &used);
    if (used != t.size()) throw CLI::ValidationError("complex", "bad literal: " + t);
    return v;
  };
  if (!has_i) return {to_d(body, 0.0), 0.0};
  if (split == std::string::npos) return {0.0, to_d(body, 1.0)};
  return {to_d(body.substr(0, split), 0.0), to_d(body.substr(split), 1.0)};
}

std::string format_complex(cplx z) {
  const std::string re = num(z.real());
  std::string im = num(z.imag());
  if (!im.empty() && im[0] != '-') im = "+" + im;
  return re + im + "i";
}

// --theta golden | cf:1,2,1,... | 0.618...
cubicslice::RotationNumber parse_theta(const std::string& s) {
  if (s == "golden") return cubicslice::RotationNumber::golden();
  if (s.rfind("cf:", 0) == 0) {
    cubicslice::RotationNumber r;
    std::string rest = s.substr(3);
    size_t pos = 0;
    while (pos < rest.size()) {
      size_t comma = rest.find(',', pos);
      if (comma == std::string::npos) comma = rest.size();
      r.partial_quotients.push_back(std::stoll(rest.substr(pos, comma - pos)));
      pos = comma + 1;
    }
    if (r.partial_quotients.empty()) {
      throw CLI::ValidationError("--theta", "cf: needs at least one quotient");
    }
    return r;
  }
  return cubicslice::cf_expand(std::stod(s), 30);
}

cplx lambda_of_theta(const cubicslice::RotationNumber& t) {
  return std::polar(1.0, 2.0 * std::numbers::pi * t.value());
}

struct Common {
  std::string out = ".";
  int threads = 0;
  std::uint64_t seed = 1;
};

void add_common(CLI::App* cmd, Common& c) {
  cmd->add_option("--out", c.out, "output directory")->capture_default_str();
  cmd->add_option("--threads", c.threads,
                  "worker threads (0 = hardware; SLICE_THREADS overrides)");
  cmd->add_option("--seed", c.seed, "seed for jittered root starts")
      ->capture_default_str();
}

void write_config(const Common& c, const std::string& command,
                  const std::vector<std::string>& argv) {
  json cfg;
  cfg["command"] = command;
  cfg["argv"] = argv;
  cfg["out"] = c.out;
  cfg["threads"] = c.threads;
  cfg["seed"] = c.seed;
  std::ofstream os(fs::path(c.out) / (command + "-config.json"));
  os << cfg.dump(2) << "\n";
}

void ensure_out(const Common& c) { fs::create_directories(c.out); }

int run(const std::vector<std::string>& args);

int cmd_series(const Common& c, const std::string& lambda_s,
               const std::string& theta_s, const std::string& c_s, int order) {
  cplx lambda;
  if (!theta_s.empty()) {
    lambda = lambda_of_theta(parse_theta(theta_s));
  } else if (!lambda_s.empty()) {
    lambda = parse_complex(lambda_s);
  } else {
    throw CLI::RequiredError("--lambda or --theta");
  }
  if (order <= 0) order = std::abs(lambda) < 1.0 ? 4096 : 16384;

  cubicslice::CoeffSequence seq;
  if (!c_s.empty()) {
    seq = cubicslice::linearize_cubic({lambda, parse_complex(c_s)}, order);
  } else {
    seq = cubicslice::linearize_quadratic(lambda, order);
  }
  std::ofstream os(fs::path(c.out) / "series.csv");
  os << "n,re,im,log_abs\n";
  for (int n = 1; n <= seq.order(); ++n) {
    const cplx b = seq.coeff(n);
    os << n << "," << num(b.real()) << "," << num(b.imag()) << ","
       << num(seq.log_abs(n)) << "\n";
  }
  const auto est = cubicslice::hadamard_radius(seq);
  std::printf("wrote %s  (r_hat=%s, uncertainty=%s)\n",
              (fs::path(c.out) / "series.csv").c_str(), num(est.r_hat).c_str(),
              num(est.uncertainty).c_str());
  return 0;
}

int cmd_radius(const Common& c, const std::string& lambda_s,
               const std::string& c_s, int order) {
  const cplx lambda = parse_complex(lambda_s);
  const cplx cc = parse_complex(c_s);
  const auto ra = cubicslice::radius_attracting({lambda, cc}, order);
  json out;
  out["lambda"] = format_complex(lambda);
  out["c"] = format_complex(cc);
  out["r"] = ra.r;
  out["r_tail"] = ra.estimate.r_tail;
  out["r_fit"] = ra.estimate.r_fit;
  out["uncertainty"] = ra.estimate.uncertainty;
  out["phi_1"] = format_complex(ra.phi_1.value);
  out["phi_1_escaped"] = ra.phi_1.escaped;
  out["phi_c"] = format_complex(ra.phi_c.value);
  out["phi_c_escaped"] = ra.phi_c.escaped;
  const char* names[] = {"CritOne", "CritC", "Both", "NoMatch"};
  out["main"] = names[static_cast<int>(ra.main)];
  out["tolerance"] = ra.tolerance_used;
  std::ofstream os(fs::path(c.out) / "radius.json");
  os << out.dump(2) << "\n";
  std::printf("%s\n", out.dump(2).c_str());
  if (ra.main == cubicslice::MainCritical::NoMatch) {
    std::fprintf(stderr, "error: neither critical point matches the radius\n");
    return 3;
  }
  return 0;
}

int cmd_slice(const Common& c, const std::string& lambda_s, const std::string& center_s,
              double half_width, int res, const std::string& mode_s, bool ss,
              int max_iter, bool vplane) {
  const cplx lambda = parse_complex(lambda_s);
  cubicslice::GridSpec g;
  g.center = parse_complex(center_s);
  g.half_width = half_width;
  g.resolution = res;
  g.plane = vplane ? cubicslice::Plane::V : cubicslice::Plane::C;
  cubicslice::SliceMode mode = cubicslice::SliceMode::Both;
  if (mode_s == "classify") mode = cubicslice::SliceMode::Classify;
  else if (mode_s == "equi") mode = cubicslice::SliceMode::Equipotential;
  else if (mode_s != "both") throw CLI::ValidationError("--mode", mode_s);
  cubicslice::RenderOptions opt;
  opt.supersample = ss;
  opt.threads = c.threads;
  opt.max_iter = max_iter;

  const auto img = vplane ? cubicslice::vslice(lambda, g, mode, opt)
                          : cubicslice::render_slice(lambda, g, mode, opt);
  const std::string stem = vplane ? "vslice" : "slice";
  cubicslice::write_png((fs::path(c.out) / (stem + ".png")).string(), img.width,
                        img.height, img.pixels);
  cubicslice::write_sidecar((fs::path(c.out) / (stem + ".slcf")).string(), img.raw);
  std::printf("wrote %s.png and %s.slcf under %s\n", stem.c_str(), stem.c_str(),
              c.out.c_str());
  return 0;
}

int cmd_heightfield(const Common& c, const std::string& lambda_s,
                    const std::string& center_s, double half_width, int res,
                    int order, int max_iter) {
  const cplx lambda = parse_complex(lambda_s);
  cubicslice::GridSpec g;
  g.center = parse_complex(center_s);
  g.half_width = half_width;
  g.resolution = res;
  cubicslice::RenderOptions opt;
  opt.threads = c.threads;
  opt.max_iter = max_iter;
  const auto hf = cubicslice::heightfield(lambda, g, order, opt);
  cubicslice::write_png((fs::path(c.out) / "heightfield.png").string(),
                        hf.field.width, hf.field.height, hf.raster);
  cubicslice::write_sidecar((fs::path(c.out) / "heightfield.slcf").string(),
                            hf.field);
  std::printf("wrote heightfield.png and heightfield.slcf under %s\n",
              c.out.c_str());
  return 0;
}

int cmd_zcurve(const Common& c, const std::string& lambda_s, int rays, int order) {
  const cplx lambda = parse_complex(lambda_s);
  cubicslice::ZCurveOptions opt;
  opt.order = order;
  opt.threads = c.threads;
  const auto pts = cubicslice::zcurve(lambda, rays, opt);
  std::ofstream os(fs::path(c.out) / "zcurve.csv");
  os << "ray_index,re_c,im_c,re_psi,im_psi,flags\n";
  for (const auto& p : pts) {
    os << p.ray_index << "," << num(p.c.real()) << "," << num(p.c.imag()) << ","
       << num(p.psi.real()) << "," << num(p.psi.imag()) << "," << p.flags << "\n";
  }
  std::printf("wrote zcurve.csv (%zu of %d rays) under %s\n", pts.size(), rays,
              c.out.c_str());
  if (static_cast<int>(pts.size()) < rays) {
    std::fprintf(stderr, "error: %d rays failed to locate the curve\n",
                 rays - static_cast<int>(pts.size()));
    return 3;
  }
  return 0;
}

int cmd_parabolic(const Common& c, long long p, long long q) {
  const auto poly = cubicslice::cq_poly(p, q);
  const auto roots = cubicslice::cq_roots(poly, c.seed);
  json out;
  out["p"] = p;
  out["q"] = q;
  json coeffs = json::array();
  for (const auto& ck : poly.coeffs) coeffs.push_back({ck.real(), ck.imag()});
  out["coeffs"] = coeffs;
  json ru = json::array();
  for (const auto& u : roots.roots) ru.push_back({u.real(), u.imag()});
  out["roots_u"] = ru;
  json atoms = json::array();
  for (const auto& u : roots.roots) {
    const cplx a = 1.0 / u;
    atoms.push_back({a.real(), a.imag()});
  }
  out["atoms_c"] = atoms;
  out["weight"] = 2.0 * std::numbers::pi / static_cast<double>(q);
  out["max_residual"] = roots.max_residual;
  std::ofstream os(fs::path(c.out) / "parabolic.json");
  os << out.dump(2) << "\n";
  std::printf("%s\n", out.dump(2).c_str());
  return 0;
}

int cmd_converge(const Common& c, const std::string& theta_s, int depth, int res,
                 double half_width, int order) {
  const auto theta = parse_theta(theta_s);
  cubicslice::ConvergenceOptions opt;
  opt.resolution = res;
  opt.half_width = half_width;
  opt.order = order;
  opt.threads = c.threads;
  opt.seed = c.seed;
  const auto report = cubicslice::convergence_table(theta, depth, opt);
  std::ofstream os(fs::path(c.out) / "converge.csv");
  os << "p,q,sup_gap,weak_star_gap,u_n_at_zero,seconds\n";
  for (const auto& row : report.rows) {
    os << row.p << "," << row.q << "," << num(row.sup_gap) << ","
       << num(row.weak_star_gap) << "," << num(row.u_n_at_zero) << ","
       << num(row.seconds) << "\n";
  }
  cubicslice::write_sidecar((fs::path(c.out) / "converge-utheta.slcf").string(),
                            report.u_theta);
  std::printf("wrote converge.csv (%zu rows, field uncertainty %s) under %s\n",
              report.rows.size(), num(report.max_uncertainty).c_str(),
              c.out.c_str());
  return 0;
}

int cmd_replay(const std::string& config_path) {
  std::ifstream is(config_path);
  if (!is) throw std::runtime_error("replay: cannot open " + config_path);
  json cfg = json::parse(is);
  std::vector<std::string> argv = cfg.at("argv").get<std::vector<std::string>>();
  return run(argv);
}

int run(const std::vector<std::string>& args) {
  CLI::App app{"slices of the cubic family: series, radii, measures, figures"};
  app.require_subcommand(1);

  Common common;
  std::string lambda_s, theta_s, c_s, center_s = "0+0i", mode_s = "both";
  std::string config_path;
  double half_width = 8.0, cv_half_width = 3.0;
  int order = 0, res = 512, cv_res = 21, rays = 256, depth = 10;
  int max_iter = 100000;
  long long pp = 0, qq = 1;
  bool ss = false;

  auto* series = app.add_subcommand("series", "linearizing coefficients as CSV");
  series->add_option("--lambda", lambda_s, "multiplier a+bi");
  series->add_option("--theta", theta_s, "rotation number (golden|cf:..|x)");
  series->add_option("--c", c_s, "cubic parameter a+bi (default: quadratic)");
  series->add_option("--order", order, "truncation order");
  add_common(series, common);

  auto* radius = app.add_subcommand("radius", "attracting radius and main critical point");
  radius->add_option("--lambda", lambda_s)->required();
  radius->add_option("--c", c_s)->required();
  radius->add_option("--order", order, "series order")->capture_default_str();
  add_common(radius, common);

  auto* slice = app.add_subcommand("slice", "bifurcation-locus slice in the c-plane");
  slice->add_option("--lambda", lambda_s)->required();
  slice->add_option("--center", center_s)->capture_default_str();
  slice->add_option("--half-width", half_width)->capture_default_str();
  slice->add_option("--res", res)->capture_default_str();
  slice->add_option("--mode", mode_s, "classify|equi|both")->capture_default_str();
  slice->add_option("--max-iter", max_iter)->capture_default_str();
  slice->add_flag("--ss", ss, "2x2 supersampling");
  add_common(slice, common);

  auto* vsl = app.add_subcommand("vslice", "slice drawn in the v-coordinate");
  vsl->add_option("--lambda", lambda_s)->required();
  vsl->add_option("--center", center_s)->capture_default_str();
  vsl->add_option("--half-width", half_width)->capture_default_str();
  vsl->add_option("--res", res)->capture_default_str();
  vsl->add_option("--mode", mode_s)->capture_default_str();
  vsl->add_option("--max-iter", max_iter)->capture_default_str();
  vsl->add_flag("--ss", ss);
  add_common(vsl, common);

  auto* hf = app.add_subcommand("heightfield", "log r - log|c| raw grid + raster");
  hf->add_option("--lambda", lambda_s)->required();
  hf->add_option("--center", center_s)->capture_default_str();
  hf->add_option("--half-width", half_width)->capture_default_str();
  hf->add_option("--res", res)->capture_default_str();
  hf->add_option("--order", order, "series order per sample (default 512)");
  hf->add_option("--max-iter", max_iter)->capture_default_str();
  add_common(hf, common);

  auto* zc = app.add_subcommand("zcurve", "trace Z_lambda by radial bisection");
  zc->add_option("--lambda", lambda_s)->required();
  zc->add_option("--rays", rays)->capture_default_str();
  zc->add_option("--order", order, "classification series order (default 1024)");
  add_common(zc, common);

  auto* pb = app.add_subcommand("parabolic", "Č(u), roots and mu_{p/q} as JSON");
  pb->add_option("--p", pp)->required();
  pb->add_option("--q", qq)->required();
  add_common(pb, common);

  auto* cv = app.add_subcommand("converge", "convergence experiment CSV");
  cv->add_option("--theta", theta_s)->required();
  cv->add_option("--depth", depth)->capture_default_str();
  cv->add_option("--res", cv_res, "grid resolution")->capture_default_str();
  cv->add_option("--half-width", cv_half_width, "grid half width")
      ->capture_default_str();
  cv->add_option("--order", order, "series order (default 16384)");
  add_common(cv, common);

  auto* rp = app.add_subcommand("replay", "re-run from an emitted config JSON");
  rp->add_option("config", config_path, "path to <command>-config.json")->required();

  std::vector<std::string> cli_args(args);
  std::reverse(cli_args.begin(), cli_args.end());
  try {
    app.parse(cli_args);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  }

  if (rp->parsed()) return cmd_replay(config_path);

  ensure_out(common);
  if (series->parsed()) {
    write_config(common, "series", args);
    return cmd_series(common, lambda_s, theta_s, c_s, order);
  }
  if (radius->parsed()) {
    write_config(common, "radius", args);
    return cmd_radius(common, lambda_s, c_s, order > 0 ? order : 4096);
  }
  if (slice->parsed()) {
    write_config(common, "slice", args);
    return cmd_slice(common, lambda_s, center_s, half_width, res, mode_s, ss,
                     max_iter, false);
  }
  if (vsl->parsed()) {
    write_config(common, "vslice", args);
    return cmd_slice(common, lambda_s, center_s, half_width, res, mode_s, ss,
                     max_iter, true);
  }
  if (hf->parsed()) {
    write_config(common, "heightfield", args);
    return cmd_heightfield(common, lambda_s, center_s, half_width, res,
                           order > 0 ? order : 512, max_iter);
  }
  if (zc->parsed()) {
    write_config(common, "zcurve", args);
    return cmd_zcurve(common, lambda_s, rays, order > 0 ? order : 1024);
  }
  if (pb->parsed()) {
    write_config(common, "parabolic", args);
    return cmd_parabolic(common, pp, qq);
  }
  if (cv->parsed()) {
    write_config(common, "converge", args);
    return cmd_converge(common, theta_s, depth, cv_res, cv_half_width,
                        order > 0 ? order : 16384);
  }
  return 2;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  try {
    return run(args);
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "usage error: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  }
}
