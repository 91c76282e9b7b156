// hotspots: command-line front end. Tables go to --out (default stdout),
// progress to stderr. Exit codes: 0 ok, 2 validation error, 3 numerical failure.

#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "hotspots/ball.hpp"
#include "hotspots/effective.hpp"
#include "hotspots/errors.hpp"
#include "hotspots/sieve.hpp"
#include "hotspots/table.hpp"

namespace hb = hotspots::ball;
namespace he = hotspots::effective;
namespace hs = hotspots::sieve;
using hotspots::table::Cell;
using hotspots::table::Table;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

template <class T>
std::string str(const T& v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

[[noreturn]] void bad(const std::string& flag, const std::string& bound, const std::string& got) {
  throw UsageError(flag + ": " + bound + " (got " + got + ")");
}

void check_dim(const std::string& flag, int d) {
  if (d < hb::kMinDim || d > hb::kMaxDim) bad(flag, "must lie in [2, 200]", str(d));
}

void check_positive(const std::string& flag, double x) {
  if (!(x > 0.0) || !std::isfinite(x)) bad(flag, "must be > 0", str(x));
}

void check_delta(const std::string& flag, double x) {
  if (!(x > 0.0 && x < 1.0)) bad(flag, "must lie in (0, 1)", str(x));
}

void check_at_least(const std::string& flag, long x, long lo) {
  if (x < lo) bad(flag, "must be >= " + std::to_string(lo), str(x));
}

// "1.5", "0.8mu", "0.8μ": a trailing mu scales by mu_d.
double parse_beta(const std::string& flag, const std::string& text, int d) {
  std::string s = text;
  double scale = 1.0;
  for (const std::string suffix : {"mu", "μ"}) {
    if (s.size() > suffix.size() && s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0) {
      s.resize(s.size() - suffix.size());
      scale = hb::ball_spectrum(d).mu1;
      break;
    }
  }
  if (s.empty() && scale != 1.0) s = "1";
  std::size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != s.size() || s.empty()) bad(flag, "expected a number or a multiple of mu such as 0.8mu", text);
  v *= scale;
  check_positive(flag, v);
  return v;
}

struct Range {
  double lo = 0.0;
  double hi = 0.0;
};

// "a..b" or a single value.
Range parse_range(const std::string& flag, const std::string& text, int d, bool beta) {
  const auto dots = text.find("..");
  auto one = [&](const std::string& s) {
    if (beta) return parse_beta(flag, s, d);
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != s.size() || s.empty()) bad(flag, "expected a number or a range a..b", text);
    return v;
  };
  Range r;
  if (dots == std::string::npos) {
    r.lo = r.hi = one(text);
  } else {
    r.lo = one(text.substr(0, dots));
    r.hi = one(text.substr(dots + 2));
  }
  if (r.lo > r.hi) bad(flag, "range must satisfy lo <= hi", text);
  return r;
}

std::vector<double> spaced(Range r, int n, bool log_scale) {
  std::vector<double> v;
  if (n == 1 || r.lo == r.hi) return {r.lo};
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    v.push_back(log_scale ? std::exp(std::log(r.lo) + t * (std::log(r.hi) - std::log(r.lo)))
                          : r.lo + t * (r.hi - r.lo));
  }
  return v;
}

hs::GridSize parse_grid(const std::string& text) {
  const auto x = text.find('x');
  hs::GridSize g;
  try {
    std::size_t a = 0, b = 0;
    if (x == std::string::npos) throw std::invalid_argument("no x");
    g.n_r = std::stoi(text.substr(0, x), &a);
    g.n_theta = std::stoi(text.substr(x + 1), &b);
    if (a != x || b != text.size() - x - 1) throw std::invalid_argument("trailing");
  } catch (const std::exception&) {
    bad("--grids", "expected NRxNTHETA such as 160x1024", text);
  }
  check_at_least("--grids n_r", g.n_r, 4);
  check_at_least("--grids n_theta", g.n_theta, 8);
  return g;
}

void check_sieve(double epsilon, double delta, double alpha) {
  check_delta("--delta", delta);
  if (!(epsilon > 0.0 && epsilon <= delta)) bad("--epsilon", "must lie in (0, delta=" + str(delta) + "]", str(epsilon));
  check_positive("--beta", alpha / delta);
  if (!(epsilon < 1.0 / std::sqrt(alpha))) {
    bad("--epsilon", "must be < alpha^{-1/2} = " + str(1.0 / std::sqrt(alpha)) + " with alpha = beta*delta", str(epsilon));
  }
  if (!(epsilon * alpha < 1.0)) {
    bad("--epsilon", "open fraction epsilon*beta*delta must be < 1", str(epsilon * alpha));
  }
}

Cell num(double x) { return x; }
Cell integer(long long x) { return x; }

std::vector<Cell> sieve_row(const hs::SieveRun& r) {
  return {num(r.spec.epsilon), num(r.spec.delta), num(r.spec.beta()), num(r.spec.alpha),
          integer(r.n_r), integer(r.n_theta), integer(r.channels), num(r.open_fraction),
          num(r.mu1), num(r.mu_radial), num(r.target_radial), num(r.target_angular),
          num(r.error), num(r.error / r.target_radial), num(r.radial_error),
          num(r.ratio.ratio), num(r.chain.pointwise_excess), Cell(r.chain.pass),
          num(r.profile_error), num(r.neck_mass_share)};
}

const std::vector<std::string> kSieveColumns = {
    "epsilon", "delta", "beta", "alpha", "n_r", "n_theta", "channels", "open_fraction",
    "mu1", "mu_radial", "target_radial", "target_angular", "error", "relative_error",
    "radial_error", "ratio", "chain_excess", "chain_pass", "profile_error", "neck_mass_share"};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Hot-spots constants, effective Neumann-sieve problems and discrete sieves"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string format = "csv";
  std::string out_path;
  app.add_option("--format", format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", out_path, "output file (default stdout)");

  std::vector<int> dims;
  int dim = 2;
  int samples = 101;
  std::optional<double> level;
  std::string beta_text = "1";
  std::string delta_text;
  std::vector<double> deltas;
  int ell = 0, k_max = 2, index = 1;
  int n_beta = 40, n_delta = 40;
  unsigned threads = 0;
  double delta = 0.2, epsilon = 0.05;
  int n_r = 160, n_theta = 1024, n_eigen = 6;
  std::uint64_t seed = 0;
  std::string field_path;
  std::vector<double> epsilons;
  std::vector<std::string> grid_texts;
  bool no_disk = false;

  auto* table = app.add_subcommand("table", "S_d and S_d - sqrt(e)");
  table->add_option("--dims", dims, "dimensions")->delimiter(',')->required();

  auto* eta = app.add_subcommand("eta", "eta_d and its Gaussian limit on [0, 1]");
  eta->add_option("--dim", dim)->required();
  eta->add_option("--samples", samples, "grid points including both ends");

  auto* vd = app.add_subcommand("vd", "volume fraction V_d against level");
  vd->add_option("--dim", dim)->required();
  vd->add_option("--samples", samples);
  vd->add_option("--level", level, "single level t in [1, S_d]");

  auto* asym = app.add_subcommand("asymptotics", "large-d behaviour of S_d, eta_d and V_d");
  asym->add_option("--dims", dims)->delimiter(',')->required();
  double asym_level = 1.1;
  asym->add_option("--level", asym_level);

  auto* eff = app.add_subcommand("effective", "radial effective problem H_{l,beta,delta}");
  eff->require_subcommand(1);
  eff->fallthrough();
  auto* rmap = eff->add_subcommand("ratio-map", "hot-spots ratio over a beta x delta grid");
  rmap->add_option("--dim", dim)->required();
  rmap->add_option("--beta", beta_text, "range a..b, mu suffix allowed per endpoint")->required();
  rmap->add_option("--delta", delta_text, "range a..b (log spaced)")->required();
  rmap->add_option("--nbeta", n_beta);
  rmap->add_option("--ndelta", n_delta);
  rmap->add_option("--threads", threads, "0 = hardware concurrency");
  auto* solve = eff->add_subcommand("solve", "eigenvalues, or one eigenfunction with --samples");
  solve->add_option("--dim", dim)->required();
  solve->add_option("--ell", ell);
  solve->add_option("--beta", beta_text)->required();
  solve->add_option("--delta", delta)->required();
  solve->add_option("--k", k_max, "largest eigenvalue index");
  auto* solve_samples = solve->add_option("--samples", samples, "profile points per side");
  solve->add_option("--index", index, "eigenfunction index for --samples");
  auto* boundary = eff->add_subcommand("boundary", "radiality boundary beta*(delta)");
  boundary->add_option("--dim", dim)->required();
  boundary->add_option("--deltas", deltas)->delimiter(',')->required();
  auto* limits = eff->add_subcommand("limits", "delta -> 0 diagnostics");
  limits->add_option("--dim", dim)->required();
  limits->add_option("--beta", beta_text)->required();
  limits->add_option("--deltas", deltas)->delimiter(',')->required();

  auto* sv = app.add_subcommand("sieve", "discrete two-dimensional thick sieves");
  sv->require_subcommand(1);
  sv->fallthrough();
  auto* run = sv->add_subcommand("run", "one sieve domain");
  run->add_option("--epsilon", epsilon);
  run->add_option("--delta", delta);
  run->add_option("--beta", beta_text)->required();
  run->add_option("--nr", n_r);
  run->add_option("--ntheta", n_theta);
  run->add_option("--seed", seed);
  run->add_option("--neigen", n_eigen);
  run->add_option("--field", field_path, "write the first nontrivial eigenvector as CSV");
  auto* conv = sv->add_subcommand("converge", "error along a sequence of epsilons");
  conv->add_option("--delta", delta);
  conv->add_option("--beta", beta_text)->required();
  epsilons = {0.2, 0.1, 0.05};
  grid_texts = {"40x256", "80x512", "160x1024"};
  conv->add_option("--epsilons", epsilons)->delimiter(',');
  conv->add_option("--grids", grid_texts, "NRxNTHETA per epsilon")->delimiter(',');
  conv->add_option("--seed", seed);
  conv->add_flag("--no-disk", no_disk, "omit the full-disk control row");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  }

  Table t;
  try {
    if (*table) {
      for (int d : dims) check_dim("--dims", d);
      t.columns = {"dim", "s_d", "gap"};
      for (int d : dims) {
        const double s = hb::hotspots_constant(d);
        t.add({integer(d), num(s), num(s - std::sqrt(std::exp(1.0)))});
      }
    } else if (*eta) {
      check_dim("--dim", dim);
      check_at_least("--samples", samples, 2);
      const hb::EtaProfile p(dim);
      t.columns = {"r", "eta_d", "eta_inf"};
      for (int i = 0; i < samples; ++i) {
        const double r = static_cast<double>(i) / (samples - 1);
        t.add({num(r), num(p(r)), num(hb::eta_infinity(r))});
      }
    } else if (*vd) {
      check_dim("--dim", dim);
      t.columns = {"level", "fraction"};
      if (level) {
        const double s = hb::hotspots_constant(dim);
        if (!(*level >= 1.0 && *level <= s)) bad("--level", "must lie in [1, S_d=" + str(s) + "]", str(*level));
        t.add({num(*level), num(hb::volume_fraction(dim, *level))});
      } else {
        check_at_least("--samples", samples, 2);
        for (const auto& pt : hb::volume_curve(dim, samples).points) t.add({num(pt.level), num(pt.fraction)});
      }
    } else if (*asym) {
      for (int d : dims) check_dim("--dims", d);
      if (!(asym_level > 1.0)) bad("--level", "must be > 1", str(asym_level));
      t.columns = {"dim", "s_d", "gap", "profile_sup", "level", "volume", "decay_rate"};
      for (const auto& r : hb::asymptotic_report(dims, asym_level)) {
        t.add({integer(r.dim), num(r.s_d), num(r.gap), num(r.profile_sup), num(r.level), num(r.volume),
               num(r.decay_rate)});
      }
    } else if (*rmap) {
      check_dim("--dim", dim);
      const Range br = parse_range("--beta", beta_text, dim, true);
      const Range dr = parse_range("--delta", delta_text, dim, false);
      check_delta("--delta", dr.lo);
      check_delta("--delta", dr.hi);
      check_at_least("--nbeta", n_beta, 1);
      check_at_least("--ndelta", n_delta, 1);
      const auto betas = spaced(br, n_beta, false);
      const auto ds = spaced(dr, n_delta, true);
      std::cerr << "ratio-map: " << betas.size() * ds.size() << " nodes\n";
      const auto map = he::ratio_map(dim, betas, ds, threads);
      std::cerr << "ratio-map: done\n";
      t.columns = {"beta", "delta", "ratio", "radial"};
      for (const auto& n : map.nodes) t.add({num(n.beta), num(n.delta), num(n.ratio), Cell(n.radial)});
    } else if (*solve) {
      check_dim("--dim", dim);
      check_at_least("--ell", ell, 0);
      check_at_least("--k", k_max, 0);
      check_delta("--delta", delta);
      const double beta = parse_beta("--beta", beta_text, dim);
      const he::EffectiveParams p{dim, ell, beta, delta};
      if (*solve_samples) {
        check_at_least("--samples", samples, 2);
        check_at_least("--index", index, 0);
        const auto pairs = he::eigenvalues(p, index);
        const auto& e = pairs[index];
        t.columns = {"r", "side", "value", "derivative"};
        for (int i = 0; i < samples; ++i) {
          const double r = static_cast<double>(i) / (samples - 1);
          t.add({num(r), Cell(std::string("inner")), num(e.evaluate(r, he::Side::kInner)),
                 num(e.derivative(r, he::Side::kInner))});
        }
        for (int i = 0; i < samples; ++i) {
          const double r = 1.0 + delta * i / (samples - 1);
          t.add({num(r), Cell(std::string("outer")), num(e.evaluate(r, he::Side::kOuter)),
                 num(e.derivative(r, he::Side::kOuter))});
        }
      } else {
        t.columns = {"index", "h", "origin", "inner", "outer", "rim", "secular_residual", "jump_residual"};
        for (const auto& e : he::eigenvalues(p, k_max)) {
          t.add({integer(e.index), num(e.h), num(e.traces.origin), num(e.traces.inner), num(e.traces.outer),
                 num(e.traces.rim), num(e.secular_residual), num(e.jump_residual)});
        }
      }
    } else if (*boundary) {
      check_dim("--dim", dim);
      for (double d : deltas) check_delta("--deltas", d);
      const double mu = hb::ball_spectrum(dim).mu1;
      t.columns = {"delta", "beta_star", "beta_star_over_mu"};
      for (double d : deltas) {
        std::cerr << "boundary: delta=" << d << '\n';
        const double b = he::radiality_boundary(dim, d);
        t.add({num(d), num(b), num(b / mu)});
      }
    } else if (*limits) {
      check_dim("--dim", dim);
      for (double d : deltas) check_delta("--deltas", d);
      const double beta = parse_beta("--beta", beta_text, dim);
      t.columns = {"delta", "h", "error", "inner", "outer", "ratio", "radial", "rate"};
      for (const auto& r : he::delta_limit_diagnostics(dim, beta, deltas)) {
        t.add({num(r.delta), num(r.h), num(r.error), num(r.traces.inner), num(r.traces.outer), num(r.ratio),
               Cell(r.radial), num(r.rate)});
      }
    } else if (*run) {
      const double beta = parse_beta("--beta", beta_text, 2);
      check_sieve(epsilon, delta, beta * delta);
      check_at_least("--nr", n_r, 4);
      check_at_least("--ntheta", n_theta, 8);
      check_at_least("--neigen", n_eigen, 2);
      std::cerr << "sieve run: epsilon=" << epsilon << " grid " << n_r << "x" << n_theta << '\n';
      const auto r = hs::run_sieve(hs::SieveSpec::from_beta(beta, delta, epsilon, seed), n_r, n_theta, n_eigen);
      t.columns = kSieveColumns;
      t.add(sieve_row(r));
      if (!field_path.empty()) {
        std::ofstream f(field_path);
        if (!f) bad("--field", "cannot open for writing", field_path);
        hs::write_field_csv(f, r.domain, r.eigenvector);
      }
    } else if (*conv) {
      const double beta = parse_beta("--beta", beta_text, 2);
      if (epsilons.size() != grid_texts.size()) {
        bad("--grids", "needs one grid per epsilon (" + std::to_string(epsilons.size()) + ")",
            std::to_string(grid_texts.size()));
      }
      std::vector<hs::GridSize> grids;
      for (const auto& g : grid_texts) grids.push_back(parse_grid(g));
      for (double e : epsilons) check_sieve(e, delta, beta * delta);
      t.columns = kSieveColumns;
      for (std::size_t i = 0; i < epsilons.size(); ++i) {
        std::cerr << "sieve converge: epsilon=" << epsilons[i] << " grid " << grids[i].n_r << "x"
                  << grids[i].n_theta << '\n';
        t.add(sieve_row(hs::run_sieve(hs::SieveSpec::from_beta(beta, delta, epsilons[i], seed), grids[i].n_r,
                                      grids[i].n_theta)));
      }
      if (!no_disk) {
        const auto& g = grids.back();
        std::cerr << "sieve converge: full disk grid " << g.n_r << "x" << g.n_theta << '\n';
        const double radius = 1.0 + delta;
        const auto c = hs::full_disk_control(radius, g.n_r, g.n_theta);
        const double mu = c.mu_scaled / (radius * radius);
        const double target = c.mu_exact / (radius * radius);
        t.add({num(0.0), num(delta), num(beta), num(beta * delta), integer(g.n_r), integer(g.n_theta),
               integer(0), num(1.0), num(mu), num(std::nan("")), num(target), num(target),
               num(std::abs(mu - target)), num(c.relative_error), num(std::nan("")), num(c.ratio.ratio),
               num(c.chain.pointwise_excess), Cell(c.chain.pass), num(std::nan("")), num(0.0)});
      }
    }
  } catch (const UsageError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const hotspots::DomainError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const hotspots::UnsupportedRangeError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const hotspots::ResolutionError& e) {
    std::cerr << "validation error: " << e.what() << '\n';
    return 2;
  } catch (const hotspots::Error& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return 3;
  }

  const auto fmt = format == "json" ? hotspots::table::Format::kJson : hotspots::table::Format::kCsv;
  if (out_path.empty()) {
    hotspots::table::write(std::cout, t, fmt);
  } else {
    std::ofstream f(out_path);
    if (!f) {
      std::cerr << "validation error: --out: cannot open for writing (got " << out_path << ")\n";
      return 2;
    }
    hotspots::table::write(f, t, fmt);
  }
  return 0;
}
