#include "betageo/cli.hpp"

#include <fmt/format.h>

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <nlohmann/json.hpp>
#include <numbers>
#include <ostream>
#include <thread>

#include "betageo/canonical.hpp"
#include "betageo/embedding.hpp"
#include "betageo/errors.hpp"
#include "betageo/frechet.hpp"
#include "betageo/geodesy.hpp"
#include "betageo/metric.hpp"

namespace betageo::cli {
namespace {

using json = nlohmann::json;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    parts.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return parts;
}

double parse_number(const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) {
    throw UsageError("not a number: '" + s + "'");
  }
  return x;
}

std::vector<double> parse_list(const std::string& s) {
  std::vector<double> xs;
  for (const auto& part : split(s, ',')) xs.push_back(parse_number(part));
  return xs;
}

BetaPoint parse_point(const std::string& s) {
  const auto xs = parse_list(s);
  if (xs.size() != 2) throw UsageError("expected a point a,b but got '" + s + "'");
  return {xs[0], xs[1]};
}

// Items separated by ';' on the command line, or one per line in a file.
std::vector<std::string> items(const std::string& inline_list, const std::string& file) {
  std::vector<std::string> out;
  if (!file.empty()) {
    std::ifstream in(file);
    if (!in) throw UsageError("cannot read " + file);
    for (std::string line; std::getline(in, line);) {
      line = trim(line);
      if (!line.empty() && line[0] != '#') out.push_back(line);
    }
  } else {
    for (auto& part : split(inline_list, ';')) {
      if (!part.empty()) out.push_back(part);
    }
  }
  if (out.empty()) throw UsageError("no input items given");
  return out;
}

json point_json(const BetaPoint& p) { return {{"alpha", p.alpha()}, {"beta", p.beta()}}; }

// Fills results[i] = f(i) on up to `threads` workers; order is fixed by index.
template <class T, class F>
std::vector<T> parallel_map(std::size_t count, unsigned threads, F f) {
  std::vector<std::optional<T>> slots(count);
  std::vector<std::exception_ptr> errors(std::max(1u, threads));
  auto work = [&](unsigned w, unsigned stride) {
    try {
      for (std::size_t i = w; i < count; i += stride) slots[i].emplace(f(i));
    } catch (...) {
      errors[w] = std::current_exception();
    }
  };
  if (threads <= 1) {
    work(0, 1);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w, threads);
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
  std::vector<T> results;
  results.reserve(count);
  for (auto& s : slots) results.push_back(std::move(*s));
  return results;
}

class Csv {
 public:
  Csv(std::ostream& out, std::initializer_list<const char*> header) : out_(out) {
    bool first = true;
    for (const char* h : header) {
      out_ << (first ? "" : ",") << h;
      first = false;
    }
    out_ << '\n';
  }
  void row(std::initializer_list<double> cells) {
    bool first = true;
    for (double x : cells) {
      out_ << (first ? "" : ",") << csv_number(x);
      first = false;
    }
    out_ << '\n';
  }

 private:
  std::ostream& out_;
};

std::vector<double> grid_axis(double lo, double hi, int n, bool log_spacing) {
  std::vector<double> axis(n);
  for (int i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / (n - 1);
    axis[i] = log_spacing ? std::exp(std::log(lo) + t * (std::log(hi) - std::log(lo)))
                          : lo + t * (hi - lo);
  }
  axis.front() = lo;
  axis.back() = hi;
  return axis;
}

// Unit Fisher-norm velocity at angle theta in an orthonormal frame at p
// (first axis along d/d alpha).
TangentVector unit_direction(const BetaPoint& p, double theta) {
  const auto g = metric_tensor(p);
  const double e1 = 1.0 / std::sqrt(g.g_aa);
  // Gram-Schmidt on d/d beta.
  const double proj = g.g_ab / g.g_aa;
  const double n2 = std::sqrt(g.det() / g.g_aa);
  const double e2a = -proj / n2, e2b = 1.0 / n2;
  return {p, std::cos(theta) * e1 + std::sin(theta) * e2a, std::sin(theta) * e2b};
}

struct Context {
  std::ostream& out;
  unsigned threads = 1;
};

}  // namespace

std::string csv_number(double x) { return fmt::format("{:.17g}", x); }

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fisher-Rao geometry of beta distributions and canonical moments", "betageo"};
  app.require_subcommand(1, 1);
  Context ctx{out};
  app.add_option("--threads", ctx.threads, "Worker threads for grid and ball output")
      ->check(CLI::Range(1u, 256u));

  std::string point, from, to, velocity, moments, canonical, first, second, points, file, weights;
  double tol = 0.0, radius = 1.0, alpha_min = 1e-3, alpha_max = 1e3, beta_min = 1e-3,
         beta_max = 1e3, alpha = 1.0, alpha_prime = 2.0, ratio = 1.0;
  int steps = 64, directions = 256, resolution = 100;
  std::string spacing = "log", sizes = "10,100,1000";
  std::function<void()> action;

  auto add_point = [&](CLI::App* sub, const char* name, std::string& target, const char* what) {
    sub->add_option(name, target, what)->required();
  };

  {
    auto* s = app.add_subcommand("metric", "Fisher metric tensor at a point");
    add_point(s, "--point", point, "Point a,b");
    s->callback([&] {
      const auto p = parse_point(point);
      const auto g = metric_tensor(p);
      json j = point_json(p);
      j["g_aa"] = g.g_aa;
      j["g_ab"] = g.g_ab;
      j["g_bb"] = g.g_bb;
      j["det"] = det_metric(p);
      out << j.dump() << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("det", "Metric determinant (closed form)");
    add_point(s, "--point", point, "Point a,b");
    s->callback([&] { out << json{{"det", det_metric(parse_point(point))}}.dump() << '\n'; });
  }
  {
    auto* s = app.add_subcommand("det-bound", "Closed-form lower bound of the determinant");
    add_point(s, "--point", point, "Point a,b");
    s->callback([&] {
      const auto p = parse_point(point);
      const double d = det_metric(p), lb = det_metric_lower_bound(p);
      out << json{{"det", d}, {"lower_bound", lb}, {"ratio", d / lb}}.dump() << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("det-quad", "Determinant from its integral representation");
    add_point(s, "--point", point, "Point a,b");
    s->add_option("--tol", tol, "Relative tolerance")->default_val(1e-8);
    s->callback([&] {
      const auto p = parse_point(point);
      const double q = det_metric_quadrature(p, tol), d = det_metric(p);
      out << json{{"det_quadrature", q}, {"det", d}, {"relative_error", std::abs(q - d) / d}}.dump()
          << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("curvature", "Sectional curvature at a point");
    add_point(s, "--point", point, "Point a,b");
    s->callback(
        [&] { out << json{{"curvature", sectional_curvature(parse_point(point))}}.dump() << '\n'; });
  }
  {
    auto* s = app.add_subcommand("curvature-grid", "Curvature on a grid (CSV alpha,beta,curvature)");
    s->add_option("--alpha-min", alpha_min)->default_val(1e-3);
    s->add_option("--alpha-max", alpha_max)->default_val(1e3);
    s->add_option("--beta-min", beta_min)->default_val(1e-3);
    s->add_option("--beta-max", beta_max)->default_val(1e3);
    s->add_option("--resolution", resolution, "Points per axis")->default_val(100)->check(
        CLI::Range(2, 100000));
    s->add_option("--spacing", spacing)->default_val("log")->check(CLI::IsMember({"log", "linear"}));
    s->callback([&] {
      if (!(alpha_min > 0 && alpha_min < alpha_max && beta_min > 0 && beta_min < beta_max)) {
        throw DomainError("curvature-grid: need 0 < min < max on both axes");
      }
      const bool log_spacing = spacing == "log";
      const auto as = grid_axis(alpha_min, alpha_max, resolution, log_spacing);
      const auto bs = grid_axis(beta_min, beta_max, resolution, log_spacing);
      const auto ks = parallel_map<double>(as.size() * bs.size(), ctx.threads, [&](std::size_t i) {
        return sectional_curvature({as[i / bs.size()], bs[i % bs.size()]});
      });
      Csv csv(out, {"alpha", "beta", "curvature"});
      for (std::size_t i = 0; i < ks.size(); ++i) csv.row({as[i / bs.size()], bs[i % bs.size()], ks[i]});
    });
  }
  {
    auto* s = app.add_subcommand("geodesic", "Exponential map path (CSV t,alpha,beta,dalpha,dbeta)");
    add_point(s, "--point", point, "Start a,b");
    add_point(s, "--velocity", velocity, "Initial velocity da,db");
    s->add_option("--steps", steps, "Number of path intervals")->default_val(64)->check(
        CLI::Range(1, 1000000));
    s->callback([&] {
      const auto v = parse_list(velocity);
      if (v.size() != 2) throw UsageError("expected a velocity da,db");
      const auto path = exp_map({parse_point(point), v[0], v[1]}, steps);
      Csv csv(out, {"t", "alpha", "beta", "dalpha", "dbeta"});
      for (std::size_t i = 0; i < path.size(); ++i) {
        const auto& w = path.velocities[i];
        csv.row({path.times[i], path.points[i].alpha(), path.points[i].beta(), w.d_alpha, w.d_beta});
      }
    });
  }
  {
    auto* s = app.add_subcommand("log", "Logarithm map: initial velocity from one point to another");
    add_point(s, "--from", from, "Start a,b");
    add_point(s, "--to", to, "Target a,b");
    s->callback([&] {
      const auto v = log_map(parse_point(from), parse_point(to));
      out << json{{"d_alpha", v.d_alpha}, {"d_beta", v.d_beta}, {"norm", fisher_norm(v)}}.dump()
          << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("distance", "Fisher-Rao distance");
    add_point(s, "--from", from, "First point a,b");
    add_point(s, "--to", to, "Second point a,b");
    s->callback([&] {
      out << json{{"distance", distance(parse_point(from), parse_point(to))}}.dump() << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("ball", "Geodesic circle around a point (CSV theta,alpha,beta)");
    add_point(s, "--center", point, "Center a,b");
    s->add_option("--radius", radius)->default_val(1.0);
    s->add_option("--directions", directions)->default_val(256)->check(CLI::Range(1, 1000000));
    s->callback([&] {
      const auto c = parse_point(point);
      if (!(radius >= 0.0) || !std::isfinite(radius)) throw DomainError("ball: radius must be >= 0");
      const auto ends = parallel_map<BetaPoint>(directions, ctx.threads, [&](std::size_t i) {
        const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) / directions;
        return geodesic_endpoint(unit_direction(c, theta).scaled(radius)).base;
      });
      Csv csv(out, {"theta", "alpha", "beta"});
      for (int i = 0; i < directions; ++i) {
        csv.row({2.0 * std::numbers::pi * i / directions, ends[i].alpha(), ends[i].beta()});
      }
    });
  }
  {
    auto* s = app.add_subcommand("mean", "Frechet mean of points");
    s->add_option("--points", points, "Points a,b;c,d;...");
    s->add_option("--file", file, "File with one point a,b per line");
    s->add_option("--weights", weights, "Weights w1,w2,... summing to 1");
    s->add_option("--tol", tol, "Gradient norm tolerance")->default_val(1e-8);
    s->callback([&] {
      std::vector<BetaPoint> pts;
      for (const auto& item : items(points, file)) pts.push_back(parse_point(item));
      const auto w = weights.empty() ? std::vector<double>{} : parse_list(weights);
      KarcherOptions o;
      o.tol = tol;
      const auto r = karcher_flow(pts, w, o);
      json j = point_json(r.mean);
      j["gradient_norm"] = r.gradient_norm;
      j["iterations"] = r.iterations;
      out << j.dump() << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("canonical", "Canonical moments of a moment sequence");
    s->add_option("--moments", moments, "c1,c2,...")->required();
    s->callback([&] {
      out << json{{"p", to_canonical(MomentSequence(parse_list(moments))).values()}}.dump() << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("moments", "Moment sequence of canonical moments");
    s->add_option("--canonical", canonical, "p1,p2,...")->required();
    s->callback([&] {
      out << json{{"moments", from_canonical(CanonicalSequence(parse_list(canonical))).values()}}
                 .dump()
          << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("rho", "Dissimilarity of two moment sequences");
    s->add_option("--first", first, "c1,c2,...")->required();
    s->add_option("--second", second, "c1,c2,...")->required();
    s->callback([&] {
      const MomentSequence a(parse_list(first)), b(parse_list(second));
      out << json{{"rho", rho_distance(a, b)}}.dump() << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("centroid", "Centroid of moment sequences");
    s->add_option("--sequences", points, "c1,c2,...;c1,c2,...");
    s->add_option("--file", file, "File with one sequence per line");
    s->add_option("--tol", tol)->default_val(1e-8);
    s->callback([&] {
      std::vector<MomentSequence> cs;
      for (const auto& item : items(points, file)) cs.emplace_back(parse_list(item));
      const auto c = moment_centroid(cs, tol);
      out << json{{"moments", c.values()}, {"p", to_canonical(c).values()}}.dump() << '\n';
    });
  }
  {
    auto* s = app.add_subcommand("clt-check", "Distances along a ray against their large-n limit");
    s->add_option("--alpha", alpha)->default_val(1.0);
    s->add_option("--alpha-prime", alpha_prime)->default_val(2.0);
    s->add_option("--ratio", ratio, "beta / alpha along the ray")->default_val(1.0);
    s->add_option("--n", sizes, "Scale factors n1,n2,...")->default_val("10,100,1000");
    s->callback([&] {
      const double limit = clt_limit_distance(alpha, alpha_prime);
      json rows = json::array();
      bool monotone = true;
      double previous = INFINITY;
      for (double n : parse_list(sizes)) {
        const double d = distance({n * alpha, n * ratio * alpha}, {n * alpha_prime, n * ratio * alpha_prime});
        const double e = std::abs(d - limit);
        monotone = monotone && e < previous;
        previous = e;
        rows.push_back({{"n", n}, {"distance", d}, {"error", e}});
      }
      out << json{{"limit", limit}, {"rows", rows}, {"monotone", monotone}}.dump() << '\n';
    });
  }

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "betageo: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "betageo: " << e.what() << "\n\n" << app.help();
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "betageo " << app.get_subcommands().front()->get_name() << ": " << e.what() << '\n';
    return kExitDomain;
  } catch (const NumericalError& e) {
    std::string line;
    for (const auto& a : args) line += " " + a;
    err << "betageo: numerical failure in" << line << ": " << e.what() << '\n';
    return kExitNumerical;
  }
  return 0;
}

}  // namespace betageo::cli
