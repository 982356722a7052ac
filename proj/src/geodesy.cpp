#include "betageo/geodesy.hpp"

#include <algorithm>
#include <boost/numeric/odeint.hpp>
#include <cmath>
#include <string>

#include "betageo/errors.hpp"
#include "betageo/special.hpp"

namespace betageo {
namespace {

namespace odeint = boost::numeric::odeint;
using State = std::array<double, 4>;  // alpha, beta, alpha', beta'

bool inside(double a, double b, const IntegratorOptions& o) {
  return a > o.floor && b > o.floor && a < o.ceiling && b < o.ceiling && std::isfinite(a) &&
         std::isfinite(b);
}

[[noreturn]] void escape(double a, double b) {
  throw BoundaryEscape("geodesic left the chart at (" + std::to_string(a) + ", " +
                       std::to_string(b) + ")");
}

Acceleration acceleration(double a, double b, double va, double vb) {
  const auto [t_a, q_a] = trigamma_tetragamma(a);
  const auto [t_b, q_b] = trigamma_tetragamma(b);
  const auto [t_s, q_s] = trigamma_tetragamma(a + b);
  const double d = t_a * t_b - t_s * (t_a + t_b);
  const double h = 0.5 / d;
  const double a_ab = h * (q_a * t_b - q_a * t_s - t_b * q_s);
  const double b_ab = -t_b * q_s / d;
  const double c_ab = h * (q_b * t_s - t_b * q_s);
  const double a_ba = h * (q_b * t_a - q_b * t_s - t_a * q_s);
  const double b_ba = -t_a * q_s / d;
  const double c_ba = h * (q_a * t_s - t_a * q_s);
  return {-a_ab * va * va - b_ab * va * vb - c_ab * vb * vb,
          -a_ba * vb * vb - b_ba * va * vb - c_ba * va * va};
}

// Thrown when a trial stage lands where the right-hand side is undefined.
struct StageOutside {};

struct GeodesicSystem {
  void operator()(const State& x, State& dxdt, double /*t*/) const {
    if (!(x[0] > 0.0 && x[1] > 0.0 && std::isfinite(x[0] + x[1] + x[2] + x[3]))) {
      throw StageOutside{};
    }
    const auto acc = acceleration(x[0], x[1], x[2], x[3]);
    dxdt = {x[2], x[3], acc.d2_alpha, acc.d2_beta};
  }
};

double initial_step(const State& x) {
  const double rate = std::max(std::abs(x[2]) / x[0], std::abs(x[3]) / x[1]);
  return rate > 0.0 ? std::min(0.05, 0.05 / rate) : 1.0;
}

// Integrates over [0, 1]. `sample(stepper, t_old, t_new)` sees every
// accepted step so dense output can be read off between t_old and t_new.
template <class Sampler>
State integrate(const State& start, const IntegratorOptions& o, Sampler&& sample) {
  if (!inside(start[0], start[1], o)) escape(start[0], start[1]);
  GeodesicSystem system;
  auto stepper = odeint::make_dense_output(o.abs_tol, o.rel_tol, odeint::runge_kutta_dopri5<State>());
  State x = start;
  double t = 0.0;
  double dt = std::min(1.0, initial_step(x));
  stepper.initialize(x, t, dt);
  std::size_t steps = 0;
  int retries = 0;
  while (1.0 - t > 1e-15) {
    if (++steps > o.max_steps) {
      throw ConvergenceError("geodesic integration exceeded " + std::to_string(o.max_steps) +
                             " steps");
    }
    std::pair<double, double> interval;
    try {
      interval = stepper.do_step(system);
    } catch (const StageOutside&) {
      // Overshoot past zero; retry from the last accepted state.
      dt *= 0.25;
      if (dt < 1e-14 || ++retries > 80) escape(x[0], x[1]);
      stepper.initialize(x, t, dt);
      continue;
    }
    retries = 0;
    x = stepper.current_state();
    t = stepper.current_time();
    if (!inside(x[0], x[1], o)) escape(x[0], x[1]);
    sample(stepper, interval.first, interval.second);
    dt = stepper.current_time_step();
    if (t + dt > 1.0 && 1.0 - t > 1e-15) {
      dt = 1.0 - t;
      stepper.initialize(x, t, dt);
    }
  }
  return x;
}

struct NoSampling {
  template <class S>
  void operator()(S&, double, double) const {}
};

}  // namespace

Acceleration geodesic_rhs(const BetaPoint& p, double d_alpha, double d_beta) {
  return acceleration(p.alpha(), p.beta(), d_alpha, d_beta);
}

double fisher_inner(const TangentVector& u, const TangentVector& v) {
  return metric_tensor(u.base).inner(u.d_alpha, u.d_beta, v.d_alpha, v.d_beta);
}

double fisher_norm(const TangentVector& v) { return std::sqrt(std::max(0.0, fisher_inner(v, v))); }

double GeodesicPath::length() const {
  double total = 0.0;
  for (std::size_t i = 1; i < size(); ++i) {
    total += 0.5 * (speed(i - 1) + speed(i)) * (times[i] - times[i - 1]);
  }
  return total;
}

GeodesicPath exp_map(const TangentVector& v, int steps_hint, const IntegratorOptions& options) {
  if (steps_hint < 1) throw DomainError("exp_map: steps_hint must be at least 1");
  const auto samples = static_cast<std::size_t>(steps_hint) + 1;
  GeodesicPath path;
  path.times.reserve(samples);
  for (std::size_t i = 0; i < samples; ++i) {
    path.times.push_back(static_cast<double>(i) / static_cast<double>(steps_hint));
  }
  auto record = [&](const State& s) {
    path.points.emplace_back(s[0], s[1]);
    path.velocities.emplace_back(path.points.back(), s[2], s[3]);
  };

  const State start = {v.base.alpha(), v.base.beta(), v.d_alpha, v.d_beta};
  if (v.d_alpha == 0.0 && v.d_beta == 0.0) {
    for (std::size_t i = 0; i < samples; ++i) record(start);
    return path;
  }

  record(start);
  std::size_t next = 1;
  const State end = integrate(start, options, [&](auto& stepper, double, double t_new) {
    State s;
    while (next < samples - 1 && path.times[next] <= t_new) {
      stepper.calc_state(path.times[next], s);
      if (!inside(s[0], s[1], options)) escape(s[0], s[1]);
      record(s);
      ++next;
    }
  });
  while (next < samples) {
    record(end);
    ++next;
  }
  return path;
}

TangentVector geodesic_endpoint(const TangentVector& v, const IntegratorOptions& options) {
  if (v.d_alpha == 0.0 && v.d_beta == 0.0) return v;
  const State start = {v.base.alpha(), v.base.beta(), v.d_alpha, v.d_beta};
  const State end = integrate(start, options, NoSampling{});
  return {BetaPoint(end[0], end[1]), end[2], end[3]};
}

namespace {

using Vec2 = std::array<double, 2>;
using Mat2 = std::array<std::array<double, 2>, 2>;

double max_abs(const Vec2& r) { return std::max(std::abs(r[0]), std::abs(r[1])); }

// Shots only need to stay in a generous box around the two endpoints; a
// trajectory leaving it cannot be the connecting geodesic, and aborting it
// early keeps failed Newton trials cheap.
IntegratorOptions shooting_box(const BetaPoint& p, const BetaPoint& q, IntegratorOptions o) {
  constexpr double kMargin = 1e3;
  const double lo = std::min({p.alpha(), p.beta(), q.alpha(), q.beta()});
  const double hi = std::max({p.alpha(), p.beta(), q.alpha(), q.beta()});
  o.floor = std::max(o.floor, lo / kMargin);
  o.ceiling = std::min(o.ceiling, hi * kMargin);
  return o;
}

class Shooter {
 public:
  Shooter(const BetaPoint& p, const IntegratorOptions& o) : p_(p), o_(o) {}

  // log(endpoint) of the geodesic with initial velocity v.
  Vec2 operator()(const Vec2& v) const {
    const auto end = geodesic_endpoint({p_, v[0], v[1]}, o_);
    return {std::log(end.base.alpha()), std::log(end.base.beta())};
  }

  // Forward-difference Jacobian of operator() at v, where f = operator()(v).
  Mat2 jacobian(const Vec2& v, const Vec2& f) const {
    Mat2 jac{};
    for (int j = 0; j < 2; ++j) {
      const double base = j == 0 ? p_.alpha() : p_.beta();
      const double h = 1e-7 * std::max(std::abs(v[j]), 1e-4 * base);
      Vec2 vh = v;
      vh[j] += h;
      const Vec2 fh = (*this)(vh);
      jac[0][j] = (fh[0] - f[0]) / h;
      jac[1][j] = (fh[1] - f[1]) / h;
    }
    return jac;
  }

 private:
  BetaPoint p_;
  IntegratorOptions o_;
};

std::optional<Vec2> solve2(const Mat2& m, const Vec2& rhs) {
  const double det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
  if (!std::isfinite(det) || det == 0.0) return std::nullopt;
  return Vec2{(m[1][1] * rhs[0] - m[0][1] * rhs[1]) / det,
              (-m[1][0] * rhs[0] + m[0][0] * rhs[1]) / det};
}

struct NewtonResult {
  Vec2 v;
  double residual;
  bool converged;
  std::optional<Mat2> jacobian;
};

// Damped Newton on log(endpoint) - log(target), starting from a
// finite-difference Jacobian and continuing with Broyden updates while full
// steps are accepted.
NewtonResult newton_shoot(const Shooter& shoot, const Vec2& target, Vec2 v, double tol,
                          const ShootingOptions& opt, std::optional<Mat2> jac = std::nullopt) {
  Vec2 f;
  try {
    f = shoot(v);
  } catch (const NumericalError&) {
    return {v, INFINITY, false, std::nullopt};
  }
  Vec2 r = {f[0] - target[0], f[1] - target[1]};
  double norm = max_abs(r);
  bool fresh = false;
  for (int iter = 0; iter < opt.max_iterations && norm > tol; ++iter) {
    if (!jac) {
      try {
        jac = shoot.jacobian(v, f);
      } catch (const NumericalError&) {
        break;
      }
      fresh = true;
    }
    const auto step = solve2(*jac, {-r[0], -r[1]});
    if (!step) break;
    bool improved = false;
    for (double lambda = 1.0; lambda > 1e-6; lambda *= 0.5) {
      const Vec2 trial = {v[0] + lambda * (*step)[0], v[1] + lambda * (*step)[1]};
      Vec2 ft;
      try {
        ft = shoot(trial);
      } catch (const NumericalError&) {
        continue;
      }
      const Vec2 rt = {ft[0] - target[0], ft[1] - target[1]};
      const double nt = max_abs(rt);
      if (nt < norm) {
        if (lambda == 1.0) {
          // Broyden rank-one update with the accepted full step.
          const Vec2 dv = *step;
          const Vec2 df = {ft[0] - f[0], ft[1] - f[1]};
          const double dd = dv[0] * dv[0] + dv[1] * dv[1];
          for (int i = 0; i < 2; ++i) {
            const double miss = df[i] - ((*jac)[i][0] * dv[0] + (*jac)[i][1] * dv[1]);
            (*jac)[i][0] += miss * dv[0] / dd;
            (*jac)[i][1] += miss * dv[1] / dd;
          }
          fresh = false;
        } else {
          jac.reset();
        }
        v = trial;
        f = ft;
        r = rt;
        norm = nt;
        improved = true;
        break;
      }
    }
    if (!improved) {
      if (fresh) break;
      jac.reset();  // retry once with a finite-difference Jacobian
    }
  }
  return {v, norm, norm <= std::max(tol, opt.accept_tol), jac};
}

Vec2 log_point(const BetaPoint& p) { return {std::log(p.alpha()), std::log(p.beta())}; }

}  // namespace

TangentVector log_map(const BetaPoint& p, const BetaPoint& q, const ShootingOptions& options,
                      std::optional<std::array<double, 2>> guess) {
  if (p == q) return {p, 0.0, 0.0};

  const Shooter shoot(p, shooting_box(p, q, options.integrator));
  const Vec2 lp = log_point(p);
  const Vec2 lq = log_point(q);
  // Velocity of t -> p^(1-t) q^t at t = 0.
  const Vec2 chord = {p.alpha() * (lq[0] - lp[0]), p.beta() * (lq[1] - lp[1])};

  NewtonResult direct = newton_shoot(shoot, lq, guess.value_or(chord), options.tol, options);
  if (direct.converged) return {p, direct.v[0], direct.v[1]};

  // Continuation: move the target from p to q along the log-linear chord,
  // predicting each new velocity from the last Jacobian and shrinking the
  // stride whenever a corrector solve fails.
  double reached = 0.0;
  Vec2 v = {0.0, 0.0};
  std::optional<Mat2> jac;
  double stride = 0.25;
  int solves = 0;
  while (reached < 1.0) {
    if (stride < 1e-4 || ++solves > 400) break;
    const double next = std::min(1.0, reached + stride);
    const Vec2 target = {lp[0] + next * (lq[0] - lp[0]), lp[1] + next * (lq[1] - lp[1])};
    Vec2 predicted = {chord[0] * next, chord[1] * next};
    if (reached > 0.0) {
      const Vec2 shift = {(next - reached) * (lq[0] - lp[0]), (next - reached) * (lq[1] - lp[1])};
      const auto dv = jac ? solve2(*jac, shift) : std::nullopt;
      predicted = dv ? Vec2{v[0] + (*dv)[0], v[1] + (*dv)[1]}
                     : Vec2{v[0] * next / reached, v[1] * next / reached};
    }
    const double tol = next < 1.0 ? 1e-8 : options.tol;
    NewtonResult r = newton_shoot(shoot, target, predicted, tol, options, jac);
    if (r.converged) {
      reached = next;
      v = r.v;
      if (r.jacobian) jac = r.jacobian;
      stride *= 2.0;
    } else {
      stride *= 0.25;
    }
  }
  if (reached >= 1.0) return {p, v[0], v[1]};
  throw ConvergenceError("log_map: shooting did not converge from (" + std::to_string(p.alpha()) +
                         ", " + std::to_string(p.beta()) + ") to (" + std::to_string(q.alpha()) +
                         ", " + std::to_string(q.beta()) + "); best residual " +
                         std::to_string(direct.residual));
}

double distance(const BetaPoint& p, const BetaPoint& q, const ShootingOptions& options) {
  if (p == q) return 0.0;
  return fisher_norm(log_map(p, q, options));
}

double clt_limit_distance(double alpha, double alpha_prime) {
  if (!(alpha > 0.0) || !(alpha_prime > 0.0) || !std::isfinite(alpha) ||
      !std::isfinite(alpha_prime)) {
    throw DomainError("clt_limit_distance: arguments must be positive and finite");
  }
  return std::abs(std::log(alpha_prime / alpha)) / std::sqrt(2.0);
}

}  // namespace betageo
