#include <cmath>
#include <deque>

#include "dualsig/optimizer.hpp"

namespace dualsig::opt {

namespace {

double dot(const Series& a, const Series& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double inf_norm(const Series& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::fabs(v));
  return m;
}

struct Pair {
  Series s;
  Series y;
  double rho;
};

// Two-loop recursion; returns the search direction -H*g.
Series direction(const std::deque<Pair>& mem, const Series& g) {
  Series q = g;
  std::vector<double> alpha(mem.size());
  for (std::size_t k = mem.size(); k-- > 0;) {
    alpha[k] = mem[k].rho * dot(mem[k].s, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * mem[k].y[i];
  }
  if (!mem.empty()) {
    const Pair& last = mem.back();
    const double yy = dot(last.y, last.y);
    const double h0 = yy > 0.0 ? 1.0 / (last.rho * yy) : 1.0;
    for (double& v : q) v *= h0;
  }
  for (std::size_t k = 0; k < mem.size(); ++k) {
    const double beta = mem[k].rho * dot(mem[k].y, q);
    for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * mem[k].s[i];
  }
  for (double& v : q) v = -v;
  return q;
}

}  // namespace

LbfgsOutcome lbfgs_minimize(const ObjectiveFn& fn, Series x0, const LbfgsOptions& opt) {
  LbfgsOutcome out;
  const std::size_t n = x0.size();
  Series x = std::move(x0);
  Series g(n, 0.0);
  double f = fn(x, &g);
  int evals = 1;
  out.accepted_f.push_back(f);

  Series best_x = x;
  double best_f = f;

  std::deque<Pair> mem;
  int streak = 0;
  bool converged = false;
  int iter = 0;

  for (; iter < opt.max_iterations; ++iter) {
    const double gnorm = inf_norm(g);
    if (gnorm == 0.0 || !std::isfinite(f)) {
      converged = std::isfinite(f);
      break;
    }

    Series d = direction(mem, g);
    double dg = dot(d, g);
    if (!(dg < 0.0)) {  // not a descent direction; fall back to steepest descent
      for (std::size_t i = 0; i < n; ++i) d[i] = -g[i];
      dg = -dot(g, g);
    }

    double step = mem.empty() ? std::min(1.0, 1.0 / gnorm) : 1.0;
    Series x_new(n);
    Series g_new(n, 0.0);
    double f_new = f;
    bool accepted = false;
    for (int ls = 0; ls < opt.max_linesearch; ++ls) {
      for (std::size_t i = 0; i < n; ++i) x_new[i] = x[i] + step * d[i];
      f_new = fn(x_new, &g_new);
      ++evals;
      if (std::isfinite(f_new) && f_new <= f + opt.armijo_c1 * step * dg) {
        accepted = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted) {
      // No sufficient decrease along this direction at any tried step;
      // treat the current iterate as final.
      converged = streak >= opt.patience || inf_norm(g) <= 1e-10 * std::max(1.0, std::fabs(f));
      break;
    }

    Series s(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = x_new[i] - x[i];
      y[i] = g_new[i] - g[i];
    }
    const double sy = dot(s, y);
    if (sy > 1e-12 * std::sqrt(dot(s, s)) * std::sqrt(dot(y, y))) {
      mem.push_back(Pair{std::move(s), std::move(y), 1.0 / sy});
      if (mem.size() > static_cast<std::size_t>(opt.memory)) mem.pop_front();
    }

    const double rel = std::fabs(f - f_new) / std::max(1.0, std::fabs(f_new));
    streak = rel < opt.rel_tolerance ? streak + 1 : 0;

    x.swap(x_new);
    g.swap(g_new);
    f = f_new;
    out.accepted_f.push_back(f);
    if (f < best_f) {
      best_f = f;
      best_x = x;
    }
    if (streak >= opt.patience) {
      converged = true;
      ++iter;
      break;
    }
  }

  out.x = std::move(best_x);
  out.f = best_f;
  out.iterations = iter;
  out.evals = evals;
  out.converged = converged;
  return out;
}

}  // namespace dualsig::opt
