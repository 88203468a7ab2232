#include "dyadic/extremal.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dyadic/bellman.hpp"
#include "dyadic/errors.hpp"
#include "dyadic/functional.hpp"

namespace dyadic {

namespace {

constexpr double kExtremalTol = 1e-9;
constexpr double kClampSlack = 1e-12;
constexpr std::size_t kMaxGridCells = 200'000;

void check(bool ok, const std::string& what) {
  if (!ok) throw InvariantViolation("solve_extremal_g: " + what);
}

double rel_diff(double got, double want) {
  return std::abs(got - want) / std::max(std::abs(want), 1e-300);
}

}  // namespace

VuValues vu_functionals(const StepFunction& g, double p, double L) {
  detail::require(p > 1.0, "vu_functionals: p must be > 1");
  detail::require(L > 0.0, "vu_functionals: L must be > 0");
  const double f = g.integral();
  VuValues out;
  out.below_mean = L < f;
  if (L <= f) {
    // Av g >= f >= L everywhere.
    out.crossover = g.total_length();
  } else {
    out.crossover = beta_lambda(g, L);
  }
  const double beta = out.crossover;
  const double Lp1 = std::pow(L, p - 1.0);
  if (beta <= 0.0) {
    out.v = std::pow(L, p) * g.total_length();
    out.u = Lp1 * f;
    return out;
  }
  out.v = outer_average_integral(g, PowerFn{p}, beta) + std::pow(L, p) * (g.total_length() - beta);
  out.u = weighted_by_g_average_integral(g, PowerFn{p - 1.0}, beta) +
          Lp1 * (f - g.integral_to(beta));
  return out;
}

double lemma41_residual(double p, double f, double L, const VuValues& vu) {
  const double q = p / (p - 1.0);
  return vu.v - (std::pow(L, p) - q * f * std::pow(L, p - 1.0) + q * vu.u);
}

double lemma41_residual(const StepFunction& g, double p, double L) {
  return lemma41_residual(p, g.integral(), L, vu_functionals(g, p, L));
}

double PowerLawExtremal::value(double t) const {
  if (t > gamma_ || is_flat()) return L_ / c_;
  return K_ * std::pow(t, -decay());
}

double PowerLawExtremal::average(double t) const {
  if (is_flat()) return L_ / c_;
  if (t <= gamma_) return c_ * K_ * std::pow(t, -decay());
  return integral_to(t) / t;
}

double PowerLawExtremal::integral_to(double t) const {
  if (is_flat()) return L_ / c_ * t;
  if (t <= gamma_) return K_ * c_ * std::pow(t, 1.0 / c_);
  return K_ * c_ * std::pow(gamma_, 1.0 / c_) + L_ / c_ * (t - gamma_);
}

double PowerLawExtremal::head_power_integral() const {
  if (is_flat()) return 0.0;
  // int_0^gamma K^p t^(-alpha p) dt with exponent e = 1 - alpha p > 0.
  const double e = 1.0 - decay() * p_;
  return std::pow(K_, p_) * std::pow(gamma_, e) / e;
}

double PowerLawExtremal::power_integral() const {
  return head_power_integral() + std::pow(L_ / c_, p_) * (1.0 - gamma_);
}

VuValues PowerLawExtremal::vu(double level) const {
  detail::require(level >= L_ * (1.0 - kClampSlack), "PowerLawExtremal::vu: level must be >= L");
  VuValues out;
  const double total = integral_to(1.0);
  if (is_flat()) {
    out.crossover = 0.0;
    out.v = std::pow(level, p_);
    out.u = total * std::pow(level, p_ - 1.0);
    return out;
  }
  // On (0, gamma] the average is L (t/gamma)^(-alpha); it meets `level` at t_level.
  const double alpha = decay();
  const double e = 1.0 - alpha * p_;
  const double t_level = gamma_ * std::pow(L_ / std::max(level, L_), 1.0 / alpha);
  const double head = std::pow(L_, p_) * gamma_ * std::pow(t_level / gamma_, e) / e;
  out.crossover = t_level;
  out.v = head + std::pow(level, p_) * (1.0 - t_level);
  out.u = head / c_ + std::pow(level, p_ - 1.0) * (total - t_level * level);
  return out;
}

StepFunction PowerLawExtremal::discretize(double ratio, double head_tolerance) const {
  detail::require(ratio > 0.0 && ratio < 1.0, "discretize: ratio must lie in (0, 1)");
  detail::require(head_tolerance > 0.0, "discretize: head tolerance must be > 0");
  if (is_flat()) return StepFunction::constant(L_ / c_);

  const double alpha = decay();
  const double e = 1.0 - alpha * p_;
  // int_0^{gamma s} g^p = head_power_integral() * s^e.
  const double head_total = head_power_integral();
  std::size_t cells = 0;
  if (head_total > head_tolerance * F_) {
    double need = std::log(head_tolerance * F_ / head_total) / (e * std::log(ratio));
    cells = static_cast<std::size_t>(std::ceil(need));
  }
  const double min_log = std::log(1e-280 / gamma_) / std::log(ratio);
  cells = std::min({cells, kMaxGridCells, static_cast<std::size_t>(std::max(0.0, min_log))});

  auto power_mass = [&](double lo, double hi) {
    return head_total * (std::pow(hi / gamma_, e) - std::pow(lo / gamma_, e));
  };

  std::vector<double> grid(cells + 1);  // grid[j] = gamma ratio^j
  grid[0] = gamma_;
  for (std::size_t j = 0; j < cells; ++j) grid[j + 1] = grid[j] * ratio;

  // Build from the right end (t = 1) toward 0, then reverse.
  std::vector<Piece> reversed;
  if (gamma_ < 1.0) reversed.push_back(Piece{1.0 - gamma_, L_ / c_});
  bool moment_matched = true;
  std::vector<Piece> cell_pieces;
  for (std::size_t j = 0; j < cells; ++j) {
    const double hi = grid[j], lo = grid[j + 1];
    const double width = hi - lo;
    const double mean = (integral_to(hi) - integral_to(lo)) / width;
    const double pmean = power_mass(lo, hi) / width;
    // Two halves mean +- d with the same mean and p-th moment.
    auto excess = [&](double d) {
      return 0.5 * (std::pow(mean + d, p_) + std::pow(mean - d, p_)) - pmean;
    };
    double d = 0.0;
    if (excess(0.0) < 0.0 && excess(mean) >= 0.0) {
      double a = 0.0, b = mean;
      for (int it = 0; it < 200 && b - a > 1e-17 * mean; ++it) {
        double mid = 0.5 * (a + b);
        (excess(mid) < 0.0 ? a : b) = mid;
      }
      d = 0.5 * (a + b);
    } else if (excess(0.0) < 0.0) {
      moment_matched = false;
    }
    cell_pieces.push_back(Piece{0.5 * width, mean - d});
    cell_pieces.push_back(Piece{0.5 * width, mean + d});
  }
  // Cells must stay ordered: the low half of a cell above the high half of the next.
  for (std::size_t i = 2; i < cell_pieces.size(); i += 2) {
    if (cell_pieces[i].value < cell_pieces[i - 1].value) moment_matched = false;
  }
  if (!moment_matched) {
    for (std::size_t i = 0; i < cell_pieces.size(); i += 2) {
      double avg = 0.5 * (cell_pieces[i].value + cell_pieces[i + 1].value);
      cell_pieces[i].value = cell_pieces[i + 1].value = avg;
    }
  }
  reversed.insert(reversed.end(), cell_pieces.begin(), cell_pieces.end());
  const double head_end = grid[cells];
  reversed.push_back(Piece{head_end, average(head_end)});
  return StepFunction(std::vector<Piece>(reversed.rbegin(), reversed.rend()));
}

PowerLawExtremal solve_extremal_g(double p, double f, double F, double L) {
  const BellmanPoint point(p, f, F, L);
  if (!point.below_threshold()) {
    detail::fail_precondition(
        "solve_extremal_g: L >= (p/(p-1)) f has no single extremal; use sharpness_sequence");
  }
  PowerLawExtremal g;
  g.p_ = p;
  g.f_ = f;
  g.F_ = F;
  g.L_ = L;
  g.b_ = std::clamp(point.b(), 0.0, 1.0);
  g.c_ = omega(p, g.b_);

  if (g.c_ - 1.0 <= kClampSlack) {
    // b = 1 forces L = f and F = f^p: the constant function.
    g.gamma_ = g.gamma_mean_ = g.gamma_moment_ = 0.0;
    g.K_ = 0.0;
  } else {
    const double Lp = std::pow(L, p);
    const double cp = std::pow(g.c_, p);
    g.gamma_moment_ = (F - Lp / cp) / (Lp * (1.0 / g.b_ - 1.0 / cp));
    g.gamma_mean_ = (f - L / g.c_) / (L * (1.0 - 1.0 / g.c_));
    check(std::abs(g.gamma_moment_ - g.gamma_mean_) <= kExtremalTol,
          "the two gamma formulas disagree (" + std::to_string(g.gamma_moment_) + " vs " +
              std::to_string(g.gamma_mean_) + ")");
    double gamma = g.gamma_moment_;
    check(gamma >= -kClampSlack && gamma <= 1.0 + kClampSlack,
          "gamma = " + std::to_string(gamma) + " outside [0, 1]");
    g.gamma_ = std::clamp(gamma, 0.0, 1.0);
    // K c gamma^(-1+1/c) = L.
    g.K_ = g.gamma_ > 0.0 ? L * std::pow(g.gamma_, g.decay()) / g.c_ : 0.0;
  }

  check(rel_diff(g.integral_to(1.0), f) <= kExtremalTol, "int g != f");
  check(rel_diff(g.power_integral(), F) <= kExtremalTol, "int g^p != F");
  if (!g.is_flat()) {
    check(rel_diff(g.K_ * g.c_ * std::pow(g.gamma_, -g.decay()), L) <= kExtremalTol,
          "g is not continuous at gamma");
  }
  for (int i = 0; i < 1000; ++i) {
    double t = (i + 0.5) / 1000.0;
    double lhs = std::max(g.average(t), L);
    check(rel_diff(lhs, g.c_ * g.value(t)) <= kExtremalTol,
          "max(Av g, L) != c g at t = " + std::to_string(t));
  }
  return g;
}

double sharpness_level(double p, double f, std::size_t n) {
  const double L0 = p / (p - 1.0) * f;
  return std::max(f, L0 * (1.0 - std::ldexp(1.0, -static_cast<int>(n))));
}

SharpnessSequence sharpness_sequence(double p, double f, double F, double L, std::size_t n_terms) {
  const BellmanPoint point(p, f, F, L);
  detail::require(!point.below_threshold(),
                  "sharpness_sequence: needs L >= (p/(p-1)) f; use solve_extremal_g below it");
  detail::require(n_terms >= 1 && n_terms <= 40, "sharpness_sequence: n_terms must be in [1, 40]");

  SharpnessSequence seq;
  seq.p = p;
  seq.f = f;
  seq.F = F;
  seq.L = L;
  seq.L0 = point.L0();
  seq.target = bellman3(p, f, F, L);
  const double L0 = seq.L0;
  const double Lp = std::pow(L, p);
  const double L0p = std::pow(L0, p);
  const double theta_L = p / (p - 1.0) * (std::pow(L, p - 1.0) - std::pow(L0, p - 1.0));

  for (std::size_t n = 1; n <= n_terms; ++n) {
    SharpnessTerm term;
    term.n = n;
    term.L_n = sharpness_level(p, f, n);
    const PowerLawExtremal g = solve_extremal_g(p, f, F, term.L_n);
    term.b_n = g.b();
    term.c_n = g.c();
    term.gamma_n = g.gamma();
    term.k_n = g.K();

    if (g.is_flat()) {
      term.v_at_threshold = L0p;
    } else {
      // Av g_n = L_n (t/gamma)^(-alpha) on (0, gamma], below L_n after it.
      const double alpha = g.decay();
      const double rho = 1.0 / alpha;
      const double e = 1.0 - alpha * p;
      const double kappa = p - rho;  // < 0 because c_n < p/(p-1)
      const double t0 = g.gamma() * std::pow(term.L_n / L0, rho);
      term.v_at_threshold =
          std::pow(term.L_n, p) * g.gamma() * std::pow(t0 / g.gamma(), e) / e + L0p * (1.0 - t0);
      // {Av g_n > s} = (0, t(s)) with int_0^t(s) g_n = s t(s).
      term.a_n = p * g.gamma() * std::pow(term.L_n, p) *
                 (std::pow(L / term.L_n, kappa) - std::pow(L0 / term.L_n, kappa)) / kappa;
      term.a_n_bound = theta_L * L0 * t0;
    }
    term.v = Lp - L0p + term.v_at_threshold - term.a_n;
    term.v_lower = Lp - L0p + std::pow(g.c(), p) * F - term.a_n_bound;
    term.rel_gap = (seq.target - term.v) / seq.target;
    seq.terms.push_back(term);
  }
  return seq;
}

}  // namespace dyadic
