#include "sirdelay/criteria.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sirdelay/cubic.hpp"
#include "sirdelay/numeric.hpp"

namespace sirdelay {

std::string to_string(Relation rel) {
  switch (rel) {
    case Relation::Less: return "<";
    case Relation::LessEqual: return "<=";
    case Relation::Greater: return ">";
    case Relation::GreaterEqual: return ">=";
    case Relation::Equal: return "==";
    case Relation::NotEqual: return "!=";
  }
  return "?";
}

Inequality compare(std::string label, double lhs, Relation rel, double rhs) {
  Inequality q{std::move(label), lhs, rel, rhs, false, false};
  if (std::isnan(lhs) || std::isnan(rhs)) return q;  // undefined operand never holds
  q.boundary = std::isfinite(lhs) && std::isfinite(rhs) && nearly_equal(lhs, rhs);
  switch (rel) {
    case Relation::Less: q.holds = !q.boundary && lhs < rhs; break;
    case Relation::LessEqual: q.holds = q.boundary || lhs <= rhs; break;
    case Relation::Greater: q.holds = !q.boundary && lhs > rhs; break;
    case Relation::GreaterEqual: q.holds = q.boundary || lhs >= rhs; break;
    case Relation::Equal: q.holds = q.boundary || lhs == rhs; break;
    case Relation::NotEqual: q.holds = !q.boundary && lhs != rhs; break;
  }
  return q;
}

bool all_hold(const std::vector<Inequality>& checks) {
  return std::all_of(checks.begin(), checks.end(), [](const Inequality& q) { return q.holds; });
}

namespace {

double p_of(const CharCoeffs& cc) { return cc.l1 + cc.m; }
double q_of(const CharCoeffs& cc) { return cc.n - cc.m1 - cc.n1; }
double s_of(const CharCoeffs& cc) { return cc.n + cc.m1 + cc.n1; }

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(DelayFreeVerdict v) {
  return v == DelayFreeVerdict::Stable ? "Stable" : "NotEstablished";
}

DelayFreeResult delay_free_stable(const CharCoeffs& cc) {
  DelayFreeResult res;
  const Inequality c1 = compare("l > 0", cc.l, Relation::Greater, 0.0);
  const Inequality c2 = compare("l1 + m > 0", p_of(cc), Relation::Greater, 0.0);
  const Inequality c3 = compare("n + m1 + n1 > 0", s_of(cc), Relation::Greater, 0.0);
  res.checks = {c1, c2, c3};
  res.hurwitz_conditions = c1.holds && c2.holds && c3.holds;
  res.checks.push_back(compare("l (l1 + m) > n + m1 + n1 (information only)", cc.l * p_of(cc), Relation::Greater,
                               s_of(cc)));
  res.verdict = res.hurwitz_conditions ? DelayFreeVerdict::Stable : DelayFreeVerdict::NotEstablished;
  res.polynomial = delay_free_polynomial(cc);
  return res;
}

DelayFreeResult delay_free_stable(const CharCoeffs& cc, const JacCoeffs& j) {
  DelayFreeResult res = delay_free_stable(cc);
  const Inequality d = compare("D == 0", j.D, Relation::Equal, 0.0);
  const Inequality c = compare("C <= 0", j.C, Relation::LessEqual, 0.0);
  const Inequality a = compare("A <= 0", j.A, Relation::LessEqual, 0.0);
  res.checks.insert(res.checks.end(), {d, c, a});
  res.delay_free_equivalent = d.holds && c.holds && a.holds;
  if (res.delay_free_equivalent) res.verdict = DelayFreeVerdict::Stable;
  return res;
}

// ---------------------------------------------------------------------------

std::string to_string(TauPersistenceVerdict v) {
  switch (v) {
    case TauPersistenceVerdict::Preserved: return "Preserved";
    case TauPersistenceVerdict::InstabilityPersists: return "InstabilityPersists";
    case TauPersistenceVerdict::SwitchExpected: return "SwitchExpected";
    case TauPersistenceVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

TauPersistenceResult tau_persistence(const CharCoeffs& cc) {
  TauPersistenceResult res;
  const double mn = cc.m1 + cc.n1;
  res.a0 = cc.n * cc.n - mn * mn;
  res.a1 = cc.m * cc.m - 2.0 * cc.l * cc.n - cc.l1 * cc.l1;
  res.a2 = cc.l * cc.l - 2.0 * cc.m;

  const Inequality a0_pos = compare("a0 > 0", res.a0, Relation::Greater, 0.0);
  const Inequality a1_nonneg = compare("a1 >= 0", res.a1, Relation::GreaterEqual, 0.0);
  const Inequality a1_neg = compare("a1 < 0", res.a1, Relation::Less, 0.0);
  const double disc_lhs = 2.0 * std::pow(res.a2, 3) - 9.0 * res.a1 * res.a2 + 27.0 * res.a0;
  const double base = res.a2 * res.a2 - 3.0 * res.a1;
  const double disc_rhs = base >= 0.0 ? 2.0 * std::pow(base, 1.5) : std::numeric_limits<double>::quiet_NaN();
  const Inequality disc = compare("2 a2^3 - 9 a1 a2 + 27 a0 > 2 (a2^2 - 3 a1)^(3/2)", disc_lhs, Relation::Greater, disc_rhs);
  const Inequality a0_nonpos = compare("a0 <= 0", res.a0, Relation::LessEqual, 0.0);
  const Inequality a0_neg = compare("a0 < 0", res.a0, Relation::Less, 0.0);
  res.checks = {a0_pos, a1_nonneg, a1_neg, disc, a0_nonpos, a0_neg};

  if (a0_pos.holds && a1_nonneg.holds) res.verdict = TauPersistenceVerdict::Preserved;
  else if (a0_pos.holds && a1_neg.holds && disc.holds) res.verdict = TauPersistenceVerdict::Preserved;
  else if (a0_neg.holds) res.verdict = TauPersistenceVerdict::SwitchExpected;
  else if (a0_nonpos.holds) res.verdict = TauPersistenceVerdict::InstabilityPersists;
  else res.verdict = TauPersistenceVerdict::Inconclusive;
  return res;
}

PseudoDelayCubic pseudo_delay_cubic(const CharCoeffs& cc) {
  // T (p + q T)^2 - (p + q T)(l + k T)(1 + l T) + s (1 + l T)^2, k = m - l1.
  const double l = cc.l, p = p_of(cc), q = q_of(cc), s = s_of(cc), k = cc.m - cc.l1;
  PseudoDelayCubic c;
  c.c3 = q * q - k * q * l;
  c.c2 = 2.0 * p * q - (q * l * l + k * p * l + k * q) + s * l * l;
  c.c1 = p * p - (p * l * l + l * q + k * p) + 2.0 * s * l;
  c.c0 = s - l * p;
  return c;
}

PseudoDelayCubic pseudo_delay_cubic_truncated(const CharCoeffs& cc) {
  const double l = cc.l, p = p_of(cc), q = q_of(cc), s = s_of(cc);
  const double sq_diff = cc.m * cc.m - cc.l1 * cc.l1;
  PseudoDelayCubic c;
  c.c3 = -l * q * (cc.m - cc.l1);
  c.c2 = q * q - (sq_diff * l + l * l * q - q * (cc.m - cc.l1)) + l * l * s;
  c.c1 = 2.0 * p * q - (p * l * l + l * q + sq_diff) + 2.0 * l * s;
  c.c0 = p * p - l * p + s;
  return c;
}

double tau_from_pseudo_delay(double nu, double T, int k) {
  return 2.0 / nu * (std::atan(nu * T) + k * std::numbers::pi);
}

std::optional<double> nu_squared_at(const CharCoeffs& cc, double T) {
  const double den = 1.0 + cc.l * T;
  if (std::abs(den) <= 1e-14) return std::nullopt;
  return (p_of(cc) + q_of(cc) * T) / den;
}

std::string to_string(TauVerdict v) {
  switch (v) {
    case TauVerdict::PreservedStable: return "PreservedStable";
    case TauVerdict::PreservedUnstable: return "PreservedUnstable";
    case TauVerdict::SwitchAt: return "SwitchAt";
    case TauVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

namespace {

void push_crossings(std::vector<DelayCrossing>& out, double T, double nu) {
  for (int k = 0; k <= 1; ++k) {
    const double delay = tau_from_pseudo_delay(nu, T, k);
    if (delay > 0.0 && std::isfinite(delay)) out.push_back({T, nu, delay, k});
  }
}

void sort_by_delay(std::vector<DelayCrossing>& v) {
  std::sort(v.begin(), v.end(), [](const DelayCrossing& a, const DelayCrossing& b) { return a.delay < b.delay; });
}

}  // namespace

TauCriticalResult tau_critical(const CharCoeffs& cc) {
  return tau_critical(cc, delay_free_stable(cc).verdict == DelayFreeVerdict::Stable);
}

TauCriticalResult tau_critical(const CharCoeffs& cc, bool stable_at_zero) {
  TauCriticalResult res;
  const double l = cc.l, p = p_of(cc), q = q_of(cc);
  const TauVerdict preserved = stable_at_zero ? TauVerdict::PreservedStable : TauVerdict::PreservedUnstable;
  res.cubic = pseudo_delay_cubic(cc);
  res.truncated_cubic = pseudo_delay_cubic_truncated(cc);

  const Inequality c1 = compare("l (n - m1 - n1) > 0", l * q, Relation::Greater, 0.0);
  const Inequality c2 = compare("l (l1 + m) + (n - m1 - n1) > 0", l * p + q, Relation::Greater, 0.0);
  const Inequality c3 = compare("l1 + m > 0", p, Relation::Greater, 0.0);
  const bool case1 = c1.holds && c2.holds && c3.holds;
  res.checks = {c1, c2, c3};
  res.checks.push_back(compare("cubic T^3 coefficient >= 0", res.cubic.c3, Relation::GreaterEqual, 0.0));
  res.checks.push_back(compare("cubic T^2 coefficient >= 0", res.cubic.c2, Relation::GreaterEqual, 0.0));
  res.checks.push_back(compare("cubic T^1 coefficient >= 0", res.cubic.c1, Relation::GreaterEqual, 0.0));
  res.checks.push_back(compare("cubic T^0 coefficient >= 0", res.cubic.c0, Relation::GreaterEqual, 0.0));
  const bool case2 = std::all_of(res.checks.end() - 4, res.checks.end(), [](const Inequality& x) { return x.holds; });

  if (res.cubic.identically_zero()) {
    res.diagnostic = "pseudo-delay cubic vanishes identically; the delay does not enter the imaginary-axis condition";
    res.verdict = case1 ? preserved : TauVerdict::Inconclusive;
    return res;
  }
  res.cubic_roots = solve_cubic_real(res.cubic.c3, res.cubic.c2, res.cubic.c1, res.cubic.c0);

  bool positive_root = false;
  for (double T : res.cubic_roots) {
    if (T == 0.0) continue;
    const auto w = nu_squared_at(cc, T);
    if (T > 0.0) positive_root = true;
    if (!w || *w <= 0.0) continue;
    const double nu = std::sqrt(*w);
    push_crossings(res.crossings, T, nu);
    if (T > 0.0 && !res.primary) res.primary = DelayCrossing{T, nu, tau_from_pseudo_delay(nu, T, 0), 0};
  }
  sort_by_delay(res.crossings);

  if (case1 || case2) {
    res.verdict = preserved;
    if (!res.crossings.empty())
      res.diagnostic = "coefficient conditions report preservation although the cubic yields imaginary-axis crossings";
    return res;
  }
  if (res.primary) {
    res.verdict = TauVerdict::SwitchAt;
    return res;
  }
  if (!res.crossings.empty()) {
    res.verdict = TauVerdict::SwitchAt;
    res.primary = res.crossings.front();
    res.diagnostic = "no positive pseudo-delay root gives nu^2 > 0; switch taken from a negative root with k = 1";
    return res;
  }
  if (positive_root) {
    res.verdict = TauVerdict::Inconclusive;
    res.diagnostic = "nu^2 <= 0 at every positive root of the pseudo-delay cubic";
    return res;
  }
  res.verdict = preserved;
  res.diagnostic = "no real root of the pseudo-delay cubic yields an imaginary-axis crossing";
  return res;
}

// ---------------------------------------------------------------------------

std::string to_string(DeltaVerdict v) {
  switch (v) {
    case DeltaVerdict::Preserved: return "Preserved";
    case DeltaVerdict::SwitchAt: return "SwitchAt";
    case DeltaVerdict::SecondBifurcationPossible: return "SecondBifurcationPossible";
    case DeltaVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

DeltaResult delta_analysis(const CharCoeffs& cc) {
  DeltaResult res;
  const double l = cc.l, p = p_of(cc);
  const double nm = cc.n + cc.m1;
  const double q = nm - cc.n1;  // n + m1 - n1
  const double b2 = l * l - 2.0 * p;
  const double b1 = p * p - 2.0 * l * nm;
  const double b0 = nm * nm - cc.n1 * cc.n1;

  const Inequality limit = compare("l (l1 + m) != n + m1 - n1", l * p, Relation::NotEqual, q);
  const Inequality e1 = compare("l^2 - 2 (l1 + m) >= 0", b2, Relation::GreaterEqual, 0.0);
  const Inequality e2 = compare("(l1 + m)^2 - 2 l (n + m1) >= 0", b1, Relation::GreaterEqual, 0.0);
  const Inequality e3 = compare("(n + m1)^2 - n1^2 >= 0", b0, Relation::GreaterEqual, 0.0);
  res.checks = {limit, e1, e2, e3};

  auto sgn = [](double v) { return v > 0.0 && !nearly_equal(v, 0.0) ? 1 : (v < 0.0 && !nearly_equal(v, 0.0) ? -1 : 0); };
  const int s2 = sgn(b2), s1 = sgn(b1), s0 = sgn(b0);
  struct Pattern {
    const char* name;
    int a, b, c;
  };
  static constexpr Pattern patterns[] = {
      {"(i) -,+,+", -1, 1, 1}, {"(ii) +,-,+", 1, -1, 1}, {"(iii) +,+,-", 1, 1, -1}, {"(iv) -,-,-", -1, -1, -1}};
  for (const auto& pat : patterns)
    if (s2 == pat.a && s1 == pat.b && s0 == pat.c) res.sign_patterns.emplace_back(pat.name);
  if (s2 == -1 && s1 == 1 && s0 == -1) res.sign_patterns.emplace_back("two positive roots: -,+,-");

  if (limit.holds && e1.holds && e2.holds && e3.holds) {
    res.verdict = DeltaVerdict::Preserved;
    return res;
  }

  std::vector<double> roots;
  if (!(b2 == 0.0 && b1 == 0.0 && b0 == 0.0)) roots = solve_cubic_real(1.0, b2, b1, b0);
  for (double w : roots) {
    if (!(w > 0.0) || nearly_equal(w, 0.0)) continue;
    res.nu_squared.push_back(w);
    const double den = q - l * w;
    if (std::abs(den) <= 1e-14 * std::max(1.0, std::abs(q))) continue;
    const double T = (w - p) / den;
    push_crossings(res.crossings, T, std::sqrt(w));
  }
  sort_by_delay(res.crossings);

  if (res.nu_squared.empty()) {
    res.verdict = limit.holds ? DeltaVerdict::Preserved : DeltaVerdict::Inconclusive;
    if (!limit.holds) res.diagnostic = "F2 has an imaginary-axis zero although no positive nu^2 exists";
    return res;
  }
  if (res.crossings.empty()) {
    res.verdict = DeltaVerdict::Inconclusive;
    res.diagnostic = "positive nu^2 found but the pseudo delay is undefined at every one";
    return res;
  }
  res.verdict = res.nu_squared.size() >= 2 ? DeltaVerdict::SecondBifurcationPossible : DeltaVerdict::SwitchAt;
  return res;
}

// ---------------------------------------------------------------------------

std::string to_string(CombinedVerdict v) {
  switch (v) {
    case CombinedVerdict::Preserved: return "Preserved";
    case CombinedVerdict::SwitchPossible: return "SwitchPossible";
    case CombinedVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

double psi(const CharCoeffs& cc, double theta, double nu) {
  const double v2 = nu * nu;
  return v2 * v2 * v2 + (cc.l * cc.l - 2.0 * cc.m) * v2 * v2 + (cc.m * cc.m - 2.0 * cc.l * cc.n - cc.l1 * cc.l1) * v2 +
         (cc.n * cc.n + cc.n1 * cc.n1 - cc.m1 * cc.m1) + 2.0 * (cc.n - cc.l * v2) * std::cos(nu * theta) +
         2.0 * (cc.m * nu - v2 * nu) * std::sin(nu * theta);
}

namespace {

std::optional<double> smallest_positive_psi_root(const CharCoeffs& cc, double theta) {
  constexpr int kPoints = 4000;
  const double lo = std::log(1e-6), hi = std::log(1e3);
  double prev_nu = 0.0;
  double prev = psi(cc, theta, 0.0);
  for (int i = 0; i < kPoints; ++i) {
    const double nu = std::exp(lo + (hi - lo) * i / (kPoints - 1));
    const double val = psi(cc, theta, nu);
    if (val == 0.0) return nu;
    if (prev != 0.0 && (val > 0.0) != (prev > 0.0)) {
      double a = prev_nu, b = nu, fa = prev;
      for (int it = 0; it < 200 && b - a > 1e-15 * b; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = psi(cc, theta, mid);
        if (fm == 0.0) return mid;
        if ((fm > 0.0) == (fa > 0.0)) {
          a = mid;
          fa = fm;
        } else {
          b = mid;
        }
      }
      return 0.5 * (a + b);
    }
    prev = val;
    prev_nu = nu;
  }
  return std::nullopt;
}

}  // namespace

CombinedResult general_delay_analysis(const CharCoeffs& cc, double tau, double delta) {
  CombinedResult res;
  const double theta = tau + delta;
  res.psi_at_zero = psi(cc, theta, 0.0);

  bool preserved = false;
  if (cc.l == 0.0 || cc.l1 == 0.0) {
    res.diagnostic = cc.l == 0.0 ? "l = 0 leaves the preservation bound undefined"
                                 : "l1 = 0 leaves the preservation bound undefined";
  } else {
    const double rad = cc.l1 * cc.l1 + 4.0 * cc.l * (cc.n + std::abs(cc.n1) + std::abs(cc.m1));
    if (rad < 0.0) {
      res.diagnostic = "negative radicand in the preservation bound";
    } else {
      const double bound = (std::abs(cc.l1) + std::sqrt(rad)) / (2.0 * cc.l);
      const Inequality b1 = compare("nu_bound^2 <= (n1^2 - (m1^2 + 2)) / l1^2", bound * bound, Relation::LessEqual,
                                    (cc.n1 * cc.n1 - (cc.m1 * cc.m1 + 2.0)) / (cc.l1 * cc.l1));
      const Inequality b2 = compare("n1^2 > m1^2 + 2", cc.n1 * cc.n1, Relation::Greater, cc.m1 * cc.m1 + 2.0);
      res.checks = {b1, b2};
      preserved = b1.holds && b2.holds;
    }
  }
  const Inequality sw =
      compare("n^2 + 2n + n1^2 < m1^2", cc.n * cc.n + 2.0 * cc.n + cc.n1 * cc.n1, Relation::Less, cc.m1 * cc.m1);
  res.checks.push_back(sw);

  if (preserved) {
    res.verdict = CombinedVerdict::Preserved;
    return res;
  }
  if (sw.holds) {
    res.verdict = CombinedVerdict::SwitchPossible;
    res.nu = smallest_positive_psi_root(cc, theta);
    if (res.nu) {
      const double v = *res.nu;
      res.theta = std::atan((cc.m * v - v * v * v) / (cc.n - cc.l * v * v)) / v;
    } else {
      res.diagnostic = "no sign change of Psi located on [1e-6, 1e3]";
    }
    return res;
  }
  res.verdict = CombinedVerdict::Inconclusive;
  return res;
}

// ---------------------------------------------------------------------------

std::string to_string(GlobalVerdict v) {
  switch (v) {
    case GlobalVerdict::EndemicGAS: return "EndemicGAS";
    case GlobalVerdict::DiseaseFreeGAS: return "DiseaseFreeGAS";
    case GlobalVerdict::NotApplicable: return "NotApplicable";
    case GlobalVerdict::Inconclusive: return "Inconclusive";
  }
  return "?";
}

GlobalResult global_verdict(const ModelSpec& model, const std::vector<Equilibrium>& equilibria) {
  GlobalResult res;
  if (!model.is_bilinear_special_case()) {
    res.note = "requires f = x y, V = x, P = y";
    return res;
  }
  const Params& p = model.params();
  const double inf = std::numeric_limits<double>::infinity();
  const double treat_bound = p.r > 0.0 ? p.b * (p.d1 + p.r) / p.r : inf;
  const Inequality endemic =
      compare("b1 < min{b (d1 + r) / r, c + d}", p.b1, Relation::Less, std::min(treat_bound, p.c + p.d));
  const double lhs = p.c + p.d > 0.0 ? p.a / (p.c + p.d) : inf;
  const double rhs = p.b1 > 0.0 ? (p.d1 + p.r) / p.b1 : inf;
  const Inequality free = compare("a / (c + d) < (d1 + r) / b1", lhs, Relation::Less, rhs);
  res.checks = {endemic, free};
  res.boundary = free.boundary;

  const bool has_endemic = std::any_of(equilibria.begin(), equilibria.end(),
                                       [](const Equilibrium& e) { return e.kind == EquilibriumKind::Endemic; });
  if (has_endemic && endemic.holds) res.verdict = GlobalVerdict::EndemicGAS;
  else if (free.holds) res.verdict = GlobalVerdict::DiseaseFreeGAS;
  else res.verdict = GlobalVerdict::Inconclusive;
  if (res.boundary) res.note = "a / (c + d) equals (d1 + r) / b1 within the equality band";
  return res;
}

}  // namespace sirdelay
