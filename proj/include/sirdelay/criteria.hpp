#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sirdelay/characteristic.hpp"
#include "sirdelay/model.hpp"

namespace sirdelay {

enum class Relation { Less, LessEqual, Greater, GreaterEqual, Equal, NotEqual };

std::string to_string(Relation rel);

/// One evaluated inequality, kept so every verdict can be audited.
///
/// Operands within the equality band are flagged `boundary`. Strict relations fail
/// on the boundary, non-strict ones hold there.
struct Inequality {
  std::string label;
  double lhs = 0.0;
  Relation relation = Relation::Less;
  double rhs = 0.0;
  bool holds = false;
  bool boundary = false;
};

Inequality compare(std::string label, double lhs, Relation rel, double rhs);

bool all_hold(const std::vector<Inequality>& checks);

// ---------------------------------------------------------------------------
// No delays

enum class DelayFreeVerdict { Stable, NotEstablished };
std::string to_string(DelayFreeVerdict v);

struct DelayFreeResult {
  DelayFreeVerdict verdict = DelayFreeVerdict::NotEstablished;
  bool hurwitz_conditions = false;     // l > 0, l1+m > 0, n+m1+n1 > 0
  bool delay_free_equivalent = false;  // D = 0, C <= 0, A <= 0
  std::vector<Inequality> checks;
  std::string polynomial;
};

/// Coefficient-sign test on lambda^3 + l lambda^2 + (l1+m) lambda + (n+m1+n1).
/// The product condition l (l1+m) > n+m1+n1 is listed for information only.
DelayFreeResult delay_free_stable(const CharCoeffs& cc);

/// Same, plus the D = 0, C <= 0, A <= 0 special case in which the delayed terms drop out.
DelayFreeResult delay_free_stable(const CharCoeffs& cc, const JacCoeffs& j);

// ---------------------------------------------------------------------------
// Incubation delay only

enum class TauPersistenceVerdict { Preserved, InstabilityPersists, SwitchExpected, Inconclusive };
std::string to_string(TauPersistenceVerdict v);

struct TauPersistenceResult {
  TauPersistenceVerdict verdict = TauPersistenceVerdict::Inconclusive;
  double a0 = 0.0;  // n^2 - (m1+n1)^2
  double a1 = 0.0;  // m^2 - 2 l n - l1^2
  double a2 = 0.0;  // l^2 - 2 m
  std::vector<Inequality> checks;
};

TauPersistenceResult tau_persistence(const CharCoeffs& cc);

/// Coefficients of c3 T^3 + c2 T^2 + c1 T + c0 in the pseudo delay T.
struct PseudoDelayCubic {
  double c3 = 0.0;
  double c2 = 0.0;
  double c1 = 0.0;
  double c0 = 0.0;

  bool identically_zero() const { return c3 == 0.0 && c2 == 0.0 && c1 == 0.0 && c0 == 0.0; }
  bool all_nonnegative() const { return c3 >= 0.0 && c2 >= 0.0 && c1 >= 0.0 && c0 >= 0.0; }
};

/// Cubic whose positive roots T give imaginary-axis roots lambda = i nu of the
/// tau-only equation, with nu^2 = (l1+m + (n-m1-n1) T) / (1 + l T).
///
/// Obtained by substituting e^{-lambda tau} = (1 - lambda T)/(1 + lambda T) at lambda = i nu,
/// so each real root reproduces an actual crossing.
PseudoDelayCubic pseudo_delay_cubic(const CharCoeffs& cc);

/// Variant of the same expansion in which the nu^4 term is taken without its T factor.
/// Kept for comparison only; its roots do not in general produce crossings.
PseudoDelayCubic pseudo_delay_cubic_truncated(const CharCoeffs& cc);

/// tau = (2/nu) (atan(nu T) + k pi).
double tau_from_pseudo_delay(double nu, double T, int k = 0);

/// nu^2 implied by a pseudo-delay root, or nullopt when 1 + l T vanishes.
std::optional<double> nu_squared_at(const CharCoeffs& cc, double T);

enum class TauVerdict { PreservedStable, PreservedUnstable, SwitchAt, Inconclusive };
std::string to_string(TauVerdict v);

struct DelayCrossing {
  double T = 0.0;
  double nu = 0.0;
  double delay = 0.0;
  int k = 0;
};

struct TauCriticalResult {
  TauVerdict verdict = TauVerdict::Inconclusive;
  std::optional<DelayCrossing> primary;  // smallest positive T with nu^2 > 0, k = 0
  std::vector<DelayCrossing> crossings;  // every positive delay from k = 0 and k = 1
  PseudoDelayCubic cubic;
  PseudoDelayCubic truncated_cubic;
  std::vector<double> cubic_roots;
  std::vector<Inequality> checks;
  std::string diagnostic;
};

/// Stability switch estimate for tau > 0, delta = 0. `stable_at_zero` selects
/// between PreservedStable and PreservedUnstable.
TauCriticalResult tau_critical(const CharCoeffs& cc, bool stable_at_zero);
TauCriticalResult tau_critical(const CharCoeffs& cc);

// ---------------------------------------------------------------------------
// Recovery delay only

enum class DeltaVerdict { Preserved, SwitchAt, SecondBifurcationPossible, Inconclusive };
std::string to_string(DeltaVerdict v);

struct DeltaResult {
  DeltaVerdict verdict = DeltaVerdict::Inconclusive;
  std::vector<double> nu_squared;        // positive roots of the cubic in nu^2
  std::vector<DelayCrossing> crossings;  // sorted by delay
  std::vector<Inequality> checks;
  std::vector<std::string> sign_patterns;  // which of the listed coefficient sign patterns hold
  std::string diagnostic;
};

/// Roots of nu^6 + (l^2 - 2(l1+m)) nu^4 + ((l1+m)^2 - 2l(n+m1)) nu^2 + (n+m1)^2 - n1^2.
DeltaResult delta_analysis(const CharCoeffs& cc);

// ---------------------------------------------------------------------------
// Both delays

enum class CombinedVerdict { Preserved, SwitchPossible, Inconclusive };
std::string to_string(CombinedVerdict v);

struct CombinedResult {
  CombinedVerdict verdict = CombinedVerdict::Inconclusive;
  std::optional<double> nu;     // smallest positive root of Psi
  std::optional<double> theta;  // (1/nu) atan((m nu - nu^3)/(n - l nu^2))
  double psi_at_zero = 0.0;
  std::vector<Inequality> checks;
  std::string diagnostic;
};

/// Sum of squares of the real and imaginary parts of F(i nu) rearranged into a
/// function of nu alone, with theta = tau + delta.
double psi(const CharCoeffs& cc, double theta, double nu);

CombinedResult general_delay_analysis(const CharCoeffs& cc, double tau, double delta);

// ---------------------------------------------------------------------------
// Global results for f = x y, V = x, P = y

enum class GlobalVerdict { EndemicGAS, DiseaseFreeGAS, NotApplicable, Inconclusive };
std::string to_string(GlobalVerdict v);

struct GlobalResult {
  GlobalVerdict verdict = GlobalVerdict::NotApplicable;
  bool boundary = false;
  std::vector<Inequality> checks;
  std::string note;
};

GlobalResult global_verdict(const ModelSpec& model, const std::vector<Equilibrium>& equilibria);

}  // namespace sirdelay
