#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "dwork/crystal.hpp"
#include "dwork/cyfam.hpp"
#include "json.hpp"

namespace dwork {

enum class CheckStatus { Pass, Fail, PrecisionLimited };
std::string status_name(CheckStatus s);

// One congruence check. The observed p-order is the minimum over every tested coefficient of
// the difference; a difference that vanishes at the working precision only bounds it below.
struct CongruenceReport {
  std::string id;
  nlohmann::json params = nlohmann::json::object();
  int target = 0;                        // modulus exponent
  std::optional<int> precision;          // working p-adic precision; empty for exact arithmetic
  int observed = kInfiniteValuation;     // min p-order seen
  std::string where;                     // first coefficient attaining the minimum
  CheckStatus status = CheckStatus::Pass;
  bool conjecture = false;               // reported, never asserted
  bool gating = true;                    // false for observations outside a theorem's range
  std::string note;
  double runtime_ms = 0;

  // observed - target, empty when every tested coefficient vanished.
  std::optional<int> excess() const;
  // Folds one coefficient's p-order into observed.
  void record(int valuation, const std::string& at);
  // Sets status from observed, target and precision.
  void finish();
};

nlohmann::json to_json(const CongruenceReport& r, bool with_runtime = false);
std::string reports_to_json(const std::vector<CongruenceReport>& reports, bool with_runtime = false);
std::string reports_to_junit(const std::vector<CongruenceReport>& reports);
// True iff every gating, non-conjecture report passed.
bool all_gating_pass(const std::vector<CongruenceReport>& reports);
bool any_precision_limited(const std::vector<CongruenceReport>& reports);

// Smallest t-degree that reaches the coefficient at t^(m p^s).
std::size_t min_dwork_degree(std::int64_t p, int s, int m);

// F(t) F_{m p^(s-1)}(t^sigma) = F_{m p^s}(t) F(t^sigma) mod p^s to t-degree Dt.
// truncation_shift perturbs the long truncation (negative control).
CongruenceReport verify_dwork(const FamilySpec& fam, std::int64_t p, int s, int m, const LiftSpec& lift,
                              std::size_t Dt, int truncation_shift = 0);
// The same identity modulo p^(2s), flagged as a conjecture.
CongruenceReport verify_super_conjecture(const FamilySpec& fam, std::int64_t p, int s, int m, std::size_t Dt,
                                         const LiftSpec& lift = {LiftKind::Excellent, {}});

// Closed Cartier formula for A/f^m against decimation of the cone expansion at the origin, for
// `trials` seeded random sparse f in two variables, exactly mod p^N up to ell-degree `bound`.
CongruenceReport verify_cartier_oracle(std::int64_t p, int N, long bound, int trials, std::uint64_t seed);

// Points {0..k-1}^2 at level k: the region whose level-two basis is the four monomials of the unit square.
RegionSpec half_open_square(int levels);
// Level-k Hasse-Witt data of 1 - x - y + (1 - t) x y with t^sigma = t^p.
HasseWittResult square_hasse_witt(std::int64_t p, int k, int N, std::size_t Dt);
// HW^(1) = (1); HW^(2) upper triangular with diagonal 1, -C, -C, -C sum_m binom(p-1, m)^2 (1-t)^m
// where C = binom(2p-2, p-1); L = 3 and hw^(2) = -(C/p)^3 t^(p-1) mod p.
std::vector<CongruenceReport> verify_square_hasse_witt(std::int64_t p, std::size_t Dt);

// alpha_{a,b}: coefficients of 1/(1 - x - y + 2xy) for a <= A, b <= B, mod p^N.
std::vector<std::vector<PadicInt>> square_coefficients(const PadicContext& ctx, long A, long B);
// a_{a,b}(t): coefficient of x^a y^b in 1/(1 - x - y + (1 - t) x y), a polynomial of degree min(a, b).
std::vector<BigInt> square_coefficient_poly(long a, long b);

// alpha at (kp^s, lp^s) versus (kp^(s-1), lp^(s-1)) for t = -1 and for generic t with t^sigma = t^p.
// For s = 1 also checks the lift t^sigma = (1+p) t^p with the logarithmic correction, and reports
// the opposite sign of that correction as an expected failure.
std::vector<CongruenceReport> verify_simple_example(std::int64_t p, int s, long k, long l);

// a_{p^s Q}(t) = lambda0 a_{p^(s-1) Q}(t^sigma) + lambda1 (theta a_{p^(s-1) Q})(t^sigma) mod p^(2s) (k = 2),
// or F(t^sigma) a_{p^s Q}(t) = F(t) a_{p^(s-1) Q}(t^sigma) mod p^s (k = 1).
CongruenceReport verify_cy_supercongruence(const FamilySpec& fam, std::int64_t p, int s, long Q,
                                           const LiftSpec& lift, std::size_t Dt, int k = 2);

// Diagonal coefficient of 1/((1-x1-x2)(1-x3-x4) - x1x2x3x4) at (N, N, N, N).
BigInt straub_diagonal(long N);
CongruenceReport verify_straub(std::int64_t p, int s, long n);

// Level-one and level-two Hasse-Witt data of 1 - t g in the symmetric basis, for the given t^sigma.
struct CyHasseWitt {
  HasseWittResult hw1, hw2;
};
CyHasseWitt cy_hasse_witt(const FamilySpec& fam, const PadicContext& ctx, const RationalSeries& t_sigma,
                          std::size_t Dt);

// hw1 = F_p, hw1 = F^(1-p), hw2 = W^(1-p) mod p; reports hw2 = p-truncation of W as an observation.
std::vector<CongruenceReport> verify_hw_congruences(const FamilySpec& fam, std::int64_t p, std::size_t Dt);
// Lambda = P HW^(2) P^-1 mod p^2 with P = [[1, -1], [0, 1]]. HW^(2) is taken in the basis
// 1/f^2, tg/f^2 and Lambda in 1/f, theta(1/f); the two are related by 1/f = 1/f^2 - tg/f^2.
CongruenceReport verify_lambda_hw(const FamilySpec& fam, std::int64_t p, const LiftSpec& lift, std::size_t Dt);

// Phi_p(t^sigma, t) = 0 mod (p^N, t^Dt) for hypercubic n = 2 and p in {3, 5}.
// naive_lift uses t^sigma = t^p (negative control).
CongruenceReport verify_modular_polynomial(std::int64_t p, std::size_t Dt, int N, bool naive_lift = false);
// Integer coefficients {X-degree, Y-degree, c} of Phi_p.
std::vector<std::array<long, 3>> modular_polynomial(std::int64_t p);

// t^sigma(t0) = t0 for t0 in {1/2, 1, -1} via q^sigma = q^p on t = q/(1+q^2).
std::vector<CongruenceReport> verify_fixed_point_n1(std::int64_t p);

// N_theta Lambda - Lambda N_theta^sigma - theta(Lambda) = 0 to degree D - p at precision N.
CongruenceReport verify_frobenius_structure(const FamilySpec& fam, std::int64_t p, const LiftSpec& lift,
                                            std::size_t D, int N, bool perturb = false);

// P_{p^s}(t) = F(t)/F(t^sigma) P_{p^(s-1)}(t^sigma) mod p^(2s) for hypercubic n, excellent lift.
CongruenceReport verify_pq(std::int64_t p, int s, int n, std::size_t Dt,
                           PqConvention conv = PqConvention::FallingFactors);

// q(t) reduces mod p^N to degree D and the Dieudonne-Dwork test passes on G/F with t^p.
CongruenceReport verify_mirror_integrality(const FamilySpec& fam, std::int64_t p, std::size_t D, int N);

// Excellent lift for hypercubic n = 1 against q^p/(1 + q^(2p)) composed with q(t), mod (p^N, t^(D+1)).
CongruenceReport verify_excellent_n1_closed_form(std::int64_t p, std::size_t D, int N);
// Excellent lift: lambda1 = 0 at precision N, lambda0(0) = 1, A(0) = B(0) = 0, W(0) = 1.
CongruenceReport verify_excellent_lift(const FamilySpec& fam, std::int64_t p, std::size_t D, int N);

// Katz filtration: theta^2(1/f) in F_2 for 1 - x - y + (1 - t) x y (theta_power = 2), or the
// basis vector theta(1/f) (theta_power = 1, expected to fail).
CongruenceReport verify_square_filtration(std::int64_t p, int N, long bound, int theta_power = 2);
// (theta^2 - B theta - A)(1/f) in F_2 for a catalog family; raw = true drops the B, A terms.
CongruenceReport verify_picard_fuchs_filtration(const FamilySpec& fam, std::int64_t p, int N, std::size_t Dt,
                                                int box, bool raw = false);

// Named grids: "smoke" (seconds) and "desk" (minutes).
std::vector<CongruenceReport> run_grid(const std::string& grid);

}  // namespace dwork
