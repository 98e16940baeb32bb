#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nhlc/correlators.hpp"
#include "nhlc/model.hpp"
#include "nhlc/states.hpp"

namespace nhlc {

/// `steps` equally spaced points from start to stop inclusive.
struct TimeGrid {
  double start = 0.0;
  double stop = 5.0;
  std::size_t steps = 51;

  std::vector<double> values() const;
  double dt() const;
};

/// How the 3×3 Pauli pairs at (A, x) are reduced to one number.
enum class Aggregate { MeanAbs, SumAbs, AbsSum };

std::string to_string(Aggregate a);
Aggregate parse_aggregate(const std::string& s);

/// values(i, j) belongs to (times[i], sites[j]); NaN marks a cell that failed.
struct ScanGrid {
  std::vector<std::size_t> sites;
  std::vector<double> times;
  RealMatrix values;
  nlohmann::json meta;
  std::vector<std::string> errors;
};

/// One propagation pass yielding a grid for each requested correlator kind.
/// CC(O_A(t), O_B(0)) over O_A, O_B ∈ {σ^x, σ^y, σ^z}, aggregated per cell.
std::vector<ScanGrid> scan_cc_kinds(const QuasiHermitianModel& model, const StateKind& state,
                                    const std::vector<CcKind>& kinds, std::size_t a,
                                    const std::vector<std::size_t>& b_sites, const TimeGrid& grid,
                                    Aggregate aggregate, std::size_t workers = 1);

ScanGrid scan_cc(const QuasiHermitianModel& model, const StateKind& state, CcKind kind, std::size_t a,
                 const std::vector<std::size_t>& b_sites, const TimeGrid& grid, Aggregate aggregate,
                 std::size_t workers = 1);

/// I(A;x) on the normalized ρ(t); the x = A column holds the single-site entropy H(A).
ScanGrid scan_mi(const QuasiHermitianModel& model, const StateKind& state, std::size_t a,
                 const std::vector<std::size_t>& b_sites, const TimeGrid& grid, std::size_t workers = 1);

enum class OperatorPicture { Tilde, Heisenberg };

struct CommutatorGrids {
  ScanGrid normalized;    // mean ½‖[Õ_A(t), O_B]‖ / ‖Õ_A(t)‖
  ScanGrid unnormalized;  // mean ½‖[Õ_A(t), O_B]‖
};

CommutatorGrids scan_commutator_both(const QuasiHermitianModel& model, std::size_t a,
                                     const std::vector<std::size_t>& b_sites, const TimeGrid& grid,
                                     OperatorPicture picture = OperatorPicture::Tilde,
                                     std::size_t workers = 1);

ScanGrid scan_commutator(const QuasiHermitianModel& model, std::size_t a,
                         const std::vector<std::size_t>& b_sites, const TimeGrid& grid, bool normalize,
                         OperatorPicture picture = OperatorPicture::Tilde, std::size_t workers = 1);

struct Restriction {
  Matrix restricted;
  double distance = 0.0;
};

/// Tr_S[O]⊗I_S/Tr[I_S] for the sites S farther than l from `site`, and ‖O − that‖.
Restriction restrict_to_lightcone(const Matrix& o_t, std::size_t site, double l,
                                  const SubsystemShape& shape);

struct LrBoundParams {
  double c = 1.0;
  double v = 1.0;
  double xi = 1.0;
  double c_tilde = 1.0;
  double chi = 1.0;

  void validate() const;
  double chi_prime() const { return chi + 2.0 * xi; }
  double c_bar(double size_a, double size_b) const { return c_tilde + c * (size_a + size_b); }
};

struct BoundGeometry {
  double L = 1.0;        // distance between A and B
  double size_a = 1.0;   // |A|
  double size_b = 1.0;   // |B|
  double d_min = 2.0;    // min(d_A, d_B)
  double t = 0.0;
  double t2 = 0.0;
};

struct BoundExtras {
  double norm_hat_a = 1.0;     // ‖Ô_A‖
  double norm_hat_b = 1.0;     // ‖Ô_B‖
  double log_norm = 1.0;       // ‖log(kρ₀)‖₂
  double dyson_condition = 1.0;  // ‖S‖‖S⁻¹‖
  double cc_value = 1.0;       // |⟨Ô_A, Ô_B⟩_ηc| for entangling_time
};

enum class BoundKind { Lr, CcLr, CcLrUnequal, MetricCcLr, DeltaRhoLr, MiLr, CommutatorD1, EntanglingTime };

std::string to_string(BoundKind k);
BoundKind parse_bound_kind(const std::string& s);

/// Closed-form right-hand side of the selected bound (a time for EntanglingTime).
double eval_bound(BoundKind kind, const LrBoundParams& p, const BoundGeometry& g,
                  const BoundExtras& extras = {});

struct UnequalTimeTerms {
  double l = 0.0;
  double l_prime = 0.0;
  double total = 0.0;  // c̃e^{−(L−l−l′)/χ} + c|A|e^{−(l−vt)/ξ} + c|B|e^{−(l′−vt′)/ξ}
};

/// The three-term unequal-time estimate at the optimal radii.
UnequalTimeTerms cc_lr_unequal_terms(const LrBoundParams& p, const BoundGeometry& g);

/// Per site, the first grid time with value ≥ threshold (NaN cells never cross).
std::vector<std::optional<double>> extract_front(const ScanGrid& grid, double threshold);

/// Arrival times non-decreasing in |x − a|; a site that never crosses counts as +∞.
bool front_is_monotone(const ScanGrid& grid, const std::vector<std::optional<double>>& front,
                       std::size_t a);

struct LrFit {
  double c = 0.0;
  double v = 0.0;
  double xi = 0.0;
  std::size_t samples = 0;
};

/// Least squares of log(value) = log c − (|x − a| − v t)/ξ over cells above `floor`.
LrFit fit_lr_constants(const ScanGrid& grid, std::size_t a, double floor = 1e-12);

}  // namespace nhlc
