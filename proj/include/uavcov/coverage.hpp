#pragma once

#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "uavcov/analytic.hpp"
#include "uavcov/inversion.hpp"
#include "uavcov/model.hpp"

namespace uavcov {

enum class CoverageMethod { AnalyticExact, AnalyticLowerBound, ClosedForm, MonteCarlo };
std::string to_string(CoverageMethod m);

struct CoverageResult {
  double value = 0.0;
  CoverageMethod method = CoverageMethod::AnalyticExact;
  ScenarioKind scenario = ScenarioKind::Apil;
  bool cellfree = false;
  double ci_low = 0.0;   // Monte Carlo only; equal to value otherwise
  double ci_high = 0.0;
  std::string diagnostics;
};

struct CoverageOptions {
  QuadratureSpec quad{};
  InversionSpec inversion{};  // node count and target; the method is chosen per transform
  DerivativeSpec derivative{};
};

// Law of D, the squared distance to the serving UAV in the attenuation-scaled process, and
// the interference it sees. Z = (I + sigma0) D^(alpha/2) / P with exponential interferer gains.
class ServingGeometry {
 public:
  virtual ~ServingGeometry() = default;
  // E_D[exp(-u sigma0 D^(alpha/2) / P - E(u, D))] for every u in the batch; E is the
  // conditional interference exponent.
  [[nodiscard]] virtual Eigen::VectorXcd laplace_z(const Eigen::VectorXcd& u) const = 0;
  // E_D[E(u, D)]
  [[nodiscard]] virtual Eigen::VectorXcd mean_interference_exponent(const Eigen::VectorXcd& u) const = 0;
  // E[D^a]
  [[nodiscard]] virtual double mean_distance_power(double a) const = 0;
  // CDF of D
  [[nodiscard]] virtual double distance_cdf(double d) const = 0;
};

std::unique_ptr<ServingGeometry> make_serving_geometry(const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                                       const QuadratureSpec& quad = {});

// Single-UAV association, finite N, Gamma(N,1) serving gain.
CoverageResult p_cov_apil(const NetworkConfig& cfg, const AngleDistribution& angle, const CoverageOptions& opt = {});
CoverageResult p_cov_apdl(const NetworkConfig& cfg, const AltitudeDistribution& alt, const CoverageOptions& opt = {});
// Jensen bounds on the serving distance.
CoverageResult p_cov_apil_lower_bound(const NetworkConfig& cfg, const AngleDistribution& angle,
                                      const CoverageOptions& opt = {});
CoverageResult p_cov_apdl_lower_bound(const NetworkConfig& cfg, const AltitudeDistribution& alt,
                                      const CoverageOptions& opt = {});
// Massive-array limit: unit serving gain, by inverting the transform of Z.
CoverageResult p_cov_apil_massive(const NetworkConfig& cfg, const AngleDistribution& angle,
                                  const CoverageOptions& opt = {});
CoverageResult p_cov_apdl_massive(const NetworkConfig& cfg, const AltitudeDistribution& alt,
                                  const CoverageOptions& opt = {});
// 1 / (1 + I_G(beta, 2/alpha)): noiseless, N = 1, APIL.
double p_cov_interference_limited(double beta, double alpha, const QuadratureSpec& quad = {});

// Cell-free coverage P[P sum G_i L_i |U_i|^-alpha >= beta sigma0].
CoverageResult p_cf_apil(const NetworkConfig& cfg, const AngleDistribution& angle, const CoverageOptions& opt = {});
CoverageResult p_cf_apdl(const NetworkConfig& cfg, const AltitudeDistribution& alt, const CoverageOptions& opt = {});
// alpha = 4 error-function forms.
CoverageResult p_cf_apil_closed_form(const NetworkConfig& cfg, const AngleDistribution& angle,
                                     const QuadratureSpec& quad = {});
// Requires H = h0 |X|, alpha = 4, ell = 1.
CoverageResult p_cf_apdl_closed_form(const NetworkConfig& cfg, const AltitudeDistribution& alt,
                                     const QuadratureSpec& quad = {});

// Dispatch on scenario and antenna count (infinite N goes to the massive-array limit).
CoverageResult coverage(const NetworkConfig& cfg, const ScenarioSpec& scenario, const CoverageOptions& opt = {});
CoverageResult coverage_lower_bound(const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                    const CoverageOptions& opt = {});
CoverageResult coverage_cellfree(const NetworkConfig& cfg, const ScenarioSpec& scenario,
                                 const CoverageOptions& opt = {});

}  // namespace uavcov
