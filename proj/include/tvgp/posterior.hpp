#pragma once

#include <array>
#include <cstddef>
#include <string_view>
#include <vector>

#include "tvgp/covariance.hpp"
#include "tvgp/likelihood.hpp"
#include "tvgp/tensor.hpp"

namespace tvgp {

/// Which unknowns a chain samples.
enum class Scheme {
  TrainOnly,   // GP parameters from training data alone
  Joint,       // GP parameters and s_test from training + test data
  Predictive,  // s_test only, GP parameters pinned at training-run modes
};

std::string_view scheme_name(Scheme scheme);
/// Accepts "train-only", "joint", "predictive". Throws PreconditionError otherwise.
Scheme parse_scheme(std::string_view name);

enum class Param : std::size_t { S1, S2, Q11, Q22, Sigma11, Sigma22, Rho };
inline constexpr std::size_t kParamCount = 7;
inline constexpr std::array<std::string_view, kParamCount> kParamNames = {
    "s1", "s2", "q11", "q22", "sigma11", "sigma22", "rho"};

/// Index of `name` in kParamNames; throws PreconditionError when unknown.
std::size_t param_index(std::string_view name);

/// The GP covariance scalars learnt from training data.
struct GpScalars {
  double q11 = 1.0;
  double q22 = 1.0;
  double sigma11 = 1.0;
  double sigma22 = 1.0;
  double rho = 0.0;

  [[nodiscard]] SqeKernelParams kernel() const;
  [[nodiscard]] Sigma3Params sigma3() const;
};

/// All seven unknowns (s1, s2, q11, q22, sigma11, sigma22, rho) with the
/// subset a scheme samples marked active. Inactive entries are carried along
/// unchanged.
struct ParamVector {
  std::array<double, kParamCount> values{};
  std::array<bool, kParamCount> active{};

  static ParamVector for_scheme(Scheme scheme, const std::array<double, kParamCount>& values);

  double operator[](Param p) const { return values[static_cast<std::size_t>(p)]; }
  double& operator[](Param p) { return values[static_cast<std::size_t>(p)]; }

  [[nodiscard]] std::vector<std::size_t> active_indices() const;
  [[nodiscard]] std::size_t active_count() const;
  [[nodiscard]] bool matches(Scheme scheme) const;

  [[nodiscard]] Eigen::VectorXd s_test() const;
  [[nodiscard]] GpScalars gp() const;

  bool operator==(const ParamVector&) const = default;
};

struct Bounds {
  double lower;
  double upper;

  /// Open interval membership.
  [[nodiscard]] bool contains(double x) const { return x > lower && x < upper; }
  [[nodiscard]] double width() const { return upper - lower; }
};

enum class Sigma3Prior {
  /// 1/sigma on each diagonal entry, flat on rho.
  FlatLog,
  /// |Sigma3|^{-3/2} carried into (sigma11, sigma22, rho) coordinates with
  /// the Jacobian sqrt(sigma11 sigma22).
  JeffreysStyle,
};

std::string_view sigma3_prior_name(Sigma3Prior prior);
Sigma3Prior parse_sigma3_prior(std::string_view name);

struct PriorSpec {
  std::array<Bounds, 2> q_bounds{{{0.0, 1e6}, {0.0, 1e6}}};
  std::array<Bounds, 2> s_bounds{{{1.7, 2.3}, {0.0, 1.5707963267948966}}};
  Sigma3Prior sigma3_prior = Sigma3Prior::FlatLog;

  /// Throws PreconditionError unless lower < upper everywhere and q lower bounds are >= 0.
  void validate() const;
};

/// Sum of the log-priors of the active components; -infinity outside the support.
double log_prior(const ParamVector& p, const PriorSpec& spec);

/// Cell centres of an n1 x n2 lattice over the s_test prior box, one (s1, s2)
/// per row. Used to pick chain starting points; training inputs make poor
/// candidates because a duplicated input leaves the augmented covariance
/// near-singular.
Eigen::MatrixXd s_test_candidates(const PriorSpec& spec, std::size_t n1 = 32, std::size_t n2 = 64);

/// Training-data posterior over (q11, q22, sigma11, sigma22, rho). The mean
/// and empirical Sigma2 are computed once at construction.
class TrainingPosterior {
 public:
  TrainingPosterior(const DenseTensor& d, DesignPoints design, PriorSpec spec,
                    double relative_jitter = kDefaultRelativeJitter);

  double operator()(const ParamVector& p) const;
  [[nodiscard]] double log_likelihood(const ParamVector& p) const;

 private:
  CenteredData centered_;
  DesignPoints design_;
  PriorSpec spec_;
  double jitter_;
};

/// Joint posterior over s_test and the GP parameters given the augmented
/// tensor (training slices followed by the test slice along mode 0).
class JointPosterior {
 public:
  JointPosterior(const DenseTensor& d_star, DesignPoints design, PriorSpec spec,
                 double relative_jitter = kDefaultRelativeJitter);

  double operator()(const ParamVector& p) const;
  [[nodiscard]] double log_likelihood(const ParamVector& p) const;

 private:
  CenteredData centered_;
  DesignPoints design_;
  PriorSpec spec_;
  double jitter_;
};

/// Posterior predictive of s_test with the GP parameters held at `fixed_gp`.
class PredictivePosterior {
 public:
  PredictivePosterior(const DenseTensor& d_star, DesignPoints design, GpScalars fixed_gp,
                      PriorSpec spec, double relative_jitter = kDefaultRelativeJitter);

  double operator()(const ParamVector& p) const;
  [[nodiscard]] double log_likelihood(const ParamVector& p) const;

 private:
  CenteredData centered_;
  DesignPoints design_;
  GpScalars fixed_gp_;
  PriorSpec spec_;
  double jitter_;
};

double log_posterior_training(const ParamVector& p, const DenseTensor& d,
                              const DesignPoints& design, const PriorSpec& spec);
double log_posterior_joint(const ParamVector& p, const DenseTensor& d_star,
                           const DesignPoints& design, const PriorSpec& spec);
double log_posterior_predictive(const ParamVector& p, const DenseTensor& d_star,
                                const DesignPoints& design, const GpScalars& fixed_gp,
                                const PriorSpec& spec);

}  // namespace tvgp
