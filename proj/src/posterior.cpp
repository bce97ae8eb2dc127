#include "tvgp/posterior.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "tvgp/errors.hpp"

namespace tvgp {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

constexpr std::array<std::array<bool, kParamCount>, 3> kMasks = {{
    {false, false, true, true, true, true, true},
    {true, true, true, true, true, true, true},
    {true, true, false, false, false, false, false},
}};

void require_scheme(const ParamVector& p, Scheme scheme) {
  if (!p.matches(scheme)) {
    throw PreconditionError("parameter vector mask does not match scheme " +
                            std::string(scheme_name(scheme)));
  }
}

void require_design(const DesignPoints& design, std::size_t slices, std::size_t extra) {
  if (static_cast<std::size_t>(design.rows()) + extra != slices) {
    throw ShapeError("data has " + std::to_string(slices) + " design-mode slices but " +
                     std::to_string(design.rows()) + " design points were given");
  }
}

}  // namespace

std::string_view scheme_name(Scheme scheme) {
  switch (scheme) {
    case Scheme::TrainOnly: return "train-only";
    case Scheme::Joint: return "joint";
    case Scheme::Predictive: return "predictive";
  }
  return "unknown";
}

Scheme parse_scheme(std::string_view name) {
  if (name == "train-only") return Scheme::TrainOnly;
  if (name == "joint") return Scheme::Joint;
  if (name == "predictive") return Scheme::Predictive;
  throw PreconditionError("unknown scheme '" + std::string(name) +
                          "' (expected train-only, joint or predictive)");
}

std::size_t param_index(std::string_view name) {
  const auto it = std::find(kParamNames.begin(), kParamNames.end(), name);
  if (it == kParamNames.end()) {
    throw PreconditionError("unknown parameter name '" + std::string(name) + "'");
  }
  return static_cast<std::size_t>(it - kParamNames.begin());
}

SqeKernelParams GpScalars::kernel() const { return {Eigen::Vector2d(q11, q22)}; }
Sigma3Params GpScalars::sigma3() const { return {sigma11, sigma22, rho}; }

ParamVector ParamVector::for_scheme(Scheme scheme,
                                    const std::array<double, kParamCount>& values) {
  return {values, kMasks[static_cast<std::size_t>(scheme)]};
}

std::vector<std::size_t> ParamVector::active_indices() const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < kParamCount; ++i) {
    if (active[i]) out.push_back(i);
  }
  return out;
}

std::size_t ParamVector::active_count() const {
  return static_cast<std::size_t>(std::count(active.begin(), active.end(), true));
}

bool ParamVector::matches(Scheme scheme) const {
  return active == kMasks[static_cast<std::size_t>(scheme)];
}

Eigen::VectorXd ParamVector::s_test() const {
  return Eigen::Vector2d((*this)[Param::S1], (*this)[Param::S2]);
}

GpScalars ParamVector::gp() const {
  return {(*this)[Param::Q11], (*this)[Param::Q22], (*this)[Param::Sigma11],
          (*this)[Param::Sigma22], (*this)[Param::Rho]};
}

std::string_view sigma3_prior_name(Sigma3Prior prior) {
  return prior == Sigma3Prior::FlatLog ? "flat-log" : "jeffreys-style";
}

Sigma3Prior parse_sigma3_prior(std::string_view name) {
  if (name == "flat-log") return Sigma3Prior::FlatLog;
  if (name == "jeffreys-style") return Sigma3Prior::JeffreysStyle;
  throw PreconditionError("unknown Sigma3 prior '" + std::string(name) +
                          "' (expected flat-log or jeffreys-style)");
}

void PriorSpec::validate() const {
  for (const auto& b : q_bounds) {
    if (!(b.lower >= 0.0) || !(b.lower < b.upper)) {
      throw PreconditionError("q prior bounds must satisfy 0 <= lower < upper");
    }
  }
  for (const auto& b : s_bounds) {
    if (!(b.lower < b.upper)) throw PreconditionError("s prior bounds must satisfy lower < upper");
  }
}

Eigen::MatrixXd s_test_candidates(const PriorSpec& spec, std::size_t n1, std::size_t n2) {
  if (n1 == 0 || n2 == 0) throw PreconditionError("s_test_candidates: empty lattice");
  const Bounds& b1 = spec.s_bounds[0];
  const Bounds& b2 = spec.s_bounds[1];
  Eigen::MatrixXd out(static_cast<Eigen::Index>(n1 * n2), 2);
  Eigen::Index row = 0;
  for (std::size_t i = 0; i < n1; ++i) {
    for (std::size_t j = 0; j < n2; ++j, ++row) {
      out(row, 0) = b1.lower + b1.width() * (static_cast<double>(i) + 0.5) / static_cast<double>(n1);
      out(row, 1) = b2.lower + b2.width() * (static_cast<double>(j) + 0.5) / static_cast<double>(n2);
    }
  }
  return out;
}

double log_prior(const ParamVector& p, const PriorSpec& spec) {
  double lp = 0.0;
  const auto is_active = [&](Param k) { return p.active[static_cast<std::size_t>(k)]; };

  for (std::size_t i = 0; i < 2; ++i) {
    const auto s = static_cast<Param>(static_cast<std::size_t>(Param::S1) + i);
    if (is_active(s)) {
      if (!spec.s_bounds[i].contains(p[s])) return kNegInf;
      lp -= std::log(spec.s_bounds[i].width());
    }
    const auto q = static_cast<Param>(static_cast<std::size_t>(Param::Q11) + i);
    if (is_active(q)) {
      if (!spec.q_bounds[i].contains(p[q])) return kNegInf;
      lp -= std::log(spec.q_bounds[i].width());
    }
    const auto sigma = static_cast<Param>(static_cast<std::size_t>(Param::Sigma11) + i);
    if (is_active(sigma)) {
      if (!(p[sigma] > 0.0) || !std::isfinite(p[sigma])) return kNegInf;
      lp -= std::log(p[sigma]);
    }
  }
  if (is_active(Param::Rho)) {
    const double rho = p[Param::Rho];
    if (!(std::abs(rho) < 1.0)) return kNegInf;
    lp -= std::log(2.0);
    if (spec.sigma3_prior == Sigma3Prior::JeffreysStyle) lp -= 1.5 * std::log1p(-rho * rho);
  }
  return lp;
}

TrainingPosterior::TrainingPosterior(const DenseTensor& d, DesignPoints design, PriorSpec spec,
                                     double relative_jitter)
    : centered_(CenteredData::from(d, relative_jitter)),
      design_(std::move(design)),
      spec_(spec),
      jitter_(relative_jitter) {
  require_design(design_, d.dim(0), 0);
  spec_.validate();
}

double TrainingPosterior::log_likelihood(const ParamVector& p) const {
  const GpScalars gp = p.gp();
  const std::vector<SpdMatrix> factors{build_sqe_matrix(design_, gp.kernel(), jitter_),
                                       centered_.sigma2, build_sigma3(gp.sigma3())};
  return tensor_normal_log_density(centered_.residual, factors);
}

double TrainingPosterior::operator()(const ParamVector& p) const {
  require_scheme(p, Scheme::TrainOnly);
  const double lp = log_prior(p, spec_);
  if (lp == kNegInf) return kNegInf;
  return lp + log_likelihood(p);
}

JointPosterior::JointPosterior(const DenseTensor& d_star, DesignPoints design, PriorSpec spec,
                               double relative_jitter)
    : centered_(CenteredData::from(d_star, relative_jitter)),
      design_(std::move(design)),
      spec_(spec),
      jitter_(relative_jitter) {
  require_design(design_, d_star.dim(0), 1);
  spec_.validate();
}

double JointPosterior::log_likelihood(const ParamVector& p) const {
  const GpScalars gp = p.gp();
  return log_likelihood_augmented(centered_, p.s_test(), design_, gp.kernel(), gp.sigma3(),
                                  jitter_);
}

double JointPosterior::operator()(const ParamVector& p) const {
  require_scheme(p, Scheme::Joint);
  const double lp = log_prior(p, spec_);
  if (lp == kNegInf) return kNegInf;
  return lp + log_likelihood(p);
}

PredictivePosterior::PredictivePosterior(const DenseTensor& d_star, DesignPoints design,
                                         GpScalars fixed_gp, PriorSpec spec,
                                         double relative_jitter)
    : centered_(CenteredData::from(d_star, relative_jitter)),
      design_(std::move(design)),
      fixed_gp_(fixed_gp),
      spec_(spec),
      jitter_(relative_jitter) {
  require_design(design_, d_star.dim(0), 1);
  spec_.validate();
  fixed_gp_.kernel().validate(2);
  fixed_gp_.sigma3().validate();
}

double PredictivePosterior::log_likelihood(const ParamVector& p) const {
  return log_likelihood_augmented(centered_, p.s_test(), design_, fixed_gp_.kernel(),
                                  fixed_gp_.sigma3(), jitter_);
}

double PredictivePosterior::operator()(const ParamVector& p) const {
  require_scheme(p, Scheme::Predictive);
  const double lp = log_prior(p, spec_);
  if (lp == kNegInf) return kNegInf;
  return lp + log_likelihood(p);
}

double log_posterior_training(const ParamVector& p, const DenseTensor& d,
                              const DesignPoints& design, const PriorSpec& spec) {
  require_scheme(p, Scheme::TrainOnly);
  if (log_prior(p, spec) == kNegInf) return kNegInf;
  return TrainingPosterior(d, design, spec)(p);
}

double log_posterior_joint(const ParamVector& p, const DenseTensor& d_star,
                           const DesignPoints& design, const PriorSpec& spec) {
  require_scheme(p, Scheme::Joint);
  if (log_prior(p, spec) == kNegInf) return kNegInf;
  return JointPosterior(d_star, design, spec)(p);
}

double log_posterior_predictive(const ParamVector& p, const DenseTensor& d_star,
                                const DesignPoints& design, const GpScalars& fixed_gp,
                                const PriorSpec& spec) {
  require_scheme(p, Scheme::Predictive);
  if (log_prior(p, spec) == kNegInf) return kNegInf;
  return PredictivePosterior(d_star, design, fixed_gp, spec)(p);
}

}  // namespace tvgp
