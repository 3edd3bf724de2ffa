#include "twinrrm/stage2.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "twinrrm/errors.hpp"
#include "twinrrm/fbl.hpp"
#include "twinrrm/numerics.hpp"

namespace twinrrm::stage2 {
namespace {

// Per-VUE constants of f_k and g_k, so the inner loop only evaluates Gamma(p).
class VueTerms {
 public:
  VueTerms(const EffectiveSinrModel& model, const Vue& vue, int users, double bandwidth)
      : precoder_(model.precoder),
        antennas_(model.antennas),
        total_power_(model.total_power),
        phi_(phi(model, vue, users)),
        bandwidth_(bandwidth),
        rate_(vue.rate),
        scale_(std::sqrt(bandwidth) * numerics::gaussian_q_inv(vue.reliability) *
               numerics::kLog2e) {}

  [[nodiscard]] double sinr(double p) const {
    if (precoder_ == Precoder::mf) {
      return antennas_ * p / (total_power_ - p + phi_);
    }
    return p * phi_;
  }

  [[nodiscard]] RatioParts parts(double p) const {
    const double gamma = sinr(p);
    const double inv = 1.0 / (1.0 + gamma);
    return {-scale_ * std::sqrt(1.0 - inv * inv), bandwidth_ * std::log2(1.0 + gamma) - rate_};
  }

  [[nodiscard]] double h(double p, double eta) const {
    const RatioParts rp = parts(p);
    return rp.numerator - eta * rp.denominator;
  }

 private:
  Precoder precoder_;
  double antennas_;
  double total_power_;
  double phi_;
  double bandwidth_;
  double rate_;
  double scale_;
};

std::vector<VueTerms> build_terms(std::span<const Vue> vues, const EffectiveSinrModel& model,
                                  double bandwidth) {
  if (vues.empty()) {
    throw DomainError("stage2: empty population");
  }
  if (!(bandwidth > 0.0)) {
    throw DomainError("stage2: bandwidth must be positive");
  }
  const int users = static_cast<int>(vues.size());
  model.validate(users);
  std::vector<VueTerms> terms;
  terms.reserve(vues.size());
  for (const Vue& v : vues) {
    v.validate();
    terms.emplace_back(model, v, users, bandwidth);
  }
  return terms;
}

void require_feasible(std::span<const VueTerms> terms, std::span<const double> powers,
                      const char* what) {
  for (std::size_t k = 0; k < terms.size(); ++k) {
    if (!(terms[k].parts(powers[k]).denominator > 0.0)) {
      std::ostringstream os;
      os << what << ": VUE " << k << " cannot meet its rate at power " << powers[k] << " W";
      throw InfeasibleRateError(os.str());
    }
  }
}

struct Extremes {
  std::size_t argmin = 0;
  std::size_t argmax = 0;
  int min_count = 0;
  int max_count = 0;
};

// Lowest index wins ties.
Extremes find_extremes(std::span<const double> h) {
  Extremes e;
  for (std::size_t k = 1; k < h.size(); ++k) {
    if (h[k] < h[e.argmin]) e.argmin = k;
    if (h[k] > h[e.argmax]) e.argmax = k;
  }
  for (double v : h) {
    e.min_count += v == h[e.argmin];
    e.max_count += v == h[e.argmax];
  }
  return e;
}

double spread_of(std::span<const double> h) {
  const auto [lo, hi] = std::minmax_element(h.begin(), h.end());
  return *hi - *lo;
}

// min_k g_k (f_k / g_k - eta). Equals min_k {f_k - eta g_k} algebraically; this
// form is exactly zero at the VUE that defined eta, so its sign is reliable.
struct RatioSummary {
  double min_ratio = std::numeric_limits<double>::infinity();
  double auxiliary = std::numeric_limits<double>::infinity();
  bool feasible = true;
};

RatioSummary summarize(std::span<const VueTerms> terms, std::span<const double> powers,
                       double eta) {
  RatioSummary s;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const RatioParts rp = terms[k].parts(powers[k]);
    if (!(rp.denominator > 0.0)) {
      s.feasible = false;
      s.auxiliary = -std::numeric_limits<double>::infinity();
      return s;
    }
    const double r = rp.ratio();
    s.min_ratio = std::min(s.min_ratio, r);
    s.auxiliary = std::min(s.auxiliary, rp.denominator * (r - eta));
  }
  return s;
}

EqualizerState equalize(std::span<const VueTerms> terms, double total_power, double eta,
                        const EqualizerOptions& options) {
  if (!(eta < 0.0)) {
    throw DomainError("equalize_maxmin: eta must be negative");
  }
  if (!(options.tolerance > 0.0)) {
    throw DomainError("equalize_maxmin: tolerance must be positive");
  }
  const std::size_t n = terms.size();
  const double mu0 =
      options.initial_step > 0.0 ? options.initial_step : total_power / (2.0 * static_cast<double>(n));
  if (!(mu0 > 0.0 && mu0 < total_power)) {
    throw DomainError("equalize_maxmin: initial step must lie in (0, P_B)");
  }

  EqualizerState st;
  st.powers.assign(n, total_power / static_cast<double>(n));
  require_feasible(terms, st.powers, "equalize_maxmin (equal power start)");
  st.h.resize(n);
  for (std::size_t k = 0; k < n; ++k) {
    st.h[k] = terms[k].h(st.powers[k], eta);
  }
  st.step = mu0;

  double spread = spread_of(st.h);
  const double floor = options.step_floor * total_power;
  while (spread > options.tolerance) {
    if (st.iterations >= options.max_iterations) {
      std::ostringstream os;
      os << "equalize_maxmin: spread " << spread << " above tolerance after " << st.iterations
         << " iterations";
      throw NonConvergenceError(os.str());
    }
    ++st.iterations;

    const Extremes ex = find_extremes(st.h);
    const std::size_t lo = ex.argmin;
    const std::size_t hi = ex.argmax;
    const double p_lo = st.powers[lo] + st.step;
    const double p_hi = st.powers[hi] - st.step;

    bool accept = false;
    double new_spread = spread;
    double h_lo = 0.0;
    double h_hi = 0.0;
    if (p_hi > 0.0) {
      h_lo = terms[lo].h(p_lo, eta);
      h_hi = terms[hi].h(p_hi, eta);
      double mx = std::max(h_lo, h_hi);
      double mn = std::min(h_lo, h_hi);
      for (std::size_t k = 0; k < n; ++k) {
        if (k != lo && k != hi) {
          mx = std::max(mx, st.h[k]);
          mn = std::min(mn, st.h[k]);
        }
      }
      new_spread = mx - mn;
      if (new_spread <= options.tolerance) {
        accept = true;
      } else {
        const bool tied = ex.min_count > 1 || ex.max_count > 1;
        const bool shrinks = new_spread < spread || (tied && new_spread == spread);
        accept = h_lo > st.h[lo] && h_hi < st.h[hi] && shrinks;
      }
    }

    if (accept) {
      st.powers[lo] = p_lo;
      st.powers[hi] = p_hi;
      st.h[lo] = h_lo;
      st.h[hi] = h_hi;
      spread = new_spread;
    } else {
      st.step *= 0.5;
    }
    if (options.record_trace) {
      const auto [mn, mx] = std::minmax_element(st.h.begin(), st.h.end());
      st.trace.push_back({st.iterations, *mx, *mn, st.step, accept});
    }
    if (!accept && st.step < floor) {
      st.degraded = true;
      break;
    }
  }
  return st;
}

}  // namespace

double EqualizerState::spread() const { return h.empty() ? 0.0 : spread_of(h); }

RatioParts ratio_parts(const EffectiveSinrModel& model, const Vue& vue, double power, int users,
                       double bandwidth) {
  if (!(power >= 0.0 && power <= model.total_power)) {
    throw DomainError("ratio_parts: power must lie in [0, P_B]");
  }
  if (!(bandwidth > 0.0)) {
    throw DomainError("ratio_parts: bandwidth must be positive");
  }
  const RatioParts rp = VueTerms(model, vue, users, bandwidth).parts(power);
  if (!(rp.denominator > 0.0)) {
    throw InfeasibleRateError("ratio_parts: B log2(1 + Gamma) does not exceed the target rate");
  }
  return rp;
}

double h_value(const EffectiveSinrModel& model, const Vue& vue, double power, int users,
               double bandwidth, double eta) {
  if (!(eta <= 0.0)) {
    throw DomainError("h_value: eta must be non-positive");
  }
  const RatioParts rp = ratio_parts(model, vue, power, users, bandwidth);
  return rp.numerator - eta * rp.denominator;
}

EqualizerState equalize_maxmin(std::span<const Vue> vues, const EffectiveSinrModel& model,
                               double bandwidth, double eta, const EqualizerOptions& options) {
  const auto terms = build_terms(vues, model, bandwidth);
  return equalize(terms, model.total_power, eta, options);
}

double auxiliary_value(std::span<const Vue> vues, const EffectiveSinrModel& model,
                       double bandwidth, double eta, const EqualizerOptions& options) {
  const auto terms = build_terms(vues, model, bandwidth);
  const EqualizerState st = equalize(terms, model.total_power, eta, options);
  return *std::min_element(st.h.begin(), st.h.end());
}

namespace {

void fill_latencies(AllocationResult& out, std::span<const Vue> vues,
                    const EffectiveSinrModel& model, double bandwidth) {
  const int users = static_cast<int>(vues.size());
  out.latencies.resize(vues.size());
  out.max_latency = 0.0;
  for (std::size_t k = 0; k < vues.size(); ++k) {
    // clamp rounding overshoot of sum(p) past P_B
    const double p = std::min(out.powers[k], model.total_power);
    out.latencies[k] = fbl::latency(model, vues[k], p, users, bandwidth);
    out.max_latency = std::max(out.max_latency, out.latencies[k]);
  }
}

}  // namespace

AllocationResult dinkelbach_allocate(std::span<const Vue> vues, const EffectiveSinrModel& model,
                                     double bandwidth, const DinkelbachOptions& options) {
  if (!(options.tolerance > 0.0)) {
    throw DomainError("dinkelbach_allocate: tolerance must be positive");
  }
  if (!(options.initial_eta < 0.0)) {
    throw DomainError("dinkelbach_allocate: initial eta must be negative");
  }
  const auto terms = build_terms(vues, model, bandwidth);
  const std::size_t n = terms.size();

  std::vector<double> previous(n, model.total_power / static_cast<double>(n));
  require_feasible(terms, previous, "dinkelbach_allocate (equal power start)");

  double eta = std::min(options.initial_eta, summarize(terms, previous, 0.0).min_ratio);
  std::vector<double> h_previous(n);
  for (std::size_t k = 0; k < n; ++k) {
    h_previous[k] = terms[k].h(previous[k], eta);
  }
  double previous_spread = spread_of(h_previous);

  AllocationResult out;
  for (int j = 0; j < options.max_outer_iterations; ++j) {
    EqualizerState st = equalize(terms, model.total_power, eta, options.inner);
    out.total_inner_iterations += st.iterations;
    out.degraded = out.degraded || st.degraded;

    const RatioSummary cand = summarize(terms, st.powers, eta);
    const RatioSummary prev = summarize(terms, previous, eta);
    std::vector<double> current;
    double spread = 0.0;
    double auxiliary = 0.0;
    if (cand.feasible && cand.auxiliary >= prev.auxiliary) {
      current = std::move(st.powers);
      spread = st.spread();
      auxiliary = cand.auxiliary;
    } else {
      // The equalizer did not beat the previous iterate at this eta.
      current = previous;
      spread = previous_spread;
      auxiliary = prev.auxiliary;
    }
    out.outer_trace.push_back({j, eta, auxiliary});
    if (options.inner.record_trace) {
      out.inner_traces.push_back(std::move(st.trace));
    }

    if (auxiliary <= options.tolerance) {
      out.powers = std::move(current);
      out.eta_star = summarize(terms, out.powers, eta).min_ratio;
      out.outer_iterations = j;
      out.final_spread = spread;
      fill_latencies(out, vues, model, bandwidth);
      return out;
    }
    eta = summarize(terms, current, eta).min_ratio;
    previous = std::move(current);
    previous_spread = spread;
  }
  throw NonConvergenceError("dinkelbach_allocate: F(eta) still above tolerance after " +
                            std::to_string(options.max_outer_iterations) + " outer iterations");
}

AllocationResult epa_allocate(std::span<const Vue> vues, const EffectiveSinrModel& model,
                              double bandwidth) {
  const auto terms = build_terms(vues, model, bandwidth);
  AllocationResult out;
  out.powers.assign(terms.size(), model.total_power / static_cast<double>(terms.size()));
  require_feasible(terms, out.powers, "epa_allocate");
  out.eta_star = summarize(terms, out.powers, 0.0).min_ratio;
  fill_latencies(out, vues, model, bandwidth);
  return out;
}

}  // namespace twinrrm::stage2
