#include "kcc/scip.hpp"

#include <algorithm>
#include <string>

#include "kcc/errors.hpp"

namespace kcc {

namespace {

void check_order(const std::vector<int>& order, int p) {
  std::vector<bool> seen(static_cast<std::size_t>(p), false);
  if (static_cast<int>(order.size()) != p) {
    throw ValidationError("construction order must list every variable once");
  }
  for (int j : order) {
    if (j < 0 || j >= p || seen[static_cast<std::size_t>(j)]) {
      throw ValidationError("construction order is not a permutation");
    }
    seen[static_cast<std::size_t>(j)] = true;
  }
}

}  // namespace

TabularKnockoffSampler::TabularKnockoffSampler(TabularDistribution reference,
                                               std::vector<int> order)
    : reference_(std::move(reference)), order_(std::move(order)) {}

const ConditionalKernel& TabularKnockoffSampler::exact_kernel() const {
  if (!has_exact_kernel()) {
    throw SizeError("kernel was not materialized (sampler is in sampling-only mode)");
  }
  return kernel_;
}

double TabularKnockoffSampler::kernel_density(std::size_t x, std::size_t xt) const {
  if (has_exact_kernel()) {
    if (!kernel_.row_valid[x]) throw SupportError("state is outside the reference support");
    return kernel_.at(x, xt);
  }
  double density = 1.0;
  stream_draw(x, nullptr, xt, &density);
  return density;
}

std::size_t TabularKnockoffSampler::sample(std::size_t x, Rng& rng) const {
  if (has_exact_kernel()) {
    if (!kernel_.row_valid[x]) throw SupportError("state is outside the reference support");
    return static_cast<std::size_t>(rng.categorical(kernel_.row(x), 1.0));
  }
  return stream_draw(x, &rng, 0, nullptr);
}

// Streams one sequential pass. With `rng` set, samples each knockoff digit;
// with `density` set, forces the digits of `forced_xt` and accumulates their
// conditional probabilities. The workspace h starts as the reference table
// and after step t holds, up to a common scale, the joint mass of
// (X = x', Xt_{j_1..j_t} = realized values) as a function of x'; the group
// sums over digit j_t are exactly the conditioning denominators.
std::size_t TabularKnockoffSampler::stream_draw(std::size_t x, Rng* rng, std::size_t forced_xt,
                                                double* density) const {
  const StateCodec& codec = reference_.codec();
  const std::size_t n = codec.num_states();
  if (!reference_.in_support(x)) {
    throw SupportError("state is outside the reference support");
  }

  std::vector<double> h(reference_.probs().begin(), reference_.probs().end());
  std::vector<double> weights;
  std::size_t xt = 0;

  for (int j : order_) {
    const std::size_t place = codec.place(j);
    const std::size_t k = static_cast<std::size_t>(codec.cardinality(j));
    const std::size_t block = place * k;

    // Conditional law of X_j given (X_{-j} = x_{-j}, earlier knockoff digits).
    const std::size_t x_base = x - static_cast<std::size_t>(codec.digit(x, j)) * place;
    weights.assign(k, 0.0);
    double total = 0.0;
    for (std::size_t d = 0; d < k; ++d) {
      weights[d] = h[x_base + d * place];
      total += weights[d];
    }
    if (total <= 0.0) throw SupportError("zero-mass conditioning event during streaming draw");

    std::size_t pick;
    if (rng != nullptr) {
      pick = static_cast<std::size_t>(rng->categorical(weights, total));
    } else {
      pick = static_cast<std::size_t>(codec.digit(forced_xt, j));
      *density *= weights[pick] / total;
    }
    xt += pick * place;

    // Fold the realized digit into the joint: h(x') *= q(pick | x'_{-j}, ...).
    double peak = 0.0;
    for (std::size_t hi = 0; hi < n / block; ++hi) {
      for (std::size_t lo = 0; lo < place; ++lo) {
        const std::size_t base = hi * block + lo;
        double den = 0.0;
        for (std::size_t d = 0; d < k; ++d) den += h[base + d * place];
        if (den <= 0.0) continue;
        const double numer = h[base + pick * place];
        const double q = numer / den;
        for (std::size_t d = 0; d < k; ++d) {
          h[base + d * place] *= q;
          peak = std::max(peak, h[base + d * place]);
        }
      }
    }
    // Rescale to dodge underflow on long chains; conditionals are ratios.
    if (peak > 0.0 && peak < 1e-280) {
      for (double& v : h) v /= peak;
    }
  }
  return xt;
}

TabularKnockoffSampler scip_build(TabularDistribution reference, std::vector<int> order,
                                  KernelMode mode) {
  const StateCodec codec = reference.codec();
  const int p = codec.num_vars();
  if (order.empty()) {
    order.resize(static_cast<std::size_t>(p));
    for (int j = 0; j < p; ++j) order[static_cast<std::size_t>(j)] = j;
  }
  check_order(order, p);

  TabularKnockoffSampler sampler(std::move(reference), std::move(order));
  if (mode == KernelMode::SamplingOnly) return sampler;

  const std::size_t n = codec.num_states();
  if (n > kEnumerationCap / n) {
    throw SizeError("pair table would exceed the enumeration cap of 2^24 entries; "
                    "build with KernelMode::SamplingOnly instead");
  }

  // cur holds the joint over (x, w) where w packs the knockoff digits in
  // processing order, earliest digit most significant. Step t extends w by
  // the digit of variable j_t, drawn from X_{j_t} | X_{-j_t}, W.
  std::vector<double> cur(sampler.reference_.probs().begin(), sampler.reference_.probs().end());
  std::vector<double> next;
  std::vector<double> den;
  std::size_t m = 1;  // states of w so far

  for (int j : sampler.order_) {
    const std::size_t place = codec.place(j);
    const std::size_t k = static_cast<std::size_t>(codec.cardinality(j));
    const std::size_t block = place * k;
    const std::size_t groups = n / k;

    den.assign(groups * m, 0.0);
    for (std::size_t xs = 0; xs < n; ++xs) {
      const std::size_t g = (xs / block) * place + (xs % place);
      const double* row = cur.data() + xs * m;
      double* acc = den.data() + g * m;
      for (std::size_t w = 0; w < m; ++w) acc[w] += row[w];
    }

    next.assign(n * m * k, 0.0);
    for (std::size_t xs = 0; xs < n; ++xs) {
      const std::size_t g = (xs / block) * place + (xs % place);
      const std::size_t digit0 = xs - static_cast<std::size_t>(codec.digit(xs, j)) * place;
      const double* row = cur.data() + xs * m;
      const double* dens = den.data() + g * m;
      double* out = next.data() + xs * m * k;
      for (std::size_t w = 0; w < m; ++w) {
        const double mass = row[w];
        if (mass <= 0.0) continue;
        const double inv = 1.0 / dens[w];  // dens[w] >= mass > 0
        for (std::size_t v = 0; v < k; ++v) {
          out[w * k + v] = mass * cur[(digit0 + v * place) * m + w] * inv;
        }
      }
    }
    cur.swap(next);
    m *= k;
  }

  // Reorder w (processing order) into the natural state index of xt.
  std::vector<std::size_t> w_to_state(n);
  {
    std::vector<std::size_t> radix(sampler.order_.size());
    for (std::size_t t = 0; t < sampler.order_.size(); ++t) {
      radix[t] = static_cast<std::size_t>(codec.cardinality(sampler.order_[t]));
    }
    for (std::size_t w = 0; w < n; ++w) {
      std::size_t rest = w;
      std::size_t state = 0;
      for (std::size_t t = sampler.order_.size(); t-- > 0;) {
        const std::size_t d = rest % radix[t];
        rest /= radix[t];
        state += d * codec.place(sampler.order_[t]);
      }
      w_to_state[w] = state;
    }
  }

  ConditionalKernel kernel;
  kernel.codec = codec;
  kernel.probs.assign(n * n, 0.0);
  kernel.row_valid.assign(n, 0);
  for (std::size_t xs = 0; xs < n; ++xs) {
    const double px = sampler.reference_.prob(xs);
    if (px <= 0.0) continue;
    kernel.row_valid[xs] = 1;
    const double* row = cur.data() + xs * n;
    double* out = kernel.probs.data() + xs * n;
    for (std::size_t w = 0; w < n; ++w) {
      out[w_to_state[w]] = row[w] / px;
    }
  }
  sampler.kernel_ = std::move(kernel);
  return sampler;
}

std::size_t scip_sample(const TabularKnockoffSampler& sampler, std::size_t x,
                        std::uint64_t seed) {
  Rng rng(seed);
  return sampler.sample(x, rng);
}

TabularDistribution knockoff_marginal(const TabularKnockoffSampler& sampler) {
  const ConditionalKernel& kernel = sampler.exact_kernel();
  const std::size_t n = kernel.num_states();
  std::vector<double> probs(n, 0.0);
  for (std::size_t xs = 0; xs < n; ++xs) {
    const double px = sampler.reference().prob(xs);
    if (px <= 0.0) continue;
    const double* row = kernel.probs.data() + xs * n;
    for (std::size_t xt = 0; xt < n; ++xt) probs[xt] += px * row[xt];
  }
  return TabularDistribution(kernel.codec, std::move(probs));
}

}  // namespace kcc
